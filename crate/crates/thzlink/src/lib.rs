//! Terahertz link modeling: molecular absorption, channel budgets, spectral
//! windows, physical-layer security schemes and nanoscale modulation.
//!
//! The crate is organized as a pipeline. [`catalog`] loads spectroscopic line
//! data and describes the atmosphere along a link. [`absorption`] turns both
//! into an absorption coefficient spectrum k(f) in dB/km. [`channel`] combines
//! k(f) with free-space spreading into link budgets, noise terms and pulse
//! propagation. [`windows`], [`security`] and [`nano`] answer the higher-level
//! questions: where are the usable transmission windows, what secrecy rate do
//! the distance-adaptive schemes achieve, and how should a femtosecond-pulse
//! on-off-keying source be biased.
//!
//! All frequencies are Hz, distances are meters unless a name says otherwise
//! (`_km`, `_cm`), powers are watts, and absorption coefficients are dB/km.

// `!(x > 0.0)` in validations also rejects NaN, which `x <= 0.0` would accept
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod absorption;
pub mod calibration;
pub mod catalog;
pub mod channel;
pub mod constants;
pub mod error;
pub mod grid;
pub mod nano;
pub mod security;
pub mod windows;

pub use absorption::{
    absorption_at, absorption_coefficient, absorption_coefficient_with, absorption_loss_db,
    catalog_band_for, transmittance, AbsorptionSpectrum, Engine,
};
pub use catalog::{
    builtin_catalog, default_altitude_profile, parse_line_catalog, saturation_vapor_density,
    AltitudeProfile, AtmosphereState, CatalogFormat, LineCatalog, Species, SpectralLine,
    WeatherCondition, WeatherTable,
};
pub use channel::{
    absorption_noise_power, capacity_bps, channel_transfer_function, propagate_pulse,
    slant_absorption_db, slant_path_integral, spreading_loss_db, LinkBudget, LinkGeometry, Pulse,
    TransferFunction,
};
pub use error::{Result, ThzError};
pub use grid::FrequencyGrid;
pub use num_complex::Complex64;
pub use nano::{optimize_source, symbol_snr, ts_ook_capacity, TsOokOptimum, TsOokRegime};
pub use security::{
    apm_select_frequency, baseline_secrecy, ran_secrecy, secrecy_rate, sweep_eavesdropper,
    tan_secrecy, RanPulseParams, Scheme, SecrecyResult, SecurityScenario,
};
pub use windows::{adaptive_band, find_windows, SpectralWindow};

/// Formats a value in scientific notation with nine significant digits.
///
/// Every CSV writer in the crate and the CLI uses this one formatter so that
/// identical runs produce byte-identical files.
pub fn fmt_sci(x: f64) -> String {
    format!("{x:.8e}")
}
