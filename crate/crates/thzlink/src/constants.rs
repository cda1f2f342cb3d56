//! Physical constants and reference conditions shared across the crate.
//!
//! CODATA 2018 values; `C`, `H` and `K_B` are exact by SI definition.

/// Speed of light in vacuum, m/s.
pub const C: f64 = 2.997_924_58e8;

/// Speed of light in vacuum, cm/s. Converts wavenumbers (cm^-1) to Hz.
pub const C_CM: f64 = 2.997_924_58e10;

/// Planck constant, J s.
pub const H: f64 = 6.626_070_15e-34;

/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// Avogadro constant, 1/mol.
pub const N_A: f64 = 6.022_140_76e23;

/// Second radiation constant h c / k_B in cm K, used with wavenumbers.
pub const C2_CM_K: f64 = H * C_CM / K_B;

/// Molar mass of water, g/mol.
pub const M_H2O: f64 = 18.010_565;

/// Spectroscopic reference temperature, K.
pub const T_REF: f64 = 296.0;

/// Reference pressure, Pa (one standard atmosphere).
pub const P_REF: f64 = 101_325.0;

/// Dry-air O2 mixing ratio by volume.
pub const O2_MIXING_RATIO: f64 = 0.209_46;

/// Converts a power absorption coefficient in 1/cm to dB/km.
///
/// 10 log10(e) per neper, 1e5 cm per km.
pub const NP_PER_CM_TO_DB_PER_KM: f64 = 4.342_944_819_032_518e5;
