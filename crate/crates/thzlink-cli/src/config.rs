//! Run configuration: defaults, the optional TOML file, and flag overrides.
//!
//! A run is described by one [`RunConfig`]. Loading starts from built-in
//! defaults, merges the `--config` file over them, then applies command-line
//! flags on top, so flags always win. The fully resolved value is echoed
//! next to the outputs, which makes any run reproducible from its artifacts
//! alone and doubles as the cache key input.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thzlink::{CatalogFormat, RanPulseParams, SecurityScenario, Scheme, TsOokRegime};

use crate::error::{CliError, Result};

/// Everything a command needs to know, defaults materialized.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub catalog: CatalogSection,
    pub atmosphere: AtmosphereSection,
    /// Evaluation grid for spectrum commands. Absent in a config file means
    /// the invoked command fills in its own default band.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    pub output: OutputSection,
    pub k_spectrum: KSpectrumSection,
    pub loss: LossSection,
    pub windows: WindowsSection,
    pub weather: WeatherSection,
    pub altitude_sweep: AltitudeSweepSection,
    pub secrecy: SecrecySection,
    pub tsook: TsookSection,
}

impl RunConfig {
    /// Loads the file at `path` over the defaults.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text)
            .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))
    }

    /// Serializes the resolved configuration for the output-directory echo.
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Fills the grid section with `fallback` when the file and the flags
    /// left it unset, so the echoed config is fully explicit.
    pub fn materialize_grid(&mut self, fallback: GridSection) {
        self.grid.get_or_insert(fallback);
    }

    /// The materialized grid. Call after [`RunConfig::materialize_grid`].
    pub fn grid_section(&self) -> &GridSection {
        self.grid.as_ref().expect("grid materialized before use")
    }
}

/// Line catalog selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CatalogSection {
    /// Path to a line list; empty selects the bundled catalog.
    pub path: String,
    pub format: CatalogFormatName,
}

impl Default for CatalogSection {
    fn default() -> Self {
        Self {
            path: String::new(),
            format: CatalogFormatName::BuiltinTable,
        }
    }
}

/// Config-file spelling of the catalog input format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogFormatName {
    BuiltinTable,
    HitranPar,
}

impl From<CatalogFormatName> for CatalogFormat {
    fn from(name: CatalogFormatName) -> Self {
        match name {
            CatalogFormatName::BuiltinTable => CatalogFormat::BuiltinTable,
            CatalogFormatName::HitranPar => CatalogFormat::HitranPar,
        }
    }
}

/// Homogeneous atmosphere used by the sea-level commands. Commands that
/// sweep altitude use the bundled profile instead.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtmosphereSection {
    pub temperature_k: f64,
    pub pressure_pa: f64,
    pub water_vapor_g_m3: f64,
    pub o2_mixing_ratio: f64,
}

impl Default for AtmosphereSection {
    fn default() -> Self {
        Self {
            temperature_k: 290.0,
            pressure_pa: 101325.0,
            water_vapor_g_m3: 7.5,
            o2_mixing_ratio: 0.20946,
        }
    }
}

/// Uniform evaluation grid, `n_points` nodes from `f_start_hz` to
/// `f_stop_hz` inclusive.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub f_start_hz: f64,
    pub f_stop_hz: f64,
    pub n_points: usize,
}

impl GridSection {
    pub const fn new(f_start_hz: f64, f_stop_hz: f64, n_points: usize) -> Self {
        Self {
            f_start_hz,
            f_stop_hz,
            n_points,
        }
    }

    /// Parses the `--grid` flag form `f_start:f_stop:n`.
    pub fn parse_flag(text: &str) -> Result<Self> {
        let bad = || CliError::usage(format!("--grid '{text}': expected f_start:f_stop:n"));
        let mut parts = text.split(':');
        let mut field = || parts.next().filter(|p| !p.is_empty()).ok_or_else(bad);
        let f_start_hz = field()?.parse::<f64>().map_err(|_| bad())?;
        let f_stop_hz = field()?.parse::<f64>().map_err(|_| bad())?;
        let n_points = field()?.parse::<usize>().map_err(|_| bad())?;
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(Self::new(f_start_hz, f_stop_hz, n_points))
    }
}

/// Where and what to write.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
    /// Also render an SVG plot next to the CSV.
    pub svg: bool,
    /// Reuse cached artifacts when the resolved inputs are unchanged.
    pub cache: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: "out".into(),
            svg: false,
            cache: true,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KSpectrumSection {
    /// Altitudes to evaluate, km above sea level.
    pub altitudes_km: Vec<f64>,
}

impl Default for KSpectrumSection {
    fn default() -> Self {
        Self {
            altitudes_km: vec![0.0, 10.0, 20.0],
        }
    }
}

/// Link-budget table parameters. The radio defaults mirror the bundled
/// security calibration so `loss` describes the same hardware as
/// `secrecy-sweep`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LossSection {
    pub f_c_hz: f64,
    pub bandwidth_hz: f64,
    pub tx_power_w: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    /// Compact weather spec: `clear`, `rain:R`, `fog:V` or `sand:D`.
    pub weather: String,
    pub distances_m: Vec<f64>,
}

impl Default for LossSection {
    fn default() -> Self {
        let radio = calibrated_scenario();
        Self {
            f_c_hz: radio.f_c_hz,
            bandwidth_hz: radio.bandwidth_hz,
            tx_power_w: radio.tx_power_w,
            tx_gain_dbi: radio.tx_gain_dbi,
            rx_gain_dbi: radio.rx_gain_dbi,
            weather: "clear".into(),
            distances_m: vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowsSection {
    pub distance_m: f64,
    /// Path-loss ceiling defining a window, dB over the whole link.
    pub threshold_db: f64,
    /// Windows narrower than this are dropped, Hz.
    pub min_bandwidth_hz: f64,
}

impl Default for WindowsSection {
    fn default() -> Self {
        Self {
            distance_m: 10.0,
            threshold_db: 3.0,
            min_bandwidth_hz: 1e9,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeatherSection {
    /// Conditions to tabulate, compact `kind:value` specs.
    pub conditions: Vec<String>,
}

impl Default for WeatherSection {
    fn default() -> Self {
        Self {
            conditions: vec![
                "clear".into(),
                "rain:5".into(),
                "rain:25".into(),
                "fog:100".into(),
                "sand:0.01".into(),
            ],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AltitudeSweepSection {
    /// Frequencies to track across altitude, Hz.
    pub frequencies_hz: Vec<f64>,
    pub altitude_start_km: f64,
    pub altitude_stop_km: f64,
    pub altitude_step_km: f64,
}

impl Default for AltitudeSweepSection {
    fn default() -> Self {
        Self {
            frequencies_hz: vec![0.35e12, 0.667e12, 1.03e12],
            altitude_start_km: 0.0,
            altitude_stop_km: 20.0,
            altitude_step_km: 0.5,
        }
    }
}

/// Secrecy sweep parameters. Radio and protection defaults come from the
/// bundled calibration profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SecrecySection {
    pub d_b_m: f64,
    pub d_e_start_m: f64,
    pub d_e_stop_m: f64,
    pub d_e_step_m: f64,
    pub schemes: Vec<String>,
    pub f_c_hz: f64,
    pub bandwidth_hz: f64,
    pub tx_power_w: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub temperature_k: f64,
    pub snr_min: f64,
    pub snr_covert: f64,
    pub an_power_w: f64,
    pub an_fraction: f64,
    pub ran: RanSection,
}

impl Default for SecrecySection {
    fn default() -> Self {
        let s = calibrated_scenario();
        Self {
            d_b_m: s.d_b_m,
            d_e_start_m: 2.0,
            d_e_stop_m: 50.0,
            d_e_step_m: 1.0,
            schemes: Scheme::ALL.iter().map(|s| s.name().into()).collect(),
            f_c_hz: s.f_c_hz,
            bandwidth_hz: s.bandwidth_hz,
            tx_power_w: s.tx_power_w,
            tx_gain_dbi: s.tx_gain_dbi,
            rx_gain_dbi: s.rx_gain_dbi,
            temperature_k: s.temperature_k,
            snr_min: s.snr_min,
            snr_covert: s.snr_covert,
            an_power_w: s.an_power_w,
            an_fraction: s.an_fraction,
            ran: RanSection::default(),
        }
    }
}

impl SecrecySection {
    /// The scenario these settings describe, before any eavesdropper or
    /// scheme is chosen.
    pub fn scenario(&self) -> SecurityScenario {
        SecurityScenario {
            d_b_m: self.d_b_m,
            d_e_m: self.d_e_start_m.max(1.0),
            f_c_hz: self.f_c_hz,
            bandwidth_hz: self.bandwidth_hz,
            tx_power_w: self.tx_power_w,
            tx_gain_dbi: self.tx_gain_dbi,
            rx_gain_dbi: self.rx_gain_dbi,
            temperature_k: self.temperature_k,
            snr_min: self.snr_min,
            snr_covert: self.snr_covert,
            an_power_w: self.an_power_w,
            an_fraction: self.an_fraction,
            scheme: Scheme::Baseline,
        }
    }
}

/// Receiver-noise pulse timing for the ran scheme.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RanSection {
    pub rms_width_s: f64,
    pub sample_interval_s: f64,
    pub n_samples: usize,
    pub an_slot_offset_s: f64,
    pub guard_s: f64,
    pub symbol_period_s: f64,
}

impl Default for RanSection {
    fn default() -> Self {
        let p = RanPulseParams::calibrated().expect("bundled calibration parses");
        Self {
            rms_width_s: p.rms_width_s,
            sample_interval_s: p.sample_interval_s,
            n_samples: p.n_samples,
            an_slot_offset_s: p.an_slot_offset_s,
            guard_s: p.guard_s,
            symbol_period_s: p.symbol_period_s,
        }
    }
}

impl RanSection {
    pub fn params(&self) -> RanPulseParams {
        RanPulseParams {
            rms_width_s: self.rms_width_s,
            sample_interval_s: self.sample_interval_s,
            n_samples: self.n_samples,
            an_slot_offset_s: self.an_slot_offset_s,
            guard_s: self.guard_s,
            symbol_period_s: self.symbol_period_s,
        }
    }
}

/// TS-OOK detection regime, defaulting to the bundled calibration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TsookSection {
    pub pulse_energy: f64,
    pub silence_noise: f64,
    pub pulse_noise: f64,
    pub spreading_factor: f64,
}

impl Default for TsookSection {
    fn default() -> Self {
        let r = TsOokRegime::calibrated().expect("bundled calibration parses");
        Self {
            pulse_energy: r.pulse_energy,
            silence_noise: r.silence_noise,
            pulse_noise: r.pulse_noise,
            spreading_factor: r.spreading_factor,
        }
    }
}

impl TsookSection {
    pub fn regime(&self) -> TsOokRegime {
        TsOokRegime {
            pulse_energy: self.pulse_energy,
            silence_noise: self.silence_noise,
            pulse_noise: self.pulse_noise,
            spreading_factor: self.spreading_factor,
        }
    }
}

fn calibrated_scenario() -> SecurityScenario {
    SecurityScenario::calibrated().expect("bundled calibration parses")
}
