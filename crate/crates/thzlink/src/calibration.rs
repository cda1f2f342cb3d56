//! Checked-in operating point for the secrecy and nanonetwork models.
//!
//! The numbers live in a small key-value data file so they can be reviewed
//! and adjusted without touching code. Each model type gets a `calibrated()`
//! constructor returning the tuned values; the CLI uses them as defaults and
//! the acceptance checks pin their behavior.

use std::collections::BTreeMap;

use crate::error::{Result, ThzError};
use crate::nano::TsOokRegime;
use crate::security::{RanPulseParams, Scheme, SecurityScenario};

const CALIBRATION_TABLE: &str = include_str!("../data/calibration.txt");
const CALIBRATION_NAME: &str = "calibration.txt";

fn parse_table() -> Result<BTreeMap<&'static str, f64>> {
    let mut table = BTreeMap::new();
    for (i, raw) in CALIBRATION_TABLE.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let key = parts.next().unwrap();
        let value = parts.next().ok_or_else(|| ThzError::DataFile {
            name: CALIBRATION_NAME.into(),
            line: i + 1,
            message: format!("key '{key}' has no value"),
        })?;
        if parts.next().is_some() {
            return Err(ThzError::DataFile {
                name: CALIBRATION_NAME.into(),
                line: i + 1,
                message: format!("trailing fields after '{key} {value}'"),
            });
        }
        let value: f64 = value.parse().map_err(|_| ThzError::DataFile {
            name: CALIBRATION_NAME.into(),
            line: i + 1,
            message: format!("'{value}' is not a number"),
        })?;
        if table.insert(key, value).is_some() {
            return Err(ThzError::DataFile {
                name: CALIBRATION_NAME.into(),
                line: i + 1,
                message: format!("duplicate key '{key}'"),
            });
        }
    }
    Ok(table)
}

fn lookup(table: &BTreeMap<&'static str, f64>, key: &str) -> Result<f64> {
    table.get(key).copied().ok_or_else(|| ThzError::DataFile {
        name: CALIBRATION_NAME.into(),
        line: 0,
        message: format!("missing key '{key}'"),
    })
}

impl SecurityScenario {
    /// The checked-in secrecy operating point, with a baseline scheme and
    /// the eavesdropper placed at twice the legitimate distance.
    pub fn calibrated() -> Result<Self> {
        let t = parse_table()?;
        let d_b_m = lookup(&t, "sec.d_b_m")?;
        let scenario = SecurityScenario {
            d_b_m,
            d_e_m: 2.0 * d_b_m,
            f_c_hz: lookup(&t, "sec.f_c_hz")?,
            bandwidth_hz: lookup(&t, "sec.bandwidth_hz")?,
            tx_power_w: lookup(&t, "sec.tx_power_w")?,
            tx_gain_dbi: lookup(&t, "sec.tx_gain_dbi")?,
            rx_gain_dbi: lookup(&t, "sec.rx_gain_dbi")?,
            temperature_k: lookup(&t, "sec.temperature_k")?,
            snr_min: lookup(&t, "sec.snr_min")?,
            snr_covert: lookup(&t, "sec.snr_covert")?,
            an_power_w: lookup(&t, "sec.an_power_w")?,
            an_fraction: lookup(&t, "sec.an_fraction")?,
            scheme: Scheme::Baseline,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

impl RanPulseParams {
    /// The checked-in ran pulse timing.
    pub fn calibrated() -> Result<Self> {
        let t = parse_table()?;
        let n_samples = lookup(&t, "ran.n_samples")?;
        if n_samples.fract() != 0.0 || n_samples < 2.0 {
            return Err(ThzError::DataFile {
                name: CALIBRATION_NAME.into(),
                line: 0,
                message: format!("ran.n_samples must be an integer >= 2, got {n_samples}"),
            });
        }
        let params = RanPulseParams {
            rms_width_s: lookup(&t, "ran.rms_width_s")?,
            sample_interval_s: lookup(&t, "ran.sample_interval_s")?,
            n_samples: n_samples as usize,
            an_slot_offset_s: lookup(&t, "ran.an_slot_offset_s")?,
            guard_s: lookup(&t, "ran.guard_s")?,
            symbol_period_s: lookup(&t, "ran.symbol_period_s")?,
        };
        params.validate()?;
        Ok(params)
    }
}

impl TsOokRegime {
    /// The checked-in nanonetwork detection regime.
    pub fn calibrated() -> Result<Self> {
        let t = parse_table()?;
        let regime = TsOokRegime {
            pulse_energy: lookup(&t, "nano.pulse_energy")?,
            silence_noise: lookup(&t, "nano.silence_noise")?,
            pulse_noise: lookup(&t, "nano.pulse_noise")?,
            spreading_factor: lookup(&t, "nano.spreading_factor")?,
        };
        regime.validate()?;
        Ok(regime)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nano::optimize_source;

    #[test]
    fn the_table_parses_and_every_constructor_validates() {
        SecurityScenario::calibrated().unwrap();
        RanPulseParams::calibrated().unwrap();
        TsOokRegime::calibrated().unwrap();
    }

    #[test]
    fn calibrated_timing_leaves_slack_for_pulse_broadening() {
        let p = RanPulseParams::calibrated().unwrap();
        let rect = p.rms_width_s * 12f64.sqrt();
        assert!(rect + p.guard_s < p.an_slot_offset_s);
    }

    #[test]
    fn calibrated_regime_biases_the_source_below_one_half() {
        let opt = optimize_source(&TsOokRegime::calibrated().unwrap()).unwrap();
        assert!(opt.p_one > 0.40 && opt.p_one < 0.50, "{}", opt.p_one);
    }
}
