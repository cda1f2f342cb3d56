//! Per-line spectroscopy: pressure broadening, temperature scaling of line
//! intensity and the Van Vleck-Weisskopf shape with a far-wing cutoff.
//!
//! Everything in this file works in wavenumber units (1/cm). The conversion
//! to Hz and dB/km happens one level up.

use crate::catalog::{AtmosphereState, SpectralLine};
use crate::constants::{C2_CM_K, C_CM, P_REF, T_REF};
use crate::error::{Result, ThzError};

/// Far-wing cutoff distance from line center, 1/cm (750 GHz).
///
/// Beyond this distance a line contributes nothing; inside it, the shape is
/// lowered by its value at the cutoff so it reaches zero continuously. The
/// far wings of a pure VVW shape overestimate real continuum absorption, and
/// chopping them at a fixed distance with a pedestal subtraction is the
/// standard line-by-line remedy.
pub const WING_CUTOFF_CM: f64 = 750.0e9 / C_CM;

/// Pressure-broadened halfwidth of `line` in the given state, 1/cm.
///
/// Both broadening coefficients scale with the same (T_ref/T)^n power law.
/// The self-broadening partner is water vapor: its partial pressure is what
/// the catalog's self-halfwidths were fit against for H2O lines, and for the
/// trace-gas O2 lines the self term is negligible either way.
pub fn line_halfwidth(line: &SpectralLine, state: &AtmosphereState) -> f64 {
    let p = state.pressure_pa();
    let p_self = state.vapor_partial_pressure_pa().min(p);
    let scale = (T_REF / state.temperature_k()).powf(line.temperature_exponent);
    scale * (line.air_halfwidth * (p - p_self) + line.self_halfwidth * p_self) / P_REF
}

/// Coldest temperature the intensity power laws are trusted at, K.
pub const INTENSITY_T_MIN_K: f64 = 150.0;
/// Warmest temperature the intensity power laws are trusted at, K.
pub const INTENSITY_T_MAX_K: f64 = 350.0;

/// Line intensity of `line` at `temperature_k`, cm^-1/(molecule cm^-2).
///
/// The 296 K reference intensity is rescaled with the partition-function
/// power law, the Boltzmann population of the lower state, and the
/// stimulated-emission factor. The partition power law is a fit around the
/// reference temperature, so temperatures outside
/// [`INTENSITY_T_MIN_K`]..[`INTENSITY_T_MAX_K`] are rejected.
pub fn line_intensity(line: &SpectralLine, temperature_k: f64) -> Result<f64> {
    if !(INTENSITY_T_MIN_K..=INTENSITY_T_MAX_K).contains(&temperature_k) {
        return Err(ThzError::TemperatureOutOfRange {
            t_k: temperature_k,
            min_k: INTENSITY_T_MIN_K,
            max_k: INTENSITY_T_MAX_K,
        });
    }
    let t = temperature_k;
    let partition = (T_REF / t).powf(line.species.partition_exponent());
    let boltzmann = (-C2_CM_K * line.lower_state_energy / t).exp()
        / (-C2_CM_K * line.lower_state_energy / T_REF).exp();
    let stimulated = (1.0 - (-C2_CM_K * line.center_wavenumber / t).exp())
        / (1.0 - (-C2_CM_K * line.center_wavenumber / T_REF).exp());
    Ok(line.intensity * partition * boltzmann * stimulated)
}

/// Pressure-shifted line center in the given state, 1/cm.
pub fn shifted_center(line: &SpectralLine, state: &AtmosphereState) -> f64 {
    line.center_wavenumber + line.pressure_shift * state.pressure_pa() / P_REF
}

/// Van Vleck-Weisskopf profile at wavenumber `nu_cm`, units cm.
///
/// Normalized so that the integral over the resonant term is about 1; the
/// (nu/nu0)^2 prefactor gives the correct low-frequency rolloff that a plain
/// Lorentzian lacks. Even in nu, so evaluating at a negative argument (as the
/// cutoff pedestal sometimes does for low-frequency lines) is well defined.
pub fn vvw_profile(nu_cm: f64, center_cm: f64, halfwidth_cm: f64) -> f64 {
    let g = halfwidth_cm;
    let ratio = nu_cm / center_cm;
    let resonant = 1.0 / ((nu_cm - center_cm).powi(2) + g * g);
    let antiresonant = 1.0 / ((nu_cm + center_cm).powi(2) + g * g);
    ratio * ratio * (g / std::f64::consts::PI) * (resonant + antiresonant)
}

/// VVW profile with the far-wing cutoff applied.
///
/// Zero beyond [`WING_CUTOFF_CM`] from the (shifted) center; inside, the
/// profile minus its value at the cutoff point on the same side, floored at
/// zero so the subtraction can never produce negative absorption.
pub fn vvw_profile_cutoff(nu_cm: f64, center_cm: f64, halfwidth_cm: f64) -> f64 {
    let delta = nu_cm - center_cm;
    if delta.abs() > WING_CUTOFF_CM {
        return 0.0;
    }
    let side = if delta >= 0.0 { 1.0 } else { -1.0 };
    let pedestal = vvw_profile(center_cm + side * WING_CUTOFF_CM, center_cm, halfwidth_cm);
    (vvw_profile(nu_cm, center_cm, halfwidth_cm) - pedestal).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Species;

    fn test_line() -> SpectralLine {
        SpectralLine {
            species: Species::H2O,
            isotopologue: 1,
            center_wavenumber: 18.5778,
            intensity: 5.48e-20,
            air_halfwidth: 0.1,
            self_halfwidth: 0.46,
            lower_state_energy: 23.794,
            temperature_exponent: 0.75,
            pressure_shift: -0.0055,
        }
    }

    #[test]
    fn halfwidth_at_reference_conditions_is_the_catalog_mix() {
        let line = test_line();
        let dry = AtmosphereState::new(T_REF, P_REF, 0.0, 0.20946).unwrap();
        let g = line_halfwidth(&line, &dry);
        assert!((g - 0.1).abs() < 1e-12, "{g}");

        let humid = AtmosphereState::new(T_REF, P_REF, 10.0, 0.20946).unwrap();
        let g_humid = line_halfwidth(&line, &humid);
        // self broadening is stronger than air broadening for water
        assert!(g_humid > g);
        let p_self = humid.vapor_partial_pressure_pa();
        let expected = (0.1 * (P_REF - p_self) + 0.46 * p_self) / P_REF;
        assert!((g_humid - expected).abs() < 1e-12);
    }

    #[test]
    fn halfwidth_narrows_with_altitude_pressure() {
        let line = test_line();
        let low = AtmosphereState::new(290.0, P_REF, 0.0, 0.20946).unwrap();
        let high = AtmosphereState::new(240.0, 2.6e4, 0.0, 0.20946).unwrap();
        // pressure drop wins over the cold-air (T_ref/T)^n increase
        assert!(line_halfwidth(&line, &high) < 0.4 * line_halfwidth(&line, &low));
    }

    #[test]
    fn intensity_at_reference_temperature_is_the_catalog_value() {
        let line = test_line();
        let s = line_intensity(&line, T_REF).unwrap();
        assert!((s / line.intensity - 1.0).abs() < 1e-14);
    }

    #[test]
    fn intensity_rejects_temperatures_outside_the_fit_range() {
        let line = test_line();
        assert!(line_intensity(&line, 149.9).is_err());
        assert!(line_intensity(&line, 350.1).is_err());
        assert!(line_intensity(&line, INTENSITY_T_MIN_K).is_ok());
        assert!(line_intensity(&line, INTENSITY_T_MAX_K).is_ok());
    }

    #[test]
    fn cold_gas_concentrates_population_in_low_states() {
        // with E'' near zero, cooling raises the intensity through the
        // partition function; a high-E'' line loses population instead
        let mut low = test_line();
        low.lower_state_energy = 0.0;
        assert!(line_intensity(&low, 240.0).unwrap() > line_intensity(&low, T_REF).unwrap());

        let mut high = test_line();
        high.lower_state_energy = 800.0;
        assert!(line_intensity(&high, 240.0).unwrap() < line_intensity(&high, T_REF).unwrap());
    }

    #[test]
    fn profile_reduces_to_lorentzian_near_a_narrow_line() {
        // at line center the (nu/nu0)^2 factor is 1 and the antiresonant
        // term is down by (2 nu0 / gamma)^2
        let (nu0, g) = (18.5778, 0.002);
        let peak = vvw_profile(nu0, nu0, g);
        let lorentz_peak = 1.0 / (std::f64::consts::PI * g);
        assert!((peak / lorentz_peak - 1.0).abs() < 1e-6);
    }

    #[test]
    fn profile_is_even_in_frequency() {
        let p = vvw_profile(-5.0, 18.5778, 0.1);
        let q = vvw_profile(5.0, 18.5778, 0.1);
        assert!((p - q).abs() < 1e-18);
    }

    #[test]
    fn cutoff_profile_vanishes_at_and_beyond_the_cutoff() {
        let (nu0, g) = (18.5778, 0.1);
        assert_eq!(vvw_profile_cutoff(nu0 + WING_CUTOFF_CM + 1e-9, nu0, g), 0.0);
        let at_edge = vvw_profile_cutoff(nu0 + WING_CUTOFF_CM, nu0, g);
        assert!(at_edge.abs() < 1e-15, "{at_edge}");
        // approaches zero continuously from inside
        let near = vvw_profile_cutoff(nu0 + WING_CUTOFF_CM - 1e-6, nu0, g);
        assert!((0.0..1e-9).contains(&near));
    }

    #[test]
    fn cutoff_barely_dents_the_line_core() {
        let (nu0, g) = (18.5778, 0.1);
        let full = vvw_profile(nu0, nu0, g);
        let cut = vvw_profile_cutoff(nu0, nu0, g);
        assert!(cut > 0.999 * full);
        assert!(cut < full);
    }

    #[test]
    fn pressure_shift_moves_the_center_linearly() {
        let line = test_line();
        let half = AtmosphereState::new(290.0, P_REF / 2.0, 0.0, 0.20946).unwrap();
        let c = shifted_center(&line, &half);
        assert!((c - (18.5778 - 0.0055 / 2.0)).abs() < 1e-12);
    }
}
