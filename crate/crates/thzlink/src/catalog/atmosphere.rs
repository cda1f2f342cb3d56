//! Atmosphere description: thermodynamic state, saturation limit and
//! altitude profiles.

use crate::constants::{K_B, M_H2O, N_A, O2_MIXING_RATIO, P_REF};
use crate::error::{Result, ThzError};

/// Validity range of the saturation model, K.
const SATURATION_T_MIN_K: f64 = 180.0;
const SATURATION_T_MAX_K: f64 = 330.0;

/// Saturation water-vapor density over a plane liquid surface, g/m^3.
///
/// Magnus-form vapor pressure e_s = 6.1094 hPa exp(17.625 t / (t + 243.04))
/// with t in Celsius, converted to mass density with the ideal-gas law.
/// Roughly 17.3 g/m^3 at 20 C and 4.85 g/m^3 at 0 C. Valid 180..330 K.
pub fn saturation_vapor_density(temperature_k: f64) -> Result<f64> {
    if !(SATURATION_T_MIN_K..=SATURATION_T_MAX_K).contains(&temperature_k) {
        return Err(ThzError::TemperatureOutOfRange {
            t_k: temperature_k,
            min_k: SATURATION_T_MIN_K,
            max_k: SATURATION_T_MAX_K,
        });
    }
    let t_c = temperature_k - 273.15;
    let e_s_pa = 610.94 * (17.625 * t_c / (t_c + 243.04)).exp();
    // rho = e_s M / (R T), with R = N_A k_B; result in g/m^3
    let r_j_mol_k = N_A * K_B;
    Ok(e_s_pa * M_H2O / (r_j_mol_k * temperature_k))
}

/// Local thermodynamic state of the absorbing gas mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct AtmosphereState {
    temperature_k: f64,
    pressure_pa: f64,
    water_vapor_density_g_m3: f64,
    o2_mixing_ratio: f64,
}

impl AtmosphereState {
    /// Builds a state and rejects vapor loads above saturation.
    ///
    /// Supersaturated states must go through
    /// [`AtmosphereState::new_supersaturated`] so the condition is always an
    /// explicit caller decision. When the temperature is outside the
    /// saturation model's range the check requires zero vapor.
    pub fn new(
        temperature_k: f64,
        pressure_pa: f64,
        water_vapor_density_g_m3: f64,
        o2_mixing_ratio: f64,
    ) -> Result<Self> {
        let state = Self::new_supersaturated(
            temperature_k,
            pressure_pa,
            water_vapor_density_g_m3,
            o2_mixing_ratio,
        )?;
        if water_vapor_density_g_m3 > 0.0 {
            let sat = saturation_vapor_density(temperature_k)?;
            if water_vapor_density_g_m3 > sat {
                return Err(ThzError::Supersaturated {
                    vapor_g_m3: water_vapor_density_g_m3,
                    saturation_g_m3: sat,
                    t_k: temperature_k,
                });
            }
        }
        Ok(state)
    }

    /// Builds a state without the saturation check.
    pub fn new_supersaturated(
        temperature_k: f64,
        pressure_pa: f64,
        water_vapor_density_g_m3: f64,
        o2_mixing_ratio: f64,
    ) -> Result<Self> {
        if !(temperature_k > 0.0) || !temperature_k.is_finite() {
            return Err(ThzError::InvalidArgument(format!(
                "temperature must be positive, got {temperature_k} K"
            )));
        }
        if !(pressure_pa > 0.0) || !pressure_pa.is_finite() {
            return Err(ThzError::InvalidArgument(format!(
                "pressure must be positive, got {pressure_pa} Pa"
            )));
        }
        if water_vapor_density_g_m3 < 0.0 || !water_vapor_density_g_m3.is_finite() {
            return Err(ThzError::InvalidArgument(format!(
                "vapor density must be nonnegative, got {water_vapor_density_g_m3} g/m^3"
            )));
        }
        if !(0.0..=1.0).contains(&o2_mixing_ratio) {
            return Err(ThzError::InvalidArgument(format!(
                "O2 mixing ratio must be in 0..1, got {o2_mixing_ratio}"
            )));
        }
        Ok(Self {
            temperature_k,
            pressure_pa,
            water_vapor_density_g_m3,
            o2_mixing_ratio,
        })
    }

    /// Standard sea-level reference: 1 atm, 290 K, 7.5 g/m^3, dry-air O2.
    pub fn sea_level_default() -> Self {
        Self::new(290.0, P_REF, 7.5, O2_MIXING_RATIO).unwrap()
    }

    /// Sea-level air holding as much vapor as 290-ish coastal air can:
    /// vapor set exactly to saturation at the given temperature.
    pub fn saturated_sea_level(temperature_k: f64) -> Result<Self> {
        let sat = saturation_vapor_density(temperature_k)?;
        Self::new(temperature_k, P_REF, sat, O2_MIXING_RATIO)
    }

    pub fn temperature_k(&self) -> f64 {
        self.temperature_k
    }

    pub fn pressure_pa(&self) -> f64 {
        self.pressure_pa
    }

    pub fn water_vapor_density_g_m3(&self) -> f64 {
        self.water_vapor_density_g_m3
    }

    pub fn o2_mixing_ratio(&self) -> f64 {
        self.o2_mixing_ratio
    }

    /// Returns a copy with a different vapor density, checked against
    /// saturation.
    pub fn with_vapor_density(&self, vapor_g_m3: f64) -> Result<Self> {
        Self::new(
            self.temperature_k,
            self.pressure_pa,
            vapor_g_m3,
            self.o2_mixing_ratio,
        )
    }

    /// Water molecule number density, molecules/cm^3.
    pub fn n_h2o_cm3(&self) -> f64 {
        self.water_vapor_density_g_m3 * N_A / (M_H2O * 1e6)
    }

    /// O2 number density, molecules/cm^3.
    pub fn n_o2_cm3(&self) -> f64 {
        self.o2_mixing_ratio * self.pressure_pa / (K_B * self.temperature_k) * 1e-6
    }

    /// Water-vapor partial pressure, Pa.
    pub fn vapor_partial_pressure_pa(&self) -> f64 {
        self.n_h2o_cm3() * 1e6 * K_B * self.temperature_k
    }

    /// Short identifier used in spectrum provenance.
    pub fn provenance_label(&self) -> String {
        format!(
            "T={}K p={}Pa rho_v={}g/m3 xO2={}",
            self.temperature_k,
            self.pressure_pa,
            self.water_vapor_density_g_m3,
            self.o2_mixing_ratio
        )
    }

    fn from_parts_unchecked(
        temperature_k: f64,
        pressure_pa: f64,
        water_vapor_density_g_m3: f64,
        o2_mixing_ratio: f64,
    ) -> Self {
        Self {
            temperature_k,
            pressure_pa,
            water_vapor_density_g_m3,
            o2_mixing_ratio,
        }
    }
}

/// Atmosphere state as a function of altitude, from ordered samples.
///
/// Between samples, pressure and vapor density are interpolated linearly in
/// log space (both decay roughly exponentially with height) and temperature
/// linearly. If either bracketing vapor density is zero the vapor falls back
/// to linear interpolation, since log interpolation cannot reach zero.
/// Queries outside the sampled range are errors, never extrapolated.
#[derive(Debug, Clone)]
pub struct AltitudeProfile {
    samples: Vec<(f64, AtmosphereState)>,
}

impl AltitudeProfile {
    /// Builds a profile from (altitude_km, state) samples with strictly
    /// increasing altitudes. At least one sample is required.
    pub fn from_samples(samples: Vec<(f64, AtmosphereState)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(ThzError::InvalidArgument(
                "altitude profile needs at least one sample".into(),
            ));
        }
        for pair in samples.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(ThzError::InvalidArgument(format!(
                    "altitude samples must strictly increase, got {} then {}",
                    pair[0].0, pair[1].0
                )));
            }
        }
        Ok(Self { samples })
    }

    pub fn min_altitude_km(&self) -> f64 {
        self.samples[0].0
    }

    pub fn max_altitude_km(&self) -> f64 {
        self.samples[self.samples.len() - 1].0
    }

    pub fn samples(&self) -> &[(f64, AtmosphereState)] {
        &self.samples
    }

    /// Interpolated state at `altitude_km`. Exact at sample points.
    pub fn state_at(&self, altitude_km: f64) -> Result<AtmosphereState> {
        let (lo, hi) = (self.min_altitude_km(), self.max_altitude_km());
        if !(altitude_km >= lo && altitude_km <= hi) {
            return Err(ThzError::AltitudeOutOfRange {
                altitude_km,
                min_km: lo,
                max_km: hi,
            });
        }
        let idx = self
            .samples
            .partition_point(|(a, _)| *a <= altitude_km);
        if idx == 0 {
            return Ok(self.samples[0].1.clone());
        }
        let (a0, s0) = &self.samples[idx - 1];
        if *a0 == altitude_km || idx == self.samples.len() {
            return Ok(s0.clone());
        }
        let (a1, s1) = &self.samples[idx];
        let t = (altitude_km - a0) / (a1 - a0);

        let temperature = s0.temperature_k + t * (s1.temperature_k - s0.temperature_k);
        let pressure = ((1.0 - t) * s0.pressure_pa.ln() + t * s1.pressure_pa.ln()).exp();
        let (v0, v1) = (s0.water_vapor_density_g_m3, s1.water_vapor_density_g_m3);
        let vapor = if v0 > 0.0 && v1 > 0.0 {
            ((1.0 - t) * v0.ln() + t * v1.ln()).exp()
        } else {
            v0 + t * (v1 - v0)
        };
        let o2 = s0.o2_mixing_ratio + t * (s1.o2_mixing_ratio - s0.o2_mixing_ratio);
        Ok(AtmosphereState::from_parts_unchecked(
            temperature,
            pressure,
            vapor,
            o2,
        ))
    }
}

/// Sea-level vapor reference of the default profile, g/m^3.
const DEFAULT_VAPOR_SEA_G_M3: f64 = 7.5;
/// Pressure scale height, km.
const DEFAULT_PRESSURE_SCALE_KM: f64 = 7.7;
/// Water-vapor scale height below the taper region, km.
const DEFAULT_VAPOR_SCALE_KM: f64 = 2.0;
/// Tropospheric lapse rate, K/km, applied up to 11 km.
const DEFAULT_LAPSE_K_KM: f64 = 6.5;

/// Default clear-air profile, sampled every 0.25 km from 0 to 30 km.
///
/// Pressure decays exponentially with a 7.7 km scale height. Vapor decays
/// with a 2 km scale height up to 10 km, tapers linearly to zero between 10
/// and 12 km and stays zero above. Temperature falls at 6.5 K/km from 290 K
/// at the surface until 11 km and is constant above. Between samples the
/// profile interpolation rules apply, and the 0.25 km spacing keeps the taper
/// region accurate.
pub fn default_altitude_profile() -> AltitudeProfile {
    let mut samples = Vec::with_capacity(121);
    for i in 0..=120 {
        let z_km = i as f64 * 0.25;
        let temperature = if z_km <= 11.0 {
            290.0 - DEFAULT_LAPSE_K_KM * z_km
        } else {
            290.0 - DEFAULT_LAPSE_K_KM * 11.0
        };
        let pressure = P_REF * (-z_km / DEFAULT_PRESSURE_SCALE_KM).exp();
        let vapor = if z_km <= 10.0 {
            DEFAULT_VAPOR_SEA_G_M3 * (-z_km / DEFAULT_VAPOR_SCALE_KM).exp()
        } else if z_km < 12.0 {
            DEFAULT_VAPOR_SEA_G_M3 * (-10.0f64 / DEFAULT_VAPOR_SCALE_KM).exp() * (12.0 - z_km)
                / 2.0
        } else {
            0.0
        };
        samples.push((
            z_km,
            AtmosphereState::from_parts_unchecked(temperature, pressure, vapor, O2_MIXING_RATIO),
        ));
    }
    AltitudeProfile::from_samples(samples).unwrap()
}
