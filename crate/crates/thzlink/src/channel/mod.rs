//! Link budgets: spreading loss, molecular absorption loss, weather loss,
//! the noise the absorbing gas re-radiates, and slant paths through a
//! layered atmosphere.

mod pulse;

pub use pulse::{channel_transfer_function, propagate_pulse, Pulse, TransferFunction};

use crate::catalog::{AltitudeProfile, AtmosphereState, WeatherCondition};
use crate::constants::{C, K_B};
use crate::error::{Result, ThzError};

/// Free-space spreading loss 20 log10(4 pi f d / c), dB.
pub fn spreading_loss_db(f_hz: f64, distance_m: f64) -> Result<f64> {
    if !(f_hz > 0.0) || !f_hz.is_finite() {
        return Err(ThzError::InvalidArgument(format!(
            "frequency must be positive, got {f_hz} Hz"
        )));
    }
    if !(distance_m > 0.0) || !distance_m.is_finite() {
        return Err(ThzError::InvalidArgument(format!(
            "distance must be positive, got {distance_m} m"
        )));
    }
    Ok(20.0 * (4.0 * std::f64::consts::PI * f_hz * distance_m / C).log10())
}

/// Noise power added by the absorbing gas itself, W.
///
/// Two contributions, both proportional to the path emissivity: the medium
/// re-radiates a fraction of the signal that it absorbed, and it emits
/// thermally across the receiver bandwidth. `p_rx_ideal_w` is the power the
/// receiver would see through a transparent atmosphere (spreading and
/// antenna gains applied, absorption not).
pub fn absorption_noise_power(
    emissivity: f64,
    p_rx_ideal_w: f64,
    temperature_k: f64,
    bandwidth_hz: f64,
) -> f64 {
    emissivity * p_rx_ideal_w + K_B * temperature_k * emissivity * bandwidth_hz
}

/// Shannon capacity B log2(1 + SNR), bit/s.
pub fn capacity_bps(snr: f64, bandwidth_hz: f64) -> Result<f64> {
    if !(snr >= 0.0) || !snr.is_finite() {
        return Err(ThzError::InvalidArgument(format!(
            "snr must be non-negative, got {snr}"
        )));
    }
    if !(bandwidth_hz > 0.0) || !bandwidth_hz.is_finite() {
        return Err(ThzError::InvalidArgument(format!(
            "bandwidth must be positive, got {bandwidth_hz} Hz"
        )));
    }
    Ok(bandwidth_hz * (1.0 + snr).log2())
}

/// Transmitter, receiver and environment parameters of a point-to-point link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub distance_m: f64,
    pub tx_altitude_km: f64,
    pub rx_altitude_km: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    /// Carrier frequency, Hz.
    pub f_c_hz: f64,
    pub bandwidth_hz: f64,
    pub tx_power_w: f64,
    pub weather: WeatherCondition,
}

impl LinkGeometry {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("distance", self.distance_m),
            ("carrier frequency", self.f_c_hz),
            ("bandwidth", self.bandwidth_hz),
            ("tx power", self.tx_power_w),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(ThzError::InvalidArgument(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        for (name, value) in [
            ("tx altitude", self.tx_altitude_km),
            ("rx altitude", self.rx_altitude_km),
        ] {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(ThzError::InvalidArgument(format!(
                    "{name} must be non-negative, got {value} km"
                )));
            }
        }
        if !self.tx_gain_dbi.is_finite() || !self.rx_gain_dbi.is_finite() {
            return Err(ThzError::InvalidArgument("antenna gain must be finite".into()));
        }
        self.weather.validate()
    }

    /// Copy with a different distance.
    pub fn at_distance(&self, distance_m: f64) -> Self {
        Self { distance_m, ..*self }
    }

    /// Copy with a different carrier.
    pub fn at_frequency(&self, f_c_hz: f64) -> Self {
        Self { f_c_hz, ..*self }
    }

    /// Received power through a transparent atmosphere, W.
    pub fn p_rx_ideal_w(&self) -> Result<f64> {
        let spread = spreading_loss_db(self.f_c_hz, self.distance_m)?;
        let gains = self.tx_gain_dbi + self.rx_gain_dbi;
        Ok(self.tx_power_w * 10f64.powf((gains - spread) / 10.0))
    }

    /// Full budget given the absorption coefficient at the carrier, the
    /// weather attenuation rate there, and the environment temperature.
    ///
    /// Absorption noise follows the molecular emissivity only; hydrometeor
    /// losses attenuate the signal without joining the re-emission term.
    pub fn budget(&self, k_db_km: f64, weather_db_km: f64, t_env_k: f64) -> Result<LinkBudget> {
        self.validate()?;
        for (name, value) in [
            ("absorption coefficient", k_db_km),
            ("weather attenuation", weather_db_km),
        ] {
            if value < 0.0 || !value.is_finite() {
                return Err(ThzError::InvalidArgument(format!(
                    "{name} must be nonnegative, got {value} dB/km"
                )));
            }
        }
        if !(t_env_k > 0.0) || !t_env_k.is_finite() {
            return Err(ThzError::InvalidArgument(format!(
                "temperature must be positive, got {t_env_k} K"
            )));
        }
        let d_km = self.distance_m / 1000.0;
        let spreading_db = spreading_loss_db(self.f_c_hz, self.distance_m)?;
        let absorption_db = k_db_km * d_km;
        let weather_db = weather_db_km * d_km;
        let gains = self.tx_gain_dbi + self.rx_gain_dbi;
        let p_rx_ideal_w = self.tx_power_w * 10f64.powf((gains - spreading_db) / 10.0);
        let p_rx_w = p_rx_ideal_w * 10f64.powf(-(absorption_db + weather_db) / 10.0);
        let emissivity = 1.0 - 10f64.powf(-absorption_db / 10.0);
        let noise_absorption_w =
            absorption_noise_power(emissivity, p_rx_ideal_w, t_env_k, self.bandwidth_hz);
        let noise_thermal_w = K_B * t_env_k * self.bandwidth_hz;
        let snr = p_rx_w / (noise_absorption_w + noise_thermal_w);
        Ok(LinkBudget {
            f_hz: self.f_c_hz,
            distance_m: self.distance_m,
            spreading_db,
            absorption_db,
            weather_db,
            p_rx_w,
            emissivity,
            noise_absorption_w,
            noise_thermal_w,
            snr,
            capacity_bps: self.bandwidth_hz * (1.0 + snr).log2(),
        })
    }
}

/// Everything a receiver planner wants to know about one (f, d) operating
/// point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub f_hz: f64,
    pub distance_m: f64,
    pub spreading_db: f64,
    /// Molecular absorption loss over the path, dB.
    pub absorption_db: f64,
    /// Rain, fog or dust loss over the path, dB.
    pub weather_db: f64,
    /// Received signal power with all losses applied, W.
    pub p_rx_w: f64,
    /// Path emissivity, the molecularly absorbed power fraction.
    pub emissivity: f64,
    /// Re-radiated plus thermally emitted molecular noise, W.
    pub noise_absorption_w: f64,
    /// Receiver thermal floor k T B, W.
    pub noise_thermal_w: f64,
    pub snr: f64,
    /// Shannon capacity B log2(1 + SNR), bit/s.
    pub capacity_bps: f64,
}

impl LinkBudget {
    /// Total path loss excluding antenna gains, dB.
    pub fn total_loss_db(&self) -> f64 {
        self.spreading_db + self.absorption_db + self.weather_db
    }

    pub fn noise_total_w(&self) -> f64 {
        self.noise_absorption_w + self.noise_thermal_w
    }

    /// Spectral efficiency log2(1 + SNR), bit/s/Hz.
    pub fn spectral_efficiency(&self) -> f64 {
        (1.0 + self.snr).log2()
    }
}

/// Integrates a per-kilometer quantity along a straight slant path.
///
/// The path runs `path_length_m` meters while the altitude moves linearly
/// from `z_start_km` to `z_end_km`. The integral is a midpoint Riemann sum
/// over `n_segments` equal segments: the integrand is evaluated at each
/// segment's midpoint altitude and weighted by the segment length in km.
/// With an integrand returning dB/km the result is the path loss in dB.
pub fn slant_path_integral<F>(
    profile: &AltitudeProfile,
    z_start_km: f64,
    z_end_km: f64,
    path_length_m: f64,
    n_segments: usize,
    mut integrand: F,
) -> Result<f64>
where
    F: FnMut(&AtmosphereState) -> Result<f64>,
{
    if n_segments == 0 {
        return Err(ThzError::InvalidArgument("need at least one segment".into()));
    }
    if !(path_length_m > 0.0) || !path_length_m.is_finite() {
        return Err(ThzError::InvalidArgument(format!(
            "path length must be positive, got {path_length_m} m"
        )));
    }
    let segment_km = path_length_m / 1000.0 / n_segments as f64;
    let mut total = 0.0;
    for j in 0..n_segments {
        let s = (j as f64 + 0.5) / n_segments as f64;
        let z = z_start_km + (z_end_km - z_start_km) * s;
        let state = profile.state_at(z)?;
        total += integrand(&state)? * segment_km;
    }
    Ok(total)
}

/// Absorption loss along the link's slant path, dB.
///
/// The path climbs linearly from the transmitter altitude to the receiver
/// altitude over the link distance; `k_db_km` supplies the local absorption
/// coefficient for each sampled [`AtmosphereState`].
pub fn slant_absorption_db<F>(
    profile: &AltitudeProfile,
    geometry: &LinkGeometry,
    n_segments: usize,
    k_db_km: F,
) -> Result<f64>
where
    F: FnMut(&AtmosphereState) -> Result<f64>,
{
    geometry.validate()?;
    slant_path_integral(
        profile,
        geometry.tx_altitude_km,
        geometry.rx_altitude_km,
        geometry.distance_m,
        n_segments,
        k_db_km,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::default_altitude_profile;
    use crate::constants::P_REF;

    fn geometry() -> LinkGeometry {
        LinkGeometry {
            distance_m: 10.0,
            tx_altitude_km: 0.0,
            rx_altitude_km: 0.0,
            tx_gain_dbi: 20.0,
            rx_gain_dbi: 20.0,
            f_c_hz: 3e11,
            bandwidth_hz: 1e10,
            tx_power_w: 1e-3,
            weather: WeatherCondition::Clear,
        }
    }

    #[test]
    fn spreading_loss_matches_the_textbook_value() {
        // 300 GHz over 10 m
        let l = spreading_loss_db(3e11, 10.0).unwrap();
        assert!((l - 101.99).abs() < 0.01, "{l}");
    }

    #[test]
    fn spreading_loss_grows_six_db_per_doubling() {
        let l1 = spreading_loss_db(3e11, 10.0).unwrap();
        let l2 = spreading_loss_db(3e11, 20.0).unwrap();
        assert!((l2 - l1 - 6.0206).abs() < 1e-3);
    }

    #[test]
    fn transparent_atmosphere_budget_has_no_molecular_noise() {
        let b = geometry().budget(0.0, 0.0, 290.0).unwrap();
        assert_eq!(b.absorption_db, 0.0);
        assert_eq!(b.weather_db, 0.0);
        assert_eq!(b.emissivity, 0.0);
        assert_eq!(b.noise_absorption_w, 0.0);
        assert!(b.noise_thermal_w > 0.0);
        assert!(b.snr > 0.0);
    }

    #[test]
    fn budget_combines_losses_multiplicatively_in_power() {
        let g = geometry();
        let b = g.budget(100.0, 0.0, 290.0).unwrap();
        // 100 dB/km over 10 m is 1 dB of absorption
        assert!((b.absorption_db - 1.0).abs() < 1e-12);
        let ideal = g.p_rx_ideal_w().unwrap();
        assert!((b.p_rx_w / ideal - 10f64.powf(-0.1)).abs() < 1e-12);
    }

    #[test]
    fn weather_loss_stacks_in_decibels() {
        let g = geometry();
        let clear = g.budget(100.0, 0.0, 290.0).unwrap();
        let rainy = g.budget(100.0, 50.0, 290.0).unwrap();
        assert!((rainy.weather_db - 0.5).abs() < 1e-12);
        assert!((rainy.total_loss_db() - clear.total_loss_db() - 0.5).abs() < 1e-12);
        assert!((rainy.p_rx_w / clear.p_rx_w - 10f64.powf(-0.05)).abs() < 1e-12);
        // the re-emission term tracks molecular absorption, not rain
        assert_eq!(rainy.noise_absorption_w, clear.noise_absorption_w);
        assert!(rainy.snr < clear.snr);
    }

    #[test]
    fn capacity_matches_the_budget_and_rejects_bad_inputs() {
        let b = geometry().budget(50.0, 0.0, 290.0).unwrap();
        let c = capacity_bps(b.snr, 1e10).unwrap();
        assert!((c - b.capacity_bps).abs() < 1e-6 * b.capacity_bps);
        assert!((b.spectral_efficiency() - c / 1e10).abs() < 1e-12);
        assert_eq!(capacity_bps(0.0, 1e10).unwrap(), 0.0);
        assert!(capacity_bps(-0.5, 1e10).is_err());
        assert!(capacity_bps(1.0, 0.0).is_err());
    }

    #[test]
    fn snr_decreases_with_distance() {
        let g = geometry();
        let mut prev = f64::INFINITY;
        for d in [1.0, 3.0, 10.0, 30.0, 100.0, 1000.0] {
            let snr = g.at_distance(d).budget(50.0, 0.0, 290.0).unwrap().snr;
            assert!(snr < prev, "snr {snr} at {d} m");
            prev = snr;
        }
    }

    #[test]
    fn emissivity_saturates_on_opaque_paths() {
        let b = geometry().at_distance(1e5).budget(100.0, 0.0, 290.0).unwrap();
        assert!(b.emissivity > 0.9999);
        // molecular noise approaches the blackbody limit epsilon k T B
        let limit = K_B * 290.0 * 1e10;
        assert!(b.noise_absorption_w < 1.0001 * limit + b.p_rx_w);
    }

    #[test]
    fn vertical_path_integral_matches_a_hand_sum() {
        let profile = default_altitude_profile();
        // integrand that only depends on pressure, so the test can recompute
        let got = slant_path_integral(&profile, 0.0, 2.0, 2000.0, 4, |s| {
            Ok(s.pressure_pa() / P_REF)
        })
        .unwrap();
        let mut want = 0.0;
        for j in 0..4 {
            let z = 2.0 * (j as f64 + 0.5) / 4.0;
            let state = profile.state_at(z).unwrap();
            want += state.pressure_pa() / P_REF * 0.5;
        }
        assert_eq!(got, want);
    }

    #[test]
    fn slant_wrapper_agrees_with_the_explicit_integral() {
        let profile = default_altitude_profile();
        let g = LinkGeometry {
            distance_m: 5000.0,
            tx_altitude_km: 0.0,
            rx_altitude_km: 4.0,
            ..geometry()
        };
        let integrand = |s: &AtmosphereState| Ok(s.pressure_pa() / P_REF);
        let via_geometry = slant_absorption_db(&profile, &g, 64, integrand).unwrap();
        let direct = slant_path_integral(&profile, 0.0, 4.0, 5000.0, 64, integrand).unwrap();
        assert_eq!(via_geometry, direct);
    }

    #[test]
    fn slant_integral_refines_toward_the_smooth_limit() {
        let profile = default_altitude_profile();
        // exponential-like integrand along altitude
        let integrand =
            |s: &AtmosphereState| Ok(s.pressure_pa() / P_REF * s.temperature_k() / 290.0);
        let reference =
            slant_path_integral(&profile, 0.0, 10.0, 20000.0, 4096, integrand).unwrap();
        let mut prev_err = f64::INFINITY;
        for n in [4, 16, 64, 256] {
            let v = slant_path_integral(&profile, 0.0, 10.0, 20000.0, n, integrand).unwrap();
            let err = (v - reference).abs();
            assert!(err <= prev_err, "error grew at n={n}");
            prev_err = err;
        }
        assert!(prev_err / reference.abs() < 5e-3);
    }

    #[test]
    fn out_of_profile_slant_paths_error() {
        let profile = default_altitude_profile();
        assert!(slant_path_integral(&profile, 0.0, 40.0, 1000.0, 8, |_| Ok(1.0)).is_err());
    }
}
