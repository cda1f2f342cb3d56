//! Physical-layer secrecy against a colinear eavesdropper.
//!
//! All schemes share one geometry: transmitter, legitimate receiver at
//! `d_b_m` and eavesdropper at `d_e_m` on the same line of sight, with the
//! same antenna hardware. What varies is how the transmission punishes the
//! eavesdropper:
//!
//! * baseline transmits plainly and relies on path loss alone;
//! * tan diverts a fraction of transmit power into noise that jams every
//!   receiver, trading rate for covertness;
//! * apm picks the carrier whose absorption most favors the legitimate
//!   distance over the eavesdropper's;
//! * ran has the legitimate receiver emit noise pulses with a quiet slot
//!   timed around its own information arrivals, so only receivers at the
//!   right distance escape the jamming.

use std::fmt;
use std::str::FromStr;

use crate::absorption::AbsorptionSpectrum;
use crate::catalog::WeatherCondition;
use crate::channel::{LinkGeometry, Pulse};
use crate::constants::C;
use crate::error::{Result, ThzError};

/// Secrecy scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Baseline,
    Tan,
    Apm,
    Ran,
}

impl Scheme {
    /// Every scheme, in presentation order.
    pub const ALL: [Scheme; 4] = [Scheme::Baseline, Scheme::Tan, Scheme::Apm, Scheme::Ran];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Baseline => "baseline",
            Scheme::Tan => "tan",
            Scheme::Apm => "apm",
            Scheme::Ran => "ran",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = ThzError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Scheme::Baseline),
            "tan" => Ok(Scheme::Tan),
            "apm" => Ok(Scheme::Apm),
            "ran" => Ok(Scheme::Ran),
            other => Err(ThzError::InvalidArgument(format!(
                "unknown scheme '{other}' (baseline, tan, apm, ran)"
            ))),
        }
    }
}

/// A wiretap setting: one legitimate link plus an eavesdropper on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecurityScenario {
    /// Transmitter to legitimate receiver, m.
    pub d_b_m: f64,
    /// Transmitter to eavesdropper, m.
    pub d_e_m: f64,
    /// Carrier frequency, Hz.
    pub f_c_hz: f64,
    pub bandwidth_hz: f64,
    pub tx_power_w: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    /// Environment temperature, K.
    pub temperature_k: f64,
    /// SNR the legitimate receiver needs for reliable decoding.
    pub snr_min: f64,
    /// Eavesdropper SNR at or below which the transmission counts as covert.
    pub snr_covert: f64,
    /// Noise power the receiver radiates under the ran scheme, W.
    pub an_power_w: f64,
    /// Fraction of transmit power diverted to noise under the tan scheme.
    pub an_fraction: f64,
    pub scheme: Scheme,
}

impl SecurityScenario {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("legitimate distance", self.d_b_m),
            ("eavesdropper distance", self.d_e_m),
            ("carrier frequency", self.f_c_hz),
            ("bandwidth", self.bandwidth_hz),
            ("tx power", self.tx_power_w),
            ("temperature", self.temperature_k),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(ThzError::InvalidArgument(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        if !self.tx_gain_dbi.is_finite() || !self.rx_gain_dbi.is_finite() {
            return Err(ThzError::InvalidArgument("antenna gain must be finite".into()));
        }
        if !(self.snr_covert >= 0.0) || !self.snr_covert.is_finite() {
            return Err(ThzError::InvalidArgument(format!(
                "covertness threshold must be non-negative, got {}",
                self.snr_covert
            )));
        }
        if !(self.snr_min > self.snr_covert) || !self.snr_min.is_finite() {
            return Err(ThzError::InvalidArgument(format!(
                "snr_min ({}) must exceed snr_covert ({})",
                self.snr_min, self.snr_covert
            )));
        }
        if !(self.an_power_w >= 0.0) || !self.an_power_w.is_finite() {
            return Err(ThzError::InvalidArgument(format!(
                "noise power must be non-negative, got {} W",
                self.an_power_w
            )));
        }
        if !(0.0..1.0).contains(&self.an_fraction) {
            return Err(ThzError::InvalidArgument(format!(
                "noise fraction must be in 0..1, got {}",
                self.an_fraction
            )));
        }
        Ok(())
    }

    /// Copy with a different eavesdropper distance.
    pub fn with_eavesdropper(&self, d_e_m: f64) -> Self {
        Self { d_e_m, ..*self }
    }

    /// Copy running a different scheme.
    pub fn with_scheme(&self, scheme: Scheme) -> Self {
        Self { scheme, ..*self }
    }

    /// Link geometry toward a receiver at `distance_m` on carrier `f_hz`.
    fn geometry(&self, f_hz: f64, distance_m: f64) -> LinkGeometry {
        LinkGeometry {
            distance_m,
            tx_altitude_km: 0.0,
            rx_altitude_km: 0.0,
            tx_gain_dbi: self.tx_gain_dbi,
            rx_gain_dbi: self.rx_gain_dbi,
            f_c_hz: f_hz,
            bandwidth_hz: self.bandwidth_hz,
            tx_power_w: self.tx_power_w,
            weather: WeatherCondition::Clear,
        }
    }

    /// Plain SNR at `distance_m` on carrier `f_hz`, absorption from the grid
    /// point value `k_db_km`.
    fn snr_at(&self, f_hz: f64, distance_m: f64, k_db_km: f64) -> Result<f64> {
        Ok(self
            .geometry(f_hz, distance_m)
            .budget(k_db_km, 0.0, self.temperature_k)?
            .snr)
    }
}

/// Timing of the ran scheme's noise pulse train.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RanPulseParams {
    /// RMS width of the transmitted information pulse, s.
    pub rms_width_s: f64,
    /// Sample interval of the pulse records, s.
    pub sample_interval_s: f64,
    /// Record length in samples, a power of two.
    pub n_samples: usize,
    /// Quiet-slot width the receiver leaves around its own information
    /// arrivals, s.
    pub an_slot_offset_s: f64,
    /// Margin the broadened pulse must leave inside the quiet slot, s.
    pub guard_s: f64,
    /// Repetition period of the symbol train, s.
    pub symbol_period_s: f64,
}

impl RanPulseParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rms width", self.rms_width_s),
            ("sample interval", self.sample_interval_s),
            ("slot offset", self.an_slot_offset_s),
            ("guard", self.guard_s),
            ("symbol period", self.symbol_period_s),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(ThzError::InvalidArgument(format!(
                    "{name} must be positive, got {value} s"
                )));
            }
        }
        if self.n_samples < 2 || !self.n_samples.is_power_of_two() {
            return Err(ThzError::InvalidArgument(format!(
                "record length must be a power of two >= 2, got {}",
                self.n_samples
            )));
        }
        if self.an_slot_offset_s >= self.symbol_period_s {
            return Err(ThzError::InvalidArgument(format!(
                "quiet slot of {:.3e} s cannot fill the {:.3e} s symbol",
                self.an_slot_offset_s, self.symbol_period_s
            )));
        }
        Ok(())
    }
}

/// Secrecy outcome at one eavesdropper distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyResult {
    pub scheme: Scheme,
    pub d_e_m: f64,
    /// Legitimate spectral efficiency, bit/s/Hz.
    pub c_b_bps_hz: f64,
    /// Eavesdropper spectral efficiency, bit/s/Hz.
    pub c_e_bps_hz: f64,
    /// max(0, c_b - c_e), bit/s/Hz.
    pub secrecy_bps_hz: f64,
    /// Whether the eavesdropper's SNR stayed at or under the covertness
    /// threshold.
    pub covert: bool,
    /// Carrier the scheme settled on, Hz; zero when nothing was feasible.
    pub chosen_f_hz: f64,
}

impl SecrecyResult {
    /// Header of the secrecy CSV schema.
    pub const CSV_HEADER: &'static str = "scheme,d_e_m,c_b,c_e,secrecy_bps_hz,covert,chosen_f_hz";

    /// One CSV row matching [`SecrecyResult::CSV_HEADER`].
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.scheme,
            crate::fmt_sci(self.d_e_m),
            crate::fmt_sci(self.c_b_bps_hz),
            crate::fmt_sci(self.c_e_bps_hz),
            crate::fmt_sci(self.secrecy_bps_hz),
            u8::from(self.covert),
            crate::fmt_sci(self.chosen_f_hz)
        )
    }
}

/// The wiretap secrecy rate max(0, c_b - c_e).
pub fn secrecy_rate(c_b: f64, c_e: f64) -> f64 {
    (c_b - c_e).max(0.0)
}

fn result_from_snrs(
    scenario: &SecurityScenario,
    f_hz: f64,
    snr_b: f64,
    sinr_e: f64,
) -> SecrecyResult {
    let c_b = (1.0 + snr_b).log2();
    let c_e = (1.0 + sinr_e).log2();
    SecrecyResult {
        scheme: scenario.scheme,
        d_e_m: scenario.d_e_m,
        c_b_bps_hz: c_b,
        c_e_bps_hz: c_e,
        secrecy_bps_hz: secrecy_rate(c_b, c_e),
        covert: sinr_e <= scenario.snr_covert,
        chosen_f_hz: f_hz,
    }
}

/// Plain transmission at the scenario carrier: path loss is the only
/// protection.
pub fn baseline_secrecy(
    scenario: &SecurityScenario,
    spectrum: &AbsorptionSpectrum,
) -> Result<SecrecyResult> {
    scenario.validate()?;
    let k = spectrum.k_at(scenario.f_c_hz)?;
    let snr_b = scenario.snr_at(scenario.f_c_hz, scenario.d_b_m, k)?;
    let snr_e = scenario.snr_at(scenario.f_c_hz, scenario.d_e_m, k)?;
    Ok(result_from_snrs(scenario, scenario.f_c_hz, snr_b, snr_e))
}

/// Transmitter-side artificial noise: a fraction of transmit power becomes
/// noise that every receiver, legitimate or not, must swallow.
///
/// With plain SNR x the decodable rate becomes log2(1 + (1-a)x / (ax + 1)):
/// signal scaled by 1 - a, noise floor raised by the jamming power a x. At
/// a = 0 this is the baseline bit for bit. Secrecy never beats baseline in
/// this single-antenna setting; what the scheme buys is covertness, since
/// the eavesdropper's effective SNR drops with a.
pub fn tan_secrecy(
    scenario: &SecurityScenario,
    spectrum: &AbsorptionSpectrum,
) -> Result<SecrecyResult> {
    scenario.validate()?;
    let a = scenario.an_fraction;
    let jammed = |x: f64| (1.0 - a) * x / (a * x + 1.0);
    let k = spectrum.k_at(scenario.f_c_hz)?;
    let snr_b = scenario.snr_at(scenario.f_c_hz, scenario.d_b_m, k)?;
    let snr_e = scenario.snr_at(scenario.f_c_hz, scenario.d_e_m, k)?;
    Ok(result_from_snrs(
        scenario,
        scenario.f_c_hz,
        jammed(snr_b),
        jammed(snr_e),
    ))
}

/// Absorption peak modulation: scans the grid for the carrier with the best
/// secrecy rate among those the legitimate receiver can still decode.
///
/// Ties resolve toward the lowest frequency. When no grid frequency reaches
/// `snr_min` at the legitimate receiver, the result is a marker with zero
/// rates and a zero chosen frequency rather than an error: an infeasible
/// link carries nothing, which is a valid sweep data point.
pub fn apm_select_frequency(
    spectrum: &AbsorptionSpectrum,
    scenario: &SecurityScenario,
) -> Result<SecrecyResult> {
    scenario.validate()?;
    let grid = spectrum.grid();
    let mut best: Option<(f64, SecrecyResult)> = None;
    for i in 0..grid.n_points() {
        let f = grid.frequency(i);
        let k = spectrum.k_total_db_km()[i];
        let snr_b = scenario.snr_at(f, scenario.d_b_m, k)?;
        if snr_b < scenario.snr_min {
            continue;
        }
        let snr_e = scenario.snr_at(f, scenario.d_e_m, k)?;
        let candidate = result_from_snrs(scenario, f, snr_b, snr_e);
        let better = match &best {
            None => true,
            Some((s, _)) => candidate.secrecy_bps_hz > *s,
        };
        if better {
            best = Some((candidate.secrecy_bps_hz, candidate));
        }
    }
    Ok(best.map(|(_, r)| r).unwrap_or(SecrecyResult {
        scheme: scenario.scheme,
        d_e_m: scenario.d_e_m,
        c_b_bps_hz: 0.0,
        c_e_bps_hz: 0.0,
        secrecy_bps_hz: 0.0,
        covert: false,
        chosen_f_hz: 0.0,
    }))
}

/// Half-interval overlap of two intervals centered `delta` apart.
fn interval_overlap(delta_s: f64, width_a_s: f64, width_b_s: f64) -> f64 {
    let hi = (width_a_s / 2.0).min(delta_s + width_b_s / 2.0);
    let lo = (-width_a_s / 2.0).max(delta_s - width_b_s / 2.0);
    (hi - lo).max(0.0)
}

/// Rectangular-equivalent duration of a pulse: rms width times sqrt(12).
fn rect_width_s(pulse: &Pulse) -> Result<f64> {
    Ok(pulse.rms_width_s()? * 12f64.sqrt())
}

/// Receiver-side artificial noise with time separation.
///
/// The legitimate receiver radiates noise pulses continuously except for a
/// quiet slot of `an_slot_offset_s` centered on each of its own information
/// arrivals; its own reception is therefore noise-free, self-interference
/// being negligible over the zero-length loop. The scheme is feasible only
/// while the information pulse, broadened over the legitimate distance,
/// still fits in the slot with the guard to spare.
///
/// The eavesdropper sees the quiet slot at a different time: the slot rides
/// outward from the receiver, so at offset r = |d_e - d_b| it is centered
/// (d_b + r)/c after transmission while her information pulse arrives at
/// d_e/c. For a closer eavesdropper those differ by 2r/c and the slot
/// misses her pulse entirely, leaving it jammed; for a farther one the slot
/// arrives in sync and only temporal broadening beyond the slot width lets
/// noise leak in. Overlaps are evaluated against the nearest image modulo
/// the symbol period.
pub fn ran_secrecy(
    scenario: &SecurityScenario,
    spectrum: &AbsorptionSpectrum,
    pulse_params: &RanPulseParams,
) -> Result<SecrecyResult> {
    scenario.validate()?;
    pulse_params.validate()?;

    let probe = Pulse::gaussian(
        scenario.f_c_hz,
        pulse_params.rms_width_s,
        pulse_params.sample_interval_s,
        pulse_params.n_samples,
    )?;
    let width_at_b = rect_width_s(&probe.propagate(spectrum, scenario.d_b_m)?)?;
    let occupied_s = width_at_b + pulse_params.guard_s;
    if occupied_s >= pulse_params.an_slot_offset_s {
        return Err(ThzError::RanTimingInfeasible {
            occupied_s,
            slot_s: pulse_params.an_slot_offset_s,
        });
    }

    let k = spectrum.k_at(scenario.f_c_hz)?;
    let snr_b = scenario.snr_at(scenario.f_c_hz, scenario.d_b_m, k)?;

    let r = (scenario.d_e_m - scenario.d_b_m).abs();
    let sinr_e = if r == 0.0 {
        // the eavesdropper sits at the legitimate receiver and hears
        // exactly what it hears
        scenario.snr_at(scenario.f_c_hz, scenario.d_e_m, k)?
    } else {
        let budget_e = scenario
            .geometry(scenario.f_c_hz, scenario.d_e_m)
            .budget(k, 0.0, scenario.temperature_k)?;

        // quiet slot at the eavesdropper: eroded by however much the noise
        // pulses spread out on their way over r
        let width_an_emitted = rect_width_s(&probe)?;
        let width_an_at_e = rect_width_s(&probe.propagate(spectrum, r)?)?;
        let slot_at_e =
            (pulse_params.an_slot_offset_s - (width_an_at_e - width_an_emitted)).max(0.0);

        let width_info_at_e = rect_width_s(&probe.propagate(spectrum, scenario.d_e_m)?)?;
        let raw_offset_s = ((scenario.d_b_m + r) - scenario.d_e_m).abs() / C;
        let phase = raw_offset_s % pulse_params.symbol_period_s;
        let delta_s = phase.min(pulse_params.symbol_period_s - phase);
        let overlap = interval_overlap(delta_s, slot_at_e, width_info_at_e);
        let jammed_fraction = 1.0 - (overlap / width_info_at_e).clamp(0.0, 1.0);

        // noise power arriving at the eavesdropper from the receiver
        let an_geometry = LinkGeometry {
            tx_gain_dbi: scenario.rx_gain_dbi,
            tx_power_w: 1.0,
            ..scenario.geometry(scenario.f_c_hz, r)
        };
        let an_loss_db = an_geometry.budget(k, 0.0, scenario.temperature_k)?.total_loss_db();
        let an_gains = scenario.rx_gain_dbi + scenario.rx_gain_dbi;
        let p_an_rx = scenario.an_power_w * 10f64.powf((an_gains - an_loss_db) / 10.0);

        budget_e.p_rx_w / (budget_e.noise_total_w() + jammed_fraction * p_an_rx)
    };
    Ok(result_from_snrs(scenario, scenario.f_c_hz, snr_b, sinr_e))
}

/// Runs `schemes` over eavesdropper distances `d_es`, scheme-major.
///
/// The template's own `d_e_m` and `scheme` are replaced pairwise; results
/// come back in the exact order requested. `pulse_params` is only consulted
/// for [`Scheme::Ran`] entries and may be `None` when none are requested.
pub fn sweep_eavesdropper(
    template: &SecurityScenario,
    spectrum: &AbsorptionSpectrum,
    d_es: &[f64],
    schemes: &[Scheme],
    pulse_params: Option<&RanPulseParams>,
) -> Result<Vec<SecrecyResult>> {
    let mut results = Vec::with_capacity(d_es.len() * schemes.len());
    for &scheme in schemes {
        for &d_e in d_es {
            let scenario = template.with_eavesdropper(d_e).with_scheme(scheme);
            let result = match scheme {
                Scheme::Baseline => baseline_secrecy(&scenario, spectrum)?,
                Scheme::Tan => tan_secrecy(&scenario, spectrum)?,
                Scheme::Apm => apm_select_frequency(spectrum, &scenario)?,
                Scheme::Ran => {
                    let params = pulse_params.ok_or_else(|| {
                        ThzError::InvalidArgument(
                            "ran scheme needs pulse timing parameters".into(),
                        )
                    })?;
                    ran_secrecy(&scenario, spectrum, params)?
                }
            };
            results.push(result);
        }
    }
    Ok(results)
}
