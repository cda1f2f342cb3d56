//! Wideband pulse propagation through the absorbing channel.
//!
//! A [`Pulse`] is a complex baseband record around a carrier. Propagation
//! happens in the frequency domain: each FFT bin is attenuated by the
//! channel magnitude at its absolute frequency. The free-space phase
//! exp(-j 2 pi f d / c) is linear in f, which is exactly a delay of d/c, so
//! the propagated record is returned in the retarded frame with that phase
//! removed and only real positive per-bin gains applied. Anything dispersive
//! enough to reshape the envelope shows up in |H(f)| through the absorption
//! lines.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::absorption::AbsorptionSpectrum;
use crate::channel::spreading_loss_db;
use crate::constants::C;
use crate::error::{Result, ThzError};
use crate::grid::FrequencyGrid;

/// A uniformly sampled complex baseband record around a carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct Pulse {
    carrier_hz: f64,
    sample_interval_s: f64,
    samples: Vec<Complex64>,
}

impl Pulse {
    /// Wraps existing samples. The record length must be a power of two (it
    /// is also the FFT grid), the carrier and sample interval positive.
    pub fn new(carrier_hz: f64, sample_interval_s: f64, samples: Vec<Complex64>) -> Result<Self> {
        if !(carrier_hz > 0.0) || !carrier_hz.is_finite() {
            return Err(ThzError::InvalidArgument(format!(
                "carrier must be positive, got {carrier_hz} Hz"
            )));
        }
        if !(sample_interval_s > 0.0) || !sample_interval_s.is_finite() {
            return Err(ThzError::InvalidArgument(format!(
                "sample interval must be positive, got {sample_interval_s} s"
            )));
        }
        if samples.len() < 2 || !samples.len().is_power_of_two() {
            return Err(ThzError::InvalidArgument(format!(
                "record length must be a power of two >= 2, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(ThzError::InvalidArgument("non-finite sample".into()));
        }
        Ok(Self {
            carrier_hz,
            sample_interval_s,
            samples,
        })
    }

    /// Transform-limited Gaussian pulse centered in the record.
    ///
    /// `rms_width_s` is the standard deviation of the intensity |x|^2 in
    /// time, the width that [`Pulse::rms_width_s`] measures. The record must
    /// be at least 12 widths long so the tails fit.
    pub fn gaussian(
        carrier_hz: f64,
        rms_width_s: f64,
        sample_interval_s: f64,
        n_samples: usize,
    ) -> Result<Self> {
        if !(rms_width_s > 0.0) || !rms_width_s.is_finite() {
            return Err(ThzError::InvalidArgument(format!(
                "rms width must be positive, got {rms_width_s} s"
            )));
        }
        let duration = sample_interval_s * n_samples as f64;
        if duration < 12.0 * rms_width_s {
            return Err(ThzError::InvalidArgument(format!(
                "record of {duration:.3e} s too short for a {rms_width_s:.3e} s pulse"
            )));
        }
        let t0 = 0.5 * duration;
        let samples = (0..n_samples)
            .map(|i| {
                let t = i as f64 * sample_interval_s - t0;
                Complex64::new((-t * t / (4.0 * rms_width_s * rms_width_s)).exp(), 0.0)
            })
            .collect();
        Self::new(carrier_hz, sample_interval_s, samples)
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn sample_interval_s(&self) -> f64 {
        self.sample_interval_s
    }

    pub fn sample_rate_hz(&self) -> f64 {
        1.0 / self.sample_interval_s
    }

    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Sample times starting at zero.
    pub fn times_s(&self) -> Vec<f64> {
        (0..self.samples.len())
            .map(|i| i as f64 * self.sample_interval_s)
            .collect()
    }

    /// Pulse energy, the discrete integral of |x|^2 dt.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * self.sample_interval_s
    }

    /// Intensity-weighted mean arrival time.
    pub fn centroid_time_s(&self) -> Result<f64> {
        let energy: f64 = self.samples.iter().map(|s| s.norm_sqr()).sum();
        if energy <= 0.0 {
            return Err(ThzError::InvalidArgument("zero-energy pulse".into()));
        }
        let first: f64 = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, s)| i as f64 * s.norm_sqr())
            .sum();
        Ok(first / energy * self.sample_interval_s)
    }

    /// RMS temporal width: the standard deviation of |x|^2 over time.
    pub fn rms_width_s(&self) -> Result<f64> {
        let centroid = self.centroid_time_s()? / self.sample_interval_s;
        let energy: f64 = self.samples.iter().map(|s| s.norm_sqr()).sum();
        let second: f64 = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, s)| (i as f64 - centroid).powi(2) * s.norm_sqr())
            .sum();
        Ok((second / energy).sqrt() * self.sample_interval_s)
    }

    /// Serializes as `t_s,re,im` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_s,re,im\n");
        for (i, s) in self.samples.iter().enumerate() {
            out.push_str(&crate::fmt_sci(i as f64 * self.sample_interval_s));
            out.push(',');
            out.push_str(&crate::fmt_sci(s.re));
            out.push(',');
            out.push_str(&crate::fmt_sci(s.im));
            out.push('\n');
        }
        out
    }

    /// Propagates the pulse over `distance_m` through `spectrum`.
    ///
    /// Builds the transfer function at that distance and applies it with
    /// [`propagate_pulse`]. Zero distance returns the input unchanged.
    pub fn propagate(&self, spectrum: &AbsorptionSpectrum, distance_m: f64) -> Result<Pulse> {
        if distance_m < 0.0 || !distance_m.is_finite() {
            return Err(ThzError::InvalidArgument(format!(
                "distance must be nonnegative, got {distance_m} m"
            )));
        }
        if distance_m == 0.0 {
            return Ok(self.clone());
        }
        propagate_pulse(self, &channel_transfer_function(spectrum, distance_m)?)
    }
}

/// A complex channel response sampled on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunction {
    grid: FrequencyGrid,
    values: Vec<Complex64>,
}

impl TransferFunction {
    /// Wraps per-grid-point values; one value per grid frequency.
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(ThzError::InvalidArgument(format!(
                "{} transfer values for a {}-point grid",
                values.len(),
                grid.n_points()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// |H| at `f_hz`, linearly interpolated between grid points.
    pub fn magnitude_at(&self, f_hz: f64) -> Result<f64> {
        if !self.grid.contains(f_hz) || !f_hz.is_finite() {
            return Err(ThzError::FrequencyOutOfGrid {
                f_hz,
                grid_low_hz: self.grid.f_start(),
                grid_high_hz: self.grid.f_stop(),
            });
        }
        let step = self.grid.step();
        let idx = (((f_hz - self.grid.f_start()) / step) as usize).min(self.grid.n_points() - 2);
        let t = ((f_hz - self.grid.frequency(idx)) / step).clamp(0.0, 1.0);
        let (a, b) = (self.values[idx].norm(), self.values[idx + 1].norm());
        Ok(a + t * (b - a))
    }

    fn is_identity(&self) -> bool {
        self.values.iter().all(|v| v.re == 1.0 && v.im == 0.0)
    }
}

/// Complex channel transfer function of `spectrum` at `distance_m`.
///
/// Per grid point, H(f) = 10^-(spreading + absorption)/20 *
/// exp(-j 2 pi f d / c), without antenna gains. The phase slope encodes the
/// group delay d/c. The magnitude stays in (0, 1]: distances small enough to
/// put 4 pi f d / c under one are inside the near field and rejected.
pub fn channel_transfer_function(
    spectrum: &AbsorptionSpectrum,
    distance_m: f64,
) -> Result<TransferFunction> {
    let grid = spectrum.grid();
    if 4.0 * std::f64::consts::PI * grid.f_start() * distance_m < C {
        return Err(ThzError::InvalidArgument(format!(
            "distance {distance_m} m is inside the near field at {:e} Hz",
            grid.f_start()
        )));
    }
    let mut values = Vec::with_capacity(grid.n_points());
    for i in 0..grid.n_points() {
        let f = grid.frequency(i);
        let loss_db =
            spreading_loss_db(f, distance_m)? + spectrum.k_total_db_km()[i] * distance_m / 1000.0;
        let magnitude = 10f64.powf(-loss_db / 20.0);
        let phase = -2.0 * std::f64::consts::PI * f * distance_m / C;
        values.push(Complex64::from_polar(magnitude, phase));
    }
    TransferFunction::new(grid.clone(), values)
}

/// Applies a transfer function to a pulse in the frequency domain.
///
/// The output is in the retarded frame: only the interpolated channel
/// magnitude touches each bin, since the linear part of the phase is a pure
/// flight delay that would push the pulse out of its own record. The
/// transfer grid must cover the sampled band, carrier +- fs/2. The record is
/// zero-padded fourfold before the FFT so the channel's ringing has room to
/// decay instead of wrapping onto the pulse. An all-ones transfer function
/// returns the input bit for bit.
pub fn propagate_pulse(pulse: &Pulse, transfer: &TransferFunction) -> Result<Pulse> {
    if transfer.is_identity() {
        return Ok(pulse.clone());
    }
    let fs = pulse.sample_rate_hz();
    let (f_lo, f_hi) = (pulse.carrier_hz - fs / 2.0, pulse.carrier_hz + fs / 2.0);
    let grid = transfer.grid();
    if !(grid.contains(f_lo) && grid.contains(f_hi)) {
        return Err(ThzError::BandNotCovered {
            f_low_hz: f_lo,
            f_high_hz: f_hi,
            grid_low_hz: grid.f_start(),
            grid_high_hz: grid.f_stop(),
        });
    }

    let n = pulse.samples.len();
    let n_fft = 4 * n;
    let mut buf = pulse.samples.clone();
    buf.resize(n_fft, Complex64::new(0.0, 0.0));

    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n_fft).process(&mut buf);

    let df = fs / n_fft as f64;
    for (m, value) in buf.iter_mut().enumerate() {
        let nu = if m <= n_fft / 2 {
            m as f64 * df
        } else {
            (m as f64 - n_fft as f64) * df
        };
        *value *= transfer.magnitude_at(pulse.carrier_hz + nu)?;
    }

    planner.plan_fft_inverse(n_fft).process(&mut buf);
    let scale = 1.0 / n_fft as f64;
    buf.truncate(n);
    for value in &mut buf {
        *value *= scale;
    }
    Pulse::new(pulse.carrier_hz, pulse.sample_interval_s, buf)
}
