//! Frequency-domain propagation checked against a naive DFT oracle, plus
//! the energy and broadening behavior the channel model promises.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thzlink::absorption::{absorption_coefficient, catalog_band_for};
use thzlink::catalog::{builtin_catalog, AtmosphereState, LineCatalog, Species, SpectralLine};
use thzlink::channel::{channel_transfer_function, propagate_pulse, Pulse, TransferFunction};
use thzlink::grid::FrequencyGrid;

fn sea_spectrum(f_lo: f64, f_hi: f64, n: usize) -> thzlink::AbsorptionSpectrum {
    let grid = FrequencyGrid::new(f_lo, f_hi, n).unwrap();
    let catalog = builtin_catalog(catalog_band_for(&grid)).unwrap();
    absorption_coefficient(&catalog, &AtmosphereState::sea_level_default(), &grid).unwrap()
}

/// Linear interpolation of the transfer magnitude, written independently of
/// the library's own lookup.
fn interp_magnitude(transfer: &TransferFunction, f: f64) -> f64 {
    let grid = transfer.grid();
    let step = grid.step();
    let x = (f - grid.f_start()) / step;
    let i = (x.floor() as usize).min(grid.n_points() - 2);
    let t = (x - i as f64).clamp(0.0, 1.0);
    let a = transfer.values()[i].norm();
    let b = transfer.values()[i + 1].norm();
    a + t * (b - a)
}

/// O(N^2) rebuild of the propagation: forward DFT of the zero-padded
/// record, magnitude-only channel, inverse DFT, truncate.
fn naive_propagate(pulse: &Pulse, transfer: &TransferFunction) -> Vec<Complex64> {
    let n = pulse.n_samples();
    let n_fft = 4 * n;
    let fs = pulse.sample_rate_hz();
    let df = fs / n_fft as f64;
    let tau = 2.0 * std::f64::consts::PI;

    let mut forward = vec![Complex64::new(0.0, 0.0); n_fft];
    for (k, value) in forward.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &x) in pulse.samples().iter().enumerate() {
            let angle = -tau * (k * j % n_fft) as f64 / n_fft as f64;
            acc += x * Complex64::from_polar(1.0, angle);
        }
        let nu = if k <= n_fft / 2 {
            k as f64 * df
        } else {
            (k as f64 - n_fft as f64) * df
        };
        *value = acc * interp_magnitude(transfer, pulse.carrier_hz() + nu);
    }

    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (j, value) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &big_x) in forward.iter().enumerate() {
            let angle = tau * (k * j % n_fft) as f64 / n_fft as f64;
            acc += big_x * Complex64::from_polar(1.0, angle);
        }
        *value = acc / n_fft as f64;
    }
    out
}

#[test]
fn fft_propagation_matches_the_naive_dft() {
    let spectrum = sea_spectrum(0.29e12, 0.33e12, 401);
    let pulse = Pulse::gaussian(0.31e12, 100e-12, 50e-12, 64).unwrap();
    let transfer = channel_transfer_function(&spectrum, 25.0).unwrap();
    let fast = propagate_pulse(&pulse, &transfer).unwrap();
    let slow = naive_propagate(&pulse, &transfer);
    let scale = slow.iter().map(|x| x.norm()).fold(0.0, f64::max);
    for (a, b) in fast.samples().iter().zip(&slow) {
        assert!(
            (a - b).norm() <= 1e-9 * scale,
            "fft {a:?} vs dft {b:?} at scale {scale:.3e}"
        );
    }
}

#[test]
fn parseval_holds_for_the_propagated_record() {
    let spectrum = sea_spectrum(0.28e12, 0.34e12, 401);
    let pulse = Pulse::gaussian(0.31e12, 60e-12, 20e-12, 128).unwrap();
    let out = pulse.propagate(&spectrum, 12.0).unwrap();

    let time_energy: f64 = out.samples().iter().map(|x| x.norm_sqr()).sum();
    let n = out.n_samples();
    let tau = 2.0 * std::f64::consts::PI;
    let mut freq_energy = 0.0;
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &x) in out.samples().iter().enumerate() {
            let angle = -tau * (k * j % n) as f64 / n as f64;
            acc += x * Complex64::from_polar(1.0, angle);
        }
        freq_energy += acc.norm_sqr();
    }
    freq_energy /= n as f64;
    assert!(
        (time_energy - freq_energy).abs() <= 1e-9 * time_energy,
        "time {time_energy:.12e} vs freq {freq_energy:.12e}"
    );
}

#[test]
fn broadening_grows_strictly_with_distance_in_an_absorbing_band() {
    // band straddling the strongest water line, where the absorption
    // profile reshapes the pulse spectrum hardest
    let spectrum = sea_spectrum(0.485e12, 0.605e12, 1201);
    let pulse = Pulse::gaussian(0.545e12, 50e-12, 10e-12, 512).unwrap();
    let mut last = pulse.rms_width_s().unwrap();
    for d in [1.0, 5.0, 10.0, 20.0, 50.0] {
        let width = pulse.propagate(&spectrum, d).unwrap().rms_width_s().unwrap();
        assert!(width > last, "width {width:.6e} did not grow at {d} m");
        last = width;
    }
}

#[test]
fn flat_bands_leave_the_width_alone() {
    // a single line 1.3 THz below the pulse band: past the wing cutoff, so
    // in-band absorption is exactly zero and only the smooth spreading
    // magnitude touches the spectrum
    let line = SpectralLine {
        species: Species::H2O,
        isotopologue: 1,
        center_wavenumber: 6.0,
        intensity: 8.0e-23,
        air_halfwidth: 0.09,
        self_halfwidth: 0.45,
        lower_state_energy: 100.0,
        temperature_exponent: 0.75,
        pressure_shift: -0.005,
    };
    let catalog = LineCatalog::from_lines(vec![line], "far-line");
    let grid = FrequencyGrid::new(0.73e12, 1.55e12, 821).unwrap();
    let state = AtmosphereState::sea_level_default();
    let spectrum = absorption_coefficient(&catalog, &state, &grid).unwrap();
    let band_lo = grid.nearest_index(1.45e12).unwrap();
    for i in band_lo..grid.n_points() {
        assert_eq!(spectrum.k_total_db_km()[i], 0.0);
    }

    let pulse = Pulse::gaussian(1.5e12, 60e-12, 20e-12, 256).unwrap();
    let w0 = pulse.propagate(&spectrum, 1.0).unwrap().rms_width_s().unwrap();
    for d in [10.0, 100.0] {
        let w = pulse.propagate(&spectrum, d).unwrap().rms_width_s().unwrap();
        assert!(
            (w / w0 - 1.0).abs() < 1e-9,
            "width moved from {w0:.9e} to {w:.9e} at {d} m"
        );
    }
}

#[test]
fn channels_with_unit_or_smaller_gain_never_add_energy() {
    let grid = FrequencyGrid::new(0.28e12, 0.34e12, 101).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(0xacc);
    let pulse = Pulse::gaussian(0.31e12, 60e-12, 20e-12, 128).unwrap();
    for _ in 0..20 {
        let values: Vec<Complex64> = (0..grid.n_points())
            .map(|_| {
                Complex64::from_polar(
                    rng.gen::<f64>(),
                    rng.gen::<f64>() * std::f64::consts::TAU,
                )
            })
            .collect();
        let transfer = TransferFunction::new(grid.clone(), values).unwrap();
        let out = propagate_pulse(&pulse, &transfer).unwrap();
        assert!(out.energy() <= pulse.energy() * (1.0 + 1e-12));
    }

    let spectrum = sea_spectrum(0.28e12, 0.34e12, 101);
    for d in [1.0, 10.0, 100.0] {
        let out = pulse.propagate(&spectrum, d).unwrap();
        assert!(out.energy() < pulse.energy());
    }
}
