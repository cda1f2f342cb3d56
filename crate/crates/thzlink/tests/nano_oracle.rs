//! The mutual-information quadrature checked against Monte Carlo sampling,
//! and the optimizer checked against brute-force grids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thzlink::nano::{optimize_source, ts_ook_capacity, TsOokRegime};

fn asymmetric() -> TsOokRegime {
    TsOokRegime {
        pulse_energy: 10.0,
        silence_noise: 1.0,
        pulse_noise: 3.0,
        spreading_factor: 1000.0,
    }
}

fn gaussian_pdf(y: f64, mean: f64, variance: f64) -> f64 {
    let d = y - mean;
    (-d * d / (2.0 * variance)).exp() / (std::f64::consts::TAU * variance).sqrt()
}

/// Standard normal via Box-Muller.
fn standard_normal(rng: &mut ChaCha20Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[test]
fn quadrature_matches_a_monte_carlo_estimate() {
    let r = asymmetric();
    let p_one = 0.4;
    let exact = ts_ook_capacity(&r, p_one).unwrap();

    let mean_one = r.pulse_energy.sqrt();
    let var_zero = r.silence_noise;
    let var_one = r.silence_noise + r.pulse_noise;
    let mut rng = ChaCha20Rng::seed_from_u64(0x0031);
    let samples = 10_000_000;
    let mut acc = 0.0;
    for _ in 0..samples {
        let one = rng.gen::<f64>() < p_one;
        let (mean, var) = if one { (mean_one, var_one) } else { (0.0, var_zero) };
        let y = mean + var.sqrt() * standard_normal(&mut rng);
        let conditional = gaussian_pdf(y, mean, var);
        let marginal = (1.0 - p_one) * gaussian_pdf(y, 0.0, var_zero)
            + p_one * gaussian_pdf(y, mean_one, var_one);
        acc += (conditional / marginal).log2();
    }
    let estimate = acc / samples as f64;
    assert!(
        (estimate - exact).abs() <= 1e-3,
        "monte carlo {estimate:.6} vs quadrature {exact:.6}"
    );
}

#[test]
fn information_is_unimodal_across_the_bias_range() {
    let r = asymmetric();
    let values: Vec<f64> = (0..=100)
        .map(|i| ts_ook_capacity(&r, i as f64 / 100.0).unwrap())
        .collect();
    let mut rises = 0;
    let mut falls = 0;
    let mut switched = false;
    for pair in values.windows(2) {
        if pair[1] > pair[0] {
            rises += 1;
            assert!(!switched, "information rose again after falling");
        } else {
            falls += 1;
            switched = true;
        }
    }
    assert!(rises > 10 && falls > 10);
}

#[test]
fn golden_section_agrees_with_a_fine_grid() {
    for regime in [
        asymmetric(),
        TsOokRegime {
            pulse_energy: 4.0,
            silence_noise: 1.0,
            pulse_noise: 0.5,
            spreading_factor: 1000.0,
        },
        TsOokRegime::calibrated().unwrap(),
    ] {
        let opt = optimize_source(&regime).unwrap();
        let n = 10_000;
        let (mut best_p, mut best_i) = (0.0, f64::NEG_INFINITY);
        for i in 0..=n {
            let p = i as f64 / n as f64;
            let mi = ts_ook_capacity(&regime, p).unwrap();
            if mi > best_i {
                best_i = mi;
                best_p = p;
            }
        }
        assert!(
            (opt.p_one - best_p).abs() <= 1e-3,
            "golden {:.5} vs grid {best_p:.5}",
            opt.p_one
        );
        assert!(opt.capacity_bit >= best_i - 1e-9);
    }
}

#[test]
fn extra_pulse_noise_never_raises_the_optimal_bias() {
    let silence = 1.0;
    let mut last = f64::INFINITY;
    for factor in [0.0, 0.5, 1.0, 2.0] {
        let r = TsOokRegime {
            pulse_energy: 10.0,
            silence_noise: silence,
            pulse_noise: factor * silence,
            spreading_factor: 1000.0,
        };
        let p = optimize_source(&r).unwrap().p_one;
        assert!(
            p <= last + 2e-4,
            "p* rose from {last:.5} to {p:.5} at factor {factor}"
        );
        if factor == 0.0 {
            // symmetric noise: the optimum is an unbiased coin
            assert!((p - 0.5).abs() < 0.01, "{p}");
        } else {
            assert!(p < 0.5);
        }
        last = p;
    }
}
