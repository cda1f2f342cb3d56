//! Independent water-vapor absorption model used as a cross-check.
//!
//! Fifteen-line model in the lineage of P.W. Rosenkranz, Radio Science v.33,
//! pp.919-928 (1998), with the Wentz modifications that radiometer forward
//! operators carry: a reshaped 22 GHz line, Clough-style local line bases,
//! and retuned dry and wet continuum terms. Rewritten here in f64 from a
//! widely circulated Fortran implementation.
//!
//! This model shares nothing with the line-by-line path: different line list,
//! 300 K reference temperature, its own continuum. Agreement between the two
//! engines is therefore meaningful evidence that neither is misconverted.
//! Valid from 0.1 to 1 THz; the line list stops at 916 GHz, so above 1 THz
//! the model has nothing to say.

use std::sync::OnceLock;

use crate::catalog::AtmosphereState;

const NLINES: usize = 15;

/// Lowest frequency the model is trusted at, Hz.
pub const F_MIN_HZ: f64 = 0.1e12;
/// Highest frequency the model is trusted at, Hz.
pub const F_MAX_HZ: f64 = 1.0e12;

struct Coefficients {
    f0: [f64; NLINES],
    b1: [f64; NLINES],
    b2: [f64; NLINES],
    b3: [f64; NLINES],
    b4: [f64; NLINES],
    b5: [f64; NLINES],
    b6: [f64; NLINES],
}

impl Coefficients {
    fn new() -> Self {
        // line frequencies, GHz
        let f0 = [
            22.2351, 183.3101, 321.2256, 325.1529, 380.1974, 439.1508, 443.0183, 448.0011,
            470.8890, 474.6891, 488.4911, 556.9360, 620.7008, 752.0332, 916.1712,
        ];

        // line intensities at 300 K
        let b1 = [
            0.1310e-13, 0.2273e-11, 0.8036e-13, 0.2694e-11, 0.2438e-10, 0.2179e-11, 0.4624e-12,
            0.2562e-10, 0.8369e-12, 0.3263e-11, 0.6659e-12, 0.1531e-08, 0.1707e-10, 0.1011e-08,
            0.4227e-10,
        ];

        // temperature coefficients of the intensities
        let b2 = [
            2.144, 0.668, 6.179, 1.541, 1.048, 3.595, 5.048, 1.405, 3.597, 2.379, 2.852, 0.159,
            2.391, 0.396, 1.441,
        ];

        // air-broadened width parameters at 300 K
        let mut b3 = [
            0.0281, 0.0281, 0.023, 0.0278, 0.0287, 0.021, 0.0186, 0.0263, 0.0215, 0.0236, 0.026,
            0.0321, 0.0244, 0.0306, 0.0267,
        ];

        // self-broadened width parameters at 300 K
        let b5 = [
            0.1349, 0.1491, 0.108, 0.135, 0.1541, 0.090, 0.0788, 0.1275, 0.0983, 0.1095, 0.1313,
            0.1320, 0.1140, 0.1253, 0.1275,
        ];

        // temperature exponents of air broadening
        let b4 = [
            0.69, 0.64, 0.67, 0.68, 0.54, 0.63, 0.60, 0.66, 0.66, 0.65, 0.69, 0.69, 0.71, 0.68,
            0.70,
        ];

        // temperature exponents of self broadening
        let b6 = [
            0.61, 0.85, 0.54, 0.74, 0.89, 0.52, 0.50, 0.67, 0.65, 0.64, 0.72, 1.0, 0.68, 0.84,
            0.78,
        ];

        let mut b1_modified = [0.0; NLINES];
        for i in 0..NLINES {
            b1_modified[i] = 1.8281089e14 * b1[i] / (f0[i] * f0[i]);
        }

        // convert self widths to ratios against the air widths
        let mut b5_modified = [0.0; NLINES];
        for i in 0..NLINES {
            b5_modified[i] = b5[i] / b3[i];
        }

        // the reshaped 22 GHz line uses a narrowed air width
        b3[0] /= 1.040;

        Self {
            f0,
            b1: b1_modified,
            b2,
            b3,
            b4,
            b5: b5_modified,
            b6,
        }
    }
}

/// Water-vapor absorption coefficient, dB/km.
///
/// No range check here; the [`Engine`](super::Engine) dispatch enforces the
/// 0.1 to 1 THz validity window before calling in.
pub fn h2o_absorption_db_km(state: &AtmosphereState, f_hz: f64) -> f64 {
    static COEF: OnceLock<Coefficients> = OnceLock::new();
    let c = COEF.get_or_init(Coefficients::new);

    let pv = state.vapor_partial_pressure_pa() / 100.0;
    if pv <= 0.0 {
        return 0.0;
    }
    let p = state.pressure_pa() / 100.0;
    let t = state.temperature_k();
    let freq = f_hz / 1e9;

    let pwet = 0.1 * pv;
    let pdry = 0.1 * p - pwet;
    let tht = 300.0 / t;
    let xterm = 1.0 - tht;
    let freq_sq = freq * freq;

    let mut sum = 0.0;
    for i in 0..NLINES {
        let f0sq = c.f0[i] * c.f0[i];
        let ga = c.b3[i] * (pdry * tht.powf(c.b4[i]) + c.b5[i] * pwet * tht.powf(c.b6[i]));
        let ga_sq = ga * ga;
        let s = c.b1[i] * (c.b2[i] * xterm).exp();
        let rnuneg = c.f0[i] - freq;
        let rnupos = c.f0[i] + freq;

        // Clough's definition of the local line contribution: the line is
        // measured against its own value 750 GHz away
        let base = ga / (562_500.0 + ga_sq);

        if i != 0 {
            if rnuneg.abs() < 750.0 {
                sum += s * (ga / (ga_sq + rnuneg * rnuneg) - base);
            }
            if rnupos.abs() <= 750.0 {
                sum += s * (ga / (ga_sq + rnupos * rnupos) - base);
            }
        } else {
            // reshaped 22 GHz line
            let chi = if freq < 19.0 {
                let u = ((freq - 19.0).abs() / 16.5).clamp(0.0, 1.0);
                0.07 * ga + 0.93 * ga * u * u * (3.0 - 2.0 * u)
            } else {
                0.07 * ga
            };
            let chi_sq = chi * chi;
            sum += s * 2.0 * ((ga - chi) * freq_sq + (ga + chi) * (f0sq + ga_sq - chi_sq))
                / ((freq_sq - f0sq - ga_sq + chi_sq).powi(2) + 4.0 * freq_sq * ga_sq);
        }
    }
    let sum = sum.max(0.0);

    let ffac = if freq < 90.0 {
        1.0 + 0.1 * ((90.0 - freq) / 90.0).powf(1.4)
    } else {
        1.0
    };

    let sftot = pwet
        * freq
        * tht.powf(3.5)
        * (sum
            + ffac * 1.1 * 1.2957246e-6 * pdry / tht.sqrt()
            + 0.348 * freq.powf(0.15) * 4.2952193e-5 * pwet * tht.powi(4));

    0.1820 * freq * sftot
}
