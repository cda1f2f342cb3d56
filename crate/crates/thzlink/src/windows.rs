//! Transmission window discovery.
//!
//! A window is a contiguous run of grid points whose path loss from
//! molecular absorption stays under a threshold. Windows shrink as the
//! distance grows, which is what makes this band's usable spectrum
//! distance-dependent in the first place.

use crate::absorption::AbsorptionSpectrum;
use crate::error::{Result, ThzError};
use crate::grid::FrequencyGrid;

/// A contiguous low-loss band at a given distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralWindow {
    pub f_low_hz: f64,
    pub f_high_hz: f64,
    /// Distance the loss mask was evaluated at, m.
    pub distance_m: f64,
    /// Absorption-loss threshold defining the window, dB.
    pub threshold_db: f64,
    /// Largest absorption loss actually observed inside the window, dB.
    ///
    /// At most `threshold_db` except when a merged single-point notch pokes
    /// above it.
    pub max_loss_db: f64,
}

impl SpectralWindow {
    pub fn bandwidth_hz(&self) -> f64 {
        self.f_high_hz - self.f_low_hz
    }

    pub fn center_hz(&self) -> f64 {
        0.5 * (self.f_low_hz + self.f_high_hz)
    }

    pub fn contains(&self, f_hz: f64) -> bool {
        f_hz >= self.f_low_hz && f_hz <= self.f_high_hz
    }

    /// Header of the windows CSV schema.
    pub const CSV_HEADER: &'static str = "f_low_hz,f_high_hz,distance_m,threshold_db";

    /// One CSV row matching [`SpectralWindow::CSV_HEADER`].
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            crate::fmt_sci(self.f_low_hz),
            crate::fmt_sci(self.f_high_hz),
            crate::fmt_sci(self.distance_m),
            crate::fmt_sci(self.threshold_db)
        )
    }
}

/// Flips false points whose both neighbors are true, judged against the
/// original mask, then returns the inclusive index ranges of true runs.
///
/// The flip closes single-bin notches: one grid point scraping over the
/// threshold should not split an otherwise contiguous window in two.
fn true_runs_merged(mask: &[bool]) -> Vec<(usize, usize)> {
    let mut merged = mask.to_vec();
    for i in 1..mask.len().saturating_sub(1) {
        if !mask[i] && mask[i - 1] && mask[i + 1] {
            merged[i] = true;
        }
    }
    let mut runs = Vec::new();
    let mut start = None;
    for (i, &m) in merged.iter().enumerate() {
        match (m, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, merged.len() - 1));
    }
    runs
}

fn check_window_args(distance_m: f64, threshold_db: f64, min_bandwidth_hz: f64) -> Result<()> {
    if !(distance_m > 0.0) || !distance_m.is_finite() {
        return Err(ThzError::InvalidArgument(format!(
            "distance must be positive, got {distance_m} m"
        )));
    }
    if threshold_db < 0.0 || !threshold_db.is_finite() {
        return Err(ThzError::InvalidArgument(format!(
            "threshold must be nonnegative, got {threshold_db} dB"
        )));
    }
    if min_bandwidth_hz < 0.0 || !min_bandwidth_hz.is_finite() {
        return Err(ThzError::InvalidArgument(format!(
            "minimum bandwidth must be nonnegative, got {min_bandwidth_hz} Hz"
        )));
    }
    Ok(())
}

/// Index runs of the under-threshold mask at `distance_m`.
fn loss_runs(
    spectrum: &AbsorptionSpectrum,
    distance_m: f64,
    threshold_db: f64,
) -> Vec<(usize, usize)> {
    let d_km = distance_m / 1000.0;
    let mask: Vec<bool> = spectrum
        .k_total_db_km()
        .iter()
        .map(|&k| k * d_km <= threshold_db)
        .collect();
    true_runs_merged(&mask)
}

fn window_from_run(
    spectrum: &AbsorptionSpectrum,
    distance_m: f64,
    threshold_db: f64,
    run: (usize, usize),
) -> SpectralWindow {
    let grid: &FrequencyGrid = spectrum.grid();
    let d_km = distance_m / 1000.0;
    let max_k = spectrum.k_total_db_km()[run.0..=run.1]
        .iter()
        .fold(0.0f64, |acc, &k| acc.max(k));
    SpectralWindow {
        f_low_hz: grid.frequency(run.0),
        f_high_hz: grid.frequency(run.1),
        distance_m,
        threshold_db,
        max_loss_db: max_k * d_km,
    }
}

/// All windows of `spectrum` at `distance_m`, ascending in frequency.
///
/// A grid point belongs to the mask when its absorption loss k * d is at
/// most `threshold_db`. Single-point notches are merged over and runs
/// narrower than `min_bandwidth_hz` are dropped.
pub fn find_windows(
    spectrum: &AbsorptionSpectrum,
    distance_m: f64,
    threshold_db: f64,
    min_bandwidth_hz: f64,
) -> Result<Vec<SpectralWindow>> {
    check_window_args(distance_m, threshold_db, min_bandwidth_hz)?;
    let windows = loss_runs(spectrum, distance_m, threshold_db)
        .into_iter()
        .map(|run| window_from_run(spectrum, distance_m, threshold_db, run))
        .filter(|w| w.bandwidth_hz() >= min_bandwidth_hz)
        .collect();
    Ok(windows)
}

/// The quietest window wide enough for `required_bandwidth_hz`.
///
/// Among the windows at `distance_m`, picks the one with the lowest mean
/// absorption coefficient; ties resolve toward lower frequency. `None` when
/// no window offers the required bandwidth.
pub fn adaptive_band(
    spectrum: &AbsorptionSpectrum,
    distance_m: f64,
    required_bandwidth_hz: f64,
    threshold_db: f64,
) -> Result<Option<SpectralWindow>> {
    check_window_args(distance_m, threshold_db, required_bandwidth_hz)?;
    let k = spectrum.k_total_db_km();
    let best = loss_runs(spectrum, distance_m, threshold_db)
        .into_iter()
        .map(|run| {
            let mean = k[run.0..=run.1].iter().sum::<f64>() / (run.1 - run.0 + 1) as f64;
            (mean, window_from_run(spectrum, distance_m, threshold_db, run))
        })
        .filter(|(_, w)| w.bandwidth_hz() >= required_bandwidth_hz)
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.f_low_hz.total_cmp(&b.1.f_low_hz)));
    Ok(best.map(|(_, w)| w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absorption::{absorption_coefficient, catalog_band_for};
    use crate::catalog::{builtin_catalog, AtmosphereState};

    fn sea_spectrum(f_lo: f64, f_hi: f64, n: usize) -> AbsorptionSpectrum {
        let grid = FrequencyGrid::new(f_lo, f_hi, n).unwrap();
        let catalog = builtin_catalog(catalog_band_for(&grid)).unwrap();
        let state = AtmosphereState::new(290.0, 101325.0, 7.5, 0.20946).unwrap();
        absorption_coefficient(&catalog, &state, &grid).unwrap()
    }

    #[test]
    fn run_extraction_finds_maximal_runs() {
        let mask = [true, true, false, false, true, false];
        assert_eq!(true_runs_merged(&mask), vec![(0, 1), (4, 4)]);
        assert_eq!(true_runs_merged(&[false, false]), vec![]);
        assert_eq!(true_runs_merged(&[true]), vec![(0, 0)]);
    }

    #[test]
    fn single_notches_merge_but_wider_gaps_split() {
        let notch = [true, false, true, true];
        assert_eq!(true_runs_merged(&notch), vec![(0, 3)]);
        let gap = [true, false, false, true];
        assert_eq!(true_runs_merged(&gap), vec![(0, 0), (3, 3)]);
    }

    #[test]
    fn edge_points_never_count_as_notches() {
        let mask = [false, true, true, false];
        assert_eq!(true_runs_merged(&mask), vec![(1, 2)]);
    }

    #[test]
    fn flips_are_judged_against_the_original_mask() {
        // two isolated notches sharing a neighbor both close
        let mask = [true, false, true, false, true];
        assert_eq!(true_runs_merged(&mask), vec![(0, 4)]);
    }

    #[test]
    fn short_range_spectrum_has_windows_between_the_big_lines() {
        let spectrum = sea_spectrum(0.3e12, 0.8e12, 2001);
        let windows = find_windows(&spectrum, 100.0, 10.0, 1e9).unwrap();
        assert!(!windows.is_empty());
        for w in &windows {
            assert!(w.f_low_hz <= w.f_high_hz);
            assert!(w.bandwidth_hz() >= 1e9);
            assert!(w.max_loss_db <= w.threshold_db + 1e-12);
            // the 557 GHz line cannot be inside any window at 100 m
            assert!(!w.contains(556.94e9));
        }
        for pair in windows.windows(2) {
            assert!(pair[0].f_high_hz < pair[1].f_low_hz);
        }
    }

    #[test]
    fn windows_at_longer_range_nest_inside_shorter_range_windows() {
        let spectrum = sea_spectrum(0.1e12, 1.0e12, 3001);
        let near = find_windows(&spectrum, 100.0, 10.0, 1e9).unwrap();
        for d in [200.0, 500.0, 1000.0, 5000.0] {
            let far = find_windows(&spectrum, d, 10.0, 1e9).unwrap();
            for w in &far {
                assert!(
                    near.iter()
                        .any(|n| n.f_low_hz <= w.f_low_hz && w.f_high_hz <= n.f_high_hz),
                    "window {:?} at {d} m not nested",
                    (w.f_low_hz, w.f_high_hz)
                );
            }
        }
    }

    #[test]
    fn total_window_bandwidth_grows_with_the_threshold() {
        let spectrum = sea_spectrum(0.1e12, 1.0e12, 2001);
        let total = |threshold: f64| {
            find_windows(&spectrum, 500.0, threshold, 0.0)
                .unwrap()
                .iter()
                .map(SpectralWindow::bandwidth_hz)
                .sum::<f64>()
        };
        assert!(total(3.0) <= total(10.0));
        assert!(total(10.0) <= total(30.0));
    }

    #[test]
    fn adaptive_band_picks_the_lowest_mean_coefficient() {
        let spectrum = sea_spectrum(0.1e12, 1.0e12, 2001);
        let best = adaptive_band(&spectrum, 200.0, 1e9, 10.0).unwrap().unwrap();
        assert!(best.bandwidth_hz() >= 1e9);
        let grid = spectrum.grid();
        let mean_of = |w: &SpectralWindow| {
            let i0 = grid.nearest_index(w.f_low_hz).unwrap();
            let i1 = grid.nearest_index(w.f_high_hz).unwrap();
            spectrum.k_total_db_km()[i0..=i1].iter().sum::<f64>() / (i1 - i0 + 1) as f64
        };
        let best_mean = mean_of(&best);
        for w in find_windows(&spectrum, 200.0, 10.0, 1e9).unwrap() {
            assert!(best_mean <= mean_of(&w) + 1e-12);
        }
    }

    #[test]
    fn adaptive_band_respects_the_required_bandwidth() {
        let spectrum = sea_spectrum(0.1e12, 1.0e12, 2001);
        let narrow_ok = adaptive_band(&spectrum, 200.0, 1e9, 10.0).unwrap().unwrap();
        // demand more bandwidth than the quietest window offers and the
        // selection must move to a different (wider) window or give up
        let wide = adaptive_band(&spectrum, 200.0, narrow_ok.bandwidth_hz() + 1.0, 10.0).unwrap();
        if let Some(w) = wide {
            assert!(w.bandwidth_hz() > narrow_ok.bandwidth_hz());
            assert_ne!(w.f_low_hz, narrow_ok.f_low_hz);
        }
        assert!(adaptive_band(&spectrum, 200.0, 1e15, 10.0).unwrap().is_none());
    }

    #[test]
    fn impossible_thresholds_leave_no_window() {
        let spectrum = sea_spectrum(0.3e12, 0.5e12, 501);
        let windows = find_windows(&spectrum, 50_000.0, 1e-6, 0.0).unwrap();
        assert!(windows.is_empty());
        assert_eq!(adaptive_band(&spectrum, 50_000.0, 0.0, 1e-6).unwrap(), None);
    }

    #[test]
    fn csv_row_matches_the_pinned_header() {
        let w = SpectralWindow {
            f_low_hz: 3e11,
            f_high_hz: 4e11,
            distance_m: 100.0,
            threshold_db: 10.0,
            max_loss_db: 8.5,
        };
        assert_eq!(SpectralWindow::CSV_HEADER.split(',').count(), 4);
        assert_eq!(w.to_csv_row().split(',').count(), 4);
        assert!(w.to_csv_row().starts_with("3.00000000e11"));
    }
}
