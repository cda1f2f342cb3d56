//! Absorption coefficient spectra.
//!
//! The main path is a line-by-line sum: every catalog line contributes a
//! temperature-scaled intensity times a cutoff Van Vleck-Weisskopf profile,
//! weighted by the number density of its species. A second, structurally
//! unrelated engine (Rosenkranz-lineage water vapor plus the catalog's
//! oxygen lines) exists purely to cross-check the first over 0.1 to 1 THz.

pub mod lineshape;
mod rosenkranz;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::catalog::{AtmosphereState, LineCatalog, Species};
use crate::constants::{C_CM, NP_PER_CM_TO_DB_PER_KM};
use crate::error::{Result, ThzError};
use crate::grid::FrequencyGrid;
use lineshape::{line_halfwidth, line_intensity, shifted_center, vvw_profile_cutoff};

/// Which absorption model computes the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Line-by-line sum over the catalog. The default, valid over the whole
    /// grid range.
    LineByLine,
    /// Rosenkranz-lineage fifteen-line water-vapor model plus the catalog's
    /// oxygen lines. Only the water-vapor part is independent; oxygen reuses
    /// the line-by-line path. Valid 0.1 to 1 THz.
    Rosenkranz,
}

impl Engine {
    fn name(self) -> &'static str {
        match self {
            Engine::LineByLine => "line-by-line",
            Engine::Rosenkranz => "rosenkranz",
        }
    }

    fn check_range(self, grid: &FrequencyGrid) -> Result<()> {
        if self == Engine::Rosenkranz {
            for bound in [grid.f_start(), grid.f_stop()] {
                if !(rosenkranz::F_MIN_HZ..=rosenkranz::F_MAX_HZ).contains(&bound) {
                    return Err(ThzError::EngineRange {
                        engine: self.name(),
                        f_hz: bound,
                        f_low_hz: rosenkranz::F_MIN_HZ,
                        f_high_hz: rosenkranz::F_MAX_HZ,
                    });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = ThzError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "line-by-line" | "lbl" => Ok(Engine::LineByLine),
            "rosenkranz" | "rk" => Ok(Engine::Rosenkranz),
            other => Err(ThzError::InvalidArgument(format!(
                "unknown engine '{other}' (line-by-line, rosenkranz)"
            ))),
        }
    }
}

/// Catalog band wide enough to cover `grid` including far wings.
///
/// A line 750 GHz outside the grid can still reach the edge points, so load
/// catalogs with this band rather than the grid span itself.
pub fn catalog_band_for(grid: &FrequencyGrid) -> (f64, f64) {
    let cutoff_hz = lineshape::WING_CUTOFF_CM * C_CM;
    ((grid.f_start() - cutoff_hz).max(1.0), grid.f_stop() + cutoff_hz)
}

/// One catalog line with every state-dependent factor folded in.
///
/// `strength` is chosen so that the dB/km contribution at wavenumber nu is
/// `strength * vvw_profile_cutoff(nu, center, halfwidth)`.
struct PreparedLine {
    species: Species,
    center: f64,
    halfwidth: f64,
    strength: f64,
}

fn prepare_lines(catalog: &LineCatalog, state: &AtmosphereState) -> Result<Vec<PreparedLine>> {
    let n_h2o = state.n_h2o_cm3();
    let n_o2 = state.n_o2_cm3();
    let mut prepared = Vec::with_capacity(catalog.lines().len());
    for line in catalog.lines() {
        let density = match line.species {
            Species::H2O => n_h2o,
            Species::O2 => n_o2,
            Species::Other(_) => continue,
        };
        prepared.push(PreparedLine {
            species: line.species,
            center: shifted_center(line, state),
            halfwidth: line_halfwidth(line, state),
            strength: density
                * line_intensity(line, state.temperature_k())?
                * NP_PER_CM_TO_DB_PER_KM,
        });
    }
    Ok(prepared)
}

/// Errors unless at least one catalog line can reach the grid.
///
/// A catalog loaded for one band silently yields zeros on a disjoint grid;
/// this turns that mistake into the same error an empty parse would give.
fn check_lines_in_band(catalog: &LineCatalog, grid: &FrequencyGrid) -> Result<()> {
    let (f_low, f_high) = catalog_band_for(grid);
    let reachable = catalog
        .lines()
        .iter()
        .any(|l| (f_low..=f_high).contains(&l.center_frequency_hz()));
    if reachable {
        Ok(())
    } else {
        Err(ThzError::NoLinesInBand {
            f_low_hz: f_low,
            f_high_hz: f_high,
        })
    }
}

/// Absorption at one wavenumber, split into (k_h2o, k_o2) in dB/km.
///
/// Lines are accumulated in catalog order so the result is bit-reproducible
/// no matter how callers distribute grid points over threads.
fn eval_point(lines: &[PreparedLine], nu_cm: f64) -> (f64, f64) {
    let mut k_h2o = 0.0;
    let mut k_o2 = 0.0;
    for line in lines {
        let k = line.strength * vvw_profile_cutoff(nu_cm, line.center, line.halfwidth);
        match line.species {
            Species::H2O => k_h2o += k,
            Species::O2 => k_o2 += k,
            Species::Other(_) => {}
        }
    }
    (k_h2o, k_o2)
}

/// An absorption coefficient spectrum on a frequency grid.
#[derive(Debug, Clone)]
pub struct AbsorptionSpectrum {
    grid: FrequencyGrid,
    k_total_db_km: Vec<f64>,
    k_h2o_db_km: Vec<f64>,
    k_o2_db_km: Vec<f64>,
    provenance: String,
}

impl AbsorptionSpectrum {
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    /// Total absorption coefficient per grid point, dB/km.
    pub fn k_total_db_km(&self) -> &[f64] {
        &self.k_total_db_km
    }

    /// Water-vapor contribution per grid point, dB/km.
    pub fn k_h2o_db_km(&self) -> &[f64] {
        &self.k_h2o_db_km
    }

    /// Oxygen contribution per grid point, dB/km.
    pub fn k_o2_db_km(&self) -> &[f64] {
        &self.k_o2_db_km
    }

    /// Where the spectrum came from: catalog source, engine, atmosphere.
    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Total absorption at `f_hz`, linearly interpolated between grid points.
    ///
    /// Exact at grid points. Frequencies outside the span are an error, not
    /// an extrapolation.
    pub fn k_at(&self, f_hz: f64) -> Result<f64> {
        self.interpolate(&self.k_total_db_km, f_hz)
    }

    fn interpolate(&self, values: &[f64], f_hz: f64) -> Result<f64> {
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
        Ok(values[idx] + t * (values[idx + 1] - values[idx]))
    }

    /// Molecular absorption loss over `distance_m`, dB.
    pub fn loss_db(&self, f_hz: f64, distance_m: f64) -> Result<f64> {
        Ok(self.k_at(f_hz)? * distance_m / 1000.0)
    }

    /// Fraction of power surviving `distance_m`.
    pub fn transmittance(&self, f_hz: f64, distance_m: f64) -> Result<f64> {
        Ok(10f64.powf(-self.loss_db(f_hz, distance_m)? / 10.0))
    }

    /// Emissivity of the path, the complement of the transmittance.
    pub fn emissivity(&self, f_hz: f64, distance_m: f64) -> Result<f64> {
        Ok(1.0 - self.transmittance(f_hz, distance_m)?)
    }

    /// Serializes as `f_hz,k_total_db_km,k_h2o_db_km,k_o2_db_km` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("f_hz,k_total_db_km,k_h2o_db_km,k_o2_db_km\n");
        for i in 0..self.grid.n_points() {
            out.push_str(&crate::fmt_sci(self.grid.frequency(i)));
            out.push(',');
            out.push_str(&crate::fmt_sci(self.k_total_db_km[i]));
            out.push(',');
            out.push_str(&crate::fmt_sci(self.k_h2o_db_km[i]));
            out.push(',');
            out.push_str(&crate::fmt_sci(self.k_o2_db_km[i]));
            out.push('\n');
        }
        out
    }
}

/// Line-by-line absorption spectrum of `catalog` in `state` over `grid`.
pub fn absorption_coefficient(
    catalog: &LineCatalog,
    state: &AtmosphereState,
    grid: &FrequencyGrid,
) -> Result<AbsorptionSpectrum> {
    absorption_coefficient_with(Engine::LineByLine, catalog, state, grid)
}

/// Absorption spectrum computed by the chosen engine.
pub fn absorption_coefficient_with(
    engine: Engine,
    catalog: &LineCatalog,
    state: &AtmosphereState,
    grid: &FrequencyGrid,
) -> Result<AbsorptionSpectrum> {
    engine.check_range(grid)?;
    check_lines_in_band(catalog, grid)?;
    let lines = prepare_lines(catalog, state)?;
    let points: Vec<(f64, f64)> = match engine {
        Engine::LineByLine => (0..grid.n_points())
            .into_par_iter()
            .map(|i| eval_point(&lines, grid.frequency(i) / C_CM))
            .collect(),
        Engine::Rosenkranz => {
            let o2_lines: Vec<PreparedLine> = lines
                .into_iter()
                .filter(|l| l.species == Species::O2)
                .collect();
            (0..grid.n_points())
                .into_par_iter()
                .map(|i| {
                    let f = grid.frequency(i);
                    let k_h2o = rosenkranz::h2o_absorption_db_km(state, f);
                    let (_, k_o2) = eval_point(&o2_lines, f / C_CM);
                    (k_h2o, k_o2)
                })
                .collect()
        }
    };
    let (k_h2o, k_o2): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
    let k_total: Vec<f64> = k_h2o.iter().zip(&k_o2).map(|(h, o)| h + o).collect();
    Ok(AbsorptionSpectrum {
        grid: grid.clone(),
        k_total_db_km: k_total,
        k_h2o_db_km: k_h2o,
        k_o2_db_km: k_o2,
        provenance: format!(
            "catalog={} engine={} {}",
            catalog.source(),
            engine.name(),
            state.provenance_label()
        ),
    })
}

/// Line-by-line total absorption at a single frequency, dB/km.
///
/// Equivalent to evaluating [`absorption_coefficient`] at a grid point that
/// lands on `f_hz`, without building the spectrum.
pub fn absorption_at(catalog: &LineCatalog, state: &AtmosphereState, f_hz: f64) -> Result<f64> {
    if !(f_hz > 0.0) || !f_hz.is_finite() {
        return Err(ThzError::InvalidArgument(format!(
            "frequency must be positive, got {f_hz} Hz"
        )));
    }
    let lines = prepare_lines(catalog, state)?;
    let (k_h2o, k_o2) = eval_point(&lines, f_hz / C_CM);
    Ok(k_h2o + k_o2)
}

/// Absorption loss of coefficient `k_db_km` over `distance_km`, dB.
///
/// The exponential attenuation law in logarithmic form: loss is linear in
/// distance, so splitting a path splits the loss additively.
pub fn absorption_loss_db(k_db_km: f64, distance_km: f64) -> Result<f64> {
    if !(k_db_km >= 0.0) || !k_db_km.is_finite() {
        return Err(ThzError::InvalidArgument(format!(
            "absorption coefficient must be non-negative, got {k_db_km} dB/km"
        )));
    }
    if !(distance_km >= 0.0) || !distance_km.is_finite() {
        return Err(ThzError::InvalidArgument(format!(
            "distance must be non-negative, got {distance_km} km"
        )));
    }
    Ok(k_db_km * distance_km)
}

/// Fraction of power surviving an absorption loss of `loss_db`.
///
/// Splitting a path multiplies transmittances: tau(a + b) = tau(a) tau(b).
pub fn transmittance(loss_db: f64) -> Result<f64> {
    if !(loss_db >= 0.0) || !loss_db.is_finite() {
        return Err(ThzError::InvalidArgument(format!(
            "absorption loss must be non-negative, got {loss_db} dB"
        )));
    }
    Ok(10f64.powf(-loss_db / 10.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_catalog;
    use crate::constants::P_REF;

    fn sea_level() -> AtmosphereState {
        AtmosphereState::new(290.0, P_REF, 7.5, 0.20946).unwrap()
    }

    fn band_catalog(grid: &FrequencyGrid) -> LineCatalog {
        builtin_catalog(catalog_band_for(grid)).unwrap()
    }

    #[test]
    fn spectrum_peaks_on_the_557_ghz_line() {
        let grid = FrequencyGrid::new(0.5e12, 0.62e12, 601).unwrap();
        let spectrum =
            absorption_coefficient(&band_catalog(&grid), &sea_level(), &grid).unwrap();
        let peak_idx = spectrum
            .k_total_db_km()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let f_peak = grid.frequency(peak_idx);
        assert!((f_peak - 556.94e9).abs() < 1e9, "peak at {f_peak:e}");
    }

    #[test]
    fn total_is_the_sum_of_the_components() {
        let grid = FrequencyGrid::new(0.1e12, 1.0e12, 301).unwrap();
        let spectrum =
            absorption_coefficient(&band_catalog(&grid), &sea_level(), &grid).unwrap();
        for i in 0..grid.n_points() {
            assert_eq!(
                spectrum.k_total_db_km()[i],
                spectrum.k_h2o_db_km()[i] + spectrum.k_o2_db_km()[i]
            );
        }
    }

    #[test]
    fn dry_air_has_no_water_contribution_but_keeps_oxygen() {
        let grid = FrequencyGrid::new(0.1e12, 0.9e12, 401).unwrap();
        let dry = AtmosphereState::new(290.0, P_REF, 0.0, 0.20946).unwrap();
        let spectrum = absorption_coefficient(&band_catalog(&grid), &dry, &grid).unwrap();
        assert!(spectrum.k_h2o_db_km().iter().all(|&k| k == 0.0));
        assert!(spectrum.k_o2_db_km().iter().any(|&k| k > 0.0));
    }

    #[test]
    fn parallel_evaluation_matches_a_serial_loop_bitwise() {
        let grid = FrequencyGrid::new(0.2e12, 1.2e12, 757).unwrap();
        let catalog = band_catalog(&grid);
        let state = sea_level();
        let spectrum = absorption_coefficient(&catalog, &state, &grid).unwrap();
        let lines = prepare_lines(&catalog, &state).unwrap();
        for i in 0..grid.n_points() {
            let (h, o) = eval_point(&lines, grid.frequency(i) / C_CM);
            assert_eq!(spectrum.k_h2o_db_km()[i].to_bits(), h.to_bits());
            assert_eq!(spectrum.k_o2_db_km()[i].to_bits(), o.to_bits());
        }
    }

    #[test]
    fn single_frequency_evaluation_matches_the_spectrum_bitwise() {
        let grid = FrequencyGrid::new(0.3e12, 0.4e12, 11).unwrap();
        let catalog = band_catalog(&grid);
        let state = sea_level();
        let spectrum = absorption_coefficient(&catalog, &state, &grid).unwrap();
        for i in [0, 5, 10] {
            let k = absorption_at(&catalog, &state, grid.frequency(i)).unwrap();
            assert_eq!(k.to_bits(), spectrum.k_total_db_km()[i].to_bits());
        }
    }

    #[test]
    fn interpolation_is_exact_at_nodes_and_linear_between() {
        let grid = FrequencyGrid::new(0.3e12, 0.31e12, 3).unwrap();
        let spectrum =
            absorption_coefficient(&band_catalog(&grid), &sea_level(), &grid).unwrap();
        let k = spectrum.k_total_db_km();
        assert_eq!(spectrum.k_at(grid.frequency(1)).unwrap(), k[1]);
        let mid = spectrum.k_at(grid.frequency(0) + grid.step() / 2.0).unwrap();
        assert!((mid - 0.5 * (k[0] + k[1])).abs() < 1e-12 * k[0].abs().max(1.0));
        assert!(matches!(
            spectrum.k_at(0.29e12),
            Err(ThzError::FrequencyOutOfGrid { .. })
        ));
    }

    #[test]
    fn loss_transmittance_and_emissivity_are_consistent() {
        let grid = FrequencyGrid::new(0.3e12, 0.31e12, 3).unwrap();
        let spectrum =
            absorption_coefficient(&band_catalog(&grid), &sea_level(), &grid).unwrap();
        let f = 0.305e12;
        let loss = spectrum.loss_db(f, 500.0).unwrap();
        assert!((loss - spectrum.k_at(f).unwrap() * 0.5).abs() < 1e-12);
        let tau = spectrum.transmittance(f, 500.0).unwrap();
        assert!((tau - 10f64.powf(-loss / 10.0)).abs() < 1e-15);
        let eps = spectrum.emissivity(f, 500.0).unwrap();
        assert!((eps + tau - 1.0).abs() < 1e-15);
    }

    #[test]
    fn csv_has_the_pinned_header_and_one_row_per_point() {
        let grid = FrequencyGrid::new(0.3e12, 0.31e12, 3).unwrap();
        let spectrum =
            absorption_coefficient(&band_catalog(&grid), &sea_level(), &grid).unwrap();
        let csv = spectrum.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "f_hz,k_total_db_km,k_h2o_db_km,k_o2_db_km"
        );
        assert_eq!(lines.count(), 3);
    }

    #[test]
    fn rosenkranz_engine_rejects_frequencies_outside_its_range() {
        let grid = FrequencyGrid::new(0.3e12, 1.4e12, 12).unwrap();
        let err = absorption_coefficient_with(
            Engine::Rosenkranz,
            &band_catalog(&grid),
            &sea_level(),
            &grid,
        )
        .unwrap_err();
        assert!(matches!(err, ThzError::EngineRange { .. }));
    }

    #[test]
    fn engines_agree_on_where_the_183_ghz_peak_is() {
        let grid = FrequencyGrid::new(0.15e12, 0.22e12, 141).unwrap();
        let catalog = band_catalog(&grid);
        let state = sea_level();
        for engine in [Engine::LineByLine, Engine::Rosenkranz] {
            let s = absorption_coefficient_with(engine, &catalog, &state, &grid).unwrap();
            let peak = s
                .k_h2o_db_km()
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
            let f = grid.frequency(peak);
            assert!((f - 183.31e9).abs() < 1.5e9, "{engine}: peak at {f:e}");
        }
    }

    #[test]
    fn loss_is_the_plain_product_and_rejects_negatives() {
        let loss = absorption_loss_db(100.0, 0.2).unwrap();
        assert!((loss - 20.0).abs() < 1e-12);
        assert_eq!(absorption_loss_db(5.0, 0.0).unwrap(), 0.0);
        assert!(absorption_loss_db(-1.0, 1.0).is_err());
        assert!(absorption_loss_db(1.0, -1.0).is_err());

        let tau = transmittance(10.0).unwrap();
        assert!((tau - 0.1).abs() < 1e-15);
        assert_eq!(transmittance(0.0).unwrap(), 1.0);
        assert!(transmittance(-0.1).is_err());
    }

    #[test]
    fn disjoint_catalog_and_grid_report_no_lines() {
        let low_grid = FrequencyGrid::new(0.1e12, 0.3e12, 5).unwrap();
        let catalog = band_catalog(&low_grid);
        let far_grid = FrequencyGrid::new(8.0e12, 9.0e12, 5).unwrap();
        let err = absorption_coefficient(&catalog, &sea_level(), &far_grid).unwrap_err();
        assert!(matches!(err, ThzError::NoLinesInBand { .. }));
    }

    #[test]
    fn engine_names_round_trip_through_fromstr() {
        for engine in [Engine::LineByLine, Engine::Rosenkranz] {
            let parsed: Engine = engine.to_string().parse().unwrap();
            assert_eq!(parsed, engine);
        }
        assert!("voigt".parse::<Engine>().is_err());
    }
}
