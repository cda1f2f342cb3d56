//! The seven subcommands.
//!
//! Each command is a pure function from the resolved configuration (plus
//! catalog text) to its artifacts. All file and cache handling lives in the
//! caller, so everything here is deterministic and directly testable.

use std::fmt::Write as _;

use thzlink::catalog::WeatherTable;
use thzlink::{
    absorption_at, absorption_coefficient, catalog_band_for, default_altitude_profile, fmt_sci,
    parse_line_catalog, sweep_eavesdropper, ts_ook_capacity, AbsorptionSpectrum, AtmosphereState,
    CatalogFormat, FrequencyGrid, LineCatalog, LinkBudget, LinkGeometry, Scheme, SecrecyResult,
    SpectralWindow, WeatherCondition,
};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::svg::LinePlot;

/// What a command hands back for publishing.
pub struct Outputs {
    pub csv: String,
    pub svg: Option<String>,
}

/// Catalog text with its declared format, parsed per command with the band
/// that command actually needs.
pub struct CatalogInput<'a> {
    pub text: &'a str,
    pub format: CatalogFormat,
}

impl CatalogInput<'_> {
    fn parse(&self, band_hz: (f64, f64)) -> Result<LineCatalog> {
        Ok(parse_line_catalog(self.text, self.format, band_hz)?)
    }
}

/// Grid constraints come from flags or config, so violations are the
/// caller's mistake rather than a model failure.
fn build_grid(config: &RunConfig) -> Result<FrequencyGrid> {
    let section = config.grid_section();
    FrequencyGrid::new(section.f_start_hz, section.f_stop_hz, section.n_points)
        .map_err(|e| CliError::usage(e.to_string()))
}

fn sea_state(config: &RunConfig) -> Result<AtmosphereState> {
    let a = &config.atmosphere;
    Ok(AtmosphereState::new(
        a.temperature_k,
        a.pressure_pa,
        a.water_vapor_g_m3,
        a.o2_mixing_ratio,
    )?)
}

/// Band covering isolated query frequencies, wings included.
fn band_around(f_min_hz: f64, f_max_hz: f64) -> Result<(f64, f64)> {
    let grid = FrequencyGrid::new(f_min_hz, f_max_hz.max(f_min_hz + 1.0), 2)
        .map_err(|e| CliError::usage(e.to_string()))?;
    Ok(catalog_band_for(&grid))
}

/// Absorption spectra at the configured altitudes over the shared grid.
pub fn k_spectrum(config: &RunConfig, catalog: &CatalogInput) -> Result<Outputs> {
    let altitudes = &config.k_spectrum.altitudes_km;
    if altitudes.is_empty() {
        return Err(CliError::usage("k-spectrum: altitudes_km is empty"));
    }
    let grid = build_grid(config)?;
    let catalog = catalog.parse(catalog_band_for(&grid))?;
    let profile = default_altitude_profile();

    let mut spectra: Vec<AbsorptionSpectrum> = Vec::with_capacity(altitudes.len());
    for &z in altitudes {
        let state = profile.state_at(z)?;
        spectra.push(absorption_coefficient(&catalog, &state, &grid)?);
    }

    let mut csv = String::from("f_hz");
    for &z in altitudes {
        let _ = write!(csv, ",k_{z}km_db_km");
    }
    csv.push('\n');
    for i in 0..grid.n_points() {
        csv.push_str(&fmt_sci(grid.frequency(i)));
        for spectrum in &spectra {
            csv.push(',');
            csv.push_str(&fmt_sci(spectrum.k_total_db_km()[i]));
        }
        csv.push('\n');
    }

    let svg = config.output.svg.then(|| {
        let mut plot =
            LinePlot::new("Molecular absorption vs frequency", "f (Hz)", "k (dB/km)").log_y();
        for (j, &z) in altitudes.iter().enumerate() {
            let points = (0..grid.n_points())
                .map(|i| (grid.frequency(i), spectra[j].k_total_db_km()[i]))
                .collect();
            plot.add(format!("{z} km"), points);
        }
        plot.render()
    });

    Ok(Outputs { csv, svg })
}

/// Link budget versus distance at a fixed carrier.
pub fn loss(config: &RunConfig, catalog: &CatalogInput) -> Result<Outputs> {
    let section = &config.loss;
    if section.distances_m.is_empty() {
        return Err(CliError::usage("loss: distances_m is empty"));
    }
    let weather: WeatherCondition = section
        .weather
        .parse()
        .map_err(|e| CliError::usage(format!("loss: {e}")))?;

    let state = sea_state(config)?;
    let catalog = catalog.parse(band_around(section.f_c_hz, section.f_c_hz)?)?;
    let k_db_km = absorption_at(&catalog, &state, section.f_c_hz)?;
    let weather_db_km = WeatherTable::builtin().attenuation_db_km(weather, section.f_c_hz)?;

    let mut csv = String::from(
        "distance_m,spreading_db,absorption_db,weather_db,total_db,p_rx_w,snr,capacity_bps\n",
    );
    let mut budgets = Vec::with_capacity(section.distances_m.len());
    for &distance_m in &section.distances_m {
        let geometry = LinkGeometry {
            distance_m,
            tx_altitude_km: 0.0,
            rx_altitude_km: 0.0,
            tx_gain_dbi: section.tx_gain_dbi,
            rx_gain_dbi: section.rx_gain_dbi,
            f_c_hz: section.f_c_hz,
            bandwidth_hz: section.bandwidth_hz,
            tx_power_w: section.tx_power_w,
            weather,
        };
        let budget = geometry.budget(k_db_km, weather_db_km, config.atmosphere.temperature_k)?;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            fmt_sci(distance_m),
            fmt_sci(budget.spreading_db),
            fmt_sci(budget.absorption_db),
            fmt_sci(budget.weather_db),
            fmt_sci(budget.total_loss_db()),
            fmt_sci(budget.p_rx_w),
            fmt_sci(budget.snr),
            fmt_sci(budget.capacity_bps),
        );
        budgets.push(budget);
    }

    let svg = config.output.svg.then(|| {
        let mut plot = LinePlot::new("Path loss vs distance", "distance (m)", "loss (dB)").log_x();
        let distances = &section.distances_m;
        let series = |term: fn(&LinkBudget) -> f64| {
            (0..distances.len())
                .map(|i| (distances[i], term(&budgets[i])))
                .collect::<Vec<_>>()
        };
        plot.add("spreading", series(|b| b.spreading_db));
        plot.add("absorption", series(|b| b.absorption_db));
        plot.add("weather", series(|b| b.weather_db));
        plot.add("total", series(|b| b.total_loss_db()));
        plot.render()
    });

    Ok(Outputs { csv, svg })
}

/// Transmission windows under the configured loss ceiling.
pub fn windows(config: &RunConfig, catalog: &CatalogInput) -> Result<Outputs> {
    let section = &config.windows;
    let grid = build_grid(config)?;
    let catalog = catalog.parse(catalog_band_for(&grid))?;
    let spectrum = absorption_coefficient(&catalog, &sea_state(config)?, &grid)?;
    let found = thzlink::find_windows(
        &spectrum,
        section.distance_m,
        section.threshold_db,
        section.min_bandwidth_hz,
    )?;

    let mut csv = String::from(SpectralWindow::CSV_HEADER);
    csv.push('\n');
    for window in &found {
        csv.push_str(&window.to_csv_row());
        csv.push('\n');
    }

    let svg = config.output.svg.then(|| {
        let mut plot =
            LinePlot::new("Absorption and window ceiling", "f (Hz)", "k (dB/km)").log_y();
        let points = (0..grid.n_points())
            .map(|i| (grid.frequency(i), spectrum.k_total_db_km()[i]))
            .collect();
        plot.add("k", points);
        let ceiling = section.threshold_db / (section.distance_m / 1000.0);
        plot.add(
            format!("ceiling at {} m", section.distance_m),
            vec![(grid.f_start(), ceiling), (grid.f_stop(), ceiling)],
        );
        plot.render()
    });

    Ok(Outputs { csv, svg })
}

/// Weather attenuation spectra for the configured conditions.
pub fn weather(config: &RunConfig) -> Result<Outputs> {
    let section = &config.weather;
    if section.conditions.is_empty() {
        return Err(CliError::usage("weather: conditions is empty"));
    }
    let conditions: Vec<WeatherCondition> = section
        .conditions
        .iter()
        .map(|text| {
            text.parse()
                .map_err(|e| CliError::usage(format!("weather: {e}")))
        })
        .collect::<Result<_>>()?;

    let grid = build_grid(config)?;
    let table = WeatherTable::builtin();
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(conditions.len());
    for &condition in &conditions {
        let column = (0..grid.n_points())
            .map(|i| table.attenuation_db_km(condition, grid.frequency(i)))
            .collect::<thzlink::Result<_>>()?;
        columns.push(column);
    }

    let mut csv = String::from("f_hz");
    for condition in &conditions {
        let _ = write!(csv, ",{}_db_km", condition.label());
    }
    csv.push('\n');
    for i in 0..grid.n_points() {
        csv.push_str(&fmt_sci(grid.frequency(i)));
        for column in &columns {
            csv.push(',');
            csv.push_str(&fmt_sci(column[i]));
        }
        csv.push('\n');
    }

    let svg = config.output.svg.then(|| {
        let mut plot = LinePlot::new("Weather attenuation", "f (Hz)", "attenuation (dB/km)");
        for (j, condition) in conditions.iter().enumerate() {
            let points = (0..grid.n_points())
                .map(|i| (grid.frequency(i), columns[j][i]))
                .collect();
            plot.add(condition.to_string(), points);
        }
        plot.render()
    });

    Ok(Outputs { csv, svg })
}

/// Absorption coefficient versus altitude at chosen frequencies.
pub fn altitude_sweep(config: &RunConfig, catalog: &CatalogInput) -> Result<Outputs> {
    let section = &config.altitude_sweep;
    if section.frequencies_hz.is_empty() {
        return Err(CliError::usage("altitude-sweep: frequencies_hz is empty"));
    }
    let altitudes = sweep_values(
        section.altitude_start_km,
        section.altitude_stop_km,
        section.altitude_step_km,
    )
    .map_err(|msg| CliError::usage(format!("altitude-sweep: {msg}")))?;

    let f_min = section.frequencies_hz.iter().copied().fold(f64::INFINITY, f64::min);
    let f_max = section.frequencies_hz.iter().copied().fold(0.0, f64::max);
    let catalog = catalog.parse(band_around(f_min, f_max)?)?;
    let profile = default_altitude_profile();

    let mut csv = String::from("altitude_km,f_hz,k_db_km\n");
    let mut per_frequency: Vec<Vec<(f64, f64)>> =
        vec![Vec::with_capacity(altitudes.len()); section.frequencies_hz.len()];
    for &z in &altitudes {
        let state = profile.state_at(z)?;
        for (j, &f) in section.frequencies_hz.iter().enumerate() {
            let k = absorption_at(&catalog, &state, f)?;
            let _ = writeln!(csv, "{},{},{}", fmt_sci(z), fmt_sci(f), fmt_sci(k));
            per_frequency[j].push((z, k));
        }
    }

    let svg = config.output.svg.then(|| {
        let mut plot =
            LinePlot::new("Absorption vs altitude", "altitude (km)", "k (dB/km)").log_y();
        for (j, &f) in section.frequencies_hz.iter().enumerate() {
            plot.add(format!("{:.0} GHz", f / 1e9), per_frequency[j].clone());
        }
        plot.render()
    });

    Ok(Outputs { csv, svg })
}

/// Secrecy rates of the configured schemes over eavesdropper distances.
pub fn secrecy_sweep(config: &RunConfig, catalog: &CatalogInput) -> Result<Outputs> {
    let section = &config.secrecy;
    if section.schemes.is_empty() {
        return Err(CliError::usage("secrecy-sweep: schemes is empty"));
    }
    let schemes: Vec<Scheme> = section
        .schemes
        .iter()
        .map(|text| {
            text.parse()
                .map_err(|e| CliError::usage(format!("secrecy-sweep: {e}")))
        })
        .collect::<Result<_>>()?;
    let d_es = sweep_values(section.d_e_start_m, section.d_e_stop_m, section.d_e_step_m)
        .map_err(|msg| CliError::usage(format!("secrecy-sweep: {msg}")))?;

    let grid = build_grid(config)?;
    let catalog = catalog.parse(catalog_band_for(&grid))?;
    let spectrum = absorption_coefficient(&catalog, &sea_state(config)?, &grid)?;
    let template = section.scenario();
    let params = section.ran.params();
    let results = sweep_eavesdropper(&template, &spectrum, &d_es, &schemes, Some(&params))?;

    let mut csv = String::from(SecrecyResult::CSV_HEADER);
    csv.push('\n');
    for result in &results {
        csv.push_str(&result.to_csv_row());
        csv.push('\n');
    }

    let svg = config.output.svg.then(|| {
        let mut plot = LinePlot::new(
            "Secrecy rate vs eavesdropper distance",
            "d_E (m)",
            "secrecy (bit/s/Hz)",
        );
        for &scheme in &schemes {
            let points = results
                .iter()
                .filter(|r| r.scheme == scheme)
                .map(|r| (r.d_e_m, r.secrecy_bps_hz))
                .collect();
            plot.add(scheme.name(), points);
        }
        plot.render()
    });

    Ok(Outputs { csv, svg })
}

/// TS-OOK capacity over the pulse probability, optimum row starred.
pub fn tsook(config: &RunConfig) -> Result<Outputs> {
    let regime = config.tsook.regime();
    regime.validate()?;

    let mut rows: Vec<(f64, f64)> = Vec::with_capacity(101);
    for i in 0..=100u32 {
        let p_one = f64::from(i) / 100.0;
        rows.push((p_one, ts_ook_capacity(&regime, p_one)?));
    }
    let mut best = 0;
    for (i, &(_, capacity)) in rows.iter().enumerate() {
        if capacity > rows[best].1 {
            best = i;
        }
    }

    let mut csv = String::from("p_one,capacity_bit,optimum\n");
    for (i, &(p_one, capacity)) in rows.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{},{},{}",
            fmt_sci(p_one),
            fmt_sci(capacity),
            if i == best { "*" } else { "" }
        );
    }

    let svg = config.output.svg.then(|| {
        let mut plot = LinePlot::new("TS-OOK capacity", "p_one", "capacity (bit/symbol)");
        plot.add("capacity", rows.clone());
        plot.render()
    });

    Ok(Outputs { csv, svg })
}

/// Inclusive arithmetic sweep `start, start+step, ..` up to `stop` within
/// half a step of rounding slack.
fn sweep_values(start: f64, stop: f64, step: f64) -> std::result::Result<Vec<f64>, String> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(format!("step must be positive, got {step}"));
    }
    if !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(format!("bad range {start}..{stop}"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweeps_include_both_ends_when_the_step_divides() {
        assert_eq!(sweep_values(2.0, 5.0, 1.0).unwrap(), [2.0, 3.0, 4.0, 5.0]);
        assert_eq!(sweep_values(2.0, 2.0, 1.0).unwrap(), [2.0]);
        assert_eq!(sweep_values(0.0, 20.0, 0.5).unwrap().len(), 41);
    }

    #[test]
    fn sweeps_stop_short_of_a_partial_step() {
        assert_eq!(sweep_values(2.0, 5.5, 1.0).unwrap(), [2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn degenerate_sweeps_are_rejected() {
        assert!(sweep_values(2.0, 5.0, 0.0).is_err());
        assert!(sweep_values(2.0, 5.0, -1.0).is_err());
        assert!(sweep_values(5.0, 2.0, 1.0).is_err());
    }
}
