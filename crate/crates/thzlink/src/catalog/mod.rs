//! Spectroscopic line catalogs.
//!
//! Two input formats are supported: the classic 160-character fixed-width
//! `.par` record layout used by the big public line databases, and a compact
//! whitespace-separated columnar table used for the curated subset bundled
//! with this crate. Both produce the same [`SpectralLine`] records.
//!
//! Line parameters follow database conventions: wavenumbers in 1/cm,
//! intensities in cm^-1/(molecule cm^-2) at 296 K, halfwidths in
//! (cm^-1)/atm, lower-state energy in 1/cm.

mod atmosphere;
mod weather;

pub use atmosphere::{
    default_altitude_profile, saturation_vapor_density, AltitudeProfile, AtmosphereState,
};
pub use weather::{WeatherCondition, WeatherTable};

use crate::constants::C_CM;
use crate::error::{Result, ThzError};

/// Highest line frequency kept after conversion, Hz.
const F_LINE_MAX_HZ: f64 = 15e12;

/// Fixed-width record length of the `.par` format, characters.
const PAR_RECORD_LEN: usize = 160;

/// Absorbing species tracked by the simulation.
///
/// Water vapor and molecular oxygen are modeled with number densities taken
/// from the atmosphere state; any other molecule code is carried through the
/// catalog but contributes nothing to absorption.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Species {
    H2O,
    O2,
    Other(u8),
}

impl Species {
    /// Molecule code used by the fixed-width format (1 = H2O, 7 = O2).
    pub fn molecule_code(self) -> u8 {
        match self {
            Species::H2O => 1,
            Species::O2 => 7,
            Species::Other(code) => code,
        }
    }

    pub fn from_molecule_code(code: u8) -> Self {
        match code {
            1 => Species::H2O,
            7 => Species::O2,
            other => Species::Other(other),
        }
    }

    /// Exponent m of the partition-function ratio Q(T0)/Q(T) = (T0/T)^m
    /// used for intensity scaling. Linear rotors get 1.0, nonlinear 1.5.
    pub fn partition_exponent(self) -> f64 {
        match self {
            Species::O2 => 1.0,
            Species::H2O | Species::Other(_) => 1.5,
        }
    }

    /// Token used by the columnar table format.
    pub fn table_token(self) -> String {
        match self {
            Species::H2O => "H2O".to_string(),
            Species::O2 => "O2".to_string(),
            Species::Other(code) => format!("{code}"),
        }
    }

    fn from_table_token(token: &str) -> Option<Self> {
        match token {
            "H2O" => Some(Species::H2O),
            "O2" => Some(Species::O2),
            other => other.parse::<u8>().ok().map(Species::from_molecule_code),
        }
    }
}

/// One spectroscopic transition.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralLine {
    pub species: Species,
    pub isotopologue: u8,
    /// Vacuum transition wavenumber, 1/cm.
    pub center_wavenumber: f64,
    /// Line intensity at the 296 K reference, cm^-1/(molecule cm^-2).
    /// Isotopologue abundance weighting is already folded in.
    pub intensity: f64,
    /// Air-broadened halfwidth at 296 K and 1 atm, (cm^-1)/atm.
    pub air_halfwidth: f64,
    /// Self-broadened halfwidth at 296 K and 1 atm, (cm^-1)/atm.
    pub self_halfwidth: f64,
    /// Lower-state energy, 1/cm.
    pub lower_state_energy: f64,
    /// Exponent of the (T0/T) power law for the air halfwidth.
    pub temperature_exponent: f64,
    /// Air pressure-induced line shift at 296 K, (cm^-1)/atm.
    pub pressure_shift: f64,
}

impl SpectralLine {
    /// Unshifted center frequency, Hz.
    pub fn center_frequency_hz(&self) -> f64 {
        self.center_wavenumber * C_CM
    }

    /// Serializes to one row of the columnar table format.
    ///
    /// Numbers use the shortest representation that parses back to the same
    /// bits, so a serialize/parse round trip is exact. The columnar format
    /// does not carry the isotopologue label; re-parsed lines get 1.
    pub fn to_table_row(&self) -> String {
        format!(
            "{} {} {} {} {} {} {} {}",
            self.species.table_token(),
            self.center_wavenumber,
            self.intensity,
            self.air_halfwidth,
            self.self_halfwidth,
            self.temperature_exponent,
            self.lower_state_energy,
            self.pressure_shift,
        )
    }
}

/// Input format accepted by [`parse_line_catalog`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogFormat {
    /// 160-character fixed-width records.
    HitranPar,
    /// Whitespace-separated columns
    /// `species nu_cm s_ref gamma_air gamma_self n_air e_lower delta_air`,
    /// with `#` comments and blank lines ignored.
    BuiltinTable,
}

impl CatalogFormat {
    fn name(self) -> &'static str {
        match self {
            CatalogFormat::HitranPar => "hitran_par",
            CatalogFormat::BuiltinTable => "builtin_table",
        }
    }
}

/// A band-filtered list of spectral lines sorted by center wavenumber.
#[derive(Debug, Clone)]
pub struct LineCatalog {
    lines: Vec<SpectralLine>,
    source: String,
}

impl LineCatalog {
    /// Builds a catalog from lines already in memory.
    ///
    /// Lines keep their order; summation follows it.
    pub fn from_lines(lines: Vec<SpectralLine>, source: &str) -> Self {
        Self {
            lines,
            source: source.to_string(),
        }
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Identifier recorded in spectrum provenance, for example `builtin`.
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Replaces the provenance label, for callers that know a better name
    /// (usually the file name the catalog came from).
    pub fn with_source(mut self, source: &str) -> Self {
        self.source = source.to_string();
        self
    }

    /// Serializes every line to the columnar table format.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str("# species nu_cm s_ref gamma_air gamma_self n_air e_lower delta_air\n");
        for line in &self.lines {
            out.push_str(&line.to_table_row());
            out.push('\n');
        }
        out
    }
}

/// Raw bytes of the bundled curated line table.
///
/// H2O and O2 lines between 0.1 and 2 THz with intensities anchored to
/// published sea-level attenuation landmarks. The CLI hashes these bytes
/// into its cache key.
pub const BUILTIN_TABLE: &str = include_str!("../../data/lines_builtin.txt");

/// Parses the bundled curated table, filtered to `band_hz`.
pub fn builtin_catalog(band_hz: (f64, f64)) -> Result<LineCatalog> {
    Ok(parse_line_catalog(BUILTIN_TABLE, CatalogFormat::BuiltinTable, band_hz)?
        .with_source("builtin"))
}

/// Parses catalog text in the given format, keeping lines whose center
/// frequency falls inside the closed band `band_hz` (Hz).
///
/// Output is sorted by center wavenumber. Frequencies above 15 THz are
/// dropped regardless of the band. An empty result is an error so that a
/// band with no spectroscopy is never silently treated as transparent.
pub fn parse_line_catalog(
    text: &str,
    format: CatalogFormat,
    band_hz: (f64, f64),
) -> Result<LineCatalog> {
    let (f_low, f_high) = band_hz;
    if !(f_low > 0.0 && f_low < f_high) {
        return Err(ThzError::InvalidArgument(format!(
            "invalid catalog band {f_low:e}..{f_high:e} Hz"
        )));
    }
    let f_high = f_high.min(F_LINE_MAX_HZ);

    let mut lines = Vec::new();
    match format {
        CatalogFormat::HitranPar => parse_par(text, &mut lines)?,
        CatalogFormat::BuiltinTable => parse_table(text, &mut lines)?,
    }

    lines.retain(|l| {
        let f = l.center_frequency_hz();
        f >= f_low && f <= f_high
    });
    if lines.is_empty() {
        return Err(ThzError::NoLinesInBand {
            f_low_hz: f_low,
            f_high_hz: f_high,
        });
    }
    lines.sort_by(|a, b| a.center_wavenumber.partial_cmp(&b.center_wavenumber).unwrap());
    Ok(LineCatalog {
        lines,
        source: format.name().to_string(),
    })
}

// === fixed-width .par records ===

/// Field layout of one record: name, start column, end column (exclusive).
const PAR_FIELDS: [(&str, usize, usize); 10] = [
    ("molecule", 0, 2),
    ("isotopologue", 2, 3),
    ("wavenumber", 3, 15),
    ("intensity", 15, 25),
    ("einstein_a", 25, 35),
    ("air_halfwidth", 35, 40),
    ("self_halfwidth", 40, 45),
    ("lower_state_energy", 45, 55),
    ("temperature_exponent", 55, 59),
    ("pressure_shift", 59, 67),
];

fn par_field_f64(record: &str, index: usize, field_id: usize) -> Result<f64> {
    let (field, start, end) = PAR_FIELDS[field_id];
    let text = &record[start..end];
    text.trim()
        .parse::<f64>()
        .map_err(|_| ThzError::RecordField {
            index,
            field,
            start,
            end,
            text: text.to_string(),
        })
}

fn parse_par(text: &str, out: &mut Vec<SpectralLine>) -> Result<()> {
    for (index, raw) in text.lines().enumerate() {
        let record = raw.strip_suffix('\r').unwrap_or(raw);
        if record.is_empty() {
            continue;
        }
        if record.len() != PAR_RECORD_LEN || !record.is_ascii() {
            return Err(ThzError::RecordLength {
                index,
                expected: PAR_RECORD_LEN,
                got: record.len(),
            });
        }

        let molecule = {
            let (field, start, end) = PAR_FIELDS[0];
            let text = &record[start..end];
            text.trim()
                .parse::<u8>()
                .map_err(|_| ThzError::RecordField {
                    index,
                    field,
                    start,
                    end,
                    text: text.to_string(),
                })?
        };
        let isotopologue = {
            let (field, start, end) = PAR_FIELDS[1];
            let text = &record[start..end];
            text.trim()
                .parse::<u8>()
                .map_err(|_| ThzError::RecordField {
                    index,
                    field,
                    start,
                    end,
                    text: text.to_string(),
                })?
        };

        let line = SpectralLine {
            species: Species::from_molecule_code(molecule),
            isotopologue,
            center_wavenumber: par_field_f64(record, index, 2)?,
            intensity: par_field_f64(record, index, 3)?,
            // einstein_a (field 4) is parsed for validation and discarded
            air_halfwidth: par_field_f64(record, index, 5)?,
            self_halfwidth: par_field_f64(record, index, 6)?,
            lower_state_energy: par_field_f64(record, index, 7)?,
            temperature_exponent: par_field_f64(record, index, 8)?,
            pressure_shift: par_field_f64(record, index, 9)?,
        };
        par_field_f64(record, index, 4)?;
        validate_line(&line, index)?;
        out.push(line);
    }
    Ok(())
}

// === columnar table ===

fn parse_table(text: &str, out: &mut Vec<SpectralLine>) -> Result<()> {
    for (index, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let cols: Vec<&str> = body.split_whitespace().collect();
        if cols.len() != 8 {
            return Err(ThzError::DataFile {
                name: "line table".into(),
                line: index + 1,
                message: format!("expected 8 columns, got {}", cols.len()),
            });
        }
        let species = Species::from_table_token(cols[0]).ok_or_else(|| ThzError::DataFile {
            name: "line table".into(),
            line: index + 1,
            message: format!("unknown species token {:?}", cols[0]),
        })?;
        let mut nums = [0.0f64; 7];
        for (slot, col) in nums.iter_mut().zip(&cols[1..]) {
            *slot = col.parse::<f64>().map_err(|_| ThzError::DataFile {
                name: "line table".into(),
                line: index + 1,
                message: format!("not a number: {col:?}"),
            })?;
        }
        let line = SpectralLine {
            species,
            isotopologue: 1,
            center_wavenumber: nums[0],
            intensity: nums[1],
            air_halfwidth: nums[2],
            self_halfwidth: nums[3],
            temperature_exponent: nums[4],
            lower_state_energy: nums[5],
            pressure_shift: nums[6],
        };
        validate_line(&line, index)?;
        out.push(line);
    }
    Ok(())
}

fn validate_line(line: &SpectralLine, index: usize) -> Result<()> {
    if !(line.center_wavenumber > 0.0) {
        return Err(ThzError::InvalidArgument(format!(
            "catalog record {index}: center wavenumber must be positive"
        )));
    }
    if line.intensity < 0.0 || line.air_halfwidth < 0.0 || line.self_halfwidth < 0.0 {
        return Err(ThzError::InvalidArgument(format!(
            "catalog record {index}: negative intensity or halfwidth"
        )));
    }
    if line.lower_state_energy < 0.0 {
        return Err(ThzError::InvalidArgument(format!(
            "catalog record {index}: negative lower-state energy"
        )));
    }
    Ok(())
}
