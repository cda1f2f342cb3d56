//! Error type shared by every module in the crate.

use thiserror::Error;

/// Errors produced by catalog parsing, spectrum evaluation and the
/// higher-level link, security and modulation operations.
///
/// Messages are single-line so a CLI can forward them verbatim.
#[derive(Debug, Error)]
pub enum ThzError {
    /// A fixed-width catalog record had the wrong length.
    #[error("catalog record {index}: expected {expected} characters, got {got}")]
    RecordLength {
        index: usize,
        expected: usize,
        got: usize,
    },

    /// A catalog field failed numeric parsing.
    #[error("catalog record {index}: field `{field}` at columns {start}..{end} is not a number: {text:?}")]
    RecordField {
        index: usize,
        field: &'static str,
        start: usize,
        end: usize,
        text: String,
    },

    /// Parsing succeeded but no line fell inside the requested band.
    #[error("no catalog lines in band {f_low_hz:.3e}..{f_high_hz:.3e} Hz")]
    NoLinesInBand { f_low_hz: f64, f_high_hz: f64 },

    /// A frequency grid violated its construction rules.
    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),

    /// An argument violated a documented precondition.
    #[error("{0}")]
    InvalidArgument(String),

    /// Altitude query outside the profile's sampled range.
    #[error("altitude {altitude_km} km outside profile range {min_km}..{max_km} km")]
    AltitudeOutOfRange {
        altitude_km: f64,
        min_km: f64,
        max_km: f64,
    },

    /// Temperature outside the validity range of the queried model.
    #[error("temperature {t_k} K outside supported range {min_k}..{max_k} K")]
    TemperatureOutOfRange { t_k: f64, min_k: f64, max_k: f64 },

    /// Vapor density above saturation without the supersaturation flag.
    #[error("vapor density {vapor_g_m3} g/m^3 exceeds saturation {saturation_g_m3} g/m^3 at {t_k} K")]
    Supersaturated {
        vapor_g_m3: f64,
        saturation_g_m3: f64,
        t_k: f64,
    },

    /// Pulse spectral support extends past the absorption grid.
    #[error("pulse band {f_low_hz:.3e}..{f_high_hz:.3e} Hz not covered by spectrum grid {grid_low_hz:.3e}..{grid_high_hz:.3e} Hz")]
    BandNotCovered {
        f_low_hz: f64,
        f_high_hz: f64,
        grid_low_hz: f64,
        grid_high_hz: f64,
    },

    /// Carrier or query frequency outside the spectrum grid.
    #[error("frequency {f_hz:.3e} Hz outside spectrum grid {grid_low_hz:.3e}..{grid_high_hz:.3e} Hz")]
    FrequencyOutOfGrid {
        f_hz: f64,
        grid_low_hz: f64,
        grid_high_hz: f64,
    },

    /// Receiver-noise quiet slot cannot hold the broadened data pulse.
    #[error("AN time separation infeasible: pulse plus guard occupy {occupied_s:.3e} s of a {slot_s:.3e} s quiet slot")]
    RanTimingInfeasible { occupied_s: f64, slot_s: f64 },

    /// A bundled or user data file failed to parse.
    #[error("data file {name} line {line}: {message}")]
    DataFile {
        name: String,
        line: usize,
        message: String,
    },

    /// Alternate absorption engine asked for a frequency it does not cover.
    #[error("engine `{engine}` covers {f_low_hz:.3e}..{f_high_hz:.3e} Hz, requested {f_hz:.3e} Hz")]
    EngineRange {
        engine: &'static str,
        f_hz: f64,
        f_low_hz: f64,
        f_high_hz: f64,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, ThzError>;
