//! Excess attenuation from hydrometeors and dust.
//!
//! Molecular absorption is the dominant outdoor impairment in this band but
//! not the only one. This module adds the usual empirical layer on top:
//! rain follows a power law in rain rate, fog is linear in liquid water
//! content (recovered from optical visibility), and suspended dust is linear
//! in mass density. Coefficients live in a small frequency-indexed table and
//! are interpolated linearly in log10(f), clamped at the table edges.

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, ThzError};

/// Coefficient table shipped with the crate.
pub const BUILTIN_WEATHER_TABLE: &str = include_str!("../../data/weather_coefficients.txt");

/// A weather condition the link may operate under.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeatherCondition {
    Clear,
    /// Rain at the given rate in mm/h.
    Rain { rate_mm_h: f64 },
    /// Fog with the given optical visibility in meters.
    Fog { visibility_m: f64 },
    /// Suspended sand or dust at the given mass density in g/m^3.
    Sand { density_g_m3: f64 },
}

impl WeatherCondition {
    /// Validates the condition's parameter.
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Self::Clear => true,
            Self::Rain { rate_mm_h } => rate_mm_h.is_finite() && *rate_mm_h >= 0.0,
            Self::Fog { visibility_m } => visibility_m.is_finite() && *visibility_m > 0.0,
            Self::Sand { density_g_m3 } => density_g_m3.is_finite() && *density_g_m3 >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(ThzError::InvalidArgument(format!(
                "invalid weather condition {self}"
            )))
        }
    }

    /// Short label, safe for CSV column names.
    pub fn label(&self) -> String {
        match self {
            Self::Clear => "clear".into(),
            Self::Rain { rate_mm_h } => format!("rain_{rate_mm_h}mmh"),
            Self::Fog { visibility_m } => format!("fog_{visibility_m}m"),
            Self::Sand { density_g_m3 } => format!("sand_{density_g_m3}gm3"),
        }
    }
}

impl fmt::Display for WeatherCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Clear => write!(f, "clear"),
            Self::Rain { rate_mm_h } => write!(f, "rain:{rate_mm_h}"),
            Self::Fog { visibility_m } => write!(f, "fog:{visibility_m}"),
            Self::Sand { density_g_m3 } => write!(f, "sand:{density_g_m3}"),
        }
    }
}

impl FromStr for WeatherCondition {
    type Err = ThzError;

    /// Parses the compact `kind:value` form used in configs: `clear`,
    /// `rain:12.5`, `fog:100`, `sand:0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| ThzError::InvalidArgument(format!("weather '{s}': {msg}"));
        let (kind, value) = match s.split_once(':') {
            Some((k, v)) => (k.trim(), Some(v.trim())),
            None => (s.trim(), None),
        };
        let number = |v: Option<&str>| -> Result<f64> {
            let v = v.ok_or_else(|| bad("missing parameter"))?;
            v.parse::<f64>().map_err(|_| bad("bad number"))
        };
        let cond = match kind {
            "clear" => {
                if value.is_some() {
                    return Err(bad("clear takes no parameter"));
                }
                Self::Clear
            }
            "rain" => Self::Rain {
                rate_mm_h: number(value)?,
            },
            "fog" => Self::Fog {
                visibility_m: number(value)?,
            },
            "sand" => Self::Sand {
                density_g_m3: number(value)?,
            },
            _ => return Err(bad("unknown kind (clear, rain, fog, sand)")),
        };
        cond.validate()?;
        Ok(cond)
    }
}

/// One frequency row of coefficients for a single weather kind.
#[derive(Debug, Clone, Copy)]
struct CoeffRow {
    f_ghz: f64,
    c: [f64; 2],
}

/// Frequency-dependent weather coefficients.
#[derive(Debug, Clone)]
pub struct WeatherTable {
    rain: Vec<CoeffRow>,
    fog: Vec<CoeffRow>,
    sand: Vec<CoeffRow>,
}

impl WeatherTable {
    /// Table shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_WEATHER_TABLE).unwrap()
    }

    /// Parses the text format described in the builtin table's header.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rain = Vec::new();
        let mut fog = Vec::new();
        let mut sand = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fail = |message: String| ThzError::DataFile {
                name: "weather coefficients".into(),
                line: lineno + 1,
                message,
            };
            let mut tokens = line.split_whitespace();
            let kind = tokens.next().unwrap();
            let mut numbers = Vec::with_capacity(3);
            for token in tokens {
                numbers.push(
                    token
                        .parse::<f64>()
                        .map_err(|_| fail(format!("bad number '{token}'")))?,
                );
            }
            let (dest, want) = match kind {
                "rain" => (&mut rain, 3),
                "fog" => (&mut fog, 2),
                "sand" => (&mut sand, 2),
                _ => return Err(fail(format!("unknown kind '{kind}'"))),
            };
            if numbers.len() != want {
                return Err(fail(format!(
                    "expected {want} numbers after '{kind}', got {}",
                    numbers.len()
                )));
            }
            if numbers[0] <= 0.0 {
                return Err(fail("frequency must be positive".into()));
            }
            dest.push(CoeffRow {
                f_ghz: numbers[0],
                c: [numbers[1], *numbers.get(2).unwrap_or(&0.0)],
            });
        }
        for (name, rows) in [("rain", &mut rain), ("fog", &mut fog), ("sand", &mut sand)] {
            if rows.is_empty() {
                return Err(ThzError::DataFile {
                    name: "weather coefficients".into(),
                    line: 0,
                    message: format!("no '{name}' rows"),
                });
            }
            rows.sort_by(|a, b| a.f_ghz.total_cmp(&b.f_ghz));
        }
        Ok(Self { rain, fog, sand })
    }

    /// Coefficients at `f_ghz`, interpolated in log10(f), clamped at edges.
    fn coeffs(rows: &[CoeffRow], f_ghz: f64) -> [f64; 2] {
        let first = &rows[0];
        let last = &rows[rows.len() - 1];
        if f_ghz <= first.f_ghz {
            return first.c;
        }
        if f_ghz >= last.f_ghz {
            return last.c;
        }
        let idx = rows.partition_point(|r| r.f_ghz <= f_ghz);
        let (lo, hi) = (&rows[idx - 1], &rows[idx]);
        let t = (f_ghz.log10() - lo.f_ghz.log10()) / (hi.f_ghz.log10() - lo.f_ghz.log10());
        [
            lo.c[0] + t * (hi.c[0] - lo.c[0]),
            lo.c[1] + t * (hi.c[1] - lo.c[1]),
        ]
    }

    /// Excess attenuation in dB/km for `condition` at `f_hz`.
    pub fn attenuation_db_km(&self, condition: WeatherCondition, f_hz: f64) -> Result<f64> {
        condition.validate()?;
        if !(f_hz > 0.0) || !f_hz.is_finite() {
            return Err(ThzError::InvalidArgument(format!(
                "frequency must be positive, got {f_hz} Hz"
            )));
        }
        let f_ghz = f_hz / 1e9;
        let a = match condition {
            WeatherCondition::Clear => 0.0,
            WeatherCondition::Rain { rate_mm_h } => {
                if rate_mm_h == 0.0 {
                    0.0
                } else {
                    let [a, b] = Self::coeffs(&self.rain, f_ghz);
                    a * rate_mm_h.powf(b)
                }
            }
            WeatherCondition::Fog { visibility_m } => {
                let [k, _] = Self::coeffs(&self.fog, f_ghz);
                let water_g_m3 = (0.024 / (visibility_m / 1000.0)).powf(1.54);
                k * water_g_m3
            }
            WeatherCondition::Sand { density_g_m3 } => {
                let [c, _] = Self::coeffs(&self.sand, f_ghz);
                c * density_g_m3
            }
        };
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_table_parses() {
        let table = WeatherTable::builtin();
        assert!(table.rain.len() >= 5);
        assert!(table.fog.len() >= 4);
        assert!(table.sand.len() >= 4);
    }

    #[test]
    fn clear_costs_nothing() {
        let table = WeatherTable::builtin();
        assert_eq!(
            table
                .attenuation_db_km(WeatherCondition::Clear, 3e11)
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn rain_follows_the_power_law_at_a_table_row() {
        let table = WeatherTable::builtin();
        // at 300 GHz the builtin row is a = 1.41, b = 0.695
        let a = table
            .attenuation_db_km(WeatherCondition::Rain { rate_mm_h: 25.0 }, 3e11)
            .unwrap();
        let expected = 1.41 * 25.0f64.powf(0.695);
        assert!((a - expected).abs() < 1e-12, "{a} vs {expected}");
    }

    #[test]
    fn fog_recovers_water_content_from_visibility() {
        let table = WeatherTable::builtin();
        let a = table
            .attenuation_db_km(
                WeatherCondition::Fog {
                    visibility_m: 100.0,
                },
                3e11,
            )
            .unwrap();
        let expected = 16.0 * (0.024f64 / 0.1).powf(1.54);
        assert!((a - expected).abs() < 1e-12, "{a} vs {expected}");
    }

    #[test]
    fn interpolation_is_linear_in_log_frequency() {
        let table = WeatherTable::builtin();
        // geometric mean of the 100 and 300 GHz fog rows lands halfway
        let f = (100.0f64 * 300.0).sqrt() * 1e9;
        let a = table
            .attenuation_db_km(
                WeatherCondition::Fog {
                    visibility_m: 1000.0,
                },
                f,
            )
            .unwrap();
        let m = (0.024f64 / 1.0).powf(1.54);
        let expected = 0.5 * (4.4 + 16.0) * m;
        assert!((a - expected).abs() < 1e-9 * expected.abs().max(1.0));
    }

    #[test]
    fn frequencies_outside_the_table_clamp_to_the_edges() {
        let table = WeatherTable::builtin();
        let cond = WeatherCondition::Sand { density_g_m3: 1.0 };
        let below = table.attenuation_db_km(cond, 50e9).unwrap();
        let at_edge = table.attenuation_db_km(cond, 100e9).unwrap();
        assert_eq!(below, at_edge);
        let above = table.attenuation_db_km(cond, 5e12).unwrap();
        let at_top = table.attenuation_db_km(cond, 2e12).unwrap();
        assert_eq!(above, at_top);
    }

    #[test]
    fn heavier_weather_attenuates_more() {
        let table = WeatherTable::builtin();
        let f = 3e11;
        let r = |rate| {
            table
                .attenuation_db_km(WeatherCondition::Rain { rate_mm_h: rate }, f)
                .unwrap()
        };
        assert!(r(5.0) < r(25.0) && r(25.0) < r(100.0));
        let v = |vis| {
            table
                .attenuation_db_km(WeatherCondition::Fog { visibility_m: vis }, f)
                .unwrap()
        };
        assert!(v(1000.0) < v(100.0) && v(100.0) < v(50.0));
    }

    #[test]
    fn compact_syntax_round_trips() {
        for text in ["clear", "rain:12.5", "fog:100", "sand:0.5"] {
            let cond: WeatherCondition = text.parse().unwrap();
            assert_eq!(cond.to_string(), text);
        }
        assert!("rain".parse::<WeatherCondition>().is_err());
        assert!("fog:-3".parse::<WeatherCondition>().is_err());
        assert!("snow:1".parse::<WeatherCondition>().is_err());
        assert!("clear:1".parse::<WeatherCondition>().is_err());
    }

    #[test]
    fn malformed_tables_are_rejected_with_line_numbers() {
        let err = WeatherTable::parse("rain 100 1.12\n").unwrap_err();
        match err {
            ThzError::DataFile { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(WeatherTable::parse("rain 100 1.0 0.7\nfog 100 4.4\n").is_err());
    }
}
