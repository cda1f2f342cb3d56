//! Minimal deterministic SVG line plots.
//!
//! Inline styles only, no scripts, no external references, so the files
//! stand alone. Coordinates are emitted with fixed precision and series are
//! drawn in insertion order, which keeps byte-identical output across runs.

use std::fmt::Write;

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 86.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 44.0;
const MARGIN_BOTTOM: f64 = 58.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Points a series may hold before it is thinned by striding.
const MAX_POINTS: usize = 2000;

/// One labeled curve.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// A titled line plot with optional log axes.
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

impl LinePlot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            log_x: false,
            log_y: false,
            series: Vec::new(),
        }
    }

    pub fn log_y(mut self) -> Self {
        self.log_y = true;
        self
    }

    pub fn log_x(mut self) -> Self {
        self.log_x = true;
        self
    }

    pub fn add(&mut self, label: impl Into<String>, points: Vec<(f64, f64)>) {
        self.series.push(Series {
            label: label.into(),
            points,
        });
    }

    /// Renders the complete SVG document.
    pub fn render(&self) -> String {
        let mapped: Vec<Vec<(f64, f64)>> = self
            .series
            .iter()
            .map(|s| {
                s.points
                    .iter()
                    .filter(|(x, y)| {
                        x.is_finite()
                            && y.is_finite()
                            && (!self.log_x || *x > 0.0)
                            && (!self.log_y || *y > 0.0)
                    })
                    .map(|&(x, y)| {
                        (
                            if self.log_x { x.log10() } else { x },
                            if self.log_y { y.log10() } else { y },
                        )
                    })
                    .collect()
            })
            .collect();

        let (x_min, x_max) = padded_range(mapped.iter().flatten().map(|p| p.0));
        let (y_min, y_max) = padded_range(mapped.iter().flatten().map(|p| p.1));
        let x_span = MARGIN_LEFT..WIDTH - MARGIN_RIGHT;
        let y_span = MARGIN_TOP..HEIGHT - MARGIN_BOTTOM;
        let to_px = |x: f64, y: f64| {
            let px = x_span.start
                + (x - x_min) / (x_max - x_min) * (x_span.end - x_span.start);
            let py = y_span.end - (y - y_min) / (y_max - y_min) * (y_span.end - y_span.start);
            (px, py)
        };

        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"monospace\">"
        );
        let _ = writeln!(
            out,
            "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>"
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"26\" font-size=\"15\" text-anchor=\"middle\">{}</text>",
            WIDTH / 2.0,
            escape(&self.title)
        );

        for (value, label) in ticks(x_min, x_max, self.log_x) {
            let (px, _) = to_px(value, y_min);
            let _ = writeln!(
                out,
                "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" \
                 stroke=\"#dddddd\"/>",
                y_span.start, y_span.end
            );
            let _ = writeln!(
                out,
                "<text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{label}</text>",
                y_span.end + 18.0
            );
        }
        for (value, label) in ticks(y_min, y_max, self.log_y) {
            let (_, py) = to_px(x_min, value);
            let _ = writeln!(
                out,
                "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" \
                 stroke=\"#dddddd\"/>",
                x_span.start, x_span.end
            );
            let _ = writeln!(
                out,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{label}</text>",
                x_span.start - 6.0,
                py + 4.0
            );
        }
        let _ = writeln!(
            out,
            "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" \
             fill=\"none\" stroke=\"#333333\"/>",
            x_span.start,
            y_span.start,
            x_span.end - x_span.start,
            y_span.end - y_span.start
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
            (x_span.start + x_span.end) / 2.0,
            HEIGHT - 14.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            "<text x=\"20\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" \
             transform=\"rotate(-90 20 {:.1})\">{}</text>",
            (y_span.start + y_span.end) / 2.0,
            (y_span.start + y_span.end) / 2.0,
            escape(&self.y_label)
        );

        for (i, points) in mapped.iter().enumerate() {
            if points.is_empty() {
                continue;
            }
            let color = PALETTE[i % PALETTE.len()];
            let stride = points.len().div_ceil(MAX_POINTS).max(1);
            let mut path = String::new();
            for (j, &(x, y)) in points.iter().step_by(stride).enumerate() {
                let (px, py) = to_px(x, y);
                let _ = write!(path, "{}{px:.2},{py:.2}", if j == 0 { "" } else { " " });
            }
            let _ = writeln!(
                out,
                "<polyline points=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>"
            );
        }

        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let y = y_span.start + 16.0 + 18.0 * i as f64;
            let x = x_span.end - 180.0;
            let _ = writeln!(
                out,
                "<line x1=\"{x:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" \
                 stroke=\"{color}\" stroke-width=\"2\"/>",
                x + 22.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">{}</text>",
                x + 28.0,
                y + 4.0,
                escape(&series.label)
            );
        }

        out.push_str("</svg>");
        out
    }
}

/// Data range padded by 5%, or a unit interval around a degenerate value.
fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        return (0.0, 1.0);
    }
    if lo == hi {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Tick positions with labels. Log axes tick on integer decades and label
/// them `1e<n>`; linear axes use five even intervals.
fn ticks(lo: f64, hi: f64, log: bool) -> Vec<(f64, String)> {
    if log {
        let first = lo.ceil() as i64;
        let last = hi.floor() as i64;
        if first <= last && (last - first) <= 12 {
            return (first..=last).map(|d| (d as f64, format!("1e{d}"))).collect();
        }
    }
    (0..=5)
        .map(|i| {
            let v = lo + (hi - lo) * i as f64 / 5.0;
            (v, tick_label(v))
        })
        .collect()
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let magnitude = v.abs();
    if (1e-3..1e5).contains(&magnitude) {
        let text = format!("{v:.3}");
        let trimmed = text.trim_end_matches('0').trim_end_matches('.');
        trimmed.to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> Vec<(f64, f64)> {
        (0..100).map(|i| (i as f64, (i * i) as f64)).collect()
    }

    #[test]
    fn rendering_is_deterministic() {
        let mut plot = LinePlot::new("t", "x", "y");
        plot.add("a", ramp());
        assert_eq!(plot.render(), plot.render());
    }

    #[test]
    fn output_is_self_contained() {
        let mut plot = LinePlot::new("t", "x", "y");
        plot.add("a", ramp());
        let svg = plot.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>"));
        for banned in ["http://", "href", "<script", "url("] {
            let hits = svg.matches(banned).count();
            let allowed = if banned == "http://" { 1 } else { 0 };
            assert!(hits <= allowed, "{banned} appears {hits} times");
        }
    }

    #[test]
    fn log_axes_drop_nonpositive_points_instead_of_panicking() {
        let mut plot = LinePlot::new("t", "x", "y").log_y();
        plot.add("a", vec![(1.0, 0.0), (2.0, 10.0), (3.0, 1000.0)]);
        let svg = plot.render();
        assert!(svg.contains("polyline"));
        assert!(svg.contains("1e1"));
    }

    #[test]
    fn long_series_are_thinned() {
        let mut plot = LinePlot::new("t", "x", "y");
        plot.add("a", (0..10_000).map(|i| (i as f64, i as f64)).collect());
        let svg = plot.render();
        let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        assert!(line.matches(',').count() <= MAX_POINTS + 1);
    }

    #[test]
    fn labels_are_escaped() {
        let mut plot = LinePlot::new("a < b", "x", "y");
        plot.add("r&d", ramp());
        let svg = plot.render();
        assert!(svg.contains("a &lt; b"));
        assert!(svg.contains("r&amp;d"));
    }

    #[test]
    fn degenerate_ranges_still_render() {
        let mut plot = LinePlot::new("t", "x", "y");
        plot.add("a", vec![(5.0, 7.0), (5.0, 7.0)]);
        let svg = plot.render();
        assert!(svg.contains("polyline"));
    }
}
