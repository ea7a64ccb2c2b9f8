//! Minimal self-contained SVG line, scatter, bar and heatmap plots.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;
const MAX_LEGEND: usize = 8;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mark {
    Line,
    Dots,
    /// Bars of the given width, centred on each x.
    Bars(f64),
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub mark: Mark,
}

impl Series {
    pub fn new(label: impl Into<String>, mark: Mark, points: Vec<(f64, f64)>) -> Self {
        Series {
            label: label.into(),
            points,
            mark,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

impl Plot {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Plot {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
        }
    }

    pub fn with(mut self, series: Series) -> Self {
        self.series.push(series);
        self
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let m = raw / mag;
    let f = if m < 1.5 {
        1.0
    } else if m < 3.5 {
        2.0
    } else if m < 7.5 {
        5.0
    } else {
        10.0
    };
    f * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(hi > lo) {
        let d = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        (lo - d, hi + d)
    } else {
        let d = 0.04 * (hi - lo);
        (lo - d, hi + d)
    }
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn open(out: &mut String, title: &str) {
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        out,
        "<rect x=\"{x0}\" y=\"{y1}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        x1 - x0,
        y0 - y1
    );
    for t in ticks(f.x.0, f.x.1) {
        let p = f.px(t);
        let _ = writeln!(
            out,
            "<line x1=\"{p:.2}\" y1=\"{y0}\" x2=\"{p:.2}\" y2=\"{}\" stroke=\"black\"/>\
             <text x=\"{p:.2}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            y0 + 5.0,
            y0 + 18.0,
            tick_label(t)
        );
    }
    for t in ticks(f.y.0, f.y.1) {
        let p = f.py(t);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{p:.2}\" x2=\"{x0}\" y2=\"{p:.2}\" stroke=\"black\"/>\
             <text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            x0 - 5.0,
            x0 - 8.0,
            p + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n\
         <text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 14.0,
        escape(x_label),
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn bounds(plot: &Plot) -> Frame {
    let mut x = (f64::INFINITY, f64::NEG_INFINITY);
    let mut y = (f64::INFINITY, f64::NEG_INFINITY);
    for s in &plot.series {
        let half = match s.mark {
            Mark::Bars(w) => 0.5 * w,
            _ => 0.0,
        };
        for &(a, b) in s.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
            x = (x.0.min(a - half), x.1.max(a + half));
            y = (y.0.min(b), y.1.max(b));
            if half > 0.0 {
                y = (y.0.min(0.0), y.1.max(0.0));
            }
        }
    }
    if !x.0.is_finite() {
        x = (0.0, 1.0);
        y = (0.0, 1.0);
    }
    Frame {
        x: padded(x.0, x.1),
        y: padded(y.0, y.1),
    }
}

/// Renders line, scatter and bar series on shared axes.
pub fn render(plot: &Plot) -> String {
    let f = bounds(plot);
    let mut out = String::new();
    open(&mut out, &plot.title);
    axes(&mut out, &f, &plot.x_label, &plot.y_label);
    for (i, s) in plot.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts = s.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite());
        match s.mark {
            Mark::Line if s.points.len() > 1 => {
                let path: Vec<String> = pts.map(|&(a, b)| format!("{:.2},{:.2}", f.px(a), f.py(b))).collect();
                let _ = writeln!(
                    out,
                    "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\" points=\"{}\"/>",
                    path.join(" ")
                );
            }
            Mark::Line | Mark::Dots => {
                for &(a, b) in pts {
                    let _ = writeln!(
                        out,
                        "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"{color}\"/>",
                        f.px(a),
                        f.py(b)
                    );
                }
            }
            Mark::Bars(w) => {
                for &(a, b) in pts {
                    let (l, r) = (f.px(a - 0.5 * w), f.px(a + 0.5 * w));
                    let (top, base) = (f.py(b.max(0.0)), f.py(b.min(0.0)));
                    let _ = writeln!(
                        out,
                        "<rect x=\"{l:.2}\" y=\"{top:.2}\" width=\"{:.2}\" height=\"{:.2}\" \
                         fill=\"{color}\" fill-opacity=\"0.35\" stroke=\"{color}\"/>",
                        r - l,
                        base - top
                    );
                }
            }
        }
    }
    let labelled: Vec<_> = plot.series.iter().enumerate().filter(|(_, s)| !s.label.is_empty()).collect();
    if !labelled.is_empty() && labelled.len() <= MAX_LEGEND {
        for (row, (i, s)) in labelled.iter().enumerate() {
            let y = TOP + 16.0 + 16.0 * row as f64;
            let x = WIDTH - RIGHT - 150.0;
            let _ = writeln!(
                out,
                "<rect x=\"{x}\" y=\"{}\" width=\"12\" height=\"4\" fill=\"{}\"/>\
                 <text x=\"{}\" y=\"{y}\">{}</text>",
                y - 6.0,
                PALETTE[i % PALETTE.len()],
                x + 18.0,
                escape(&s.label)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Colour map from 0 (white) to 1 (dark blue).
fn shade(v: f64) -> String {
    let v = if v.is_finite() { v.clamp(0.0, 1.0) } else { 0.0 };
    let lerp = |a: f64, b: f64| (a + (b - a) * v).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(255.0, 8.0), lerp(255.0, 48.0), lerp(255.0, 107.0))
}

/// Heatmap of `values[i][j]` at `(xs[i], ys[j])`, scaled to the data range.
pub fn heatmap(title: &str, x_label: &str, y_label: &str, xs: &[f64], ys: &[f64], values: &[Vec<f64>]) -> String {
    let step = |v: &[f64]| if v.len() > 1 { (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64 } else { 1.0 };
    let (dx, dy) = (step(xs), step(ys));
    let f = Frame {
        x: (
            xs.first().copied().unwrap_or(0.0) - 0.5 * dx,
            xs.last().copied().unwrap_or(1.0) + 0.5 * dx,
        ),
        y: (
            ys.first().copied().unwrap_or(0.0) - 0.5 * dy,
            ys.last().copied().unwrap_or(1.0) + 0.5 * dy,
        ),
    };
    let flat = values.iter().flatten().copied().filter(|v| v.is_finite());
    let (lo, hi) = flat.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut out = String::new();
    open(&mut out, title);
    for (&x, col) in xs.iter().zip(values) {
        let (l, r) = (f.px(x - 0.5 * dx), f.px(x + 0.5 * dx));
        for (&y, &v) in ys.iter().zip(col) {
            let (top, bottom) = (f.py(y + 0.5 * dy), f.py(y - 0.5 * dy));
            let _ = writeln!(
                out,
                "<rect x=\"{l:.2}\" y=\"{top:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>",
                (r - l) + 0.3,
                (bottom - top) + 0.3,
                shade((v - lo) / span)
            );
        }
    }
    axes(&mut out, &f, x_label, y_label);
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">range [{}, {}]</text>",
        WIDTH - RIGHT,
        TOP - 6.0,
        tick_label(if lo.is_finite() { lo } else { 0.0 }),
        tick_label(if hi.is_finite() { hi } else { 0.0 })
    );
    out.push_str("</svg>\n");
    out
}
