//! Minimal static SVG line charts.
//!
//! On a log axis, non-positive values are clamped to the axis floor: one
//! decade below the smallest positive value on that axis (or `1e-12` when
//! there is none). Non-finite values are dropped from the polyline.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::table::{ResultTable, Value};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, Default)]
pub struct ChartSpec {
    pub title: String,
    pub x: String,
    pub ys: Vec<String>,
    /// Split each y column into one series per distinct value of this column.
    pub group_by: Option<String>,
    pub log_x: bool,
    pub log_y: bool,
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

struct Axis {
    log: bool,
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64> + Clone, log: bool) -> (Self, f64) {
        let finite = values.filter(|v| v.is_finite());
        let floor = if log {
            finite
                .clone()
                .filter(|v| *v > 0.0)
                .fold(f64::INFINITY, f64::min)
                .min(f64::MAX)
                / 10.0
        } else {
            f64::NEG_INFINITY
        };
        let floor = if log && !(floor.is_finite() && floor > 0.0) {
            1e-12
        } else {
            floor
        };
        let clamp = |v: f64| if log { v.max(floor) } else { v };
        let (mut lo, mut hi) = finite
            .map(clamp)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if !lo.is_finite() {
            (lo, hi) = if log { (1.0, 10.0) } else { (0.0, 1.0) };
        }
        if log {
            lo = 10f64.powf(lo.log10().floor());
            hi = 10f64.powf(hi.log10().ceil());
            if hi <= lo {
                hi = lo * 10.0;
            }
        } else if hi <= lo {
            lo -= 0.5;
            hi += 0.5;
        } else {
            let pad = 0.05 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
        (Self { log, lo, hi }, floor)
    }

    fn frac(&self, v: f64) -> f64 {
        if self.log {
            (v.log10() - self.lo.log10()) / (self.hi.log10() - self.lo.log10())
        } else {
            (v - self.lo) / (self.hi - self.lo)
        }
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.log10().round() as i32, self.hi.log10().round() as i32);
            let stride = ((b - a) / 8).max(1);
            (a..=b).step_by(stride as usize).map(|e| 10f64.powi(e)).collect()
        } else {
            (0..=5)
                .map(|k| self.lo + (self.hi - self.lo) * k as f64 / 5.0)
                .collect()
        }
    }
}

fn label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.0e}")
    } else {
        format!("{:.3}", v)
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn collect_series(table: &ResultTable, spec: &ChartSpec) -> Result<Vec<Series>> {
    let missing = |c: &str| Error::InvalidParameter(format!("no column named {c}"));
    let xs = table.column_f64(&spec.x).ok_or_else(|| missing(&spec.x))?;
    let groups: Vec<String> = match &spec.group_by {
        Some(g) => {
            let idx = table.column_index(g).ok_or_else(|| missing(g))?;
            table
                .rows()
                .iter()
                .map(|r| match &r[idx] {
                    Value::Num(x) => format!("{g}={}", label(*x)),
                    Value::Text(s) => format!("{g}={s}"),
                })
                .collect()
        }
        None => vec![String::new(); table.len()],
    };
    let mut distinct: Vec<&String> = Vec::new();
    for g in &groups {
        if !distinct.contains(&g) {
            distinct.push(g);
        }
    }
    let mut out = Vec::new();
    for y in &spec.ys {
        let ys = table.column_f64(y).ok_or_else(|| missing(y))?;
        for g in &distinct {
            let points = (0..table.len())
                .filter(|&i| &groups[i] == *g)
                .map(|i| (xs[i], ys[i]))
                .collect();
            let label = if g.is_empty() { y.clone() } else { format!("{y} ({g})") };
            out.push(Series { label, points });
        }
    }
    Ok(out)
}

pub fn render_svg_string(table: &ResultTable, spec: &ChartSpec) -> Result<String> {
    let series = collect_series(table, spec)?;
    let all = || series.iter().flat_map(|s| s.points.iter());
    let (xa, xfloor) = Axis::fit(all().map(|p| p.0), spec.log_x);
    let (ya, yfloor) = Axis::fit(all().map(|p| p.1), spec.log_y);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |v: f64| LEFT + pw * xa.frac(if xa.log { v.max(xfloor) } else { v });
    let py = |v: f64| TOP + ph * (1.0 - ya.frac(if ya.log { v.max(yfloor) } else { v }));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&spec.title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for t in xa.ticks() {
        let x = px(t);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="#ddd"/><text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"##,
            TOP,
            TOP + ph,
            TOP + ph + 18.0,
            label(t)
        );
    }
    for t in ya.ticks() {
        let y = py(t);
        let _ = writeln!(
            s,
            r##"<line x1="{}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ddd"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT,
            LEFT + pw,
            LEFT - 6.0,
            y + 4.0,
            label(t)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 18.0,
        escape(&spec.x)
    );
    for (k, ser) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = ser
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = TOP + 10.0 + 18.0 * k as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 18.0,
            lx + 24.0,
            ly + 4.0,
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn render_svg(table: &ResultTable, path: &Path, spec: &ChartSpec) -> Result<()> {
    std::fs::write(path, render_svg_string(table, spec)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> ResultTable {
        let mut t = ResultTable::new(&["theta", "alpha_mse", "alpha_ub"]).unwrap();
        for (th, a, b) in [(1e-3, 0.0, 0.0), (1e-1, 1e-4, 0.0), (1.0, 0.05, 0.2), (10.0, 30.0, 200.0)] {
            t.push(vec![th.into(), a.into(), b.into()]).unwrap();
        }
        t
    }

    #[test]
    fn log_chart_with_zeros_has_no_nan() {
        let spec = ChartSpec {
            title: "alpha* vs theta".into(),
            x: "theta".into(),
            ys: vec!["alpha_mse".into(), "alpha_ub".into()],
            log_x: true,
            log_y: true,
            ..Default::default()
        };
        let svg = render_svg_string(&table(), &spec).unwrap();
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("alpha_ub"));
    }

    #[test]
    fn grouped_series() {
        let mut t = ResultTable::new(&["p", "alpha", "mse"]).unwrap();
        for p in [0.1, 0.5, 1.0] {
            for a in [0.01, 1.0] {
                t.push(vec![p.into(), a.into(), (p * a).into()]).unwrap();
            }
        }
        let spec = ChartSpec {
            x: "p".into(),
            ys: vec!["mse".into()],
            group_by: Some("alpha".into()),
            ..Default::default()
        };
        let svg = render_svg_string(&t, &spec).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
    }

    #[test]
    fn unknown_column() {
        let spec = ChartSpec {
            x: "nope".into(),
            ..Default::default()
        };
        assert!(render_svg_string(&table(), &spec).is_err());
    }
}
