//! Sweep and optimization reports: CSV, JSON and an SVG force chart.

use std::fmt::Write as _;

use serde::Serialize;

use scissor_core::{AnalysisRow, Evaluation, Refinement, SearchResult};

/// One sweep row as written to CSV and JSON. Singular rows carry no
/// velocity ratio or force.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub theta_deg: f64,
    pub theta_rad: f64,
    pub height_m: f64,
    pub actuator_length_m: f64,
    pub dh_dl: Option<f64>,
    pub force_n: Option<f64>,
    pub singular: bool,
}

impl From<&AnalysisRow> for SweepRecord {
    fn from(r: &AnalysisRow) -> Self {
        Self {
            theta_deg: r.theta.to_degrees(),
            theta_rad: r.theta,
            height_m: r.height,
            actuator_length_m: r.length,
            dh_dl: r.dh_dl,
            force_n: r.force,
            singular: r.singular(),
        }
    }
}

pub const CSV_HEADER: &str =
    "theta_deg,theta_rad,height_m,actuator_length_m,dh_dl,force_n,singular";

pub fn to_csv(records: &[SweepRecord]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json(records: &[SweepRecord]) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(records)?;
    s.push('\n');
    Ok(s)
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 48.0;
const BOTTOM: f64 = 64.0;
const TICKS: usize = 5;

fn label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Force against angle. The line is broken at singular samples.
pub fn to_svg(records: &[SweepRecord]) -> String {
    let (x_lo, x_hi) = match (records.first(), records.last()) {
        (Some(f), Some(l)) if l.theta_deg > f.theta_deg => (f.theta_deg, l.theta_deg),
        (Some(f), _) => (f.theta_deg - 1.0, f.theta_deg + 1.0),
        _ => (0.0, 90.0),
    };
    let forces: Vec<f64> = records.iter().filter_map(|r| r.force_n).collect();
    let (mut y_lo, mut y_hi) = forces
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &f| {
            (lo.min(f), hi.max(f))
        });
    if forces.is_empty() {
        (y_lo, y_hi) = (0.0, 1.0);
    } else if y_hi - y_lo <= 1e-9 * y_hi.abs().max(1.0) {
        let pad = (0.1 * y_hi.abs()).max(1.0);
        (y_lo, y_hi) = (y_lo - pad, y_hi + pad);
    }

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="16">Actuator force vs lift angle</text>"#,
        WIDTH / 2.0
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    for k in 0..=TICKS {
        let t = k as f64 / TICKS as f64;
        let xv = x_lo + t * (x_hi - x_lo);
        let yv = y_lo + t * (y_hi - y_lo);
        let (x, y) = (px(xv), py(yv));
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{b:.2}" x2="{x:.2}" y2="{b2:.2}" stroke="black"/><text x="{x:.2}" y="{ty:.2}" text-anchor="middle">{lab}</text>"##,
            b = TOP + plot_h,
            b2 = TOP + plot_h + 5.0,
            ty = TOP + plot_h + 20.0,
            lab = label(xv)
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{l:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{tx:.2}" y="{ty:.2}" text-anchor="end">{lab}</text>"##,
            l = LEFT - 5.0,
            tx = LEFT - 8.0,
            ty = y + 4.0,
            lab = label(yv)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">theta (deg)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{y}" text-anchor="middle" transform="rotate(-90 20 {y})">force (N)</text>"#,
        y = TOP + plot_h / 2.0
    );

    let mut segment: Vec<(f64, f64)> = Vec::new();
    let mut segments = Vec::new();
    for r in records {
        match r.force_n {
            Some(f) => segment.push((px(r.theta_deg), py(f))),
            None => {
                segments.push(std::mem::take(&mut segment));
                let x = px(r.theta_deg);
                let _ = writeln!(
                    svg,
                    r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#c0392b" stroke-dasharray="4 4"/>"##,
                    TOP + plot_h
                );
            }
        }
    }
    segments.push(segment);
    for seg in segments.iter().filter(|s| !s.is_empty()) {
        let points: Vec<String> = seg.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            svg,
            r##"<polyline fill="none" stroke="#1f77b4" stroke-width="2" points="{}"/>"##,
            points.join(" ")
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[derive(Debug, Clone, Serialize)]
pub struct RankedEntry {
    pub a: f64,
    pub b: f64,
    pub i: u32,
    pub slope: &'static str,
    pub objective: Option<f64>,
    pub feasible: bool,
    pub violations: Vec<&'static str>,
}

impl From<&Evaluation> for RankedEntry {
    fn from(e: &Evaluation) -> Self {
        let v = &e.violations;
        let violations = [
            (v.singular, "singular"),
            (v.degenerate, "degenerate"),
            (v.max_force, "max_force"),
            (v.max_length, "max_length"),
            (v.min_length, "min_length"),
        ]
        .into_iter()
        .filter_map(|(set, name)| set.then_some(name))
        .collect();
        Self {
            a: e.placement.a,
            b: e.placement.b,
            i: e.placement.i,
            slope: e.placement.slope.as_str(),
            objective: e.objective,
            feasible: e.feasible(),
            violations,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RefinedEntry {
    pub a: f64,
    pub b: f64,
    pub i: u32,
    pub slope: &'static str,
    pub objective: f64,
    pub trace: Vec<f64>,
}

impl From<&Refinement> for RefinedEntry {
    fn from(r: &Refinement) -> Self {
        Self {
            a: r.placement.a,
            b: r.placement.b,
            i: r.placement.i,
            slope: r.placement.slope.as_str(),
            objective: r.objective,
            trace: r.trace.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizeReport {
    pub objective: &'static str,
    pub candidates: usize,
    pub feasible: usize,
    pub best: Option<RankedEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refined: Option<RefinedEntry>,
    pub ranked: Vec<RankedEntry>,
}

impl OptimizeReport {
    pub fn new(
        objective: &'static str,
        result: &SearchResult,
        refined: Option<&Refinement>,
    ) -> Self {
        Self {
            objective,
            candidates: result.ranked.len(),
            feasible: result.ranked.iter().filter(|e| e.feasible()).count(),
            best: result.best().map(RankedEntry::from),
            refined: refined.map(RefinedEntry::from),
            ranked: result.ranked.iter().map(RankedEntry::from).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(theta_deg: f64, force: Option<f64>) -> SweepRecord {
        SweepRecord {
            theta_deg,
            theta_rad: theta_deg.to_radians(),
            height_m: 1.0,
            actuator_length_m: 0.5,
            dh_dl: force.map(|f| f / 100.0),
            force_n: force,
            singular: force.is_none(),
        }
    }

    #[test]
    fn csv_header_and_empty_fields() {
        let csv = to_csv(&[rec(10.0, Some(200.0)), rec(20.0, None)]).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert!(lines.next().unwrap().ends_with(",2.0,200.0,false"));
        assert!(lines.next().unwrap().ends_with(",,,true"));
    }

    #[test]
    fn json_uses_null_for_singular() {
        let json = to_json(&[rec(20.0, None)]).unwrap();
        assert!(json.contains("\"force_n\": null"));
        assert!(json.contains("\"singular\": true"));
    }

    #[test]
    fn svg_breaks_at_singular_rows() {
        let rows = [
            rec(10.0, Some(3.0)),
            rec(20.0, Some(2.0)),
            rec(30.0, None),
            rec(40.0, Some(2.5)),
            rec(50.0, Some(2.7)),
        ];
        let svg = to_svg(&rows);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("viewBox=\"0 0 800 500\""));
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }

    #[test]
    fn svg_handles_constant_force() {
        let svg = to_svg(&[rec(10.0, Some(200.0)), rec(20.0, Some(200.0))]);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(!svg.contains("NaN"));
    }
}
