//! Hand-written SVG for sweep curves. Output depends only on the rows.

use std::fmt::Write;

use crate::report::SweepRow;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 770.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 440.0;

struct Scale {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Scale {
    fn fit(rows: &[SweepRow]) -> Self {
        let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
        for r in rows {
            x0 = x0.min(r.prior);
            x1 = x1.max(r.prior);
            for y in [r.v_s, r.cav_unconstrained, r.cav_constrained] {
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        }
        if x1 - x0 < 1e-12 {
            x0 -= 0.05;
            x1 += 0.05;
        }
        if y1 - y0 < 1e-12 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let pad = 0.05 * (y1 - y0);
        Self { x0, x1, y0: y0 - pad, y1: y1 + pad }
    }

    fn x(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (RIGHT - LEFT)
    }

    fn y(&self, y: f64) -> f64 {
        BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (BOTTOM - TOP)
    }
}

const SERIES: [(&str, &str, &str); 3] = [
    ("v_S", "#7f7f7f", ""),
    ("cav (unconstrained)", "#1f77b4", " stroke-dasharray=\"7 5\""),
    ("cav (constrained)", "#d62728", ""),
];

fn series(r: &SweepRow, k: usize) -> f64 {
    [r.v_s, r.cav_unconstrained, r.cav_constrained][k]
}

pub fn render(rows: &[SweepRow], title: &str) -> String {
    let s = Scale::fit(rows);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(out, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(out, "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>", WIDTH / 2.0, escape(title));
    axes(&mut out, &s);
    // Where the constrained curve rises above v_S the sender reveals something.
    if rows.len() > 1 {
        for run in informative_runs(rows) {
            let pts = polyline(&s, &rows[run.0..=run.1], 2);
            let _ = writeln!(out, "<polyline points=\"{pts}\" fill=\"none\" stroke=\"#d62728\" stroke-opacity=\"0.25\" stroke-width=\"8\" class=\"chord\"/>");
        }
    }
    for (k, (_, color, dash)) in SERIES.iter().enumerate() {
        if rows.len() > 1 {
            let pts = polyline(&s, rows, k);
            let _ = writeln!(out, "<polyline points=\"{pts}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"{dash}/>");
        } else {
            for r in rows {
                let _ = writeln!(out, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{}\" fill=\"{color}\"/>", s.x(r.prior), s.y(series(r, k)), 6 - k);
            }
        }
    }
    for (k, (name, color, dash)) in SERIES.iter().enumerate() {
        let y = TOP + 8.0 + 18.0 * k as f64;
        let _ = writeln!(out, "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"2\"{dash}/>", RIGHT - 170.0, RIGHT - 140.0);
        let _ = writeln!(out, "<text x=\"{}\" y=\"{}\">{}</text>", RIGHT - 132.0, y + 4.0, escape(name));
    }
    out.push_str("</svg>\n");
    out
}

fn axes(out: &mut String, s: &Scale) {
    let _ = writeln!(out, "<g stroke=\"black\" stroke-width=\"1\">");
    let _ = writeln!(out, "<line x1=\"{LEFT}\" y1=\"{BOTTOM}\" x2=\"{RIGHT}\" y2=\"{BOTTOM}\"/>");
    let _ = writeln!(out, "<line x1=\"{LEFT}\" y1=\"{BOTTOM}\" x2=\"{LEFT}\" y2=\"{TOP}\"/>");
    out.push_str("</g>\n");
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let xv = s.x0 + t * (s.x1 - s.x0);
        let yv = s.y0 + t * (s.y1 - s.y0);
        let (px, py) = (s.x(xv), s.y(yv));
        let _ = writeln!(out, "<line x1=\"{px:.2}\" y1=\"{BOTTOM}\" x2=\"{px:.2}\" y2=\"{}\" stroke=\"black\"/>", BOTTOM + 5.0);
        let _ = writeln!(out, "<text x=\"{px:.2}\" y=\"{}\" text-anchor=\"middle\">{}</text>", BOTTOM + 20.0, tick(xv));
        let _ = writeln!(out, "<line x1=\"{}\" y1=\"{py:.2}\" x2=\"{LEFT}\" y2=\"{py:.2}\" stroke=\"black\"/>", LEFT - 5.0);
        let _ = writeln!(out, "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>", LEFT - 8.0, py + 4.0, tick(yv));
    }
    let _ = writeln!(out, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">prior</text>", (LEFT + RIGHT) / 2.0, HEIGHT - 18.0);
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn polyline(s: &Scale, rows: &[SweepRow], k: usize) -> String {
    rows.iter().map(|r| format!("{:.2},{:.2}", s.x(r.prior), s.y(series(r, k)))).collect::<Vec<_>>().join(" ")
}

/// Maximal index ranges where the constrained value exceeds `v_S`, widened by
/// one row on each side so the segment meets the curve.
fn informative_runs(rows: &[SweepRow]) -> Vec<(usize, usize)> {
    let above: Vec<bool> = rows.iter().map(|r| r.cav_constrained > r.v_s + 1e-9).collect();
    let mut runs = Vec::new();
    let mut i = 0;
    while i < rows.len() {
        if above[i] {
            let start = i;
            while i + 1 < rows.len() && above[i + 1] {
                i += 1;
            }
            runs.push((start.saturating_sub(1), (i + 1).min(rows.len() - 1)));
        }
        i += 1;
    }
    runs
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
