//! SVG 1.1 scatter plots of wavenumbers in the complex `k`-plane.
//!
//! One panel per medium. Vertical guide lines mark `Re k` at the strip
//! boundaries `z = j/m`; real roots on them are the quadruples, drawn as
//! squares. Every marker carries a `<title>` with its exact coordinates.

use std::fmt::Write;

use itw::model::ScaledProblem;
use itw::spectrum::Root;

use crate::output::fmt_f64;

const WIDTH: f64 = 820.0;
const PANEL_HEIGHT: f64 = 300.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 40.0;

/// Data for one panel.
pub struct Panel<'a> {
    pub label: String,
    pub problem: &'a ScaledProblem,
    pub roots: &'a [Root],
}

/// `Re k` of the guide lines `z = j/m` inside `[kmin, kmax]`.
pub fn guide_lines(problem: &ScaledProblem, kmin: f64, kmax: f64) -> Vec<(i64, f64)> {
    let step = problem.k_per_z() / problem.m;
    let first = (kmin / step).ceil().max(1.0) as i64;
    (first..)
        .map(|j| (j, j as f64 * step))
        .take_while(|&(_, k)| k <= kmax * (1.0 + 1e-12))
        .collect()
}

pub fn is_quadruple(r: &Root) -> bool {
    r.multiplicity >= 4 && r.is_real()
}

pub fn render(panels: &[Panel<'_>], kmin: f64, kmax: f64) -> String {
    let height = PANEL_HEIGHT * panels.len() as f64;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(s, "<title>Interior transmission wavenumbers</title>");
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{height}" fill="white"/>"#);
    for (i, panel) in panels.iter().enumerate() {
        render_panel(&mut s, panel, kmin, kmax, i as f64 * PANEL_HEIGHT);
    }
    s.push_str("</svg>\n");
    s
}

fn render_panel(s: &mut String, panel: &Panel<'_>, kmin: f64, kmax: f64, top: f64) {
    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (top + MARGIN_TOP, top + PANEL_HEIGHT - MARGIN_BOTTOM);
    let ymax = panel
        .roots
        .iter()
        .map(|r| r.k.im.abs())
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 1.15;
    let px = |k: f64| x0 + (k - kmin) / (kmax - kmin) * (x1 - x0);
    let py = |im: f64| 0.5 * (y0 + y1) - im / ymax * 0.5 * (y1 - y0);

    let _ = writeln!(s, r#"<g class="panel">"#);
    let _ = writeln!(s, "<title>{}</title>", panel.label);
    let _ = writeln!(
        s,
        r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y1 - y0
    );
    let _ = writeln!(
        s,
        r##"<line class="axis" x1="{x0:.2}" y1="{0:.2}" x2="{x1:.2}" y2="{0:.2}" stroke="#888888" stroke-dasharray="2,3"/>"##,
        py(0.0)
    );
    for (j, k) in guide_lines(panel.problem, kmin, kmax) {
        let x = px(k);
        let _ = writeln!(
            s,
            r##"<line class="guide" x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="#3060c0" stroke-width="0.8"><title>j={j} re_k={}</title></line>"##,
            fmt_f64(k)
        );
    }
    for r in panel.roots.iter().filter(|r| r.k.re >= kmin && r.k.re <= kmax) {
        let (x, y) = (px(r.k.re), py(r.k.im));
        let title = format!(
            "re_k={} im_k={} multiplicity={} parity={}",
            fmt_f64(r.k.re),
            fmt_f64(r.k.im),
            r.multiplicity,
            r.parity
        );
        if is_quadruple(r) {
            let _ = writeln!(
                s,
                r##"<rect class="root quadruple" x="{:.2}" y="{:.2}" width="9" height="9" fill="#d03020"><title>{title}</title></rect>"##,
                x - 4.5,
                y - 4.5
            );
        } else {
            let _ = writeln!(
                s,
                r#"<circle class="root" cx="{x:.2}" cy="{y:.2}" r="3" fill="black"><title>{title}</title></circle>"#
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13">{}</text>"#,
        x0 + 6.0,
        y0 + 16.0,
        panel.label
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">Re k</text>"#,
        0.5 * (x0 + x1),
        y1 + 28.0
    );
    for (v, anchor) in [(kmin, "start"), (kmax, "end")] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{v}</text>"#,
            px(v),
            y1 + 14.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{:.3}</text>"#,
        x0 - 4.0,
        y0 + 10.0,
        ymax
    );
    let _ = writeln!(s, "</g>");
}
