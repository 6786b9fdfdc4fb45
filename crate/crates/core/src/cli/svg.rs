//! Pictures of the stratified torus: SVG for k = 2, a text circle for
//! k = 1.

use num::ToPrimitive;

use crate::ratlin::{fmt_rational, Rational};
use crate::strat::Stratification;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(0.0)
}

/// Screen position of `(u, v)` in the unit square, `v` pointing up.
fn screen(u: f64, v: f64) -> (f64, f64) {
    (MARGIN + u * SIZE, MARGIN + (1.0 - v) * SIZE)
}

/// The segment of `b . f = m` inside the unit square, if it has positive
/// length.
fn clip(b: [f64; 2], m: f64) -> Option<((f64, f64), (f64, f64))> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut push = |p: (f64, f64)| {
        if (-1e-9..=1.0 + 1e-9).contains(&p.0)
            && (-1e-9..=1.0 + 1e-9).contains(&p.1)
            && !pts.iter().any(|q| (q.0 - p.0).abs() < 1e-9 && (q.1 - p.1).abs() < 1e-9)
        {
            pts.push(p);
        }
    };
    for t in [0.0, 1.0] {
        if b[1] != 0.0 {
            push((t, (m - b[0] * t) / b[1]));
        }
        if b[0] != 0.0 {
            push(((m - b[1] * t) / b[0], t));
        }
    }
    if pts.len() < 2 {
        return None;
    }
    pts.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    Some((pts[0], pts[pts.len() - 1]))
}

/// The fundamental square `[0,1]^2` with the hyperplanes `H_i = m` and a
/// label at the interior point of every cell.
pub fn svg_k2(s: &Stratification) -> Option<String> {
    let q = &s.quadruple;
    if q.k != 2 {
        return None;
    }
    let side = SIZE + 2.0 * MARGIN;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{side}\" height=\"{side}\" viewBox=\"0 0 {side} {side}\">\n"
    );
    let (x0, y0) = screen(0.0, 1.0);
    out.push_str(&format!(
        "  <rect x=\"{x0}\" y=\"{y0}\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n"
    ));
    for i in 0..q.n {
        let b = q.ray_image(i);
        let bf = [b[0] as f64, b[1] as f64];
        let corners = [0, b[0], b[1], b[0] + b[1]];
        let lo = *corners.iter().min().expect("four corners");
        let hi = *corners.iter().max().expect("four corners");
        for m in lo..=hi {
            if let Some((p, r)) = clip(bf, m as f64) {
                let (ax, ay) = screen(p.0, p.1);
                let (bx, by) = screen(r.0, r.1);
                out.push_str(&format!(
                    "  <line class=\"hyperplane\" data-ray=\"{}\" data-level=\"{m}\" x1=\"{ax:.2}\" y1=\"{ay:.2}\" x2=\"{bx:.2}\" y2=\"{by:.2}\" stroke=\"black\"/>\n",
                    i + 1
                ));
            }
        }
    }
    for c in &s.cells {
        let (x, y) = screen(to_f64(&c.interior[0]), to_f64(&c.interior[1]));
        let kind = ["vertex", "edge", "face"][c.dim];
        if c.dim == 0 {
            out.push_str(&format!("  <circle class=\"vertex\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"black\"/>\n"));
        }
        out.push_str(&format!(
            "  <text class=\"cell {kind}\" x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" fill=\"{}\">{}</text>\n",
            x + 6.0,
            y - 6.0,
            ["#b00", "#060", "#00a"][c.dim],
            c.name
        ));
    }
    out.push_str("</svg>\n");
    Some(out)
}

/// Cells of a one-dimensional torus listed once around the circle.
pub fn circle_k1(s: &Stratification) -> Option<String> {
    if s.quadruple.k != 1 {
        return None;
    }
    let mut cells: Vec<_> = s.cells.iter().collect();
    cells.sort_by(|a, b| a.interior[0].cmp(&b.interior[0]));
    let parts: Vec<String> = cells.iter().map(|c| format!("{}({})", c.name, fmt_rational(&c.interior[0]))).collect();
    Some(format!("circle: {} -> back to {}\n", parts.join(" - "), cells[0].name))
}
