//! SVG pictures of triangulations and quivers.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::quiver::Quiver;
use crate::surface::{Boundary, Curve, Surface, SurfaceModel, Triangulation};

const SIZE: f64 = 400.0;
const C: f64 = SIZE / 2.0;
const R_OUT: f64 = 170.0;
const R_IN: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn open() -> String {
    format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n")
}

fn polar(angle: f64, r: f64) -> (f64, f64) {
    (C + r * angle.cos(), C - r * angle.sin())
}

fn polyline(points: &[(f64, f64)], color: &str, label: &str) -> String {
    let pts: Vec<String> = points.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    format!(
        "  <polyline class=\"arc\" data-arc=\"{label}\" points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
        pts.join(" ")
    )
}

fn dot(out: &mut String, (x, y): (f64, f64), label: &str) {
    let _ = writeln!(out, "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"black\"/>");
    let _ = writeln!(out, "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{label}</text>", x + 6.0, y - 6.0);
}

/// Picture of a triangulation. Generic triangulations have no geometry
/// here, so their quiver is drawn instead.
pub fn render_surface(model: &SurfaceModel) -> String {
    match model {
        SurfaceModel::Geometric(t) => render_triangulation(t),
        SurfaceModel::Generic(g) => render_quiver(&g.quiver(), &g.arcs().iter().map(String::as_str).collect::<Vec<_>>()),
    }
}

pub fn render_triangulation(t: &Triangulation) -> String {
    let mut out = open();
    match t.surface() {
        Surface::Disk { m } => {
            let at = |k: u32| polar(TAU * f64::from(k - 1) / f64::from(m) + TAU / 4.0, R_OUT);
            let ring: Vec<(f64, f64)> = (1..=m + 1).map(|k| at((k - 1) % m + 1)).collect();
            out.push_str(&polyline(&ring, "black", "boundary"));
            for (i, c) in t.arcs().iter().enumerate() {
                if let Curve::Chord { a, b } = *c {
                    out.push_str(&polyline(&[at(a), at(b)], PALETTE[i % PALETTE.len()], &c.to_string()));
                }
            }
            for k in 1..=m {
                dot(&mut out, at(k), &k.to_string());
            }
        }
        Surface::Annulus { p, q } => {
            let period = f64::from(p * q);
            // a strip point at abscissa x and height y (0 outer, 1 inner)
            let strip = |x: f64, y: f64| polar(TAU * x / period + TAU / 4.0, R_OUT - y * (R_OUT - R_IN));
            for r in [R_OUT, R_IN] {
                let _ = writeln!(out, "  <circle cx=\"{C}\" cy=\"{C}\" r=\"{r}\" fill=\"none\" stroke=\"black\"/>");
            }
            for (i, c) in t.arcs().iter().enumerate() {
                let color = PALETTE[i % PALETTE.len()];
                let pts: Vec<(f64, f64)> = match *c {
                    Curve::Bridge { outer, inner, winding } => {
                        let x0 = f64::from((outer - 1) * q);
                        let x1 = (f64::from(inner - 1) + f64::from(q) * winding as f64) * f64::from(p);
                        (0..=64).map(|k| f64::from(k) / 64.0).map(|s| strip(x0 + s * (x1 - x0), s)).collect()
                    }
                    Curve::Peripheral { boundary, start, span } => {
                        let (step, base, sign) = match boundary {
                            Boundary::Outer => (f64::from(q), 0.0, 1.0),
                            Boundary::Inner => (f64::from(p), 1.0, -1.0),
                        };
                        let x0 = f64::from(start - 1) * step;
                        let x1 = x0 + span as f64 * step;
                        (0..=64)
                            .map(|k| f64::from(k) / 64.0)
                            .map(|s| strip(x0 + s * (x1 - x0), base + sign * 0.45 * (std::f64::consts::PI * s).sin()))
                            .collect()
                    }
                    _ => continue,
                };
                out.push_str(&polyline(&pts, color, &c.to_string()));
            }
            for k in 1..=p {
                dot(&mut out, strip(f64::from((k - 1) * q), 0.0), &format!("O{k}"));
            }
            for k in 1..=q {
                dot(&mut out, strip(f64::from((k - 1) * p), 1.0), &format!("I{k}"));
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Quiver with vertices on a circle; multiple arrows carry their count.
pub fn render_quiver(q: &Quiver, labels: &[&str]) -> String {
    let n = q.n().max(1);
    let at = |v: usize| polar(TAU * v as f64 / n as f64 + TAU / 4.0, R_OUT - 20.0);
    let mut out = open();
    out.push_str(
        "  <defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" markerHeight=\"8\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>\n",
    );
    for (s, t, m) in q.arrows() {
        let ((x0, y0), (x1, y1)) = (at(s), at(t));
        let len = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt().max(1.0);
        let (ux, uy) = ((x1 - x0) / len * 12.0, (y1 - y0) / len * 12.0);
        let _ = writeln!(
            out,
            "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" marker-end=\"url(#head)\"/>",
            x0 + ux,
            y0 + uy,
            x1 - ux,
            y1 - uy
        );
        if m > 1 {
            let _ = writeln!(out, "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{m}</text>", (x0 + x1) / 2.0, (y0 + y1) / 2.0);
        }
    }
    for v in 0..q.n() {
        let label = labels.get(v).map_or_else(|| (v + 1).to_string(), |l| (*l).to_string());
        dot(&mut out, at(v), &label);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::presets::kronecker;

    #[test]
    fn disk_and_annulus() {
        let hex = render_triangulation(&Triangulation::standard(Surface::disk(6).unwrap()));
        assert!(hex.starts_with("<svg"));
        assert_eq!(hex.matches("class=\"arc\"").count(), 4);
        assert!(hex.contains("data-arc=\"1-4\""));
        let ann = render_triangulation(&Triangulation::standard(Surface::annulus(2, 1).unwrap()));
        assert_eq!(ann.matches("data-arc=").count(), 3);
        assert!(ann.contains(">I1</text>"));
    }

    #[test]
    fn quiver_picture() {
        let svg = render_quiver(&kronecker(), &["u", "v"]);
        assert_eq!(svg.matches("<line").count(), 1);
        assert!(svg.contains(">2</text>") && svg.contains(">u</text>"));
    }
}
