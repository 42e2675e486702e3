//! Deterministic SVG pictures of embeddings, cover instances and witnesses.
//!
//! Coordinates become floating point only here. The vertical axis is drawn
//! on a symmetric log scale, `sign(y)·log10(1 + |y|)`, so the factorial
//! curve stays legible; exact coordinates go into `<title>` tooltips.

use std::fmt::Write as _;

use crate::cover_solver::Polyline;
use crate::exact_geom::{ray_intersect, ExactPoint, Intersection, Rational, Ray, Segment};
use crate::needle_reduce::{CoverInstance, LEAD_H, LEAD_T, LEAD_V};
use crate::ray_embed::{curve_point, RayEmbedding};

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 720.0;
const MARGIN: f64 = 40.0;
const SAMPLES: usize = 48;

/// Formats `v` with 12 significant digits and no trailing zeros.
pub fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (11 - exp).clamp(0, 30) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn symlog(y: f64) -> f64 {
    y.signum() * y.abs().ln_1p() / std::f64::consts::LN_10
}

fn warp(p: &ExactPoint) -> (f64, f64) {
    let (x, y) = p.to_f64();
    (x, symlog(y))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

enum Shape {
    Path {
        pts: Vec<(f64, f64)>,
        style: &'static str,
        title: String,
    },
    Dot {
        at: (f64, f64),
        r: f64,
        style: &'static str,
        title: String,
    },
    Label {
        at: (f64, f64),
        text: String,
    },
}

/// Shapes grouped in named layers, laid out once all are known.
#[derive(Default)]
struct Sheet {
    layers: Vec<(&'static str, Vec<Shape>)>,
}

impl Sheet {
    fn layer(&mut self, name: &'static str) -> &mut Vec<Shape> {
        if let Some(i) = self.layers.iter().position(|(n, _)| *n == name) {
            return &mut self.layers[i].1;
        }
        self.layers.push((name, Vec::new()));
        &mut self.layers.last_mut().expect("just pushed").1
    }

    fn bounds(&self) -> Option<(f64, f64, f64, f64)> {
        let mut it = self.layers.iter().flat_map(|(_, s)| s).flat_map(|s| match s {
            Shape::Path { pts, .. } => pts.clone(),
            Shape::Dot { at, .. } | Shape::Label { at, .. } => vec![*at],
        });
        let first = it.next()?;
        Some(it.fold((first.0, first.1, first.0, first.1), |(a, b, c, d), (x, y)| {
            (a.min(x), b.min(y), c.max(x), d.max(y))
        }))
    }

    fn finish(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
            WIDTH, HEIGHT, WIDTH, HEIGHT
        );
        let Some((x0, y0, x1, y1)) = self.bounds() else {
            out.push_str("</svg>\n");
            return out;
        };
        let sx = (WIDTH - 2.0 * MARGIN) / (x1 - x0).max(1e-9);
        let sy = (HEIGHT - 2.0 * MARGIN) / (y1 - y0).max(1e-9);
        let map = |(x, y): (f64, f64)| (MARGIN + (x - x0) * sx, HEIGHT - MARGIN - (y - y0) * sy);
        let xy = |p: (f64, f64)| {
            let (a, b) = map(p);
            format!("{},{}", sig12(a), sig12(b))
        };
        for (name, shapes) in &self.layers {
            let _ = writeln!(out, "<g id=\"{name}\">");
            for s in shapes {
                match s {
                    Shape::Path { pts, style, title } => {
                        let d: Vec<String> = pts.iter().map(|&p| xy(p)).collect();
                        let _ = writeln!(
                            out,
                            "<polyline points=\"{}\" {style}><title>{}</title></polyline>",
                            d.join(" "),
                            escape(title)
                        );
                    }
                    Shape::Dot { at, r, style, title } => {
                        let (a, b) = map(*at);
                        let _ = writeln!(
                            out,
                            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" {style}><title>{}</title></circle>",
                            sig12(a),
                            sig12(b),
                            sig12(*r),
                            escape(title)
                        );
                    }
                    Shape::Label { at, text } => {
                        let (a, b) = map(*at);
                        let _ = writeln!(
                            out,
                            "<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>",
                            sig12(a),
                            sig12(b),
                            escape(text)
                        );
                    }
                }
            }
            let _ = writeln!(out, "</g>");
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Samples the straight piece `a → b` so that it bends correctly under the
/// warped axis.
fn sampled(a: &ExactPoint, b: &ExactPoint) -> Vec<(f64, f64)> {
    let (ax, ay) = a.to_f64();
    let (bx, by) = b.to_f64();
    (0..=SAMPLES)
        .map(|i| {
            let t = i as f64 / SAMPLES as f64;
            (ax + t * (bx - ax), symlog(ay + t * (by - ay)))
        })
        .collect()
}

/// Point on the line of `r` at abscissa `x`.
fn ray_at_x(r: &Ray, x: i64) -> ExactPoint {
    let t = (Rational::from(x) - &r.origin().x) / r.dx();
    r.point_at(&t)
}

const RAY_STYLE: &str = "fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\"";
const COMPLEMENT_STYLE: &str = "fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1\" stroke-dasharray=\"4 3\"";
const CURVE_STYLE: &str = "fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"";
const MARK_STYLE: &str = "fill=\"#c0392b\" stroke=\"none\"";
const NEEDLE_STYLE: &str = "fill=\"none\" stroke=\"#2e7d32\" stroke-width=\"1.5\"";
const LEAD_STYLE: &str = "fill=\"none\" stroke=\"#6a1b9a\" stroke-width=\"2\"";
const WITNESS_STYLE: &str = "fill=\"none\" stroke=\"#e67e22\" stroke-width=\"1\" stroke-opacity=\"0.8\"";

/// Rays on the factorial curve with their complements and the pairwise
/// intersection points.
pub fn render_embedding(e: &RayEmbedding) -> String {
    let mut sheet = Sheet::default();
    let n = e.n() as u64;
    if n > 0 {
        let curve: Vec<ExactPoint> = (1..=2 * n).map(curve_point).collect();
        let pts = curve.iter().map(warp).collect();
        sheet.layer("curve").push(Shape::Path {
            pts,
            style: CURVE_STYLE,
            title: "y = x!".into(),
        });
        for p in &curve {
            sheet.layer("curve").push(Shape::Dot {
                at: warp(p),
                r: 2.0,
                style: CURVE_STYLE,
                title: p.to_string(),
            });
        }
    }
    let right = 2 * n as i64 + 1;
    for (i, r) in e.rays().iter().enumerate() {
        let (a, b) = e.position(i + 1);
        let far = ray_at_x(r, right);
        sheet.layer("rays").push(Shape::Path {
            pts: sampled(r.origin(), &far),
            style: RAY_STYLE,
            title: format!(
                "ray {}: chord ({a}, {b}) origin={} dir=({}, {})",
                i + 1,
                r.origin(),
                r.dx(),
                r.dy()
            ),
        });
        let back = ray_at_x(r, 0);
        sheet.layer("complements").push(Shape::Path {
            pts: sampled(r.origin(), &back),
            style: COMPLEMENT_STYLE,
            title: format!("complement of ray {}", i + 1),
        });
    }
    for u in 0..e.n() {
        for v in u + 1..e.n() {
            if let Intersection::Point(p) = ray_intersect(&e.rays()[u], &e.rays()[v]) {
                sheet.layer("markers").push(Shape::Dot {
                    at: warp(&p),
                    r: 3.5,
                    style: MARK_STYLE,
                    title: format!("rays {} and {} meet at {p}", u + 1, v + 1),
                });
            }
        }
    }
    sheet.finish()
}

fn segment_shape(label: &str, s: &Segment, style: &'static str) -> Shape {
    Shape::Path {
        pts: sampled(s.p(), s.q()),
        style,
        title: format!("{label}: {} {}", s.p(), s.q()),
    }
}

/// Needles, leading segments and optionally a covering polyline with
/// numbered links.
pub fn render_instance(ci: &CoverInstance, witness: Option<&Polyline>) -> String {
    let mut sheet = Sheet::default();
    let lead = ci.reduction().map(|_| [LEAD_H, LEAD_V, LEAD_T]);
    for (i, s) in ci.segments().iter().enumerate() {
        let is_lead = lead.is_some_and(|l| l.contains(&i));
        let (layer, style) = if is_lead {
            ("leading", LEAD_STYLE)
        } else {
            ("needles", NEEDLE_STYLE)
        };
        sheet.layer(layer).push(segment_shape(ci.label(i), s, style));
    }
    if let Some(w) = witness {
        for (i, link) in w.links().iter().enumerate() {
            sheet
                .layer("witness")
                .push(segment_shape(&format!("link {}", i + 1), link, WITNESS_STYLE));
            let half = Rational::frac(1, 2);
            let mid = link.point_at(&half);
            sheet.layer("witness").push(Shape::Label {
                at: warp(&mid),
                text: (i + 1).to_string(),
            });
        }
    }
    sheet.finish()
}
