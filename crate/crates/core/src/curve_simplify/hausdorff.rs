//! Exact directed Hausdorff test.
//!
//! For an edge `e(t) = A + t·u` of `P` and a segment `f = [C, D]` of `Q`,
//! the parameters with `dist(e(t), f) ≤ δ` form an interval: the union of
//! the two endpoint disks and the slab over `f`, all convex along `e`. Its
//! endpoints have the shape `p + q·√d` with rational `p, q, d`, and are
//! compared without rounding.

use std::cmp::Ordering;

use crate::cover_solver::Polyline;
use crate::exact_geom::{ExactPoint, Rational, Segment};

/// `p + q·√d`, `d ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub p: Rational,
    pub q: Rational,
    pub d: Rational,
}

impl Surd {
    pub fn rational(p: Rational) -> Self {
        Surd {
            p,
            q: Rational::zero(),
            d: Rational::zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.p.to_f64() + self.q.to_f64() * self.d.to_f64().sqrt()
    }
}

/// Sign of `p + q·√x`.
fn sign1(p: &Rational, q: &Rational, x: &Rational) -> i32 {
    let sp = p.signum();
    let sq = if x.is_zero() { 0 } else { q.signum() };
    if sq == 0 {
        return sp;
    }
    if sp == 0 || sp == sq {
        return sq;
    }
    // Opposite signs: the larger magnitude wins.
    let diff = p.square() - q.square() * x;
    diff.signum() * sp
}

/// Sign of `a + b·√x + c·√y`.
fn sign2(a: &Rational, b: &Rational, x: &Rational, c: &Rational, y: &Rational) -> i32 {
    let s1 = sign1(a, b, x);
    let s2 = if y.is_zero() { 0 } else { c.signum() };
    if s2 == 0 {
        return s1;
    }
    if s1 == 0 || s1 == s2 {
        return s2;
    }
    // |a + b√x| vs |c|√y, compared through squares:
    // (a + b√x)² − c²y = (a² + b²x − c²y) + 2ab√x.
    let lead = a.square() + b.square() * x - c.square() * y;
    let cross = (a * b) * Rational::from(2);
    sign1(&lead, &cross, x) * s1
}

pub fn cmp_surd(l: &Surd, r: &Surd) -> Ordering {
    let a = &l.p - &r.p;
    let neg = -&r.q;
    match sign2(&a, &l.q, &l.d, &neg, &r.d) {
        -1 => Ordering::Less,
        0 => Ordering::Equal,
        _ => Ordering::Greater,
    }
}

fn smax(a: Surd, b: Surd) -> Surd {
    if cmp_surd(&a, &b) == Ordering::Less {
        b
    } else {
        a
    }
}

fn smin(a: Surd, b: Surd) -> Surd {
    if cmp_surd(&a, &b) == Ordering::Greater {
        b
    } else {
        a
    }
}

/// Closed interval with optional (infinite) ends.
#[derive(Clone, Debug)]
struct Span {
    lo: Option<Surd>,
    hi: Option<Surd>,
}

impl Span {
    fn all() -> Self {
        Span { lo: None, hi: None }
    }

    fn clamp_lo(&mut self, v: Surd) {
        self.lo = Some(match self.lo.take() {
            Some(l) => smax(l, v),
            None => v,
        });
    }

    fn clamp_hi(&mut self, v: Surd) {
        self.hi = Some(match self.hi.take() {
            Some(h) => smin(h, v),
            None => v,
        });
    }

    fn is_empty(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(l), Some(h)) if cmp_surd(l, h) == Ordering::Greater)
    }
}

fn dot(ax: &Rational, ay: &Rational, bx: &Rational, by: &Rational) -> Rational {
    ax * bx + ay * by
}

/// `{t : |A + t·u − C| ≤ δ}`.
fn disk_span(a: &ExactPoint, ux: &Rational, uy: &Rational, c: &ExactPoint, d2: &Rational) -> Option<Span> {
    let (wx, wy) = a.sub(c);
    let qa = dot(ux, uy, ux, uy);
    let qb = dot(&wx, &wy, ux, uy);
    let qc = dot(&wx, &wy, &wx, &wy) - d2;
    let disc = qb.square() - &qa * &qc;
    if disc.signum() < 0 {
        return None;
    }
    let center = -&qb / &qa;
    let scale = qa.recip().expect("edge has positive length");
    Some(Span {
        lo: Some(Surd {
            p: center.clone(),
            q: -&scale,
            d: disc.clone(),
        }),
        hi: Some(Surd {
            p: center,
            q: scale,
            d: disc,
        }),
    })
}

/// `{t : A + t·u projects into f and lies within δ of its line}`.
fn slab_span(a: &ExactPoint, ux: &Rational, uy: &Rational, f: &Segment, d2: &Rational) -> Option<Span> {
    let c = f.p();
    let (vx, vy) = f.direction();
    let (wx, wy) = a.sub(c);
    let vv = dot(&vx, &vy, &vx, &vy);
    let mut span = Span::all();
    // Projection parameter s0 + s1·t must lie in [0, |v|²].
    let s0 = dot(&wx, &wy, &vx, &vy);
    let s1 = dot(ux, uy, &vx, &vy);
    linear_between(&mut span, &s0, &s1, &Rational::zero(), &vv, None)?;
    // Signed offset c0 + c1·t must lie in [−δ|v|, δ|v|].
    let c0 = &vx * &wy - &vy * &wx;
    let c1 = &vx * uy - &vy * ux;
    let r2 = d2 * &vv;
    linear_between(&mut span, &c0, &c1, &Rational::zero(), &Rational::zero(), Some(&r2))?;
    (!span.is_empty()).then_some(span)
}

/// Restricts `span` to `lo ≤ k0 + k1·t ≤ hi`, or to `|k0 + k1·t| ≤ √r2`
/// when `radius2` is given. Returns `None` when nothing remains.
fn linear_between(
    span: &mut Span,
    k0: &Rational,
    k1: &Rational,
    lo: &Rational,
    hi: &Rational,
    radius2: Option<&Rational>,
) -> Option<()> {
    let (lo_s, hi_s) = match radius2 {
        Some(r2) => (
            Surd {
                p: Rational::zero(),
                q: -Rational::one(),
                d: r2.clone(),
            },
            Surd {
                p: Rational::zero(),
                q: Rational::one(),
                d: r2.clone(),
            },
        ),
        None => (Surd::rational(lo.clone()), Surd::rational(hi.clone())),
    };
    if k1.is_zero() {
        let v = Surd::rational(k0.clone());
        let inside = cmp_surd(&v, &lo_s) != Ordering::Less && cmp_surd(&v, &hi_s) != Ordering::Greater;
        return inside.then_some(());
    }
    // t = (bound − k0) / k1
    let inv = k1.recip().expect("non-zero");
    let solve = |b: &Surd| Surd {
        p: (&b.p - k0) * &inv,
        q: &b.q * &inv,
        d: b.d.clone(),
    };
    let (t_lo, t_hi) = if k1.signum() > 0 {
        (solve(&lo_s), solve(&hi_s))
    } else {
        (solve(&hi_s), solve(&lo_s))
    };
    span.clamp_lo(t_lo);
    span.clamp_hi(t_hi);
    (!span.is_empty()).then_some(())
}

/// Parameter interval of `e` within `δ` of `f`, clipped to `[0, 1]`.
fn near_interval(e: &Segment, f: &Segment, d2: &Rational) -> Option<(Surd, Surd)> {
    let a = e.p();
    let (ux, uy) = e.direction();
    let pieces = [
        disk_span(a, &ux, &uy, f.p(), d2),
        disk_span(a, &ux, &uy, f.q(), d2),
        slab_span(a, &ux, &uy, f, d2),
    ];
    let mut lo: Option<Surd> = None;
    let mut hi: Option<Surd> = None;
    for s in pieces.into_iter().flatten() {
        let (l, h) = (s.lo.expect("bounded"), s.hi.expect("bounded"));
        lo = Some(match lo {
            Some(x) => smin(x, l),
            None => l,
        });
        hi = Some(match hi {
            Some(x) => smax(x, h),
            None => h,
        });
    }
    let lo = smax(lo?, Surd::rational(Rational::zero()));
    let hi = smin(hi?, Surd::rational(Rational::one()));
    (cmp_surd(&lo, &hi) != Ordering::Greater).then_some((lo, hi))
}

fn edge_covered(e: &Segment, targets: &[Segment], d2: &Rational) -> bool {
    let mut spans: Vec<(Surd, Surd)> = targets.iter().filter_map(|f| near_interval(e, f, d2)).collect();
    spans.sort_by(|x, y| cmp_surd(&x.0, &y.0));
    let mut reach = Surd::rational(Rational::zero());
    let mut started = false;
    for (lo, hi) in spans {
        if cmp_surd(&lo, &reach) == Ordering::Greater {
            return false;
        }
        started = true;
        reach = smax(reach, hi);
    }
    started && cmp_surd(&reach, &Surd::rational(Rational::one())) != Ordering::Less
}

/// Every point of the `sources` lies within `δ` of the union of `targets`.
pub fn segments_within(sources: &[Segment], targets: &[Segment], delta: &Rational) -> bool {
    if delta.signum() < 0 {
        return false;
    }
    let d2 = delta.square();
    sources.iter().all(|e| edge_covered(e, targets, &d2))
}

/// `H(P, Q) ≤ δ` for the directed Hausdorff distance from `P` to `Q`.
pub fn directed_hausdorff_leq(p: &Polyline, q: &Polyline, delta: &Rational) -> bool {
    segments_within(&p.links(), &q.links(), delta)
}
