//! Enlarged cones around segments and the tail-tail test.
//!
//! A polyline within `δ` of a segment must run inside the cone bounded by
//! two lines through the endpoints shifted by `±2δ`. Past an endpoint the
//! cone continues as a tail; a bend between two segments is only possible
//! where the matching tails meet. At `δ = 0` each tail collapses to the
//! closed ray beyond the endpoint, which gives back the exact bend graph.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::{build_dcs_instance, half_safe_delta_for, solve_dcs_zero};
use crate::cover_solver::{best_order, Polyline, TransitionGraph};
use crate::error::{Error, Result};
use crate::exact_geom::{line_point, ExactPoint, Rational, Ray, Segment};
use crate::needle_reduce::CoverInstance;
use crate::ray_embed::factorial;

/// `a·x + b·y + c ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlane {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl HalfPlane {
    /// Left side (inclusive) of the directed line `from → to`.
    fn left_of(from: &ExactPoint, to: &ExactPoint) -> Self {
        let (ux, uy) = to.sub(from);
        let c = &uy * &from.x - &ux * &from.y;
        HalfPlane { a: -uy, b: ux, c }
    }

    fn eval(&self, p: &ExactPoint) -> Rational {
        &self.a * &p.x + &self.b * &p.y + &self.c
    }

    pub fn contains(&self, p: &ExactPoint) -> bool {
        self.eval(p).signum() >= 0
    }

    fn flipped(&self) -> Self {
        HalfPlane {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
        }
    }

    fn boundary_meet(&self, o: &HalfPlane) -> Option<ExactPoint> {
        let den = &self.a * &o.b - &self.b * &o.a;
        if den.is_zero() {
            return None;
        }
        let x = (&self.b * &o.c - &o.b * &self.c) / &den;
        let y = (&o.a * &self.c - &self.a * &o.c) / &den;
        Some(ExactPoint::new(x, y))
    }
}

/// Non-empty test for a pointed intersection of closed half-planes: such a
/// region is non-empty iff one of its candidate vertices satisfies all
/// constraints.
fn feasible(cs: &[&HalfPlane]) -> bool {
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            if let Some(p) = cs[i].boundary_meet(cs[j]) {
                if cs.iter().all(|h| h.contains(&p)) {
                    return true;
                }
            }
        }
    }
    false
}

/// Candidate vertices of the region that satisfy every constraint.
fn feasible_vertices(cs: &[&HalfPlane]) -> Vec<ExactPoint> {
    let mut out: Vec<ExactPoint> = Vec::new();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            if let Some(p) = cs[i].boundary_meet(cs[j]) {
                if cs.iter().all(|h| h.contains(&p)) && !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TailEnd {
    P,
    Q,
}

impl TailEnd {
    /// End reached last when traversing in `orient` (0 means `p → q`).
    pub fn far(orient: usize) -> Self {
        if orient == 0 {
            TailEnd::Q
        } else {
            TailEnd::P
        }
    }

    pub fn near(orient: usize) -> Self {
        if orient == 0 {
            TailEnd::P
        } else {
            TailEnd::Q
        }
    }
}

impl fmt::Display for TailEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailEnd::P => "p",
            TailEnd::Q => "q",
        })
    }
}

/// Cone region past one endpoint.
#[derive(Clone, Debug)]
pub struct Tail {
    pub end: TailEnd,
    pub constraints: Vec<HalfPlane>,
}

/// Enlarged cone of one segment at tolerance `δ`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub segment: Segment,
    pub delta: Rational,
    /// Through `p − off` and `q + off`.
    pub left_bound: Ray,
    /// Through `p + off` and `q − off`.
    pub right_bound: Ray,
    /// Offsets are horizontal unless the segment itself is horizontal.
    pub horizontal_offset: bool,
    tails: [Tail; 2],
}

impl Cone {
    pub fn new(segment: &Segment, delta: &Rational) -> Self {
        let (_, dy) = segment.direction();
        let tilted = !dy.is_zero();
        let off = delta * &Rational::from(2);
        let (ox, oy) = if tilted {
            (off, Rational::zero())
        } else {
            (Rational::zero(), off)
        };
        let (nx, ny) = (-&ox, -&oy);
        let (p, q) = (segment.p(), segment.q());
        let lf = p.offset(&nx, &ny);
        let lt = q.offset(&ox, &oy);
        let rf = p.offset(&ox, &oy);
        let rt = q.offset(&nx, &ny);
        let left = HalfPlane::left_of(&lf, &lt);
        let right = HalfPlane::left_of(&rf, &rt);
        let tail = |end: TailEnd| {
            let (e, other) = match end {
                TailEnd::P => (p, q),
                TailEnd::Q => (q, p),
            };
            let mut constraints = Vec::with_capacity(4);
            for b in [&left, &right] {
                match b.eval(e).signum() {
                    0 => {
                        constraints.push(b.clone());
                        constraints.push(b.flipped());
                    }
                    s if s > 0 => constraints.push(b.clone()),
                    _ => constraints.push(b.flipped()),
                }
            }
            constraints.push(beyond(e, other, tilted));
            Tail { end, constraints }
        };
        let tails = [tail(TailEnd::P), tail(TailEnd::Q)];
        Cone {
            segment: segment.clone(),
            delta: delta.clone(),
            left_bound: Ray::through(lf, &lt).expect("offset endpoints differ"),
            right_bound: Ray::through(rf, &rt).expect("offset endpoints differ"),
            horizontal_offset: tilted,
            tails,
        }
    }

    pub fn tail(&self, end: TailEnd) -> &Tail {
        &self.tails[end as usize]
    }

    /// Point within `δ` of the segment.
    pub fn in_tip(&self, w: &ExactPoint) -> bool {
        let s = &self.segment;
        let t = s.param_of_projection(w);
        let t = t.max(Rational::zero()).min(Rational::one());
        s.point_at(&t).dist2(w) <= self.delta.square()
    }

    fn joint<'a>(&'a self, end: TailEnd, other: &'a Cone, other_end: TailEnd) -> Vec<&'a HalfPlane> {
        self.tail(end)
            .constraints
            .iter()
            .chain(&other.tail(other_end).constraints)
            .collect()
    }

    /// This tail at `end` meets the other cone's tail at `other_end`.
    fn tails_meet(&self, end: TailEnd, other: &Cone, other_end: TailEnd) -> bool {
        feasible(&self.joint(end, other, other_end))
    }
}

/// Closed half-plane past endpoint `e`, cut along `y` unless the segment
/// is horizontal.
fn beyond(e: &ExactPoint, other: &ExactPoint, tilted: bool) -> HalfPlane {
    let z = Rational::zero();
    if tilted {
        let s = Rational::from((&e.y - &other.y).signum() as i64);
        HalfPlane {
            a: z,
            c: -(&s * &e.y),
            b: s,
        }
    } else {
        let s = Rational::from((&e.x - &other.x).signum() as i64);
        HalfPlane {
            b: z,
            c: -(&s * &e.x),
            a: s,
        }
    }
}

trait ProjectionParam {
    fn param_of_projection(&self, w: &ExactPoint) -> Rational;
}

impl ProjectionParam for Segment {
    fn param_of_projection(&self, w: &ExactPoint) -> Rational {
        let (ux, uy) = self.direction();
        let (wx, wy) = w.sub(self.p());
        (&ux * &wx + &uy * &wy) / self.len2()
    }
}

/// Closed ray past an endpoint, tested on a point of the supporting line.
fn on_zero_tail(s: &Segment, end: TailEnd, w: &ExactPoint) -> bool {
    let t = s.param_of(w);
    match end {
        TailEnd::P => t <= Rational::zero(),
        TailEnd::Q => t >= Rational::one(),
    }
}

fn zero_tails_meet(a: &Segment, ea: TailEnd, b: &Segment, eb: TailEnd) -> bool {
    match line_point(&a.supporting_ray(), &b.supporting_ray()) {
        Some(w) => on_zero_tail(a, ea, &w) && on_zero_tail(b, eb, &w),
        None => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairCategory {
    /// Segments of two different needles.
    CrossNeedle,
    /// The two segments of one needle.
    IntraNeedle,
    /// At least one leading segment.
    Leading,
}

impl fmt::Display for PairCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairCategory::CrossNeedle => "cross-needle",
            PairCategory::IntraNeedle => "intra-needle",
            PairCategory::Leading => "leading",
        })
    }
}

/// Tails that meet at the tested `δ` but not at `δ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFinding {
    pub i: usize,
    pub end_i: TailEnd,
    pub j: usize,
    pub end_j: TailEnd,
    pub category: PairCategory,
}

/// Relative placement of two chords `(a, b)` and `(c, d)` with `a < c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChordCase {
    /// `c < b < d`
    Crossing,
    /// `b < c`
    Sequential,
    /// `d < b`
    Nested,
}

impl fmt::Display for ChordCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChordCase::Crossing => "crossing",
            ChordCase::Sequential => "sequential",
            ChordCase::Nested => "nested",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeedlePair {
    pub chords: (usize, usize),
    pub first: (u64, u64),
    pub second: (u64, u64),
    pub case: ChordCase,
    /// Horizontal clearance left after subtracting the cone growth; absent
    /// for crossing chords, whose tails already meet.
    pub margin: Option<Rational>,
}

fn fact(k: u64) -> Rational {
    Rational::from(factorial(k))
}

/// Horizontal gap for chords `(a, b)`, `(c, d)` with `b < c`.
pub fn dist_h_sequential(a: u64, b: u64, c: u64) -> Rational {
    let (fa, fb, fc) = (fact(a), fact(b), fact(c));
    let run = Rational::from((b - a) as i64);
    Rational::from(a as i64) + (&fc - &fa) * run / (&fb - &fa) - Rational::from(c as i64)
}

/// Horizontal gap for chords `(a, b)`, `(c, d)` with `a < c < d < b`.
pub fn dist_h_nested(a: u64, c: u64, d: u64) -> Rational {
    let (fa, fc, fd) = (fact(a), fact(c), fact(d));
    let run = Rational::from((d - c) as i64);
    Rational::from(c as i64) - (&fc - &fa) * run / (&fd - &fc) - Rational::from(a as i64)
}

/// `b² / (b − 1) − 1`, the sequential gap for `a = b − 1`, `c = b + 1`.
pub fn sequential_closed_form(b: u64) -> Rational {
    let b = Rational::from(b as i64);
    b.square() / (&b - &Rational::one()) - Rational::one()
}

/// `1 − (c − 1) / c²`, the nested gap for `a = c − 1`, `d = c + 1`.
pub fn nested_closed_form(c: u64) -> Rational {
    let c = Rational::from(c as i64);
    Rational::one() - (&c - &Rational::one()) / c.square()
}

/// Chord `(a, b)` of a ray on the factorial curve: `a` is the origin's
/// abscissa and `b` the curve point the ray passes through.
fn chord_span(r: &Ray) -> Option<(u64, u64)> {
    let o = r.origin();
    if !o.x.is_integer() || o.x.signum() <= 0 {
        return None;
    }
    let a: u64 = o.x.numer().try_into().ok()?;
    let slope = r.slope()?;
    let fa = factorial(a);
    for b in a + 1..a + 128 {
        let s = Rational::from(factorial(b) - &fa) / Rational::from(BigInt::from(b - a));
        match s.cmp(&slope) {
            std::cmp::Ordering::Equal => return Some((a, b)),
            std::cmp::Ordering::Greater => return None,
            std::cmp::Ordering::Less => {}
        }
    }
    None
}

fn classify(x: (u64, u64), y: (u64, u64)) -> ChordCase {
    let ((_, b), (c, d)) = (x, y);
    if b < c {
        ChordCase::Sequential
    } else if d < b {
        ChordCase::Nested
    } else {
        ChordCase::Crossing
    }
}

/// Any pair of segments whose four endpoints fit in a strip of width `2δ`
/// along one of the two directions; one link could then serve both.
fn mergeable(s: &Segment, t: &Segment, delta: &Rational) -> bool {
    let pts = [s.p(), s.q(), t.p(), t.q()];
    [s, t].iter().any(|r| {
        let (ux, uy) = r.direction();
        let cr: Vec<Rational> = pts
            .iter()
            .map(|w| {
                let (wx, wy) = w.sub(r.p());
                &ux * &wy - &uy * &wx
            })
            .collect();
        let hi = cr.iter().max().expect("four points");
        let lo = cr.iter().min().expect("four points");
        (hi - lo).square() <= Rational::from(4) * delta.square() * r.len2()
    })
}

/// Outcome of the tail-tail enumeration at one tolerance.
#[derive(Clone, Debug)]
pub struct ConeReport {
    pub delta: Rational,
    pub segments: usize,
    pub pairs_checked: usize,
    pub violations: Vec<PairFinding>,
    pub needle_pairs: Vec<NeedlePair>,
    pub mergeable: Vec<(usize, usize)>,
}

impl ConeReport {
    pub fn count(&self, cat: PairCategory) -> usize {
        self.violations.iter().filter(|v| v.category == cat).count()
    }

    pub fn case_count(&self, case: ChordCase) -> usize {
        self.needle_pairs.iter().filter(|p| p.case == case).count()
    }

    /// Needle pair with the smallest margin.
    pub fn binding(&self) -> Option<&NeedlePair> {
        self.needle_pairs
            .iter()
            .filter(|p| p.margin.is_some())
            .min_by(|x, y| x.margin.cmp(&y.margin))
    }

    /// No new meeting between tails of different needles.
    pub fn ok(&self) -> bool {
        self.count(PairCategory::CrossNeedle) == 0
    }

    /// No new meeting anywhere and no pair that one link could merge.
    pub fn clean(&self) -> bool {
        self.violations.is_empty() && self.mergeable.is_empty()
    }
}

impl fmt::Display for ConeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "delta={}", self.delta)?;
        writeln!(f, "segments={} pairs={}", self.segments, self.pairs_checked)?;
        for cat in [
            PairCategory::CrossNeedle,
            PairCategory::IntraNeedle,
            PairCategory::Leading,
        ] {
            writeln!(f, "violations {cat}={}", self.count(cat))?;
        }
        for case in [ChordCase::Crossing, ChordCase::Sequential, ChordCase::Nested] {
            writeln!(f, "case {case}={}", self.case_count(case))?;
        }
        match self.binding() {
            Some(p) => writeln!(
                f,
                "binding chords={},{} case={} margin={}",
                p.chords.0,
                p.chords.1,
                p.case,
                p.margin.as_ref().expect("filtered")
            )?,
            None => writeln!(f, "binding none")?,
        }
        writeln!(f, "mergeable={}", self.mergeable.len())?;
        for v in &self.violations {
            writeln!(f, "violation {} {}{} {}{}", v.category, v.i, v.end_i, v.j, v.end_j)?;
        }
        writeln!(f, "structure {}", if self.ok() { "preserved" } else { "changed" })
    }
}

fn needle_of(ci: &CoverInstance) -> Vec<Option<usize>> {
    let mut owner = vec![None; ci.m()];
    if let Some(r) = ci.reduction() {
        for n in &r.needles {
            owner[n.left] = Some(n.chord);
            owner[n.right] = Some(n.chord);
        }
    }
    owner
}

/// Enumerates every pair of segment tails at tolerance `δ` and reports
/// those that meet only because of the enlargement.
pub fn check_cone_structure(ci: &CoverInstance, delta: &Rational) -> Result<ConeReport> {
    if delta.signum() < 0 {
        return Err(Error::InvalidDelta(format!("{delta} is negative")));
    }
    let segs = ci.segments();
    let cones: Vec<Cone> = segs.par_iter().map(|s| Cone::new(s, delta)).collect();
    let owner = needle_of(ci);
    let pairs: Vec<(usize, usize)> = (0..segs.len())
        .flat_map(|i| (i + 1..segs.len()).map(move |j| (i, j)))
        .collect();
    let ends = [TailEnd::P, TailEnd::Q];
    let found: Vec<(Vec<PairFinding>, bool)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let category = match (owner[i], owner[j]) {
                (Some(x), Some(y)) if x == y => PairCategory::IntraNeedle,
                (Some(_), Some(_)) => PairCategory::CrossNeedle,
                _ => PairCategory::Leading,
            };
            let mut v = Vec::new();
            for ei in ends {
                for ej in ends {
                    if cones[i].tails_meet(ei, &cones[j], ej) && !zero_tails_meet(&segs[i], ei, &segs[j], ej) {
                        v.push(PairFinding {
                            i,
                            end_i: ei,
                            j,
                            end_j: ej,
                            category,
                        });
                    }
                }
            }
            (v, mergeable(&segs[i], &segs[j], delta))
        })
        .collect();
    let mut violations = Vec::new();
    let mut merge = Vec::new();
    for ((i, j), (v, m)) in pairs.iter().zip(found) {
        violations.extend(v);
        if m {
            merge.push((*i, *j));
        }
    }
    Ok(ConeReport {
        delta: delta.clone(),
        segments: segs.len(),
        pairs_checked: pairs.len(),
        violations,
        needle_pairs: needle_pairs(ci, delta),
        mergeable: merge,
    })
}

fn needle_pairs(ci: &CoverInstance, delta: &Rational) -> Vec<NeedlePair> {
    let Some(red) = ci.reduction() else {
        return Vec::new();
    };
    let spans: Vec<(usize, (u64, u64))> = ci
        .needles()
        .iter()
        .filter_map(|n| chord_span(&n.ray()).map(|s| (n.chord, s)))
        .collect();
    let four = Rational::from(4);
    let mut out = Vec::new();
    for x in 0..spans.len() {
        for y in x + 1..spans.len() {
            let (mut u, mut v) = (spans[x], spans[y]);
            if v.1 .0 < u.1 .0 {
                std::mem::swap(&mut u, &mut v);
            }
            let ((a, b), (c, d)) = (u.1, v.1);
            let case = classify(u.1, v.1);
            let margin = match case {
                ChordCase::Crossing => None,
                ChordCase::Sequential => {
                    let grow = &four * delta * (fact(c) - fact(a)) / (fact(a) - &red.y_l);
                    Some(dist_h_sequential(a, b, c) - grow)
                }
                ChordCase::Nested => Some(dist_h_nested(a, c, d) - &four * delta),
            };
            out.push(NeedlePair {
                chords: (u.0, v.0),
                first: u.1,
                second: v.1,
                case,
                margin,
            });
        }
    }
    out
}

/// Bend graph when every tail is enlarged to tolerance `δ`.
pub fn relaxed_transitions(ci: &CoverInstance, delta: &Rational) -> TransitionGraph {
    let cones: Vec<Cone> = ci.segments().par_iter().map(|s| Cone::new(s, delta)).collect();
    TransitionGraph::from_fn(ci.m(), |a, b| {
        cones[a / 2].tails_meet(TailEnd::far(a % 2), &cones[b / 2], TailEnd::near(b % 2))
    })
}

fn within(s: &Segment, w: &ExactPoint, d2: &Rational) -> bool {
    let t = s.param_of_projection(w).max(Rational::zero()).min(Rational::one());
    s.point_at(&t).dist2(w) <= *d2
}

/// The link `from → to` passes within `δ` of both ends of `seg`, hence of
/// all of it.
fn link_covers(seg: &Segment, from: &ExactPoint, to: &ExactPoint, d2: &Rational) -> bool {
    match Segment::new(from.clone(), to.clone()) {
        Ok(l) => within(&l, seg.p(), d2) && within(&l, seg.q(), d2),
        Err(_) => false,
    }
}

/// Upper limit on the relaxed orders tried by [`realize_relaxed_cover`].
pub const REALIZE_ORDER_LIMIT: usize = 20_000;

/// All node orders of `g` covering every segment once with at most
/// `budget` breaks, up to `cap` of them.
fn relaxed_orders(g: &TransitionGraph, budget: usize, cap: usize) -> Vec<Vec<usize>> {
    fn go(g: &TransitionGraph, budget: usize, cap: usize, cur: &mut Vec<usize>, mask: u64, out: &mut Vec<Vec<usize>>) {
        if out.len() >= cap {
            return;
        }
        if cur.len() == g.m() {
            out.push(cur.clone());
            return;
        }
        for w in 0..2 * g.m() {
            if mask >> (w / 2) & 1 == 1 {
                continue;
            }
            let cost = cur.last().map_or(0, |&v| !g.allows(v, w) as usize);
            if cost > budget {
                continue;
            }
            cur.push(w);
            go(g, budget - cost, cap, cur, mask | 1 << (w / 2), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(g, budget, cap, &mut Vec::new(), 0, &mut out);
    out
}

/// Tries to turn cover orders of the relaxed bend graph into an actual
/// polyline with `H(P, P') ≤ δ`. Bend candidates are the exact line
/// intersection, the vertices of the meeting tails and their pairwise
/// midpoints; a backtracking search keeps each link within `δ` of both
/// ends of its segment.
pub fn realize_relaxed_cover(ci: &CoverInstance, delta: &Rational) -> Option<Polyline> {
    let g = relaxed_transitions(ci, delta);
    let segs = ci.segments();
    let cones: Vec<Cone> = segs.iter().map(|s| Cone::new(s, delta)).collect();
    let d2 = delta.square();
    let half = Rational::frac(1, 2);
    let end_pt = |node: usize, e: TailEnd| match e {
        TailEnd::P => segs[node / 2].p().clone(),
        TailEnd::Q => segs[node / 2].q().clone(),
    };
    let bend_candidates = |a: usize, b: usize| -> Vec<ExactPoint> {
        let cs = cones[a / 2].joint(TailEnd::far(a % 2), &cones[b / 2], TailEnd::near(b % 2));
        let verts = feasible_vertices(&cs);
        let mut cand = Vec::new();
        if let Some(w) = line_point(&segs[a / 2].supporting_ray(), &segs[b / 2].supporting_ray()) {
            if cs.iter().all(|h| h.contains(&w)) {
                cand.push(w);
            }
        }
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let m = ExactPoint::new((&verts[i].x + &verts[j].x) * &half, (&verts[i].y + &verts[j].y) * &half);
                cand.push(m);
            }
        }
        cand.extend(verts);
        cand
    };
    for order in relaxed_orders(&g, ci.k().saturating_sub(ci.m()), REALIZE_ORDER_LIMIT) {
        // Each gap is a bend (one chosen point) or a break (far end, near end).
        let slots: Vec<Vec<Vec<ExactPoint>>> = order
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                if g.allows(a, b) {
                    bend_candidates(a, b).into_iter().map(|p| vec![p]).collect()
                } else {
                    vec![vec![end_pt(a, TailEnd::far(a % 2)), end_pt(b, TailEnd::near(b % 2))]]
                }
            })
            .collect();
        let first = order[0];
        let last = *order.last().expect("non-empty order");
        let start = end_pt(first, TailEnd::near(first % 2));
        let finish = end_pt(last, TailEnd::far(last % 2));
        let mut picked = Vec::new();
        if pick_bends(0, &start, &order, &slots, segs, &finish, &d2, &mut picked) {
            let mut verts = vec![start];
            for (slot, &c) in slots.iter().zip(&picked) {
                verts.extend(slot[c].iter().cloned());
            }
            verts.push(finish);
            verts.dedup();
            if let Ok(p) = Polyline::new(verts) {
                return Some(p);
            }
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn pick_bends(
    i: usize,
    entry: &ExactPoint,
    order: &[usize],
    slots: &[Vec<Vec<ExactPoint>>],
    segs: &[Segment],
    finish: &ExactPoint,
    d2: &Rational,
    picked: &mut Vec<usize>,
) -> bool {
    let seg = &segs[order[i] / 2];
    if i == slots.len() {
        return link_covers(seg, entry, finish, d2);
    }
    for (c, pts) in slots[i].iter().enumerate() {
        if !link_covers(seg, entry, &pts[0], d2) {
            continue;
        }
        picked.push(c);
        if pick_bends(
            i + 1,
            pts.last().expect("non-empty"),
            order,
            slots,
            segs,
            finish,
            d2,
            picked,
        ) {
            return true;
        }
        picked.pop();
    }
    false
}

/// Evidence that the answer at `δ = 3/(8·n!)` matches the answer at 0.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub n: usize,
    pub delta: Rational,
    pub cones: ConeReport,
    pub exact_bends: usize,
    pub relaxed_bends: usize,
    /// Same bend graph at both tolerances.
    pub graphs_equal: bool,
    /// Bend graph unchanged and no pair mergeable into one link.
    pub structure_preserved: bool,
    /// A cover exists at `δ = 0`.
    pub verdict_zero: bool,
    /// A cover exists in the relaxed bend graph.
    pub verdict_relaxed: bool,
    /// Concrete polyline with at most `k` links and `H(P, P') ≤ δ`, built
    /// from a relaxed order and confirmed by the exact Hausdorff test.
    pub witness_at_delta: Option<Polyline>,
}

impl EquivalenceReport {
    /// Preserved structure implies equal verdicts.
    pub fn consistent(&self) -> bool {
        !self.structure_preserved || self.verdict_zero == self.verdict_relaxed
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |b: bool| if b { "cover exists" } else { "none" };
        writeln!(f, "n={} delta={}", self.n, self.delta)?;
        writeln!(f, "bends exact={} relaxed={}", self.exact_bends, self.relaxed_bends)?;
        writeln!(
            f,
            "cross-needle violations={}",
            self.cones.count(PairCategory::CrossNeedle)
        )?;
        writeln!(
            f,
            "structure {}",
            if self.structure_preserved {
                "preserved"
            } else {
                "changed"
            }
        )?;
        writeln!(f, "verdict delta=0: {}", word(self.verdict_zero))?;
        writeln!(f, "verdict delta={}: {}", self.delta, word(self.verdict_relaxed))?;
        match &self.witness_at_delta {
            Some(p) => writeln!(f, "witness at delta: {} links, verified", p.link_count())?,
            None => writeln!(f, "witness at delta: none found")?,
        }
        writeln!(f, "consistent={}", self.consistent())
    }
}

/// Largest needle count accepted by [`equivalence_nonzero_delta`].
pub const EQUIVALENCE_LIMIT: usize = 4;

pub fn equivalence_nonzero_delta(ci: &CoverInstance) -> Result<EquivalenceReport> {
    let red = ci
        .reduction()
        .ok_or_else(|| Error::InvalidParameter("instance was not produced by the needle reduction".into()))?;
    let n = red.needles.len();
    if n > EQUIVALENCE_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: EQUIVALENCE_LIMIT,
        });
    }
    let delta = half_safe_delta_for(n);
    let cones = check_cone_structure(ci, &delta)?;
    let exact = TransitionGraph::of_instance(ci);
    let relaxed = relaxed_transitions(ci, &delta);
    let si = build_dcs_instance(ci, &Rational::zero())?;
    let verdict_zero = solve_dcs_zero(&si, ci)?.is_some();
    let verdict_relaxed = best_order(&relaxed, ci.k().saturating_sub(ci.m())).is_some();
    let graphs_equal = exact == relaxed;
    let si = build_dcs_instance(ci, &delta)?;
    let witness_at_delta = realize_relaxed_cover(ci, &delta).filter(|p| si.accepts(p));
    Ok(EquivalenceReport {
        witness_at_delta,
        n,
        structure_preserved: graphs_equal && cones.mergeable.is_empty(),
        graphs_equal,
        exact_bends: exact.edge_count(),
        relaxed_bends: relaxed.edge_count(),
        delta,
        cones,
        verdict_zero,
        verdict_relaxed,
    })
}
