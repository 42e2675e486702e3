//! Rays grounded on the factorial curve `y = x!`.
//!
//! Reading a chord diagram clockwise from a start position assigns the k-th
//! endpoint to the curve point `(k, k!)`. Each chord becomes the ray from its
//! left point through its right point. The curve grows fast enough that two
//! rays meet exactly when their chords interleave.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::chord_graph::{ChordDiagram, Graph};
use crate::error::{Error, Result};
use crate::exact_geom::{
    bit_length, ray_intersect, segment_intersect, ExactPoint, Intersection, Rational, Ray, Segment,
};

pub fn factorial(k: u64) -> BigInt {
    (2..=k).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn curve_point(k: u64) -> ExactPoint {
    ExactPoint::new(Rational::from(k as i64), Rational::from(factorial(k)))
}

#[derive(Clone, PartialEq, Eq)]
pub struct RayEmbedding {
    rays: Vec<Ray>,
    positions: Vec<(u64, u64)>,
}

impl RayEmbedding {
    fn from_positions(positions: Vec<(u64, u64)>) -> Self {
        let rays = positions
            .iter()
            .map(|&(a, b)| Ray::through(curve_point(a), &curve_point(b)).expect("distinct curve points"))
            .collect();
        RayEmbedding { rays, positions }
    }

    pub fn n(&self) -> usize {
        self.rays.len()
    }

    /// Ray of chord `label` (1-based).
    pub fn ray(&self, label: usize) -> &Ray {
        &self.rays[label - 1]
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    /// Curve indices `(a, b)`, `a < b`, of chord `label`.
    pub fn position(&self, label: usize) -> (u64, u64) {
        self.positions[label - 1]
    }

    pub fn positions(&self) -> &[(u64, u64)] {
        &self.positions
    }
}

/// Unrolls `d` clockwise from the 1-based endpoint position `start`.
pub fn embed(d: &ChordDiagram, start: usize) -> Result<RayEmbedding> {
    let len = d.endpoint_order().len();
    if len > 0 && (start == 0 || start > len) {
        return Err(Error::StartOutOfRange { start, max: len });
    }
    let mut positions = vec![(0u64, 0u64); d.n()];
    for k in 0..len {
        let label = d.endpoint_order()[(start - 1 + k) % len];
        let slot = &mut positions[label - 1];
        if slot.0 == 0 {
            slot.0 = k as u64 + 1;
        } else {
            slot.1 = k as u64 + 1;
        }
    }
    Ok(RayEmbedding::from_positions(positions))
}

/// Intersection graph of the rays, by exact predicates.
pub fn ray_graph(e: &RayEmbedding) -> Graph {
    let n = e.n();
    let mut g = Graph::empty(n).expect("embedding size within graph limit");
    for u in 1..=n {
        for v in u + 1..=n {
            if !ray_intersect(e.ray(u), e.ray(v)).is_empty() {
                g.add_edge(u, v).expect("valid labels");
            }
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma1Report {
    pub n: u64,
    /// Ordered quadruples `(a, b, c, d)` examined.
    pub checked: u64,
    /// Pairs sharing a far endpoint or chaining (`b = d`, `b = c`, `a = d`),
    /// which never arise from a chord diagram and are not examined.
    pub excluded: u64,
    pub counterexample: Option<String>,
}

impl Lemma1Report {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn lemma1_pair(a: u64, b: u64, c: u64, d: u64) -> Option<String> {
    let (pa, pb, pc, pd) = (curve_point(a), curve_point(b), curve_point(c), curve_point(d));
    let ray_a = Ray::through(pa.clone(), &pb).expect("distinct");
    let ray_c = Ray::through(pc.clone(), &pd).expect("distinct");
    let ray_b = Ray::new(pb.clone(), ray_a.dx().clone(), ray_a.dy().clone()).expect("non-zero");
    let ray_d = Ray::new(pd.clone(), ray_c.dx().clone(), ray_c.dy().clone()).expect("non-zero");
    if !ray_intersect(&ray_b, &ray_d).is_empty() {
        return Some(format!("sub-rays meet for (a,b,c,d)=({a},{b},{c},{d})"));
    }
    let full = !ray_intersect(&ray_a, &ray_c).is_empty();
    // A∖B is the segment [pa, pb) and C∖D is [pc, pd).
    let seg_a = Segment::new(pa, pb.clone()).expect("distinct");
    let seg_c = Segment::new(pc, pd.clone()).expect("distinct");
    let head = match segment_intersect(&seg_a, &seg_c) {
        Intersection::Empty => false,
        Intersection::Point(p) => p != pb && p != pd,
        _ => true,
    };
    (full != head).then(|| format!("A∩C={full} but (A∖B)∩(C∖D)={head} for (a,b,c,d)=({a},{b},{c},{d})"))
}

/// Exhaustive exact check of the sub-ray lemma on curve indices `1..=n`.
///
/// Covers every `a < b`, `c < d` with `{a, b} ≠ {c, d}` whose four indices
/// are distinct or which share only the origin (`a = c`).
pub fn check_lemma1(n: u64) -> Lemma1Report {
    let pairs: Vec<(u64, u64)> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
    let results: Vec<(u64, u64, Option<String>)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let (mut checked, mut excluded, mut bad) = (0, 0, None);
            for &(c, d) in &pairs {
                if (a, b) == (c, d) {
                    continue;
                }
                if b == d || b == c || a == d {
                    excluded += 1;
                    continue;
                }
                checked += 1;
                if bad.is_none() {
                    bad = lemma1_pair(a, b, c, d);
                }
            }
            (checked, excluded, bad)
        })
        .collect();
    let mut report = Lemma1Report {
        n,
        checked: 0,
        excluded: 0,
        counterexample: None,
    };
    for (c, x, bad) in results {
        report.checked += c;
        report.excluded += x;
        if report.counterexample.is_none() {
            report.counterexample = bad;
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem1Report {
    pub grounded: bool,
    pub upper_right: bool,
    pub max_bit_length: u64,
    /// Number of curve points, `2n`.
    pub points: u64,
    /// `max_bit_length ≤ 4·N·log2(N + 1)` for `N = points`, decided exactly.
    pub within_bound: bool,
}

impl Theorem1Report {
    pub fn ok(&self) -> bool {
        self.grounded && self.upper_right && self.within_bound
    }

    pub fn bound(&self) -> f64 {
        let n = self.points as f64;
        4.0 * n * (n + 1.0).log2()
    }
}

pub fn check_theorem1_properties(e: &RayEmbedding) -> Theorem1Report {
    let grounded = e.rays().iter().all(|r| {
        let o = r.origin();
        o.x.is_integer() && o.x > 0 && {
            let k: u64 = o.x.numer().try_into().unwrap_or(u64::MAX);
            k != u64::MAX && o.y == Rational::from(factorial(k))
        }
    });
    let upper_right = e.rays().iter().all(|r| r.dx().signum() > 0 && r.dy().signum() > 0);
    let max_bit_length = e
        .rays()
        .iter()
        .map(|r| {
            let dir = ExactPoint::new(r.dx().clone(), r.dy().clone());
            bit_length(r.origin()).max(bit_length(&dir))
        })
        .max()
        .unwrap_or(0);
    let points = 2 * e.n() as u64;
    // bits ≤ 4N·log2(N+1)  ⟺  2^bits ≤ (N+1)^(4N)
    let lhs = BigInt::one() << max_bit_length as usize;
    let rhs = num_traits::pow(BigInt::from(points + 1), 4 * points as usize);
    Theorem1Report {
        grounded,
        upper_right,
        max_bit_length,
        points,
        within_bound: lhs <= rhs,
    }
}

impl fmt::Display for RayEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rays.iter().enumerate() {
            writeln!(f, "{}: origin={} dir=({}, {})", i + 1, r.origin(), r.dx(), r.dy())?;
        }
        Ok(())
    }
}

impl fmt::Debug for RayEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RayEmbedding{:?}", self.positions)
    }
}

impl FromStr for RayEmbedding {
    type Err = Error;

    /// Parses the line format and checks that it describes a factorial-curve
    /// embedding of a chord diagram.
    fn from_str(s: &str) -> Result<Self> {
        let mut positions = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let ln = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: &str| Error::parse(ln, m.to_string());
            let (label, rest) = line.split_once(':').ok_or_else(|| bad("expected \"label: ...\""))?;
            let label: usize = label.trim().parse().map_err(|_| bad("bad label"))?;
            if label != positions.len() + 1 {
                return Err(bad("labels must be consecutive from 1"));
            }
            let rest = rest.trim();
            let (o, d) = rest
                .strip_prefix("origin=")
                .and_then(|r| r.split_once(" dir="))
                .ok_or_else(|| bad("expected \"origin=(x, y) dir=(dx, dy)\""))?;
            let origin: ExactPoint = o.parse().map_err(|_| bad("bad origin"))?;
            let dir: ExactPoint = d.parse().map_err(|_| bad("bad direction"))?;
            let a: Option<u64> = origin.x.numer().try_into().ok().filter(|_| origin.x.is_integer());
            let span: Option<u64> = dir.x.numer().try_into().ok().filter(|_| dir.x.is_integer());
            let (Some(a), Some(span)) = (a, span) else {
                return Err(bad("origin and direction x must be positive integers"));
            };
            if a == 0 || span == 0 {
                return Err(bad("origin and direction x must be positive integers"));
            }
            let b = a + span;
            let expected = Ray::through(curve_point(a), &curve_point(b)).expect("distinct");
            if origin != *expected.origin() || dir.y != *expected.dy() {
                return Err(bad("ray is not a factorial-curve chord"));
            }
            positions.push((a, b));
        }
        let mut seen = vec![false; 2 * positions.len()];
        for &(a, b) in &positions {
            for k in [a, b] {
                let slot = seen
                    .get_mut(k as usize - 1)
                    .ok_or_else(|| Error::parse(0, "curve index out of range"))?;
                if std::mem::replace(slot, true) {
                    return Err(Error::parse(0, format!("curve index {k} used twice")));
                }
            }
        }
        Ok(RayEmbedding::from_positions(positions))
    }
}
