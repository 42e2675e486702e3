//! Directed curve simplification: the exact Hausdorff predicate, the
//! reduction from segment polyline cover at `δ = 0`, and the cone analysis
//! that bounds how far `δ` may grow before the transition structure changes.

mod cones;
mod hausdorff;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

pub use cones::{
    check_cone_structure, dist_h_nested, dist_h_sequential, equivalence_nonzero_delta, nested_closed_form,
    realize_relaxed_cover, relaxed_transitions, sequential_closed_form, ChordCase, Cone, ConeReport, EquivalenceReport,
    HalfPlane, NeedlePair, PairCategory, PairFinding, Tail, TailEnd, EQUIVALENCE_LIMIT,
};
pub use hausdorff::{cmp_surd, directed_hausdorff_leq, segments_within, Surd};

use crate::cover_solver::{solve_cover, Polyline};
use crate::error::{Error, Result};
use crate::exact_geom::{segment_intersect, ExactPoint, Intersection, Rational, Segment};
use crate::needle_reduce::CoverInstance;
use crate::ray_embed::factorial;

/// Input polyline `P`, link budget `k` and tolerance `δ`.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplificationInstance {
    pub input: Polyline,
    pub k: usize,
    pub delta: Rational,
}

impl SimplificationInstance {
    pub fn new(input: Polyline, k: usize, delta: Rational) -> Result<Self> {
        if delta.signum() < 0 {
            return Err(Error::InvalidDelta(format!("{delta} is negative")));
        }
        Ok(SimplificationInstance { input, k, delta })
    }

    /// `P'` is a valid answer: at most `k` links and `H(P, P') ≤ δ`.
    pub fn accepts(&self, candidate: &Polyline) -> bool {
        candidate.link_count() <= self.k && directed_hausdorff_leq(&self.input, candidate, &self.delta)
    }
}

impl fmt::Display for SimplificationInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k={} delta={}", self.k, self.delta)?;
        write!(f, "{}", self.input)
    }
}

impl fmt::Debug for SimplificationInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for SimplificationInstance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate().skip_while(|(_, l)| l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let mut k = None;
        let mut delta = None;
        for tok in header.split_whitespace() {
            match tok.split_once('=') {
                Some(("k", v)) => k = Some(v.parse::<usize>().map_err(|e| Error::parse(1, e.to_string()))?),
                Some(("delta", v)) => delta = Some(v.parse::<Rational>().map_err(|e| Error::parse(1, e.to_string()))?),
                _ => return Err(Error::parse(1, format!("unexpected header token {tok:?}"))),
            }
        }
        let (k, delta) = match (k, delta) {
            (Some(k), Some(d)) => (k, d),
            _ => return Err(Error::parse(1, "header must be \"k=<int> delta=<num/den>\"")),
        };
        let body: String = lines.map(|(_, l)| format!("{l}\n")).collect();
        SimplificationInstance::new(body.parse()?, k, delta)
    }
}

/// Planar arrangement of a segment set: endpoints and crossings as
/// vertices, maximal uncut pieces as edges.
#[derive(Clone, Debug)]
pub struct Arrangement {
    pub vertices: Vec<ExactPoint>,
    pub edges: Vec<(usize, usize)>,
}

impl Arrangement {
    pub fn new(segments: &[Segment]) -> Self {
        let mut cuts: Vec<Vec<ExactPoint>> = segments.iter().map(|s| vec![s.p().clone(), s.q().clone()]).collect();
        for i in 0..segments.len() {
            for j in i + 1..segments.len() {
                let hits = match segment_intersect(&segments[i], &segments[j]) {
                    Intersection::Point(p) => vec![p],
                    Intersection::Overlap(o) => vec![o.p().clone(), o.q().clone()],
                    _ => Vec::new(),
                };
                for p in hits {
                    cuts[i].push(p.clone());
                    cuts[j].push(p);
                }
            }
        }
        let mut index: BTreeMap<ExactPoint, usize> = BTreeMap::new();
        for p in cuts.iter().flatten() {
            let next = index.len();
            index.entry(p.clone()).or_insert(next);
        }
        // Renumber in point order so that vertex 0 is the smallest point.
        let vertices: Vec<ExactPoint> = index.keys().cloned().collect();
        for (i, v) in index.values_mut().enumerate() {
            *v = i;
        }
        let mut edges = BTreeSet::new();
        for (s, pts) in segments.iter().zip(&cuts) {
            let mut keyed: Vec<(Rational, usize)> = pts.iter().map(|p| (s.param_of(p), index[p])).collect();
            keyed.sort();
            keyed.dedup();
            for w in keyed.windows(2) {
                let (a, b) = (w[0].1, w[1].1);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        Arrangement {
            vertices,
            edges: edges.into_iter().collect(),
        }
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    /// Closed walk from vertex 0 that runs along every edge exactly twice,
    /// with the final run of already-covered returns dropped.
    pub fn covering_walk(&self) -> Result<Vec<usize>> {
        if self.vertices.is_empty() {
            return Err(Error::Disconnected);
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut used = BTreeSet::new();
        let mut walk = vec![0];
        let mut last_new = 0;
        seen[0] = true;
        // Iterative DFS; each frame is (vertex, next neighbour slot).
        let mut stack = vec![(0usize, 0usize)];
        while let Some(&mut (u, ref mut slot)) = stack.last_mut() {
            if *slot == adj[u].len() {
                stack.pop();
                if let Some(&(parent, _)) = stack.last() {
                    walk.push(parent);
                }
                continue;
            }
            let w = adj[u][*slot];
            *slot += 1;
            if !used.insert((u.min(w), u.max(w))) {
                continue;
            }
            walk.push(w);
            last_new = walk.len();
            if seen[w] {
                walk.push(u);
            } else {
                seen[w] = true;
                stack.push((w, 0));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Disconnected);
        }
        walk.truncate(last_new.max(1));
        Ok(walk)
    }
}

/// `3 / (4·n!)` for `n` needles.
pub fn safe_delta_for(n: usize) -> Rational {
    Rational::from(3) / Rational::from(factorial(n as u64) * BigInt::from(4))
}

/// `3 / (8·n!)`, half the bound and itself a valid tolerance.
pub fn half_safe_delta_for(n: usize) -> Rational {
    safe_delta_for(n) / Rational::from(2)
}

fn needle_count(ci: &CoverInstance) -> Result<usize> {
    ci.reduction()
        .map(|r| r.needles.len())
        .ok_or_else(|| Error::InvalidParameter("instance was not produced by the needle reduction".into()))
}

/// Exclusive upper bound on `δ` for a reduced instance.
pub fn safe_delta(ci: &CoverInstance) -> Result<Rational> {
    needle_count(ci).map(safe_delta_for)
}

pub fn half_safe_delta(ci: &CoverInstance) -> Result<Rational> {
    needle_count(ci).map(half_safe_delta_for)
}

/// Polyline whose image is exactly the union of the instance's segments.
pub fn covering_polyline(ci: &CoverInstance) -> Result<Polyline> {
    let arr = Arrangement::new(ci.segments());
    let walk = arr.covering_walk()?;
    Polyline::new(walk.into_iter().map(|i| arr.vertices[i].clone()).collect())
}

/// Curve simplification instance with the same answer as `ci`.
pub fn build_dcs_instance(ci: &CoverInstance, delta: &Rational) -> Result<SimplificationInstance> {
    match delta.signum() {
        s if s < 0 => return Err(Error::InvalidDelta(format!("{delta} is negative"))),
        0 => {}
        _ => {
            let bound = safe_delta(ci).map_err(|_| {
                Error::InvalidDelta("a positive tolerance needs an instance from the needle reduction".into())
            })?;
            if *delta >= bound {
                return Err(Error::InvalidDelta(format!("{delta} is not below {bound}")));
            }
        }
    }
    SimplificationInstance::new(covering_polyline(ci)?, ci.k(), delta.clone())
}

/// Answers a `δ = 0` instance through the cover solver.
pub fn solve_dcs_zero(si: &SimplificationInstance, ci: &CoverInstance) -> Result<Option<Polyline>> {
    if !si.delta.is_zero() {
        return Err(Error::InvalidDelta(format!("expected 0, got {}", si.delta)));
    }
    if si.k != ci.k() {
        return Err(Error::Mismatch(format!("budget {} against {}", si.k, ci.k())));
    }
    let links = si.input.links();
    let zero = Rational::zero();
    if !segments_within(&links, ci.segments(), &zero) || !segments_within(ci.segments(), &links, &zero) {
        return Err(Error::Mismatch(
            "input polyline does not trace the segment union".into(),
        ));
    }
    Ok(solve_cover(ci)?.map(|w| w.polyline))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chord_graph::ChordDiagram;
    use crate::needle_reduce::build_cover_instance;
    use crate::ray_embed::embed;

    fn seg(a: (i64, i64), b: (i64, i64)) -> Segment {
        Segment::new(ExactPoint::from_ints(a.0, a.1), ExactPoint::from_ints(b.0, b.1)).unwrap()
    }

    fn reduced(order: &str) -> CoverInstance {
        let d: ChordDiagram = order.parse().unwrap();
        build_cover_instance(&embed(&d, 1).unwrap()).unwrap()
    }

    #[test]
    fn single_segment_walk() {
        let ci = CoverInstance::new(vec![seg((0, 0), (3, 1))], 1);
        let si = build_dcs_instance(&ci, &Rational::zero()).unwrap();
        assert_eq!(si.input.vertices().len(), 2);
    }

    #[test]
    fn plus_sign_walk() {
        let ci = CoverInstance::new(vec![seg((-1, 0), (1, 0)), seg((0, -1), (0, 1))], 2);
        let arr = Arrangement::new(ci.segments());
        assert_eq!(arr.vertices.len(), 5);
        assert_eq!(arr.edges.len(), 4);
        let si = build_dcs_instance(&ci, &Rational::zero()).unwrap();
        assert!(si.input.link_count() <= 8);
        let zero = Rational::zero();
        assert!(segments_within(&si.input.links(), ci.segments(), &zero));
        assert!(segments_within(ci.segments(), &si.input.links(), &zero));
    }

    #[test]
    fn disconnected_is_rejected() {
        let ci = CoverInstance::new(vec![seg((0, 0), (1, 0)), seg((0, 2), (1, 2))], 2);
        assert_eq!(
            build_dcs_instance(&ci, &Rational::zero()).unwrap_err(),
            Error::Disconnected
        );
    }

    #[test]
    fn reduced_instances_are_traced_exactly() {
        for order in ["1 1", "1 2 1 2", "1 1 2 2", "1 2 3 1 2 3", "1 2 1 3 2 3"] {
            let ci = reduced(order);
            let si = build_dcs_instance(&ci, &Rational::zero()).unwrap();
            let arr = Arrangement::new(ci.segments());
            assert!(si.input.vertices().len() <= 2 * arr.edges.len());
            let m = ci.m();
            assert!(arr.edges.len() <= m * (m + 1));
            let zero = Rational::zero();
            assert!(segments_within(&si.input.links(), ci.segments(), &zero), "{order}");
            assert!(segments_within(ci.segments(), &si.input.links(), &zero), "{order}");
        }
    }

    #[test]
    fn safe_delta_values() {
        assert_eq!(safe_delta_for(1), Rational::frac(3, 4));
        assert_eq!(safe_delta_for(2), Rational::frac(3, 8));
        assert_eq!(safe_delta_for(3), Rational::frac(3, 24));
        assert_eq!(half_safe_delta_for(2), Rational::frac(3, 16));
        assert_eq!(safe_delta(&reduced("1 2 1 2")).unwrap(), Rational::frac(3, 8));
    }

    #[test]
    fn positive_delta_precondition() {
        let ci = reduced("1 2 1 2");
        assert!(build_dcs_instance(&ci, &Rational::frac(3, 16)).is_ok());
        assert!(build_dcs_instance(&ci, &Rational::frac(3, 8)).is_err());
        assert!(build_dcs_instance(&ci, &Rational::frac(-1, 8)).is_err());
        let plain = CoverInstance::new(vec![seg((0, 0), (1, 0))], 1);
        assert!(build_dcs_instance(&plain, &Rational::frac(1, 8)).is_err());
    }

    #[test]
    fn zero_delta_verdicts() {
        let k3 = reduced("1 2 3 1 2 3");
        let si = build_dcs_instance(&k3, &Rational::zero()).unwrap();
        let out = solve_dcs_zero(&si, &k3).unwrap().expect("K3 has a Hamiltonian path");
        assert_eq!(out.link_count(), 9);
        assert!(si.accepts(&out));

        let edgeless = reduced("1 1 2 2");
        let si = build_dcs_instance(&edgeless, &Rational::zero()).unwrap();
        assert_eq!(si.k, 7);
        assert!(solve_dcs_zero(&si, &edgeless).unwrap().is_none());
    }

    #[test]
    fn mismatched_pair_is_an_error() {
        let a = reduced("1 2 1 2");
        let b = reduced("1 1 2 2");
        let si = build_dcs_instance(&a, &Rational::zero()).unwrap();
        assert!(matches!(solve_dcs_zero(&si, &b), Err(Error::Mismatch(_))));
        let shifted = SimplificationInstance::new(si.input.clone(), si.k, Rational::frac(1, 8)).unwrap();
        assert!(matches!(solve_dcs_zero(&shifted, &a), Err(Error::InvalidDelta(_))));
    }

    #[test]
    fn text_round_trip() {
        let si = build_dcs_instance(&reduced("1 2 1 2"), &Rational::frac(3, 16)).unwrap();
        let text = si.to_string();
        assert!(text.starts_with("k=7 delta=3/16\n"));
        assert_eq!(text.parse::<SimplificationInstance>().unwrap(), si);
    }
}
