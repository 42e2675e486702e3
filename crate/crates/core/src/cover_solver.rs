//! Exact solver and verifier for connected segment polyline cover.
//!
//! In general position every link of a cover contains at most one segment,
//! so a cover with `m + b` links is an ordering of the segments, each with a
//! traversal direction, where consecutive segments either bend at the
//! intersection of their supporting lines or pay one free link (a break).
//! A bend from `σ` to `τ` is possible when that intersection lies at or
//! beyond the far end of `σ` and at or before the near end of `τ`.
//!
//! Nodes are `segment · 2 + orientation`, orientation 0 traversing `p → q`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact_geom::{line_point, parse_points, segment_contains, ExactPoint, Segment};
use crate::needle_reduce::{check_general_position, CoverInstance, LEAD_H, LEAD_T, LEAD_V};

/// Segment limit of the exhaustive search.
pub const SOLVER_LIMIT: usize = 16;
/// Needle limit of the structured search.
pub const NEEDLE_LIMIT: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polyline {
    vertices: Vec<ExactPoint>,
}

impl Polyline {
    pub fn new(vertices: Vec<ExactPoint>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::MalformedWitness("a polyline needs at least two vertices".into()));
        }
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedWitness(format!("repeated consecutive vertex {}", w[0])));
        }
        Ok(Polyline { vertices })
    }

    pub fn vertices(&self) -> &[ExactPoint] {
        &self.vertices
    }

    pub fn link_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn links(&self) -> Vec<Segment> {
        self.vertices
            .windows(2)
            .map(|w| Segment::new(w[0].clone(), w[1].clone()).expect("consecutive vertices differ"))
            .collect()
    }

    pub fn reversed(&self) -> Polyline {
        let mut v = self.vertices.clone();
        v.reverse();
        Polyline { vertices: v }
    }
}

impl fmt::Display for Polyline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polyline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.vertices).finish()
    }
}

impl FromStr for Polyline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                vertices.extend(parse_points(line).map_err(|e| Error::parse(i + 1, e.to_string()))?);
            }
        }
        Polyline::new(vertices)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CoverWitness {
    pub polyline: Polyline,
    /// Segment label and the 1-based index of the link covering it.
    pub assignment: Vec<(String, usize)>,
}

impl CoverWitness {
    pub fn link_count(&self) -> usize {
        self.polyline.link_count()
    }

    pub fn link_of(&self, label: &str) -> Option<usize> {
        self.assignment.iter().find(|(l, _)| l == label).map(|&(_, k)| k)
    }
}

impl fmt::Display for CoverWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.polyline)?;
        for (l, k) in &self.assignment {
            writeln!(f, "assign {l} {k}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CoverWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoverWitness({:?}, {:?})", self.polyline, self.assignment)
    }
}

impl FromStr for CoverWitness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut assignment = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let ln = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("assign ") {
                let mut it = rest.split_whitespace();
                match (it.next(), it.next().map(str::parse::<usize>), it.next()) {
                    (Some(l), Some(Ok(k)), None) => assignment.push((l.to_string(), k)),
                    _ => return Err(Error::parse(ln, "expected \"assign <label> <link>\"")),
                }
            } else {
                vertices.extend(parse_points(line).map_err(|e| Error::parse(ln, e.to_string()))?);
            }
        }
        let polyline = Polyline::new(vertices)?;
        if let Some((l, k)) = assignment.iter().find(|(_, k)| *k == 0 || *k > polyline.link_count()) {
            return Err(Error::MalformedWitness(format!(
                "segment {l} assigned to missing link {k}"
            )));
        }
        Ok(CoverWitness { polyline, assignment })
    }
}

fn near(s: &Segment, orient: usize) -> &ExactPoint {
    if orient == 0 {
        s.p()
    } else {
        s.q()
    }
}

fn far(s: &Segment, orient: usize) -> &ExactPoint {
    near(s, 1 - orient)
}

/// Directed bend graph on the `2m` segment-orientation nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionGraph {
    m: usize,
    adj: Vec<u64>,
}

impl TransitionGraph {
    pub fn from_fn(m: usize, mut allowed: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(2 * m <= 64, "at most 32 segments");
        let mut adj = vec![0u64; 2 * m];
        for a in 0..2 * m {
            for b in 0..2 * m {
                if a / 2 != b / 2 && allowed(a, b) {
                    adj[a] |= 1 << b;
                }
            }
        }
        TransitionGraph { m, adj }
    }

    /// Exact bends of the instance's segments.
    pub fn of_instance(ci: &CoverInstance) -> Self {
        let segs = ci.segments();
        let m = segs.len();
        let mut adj = vec![0u64; 2 * m];
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                if let Some(w) = line_point(&segs[i].supporting_ray(), &segs[j].supporting_ray()) {
                    let ti = segs[i].param_of(&w);
                    let tj = segs[j].param_of(&w);
                    for oi in 0..2 {
                        let leaves = if oi == 0 { ti >= 1 } else { ti <= 0 };
                        if !leaves {
                            continue;
                        }
                        for oj in 0..2 {
                            let enters = if oj == 0 { tj <= 0 } else { tj >= 1 };
                            if enters {
                                adj[2 * i + oi] |= 1 << (2 * j + oj);
                            }
                        }
                    }
                }
            }
        }
        TransitionGraph { m, adj }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn allows(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum()
    }
}

/// Lexicographically smallest node sequence covering every segment once
/// with at most `budget` breaks.
pub fn best_order(g: &TransitionGraph, budget: usize) -> Option<Vec<usize>> {
    let m = g.m;
    if m == 0 {
        return None;
    }
    let nodes = 2 * m;
    let full = (1usize << m) - 1;
    const INF: u8 = u8::MAX;
    // rest[mask·nodes + v]: fewest breaks to cover the segments outside
    // `mask` after ending at `v`.
    let mut rest = vec![INF; (full + 1) * nodes];
    for v in 0..nodes {
        rest[full * nodes + v] = 0;
    }
    for mask in (1..full).rev() {
        for v in 0..nodes {
            if mask >> (v / 2) & 1 == 0 {
                continue;
            }
            let mut best = INF;
            for w in 0..nodes {
                let seg = w / 2;
                if mask >> seg & 1 == 1 {
                    continue;
                }
                let r = rest[(mask | 1 << seg) * nodes + w];
                if r == INF {
                    continue;
                }
                let c = r.saturating_add(!g.allows(v, w) as u8);
                best = best.min(c);
            }
            rest[mask * nodes + v] = best;
        }
    }
    let budget = budget.min(m) as u8;
    let mut order = Vec::with_capacity(m);
    let mut mask = 0usize;
    let mut used = 0u8;
    for _ in 0..m {
        let prev = order.last().copied();
        let pick = (0..nodes).find(|&w| {
            let seg = w / 2;
            if mask >> seg & 1 == 1 {
                return false;
            }
            let step = prev.map_or(0, |v| !g.allows(v, w) as u8);
            let r = rest[(mask | 1 << seg) * nodes + w];
            r != INF && used + step + r <= budget
        })?;
        used += prev.map_or(0, |v| !g.allows(v, pick) as u8);
        mask |= 1 << (pick / 2);
        order.push(pick);
    }
    Some(order)
}

/// Builds the polyline realising a node order, with minimal extensions at
/// both ends and one free link per break.
pub fn witness_from_order(ci: &CoverInstance, g: &TransitionGraph, order: &[usize]) -> Result<CoverWitness> {
    let segs = ci.segments();
    let first = *order
        .first()
        .ok_or_else(|| Error::MalformedWitness("empty order".into()))?;
    let mut verts = vec![near(&segs[first / 2], first % 2).clone()];
    let mut assignment = vec![(ci.label(first / 2).to_string(), 1)];
    for w in order.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (sa, sb) = (&segs[a / 2], &segs[b / 2]);
        if g.allows(a, b) {
            verts.push(line_point(&sa.supporting_ray(), &sb.supporting_ray()).expect("bend lines meet"));
        } else {
            verts.push(far(sa, a % 2).clone());
            verts.push(near(sb, b % 2).clone());
        }
        assignment.push((ci.label(b / 2).to_string(), verts.len()));
    }
    let last = *order.last().expect("non-empty");
    verts.push(far(&segs[last / 2], last % 2).clone());
    Ok(CoverWitness {
        polyline: Polyline::new(verts)?,
        assignment,
    })
}

fn precheck(ci: &CoverInstance) -> Result<()> {
    if let Some(msg) = check_general_position(ci) {
        return Err(Error::NotGeneralPosition(msg));
    }
    Ok(())
}

/// Search over all segment orders and orientations, without using the
/// structure of reduced instances.
pub fn solve_cover_exhaustive(ci: &CoverInstance) -> Result<Option<CoverWitness>> {
    let m = ci.m();
    if m > SOLVER_LIMIT {
        return Err(Error::TooLarge {
            size: m,
            limit: SOLVER_LIMIT,
        });
    }
    precheck(ci)?;
    if m == 0 || ci.k() < m {
        return Ok(None);
    }
    let g = TransitionGraph::of_instance(ci);
    match best_order(&g, ci.k() - m) {
        Some(order) => witness_from_order(ci, &g, &order).map(Some),
        None => Ok(None),
    }
}

/// Solves a cover instance. Reduced instances at `k = m` use the forced
/// prefix `h, v, t` and consume needles as down-up pairs; everything else
/// goes to the exhaustive search.
pub fn solve_cover(ci: &CoverInstance) -> Result<Option<CoverWitness>> {
    let Some(red) = ci.reduction() else {
        return solve_cover_exhaustive(ci);
    };
    if ci.k() != ci.m() {
        return solve_cover_exhaustive(ci);
    }
    let n = red.needles.len();
    if n > NEEDLE_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: NEEDLE_LIMIT,
        });
    }
    precheck(ci)?;
    let g = TransitionGraph::of_instance(ci);
    let (h, v, t) = (2 * LEAD_H, 2 * LEAD_V, 2 * LEAD_T);
    if !g.allows(h, v) || !g.allows(v, t) {
        return Ok(None);
    }
    // State c·2 + var: var 0 enters down the left segment and leaves up the
    // right one, var 1 the mirror image.
    let entry = |s: usize| {
        let nd = &red.needles[s / 2];
        if s % 2 == 0 {
            2 * nd.left
        } else {
            2 * nd.right
        }
    };
    let exit = |s: usize| {
        let nd = &red.needles[s / 2];
        if s % 2 == 0 {
            2 * nd.right + 1
        } else {
            2 * nd.left + 1
        }
    };
    let states = 2 * n;
    let valid: Vec<bool> = (0..states).map(|s| g.allows(entry(s), exit(s))).collect();
    let full = (1usize << n) - 1;
    // done[mask·states + s]: the needles outside `mask` can follow state `s`.
    let mut done = vec![false; (full + 1) * states];
    for s in 0..states {
        done[full * states + s] = true;
    }
    for mask in (1..full).rev() {
        for s in 0..states {
            if mask >> (s / 2) & 1 == 0 {
                continue;
            }
            done[mask * states + s] = (0..states).any(|u| {
                mask >> (u / 2) & 1 == 0
                    && valid[u]
                    && g.allows(exit(s), entry(u))
                    && done[(mask | 1 << (u / 2)) * states + u]
            });
        }
    }
    let mut order = vec![h, v, t];
    let mut mask = 0usize;
    let mut prev = t;
    for _ in 0..n {
        let pick = (0..states).find(|&u| {
            mask >> (u / 2) & 1 == 0 && valid[u] && g.allows(prev, entry(u)) && done[(mask | 1 << (u / 2)) * states + u]
        });
        let Some(u) = pick else {
            return Ok(None);
        };
        order.extend([entry(u), exit(u)]);
        mask |= 1 << (u / 2);
        prev = exit(u);
    }
    witness_from_order(ci, &g, &order).map(Some)
}

/// Every segment lies in some link and there are at most `k` links.
pub fn verify_cover(ci: &CoverInstance, p: &Polyline) -> bool {
    if p.link_count() > ci.k() {
        return false;
    }
    let links = p.links();
    ci.segments()
        .iter()
        .all(|s| links.iter().any(|l| segment_contains(l, s)))
}

/// Chord order encoded by a witness of a reduced instance with `2n + 3`
/// links: after `h, v, t`, consecutive link pairs cover the two segments of
/// one needle.
pub fn extract_hamiltonian_path(w: &CoverWitness, ci: &CoverInstance) -> Result<Vec<usize>> {
    let red = ci
        .reduction()
        .ok_or_else(|| Error::Mismatch("instance carries no reduction data".into()))?;
    let m = ci.m();
    if w.link_count() != m || w.assignment.len() != m {
        return Err(Error::MalformedWitness(format!(
            "expected {m} links covering {m} segments, found {} and {}",
            w.link_count(),
            w.assignment.len()
        )));
    }
    let mut by_link = vec![None; m];
    for (label, link) in &w.assignment {
        let seg = ci
            .index_of(label)
            .ok_or_else(|| Error::MalformedWitness(format!("unknown segment {label}")))?;
        match by_link.get_mut(link - 1) {
            Some(slot @ None) => *slot = Some(seg),
            _ => {
                return Err(Error::MalformedWitness(format!(
                    "link {link} assigned twice or missing"
                )))
            }
        }
    }
    let mut seq: Vec<usize> = by_link.into_iter().map(|s| s.expect("bijection")).collect();
    if seq[0] != LEAD_H && seq[m - 1] == LEAD_H {
        seq.reverse();
    }
    if seq[..3] != [LEAD_H, LEAD_V, LEAD_T] {
        return Err(Error::MalformedWitness("cover does not start with h, v, t".into()));
    }
    seq[3..]
        .chunks(2)
        .map(|pair| {
            red.needles
                .iter()
                .find(|n| (pair == [n.left, n.right]) || (pair == [n.right, n.left]))
                .map(|n| n.chord)
                .ok_or_else(|| Error::MalformedWitness("consecutive links do not cover one needle".into()))
        })
        .collect()
}
