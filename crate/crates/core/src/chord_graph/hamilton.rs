//! Subset dynamic programming for Hamiltonian paths and cycles.
//!
//! `ends[mask]` holds, as a bitmask, every vertex at which some path covering
//! exactly `mask` can end. Witnesses are recovered greedily front to back,
//! which yields the lexicographically smallest vertex sequence.

use super::Graph;
use crate::error::{Error, Result};

/// Largest vertex count the solvers accept (table size is `2^n` words).
pub const HAMILTON_LIMIT: usize = 24;

fn guard(g: &Graph) -> Result<usize> {
    let n = g.vertex_count();
    if n > HAMILTON_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: HAMILTON_LIMIT,
        });
    }
    Ok(n)
}

/// Paths with free start.
fn path_table(g: &Graph, n: usize) -> Vec<u32> {
    let mut ends = vec![0u32; 1 << n];
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    for mask in 1..ends.len() {
        let mut e = ends[mask];
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut next = g.mask(v) as u32 & !(mask as u32);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                ends[mask | 1 << w] |= 1 << w;
            }
        }
    }
    ends
}

/// Paths that start at vertex 0.
fn rooted_table(g: &Graph, n: usize) -> Vec<u32> {
    let mut ends = vec![0u32; 1 << n];
    ends[1] = 1;
    for mask in (1..ends.len()).step_by(2) {
        let mut e = ends[mask];
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut next = g.mask(v) as u32 & !(mask as u32);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                ends[mask | 1 << w] |= 1 << w;
            }
        }
    }
    ends
}

pub fn hamiltonian_path(g: &Graph) -> Result<Option<Vec<usize>>> {
    let n = guard(g)?;
    if n == 0 {
        return Ok(None);
    }
    let ends = path_table(g, n);
    let full = (1usize << n) - 1;
    // A path covering R that ends at w, reversed, starts at w.
    let mut remaining = full;
    let mut candidates = full as u64;
    let mut out = Vec::with_capacity(n);
    while remaining != 0 {
        let ok = candidates & ends[remaining] as u64;
        if ok == 0 {
            return Ok(None);
        }
        let w = ok.trailing_zeros() as usize;
        out.push(w + 1);
        remaining &= !(1 << w);
        candidates = g.mask(w) & remaining as u64;
    }
    Ok(Some(out))
}

pub fn hamiltonian_cycle(g: &Graph) -> Result<Option<Vec<usize>>> {
    let n = guard(g)?;
    match n {
        0 | 1 => return Ok(None),
        2 => return Ok(g.has_edge(1, 2).then(|| vec![1, 2])),
        _ => {}
    }
    let ends = rooted_table(g, n);
    let full = (1usize << n) - 1;
    if ends[full] as u64 & g.mask(0) == 0 {
        return Ok(None);
    }
    // With visited set S (containing 0), stepping to w is completable iff the
    // reversed tail 0 → … → w covers the unvisited vertices plus {0, w}.
    let mut out = vec![1];
    let mut unvisited = full & !1;
    let mut cur = 0usize;
    while unvisited != 0 {
        let mut cand = g.mask(cur) & unvisited as u64;
        let mut chosen = None;
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if ends[unvisited | 1] >> w & 1 == 1 {
                chosen = Some(w);
                break;
            }
        }
        let w = chosen.expect("table guarantees a completion");
        out.push(w + 1);
        unvisited &= !(1 << w);
        cur = w;
    }
    Ok(Some(out))
}
