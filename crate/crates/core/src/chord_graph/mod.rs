//! Chord diagrams, their circle graphs, Hamiltonian solvers and the
//! cycle-to-path gadget.

mod graph;
mod hamilton;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use graph::{Graph, MAX_VERTICES};
pub use hamilton::{hamiltonian_cycle, hamiltonian_path, HAMILTON_LIMIT};

/// Chord endpoints read clockwise around the circle; each label in `1..=n`
/// occurs exactly twice.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChordDiagram {
    order: Vec<usize>,
    /// 0-based positions of each chord's endpoints, first < second.
    pos: Vec<(usize, usize)>,
}

impl ChordDiagram {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        if order.len() % 2 != 0 {
            return Err(Error::InvalidDiagram(format!("odd endpoint count {}", order.len())));
        }
        let n = order.len() / 2;
        let mut first = vec![None; n];
        let mut pos = vec![(usize::MAX, usize::MAX); n];
        for (i, &l) in order.iter().enumerate() {
            if l == 0 || l > n {
                return Err(Error::InvalidDiagram(format!("label {l} outside [1, {n}]")));
            }
            match first[l - 1] {
                None => first[l - 1] = Some(i),
                Some(f) if pos[l - 1].0 == usize::MAX => pos[l - 1] = (f, i),
                Some(_) => return Err(Error::InvalidDiagram(format!("label {l} occurs more than twice"))),
            }
        }
        if let Some(l) = pos.iter().position(|p| p.0 == usize::MAX) {
            return Err(Error::InvalidDiagram(format!("label {} occurs once", l + 1)));
        }
        Ok(ChordDiagram { order, pos })
    }

    pub fn n(&self) -> usize {
        self.pos.len()
    }

    pub fn endpoint_order(&self) -> &[usize] {
        &self.order
    }

    /// 0-based positions of chord `label`'s two endpoints.
    pub fn positions(&self, label: usize) -> Result<(usize, usize)> {
        if label == 0 || label > self.n() {
            return Err(Error::UnknownChord(label));
        }
        Ok(self.pos[label - 1])
    }

    /// Same diagram read from position `k` (0-based) onwards.
    pub fn rotated(&self, k: usize) -> ChordDiagram {
        let mut order = self.order.clone();
        let len = order.len();
        if len > 0 {
            order.rotate_left(k % len);
        }
        ChordDiagram::new(order).expect("rotation preserves validity")
    }

    pub fn interleave(&self, u: usize, v: usize) -> bool {
        let (a, b) = self.pos[u - 1];
        let (c, d) = self.pos[v - 1];
        (a < c && c < b && b < d) || (c < a && a < d && d < b)
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.order.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for ChordDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let order = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidDiagram(format!("bad label {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ChordDiagram::new(order)
    }
}

/// Circle graph: `{u, v}` is an edge iff the chords interleave.
pub fn intersection_graph(d: &ChordDiagram) -> Graph {
    let n = d.n();
    let mut g = Graph::empty(n).expect("diagram size within graph limit");
    for u in 1..=n {
        for v in u + 1..=n {
            if d.interleave(u, v) {
                g.add_edge(u, v).expect("valid labels");
            }
        }
    }
    g
}

/// Replaces chord `x` by two parallel copies plus one pendant chord on each.
///
/// `x` keeps its label for the first copy; the second copy is `n + 1` and the
/// pendants are `n + 2` (on `x`) and `n + 3` (on `n + 1`). The endpoint at
/// position `i < j` of `x` becomes `p₁ x p₁ x₂` and the one at `j` becomes
/// `p₂ x₂ p₂ x`, so `x₂` nests inside `x` and each pendant encloses exactly
/// one endpoint of its partner.
pub fn cycle_to_path_gadget(d: &ChordDiagram, x: usize) -> Result<ChordDiagram> {
    let (i, j) = d.positions(x)?;
    let n = d.n();
    let (x2, p1, p2) = (n + 1, n + 2, n + 3);
    let mut order = Vec::with_capacity(2 * n + 6);
    for (k, &l) in d.order.iter().enumerate() {
        if k == i {
            order.extend([p1, x, p1, x2]);
        } else if k == j {
            order.extend([p2, x2, p2, x]);
        } else {
            order.push(l);
        }
    }
    ChordDiagram::new(order)
}

/// Every diagram on `n` chords with labels numbered by first occurrence,
/// i.e. one representative per perfect matching of `2n` points:
/// `(2n − 1)!!` diagrams.
pub fn all_diagrams(n: usize) -> Vec<ChordDiagram> {
    fn rec(seq: &mut Vec<usize>, next: usize, out: &mut Vec<ChordDiagram>) {
        let Some(i) = seq.iter().position(|&l| l == 0) else {
            out.push(ChordDiagram::new(seq.clone()).expect("complete matching"));
            return;
        };
        seq[i] = next;
        for j in i + 1..seq.len() {
            if seq[j] == 0 {
                seq[j] = next;
                rec(seq, next + 1, out);
                seq[j] = 0;
            }
        }
        seq[i] = 0;
    }
    let mut out = Vec::new();
    rec(&mut vec![0; 2 * n], 1, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dia(s: &str) -> ChordDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn validation() {
        assert!(ChordDiagram::new(vec![1, 2, 1]).is_err());
        assert!(ChordDiagram::new(vec![1, 1, 1, 1]).is_err());
        assert!(ChordDiagram::new(vec![1, 3, 1, 3]).is_err());
        assert!(ChordDiagram::new(vec![1, 2, 2, 2]).is_err());
        assert_eq!(ChordDiagram::new(vec![]).unwrap().n(), 0);
        assert_eq!(dia("1 2 1 2").to_string(), "1 2 1 2");
    }

    #[test]
    fn intersection_graph_examples() {
        assert_eq!(intersection_graph(&dia("1 2 1 2")).edges(), vec![(1, 2)]);
        assert_eq!(intersection_graph(&dia("1 1 2 2")).edge_count(), 0);
        assert_eq!(
            intersection_graph(&dia("1 2 3 1 2 3")).edges(),
            vec![(1, 2), (1, 3), (2, 3)]
        );
        assert_eq!(intersection_graph(&dia("1 2 2 1")).edge_count(), 0);
    }

    #[test]
    fn gadget_structure() {
        // Gadget on K2: chords 1 (copy), 3 (copy), 4 (pendant on 1), 5 (pendant on 3).
        let g = cycle_to_path_gadget(&dia("1 2 1 2"), 1).unwrap();
        assert_eq!(g.to_string(), "4 1 4 3 2 5 3 5 1 2");
        let ig = intersection_graph(&g);
        assert_eq!(ig.edges(), vec![(1, 2), (1, 4), (2, 3), (3, 5)]);
        // The path 4-1-2-3-5 exists, mirroring K2's cycle 1-2-1.
        assert!(ig.is_hamiltonian_path(&[4, 1, 2, 3, 5]));
        assert!(matches!(
            cycle_to_path_gadget(&dia("1 1"), 2),
            Err(Error::UnknownChord(2))
        ));
    }

    #[test]
    fn gadget_copies_neighbourhood() {
        for d in all_diagrams(4) {
            let base = intersection_graph(&d);
            for x in 1..=4 {
                let g = intersection_graph(&cycle_to_path_gadget(&d, x).unwrap());
                let (x2, p1, p2) = (5, 6, 7);
                for c in 1..=4 {
                    if c != x {
                        assert_eq!(g.has_edge(c, x), base.has_edge(c, x));
                        assert_eq!(g.has_edge(c, x2), base.has_edge(c, x));
                        assert!(!g.has_edge(c, p1) && !g.has_edge(c, p2));
                    }
                }
                assert!(!g.has_edge(x, x2));
                assert_eq!(g.neighbors(p1), vec![x]);
                assert_eq!(g.neighbors(p2), vec![x2]);
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| all_diagrams(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 15, 105, 945]);
    }

    #[test]
    fn rotation_invariance() {
        for d in all_diagrams(4) {
            let g = intersection_graph(&d);
            for k in 0..8 {
                let r = d.rotated(k);
                assert_eq!(intersection_graph(&r), g);
            }
        }
    }
}
