//! Spin parity of an origami whose zeros all have even order, as the Arf
//! invariant of the winding quadratic form on `H_1(S; Z/2)`.
//!
//! Homology is carried by closed paths in the adjacency graph of the squares:
//! a step crosses the right edge of square `i` into `α(i)` or its top edge
//! into `β(i)`, always through edge midpoints and square centers, so no path
//! meets a vertex. Fundamental cycles of a spanning tree visit every square
//! at most once; they are simple closed curves and `q(c) = ind(c) + 1`,
//! where `ind` is the turning number. Loops around vertices span the radical
//! of the intersection form on the cycle space, and `q` vanishes on them
//! exactly when every zero has even order.

use std::collections::VecDeque;

use crate::origami::{Origami, StratumSignature};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpinError {
    #[error("parity undefined for this stratum: {0} has an odd zero")]
    ParityUndefined(StratumSignature),
}

/// Counts of the square complex of an origami.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellComplex {
    pub faces: usize,
    pub edges: usize,
    pub vertices: usize,
}

impl CellComplex {
    pub fn of(o: &Origami) -> Self {
        let d = o.degree();
        CellComplex {
            faces: d,
            edges: 2 * d,
            vertices: o.commutator_type().parts().len(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64
    }
}

/// A symplectic basis `a_1, b_1, …, a_g, b_g` of `H_1(S; Z/2)` as edge sets
/// (edge `i` crosses the right side of square `i`, edge `d + i` its top),
/// with the intersection matrix and the values of `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyBasis {
    pub cycles: Vec<Vec<bool>>,
    pub intersection_matrix: Vec<Vec<u8>>,
    pub q_values: Vec<u8>,
}

impl HomologyBasis {
    pub fn genus(&self) -> usize {
        self.cycles.len() / 2
    }

    /// `Σ q(a_i) q(b_i)`.
    pub fn arf(&self) -> u8 {
        self.q_values
            .chunks(2)
            .map(|p| p[0] & p[1])
            .fold(0, |acc, x| acc ^ x)
    }
}

/// `0` for even, `1` for odd.
pub fn spin_parity(o: &Origami) -> Result<u8, SpinError> {
    if !o.stratum().all_even() {
        return Err(SpinError::ParityUndefined(o.stratum().clone()));
    }
    Ok(homology_basis(o).arf())
}

/// Builds a symplectic basis by greedy reduction of the fundamental cycles of
/// the breadth-first spanning tree rooted at square 1.
pub fn homology_basis(o: &Origami) -> HomologyBasis {
    let graph = SquareGraph::new(o);
    let cycles = graph.fundamental_cycles(0);
    let edge_sets: Vec<Vec<bool>> = cycles.iter().map(|c| graph.edge_set(c)).collect();
    let q: Vec<u8> = cycles.iter().map(|c| graph.simple_cycle_q(c)).collect();
    let gram = graph.gram(&edge_sets);
    let reduced = symplectic_reduction(&gram);

    assert_eq!(
        reduced.pairs.len(),
        o.genus(),
        "rank of the intersection form"
    );
    if o.stratum().all_even() {
        for r in &reduced.radical {
            assert_eq!(quad(&gram, &q, r), 0, "q must vanish on vertex loops");
        }
    }

    let mut basis_cycles = Vec::with_capacity(2 * o.genus());
    let mut q_values = Vec::with_capacity(2 * o.genus());
    for (a, b) in &reduced.pairs {
        for coeffs in [a, b] {
            let mut set = vec![false; graph.edge_count()];
            for (k, &c) in coeffs.iter().enumerate() {
                if c == 1 {
                    for (s, t) in set.iter_mut().zip(&edge_sets[k]) {
                        *s ^= *t;
                    }
                }
            }
            basis_cycles.push(set);
            q_values.push(quad(&gram, &q, coeffs));
        }
    }
    let intersection_matrix = graph.gram(&basis_cycles);
    HomologyBasis {
        cycles: basis_cycles,
        intersection_matrix,
        q_values,
    }
}

/// Direction of travel: 0 east, 1 north, 2 west, 3 south.
type Dir = u8;

/// One traversal of an edge of the square graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Step {
    edge: usize,
    forward: bool,
}

pub(crate) struct SquareGraph {
    d: usize,
    /// `ends[e] = (tail, head)`; edges `0..d` go right, `d..2d` go up.
    ends: Vec<(usize, usize)>,
    alpha_inv: Vec<usize>,
    beta_inv: Vec<usize>,
}

impl SquareGraph {
    pub(crate) fn new(o: &Origami) -> Self {
        let d = o.degree();
        let mut ends = Vec::with_capacity(2 * d);
        for i in 0..d {
            ends.push((i, o.alpha().at(i)));
        }
        for i in 0..d {
            ends.push((i, o.beta().at(i)));
        }
        SquareGraph {
            d,
            ends,
            alpha_inv: o
                .alpha()
                .inverse()
                .table()
                .iter()
                .map(|&x| x as usize)
                .collect(),
            beta_inv: o
                .beta()
                .inverse()
                .table()
                .iter()
                .map(|&x| x as usize)
                .collect(),
        }
    }

    fn edge_count(&self) -> usize {
        2 * self.d
    }

    fn dir(&self, s: Step) -> Dir {
        let vertical = s.edge >= self.d;
        match (vertical, s.forward) {
            (false, true) => 0,
            (true, true) => 1,
            (false, false) => 2,
            (true, false) => 3,
        }
    }

    fn tail(&self, s: Step) -> usize {
        let (t, h) = self.ends[s.edge];
        if s.forward {
            t
        } else {
            h
        }
    }

    fn head(&self, s: Step) -> usize {
        let (t, h) = self.ends[s.edge];
        if s.forward {
            h
        } else {
            t
        }
    }

    /// Steps leaving square `x`, in the order right, left, up, down.
    fn steps_from(&self, x: usize) -> [Step; 4] {
        [
            Step {
                edge: x,
                forward: true,
            },
            Step {
                edge: self.alpha_inv[x],
                forward: false,
            },
            Step {
                edge: self.d + x,
                forward: true,
            },
            Step {
                edge: self.d + self.beta_inv[x],
                forward: false,
            },
        ]
    }

    /// Fundamental cycles of the breadth-first spanning tree from `root`,
    /// one per non-tree edge in edge order. Each starts with its non-tree edge.
    pub(crate) fn fundamental_cycles(&self, root: usize) -> Vec<Vec<Step>> {
        let d = self.d;
        let mut parent: Vec<Option<Step>> = vec![None; d];
        let mut depth = vec![usize::MAX; d];
        let mut in_tree = vec![false; 2 * d];
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for s in self.steps_from(x) {
                let y = self.head(s);
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    parent[y] = Some(s);
                    in_tree[s.edge] = true;
                    queue.push_back(y);
                }
            }
        }
        assert!(
            depth.iter().all(|&x| x != usize::MAX),
            "square graph is connected"
        );

        (0..2 * d)
            .filter(|&e| !in_tree[e])
            .map(|e| {
                let (u, v) = self.ends[e];
                // tree path v -> u: climb both ends to their common ancestor
                let (mut a, mut b) = (v, u);
                let mut up_from_v = Vec::new();
                let mut up_from_u = Vec::new();
                while a != b {
                    if depth[a] >= depth[b] {
                        let s = parent[a].unwrap();
                        up_from_v.push(Step {
                            edge: s.edge,
                            forward: !s.forward,
                        });
                        a = self.tail(s);
                    } else {
                        let s = parent[b].unwrap();
                        up_from_u.push(s);
                        b = self.tail(s);
                    }
                }
                let mut steps = vec![Step {
                    edge: e,
                    forward: true,
                }];
                steps.extend(up_from_v);
                steps.extend(up_from_u.into_iter().rev());
                steps
            })
            .collect()
    }

    pub(crate) fn edge_set(&self, steps: &[Step]) -> Vec<bool> {
        let mut set = vec![false; self.edge_count()];
        for s in steps {
            set[s.edge] ^= true;
        }
        set
    }

    /// Turning number of a closed path, in full turns.
    pub(crate) fn turning_number(&self, steps: &[Step]) -> i64 {
        let n = steps.len();
        let mut quarter_turns = 0i64;
        for k in 0..n {
            let (s, t) = (steps[k], steps[(k + 1) % n]);
            debug_assert_eq!(self.head(s), self.tail(t), "path is not closed");
            quarter_turns += match (self.dir(t) + 4 - self.dir(s)) % 4 {
                0 => 0,
                1 => 1,
                3 => -1,
                _ => panic!("path reverses along an edge"),
            };
        }
        assert_eq!(
            quarter_turns % 4,
            0,
            "turning of a closed path is a whole number of turns"
        );
        quarter_turns / 4
    }

    /// `q` of a path visiting each square at most once.
    pub(crate) fn simple_cycle_q(&self, steps: &[Step]) -> u8 {
        let mut seen = vec![false; self.d];
        for s in steps {
            let x = self.tail(*s);
            assert!(!seen[x], "cycle is not simple");
            seen[x] = true;
        }
        ((self.turning_number(steps) + 1).rem_euclid(2)) as u8
    }

    /// Mod 2 intersection of two cycles, the second pushed off by a small
    /// vector pointing up and to the right. In square `j` they cross when the
    /// first leaves through the right side while the second enters from
    /// below, or the first leaves through the top while the second enters
    /// from the left.
    pub(crate) fn intersection(&self, x: &[bool], y: &[bool]) -> u8 {
        let d = self.d;
        let mut acc = false;
        for j in 0..d {
            acc ^= x[j] & y[d + self.beta_inv[j]];
            acc ^= x[d + j] & y[self.alpha_inv[j]];
        }
        acc as u8
    }

    pub(crate) fn gram(&self, sets: &[Vec<bool>]) -> Vec<Vec<u8>> {
        sets.iter()
            .map(|x| sets.iter().map(|y| self.intersection(x, y)).collect())
            .collect()
    }
}

struct Reduction {
    /// Coefficient vectors, over the fundamental cycles, of the symplectic pairs.
    pairs: Vec<(Vec<u8>, Vec<u8>)>,
    radical: Vec<Vec<u8>>,
}

fn bilinear(gram: &[Vec<u8>], u: &[u8], v: &[u8]) -> u8 {
    let mut acc = 0;
    for (i, &ui) in u.iter().enumerate() {
        if ui == 0 {
            continue;
        }
        for (j, &vj) in v.iter().enumerate() {
            acc ^= vj & gram[i][j];
        }
    }
    acc
}

/// `q(Σ v_i c_i) = Σ v_i q(c_i) + Σ_{i<j} v_i v_j (c_i · c_j)`.
fn quad(gram: &[Vec<u8>], q: &[u8], v: &[u8]) -> u8 {
    let mut acc = 0;
    for i in 0..v.len() {
        if v[i] == 0 {
            continue;
        }
        acc ^= q[i];
        for j in i + 1..v.len() {
            acc ^= v[j] & gram[i][j];
        }
    }
    acc
}

/// Greedy symplectic pairing: take the lowest remaining vector with a
/// partner (lowest index first), pair them, project the rest off the pair.
fn symplectic_reduction(gram: &[Vec<u8>]) -> Reduction {
    let n = gram.len();
    let mut pool: Vec<Vec<u8>> = (0..n)
        .map(|i| {
            let mut e = vec![0u8; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut pairs = Vec::new();
    loop {
        let found = (0..pool.len()).find_map(|i| {
            (i + 1..pool.len())
                .find(|&j| bilinear(gram, &pool[i], &pool[j]) == 1)
                .map(|j| (i, j))
        });
        let Some((i, j)) = found else { break };
        let b = pool.remove(j);
        let a = pool.remove(i);
        for z in pool.iter_mut() {
            let zb = bilinear(gram, z, &b);
            let za = bilinear(gram, z, &a);
            for k in 0..n {
                z[k] ^= (zb & a[k]) ^ (za & b[k]);
            }
        }
        pairs.push((a, b));
    }
    Reduction {
        pairs,
        radical: pool,
    }
}
