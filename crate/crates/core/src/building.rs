//! The graphs X0 (opposition of subspaces) and X2 (geodesic adjacency of
//! directed flags) attached to the building of F_q^n, built one
//! multi-dimension class at a time.

use std::collections::HashMap;

use thiserror::Error;

use crate::digraph::{Digraph, DigraphError};
use crate::subspace::{directed_flags, gaussian_binomial, Flag, Lattice, SubspaceId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildingError {
    #[error("invalid multi-dimension ({0}, {1}) for n = {2}")]
    BadMdim(usize, usize, usize),
    #[error("invalid class index k = {0} for n = {1}")]
    BadClass(usize, usize),
    #[error("graph would have {vertices} vertices, above the cap {cap}")]
    TooLarge { vertices: u128, cap: u128 },
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

/// The successor multi-dimension of a directed flag of type `(a, b)` in X2.
pub fn mdim_step(n: usize, (a, b): (usize, usize)) -> (usize, usize) {
    if b > a {
        (b, b - a)
    } else {
        (b, n + b - a)
    }
}

fn check_mdim(n: usize, (a, b): (usize, usize)) -> Result<(), BuildingError> {
    if a == b || a == 0 || b == 0 || a >= n || b >= n {
        return Err(BuildingError::BadMdim(a, b, n));
    }
    Ok(())
}

/// The orbit of `(a, b)` under [`mdim_step`], starting at `(a, b)`.
pub fn mdim_orbit(n: usize, start: (usize, usize)) -> Result<Vec<(usize, usize)>, BuildingError> {
    check_mdim(n, start)?;
    let mut orbit = vec![start];
    let mut cur = mdim_step(n, start);
    while cur != start {
        orbit.push(cur);
        cur = mdim_step(n, cur);
    }
    Ok(orbit)
}

/// The triple `(i, j, k)` with `i + j + k = n` describing a class: the
/// dimensions of the three successive quotients of the flag, read from a
/// member `(a, b)`.
pub fn class_triple(n: usize, (a, b): (usize, usize)) -> (usize, usize, usize) {
    if a < b {
        (a, b - a, n - b)
    } else {
        (a - b, b, n - a)
    }
}

/// One representative per multi-dimension class, the lexicographically
/// smallest member with `a < b`.
pub fn mdim_classes(n: usize) -> Vec<(usize, usize)> {
    let mut seen = std::collections::HashSet::new();
    let mut reps = Vec::new();
    for a in 1..n {
        for b in a + 1..n {
            if seen.contains(&(a, b)) {
                continue;
            }
            let orbit = mdim_orbit(n, (a, b)).expect("valid mdim");
            seen.extend(orbit.iter().copied());
            reps.push(orbit.into_iter().filter(|&(x, y)| x < y).min().unwrap());
        }
    }
    reps.sort();
    reps
}

/// A digraph together with the building object behind each vertex and a
/// cyclic typing of period `period`.
#[derive(Debug, Clone)]
pub struct LabelledGraph<L> {
    pub graph: Digraph,
    pub labels: Vec<L>,
    pub types: Vec<usize>,
    pub period: usize,
}

fn check_size(vertices: u128, cap: usize) -> Result<(), BuildingError> {
    if vertices > cap as u128 {
        return Err(BuildingError::TooLarge {
            vertices,
            cap: cap as u128,
        });
    }
    Ok(())
}

/// The component X0^{[k]}: subspaces of dimension k and n - k, with an edge
/// `W1 -> W2` whenever `W1 ⊕ W2 = F_q^n`. For `2k = n` this is a single
/// type; otherwise the dimension-k subspaces come first and form type 0.
pub fn x0_component(lattice: &Lattice, k: usize, cap: usize) -> Result<LabelledGraph<SubspaceId>, BuildingError> {
    let n = lattice.n();
    if k == 0 || k >= n {
        return Err(BuildingError::BadClass(k, n));
    }
    let k = k.min(n - k);
    let q = lattice.field().order() as u64;
    let size = if 2 * k == n { 1 } else { 2 } * gaussian_binomial(n, k, q);
    check_size(size, cap)?;

    let mut labels: Vec<SubspaceId> = lattice.ids_of_dim(k).collect();
    let special = 2 * k == n;
    if !special {
        labels.extend(lattice.ids_of_dim(n - k));
    }
    let types: Vec<usize> = labels.iter().map(|s| usize::from(!special && s.dim != k)).collect();
    let index: HashMap<SubspaceId, usize> = labels.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut succ = vec![Vec::new(); labels.len()];
    for (u, &w1) in labels.iter().enumerate() {
        for w2 in lattice.ids_of_dim(n - w1.dim) {
            if lattice.is_complement(w1, w2) {
                succ[u].push(index[&w2] as u32);
            }
        }
    }
    Ok(LabelledGraph {
        graph: Digraph::from_successors(succ)?,
        labels,
        types,
        period: if special { 1 } else { 2 },
    })
}

/// The full X0 graph: the disjoint union of its components in increasing k.
pub fn x0_graph(lattice: &Lattice, cap: usize) -> Result<LabelledGraph<SubspaceId>, BuildingError> {
    let parts = (1..=lattice.n() / 2)
        .map(|k| x0_component(lattice, k, cap))
        .collect::<Result<Vec<_>, _>>()?;
    union(parts, cap)
}

fn union<L: Clone>(parts: Vec<LabelledGraph<L>>, cap: usize) -> Result<LabelledGraph<L>, BuildingError> {
    let total: usize = parts.iter().map(|p| p.labels.len()).sum();
    check_size(total as u128, cap)?;
    let mut out = LabelledGraph {
        graph: Digraph::empty(0),
        labels: Vec::new(),
        types: Vec::new(),
        period: 1,
    };
    for p in parts {
        out.graph = out.graph.disjoint_union(&p.graph);
        out.labels.extend(p.labels);
        out.types.extend(p.types);
        out.period = num_integer::lcm(out.period, p.period);
    }
    Ok(out)
}

/// The X2 edge relation between `(W1, W2)` and `(W2, W4)`: either
/// `W1 ⊕ W4 = W2`, or `W1 ∩ W4 = W2` and `W1 + W4 = V`.
pub fn x2_edge(lattice: &Lattice, w1: SubspaceId, w2: SubspaceId, w4: SubspaceId) -> bool {
    let meet = lattice.intersect(w1, w4);
    let join = lattice.sum(w1, w4);
    (meet == lattice.zero() && join == w2) || (meet == w2 && join == lattice.whole())
}

/// Predicted number of flags in a class, used for the size cap.
fn class_size(n: usize, q: u64, orbit: &[(usize, usize)]) -> u128 {
    orbit
        .iter()
        .map(|&(a, b)| {
            let (lo, hi) = (a.min(b), a.max(b));
            gaussian_binomial(n, hi, q) * gaussian_binomial(hi, lo, q)
        })
        .sum()
}

/// The X2 component of the class containing `(a, b)`. Vertices are the
/// flags of each multi-dimension along the orbit starting at `(a, b)`;
/// the position in the orbit is the vertex type.
pub fn x2_component(lattice: &Lattice, mdim: (usize, usize), cap: usize) -> Result<LabelledGraph<Flag>, BuildingError> {
    let n = lattice.n();
    let orbit = mdim_orbit(n, mdim)?;
    check_size(class_size(n, lattice.field().order() as u64, &orbit), cap)?;
    let mut labels = Vec::new();
    let mut types = Vec::new();
    for (t, &(a, b)) in orbit.iter().enumerate() {
        let flags = directed_flags(lattice, a, b);
        types.extend(std::iter::repeat_n(t, flags.len()));
        labels.extend(flags);
    }
    let graph = x2_edges(lattice, &labels)?;
    Ok(LabelledGraph {
        graph,
        labels,
        types,
        period: orbit.len(),
    })
}

/// Edges among a set of flags, testing the X2 relation against every flag
/// that starts where the current one ends.
fn x2_edges(lattice: &Lattice, labels: &[Flag]) -> Result<Digraph, BuildingError> {
    let mut by_first: HashMap<SubspaceId, Vec<usize>> = HashMap::new();
    for (i, f) in labels.iter().enumerate() {
        by_first.entry(f.first).or_default().push(i);
    }
    let mut succ = vec![Vec::new(); labels.len()];
    for (u, f) in labels.iter().enumerate() {
        if let Some(cands) = by_first.get(&f.second) {
            for &v in cands {
                if x2_edge(lattice, f.first, f.second, labels[v].second) {
                    succ[u].push(v as u32);
                }
            }
        }
    }
    Ok(Digraph::from_successors(succ)?)
}

/// The full X2 graph: the disjoint union of its class components, classes
/// in the order of [`mdim_classes`].
pub fn x2_graph(lattice: &Lattice, cap: usize) -> Result<LabelledGraph<Flag>, BuildingError> {
    let parts = mdim_classes(lattice.n())
        .into_iter()
        .map(|c| x2_component(lattice, c, cap))
        .collect::<Result<Vec<_>, _>>()?;
    union(parts, cap)
}

/// X2 built over all directed flags at once, with no use of the class
/// decomposition. Only meant for cross-checking at small scale.
pub fn x2_graph_unsplit(lattice: &Lattice, cap: usize) -> Result<LabelledGraph<Flag>, BuildingError> {
    let n = lattice.n();
    let mut labels = Vec::new();
    for a in 1..n {
        for b in 1..n {
            if a != b {
                labels.extend(directed_flags(lattice, a, b));
            }
        }
    }
    check_size(labels.len() as u128, cap)?;
    labels.sort();
    let graph = x2_edges(lattice, &labels)?;
    let types = vec![0; labels.len()];
    Ok(LabelledGraph {
        graph,
        labels,
        types,
        period: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    const CAP: usize = 100_000;

    #[test]
    fn step_has_order_dividing_six() {
        for n in 2..9 {
            for a in 1..n {
                for b in 1..n {
                    if a == b {
                        continue;
                    }
                    let orbit = mdim_orbit(n, (a, b)).unwrap();
                    let (i, j, k) = class_triple(n, (a, b));
                    let expect = if i == j && j == k { 2 } else { 6 };
                    assert_eq!(orbit.len(), expect, "n={n} ({a},{b})");
                }
            }
        }
        assert_eq!(mdim_step(4, (1, 2)), (2, 1));
        assert_eq!(mdim_step(4, (2, 1)), (1, 3));
    }

    #[test]
    fn classes_for_small_n() {
        assert_eq!(mdim_classes(3), vec![(1, 2)]);
        assert_eq!(mdim_classes(4), vec![(1, 2)]);
        assert_eq!(mdim_classes(5), vec![(1, 2), (1, 3)]);
        let triples: Vec<_> = mdim_classes(6).into_iter().map(|c| class_triple(6, c)).collect();
        assert_eq!(triples.len(), 4);
    }

    #[test]
    fn x0_sizes_and_degrees() {
        let l = Lattice::new(Field::new(2).unwrap(), 4);
        let c = x0_component(&l, 2, CAP).unwrap();
        assert_eq!(c.graph.vertex_count(), 35);
        assert!((0..35).all(|v| c.graph.successors(v).len() == 16));
        let l3 = Lattice::new(Field::new(2).unwrap(), 3);
        let c = x0_component(&l3, 1, CAP).unwrap();
        assert_eq!(c.graph.vertex_count(), 14);
        assert!((0..14).all(|v| c.graph.successors(v).len() == 4));
    }

    #[test]
    fn x2_sizes() {
        let l3 = Lattice::new(Field::new(2).unwrap(), 3);
        assert_eq!(x2_graph(&l3, CAP).unwrap().graph.vertex_count(), 42);
        let l4 = Lattice::new(Field::new(2).unwrap(), 4);
        assert_eq!(x2_graph(&l4, CAP).unwrap().graph.vertex_count(), 630);
    }

    #[test]
    fn x2_edges_follow_mdim_step_and_stay_in_class() {
        let l = Lattice::new(Field::new(2).unwrap(), 4);
        let whole = x2_graph_unsplit(&l, CAP).unwrap();
        for (u, v) in whole.graph.edges() {
            let (f, g) = (whole.labels[u], whole.labels[v]);
            assert_eq!(g.mdim(), mdim_step(4, f.mdim()));
        }
        let split = x2_graph(&l, CAP).unwrap();
        assert_eq!(split.graph.edge_count(), whole.graph.edge_count());
    }

    #[test]
    fn cap_is_enforced() {
        let l = Lattice::new(Field::new(3).unwrap(), 4);
        assert!(matches!(x0_component(&l, 2, 100), Err(BuildingError::TooLarge { vertices: 130, cap: 100 })));
    }
}
