//! Finite directed graphs with 0/1 adjacency: closed walk counts and the
//! exact inverse Ihara zeta polynomial `det(I - uA)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use thiserror::Error;

use crate::linalg::{charpoly, IntMatrix};
use crate::poly::IntPoly;

/// Default vertex cap for exact characteristic polynomials.
pub const DEFAULT_EXACT_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge endpoint {0} out of range for {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("graph is not cyclic {0}-partite")]
    NotCyclicPartite(usize),
    #[error("{vertices} vertices exceed the exact computation cap {cap}")]
    TooLargeForExact { vertices: usize, cap: usize },
}

/// A directed graph on vertices `0..n` without self-loops or multi-edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Digraph {
    out: Vec<Vec<u32>>,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph {
            out: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list; repeated edges collapse.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, DigraphError> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        g.normalise();
        Ok(g)
    }

    /// Builds a graph from per-vertex successor lists.
    pub fn from_successors(out: Vec<Vec<u32>>) -> Result<Self, DigraphError> {
        let n = out.len();
        for (u, succ) in out.iter().enumerate() {
            for &v in succ {
                if v as usize >= n {
                    return Err(DigraphError::VertexOutOfRange(v as usize, n));
                }
                if v as usize == u {
                    return Err(DigraphError::SelfLoop(u));
                }
            }
        }
        let mut g = Digraph { out };
        g.normalise();
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize) -> Result<(), DigraphError> {
        let n = self.out.len();
        if u >= n || v >= n {
            return Err(DigraphError::VertexOutOfRange(u.max(v), n));
        }
        if u == v {
            return Err(DigraphError::SelfLoop(u));
        }
        self.out[u].push(v as u32);
        Ok(())
    }

    fn normalise(&mut self) {
        for succ in &mut self.out {
            succ.sort_unstable();
            succ.dedup();
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn successors(&self, u: usize) -> &[u32] {
        &self.out[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |&v| (u, v as usize)))
    }

    pub fn reversed(&self) -> Self {
        let mut r = Self::empty(self.vertex_count());
        for (u, v) in self.edges() {
            r.out[v].push(u as u32);
        }
        r.normalise();
        r
    }

    pub fn adjacency_matrix(&self) -> IntMatrix {
        let n = self.vertex_count();
        let mut m = IntMatrix::zeros(n);
        for (u, v) in self.edges() {
            m.set(u, v, BigInt::one());
        }
        m
    }

    /// Disjoint union; the vertices of `other` are shifted past ours.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let shift = self.vertex_count() as u32;
        let mut out = self.out.clone();
        out.extend(
            other
                .out
                .iter()
                .map(|s| s.iter().map(|&v| v + shift).collect()),
        );
        Digraph { out }
    }

    /// Tensor (Kronecker) product: `(x, y) -> (x', y')` iff both factors
    /// have the corresponding edge. Vertex `(x, y)` is `x * |Y| + y`.
    pub fn tensor_product(&self, other: &Self) -> Self {
        let m = other.vertex_count();
        let mut out = Vec::with_capacity(self.vertex_count() * m);
        for x in 0..self.vertex_count() {
            for y in 0..m {
                let mut succ = Vec::with_capacity(self.out[x].len() * other.out[y].len());
                for &x2 in &self.out[x] {
                    for &y2 in &other.out[y] {
                        succ.push(x2 * m as u32 + y2);
                    }
                }
                out.push(succ);
            }
        }
        let mut g = Digraph { out };
        g.normalise();
        g
    }

    /// Numbers of closed walks `N_c(l) = tr(A^l)` for `l = 1..=max_len`.
    ///
    /// Each vertex contributes the dot product of its forward and backward
    /// walk vectors of about half the length, which keeps the frontier
    /// small on sparse graphs.
    pub fn closed_walk_counts(&self, max_len: usize) -> Vec<BigInt> {
        let n = self.vertex_count();
        let half = max_len.div_ceil(2);
        let rev = self.reversed();
        let mut totals = vec![BigInt::zero(); max_len];
        let mut fwd = WalkFrontier::new(n);
        let mut bwd = WalkFrontier::new(n);
        for start in 0..n {
            let fwd_layers = fwd.layers(self, start, half);
            let bwd_layers = bwd.layers(&rev, start, half);
            for l in 1..=max_len {
                let a = l.min(half);
                totals[l - 1] += dot(&fwd_layers[a], &bwd_layers[l - a]);
            }
        }
        totals
    }

    /// Splits the vertices into types `0..n` so that every edge goes from
    /// type `t` to type `t + 1 mod n`, exploring each weakly connected
    /// component from its smallest vertex (which gets type 0).
    pub fn cyclic_partite_types(&self, n: usize) -> Result<Vec<usize>, DigraphError> {
        assert!(n >= 1);
        let rev = self.reversed();
        let mut types = vec![usize::MAX; self.vertex_count()];
        for root in 0..self.vertex_count() {
            if types[root] != usize::MAX {
                continue;
            }
            types[root] = 0;
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                let t = types[u];
                let steps = self.out[u]
                    .iter()
                    .map(|&v| (v as usize, (t + 1) % n))
                    .chain(rev.out[u].iter().map(|&v| (v as usize, (t + n - 1) % n)));
                for (v, want) in steps {
                    if types[v] == usize::MAX {
                        types[v] = want;
                        stack.push(v);
                    } else if types[v] != want {
                        return Err(DigraphError::NotCyclicPartite(n));
                    }
                }
            }
        }
        Ok(types)
    }

    /// Checks a caller-supplied typing.
    pub fn check_typing(&self, n: usize, types: &[usize]) -> Result<(), DigraphError> {
        let ok = types.len() == self.vertex_count()
            && types.iter().all(|&t| t < n)
            && self.edges().all(|(u, v)| types[v] == (types[u] + 1) % n);
        ok.then_some(()).ok_or(DigraphError::NotCyclicPartite(n))
    }

    /// The type-0 to type-0 block of `A^n` for a cyclic n-partite typing,
    /// with rows and columns in increasing vertex order.
    pub fn partite_block(&self, n: usize, types: &[usize]) -> Result<IntMatrix, DigraphError> {
        self.check_typing(n, types)?;
        let members: Vec<usize> = (0..self.vertex_count()).filter(|&v| types[v] == 0).collect();
        let mut position = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in members.iter().enumerate() {
            position[v] = i;
        }
        let mut block = IntMatrix::zeros(members.len());
        let mut frontier = WalkFrontier::new(self.vertex_count());
        for (i, &v) in members.iter().enumerate() {
            let layers = frontier.layers(self, v, n);
            for (w, c) in layers[n].iter() {
                block.set(i, position[w], c);
            }
        }
        Ok(block)
    }

    /// `det(I - uA)` in exact arithmetic.
    ///
    /// The adjacency matrix is block triangular over the strongly connected
    /// components, and a strongly connected component of period h has
    /// `det(I - uA_C) = det(I - u^h B)` with `B` the product of its cyclic
    /// blocks, so only the (much smaller) `B` needs a characteristic
    /// polynomial.
    pub fn inverse_zeta_polynomial(&self, cap: usize) -> Result<IntPoly, DigraphError> {
        self.check_cap(cap)?;
        let mut result = IntPoly::one();
        for (members, types, period) in self.periodic_components() {
            let block = self.cyclic_block_product(&members, &types, period);
            let m = block.size();
            let factor = charpoly(&block).reversed_to(m).substitute_power(period);
            result = &result * &factor;
        }
        Ok(result)
    }

    /// `det(I - uA)` from the characteristic polynomial of the full
    /// adjacency matrix, with no structural reduction.
    pub fn inverse_zeta_polynomial_unreduced(&self, cap: usize) -> Result<IntPoly, DigraphError> {
        self.check_cap(cap)?;
        let n = self.vertex_count();
        Ok(charpoly(&self.adjacency_matrix()).reversed_to(n))
    }

    fn check_cap(&self, cap: usize) -> Result<(), DigraphError> {
        let vertices = self.vertex_count();
        if vertices > cap {
            return Err(DigraphError::TooLargeForExact { vertices, cap });
        }
        Ok(())
    }

    /// Nontrivial strongly connected components with their cyclic typing and
    /// period. Vertices of each component are listed in increasing order.
    fn periodic_components(&self) -> Vec<(Vec<usize>, Vec<usize>, usize)> {
        let mut pg = DiGraph::<(), ()>::with_capacity(self.vertex_count(), self.edge_count());
        let nodes: Vec<_> = (0..self.vertex_count()).map(|_| pg.add_node(())).collect();
        for (u, v) in self.edges() {
            pg.add_edge(nodes[u], nodes[v], ());
        }
        let mut comp_of = vec![usize::MAX; self.vertex_count()];
        let mut out = Vec::new();
        for scc in tarjan_scc(&pg) {
            if scc.len() < 2 {
                continue;
            }
            let mut members: Vec<usize> = scc.iter().map(|x| x.index()).collect();
            members.sort_unstable();
            let id = out.len();
            for &v in &members {
                comp_of[v] = id;
            }
            // BFS levels inside the component; the period is the gcd of
            // level discrepancies over internal edges
            let mut level = vec![usize::MAX; self.vertex_count()];
            let root = members[0];
            level[root] = 0;
            let mut queue = std::collections::VecDeque::from([root]);
            let mut period = 0usize;
            while let Some(u) = queue.pop_front() {
                for &v in &self.out[u] {
                    let v = v as usize;
                    if comp_of[v] != id {
                        continue;
                    }
                    if level[v] == usize::MAX {
                        level[v] = level[u] + 1;
                        queue.push_back(v);
                    } else {
                        let diff = (level[u] + 1).abs_diff(level[v]);
                        period = period.gcd(&diff);
                    }
                }
            }
            let period = period.max(1);
            let types = members.iter().map(|&v| level[v] % period).collect();
            out.push((members, types, period));
        }
        out
    }

    /// Product `A_{0,1} A_{1,2} ... A_{h-1,0}` of the cyclic blocks of one
    /// strongly connected component, indexed by its type-0 vertices.
    fn cyclic_block_product(&self, members: &[usize], types: &[usize], period: usize) -> IntMatrix {
        let mut position = vec![usize::MAX; self.vertex_count()];
        let mut inside = vec![false; self.vertex_count()];
        let mut zero_type = Vec::new();
        for (&v, &t) in members.iter().zip(types) {
            inside[v] = true;
            if t == 0 {
                position[v] = zero_type.len();
                zero_type.push(v);
            }
        }
        let mut block = IntMatrix::zeros(zero_type.len());
        let mut frontier = WalkFrontier::new(self.vertex_count());
        for (i, &v) in zero_type.iter().enumerate() {
            let layers = frontier.layers_within(self, v, period, &inside);
            for (w, c) in layers[period].iter() {
                block.set(i, position[w], c);
            }
        }
        block
    }
}

/// A sparse vector of walk counts.
#[derive(Debug, Clone, Default)]
struct SparseCounts {
    entries: Vec<(usize, BigInt)>,
}

impl SparseCounts {
    fn iter(&self) -> impl Iterator<Item = (usize, BigInt)> + '_ {
        self.entries.iter().map(|(v, c)| (*v, c.clone()))
    }
}

fn dot(a: &SparseCounts, b: &SparseCounts) -> BigInt {
    // both are sorted by vertex
    let (mut i, mut j) = (0, 0);
    let mut s = BigInt::zero();
    while i < a.entries.len() && j < b.entries.len() {
        match a.entries[i].0.cmp(&b.entries[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += &a.entries[i].1 * &b.entries[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}

/// Reusable scratch space for propagating walk counts from one vertex.
/// Counts are kept in `u128` and spill into big integers on overflow.
struct WalkFrontier {
    small: Vec<u128>,
    big: Vec<Option<BigInt>>,
    touched: Vec<usize>,
    seen: Vec<bool>,
}

impl WalkFrontier {
    fn new(n: usize) -> Self {
        WalkFrontier {
            small: vec![0; n],
            big: vec![None; n],
            touched: Vec::new(),
            seen: vec![false; n],
        }
    }

    fn layers(&mut self, g: &Digraph, start: usize, depth: usize) -> Vec<SparseCounts> {
        self.propagate(g, start, depth, None)
    }

    fn layers_within(&mut self, g: &Digraph, start: usize, depth: usize, inside: &[bool]) -> Vec<SparseCounts> {
        self.propagate(g, start, depth, Some(inside))
    }

    fn propagate(&mut self, g: &Digraph, start: usize, depth: usize, inside: Option<&[bool]>) -> Vec<SparseCounts> {
        let mut layers = Vec::with_capacity(depth + 1);
        layers.push(SparseCounts {
            entries: vec![(start, BigInt::one())],
        });
        for _ in 0..depth {
            let prev = layers.last().unwrap();
            for (u, c) in &prev.entries {
                let small_c = u128::try_from(c).ok();
                for &v in &g.out[*u] {
                    let v = v as usize;
                    if inside.is_some_and(|ins| !ins[v]) {
                        continue;
                    }
                    if !self.seen[v] {
                        self.seen[v] = true;
                        self.touched.push(v);
                    }
                    let spill = match (&small_c, &self.big[v]) {
                        (Some(sc), None) => match self.small[v].checked_add(*sc) {
                            Some(s) => {
                                self.small[v] = s;
                                false
                            }
                            None => true,
                        },
                        _ => true,
                    };
                    if spill {
                        let acc = self.big[v]
                            .take()
                            .unwrap_or_else(|| BigInt::from(self.small[v]));
                        self.big[v] = Some(acc + c);
                        self.small[v] = 0;
                    }
                }
            }
            self.touched.sort_unstable();
            let entries = self
                .touched
                .drain(..)
                .map(|v| {
                    self.seen[v] = false;
                    let c = self.big[v]
                        .take()
                        .unwrap_or_else(|| BigInt::from(self.small[v]));
                    self.small[v] = 0;
                    (v, c)
                })
                .collect();
            layers.push(SparseCounts { entries });
        }
        layers
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Digraph {
        Digraph::from_edges(n, (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))).unwrap()
    }

    fn directed_cycle(n: usize) -> Digraph {
        Digraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn triangle() {
        let k3 = complete(3);
        assert_eq!(k3.inverse_zeta_polynomial(DEFAULT_EXACT_CAP).unwrap(), IntPoly::from_i64s(&[1, 0, -3, -2]));
        let counts: Vec<BigInt> = [0, 6, 6].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(k3.closed_walk_counts(3), counts);
        assert_eq!(k3.cyclic_partite_types(2), Err(DigraphError::NotCyclicPartite(2)));
    }

    #[test]
    fn self_loops_rejected() {
        assert_eq!(Digraph::from_edges(2, [(1, 1)]), Err(DigraphError::SelfLoop(1)));
    }

    #[test]
    fn tensor_of_cycles() {
        let g = directed_cycle(2).tensor_product(&directed_cycle(3));
        assert_eq!(g.closed_walk_counts(6)[5], BigInt::from(6));
        // C2 x C3 is the directed 6-cycle
        assert_eq!(
            g.inverse_zeta_polynomial(DEFAULT_EXACT_CAP).unwrap(),
            IntPoly::from_i64s(&[1, 0, 0, 0, 0, 0, -1])
        );
    }

    #[test]
    fn complete_bipartite_block() {
        // K_{2,2} with edges in both directions
        let g = Digraph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 0), (3, 0), (2, 1), (3, 1)]).unwrap();
        let types = g.cyclic_partite_types(2).unwrap();
        assert_eq!(types, vec![0, 0, 1, 1]);
        let b = g.partite_block(2, &types).unwrap();
        assert_eq!(b, IntMatrix::from_i64_rows(&[vec![2, 2], vec![2, 2]]));
    }

    #[test]
    fn acyclic_and_empty() {
        let g = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.inverse_zeta_polynomial(10).unwrap(), IntPoly::one());
        assert_eq!(Digraph::empty(0).inverse_zeta_polynomial(10).unwrap(), IntPoly::one());
        assert_eq!(
            complete(5).inverse_zeta_polynomial(4),
            Err(DigraphError::TooLargeForExact { vertices: 5, cap: 4 })
        );
    }
}
