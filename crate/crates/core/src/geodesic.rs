//! Direct enumeration of geodesic cycles in the building of
//! `GL(V_1) × ... × GL(V_r)` over a common field, by depth-first search
//! over vertex sequences.
//!
//! A vertex is a proper nonzero subspace of one factor. Two vertices span
//! an edge when they lie in different factors, or in the same factor and
//! are distinct and comparable. The link of `W ⊂ V_f` is the join of the
//! other factor buildings with the buildings of `W` and of `V_f / W`, and
//! opposition in the link is tested in whichever join component holds
//! both vertices.

use thiserror::Error;

use crate::gf::{Field, FieldError};
use crate::subspace::{Lattice, SubspaceId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeodesicError {
    #[error("q^n = {size} exceeds the enumeration cap {cap}")]
    ScaleCap { size: u64, cap: u64 },
    #[error("cycle length {len} exceeds the enumeration cap {cap}")]
    LengthCap { len: usize, cap: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Limits for the direct enumerators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleCap {
    /// Largest `q^n` allowed for any factor.
    pub max_ambient: u64,
    pub max_len: usize,
}

impl Default for ScaleCap {
    fn default() -> Self {
        ScaleCap { max_ambient: 81, max_len: 8 }
    }
}

type Vertex = (usize, SubspaceId);

/// The join of the buildings of several spaces over one field.
pub struct JoinBuilding {
    lattices: Vec<Lattice>,
    vertices: Vec<Vertex>,
    /// `by_dim[f][k]`: indices of the `k`-dimensional vertices of factor `f`.
    by_dim: Vec<Vec<Vec<usize>>>,
}

impl JoinBuilding {
    pub fn new(dims: &[usize], q: u64, cap: ScaleCap) -> Result<Self, GeodesicError> {
        let field = Field::new(q)?;
        let mut lattices = Vec::with_capacity(dims.len());
        let mut vertices = Vec::new();
        let mut by_dim = Vec::with_capacity(dims.len());
        for (f, &n) in dims.iter().enumerate() {
            let size = (q as u128).saturating_pow(n as u32);
            if size > cap.max_ambient as u128 {
                return Err(GeodesicError::ScaleCap {
                    size: size.min(u64::MAX as u128) as u64,
                    cap: cap.max_ambient,
                });
            }
            let lattice = Lattice::new(field.clone(), n);
            let mut dims_f = vec![Vec::new(); n + 1];
            for k in 1..n {
                for id in lattice.ids_of_dim(k) {
                    dims_f[k].push(vertices.len());
                    vertices.push((f, id));
                }
            }
            by_dim.push(dims_f);
            lattices.push(lattice);
        }
        Ok(JoinBuilding { lattices, vertices, by_dim })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn adjacent(&self, x: usize, y: usize) -> bool {
        let ((f, a), (g, b)) = (self.vertices[x], self.vertices[y]);
        if f != g {
            return true;
        }
        let lat = &self.lattices[f];
        a != b && (lat.contains(a, b) || lat.contains(b, a))
    }

    /// Whether `x` and `y` are opposite vertices of the link of `c`.
    fn opposite(&self, c: usize, x: usize, y: usize) -> bool {
        let (f, w) = self.vertices[c];
        let ((g, u), (h, v)) = (self.vertices[x], self.vertices[y]);
        if g != h {
            return false;
        }
        let lat = &self.lattices[g];
        if g != f {
            return lat.is_complement(u, v);
        }
        let below = |s: SubspaceId| s != w && lat.contains(w, s);
        let above = |s: SubspaceId| s != w && lat.contains(s, w);
        if below(u) && below(v) {
            lat.intersect(u, v) == lat.zero() && lat.sum(u, v) == w
        } else if above(u) && above(v) {
            lat.intersect(u, v) == w && lat.sum(u, v) == lat.whole()
        } else {
            false
        }
    }

    /// Vertices that can be opposite `prev` in the link of `cur`, filtered
    /// by the only dimension such a vertex can have.
    fn candidates(&self, prev: usize, cur: usize) -> &[usize] {
        let (f, w) = self.vertices[cur];
        let (g, u) = self.vertices[prev];
        let n_g = self.lattices[g].n();
        let dim = if g != f {
            n_g - u.dim
        } else if u.dim < w.dim {
            w.dim - u.dim
        } else {
            n_g + w.dim - u.dim
        };
        self.by_dim[g].get(dim).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Numbers of geodesic cycles of lengths `1..=max_len`.
    pub fn count_cycles(&self, max_len: usize) -> Vec<u64> {
        let mut counts = vec![0u64; max_len];
        let n = self.vertex_count();
        let mut path = Vec::with_capacity(max_len);
        for x0 in 0..n {
            for x1 in 0..n {
                if !self.adjacent(x0, x1) {
                    continue;
                }
                path.clear();
                path.push(x0);
                path.push(x1);
                self.extend(&mut path, max_len, &mut counts);
            }
        }
        counts
    }

    /// `path` holds `x_0..x_{m-1}`; closing here gives a cycle of length m.
    fn extend(&self, path: &mut Vec<usize>, max_len: usize, counts: &mut [u64]) {
        let m = path.len();
        let (first, second) = (path[0], path[1]);
        let (prev, cur) = (path[m - 2], path[m - 1]);
        if self.opposite(cur, prev, first) && self.opposite(first, cur, second) {
            counts[m - 1] += 1;
        }
        if m == max_len {
            return;
        }
        for &next in self.candidates(prev, cur) {
            if self.opposite(cur, prev, next) {
                path.push(next);
                self.extend(path, max_len, counts);
                path.pop();
            }
        }
    }
}

fn check_len(max_len: usize, cap: ScaleCap) -> Result<(), GeodesicError> {
    if max_len > cap.max_len {
        return Err(GeodesicError::LengthCap { len: max_len, cap: cap.max_len });
    }
    Ok(())
}

/// Geodesic cycle counts `N(l)`, `l = 1..=max_len`, in the building of
/// `F_q^n`.
pub fn count_geodesic_cycles_direct(n: usize, q: u64, max_len: usize, cap: ScaleCap) -> Result<Vec<u64>, GeodesicError> {
    count_geodesic_cycles_product(&[n], q, max_len, cap)
}

/// Geodesic cycle counts in the building of `GL(F_q^{n_1}) × ...`.
pub fn count_geodesic_cycles_product(
    dims: &[usize],
    q: u64,
    max_len: usize,
    cap: ScaleCap,
) -> Result<Vec<u64>, GeodesicError> {
    check_len(max_len, cap)?;
    Ok(JoinBuilding::new(dims, q, cap)?.count_cycles(max_len))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_has_no_cycles() {
        assert_eq!(count_geodesic_cycles_direct(2, 2, 6, ScaleCap::default()).unwrap(), vec![0; 6]);
    }

    #[test]
    fn odd_lengths_vanish_in_rank_two() {
        let c = count_geodesic_cycles_direct(3, 2, 6, ScaleCap::default()).unwrap();
        assert_eq!(c[0], 0);
        assert_eq!(c[2], 0);
        assert_eq!(c[4], 0);
        // 8·2 + 6·32 + 2·64 from the eigenvalues ±1, ±2ω^{±1/2}, ±2
        assert_eq!(c[5], 336);
    }

    #[test]
    fn product_of_two_planes() {
        let c = count_geodesic_cycles_product(&[2, 2], 2, 4, ScaleCap::default()).unwrap();
        assert_eq!(c[1], 0);
        assert_eq!(c[3], 72);
    }

    #[test]
    fn one_dimensional_factor_is_inert() {
        let cap = ScaleCap::default();
        assert_eq!(
            count_geodesic_cycles_product(&[1, 3], 2, 6, cap).unwrap(),
            count_geodesic_cycles_direct(3, 2, 6, cap).unwrap()
        );
    }

    #[test]
    fn caps() {
        assert!(matches!(
            count_geodesic_cycles_direct(5, 3, 4, ScaleCap::default()),
            Err(GeodesicError::ScaleCap { size: 243, cap: 81 })
        ));
        assert!(matches!(
            count_geodesic_cycles_direct(3, 2, 9, ScaleCap::default()),
            Err(GeodesicError::LengthCap { .. })
        ));
    }
}
