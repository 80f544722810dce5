//! Subspaces of F_q^n in reduced row echelon form, and enumeration of
//! Grassmannians and directed flags.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::Field;

#[derive(Debug, Error)]
pub enum SubspaceError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("vector entry {0} is not an element of GF({1})")]
    NotAFieldElement(u32, u32),
    #[error("packed rows overflow 64 bits for q = {q}, n = {n}")]
    PackingOverflow { q: u32, n: usize },
    #[error("subspace count {count} exceeds the cap {cap}")]
    TooMany { count: u128, cap: u128 },
}

/// Reduces `rows` (each of length `ncols`) to reduced row echelon form in
/// place, dropping zero rows. Returns the pivot columns.
pub fn rref(field: &Field, rows: &mut Vec<Vec<u32>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = field.inv(rows[r][col]).expect("pivot is nonzero");
        if inv != 1 {
            for x in rows[r].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col] == 0 {
                continue;
            }
            let f = field.neg(rows[i][col]);
            for j in col..ncols {
                let y = rows[r][j];
                if y != 0 {
                    rows[i][j] = field.add(rows[i][j], field.mul(f, y));
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Rank of a list of vectors without keeping the echelon form.
pub fn rank(field: &Field, rows: &[Vec<u32>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m, ncols).len()
}

/// A subspace of F_q^n stored by its canonical (reduced row echelon) basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl Subspace {
    pub fn span(field: &Field, n: usize, vectors: &[Vec<u32>]) -> Result<Self, SubspaceError> {
        for v in vectors {
            if v.len() != n {
                return Err(SubspaceError::DimensionMismatch(v.len(), n));
            }
            if let Some(&x) = v.iter().find(|&&x| x >= field.order()) {
                return Err(SubspaceError::NotAFieldElement(x, field.order()));
            }
        }
        Ok(Self::span_unchecked(field, n, vectors.to_vec()))
    }

    fn span_unchecked(field: &Field, n: usize, mut rows: Vec<Vec<u32>>) -> Self {
        rref(field, &mut rows, n);
        Subspace { n, rows }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { n, rows: Vec::new() }
    }

    pub fn whole(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
            .collect();
        Subspace { n, rows }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Flattened canonical matrix, the key for the lexicographic order.
    pub fn key(&self) -> Vec<u32> {
        self.rows.concat()
    }

    /// Each basis row packed as a base-q integer, first coordinate most
    /// significant.
    pub fn packed_rows(&self, q: u32) -> Result<Vec<u64>, SubspaceError> {
        self.rows
            .iter()
            .map(|row| {
                row.iter().try_fold(0u64, |acc, &x| {
                    acc.checked_mul(q as u64)
                        .and_then(|a| a.checked_add(x as u64))
                        .ok_or(SubspaceError::PackingOverflow { q, n: self.n })
                })
            })
            .collect()
    }

    pub fn from_packed_rows(field: &Field, n: usize, packed: &[u64]) -> Result<Self, SubspaceError> {
        let q = field.order() as u64;
        let rows: Vec<Vec<u32>> = packed
            .iter()
            .map(|&x| {
                let mut v = vec![0u32; n];
                let mut x = x;
                for slot in v.iter_mut().rev() {
                    *slot = (x % q) as u32;
                    x /= q;
                }
                v
            })
            .collect();
        Self::span(field, n, &rows)
    }

    fn check_same_ambient(&self, other: &Self) {
        assert_eq!(self.n, other.n, "subspaces live in different ambient spaces");
    }

    pub fn sum(&self, other: &Self, field: &Field) -> Self {
        self.check_same_ambient(other);
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Self::span_unchecked(field, self.n, rows)
    }

    /// Intersection from the left kernel of the stacked bases.
    pub fn intersect(&self, other: &Self, field: &Field) -> Self {
        self.check_same_ambient(other);
        let (a, b, n) = (self.dim(), other.dim(), self.n);
        let width = n + a + b;
        // rows [v | e_i] for v in A and [-w | e_{a+j}] for w in B
        let mut m: Vec<Vec<u32>> = Vec::with_capacity(a + b);
        for (i, v) in self.rows.iter().enumerate() {
            let mut row = v.clone();
            row.resize(width, 0);
            row[n + i] = 1;
            m.push(row);
        }
        for (j, w) in other.rows.iter().enumerate() {
            let mut row: Vec<u32> = w.iter().map(|&x| field.neg(x)).collect();
            row.resize(width, 0);
            row[n + a + j] = 1;
            m.push(row);
        }
        rref(field, &mut m, width);
        let mut vectors = Vec::new();
        for row in &m {
            if row[..n].iter().all(|&x| x == 0) {
                // sum x_i a_i over the A-coordinates of the kernel vector
                let mut v = vec![0u32; n];
                for (i, basis) in self.rows.iter().enumerate() {
                    let c = row[n + i];
                    if c != 0 {
                        for (slot, &y) in v.iter_mut().zip(basis) {
                            *slot = field.add(*slot, field.mul(c, y));
                        }
                    }
                }
                vectors.push(v);
            }
        }
        let out = Self::span_unchecked(field, n, vectors);
        debug_assert_eq!(
            self.sum(other, field).dim() + out.dim(),
            a + b,
            "Grassmann identity"
        );
        out
    }

    /// `other` is contained in `self`.
    pub fn contains(&self, other: &Self, field: &Field) -> bool {
        self.check_same_ambient(other);
        other.dim() <= self.dim() && self.sum(other, field).dim() == self.dim()
    }

    /// `self ⊕ other = target`: trivial intersection and sum equal to target.
    pub fn is_direct_sum(&self, other: &Self, target: &Self, field: &Field) -> bool {
        if self.dim() + other.dim() != target.dim() {
            return false;
        }
        let s = self.sum(other, field);
        s.dim() == target.dim() && target.contains(&s, field)
    }

    /// `self ⊕ other = F_q^n`, using only a rank computation.
    pub fn is_complement(&self, other: &Self, field: &Field) -> bool {
        self.dim() + other.dim() == self.n && self.sum(other, field).dim() == self.n
    }
}

/// All k-dimensional subspaces of F_q^n sorted by flattened canonical matrix.
pub fn enumerate_grassmannian(field: &Field, n: usize, k: usize) -> Vec<Subspace> {
    if k > n {
        return Vec::new();
    }
    let q = field.order();
    let mut out = Vec::new();
    for pivots in (0..n).combinations(k) {
        // free entries: right of the row's pivot, outside pivot columns
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| {
                let pivots = &pivots;
                (p + 1..n)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let total = (q as u64).pow(free.len() as u32);
        for mut idx in 0..total {
            let mut rows = vec![vec![0u32; n]; k];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = 1;
            }
            for &(r, c) in free.iter().rev() {
                rows[r][c] = (idx % q as u64) as u32;
                idx /= q as u64;
            }
            out.push(Subspace { n, rows });
        }
    }
    out.sort_by_cached_key(Subspace::key);
    out
}

/// Gaussian binomial [n, k]_q as an exact integer.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (q as u128).pow((n - i) as u32) - 1;
        den *= (q as u128).pow((i + 1) as u32) - 1;
    }
    num / den
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    n: usize,
    q: u32,
    k: usize,
    bases: Vec<Vec<u64>>,
}

/// Default on-disk cache directory for Grassmannian enumerations.
pub fn default_cache_dir() -> Option<PathBuf> {
    if let Some(dir) = std::env::var_os("TITS_ZETA_CACHE") {
        return Some(PathBuf::from(dir));
    }
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(dir).join("tits-zeta"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("tits-zeta"))
}

fn cache_path(dir: &Path, n: usize, q: u32, k: usize) -> PathBuf {
    dir.join(format!("grassmannian-n{n}-q{q}-k{k}.json"))
}

/// Enumerates a Grassmannian, reading and writing a JSON cache when a
/// directory is given. Unreadable, stale or inconsistent cache files are
/// ignored and rewritten.
pub fn grassmannian_cached(
    field: &Field,
    n: usize,
    k: usize,
    cache_dir: Option<&Path>,
) -> Result<Vec<Subspace>, SubspaceError> {
    let q = field.order();
    let Some(dir) = cache_dir else {
        return Ok(enumerate_grassmannian(field, n, k));
    };
    let path = cache_path(dir, n, q, k);
    if let Some(subs) = read_cache(&path, field, n, k) {
        return Ok(subs);
    }
    let subs = enumerate_grassmannian(field, n, k);
    let bases = subs
        .iter()
        .map(|s| s.packed_rows(q))
        .collect::<Result<Vec<_>, _>>()?;
    let file = CacheFile {
        version: 1,
        n,
        q,
        k,
        bases,
    };
    // a failed write only costs a recomputation next time
    if std::fs::create_dir_all(dir).is_ok() {
        if let Ok(text) = serde_json::to_string(&file) {
            let _ = std::fs::write(&path, text);
        }
    }
    Ok(subs)
}

fn read_cache(path: &Path, field: &Field, n: usize, k: usize) -> Option<Vec<Subspace>> {
    let text = std::fs::read_to_string(path).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    let q = field.order();
    if file.version != 1 || file.n != n || file.q != q || file.k != k {
        return None;
    }
    if file.bases.len() as u128 != gaussian_binomial(n, k, q as u64) {
        return None;
    }
    let subs: Vec<Subspace> = file
        .bases
        .iter()
        .map(|rows| Subspace::from_packed_rows(field, n, rows).ok())
        .collect::<Option<_>>()?;
    let sorted = subs.windows(2).all(|w| w[0].key() < w[1].key());
    (sorted && subs.iter().all(|s| s.dim() == k)).then_some(subs)
}

/// Index of a subspace inside a [`Lattice`]: its dimension and its position
/// in the sorted Grassmannian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubspaceId {
    pub dim: usize,
    pub index: usize,
}

/// All subspaces of F_q^n grouped by dimension, with lookup by canonical
/// basis.
#[derive(Debug, Clone)]
pub struct Lattice {
    field: Field,
    n: usize,
    by_dim: Vec<Vec<Subspace>>,
    lookup: HashMap<Vec<u32>, SubspaceId>,
}

impl Lattice {
    pub fn new(field: Field, n: usize) -> Self {
        Self::with_cache(field, n, None).expect("enumeration without cache cannot fail")
    }

    pub fn with_cache(field: Field, n: usize, cache_dir: Option<&Path>) -> Result<Self, SubspaceError> {
        let mut by_dim = Vec::with_capacity(n + 1);
        let mut lookup = HashMap::new();
        for k in 0..=n {
            let subs = grassmannian_cached(&field, n, k, cache_dir)?;
            for (index, s) in subs.iter().enumerate() {
                lookup.insert(s.key(), SubspaceId { dim: k, index });
            }
            by_dim.push(subs);
        }
        Ok(Lattice {
            field,
            n,
            by_dim,
            lookup,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn of_dim(&self, k: usize) -> &[Subspace] {
        &self.by_dim[k]
    }

    pub fn get(&self, id: SubspaceId) -> &Subspace {
        &self.by_dim[id.dim][id.index]
    }

    pub fn id_of(&self, s: &Subspace) -> SubspaceId {
        self.lookup[&s.key()]
    }

    pub fn ids_of_dim(&self, k: usize) -> impl Iterator<Item = SubspaceId> {
        (0..self.by_dim[k].len()).map(move |index| SubspaceId { dim: k, index })
    }

    /// The k-dimensional subspaces contained in `w`, in increasing id order.
    pub fn subspaces_of(&self, w: SubspaceId, k: usize) -> Vec<SubspaceId> {
        let basis = self.get(w).basis();
        let mut out: Vec<SubspaceId> = enumerate_grassmannian(&self.field, w.dim, k)
            .iter()
            .map(|coords| {
                let vectors: Vec<Vec<u32>> = coords
                    .basis()
                    .iter()
                    .map(|c| self.combine(c, basis))
                    .collect();
                self.id_of(&Subspace::span_unchecked(&self.field, self.n, vectors))
            })
            .collect();
        out.sort();
        out
    }

    /// The k-dimensional subspaces containing `w`, in increasing id order.
    pub fn superspaces_of(&self, w: SubspaceId, k: usize) -> Vec<SubspaceId> {
        let sub = self.get(w);
        let mut out: Vec<SubspaceId> = self
            .ids_of_dim(k)
            .filter(|&id| self.get(id).contains(sub, &self.field))
            .collect();
        out.sort();
        out
    }

    fn combine(&self, coeffs: &[u32], basis: &[Vec<u32>]) -> Vec<u32> {
        let mut v = vec![0u32; self.n];
        for (&c, b) in coeffs.iter().zip(basis) {
            if c != 0 {
                for (slot, &y) in v.iter_mut().zip(b) {
                    *slot = self.field.add(*slot, self.field.mul(c, y));
                }
            }
        }
        v
    }

    pub fn sum(&self, a: SubspaceId, b: SubspaceId) -> SubspaceId {
        self.id_of(&self.get(a).sum(self.get(b), &self.field))
    }

    pub fn intersect(&self, a: SubspaceId, b: SubspaceId) -> SubspaceId {
        self.id_of(&self.get(a).intersect(self.get(b), &self.field))
    }

    /// `a` contains `b`.
    pub fn contains(&self, a: SubspaceId, b: SubspaceId) -> bool {
        self.get(a).contains(self.get(b), &self.field)
    }

    pub fn is_complement(&self, a: SubspaceId, b: SubspaceId) -> bool {
        self.get(a).is_complement(self.get(b), &self.field)
    }

    pub fn whole(&self) -> SubspaceId {
        SubspaceId {
            dim: self.n,
            index: 0,
        }
    }

    pub fn zero(&self) -> SubspaceId {
        SubspaceId { dim: 0, index: 0 }
    }
}

/// A directed flag: an ordered pair of distinct comparable subspaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    pub first: SubspaceId,
    pub second: SubspaceId,
}

impl Flag {
    pub fn mdim(&self) -> (usize, usize) {
        (self.first.dim, self.second.dim)
    }
}

/// All directed flags of multi-dimension `(a, b)`, sorted by
/// `(first, second)`.
pub fn directed_flags(lattice: &Lattice, a: usize, b: usize) -> Vec<Flag> {
    assert!(a != b && (1..lattice.n()).contains(&a) && (1..lattice.n()).contains(&b));
    let mut out = Vec::new();
    for first in lattice.ids_of_dim(a) {
        let seconds = if a < b {
            lattice.superspaces_of(first, b)
        } else {
            lattice.subspaces_of(first, b)
        };
        out.extend(seconds.into_iter().map(|second| Flag { first, second }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grassmannian_counts_match_gaussian_binomials() {
        for q in [2u64, 3, 4] {
            let f = Field::new(q).unwrap();
            for n in 0..=4 {
                for k in 0..=n {
                    let subs = enumerate_grassmannian(&f, n, k);
                    assert_eq!(subs.len() as u128, gaussian_binomial(n, k, q), "n={n} k={k} q={q}");
                }
            }
        }
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
    }

    #[test]
    fn grassmannian_is_sorted_and_canonical() {
        let f = Field::new(3).unwrap();
        let subs = enumerate_grassmannian(&f, 4, 2);
        assert!(subs.windows(2).all(|w| w[0].key() < w[1].key()));
        for s in &subs {
            assert_eq!(&Subspace::span(&f, 4, s.basis()).unwrap(), s);
        }
    }

    #[test]
    fn span_example() {
        let f = Field::new(2).unwrap();
        let s = Subspace::span(&f, 3, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(s.basis(), &[vec![1, 0, 1], vec![0, 1, 1]]);
    }

    #[test]
    fn flag_counts() {
        let l = Lattice::new(Field::new(2).unwrap(), 3);
        assert_eq!(directed_flags(&l, 1, 2).len(), 21);
        assert_eq!(directed_flags(&l, 2, 1).len(), 21);
        let l4 = Lattice::new(Field::new(2).unwrap(), 4);
        assert_eq!(directed_flags(&l4, 1, 2).len(), 105);
        assert_eq!(directed_flags(&l4, 2, 1).len(), 105);
    }

    #[test]
    fn packed_round_trip() {
        let f = Field::new(3).unwrap();
        for s in enumerate_grassmannian(&f, 3, 2) {
            let p = s.packed_rows(3).unwrap();
            assert_eq!(Subspace::from_packed_rows(&f, 3, &p).unwrap(), s);
        }
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let dir = std::env::temp_dir().join(format!("tits-zeta-cache-test-{}", std::process::id()));
        let f = Field::new(2).unwrap();
        let fresh = grassmannian_cached(&f, 4, 2, Some(&dir)).unwrap();
        let again = grassmannian_cached(&f, 4, 2, Some(&dir)).unwrap();
        assert_eq!(fresh, again);
        std::fs::write(cache_path(&dir, 4, 2, 2), "{\"version\":1,\"n\":4").unwrap();
        assert_eq!(grassmannian_cached(&f, 4, 2, Some(&dir)).unwrap(), fresh);
        let _ = std::fs::remove_dir_all(&dir);
    }
}
