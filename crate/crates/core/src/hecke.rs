//! The Iwahori–Hecke algebra of the symmetric group at a numeric parameter
//! `q`, with `q = 1` giving the group algebra, together with the Springer
//! spectrum check and the trace computations in the group algebra.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::gf::prime_power;
use crate::linalg::{rank_rational, IntMatrix};
use crate::partition::{deg_psi, partitions_of, Partition};

/// Largest `n` for which the regular representation is built.
pub const REGULAR_CAP: usize = 7;
/// Largest `n` for the group-algebra traces.
pub const TRACE_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("{0:?} is not a permutation")]
    NotAPermutation(Vec<usize>),
    #[error("elements over different (n, q): ({0}, {1}) vs ({2}, {3})")]
    MixedParameters(usize, u64, usize, u64),
    #[error("q = {0} is neither 1 nor a prime power")]
    BadParameter(u64),
    #[error("n = {n} exceeds the cap {cap}")]
    ScaleCap { n: usize, cap: usize },
    #[error("composition {0:?} does not sum to {1}")]
    BadComposition(Vec<i64>, usize),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

/// A permutation of `{0..n}`, stored by its images; displayed one-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u8).collect())
    }

    /// From one-line notation on `{1..n}`.
    pub fn from_one_line(images: &[usize]) -> Result<Self, HeckeError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(HeckeError::NotAPermutation(images.to_vec()));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation(images.iter().map(|&x| (x - 1) as u8).collect()))
    }

    /// From disjoint cycles on `{1..n}`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, HeckeError> {
        let mut img: Vec<usize> = (1..=n).collect();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if a == 0 || a > n || b == 0 || b > n {
                    return Err(HeckeError::NotAPermutation(cycle.to_vec()));
                }
                img[a - 1] = b;
            }
        }
        Self::from_one_line(&img)
    }

    /// The simple transposition `s_i = (i, i+1)`, `1 <= i < n`.
    pub fn generator(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n, "generator index out of range");
        let mut p = Self::identity(n);
        p.0.swap(i - 1, i);
        p
    }

    /// The longest element, reversing `1..n`.
    pub fn longest(n: usize) -> Self {
        Permutation((0..n as u8).rev().collect())
    }

    /// All permutations in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Self> {
        (0..n as u8).permutations(n).map(Permutation).collect()
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ other`, applying `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Permutation(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.n()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation(inv)
    }

    /// Coxeter length, the number of inversions.
    pub fn length(&self) -> usize {
        let v = &self.0;
        (0..v.len()).map(|i| (i + 1..v.len()).filter(|&j| v[i] > v[j]).count()).sum()
    }

    /// A reduced word `[i_1, ..., i_k]` with `self = s_{i_1} ... s_{i_k}`,
    /// found by repeatedly bubbling the largest misplaced value into place.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut v = self.0.clone();
        let mut steps = Vec::new();
        for target in (0..v.len()).rev() {
            let mut pos = v.iter().position(|&x| x as usize == target).expect("value present");
            while pos < target {
                v.swap(pos, pos + 1);
                steps.push(pos + 1);
                pos += 1;
            }
        }
        steps.reverse();
        steps
    }

    /// Whether the permutation maps every block of the composition into
    /// itself, the blocks being consecutive runs of positions.
    pub fn in_young_subgroup(&self, composition: &[usize]) -> bool {
        let mut block = Vec::with_capacity(self.n());
        for (b, &c) in composition.iter().enumerate() {
            block.extend(std::iter::repeat_n(b, c));
        }
        (0..self.n()).all(|i| block[i] == block[self.apply(i)])
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_line())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.one_line().iter().join(" "))
    }
}

/// The elements of the Young subgroup of a composition.
pub fn young_subgroup(composition: &[usize]) -> Vec<Permutation> {
    let n: usize = composition.iter().sum();
    let mut out = vec![Permutation::identity(n)];
    let mut start = 0;
    for &c in composition {
        let block: Vec<u8> = (start as u8..(start + c) as u8).collect();
        let mut next = Vec::with_capacity(out.len());
        for p in &out {
            for perm in block.iter().copied().permutations(c) {
                let mut v = p.0.clone();
                v[start..start + c].copy_from_slice(&perm);
                next.push(Permutation(v));
            }
        }
        out = next;
        start += c;
    }
    out
}

fn check_q(q: u64) -> Result<(), HeckeError> {
    if q == 1 || prime_power(q).is_some() {
        Ok(())
    } else {
        Err(HeckeError::BadParameter(q))
    }
}

/// An element `sum c_w a_w` of the Hecke algebra `H_q(S_n)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeckeElement {
    n: usize,
    q: u64,
    coeffs: BTreeMap<Permutation, BigRational>,
}

impl HeckeElement {
    pub fn zero(n: usize, q: u64) -> Result<Self, HeckeError> {
        check_q(q)?;
        Ok(HeckeElement { n, q, coeffs: BTreeMap::new() })
    }

    pub fn one(n: usize, q: u64) -> Result<Self, HeckeError> {
        Self::basis(Permutation::identity(n), q)
    }

    pub fn basis(w: Permutation, q: u64) -> Result<Self, HeckeError> {
        let mut x = Self::zero(w.n(), q)?;
        x.coeffs.insert(w, BigRational::one());
        Ok(x)
    }

    /// `a_μ`: the sum of `a_w` over the Young subgroup of a composition.
    pub fn young_sum(composition: &[usize], q: u64) -> Result<Self, HeckeError> {
        let n = composition.iter().sum();
        let mut x = Self::zero(n, q)?;
        for w in young_subgroup(composition) {
            x.coeffs.insert(w, BigRational::one());
        }
        Ok(x)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeff(&self, w: &Permutation) -> BigRational {
        self.coeffs.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &BigRational)> {
        self.coeffs.iter()
    }

    fn add_term(&mut self, w: Permutation, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(w.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&w);
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), HeckeError> {
        if self.n != other.n || self.q != other.q {
            return Err(HeckeError::MixedParameters(self.n, self.q, other.n, other.q));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, HeckeError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = HeckeElement { n: self.n, q: self.q, coeffs: BTreeMap::new() };
        for (w, x) in &self.coeffs {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    /// `a_{s_i} · self`.
    pub fn mul_generator_left(&self, i: usize) -> Self {
        self.mul_generator(i, true)
    }

    /// `self · a_{s_i}`.
    pub fn mul_generator_right(&self, i: usize) -> Self {
        self.mul_generator(i, false)
    }

    fn mul_generator(&self, i: usize, left: bool) -> Self {
        let s = Permutation::generator(self.n, i);
        let q = BigRational::from_integer(BigInt::from(self.q));
        let q1 = &q - BigRational::one();
        let mut out = HeckeElement { n: self.n, q: self.q, coeffs: BTreeMap::new() };
        for (w, c) in &self.coeffs {
            let sw = if left { s.compose(w) } else { w.compose(&s) };
            if sw.length() > w.length() {
                out.add_term(sw, c.clone());
            } else {
                out.add_term(sw, c * &q);
                out.add_term(w.clone(), c * &q1);
            }
        }
        out
    }

    /// The product, folding generator multiplications along reduced words.
    pub fn mul(&self, other: &Self) -> Result<Self, HeckeError> {
        self.check_same(other)?;
        let mut out = HeckeElement { n: self.n, q: self.q, coeffs: BTreeMap::new() };
        for (w, c) in &self.coeffs {
            let mut z = other.clone();
            for &i in w.reduced_word().iter().rev() {
                z = z.mul_generator_left(i);
            }
            for (v, d) in z.coeffs {
                out.add_term(v, c * d);
            }
        }
        Ok(out)
    }
}

/// Matrix of left multiplication by `x` in the basis `a_w`, permutations in
/// lexicographic order; column `j` holds `x · a_{w_j}`.
pub fn regular_matrix(x: &HeckeElement) -> Result<Vec<Vec<BigRational>>, HeckeError> {
    if x.n > REGULAR_CAP {
        return Err(HeckeError::ScaleCap { n: x.n, cap: REGULAR_CAP });
    }
    let basis = Permutation::all(x.n);
    let index: HashMap<&Permutation, usize> = basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
    // x · a_w built from x · a_{w'} with w = w' s and l(w) = l(w') + 1
    let mut by_len: Vec<&Permutation> = basis.iter().collect();
    by_len.sort_by_key(|w| w.length());
    let mut columns: HashMap<Permutation, HeckeElement> = HashMap::new();
    for w in by_len {
        let col = match w.reduced_word().last() {
            None => x.clone(),
            Some(&i) => {
                let prefix = w.compose(&Permutation::generator(x.n, i));
                columns[&prefix].mul_generator_right(i)
            }
        };
        columns.insert(w.clone(), col);
    }
    let size = basis.len();
    let mut m = vec![vec![BigRational::zero(); size]; size];
    for (w, col) in &columns {
        let j = index[w];
        for (v, c) in col.terms() {
            m[index[v]][j] = c.clone();
        }
    }
    Ok(m)
}

/// Outcome of the Springer check for `a_{w0}^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpringerReport {
    pub n: usize,
    pub q: u64,
    /// `f -> (expected eigenspace dimension, observed)`.
    pub spectrum: BTreeMap<usize, (usize, usize)>,
    pub trace: BigInt,
}

fn to_int_matrix(m: &[Vec<BigRational>]) -> Result<IntMatrix, HeckeError> {
    let rows = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| {
                    if c.is_integer() {
                        Ok(c.to_integer())
                    } else {
                        Err(HeckeError::VerificationFailed(format!("non-integral entry {c}")))
                    }
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntMatrix::from_rows(rows))
}

fn minus_scalar(m: &IntMatrix, c: &BigInt) -> IntMatrix {
    let mut out = m.clone();
    for i in 0..m.size() {
        out.set(i, i, m.get(i, i) - c);
    }
    out
}

/// Checks that `a_{w0}^2` is central and acts on the `λ`-isotypic part by
/// `q^{f_λ}`: the product of `M - q^f` over the distinct exponents
/// vanishes and each eigenspace has dimension `sum (deg ψ_λ)^2` over the
/// `λ` with that exponent.
pub fn verify_springer(n: usize, q: u64) -> Result<SpringerReport, HeckeError> {
    if n > 5 {
        return Err(HeckeError::ScaleCap { n, cap: 5 });
    }
    let w0 = HeckeElement::basis(Permutation::longest(n), q)?;
    let sq = w0.mul(&w0)?;
    for i in 1..n {
        let s = HeckeElement::basis(Permutation::generator(n, i), q)?;
        if sq.mul(&s)? != s.mul(&sq)? {
            return Err(HeckeError::VerificationFailed(format!("a_w0^2 does not commute with a_s{i}")));
        }
    }
    let m = to_int_matrix(&regular_matrix(&sq)?)?;
    let size = m.size();
    let mut expected: BTreeMap<usize, usize> = BTreeMap::new();
    for lambda in partitions_of(n) {
        let d: usize = deg_psi(&lambda).try_into().expect("small degree");
        *expected.entry(lambda.f_exponent()).or_default() += d * d;
    }
    let eigen = |f: usize| num_traits::pow(BigInt::from(q), f);
    let mut product: Option<IntMatrix> = None;
    let mut spectrum = BTreeMap::new();
    for (&f, &dim) in &expected {
        let shifted = minus_scalar(&m, &eigen(f));
        let rows: Vec<Vec<BigRational>> = shifted
            .rows()
            .map(|r| r.iter().cloned().map(BigRational::from_integer).collect())
            .collect();
        let observed = size - rank_rational(&rows);
        spectrum.insert(f, (dim, observed));
        product = Some(match product {
            None => shifted,
            Some(p) => p.mul(&shifted),
        });
    }
    if let Some(p) = product {
        if p.rows().any(|r| r.iter().any(|x| !x.is_zero())) {
            return Err(HeckeError::VerificationFailed("annihilating product is nonzero".into()));
        }
    }
    if let Some((f, (want, got))) = spectrum.iter().find(|(_, (a, b))| a != b) {
        return Err(HeckeError::VerificationFailed(format!(
            "eigenvalue q^{f} has multiplicity {got}, expected {want}"
        )));
    }
    Ok(SpringerReport { n, q, spectrum, trace: m.trace() })
}

/// `e_μ u e_μ` in the group algebra, `e_μ` the averaged Young subgroup sum.
fn sandwich(mu: &[usize], u: &Permutation) -> HashMap<Permutation, BigRational> {
    let group = young_subgroup(mu);
    let weight = BigRational::new(BigInt::one(), BigInt::from(group.len() * group.len()));
    let mut out: HashMap<Permutation, BigRational> = HashMap::new();
    for x in &group {
        let xu = x.compose(u);
        for y in &group {
            *out.entry(xu.compose(y)).or_insert_with(BigRational::zero) += &weight;
        }
    }
    out
}

/// `φ_λ(e_μ u e_μ)`: the trace of left multiplication by `e_μ u e_μ` on
/// `C S_n e_λ`, computed as the trace of `z -> e_μ u e_μ z e_λ` on the whole
/// group algebra. `λ` may be any composition; one with a negative part
/// gives 0.
pub fn group_algebra_trace(mu: &[usize], u: &Permutation, lambda: &[i64]) -> Result<BigRational, HeckeError> {
    let n = u.n();
    if n > TRACE_CAP {
        return Err(HeckeError::ScaleCap { n, cap: TRACE_CAP });
    }
    if mu.iter().sum::<usize>() != n {
        return Err(HeckeError::BadComposition(mu.iter().map(|&x| x as i64).collect(), n));
    }
    if lambda.iter().sum::<i64>() != n as i64 {
        return Err(HeckeError::BadComposition(lambda.to_vec(), n));
    }
    if lambda.iter().any(|&x| x < 0) {
        return Ok(BigRational::zero());
    }
    let lam: Vec<usize> = lambda.iter().map(|&x| x as usize).collect();
    let order: usize = lam.iter().map(|&c| (1..=c).product::<usize>()).product();
    let a = sandwich(mu, u);
    let mut hits = BigRational::zero();
    for g in Permutation::all(n) {
        let g_inv = g.inverse();
        for (x, c) in &a {
            // coefficient of g in x g y needs y = g^-1 x^-1 g in S_λ
            let y = g_inv.compose(&x.inverse()).compose(&g);
            if y.in_young_subgroup(&lam) {
                hits += c;
            }
        }
    }
    Ok(hits / BigRational::from_integer(BigInt::from(order)))
}

/// `ψ_λ(e_μ u e_μ)` for the irreducible character, by the determinantal
/// expansion `det[φ_{λ_i - i + j}]` in the permutation characters.
pub fn psi_trace(mu: &[usize], u: &Permutation, lambda: &Partition) -> Result<BigRational, HeckeError> {
    let rows = lambda.len();
    let parts: Vec<i64> = lambda.parts().iter().map(|&x| x as i64).collect();
    let mut total = BigRational::zero();
    for sigma in Permutation::all(rows) {
        let comp: Vec<i64> = (0..rows).map(|i| parts[i] - i as i64 + sigma.apply(i) as i64).collect();
        let phi = group_algebra_trace(mu, u, &comp)?;
        if sigma.length() % 2 == 0 {
            total += phi;
        } else {
            total -= phi;
        }
    }
    Ok(total)
}

/// `u = (1, k+1, 2k+1)(2, k+2, 2k+2)...(k, 2k, 3k)` in `S_{3k}`.
pub fn rotation_element(k: usize) -> Permutation {
    let cycles: Vec<Vec<usize>> = (1..=k).map(|i| vec![i, k + i, 2 * k + i]).collect();
    let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
    Permutation::from_cycles(3 * k, &refs).expect("valid cycles")
}

/// Whether a rational is a nonnegative integer.
pub fn is_natural(x: &BigRational) -> bool {
    x.is_integer() && !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn reduced_words() {
        assert!(Permutation::identity(4).reduced_word().is_empty());
        assert_eq!(Permutation::generator(3, 1).reduced_word(), vec![1]);
        for n in 1..6 {
            for w in Permutation::all(n) {
                let word = w.reduced_word();
                assert_eq!(word.len(), w.length());
                let prod = word
                    .iter()
                    .fold(Permutation::identity(n), |acc, &i| acc.compose(&Permutation::generator(n, i)));
                assert_eq!(prod, w);
            }
        }
    }

    #[test]
    fn quadratic_relation() {
        let s = HeckeElement::basis(Permutation::generator(2, 1), 3).unwrap();
        let sq = s.mul(&s).unwrap();
        assert_eq!(sq.coeff(&Permutation::identity(2)), r(3));
        assert_eq!(sq.coeff(&Permutation::generator(2, 1)), r(2));
        let m = regular_matrix(&s).unwrap();
        assert_eq!(m, vec![vec![r(0), r(3)], vec![r(1), r(2)]]);
    }

    #[test]
    fn braid_relation_and_identity() {
        let g = |i| HeckeElement::basis(Permutation::generator(3, i), 2).unwrap();
        let lhs = g(1).mul(&g(2)).unwrap().mul(&g(1)).unwrap();
        let rhs = g(2).mul(&g(1)).unwrap().mul(&g(2)).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, HeckeElement::basis(Permutation::longest(3), 2).unwrap());
        let one = HeckeElement::one(3, 2).unwrap();
        assert_eq!(one.mul(&lhs).unwrap(), lhs);
        assert!(matches!(one.mul(&HeckeElement::one(3, 3).unwrap()), Err(HeckeError::MixedParameters(..))));
        assert!(matches!(HeckeElement::one(3, 6), Err(HeckeError::BadParameter(6))));
    }

    #[test]
    fn group_algebra_at_q_one() {
        for v in Permutation::all(4) {
            for w in Permutation::all(4) {
                let x = HeckeElement::basis(v.clone(), 1).unwrap();
                let y = HeckeElement::basis(w.clone(), 1).unwrap();
                assert_eq!(x.mul(&y).unwrap(), HeckeElement::basis(v.compose(&w), 1).unwrap());
            }
        }
    }

    #[test]
    fn springer_small() {
        let rep = verify_springer(2, 2).unwrap();
        assert_eq!(rep.spectrum, BTreeMap::from([(0, (1, 1)), (2, (1, 1))]));
        let rep = verify_springer(3, 3).unwrap();
        assert_eq!(rep.spectrum, BTreeMap::from([(0, (1, 1)), (3, (4, 4)), (6, (1, 1))]));
        assert_eq!(rep.trace, BigInt::from(1 + 4 * 27 + 729));
    }

    #[test]
    fn young_subgroups() {
        assert_eq!(young_subgroup(&[2, 2, 2]).len(), 8);
        assert_eq!(young_subgroup(&[3, 0, 1]).len(), 6);
        assert!(Permutation::generator(4, 1).in_young_subgroup(&[2, 2]));
        assert!(!Permutation::generator(4, 2).in_young_subgroup(&[2, 2]));
    }

    #[test]
    fn trivial_traces() {
        // φ of the identity is the dimension of the permutation module
        let id = Permutation::identity(4);
        assert_eq!(group_algebra_trace(&[1, 1, 1, 1], &id, &[2, 2]).unwrap(), r(6));
        assert_eq!(group_algebra_trace(&[4], &id, &[3, 1]).unwrap(), r(1));
        assert_eq!(group_algebra_trace(&[2, 2], &id, &[5, -1]).unwrap(), r(0));
        assert_eq!(psi_trace(&[1, 1, 1, 1], &id, &Partition::new(vec![2, 2])).unwrap(), r(2));
    }
}
