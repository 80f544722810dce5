//! Exact integer linear algebra: dense integer matrices and their
//! characteristic polynomials.

mod factor;
pub mod modp;

pub use factor::factor_monic;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::IntPoly;
use modp::{primes_below, primes_below_2_31, ModMatrix, Modulus};

/// Square integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            data: vec![BigInt::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn reduce(&self, md: &Modulus) -> ModMatrix {
        ModMatrix {
            n: self.n,
            data: self.data.iter().map(|x| md.from_big(x)).collect(),
        }
    }

    /// Upper bound in bits for the absolute value of every coefficient of
    /// the characteristic polynomial, from Hadamard's inequality applied to
    /// the principal minors: `|c_k| <= prod_i (1 + |row_i|_2)`.
    pub fn charpoly_coefficient_bits(&self) -> u64 {
        let mut bits = 0f64;
        for row in self.rows() {
            let sq: BigInt = row.iter().map(|x| x * x).sum();
            // ceil(sqrt) keeps the estimate an upper bound
            let mut s = sq.sqrt();
            if &s * &s < sq {
                s += 1;
            }
            bits += ((s + 1u32).bits() as f64).max(1.0);
        }
        bits.ceil() as u64 + 1
    }
}

/// Which algorithm produced a characteristic polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharpolyMethod {
    /// Hessenberg reduction modulo enough primes to exceed Hadamard's bound,
    /// then Chinese remaindering.
    Multimodular,
    /// Minimal polynomial from a Krylov sequence, confirmed to annihilate the
    /// matrix, factored, with multiplicities from kernel dimensions.
    MinimalPolynomial,
}

/// Matrices at most this size always go through the multimodular route.
const SMALL: usize = 96;
/// Krylov sequences longer than this abandon the minimal polynomial route.
const MAX_KRYLOV: usize = 64;
/// Number of random vectors the annihilator must kill.
const FREIVALDS_ROUNDS: usize = 3;

/// Characteristic polynomial `det(xI - M)`, low degree first.
pub fn charpoly(m: &IntMatrix) -> IntPoly {
    charpoly_with_method(m).0
}

pub fn charpoly_with_method(m: &IntMatrix) -> (IntPoly, CharpolyMethod) {
    if m.size() > SMALL {
        if let Some(p) = charpoly_minpoly(m) {
            return (p, CharpolyMethod::MinimalPolynomial);
        }
    }
    (charpoly_multimodular(m), CharpolyMethod::Multimodular)
}

/// Multimodular Hessenberg characteristic polynomial. Deterministic and
/// unconditionally correct, cubic cost per prime.
pub fn charpoly_multimodular(m: &IntMatrix) -> IntPoly {
    let n = m.size();
    if n == 0 {
        return IntPoly::one();
    }
    let need_bits = m.charpoly_coefficient_bits() + 1;
    let mut modulus_prod = BigInt::one();
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    for p in primes_below_2_31() {
        let md = Modulus::new(p);
        let cp = m.reduce(&md).charpoly(&md);
        crt_accumulate(&mut acc, &mut modulus_prod, &cp, &md);
        if modulus_prod.bits() > need_bits {
            break;
        }
    }
    let half = &modulus_prod >> 1;
    IntPoly::new(
        acc.into_iter()
            .map(|c| if c > half { c - &modulus_prod } else { c })
            .collect(),
    )
}

fn crt_accumulate(acc: &mut [BigInt], prod: &mut BigInt, residues: &[u64], md: &Modulus) {
    let p = BigInt::from(md.p());
    let inv = md.inv(md.from_big(prod));
    for (a, &r) in acc.iter_mut().zip(residues) {
        // a' = a + prod * ((r - a) / prod mod p)
        let diff = md.sub(r, md.from_big(a));
        let t = md.mul(diff, inv);
        *a += &*prod * BigInt::from(t);
    }
    *prod *= p;
}

/// Minimal polynomial route. Returns `None` whenever a step cannot be
/// completed, in which case the caller falls back to the multimodular route.
fn charpoly_minpoly(m: &IntMatrix) -> Option<IntPoly> {
    let n = m.size();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2a7a);
    let mut primes = primes_below_2_31().skip(7);
    let md = Modulus::new(primes.next().unwrap());
    let mb = m.reduce(&md);

    let start: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.random_range(1..1i64 << 20))).collect();
    let mut annihilator = vector_minpoly(m, &mb, &md, &start)?;

    // every random vector must be killed; otherwise enlarge by the lcm
    let mut rounds = 0;
    let mut enlargements = 0;
    while rounds < FREIVALDS_ROUNDS {
        let r: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.random_range(0..1i64 << 31))).collect();
        if apply_poly(m, &annihilator, &r).iter().all(Zero::is_zero) {
            rounds += 1;
            continue;
        }
        enlargements += 1;
        if enlargements > 4 {
            return None;
        }
        let other = vector_minpoly(m, &mb, &md, &r)?;
        let g = annihilator.gcd(&other);
        annihilator = (&annihilator * &other).exact_div_monic(&g)?;
        if annihilator.degree()? > MAX_KRYLOV {
            return None;
        }
        rounds = 0;
    }

    let factors = factor_monic(&annihilator)?;
    // kernel dimensions only need to be upper bounds, so primes small enough
    // for the deferred-reduction elimination are fine; an unlucky prime
    // shows up as a total above n
    let mut small_primes = primes_below(1 << 20);
    for _attempt in 0..3 {
        let md = Modulus::new(small_primes.next().unwrap());
        let mb = m.reduce(&md);
        let mut total = 0usize;
        let mut charpoly = IntPoly::one();
        let mut ok = true;
        for (g, e) in &factors {
            let coeffs: Vec<u64> = g.pow(*e as u64).coeffs().iter().map(|c| md.from_big(c)).collect();
            let nullity = n - mb.poly_eval(&coeffs, &md).rank(&md);
            let d = g.degree().unwrap();
            if nullity == 0 || !nullity.is_multiple_of(d) {
                ok = false;
                break;
            }
            total += nullity;
            charpoly = &charpoly * &g.pow((nullity / d) as u64);
        }
        if ok && total == n {
            // cheap independent consistency check on the trace
            if charpoly.coeff(n - 1) != -m.trace() {
                return None;
            }
            return Some(charpoly);
        }
    }
    None
}

/// `f(M) v` computed exactly by Horner's rule.
fn apply_poly(m: &IntMatrix, f: &IntPoly, v: &[BigInt]) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); v.len()];
    for c in f.coeffs().iter().rev() {
        acc = m.mul_vec(&acc);
        if !c.is_zero() {
            for (a, x) in acc.iter_mut().zip(v) {
                *a += c * x;
            }
        }
    }
    acc
}

/// Monic minimal polynomial of `v` with respect to `M`, found exactly over
/// Q. The degree is located modulo a prime and the relation is then solved
/// and checked in exact arithmetic.
fn vector_minpoly(m: &IntMatrix, mb: &ModMatrix, md: &Modulus, v: &[BigInt]) -> Option<IntPoly> {
    let n = m.size();
    // Krylov vectors modulo p, kept in echelon form alongside pivots
    let mut krylov_exact: Vec<Vec<BigInt>> = vec![v.to_vec()];
    let mut echelon: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut cur: Vec<u64> = v.iter().map(|x| md.from_big(x)).collect();
    loop {
        let mut w = cur.clone();
        for (piv, row) in &echelon {
            let f = w[*piv];
            if f != 0 {
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = md.sub(*x, md.mul(f, y));
                }
            }
        }
        let Some(piv) = w.iter().position(|&x| x != 0) else {
            break;
        };
        let inv = md.inv(w[piv]);
        w.iter_mut().for_each(|x| *x = md.mul(*x, inv));
        echelon.push((piv, w));
        if echelon.len() > MAX_KRYLOV {
            return None;
        }
        cur = (0..n)
            .map(|i| {
                let row = &mb.data[i * n..(i + 1) * n];
                row.iter()
                    .zip(&cur)
                    .fold(0u64, |acc, (&a, &b)| md.reduce(acc + a * b))
            })
            .collect();
        let next = m.mul_vec(krylov_exact.last().unwrap());
        krylov_exact.push(next);
    }
    let d = echelon.len();
    // rows where the first d Krylov vectors are independent modulo p, hence
    // independent over Q
    let rows = independent_rows(&krylov_exact[..d], md)?;
    let system: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|&r| {
            (0..d)
                .map(|j| BigRational::from_integer(krylov_exact[j][r].clone()))
                .chain(std::iter::once(BigRational::from_integer(
                    krylov_exact[d][r].clone(),
                )))
                .collect()
        })
        .collect();
    let sol = solve_rational(system)?;
    let mut coeffs = Vec::with_capacity(d + 1);
    for c in &sol {
        if !c.is_integer() {
            return None;
        }
        coeffs.push(-c.to_integer());
    }
    coeffs.push(BigInt::one());
    let f = IntPoly::new(coeffs);
    // exact check on every coordinate
    for r in 0..n {
        let mut s = krylov_exact[d][r].clone();
        for j in 0..d {
            s += f.coeff(j) * &krylov_exact[j][r];
        }
        if !s.is_zero() {
            return None;
        }
    }
    Some(f)
}

fn independent_rows(vectors: &[Vec<BigInt>], md: &Modulus) -> Option<Vec<usize>> {
    let d = vectors.len();
    if d == 0 {
        return Some(Vec::new());
    }
    let n = vectors[0].len();
    // columns are Krylov vectors; eliminate to find d pivot rows
    let mut rows: Vec<Vec<u64>> = (0..n)
        .map(|r| vectors.iter().map(|v| md.from_big(&v[r])).collect())
        .collect();
    let mut chosen = Vec::new();
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for (r, row) in rows.iter_mut().enumerate() {
        for (piv, b) in &basis {
            let f = row[*piv];
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(b) {
                    *x = md.sub(*x, md.mul(f, y));
                }
            }
        }
        if let Some(piv) = row.iter().position(|&x| x != 0) {
            let inv = md.inv(row[piv]);
            let normalised: Vec<u64> = row.iter().map(|&x| md.mul(x, inv)).collect();
            basis.push((piv, normalised));
            chosen.push(r);
            if chosen.len() == d {
                return Some(chosen);
            }
        }
    }
    None
}

/// Solves a square system given as augmented rows over Q.
fn solve_rational(mut a: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let d = a.len();
    for col in 0..d {
        let piv = (col..d).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..d {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[d].clone()).collect())
}

/// Exact rank over Q of a rational matrix given by rows.
pub fn rank_rational(rows: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let (nr, nc) = (a.len(), a.first().map_or(0, Vec::len));
    let mut rank = 0;
    for col in 0..nc {
        let Some(piv) = (rank..nr).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(piv, rank);
        let pivot_row = a[rank].clone();
        for r in rank + 1..nr {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot_row[col];
            for (x, y) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

/// `det(I - uM)`, the coefficient reversal of the characteristic polynomial.
pub fn det_one_minus_u(m: &IntMatrix) -> IntPoly {
    charpoly(m).reversed_to(m.size())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_graph(n: usize) -> IntMatrix {
        IntMatrix::from_i64_rows(
            &(0..n)
                .map(|i| (0..n).map(|j| i64::from(i != j)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn triangle_inverse_zeta() {
        assert_eq!(det_one_minus_u(&complete_graph(3)), IntPoly::from_i64s(&[1, 0, -3, -2]));
    }

    #[test]
    fn multimodular_matches_expansion_for_small_matrix() {
        let m = IntMatrix::from_i64_rows(&[vec![2, -1, 0], vec![5, 3, 7], vec![-4, 0, 1]]);
        // trace 6, principal 2x2 minors 11 + 2 + 3
        let cp = charpoly_multimodular(&m);
        assert_eq!(cp.coeff(3), BigInt::one());
        assert_eq!(cp.coeff(2), BigInt::from(-6));
        assert_eq!(cp.coeff(1), BigInt::from(16));
        // det M = 2(3 - 0) + 1(5 + 28) + 0 = 39
        assert_eq!(cp.coeff(0), BigInt::from(-39));
    }

    #[test]
    fn minpoly_route_on_large_complete_graph() {
        // K_n has eigenvalues n-1 (once) and -1 (n-1 times)
        let n = 150;
        let (cp, method) = charpoly_with_method(&complete_graph(n));
        assert_eq!(method, CharpolyMethod::MinimalPolynomial);
        let expect = IntPoly::from_i64s(&[-(n as i64 - 1), 1]) * IntPoly::from_i64s(&[1, 1]).pow(n as u64 - 1);
        assert_eq!(cp, expect);
    }

    #[test]
    fn routes_agree_on_structured_matrix() {
        let n = 120;
        let base = complete_graph(n);
        let sq = base.mul(&base);
        assert_eq!(charpoly_minpoly(&sq).unwrap(), charpoly_multimodular(&sq));
    }
}
