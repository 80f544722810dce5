//! Integer partitions, dominance, q-analogues and Kostka numbers.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::IntPoly;

/// Largest size accepted by the tableau enumeration.
pub const SSYT_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("shape {0:?} is not valid here")]
    BadShape(Vec<usize>),
    #[error("size {0} exceeds the tableau enumeration cap {SSYT_CAP}")]
    CapExceeded(usize),
    #[error("sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
}

/// A partition: weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts and drops zeros, so any composition is accepted.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part `i` (zero-based), zero past the length.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Self {
        let cols = self.part(0);
        Partition((1..=cols).map(|c| self.0.iter().filter(|&&p| p >= c).count()).collect())
    }

    /// `λ ⊵ μ`: every partial sum of λ is at least that of μ.
    pub fn dominates(&self, other: &Self) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let (mut a, mut b) = (0, 0);
        for i in 0..self.len().max(other.len()) {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return false;
            }
        }
        true
    }

    /// Number of pairs of boxes in a common row, `sum C(λ_i, 2)`.
    pub fn wt_r(&self) -> usize {
        self.0.iter().map(|&p| p * (p.saturating_sub(1)) / 2).sum()
    }

    /// Number of pairs of boxes in a common column.
    pub fn wt_c(&self) -> usize {
        self.conjugate().wt_r()
    }

    /// Hook lengths, row by row.
    pub fn hooks(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.size());
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row {
                out.push((row - j - 1) + (conj.part(j) - i - 1) + 1);
            }
        }
        out
    }

    /// `f_λ = n(n-1)/2 + wt_r(λ) - wt_c(λ)`.
    pub fn f_exponent(&self) -> usize {
        let n = self.size();
        n * (n.saturating_sub(1)) / 2 + self.wt_r() - self.wt_c()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// All partitions of `n` in decreasing lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// The q-integer `[n]_q = 1 + q + ... + q^{n-1}` as a polynomial in q.
pub fn q_integer(n: usize) -> IntPoly {
    IntPoly::new(vec![BigInt::one(); n])
}

pub fn q_factorial(n: usize) -> IntPoly {
    (1..=n).fold(IntPoly::one(), |acc, k| &acc * &q_integer(k))
}

/// Gaussian binomial `[n, k]_q`, zero outside `0 <= k <= n`.
pub fn q_binomial(n: i64, k: i64) -> IntPoly {
    if n < 0 || k < 0 || k > n {
        return IntPoly::zero();
    }
    let (n, k) = (n as usize, k as usize);
    q_multinomial(&[k as i64, (n - k) as i64])
}

/// q-multinomial `[n]_q! / prod [a_i]_q!`, zero if some part is negative.
pub fn q_multinomial(parts: &[i64]) -> IntPoly {
    if parts.iter().any(|&a| a < 0) {
        return IntPoly::zero();
    }
    let n: i64 = parts.iter().sum();
    let mut num = q_factorial(n as usize);
    for &a in parts {
        for k in 1..=a as usize {
            num = num.exact_div_monic(&q_integer(k)).expect("q-multinomial is a polynomial");
        }
    }
    num
}

/// Degree of the unipotent representation attached to λ, as a polynomial
/// in q: `q^{wt_c(λ)} [n]_q! / prod_b [h(b)]_q`.
pub fn d_lambda(lambda: &Partition) -> IntPoly {
    let mut num = q_factorial(lambda.size());
    for h in lambda.hooks() {
        num = num.exact_div_monic(&q_integer(h)).expect("q-hook formula is a polynomial");
    }
    num.shift(lambda.wt_c())
}

/// Number of standard Young tableaux of shape λ, `d_λ` at q = 1.
pub fn deg_psi(lambda: &Partition) -> BigInt {
    d_lambda(lambda).eval(&BigInt::one())
}

/// Kostka number by enumerating semistandard tableaux of shape λ and
/// content μ (μ may be any composition). Size capped at [`SSYT_CAP`].
pub fn kostka_ssyt(lambda: &Partition, mu: &[usize]) -> Result<u64, PartitionError> {
    let n = lambda.size();
    let m: usize = mu.iter().sum();
    if n != m {
        return Err(PartitionError::SizeMismatch(n, m));
    }
    if n > SSYT_CAP {
        return Err(PartitionError::CapExceeded(n));
    }
    let shape = lambda.parts().to_vec();
    let mut remaining = mu.to_vec();
    let mut grid: Vec<Vec<usize>> = shape.iter().map(|&r| vec![0; r]).collect();
    Ok(fill(&shape, &mut grid, &mut remaining, 0, 0))
}

fn fill(shape: &[usize], grid: &mut Vec<Vec<usize>>, remaining: &mut [usize], row: usize, col: usize) -> u64 {
    if row == shape.len() {
        return 1;
    }
    let (nr, nc) = if col + 1 == shape[row] { (row + 1, 0) } else { (row, col + 1) };
    // rows weakly increase, columns strictly increase
    let lo_row = if col > 0 { grid[row][col - 1] } else { 0 };
    let lo_col = if row > 0 { grid[row - 1][col] + 1 } else { 0 };
    let mut total = 0;
    for v in lo_row.max(lo_col)..remaining.len() {
        if remaining[v] == 0 {
            continue;
        }
        remaining[v] -= 1;
        grid[row][col] = v;
        total += fill(shape, grid, remaining, nr, nc);
        remaining[v] += 1;
    }
    total
}

/// Closed form for Kostka numbers with at most three rows:
/// `min(x-i, j-z) - max(0, j-y, y-i) + 1` for λ = (x, y, z), μ = (i, j, k).
/// Returns 0 when λ does not dominate μ.
pub fn kostka_closed3(lambda: &Partition, mu: &Partition) -> Result<u64, PartitionError> {
    if lambda.len() > 3 {
        return Err(PartitionError::BadShape(lambda.parts().to_vec()));
    }
    if mu.len() > 3 {
        return Err(PartitionError::BadShape(mu.parts().to_vec()));
    }
    if lambda.size() != mu.size() {
        return Err(PartitionError::SizeMismatch(lambda.size(), mu.size()));
    }
    if !lambda.dominates(mu) {
        return Ok(0);
    }
    let (x, y, z) = (lambda.part(0) as i64, lambda.part(1) as i64, lambda.part(2) as i64);
    let (i, j) = (mu.part(0) as i64, mu.part(1) as i64);
    let k = (x - i).min(j - z) - 0i64.max(j - y).max(y - i) + 1;
    Ok(k.max(0) as u64)
}

/// Evaluates a polynomial in q at an integer.
pub fn at(p: &IntPoly, q: u64) -> BigInt {
    p.eval(&BigInt::from(q))
}

/// `d_λ(q)` as an integer, for a concrete q.
pub fn d_lambda_at(lambda: &Partition, q: u64) -> BigInt {
    at(&d_lambda(lambda), q)
}

/// Gaussian binomial evaluated at q, zero outside range.
pub fn q_binomial_at(n: i64, k: i64, q: u64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    at(&q_binomial(n, k), q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn partitions_of_four_in_order() {
        let ps: Vec<Vec<usize>> = partitions_of(4).into_iter().map(|p| p.0).collect();
        assert_eq!(ps, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn weights_and_exponents() {
        assert_eq!(p(&[3, 1]).wt_r(), 3);
        assert_eq!(p(&[3, 1]).wt_c(), 1);
        assert_eq!(p(&[2, 1]).f_exponent(), 3);
        for n in 1..7 {
            assert_eq!(p(&[n]).f_exponent(), n * n - n);
            assert_eq!(Partition::new(vec![1; n]).f_exponent(), 0);
        }
    }

    #[test]
    fn d_lambda_small_cases() {
        assert_eq!(d_lambda(&p(&[1, 1, 1])), IntPoly::from_i64s(&[0, 0, 0, 1]));
        for n in 2..8 {
            // d_(n-1,1) = q [n-1]_q
            assert_eq!(d_lambda(&p(&[n - 1, 1])), q_integer(n - 1).shift(1));
        }
        assert_eq!(d_lambda_at(&p(&[2, 2]), 2), BigInt::from(20));
        assert_eq!(deg_psi(&p(&[3, 2, 1])), BigInt::from(16));
    }

    #[test]
    fn q_binomials() {
        assert_eq!(q_binomial(4, 2), IntPoly::from_i64s(&[1, 1, 2, 1, 1]));
        assert_eq!(q_binomial(3, -1), IntPoly::zero());
        assert_eq!(q_multinomial(&[1, -1, 2]), IntPoly::zero());
        assert_eq!(q_binomial_at(5, 2, 3), BigInt::from(1210));
    }

    #[test]
    fn kostka_examples() {
        assert_eq!(kostka_ssyt(&p(&[3, 1]), &[2, 1, 1]).unwrap(), 2);
        assert_eq!(kostka_ssyt(&p(&[2, 2]), &[2, 1, 1]).unwrap(), 1);
        assert_eq!(kostka_closed3(&p(&[10, 2]), &p(&[6, 4, 2])).unwrap(), 3);
        assert_eq!(kostka_ssyt(&p(&[10, 2]), &[6, 4, 2]).unwrap(), 3);
        assert!(matches!(kostka_ssyt(&p(&[13]), &[13]), Err(PartitionError::CapExceeded(13))));
        assert!(matches!(
            kostka_closed3(&p(&[1, 1, 1, 1]), &p(&[1, 1, 1, 1])),
            Err(PartitionError::BadShape(_))
        ));
    }
}
