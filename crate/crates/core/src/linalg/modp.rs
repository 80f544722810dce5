//! Dense linear algebra over word-sized prime fields.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// A prime below 2^31 with a precomputed Barrett constant.
#[derive(Debug, Clone, Copy)]
pub struct Modulus {
    p: u64,
    barrett: u64,
}

impl Modulus {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 31), "modulus must be an odd prime below 2^31");
        Modulus {
            p,
            barrett: ((1u128 << 64) / p as u128) as u64,
        }
    }

    /// Whether `n` unreduced products of residues fit in a u64.
    #[inline]
    fn is_lazy(&self, n: usize) -> bool {
        (self.p as u128 * self.p as u128) * (n as u128 + 1) < 1u128 << 64
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Reduces any `x < 2^64`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn pow(&self, mut a: u64, mut k: u64) -> u64 {
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    pub fn from_big(&self, x: &BigInt) -> u64 {
        if let Some(small) = x.to_i64() {
            return self.from_i64(small);
        }
        let r = x % BigInt::from(self.p);
        let r = r.to_i64().expect("residue fits in i64");
        if r < 0 {
            (r + self.p as i64) as u64
        } else {
            r as u64
        }
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn to_signed(&self, x: u64) -> i64 {
        if x > self.p / 2 {
            x as i64 - self.p as i64
        } else {
            x as i64
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut k: u64| {
        let mut acc = 1u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = mulmod(acc, a);
            }
            a = mulmod(a, a);
            k >>= 1;
        }
        acc
    };
    // deterministic witness set for 64-bit integers
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^31 in decreasing order.
pub fn primes_below_2_31() -> impl Iterator<Item = u64> {
    primes_below(1 << 31)
}

/// Odd primes below `bound` in decreasing order.
pub fn primes_below(bound: u64) -> impl Iterator<Item = u64> {
    (3..bound).rev().filter(|&n| n % 2 == 1 && is_prime(n))
}

/// Row-major dense matrix over Z/p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    pub n: usize,
    pub data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(n: usize) -> Self {
        ModMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &Self, md: &Modulus) -> Self {
        let n = self.n;
        if md.is_lazy(n) {
            return self.mul_lazy(other, md);
        }
        let mut out = vec![0u64; n * n];
        let mut acc = vec![0u64; n];
        for i in 0..n {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (x, &b) in acc.iter_mut().zip(row) {
                    *x = md.reduce(*x + a * b);
                }
            }
            out[i * n..(i + 1) * n].copy_from_slice(&acc);
        }
        ModMatrix { n, data: out }
    }

    /// Products of residues below 2^20 can be summed n at a time in a u64
    /// without reduction.
    fn mul_lazy(&self, other: &Self, md: &Modulus) -> Self {
        let n = self.n;
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            let acc = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (x, &b) in acc.iter_mut().zip(row) {
                    *x += a * b;
                }
            }
            acc.iter_mut().for_each(|x| *x = md.reduce(*x));
        }
        ModMatrix { n, data: out }
    }

    /// `self + c * I`.
    pub fn add_scalar(&self, c: u64, md: &Modulus) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] = md.add(m.data[i * self.n + i], c);
        }
        m
    }

    /// `sum_k coeffs[k] * self^k` by Horner's rule.
    pub fn poly_eval(&self, coeffs: &[u64], md: &Modulus) -> Self {
        let mut acc = ModMatrix::zeros(self.n);
        for &c in coeffs.iter().rev() {
            acc = acc.mul(self, md).add_scalar(c, md);
        }
        acc
    }

    pub fn rank(&self, md: &Modulus) -> usize {
        let n = self.n;
        if md.is_lazy(n) {
            return self.rank_lazy(md);
        }
        let mut a = self.data.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| a[r * n + col] != 0) else {
                continue;
            };
            if piv != rank {
                for j in col..n {
                    a.swap(piv * n + j, rank * n + j);
                }
            }
            let inv = md.inv(a[rank * n + col]);
            for r in rank + 1..n {
                let f = a[r * n + col];
                if f == 0 {
                    continue;
                }
                let f = md.mul(f, inv);
                let negf = md.p() - f;
                let (top, bottom) = a.split_at_mut(r * n);
                let src = &top[rank * n + col..rank * n + n];
                for (x, &y) in bottom[col..n].iter_mut().zip(src) {
                    *x = md.reduce(*x + negf * y);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Gaussian elimination with deferred reduction: entries are reduced
    /// only when their row becomes the pivot row or their column the pivot
    /// column, which is sound while `n * p^2 < 2^64`.
    fn rank_lazy(&self, md: &Modulus) -> usize {
        let n = self.n;
        let p = md.p();
        let mut a = self.data.clone();
        let mut rank = 0;
        for col in 0..n {
            let mut piv = None;
            for r in rank..n {
                let x = md.reduce(a[r * n + col]);
                a[r * n + col] = x;
                if x != 0 && piv.is_none() {
                    piv = Some(r);
                }
            }
            let Some(piv) = piv else {
                continue;
            };
            if piv != rank {
                for j in col..n {
                    a.swap(piv * n + j, rank * n + j);
                }
            }
            for j in col..n {
                a[rank * n + j] = md.reduce(a[rank * n + j]);
            }
            let inv = md.inv(a[rank * n + col]);
            for r in rank + 1..n {
                let f = a[r * n + col];
                if f == 0 {
                    continue;
                }
                let negf = p - md.mul(f, inv);
                let (top, bottom) = a.split_at_mut(r * n);
                let src = &top[rank * n + col..rank * n + n];
                for (x, &y) in bottom[col..n].iter_mut().zip(src) {
                    *x += negf * y;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Characteristic polynomial `det(xI - M)`, low degree first, via
    /// reduction to Hessenberg form.
    pub fn charpoly(&self, md: &Modulus) -> Vec<u64> {
        let n = self.n;
        let mut h = self.data.clone();
        for m in 1..n.saturating_sub(1) {
            let col = m - 1;
            let Some(piv) = (m..n).find(|&i| h[i * n + col] != 0) else {
                continue;
            };
            if piv != m {
                for j in 0..n {
                    h.swap(piv * n + j, m * n + j);
                }
                for i in 0..n {
                    h.swap(i * n + piv, i * n + m);
                }
            }
            let inv = md.inv(h[m * n + col]);
            for i in m + 1..n {
                let f = h[i * n + col];
                if f == 0 {
                    continue;
                }
                let u = md.mul(f, inv);
                let negu = md.p() - u;
                // row_i -= u * row_m
                for j in 0..n {
                    let y = h[m * n + j];
                    h[i * n + j] = md.reduce(h[i * n + j] + negu * y);
                }
                // col_m += u * col_i
                for r in 0..n {
                    let y = h[r * n + i];
                    h[r * n + m] = md.reduce(h[r * n + m] + u * y);
                }
            }
        }
        // p_k is the characteristic polynomial of the leading k x k block
        let mut polys: Vec<Vec<u64>> = vec![vec![1]];
        for k in 0..n {
            let mut next = vec![0u64; k + 2];
            let prev = &polys[k];
            let hkk = h[k * n + k];
            for (d, &c) in prev.iter().enumerate() {
                next[d + 1] = md.add(next[d + 1], c);
                next[d] = md.sub(next[d], md.mul(hkk, c));
            }
            let mut t = 1u64;
            for i in 1..=k {
                t = md.mul(t, h[(k - i + 1) * n + (k - i)]);
                if t == 0 {
                    break;
                }
                let coef = md.mul(t, h[(k - i) * n + k]);
                if coef == 0 {
                    continue;
                }
                for (d, &c) in polys[k - i].iter().enumerate() {
                    next[d] = md.sub(next[d], md.mul(coef, c));
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }
}
