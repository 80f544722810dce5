//! Finite fields GF(q) for prime powers q up to 2^16.
//!
//! Elements are the integers `0..q`. For q = p^e an element encodes the
//! coefficient vector of its polynomial representative packed in base p, with
//! the constant coefficient in the least significant digit. Multiplication
//! goes through discrete log tables; addition is digit-wise mod p (tabulated
//! when q is small).

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} exceeds the supported cap {MAX_ORDER}")]
    CapExceeded(u64),
    #[error("division by zero in GF({0})")]
    DivisionByZero(u32),
}

/// Splits `q` as `p^e`, or returns `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // q itself is prime
        return Some((q, 1));
    }
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

/// A finite field with precomputed arithmetic tables.
#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, low degree first, length e + 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u16>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}
impl Eq for Field {}

impl Field {
    pub fn new(q: u64) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > MAX_ORDER as u64 {
            return Err(FieldError::CapExceeded(q));
        }
        let (p, q) = (p as u32, q as u32);
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, e)
        };
        let mut field = Field {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add: None,
        };
        if q <= 256 {
            let mut add = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = field.add_digits(a, b) as u16;
                }
            }
            field.add = Some(add);
        }
        field.build_log_tables();
        Ok(field)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Monic modulus polynomial, coefficients low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    /// Polynomial product reduced modulo the field modulus; used only to
    /// build the log tables.
    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let (p, e) = (self.p as u64, self.e as usize);
        let digits = |mut x: u32| {
            let mut d = vec![0u64; e];
            for slot in d.iter_mut() {
                *slot = (x % self.p) as u64;
                x /= self.p;
            }
            d
        };
        let (da, db) = (digits(a), digits(b));
        let mut prod = vec![0u64; 2 * e];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for k in (e..2 * e).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (j, &m) in self.modulus.iter().enumerate().take(e) {
                prod[k - e + j] = (prod[k - e + j] + (p - c) * m as u64) % p;
            }
            prod[k] = 0;
        }
        prod[..e].iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32
    }

    fn build_log_tables(&mut self) {
        let n = self.q - 1;
        let factors = distinct_prime_factors(n);
        let generator = (1..self.q)
            .find(|&g| factors.iter().all(|&f| self.pow_poly(g, (n / f) as u64) != 1))
            .expect("the multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1;
        for i in 0..n {
            exp[i as usize] = x;
            exp[(i + n) as usize] = x;
            log[x as usize] = i;
            x = self.mul_poly(x, generator);
        }
        self.exp = exp;
        self.log = log;
    }

    fn pow_poly(&self, mut base: u32, mut k: u64) -> u32 {
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            k >>= 1;
        }
        acc
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[(a * self.q + b) as usize] as u32,
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            return (self.p - a) % self.p;
        }
        let (mut x, mut out, mut place) = (a, 0, 1);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero(self.q));
        }
        let n = self.q - 1;
        Ok(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (k % n)) % n) as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}

fn distinct_prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Remainder of `a` modulo the monic `m` over F_p, low degree first.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (j, &mj) in m.iter().enumerate() {
                r[shift + j] = (r[shift + j] + (p - c) * mj % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Monic polynomials of degree `d` over F_p in increasing order, comparing
/// coefficients from the constant term upwards.
fn monic_polys(p: u32, d: u32) -> impl Iterator<Item = Vec<u32>> {
    (0..p.pow(d)).map(move |mut idx| {
        let mut c = Vec::with_capacity(d as usize + 1);
        // the constant term varies slowest
        let mut digits = vec![0; d as usize];
        for slot in digits.iter_mut().rev() {
            *slot = idx % p;
            idx /= p;
        }
        c.extend(digits);
        c.push(1);
        c
    })
}

/// Lexicographically smallest monic irreducible polynomial of degree `e`
/// over F_p, coefficients compared from the constant term upwards.
pub fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    monic_polys(p, e)
        .find(|f| {
            (1..=e / 2).all(|d| monic_polys(p, d).all(|g| poly_rem(f, &g, p).iter().any(|&c| c != 0)))
        })
        .expect("an irreducible polynomial exists in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_prime_powers() {
        assert_eq!(Field::new(1).unwrap_err(), FieldError::NotPrimePower(1));
        assert_eq!(Field::new(6).unwrap_err(), FieldError::NotPrimePower(6));
        assert_eq!(Field::new(12).unwrap_err(), FieldError::NotPrimePower(12));
        assert_eq!(
            Field::new(1 << 17).unwrap_err(),
            FieldError::CapExceeded(1 << 17)
        );
    }

    #[test]
    fn gf4_uses_x2_x_1() {
        let f = Field::new(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // x * x = x + 1
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.add(2, 3), 1);
    }

    #[test]
    fn gf9_modulus_and_inverse() {
        let f = Field::new(9).unwrap();
        // x^2 + 1 is the smallest irreducible quadratic over F_3
        assert_eq!(f.modulus(), &[1, 0, 1]);
        for a in 1..9 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.inv(0).unwrap_err(), FieldError::DivisionByZero(9));
    }

    #[test]
    fn field_axioms_small_orders() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32] {
            let f = Field::new(q).unwrap();
            let q = q as u32;
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.mul(a, 1), a);
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in [0, 1, q - 1] {
                        let lhs = f.mul(a, f.add(b, c));
                        let rhs = f.add(f.mul(a, b), f.mul(a, c));
                        assert_eq!(lhs, rhs, "distributivity in GF({q})");
                    }
                }
            }
        }
    }

    #[test]
    fn large_field_without_add_table() {
        let f = Field::new(1 << 16).unwrap();
        let a = 0x1234;
        assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        assert_eq!(f.add(a, a), 0);
        let g = Field::new(65521).unwrap();
        assert_eq!(g.mul(65520, 65520), 1);
    }
}
