//! Closed-form inverse zeta functions of the X0 and X2 components, of the
//! whole building, and of products of buildings.
//!
//! A [`FactoredZeta`] is a multiset of [`OrbitFactor`]s. Each factor is an
//! integral polynomial whose reciprocal roots form one Galois orbit of
//! numbers `ζ q^r`, so the polynomial form and the eigenvalue view are two
//! readings of the same data.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::building::{class_triple, mdim_classes};
use crate::gf::prime_power;
use crate::partition::{d_lambda_at, kostka_closed3, partitions_of, q_binomial_at, Partition};
use crate::poly::IntPoly;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("n = {n}, k = {k} is the self-opposite class; use the special formula")]
    SpecialCaseRequired { n: usize, k: usize },
    #[error("n = {n} is not divisible by {by}")]
    BadParity { n: usize, by: usize },
    #[error("invalid class parameters {0:?} for n = {1}")]
    BadClass(Vec<usize>, usize),
    #[error("eigenvalues do not pair into integral factors: {0}")]
    ExpansionNotIntegral(String),
    #[error("multiplicity {0} does not fit in 64 bits")]
    Overflow(BigInt),
    #[error("inconsistent multiplicity data: {0}")]
    Inconsistent(String),
}

/// `ζ q^r` with `ζ = exp(2πi a/t)`, `a/t` reduced and in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraicScalar {
    pub q_exponent: Rational,
    pub unity: Rational,
}

impl AlgebraicScalar {
    pub fn new(unity: Rational, q_exponent: Rational) -> Self {
        let frac = unity - unity.floor();
        AlgebraicScalar { q_exponent, unity: frac }
    }

    pub fn unity_num(&self) -> i64 {
        *self.unity.numer()
    }

    pub fn unity_den(&self) -> i64 {
        *self.unity.denom()
    }

    /// Multiplicative order of the root of unity.
    pub fn unity_order(&self) -> i64 {
        self.unity_den()
    }

    pub fn mul(&self, other: &Self) -> Self {
        AlgebraicScalar::new(self.unity + other.unity, self.q_exponent + other.q_exponent)
    }
}

impl fmt::Display for AlgebraicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unity.is_zero() {
            write!(f, "q^{}", self.q_exponent)
        } else {
            write!(f, "e(2pi i {})·q^{}", self.unity, self.q_exponent)
        }
    }
}

/// A factor whose reciprocal roots form one Galois orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitFactor {
    /// `1 - sign·q^e·u^m`, with `sign` either 1 or -1.
    Binomial { sign: i8, e: u64, m: u64 },
    /// `1 + q^e u^m + q^{2e} u^{2m}`.
    Trinomial { e: u64, m: u64 },
}

impl OrbitFactor {
    fn e_m(&self) -> (u64, u64) {
        match *self {
            OrbitFactor::Binomial { e, m, .. } | OrbitFactor::Trinomial { e, m } => (e, m),
        }
    }

    /// The common q-exponent `e/m` of the reciprocal roots.
    pub fn q_exponent(&self) -> Rational {
        let (e, m) = self.e_m();
        Rational::new(e as i64, m as i64)
    }

    pub fn degree(&self) -> u64 {
        match *self {
            OrbitFactor::Binomial { m, .. } => m,
            OrbitFactor::Trinomial { m, .. } => 2 * m,
        }
    }

    /// Unity parts of the reciprocal roots.
    pub fn unities(&self) -> Vec<Rational> {
        match *self {
            OrbitFactor::Binomial { sign, m, .. } => {
                let m = m as i64;
                let shift = if sign < 0 { 1 } else { 0 };
                (0..m).map(|a| Rational::new(2 * a + shift, 2 * m)).collect()
            }
            OrbitFactor::Trinomial { m, .. } => {
                let m = m as i64;
                let mut v: Vec<Rational> = (0..m)
                    .flat_map(|a| [Rational::new(3 * a + 1, 3 * m), Rational::new(3 * a + 2, 3 * m)])
                    .collect();
                v.sort();
                v
            }
        }
    }

    pub fn eigenvalues(&self) -> Vec<AlgebraicScalar> {
        let r = self.q_exponent();
        self.unities().into_iter().map(|z| AlgebraicScalar::new(z, r)).collect()
    }

    pub fn poly(&self, q: u64) -> IntPoly {
        let (e, m) = self.e_m();
        let c = num_traits::pow(BigInt::from(q), e as usize);
        let m = m as usize;
        match *self {
            OrbitFactor::Binomial { sign, .. } => {
                let c = if sign < 0 { c } else { -c };
                &IntPoly::one() + &IntPoly::monomial(c, m)
            }
            OrbitFactor::Trinomial { .. } => {
                let mut coeffs = vec![BigInt::zero(); 2 * m + 1];
                coeffs[0] = BigInt::one();
                coeffs[m] = c.clone();
                coeffs[2 * m] = &c * &c;
                IntPoly::new(coeffs)
            }
        }
    }

    /// `factor^k`, using the binomial theorem for two-term factors.
    pub fn poly_pow(&self, q: u64, k: u64) -> IntPoly {
        match self {
            OrbitFactor::Binomial { .. } => self.poly_pow_truncated(q, k, usize::MAX),
            OrbitFactor::Trinomial { .. } => self.poly(q).pow(k),
        }
    }

    /// `factor^k` modulo `u^{max_deg + 1}`.
    pub fn poly_pow_truncated(&self, q: u64, k: u64, max_deg: usize) -> IntPoly {
        match *self {
            OrbitFactor::Binomial { sign, e, m } => {
                let step = num_traits::pow(BigInt::from(q), e as usize);
                let step = if sign < 0 { step } else { -step };
                let m = m as usize;
                let terms = k.min((max_deg / m) as u64);
                let mut coeffs = vec![BigInt::zero(); m * terms as usize + 1];
                let mut binom = BigInt::one();
                let mut power = BigInt::one();
                for i in 0..=terms {
                    coeffs[m * i as usize] = &binom * &power;
                    binom = binom * BigInt::from(k - i) / BigInt::from(i + 1);
                    power *= &step;
                }
                IntPoly::new(coeffs)
            }
            OrbitFactor::Trinomial { .. } => {
                let mut acc = IntPoly::one();
                let mut base = self.poly(q).truncated(max_deg);
                let mut k = k;
                while k > 0 {
                    if k & 1 == 1 {
                        acc = acc.mul_truncated(&base, max_deg);
                    }
                    k >>= 1;
                    if k > 0 {
                        base = base.mul_truncated(&base, max_deg);
                    }
                }
                acc
            }
        }
    }

    /// `sum λ^l` over the reciprocal roots.
    pub fn power_sum(&self, q: u64, l: u64) -> BigInt {
        let (e, m) = self.e_m();
        if !l.is_multiple_of(m) {
            return BigInt::zero();
        }
        let t = l / m;
        let base = num_traits::pow(BigInt::from(q), (e * t) as usize) * BigInt::from(m);
        match *self {
            OrbitFactor::Binomial { sign, .. } => {
                if sign < 0 && t % 2 == 1 {
                    -base
                } else {
                    base
                }
            }
            OrbitFactor::Trinomial { .. } => {
                if t.is_multiple_of(3) {
                    base * 2
                } else {
                    -base
                }
            }
        }
    }

    /// The factor after substituting `u -> u^k`.
    pub fn substitute(&self, k: u64) -> Self {
        match *self {
            OrbitFactor::Binomial { sign, e, m } => OrbitFactor::Binomial { sign, e, m: m * k },
            OrbitFactor::Trinomial { e, m } => OrbitFactor::Trinomial { e, m: m * k },
        }
    }

    fn sort_key(&self) -> (Rational, u64, u8, i8) {
        match *self {
            OrbitFactor::Binomial { sign, m, .. } => (self.q_exponent(), m, 0, -sign),
            OrbitFactor::Trinomial { m, .. } => (self.q_exponent(), m, 1, 0),
        }
    }
}

/// A product of orbit factors with multiplicities, for a fixed q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredZeta {
    q: u64,
    factors: Vec<(OrbitFactor, u64)>,
}

impl FactoredZeta {
    /// The constant 1.
    pub fn one(q: u64) -> Self {
        FactoredZeta { q, factors: Vec::new() }
    }

    pub fn from_factors(q: u64, factors: impl IntoIterator<Item = (OrbitFactor, u64)>) -> Self {
        let mut merged: BTreeMap<((Rational, u64, u8, i8), OrbitFactor), u64> = BTreeMap::new();
        for (f, k) in factors {
            if k > 0 {
                *merged.entry((f.sort_key(), f)).or_default() += k;
            }
        }
        FactoredZeta { q, factors: merged.into_iter().map(|((_, f), k)| (f, k)).collect() }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Orbit factors in canonical order, by q-exponent then shape.
    pub fn factors(&self) -> &[(OrbitFactor, u64)] {
        &self.factors
    }

    /// The factors as integer polynomials.
    pub fn factor_polys(&self) -> Vec<(IntPoly, u64)> {
        self.factors.iter().map(|(f, k)| (f.poly(self.q), *k)).collect()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|(f, k)| f.degree() * k).sum()
    }

    pub fn eigenvalue_view(&self) -> Vec<(AlgebraicScalar, u64)> {
        let mut view: BTreeMap<AlgebraicScalar, u64> = BTreeMap::new();
        for (f, k) in &self.factors {
            for z in f.eigenvalues() {
                *view.entry(z).or_default() += k;
            }
        }
        view.into_iter().collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q, "factorizations over different q");
        FactoredZeta::from_factors(self.q, self.factors.iter().chain(&other.factors).copied())
    }

    pub fn substitute(&self, k: u64) -> Self {
        FactoredZeta::from_factors(self.q, self.factors.iter().map(|(f, m)| (f.substitute(k), *m)))
    }

    pub fn expand(&self) -> IntPoly {
        self.factors
            .iter()
            .map(|(f, k)| f.poly_pow(self.q, *k))
            .fold(IntPoly::one(), |acc, p| &acc * &p)
    }

    /// The expansion modulo `u^{max_deg + 1}`.
    pub fn expand_truncated(&self, max_deg: usize) -> IntPoly {
        self.factors
            .iter()
            .map(|(f, k)| f.poly_pow_truncated(self.q, *k, max_deg))
            .fold(IntPoly::one(), |acc, p| acc.mul_truncated(&p, max_deg))
    }

    /// Power sums `p_1..=p_count` of the eigenvalues, read straight from
    /// the orbit factors.
    pub fn power_sums(&self, count: usize) -> Vec<BigInt> {
        (1..=count as u64)
            .map(|l| {
                self.factors
                    .iter()
                    .map(|(f, k)| f.power_sum(self.q, l) * BigInt::from(*k))
                    .sum()
            })
            .collect()
    }

    /// Every eigenvalue is `ζ q^r` with `ζ^(6t) = 1` and `6r` a
    /// nonnegative integer.
    pub fn eigen_form_ok(&self, arity: i64) -> bool {
        self.eigenvalue_view().iter().all(|(z, _)| {
            (6 * arity) % z.unity_order() == 0
                && !z.q_exponent.is_negative()
                && 6 % z.q_exponent.denom() == 0
        })
    }
}

impl fmt::Display for FactoredZeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(fac, k)| {
                let p = fac.poly(self.q);
                if *k == 1 {
                    format!("({p})")
                } else {
                    format!("({p})^{k}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Whether conjugate unity parts carry equal multiplicity at each q-exponent.
pub fn is_galois_closed(view: &[(AlgebraicScalar, u64)]) -> bool {
    let mut counts: BTreeMap<(Rational, i64), BTreeMap<i64, u64>> = BTreeMap::new();
    for (z, k) in view {
        *counts
            .entry((z.q_exponent, z.unity_den()))
            .or_default()
            .entry(z.unity_num())
            .or_default() += k;
    }
    counts.iter().all(|(&(_, t), by_num)| {
        let units = (0..t).filter(|a| a.gcd(&t) == 1).count();
        let vals: Vec<u64> = by_num.values().copied().collect();
        by_num.len() == units && vals.windows(2).all(|w| w[0] == w[1])
    })
}

/// Search budget for [`pair_eigenvalues`], counted in tried orbits.
const PAIRING_BUDGET: usize = 200_000;

/// Groups a multiset of eigenvalues into integral orbit factors. Within
/// each q-exponent the remaining unity part of largest order is covered
/// first, by the largest orbit that fits in what remains, backtracking
/// when a choice leaves an uncoverable rest.
pub fn pair_eigenvalues(q: u64, view: &[(AlgebraicScalar, u64)]) -> Result<FactoredZeta, ZetaError> {
    let mut groups: BTreeMap<Rational, BTreeMap<Rational, u64>> = BTreeMap::new();
    for (z, k) in view {
        if *k > 0 {
            *groups.entry(z.q_exponent).or_default().entry(z.unity).or_default() += k;
        }
    }
    let mut out = Vec::new();
    for (r, mut unities) in groups {
        if r.is_negative() {
            return Err(ZetaError::ExpansionNotIntegral(format!("negative q-exponent {r}")));
        }
        let bound = unities.keys().map(|u| *u.denom()).max().unwrap_or(1) as u64;
        let mut budget = PAIRING_BUDGET;
        let mut chosen = Vec::new();
        if !cover(r, bound, &mut unities, &mut chosen, &mut budget) {
            let (x, _) = unities
                .iter()
                .max_by_key(|(u, _)| *u.denom())
                .map(|(u, k)| (*u, *k))
                .unwrap_or((Rational::from_integer(0), 0));
            return Err(ZetaError::ExpansionNotIntegral(format!(
                "unpaired eigenvalue {}",
                AlgebraicScalar::new(x, r)
            )));
        }
        out.extend(chosen);
    }
    Ok(FactoredZeta::from_factors(q, out))
}

fn cover(
    r: Rational,
    bound: u64,
    unities: &mut BTreeMap<Rational, u64>,
    chosen: &mut Vec<(OrbitFactor, u64)>,
    budget: &mut usize,
) -> bool {
    let Some(x) = unities.keys().copied().max_by(|a, b| a.denom().cmp(b.denom()).then(b.cmp(a))) else {
        return true;
    };
    for m in (1..=bound).rev() {
        let e = r * Rational::from_integer(m as i64);
        if !e.is_integer() {
            continue;
        }
        let e = e.to_integer() as u64;
        for cand in [
            OrbitFactor::Binomial { sign: 1, e, m },
            OrbitFactor::Binomial { sign: -1, e, m },
            OrbitFactor::Trinomial { e, m },
        ] {
            let set = cand.unities();
            if !set.contains(&x) {
                continue;
            }
            let most = set.iter().map(|u| unities.get(u).copied().unwrap_or(0)).min().unwrap_or(0);
            if most == 0 {
                continue;
            }
            let mut tries = vec![most];
            if most > 1 {
                tries.push(1);
            }
            for c in tries {
                if *budget == 0 {
                    return false;
                }
                *budget -= 1;
                for u in &set {
                    let slot = unities.get_mut(u).expect("checked above");
                    *slot -= c;
                    if *slot == 0 {
                        unities.remove(u);
                    }
                }
                chosen.push((cand, c));
                if cover(r, bound, unities, chosen, budget) {
                    return true;
                }
                chosen.pop();
                for u in &set {
                    *unities.entry(*u).or_default() += c;
                }
            }
        }
    }
    false
}

fn check_q(q: u64) -> Result<(), ZetaError> {
    prime_power(q).map(|_| ()).ok_or(ZetaError::NotPrimePower(q))
}

fn to_u64(x: BigInt) -> Result<u64, ZetaError> {
    x.to_u64().ok_or(ZetaError::Overflow(x))
}

fn q_binom(n: usize, j: i64, q: u64) -> BigInt {
    q_binomial_at(n as i64, j, q)
}

/// `d_j = [n, j]_q - [n, j-1]_q`.
fn d_j(n: usize, j: usize, q: u64) -> BigInt {
    q_binom(n, j as i64, q) - q_binom(n, j as i64 - 1, q)
}

/// Inverse zeta function of the component of X0 on `k`-dimensional and
/// `(n-k)`-dimensional subspaces, `2k != n`.
pub fn x0_generic(n: usize, k: usize, q: u64) -> Result<FactoredZeta, ZetaError> {
    check_q(q)?;
    if k == 0 || k >= n {
        return Err(ZetaError::BadClass(vec![k], n));
    }
    if 2 * k == n {
        return Err(ZetaError::SpecialCaseRequired { n, k });
    }
    let i = k.min(n - k) as i64;
    let n_i = n as i64;
    let mut factors = Vec::new();
    for j in 0..=i {
        let e = -j * (n_i - j + 1) + 2 * i * (n_i - i);
        debug_assert!(e >= 0);
        factors.push((OrbitFactor::Binomial { sign: 1, e: e as u64, m: 2 }, to_u64(d_j(n, j as usize, q))?));
    }
    Ok(FactoredZeta::from_factors(q, factors))
}

/// Inverse zeta function of the self-opposite component of X0 on
/// `n/2`-dimensional subspaces.
pub fn x0_special(n: usize, q: u64) -> Result<FactoredZeta, ZetaError> {
    check_q(q)?;
    if n == 0 || !n.is_multiple_of(2) {
        return Err(ZetaError::BadParity { n, by: 2 });
    }
    let k = (n / 2) as i64;
    let mut factors = Vec::new();
    for j in 0..=k {
        let e = k * k - k * j + (j * j - j) / 2;
        let sign = if j % 2 == 0 { 1 } else { -1 };
        factors.push((OrbitFactor::Binomial { sign, e: e as u64, m: 1 }, to_u64(d_j(n, j as usize, q))?));
    }
    Ok(FactoredZeta::from_factors(q, factors))
}

fn sorted_triple(triple: (usize, usize, usize)) -> Partition {
    Partition::new(vec![triple.0, triple.1, triple.2])
}

fn check_triple(triple: (usize, usize, usize)) -> Result<usize, ZetaError> {
    let (i, j, k) = triple;
    if i == 0 || j == 0 || k == 0 {
        return Err(ZetaError::BadClass(vec![i, j, k], i + j + k));
    }
    Ok(i + j + k)
}

/// The `(λ, f_λ - 2 wt_r(μ), d_λ(q), K_{λμ})` data over `λ ⊵ μ`.
fn dominating_terms(mu: &Partition, q: u64) -> Result<Vec<(Partition, u64, BigInt, u64)>, ZetaError> {
    let base = 2 * mu.wt_r();
    let mut out = Vec::new();
    for lambda in partitions_of(mu.size()) {
        if !lambda.dominates(mu) {
            continue;
        }
        let f = lambda.f_exponent();
        if f < base {
            return Err(ZetaError::Inconsistent(format!("negative exponent for {lambda}")));
        }
        let kostka = kostka_closed3(&lambda, mu).map_err(|e| ZetaError::Inconsistent(e.to_string()))?;
        let d = d_lambda_at(&lambda, q);
        out.push((lambda, (f - base) as u64, d, kostka));
    }
    Ok(out)
}

/// Inverse zeta function of an X2 class with triple `(i, j, k)`, not all
/// equal.
pub fn x2_generic(triple: (usize, usize, usize), q: u64) -> Result<FactoredZeta, ZetaError> {
    check_q(q)?;
    let n = check_triple(triple)?;
    if triple.0 == triple.1 && triple.1 == triple.2 {
        return Err(ZetaError::SpecialCaseRequired { n, k: triple.0 });
    }
    let mu = sorted_triple(triple);
    let mut factors = Vec::new();
    for (_, s, d, kostka) in dominating_terms(&mu, q)? {
        factors.push((OrbitFactor::Binomial { sign: 1, e: s, m: 6 }, to_u64(d * BigInt::from(kostka))?));
    }
    Ok(FactoredZeta::from_factors(q, factors))
}

/// Inverse zeta function of the X2 class `(k, k, k)`, `n = 3k`.
pub fn x2_special(n: usize, q: u64) -> Result<FactoredZeta, ZetaError> {
    check_q(q)?;
    if n == 0 || !n.is_multiple_of(3) {
        return Err(ZetaError::BadParity { n, by: 3 });
    }
    let k = n / 3;
    let mu = Partition::new(vec![k, k, k]);
    let mut factors = Vec::new();
    for (lambda, s, d, kostka) in dominating_terms(&mu, q)? {
        let (y, z) = (lambda.part(1) as i64, lambda.part(2) as i64);
        let kk = kostka as i64;
        // multiplicities of ζ = 1, ω, ω² in units of d/3
        let (one, omega) = match (y - z).rem_euclid(3) {
            0 => (kk + 2, kk - 1),
            1 => (kk - 2, kk + 1),
            _ => (kk, kk),
        };
        if one < 0 || omega < 0 || one % 3 != 0 || omega % 3 != 0 {
            return Err(ZetaError::Inconsistent(format!("multiplicities for {lambda} with K = {kostka}")));
        }
        let (one, omega) = ((one / 3) as u64, (omega / 3) as u64);
        let d = to_u64(d)?;
        if one == omega {
            factors.push((OrbitFactor::Binomial { sign: 1, e: s, m: 6 }, d * one));
            continue;
        }
        if s % 3 != 0 {
            return Err(ZetaError::Inconsistent(format!("exponent {s} for {lambda} is not divisible by 3")));
        }
        factors.push((OrbitFactor::Binomial { sign: 1, e: s / 3, m: 2 }, d * one));
        factors.push((OrbitFactor::Trinomial { e: s / 3, m: 2 }, d * omega));
    }
    Ok(FactoredZeta::from_factors(q, factors))
}

/// Product over the X0 classes `k = 1..=n/2`.
pub fn x0_zeta(n: usize, q: u64) -> Result<FactoredZeta, ZetaError> {
    check_q(q)?;
    let mut acc = FactoredZeta::one(q);
    for k in 1..=n / 2 {
        let part = if 2 * k == n { x0_special(n, q)? } else { x0_generic(n, k, q)? };
        acc = acc.mul(&part);
    }
    Ok(acc)
}

/// The formula for the X2 class containing the multi-dimension `(a, b)`.
pub fn x2_class_zeta(n: usize, mdim: (usize, usize), q: u64) -> Result<FactoredZeta, ZetaError> {
    let triple = class_triple(n, mdim);
    if triple.0 == triple.1 && triple.1 == triple.2 {
        x2_special(n, q)
    } else {
        x2_generic(triple, q)
    }
}

/// Product over all X2 classes.
pub fn x2_zeta(n: usize, q: u64) -> Result<FactoredZeta, ZetaError> {
    check_q(q)?;
    let mut acc = FactoredZeta::one(q);
    for mdim in mdim_classes(n) {
        acc = acc.mul(&x2_class_zeta(n, mdim, q)?);
    }
    Ok(acc)
}

/// Inverse edge zeta function of the building of `F_q^n`.
pub fn building_zeta(n: usize, q: u64) -> Result<FactoredZeta, ZetaError> {
    x2_zeta(n, q)
}

/// Inverse zeta function of the tensor product of two graphs given by
/// their spectra, evaluated at `u^2`.
pub fn tensor_factorization(a: &FactoredZeta, b: &FactoredZeta) -> Result<FactoredZeta, ZetaError> {
    assert_eq!(a.q, b.q, "factorizations over different q");
    let (va, vb) = (a.eigenvalue_view(), b.eigenvalue_view());
    let mut prod: BTreeMap<AlgebraicScalar, u64> = BTreeMap::new();
    for (x, k) in &va {
        for (y, l) in &vb {
            *prod.entry(x.mul(y)).or_default() += k * l;
        }
    }
    let view: Vec<_> = prod.into_iter().collect();
    Ok(pair_eigenvalues(a.q, &view)?.substitute(2))
}

/// Inverse edge zeta function of the building of `GL(V_1) × ... × GL(V_r)`.
pub fn product_building_zeta(dims: &[usize], q: u64) -> Result<FactoredZeta, ZetaError> {
    check_q(q)?;
    let mut acc = FactoredZeta::one(q);
    let mut x0 = Vec::with_capacity(dims.len());
    for &n in dims {
        if n == 0 {
            return Err(ZetaError::BadClass(dims.to_vec(), 0));
        }
        acc = acc.mul(&building_zeta(n, q)?);
        x0.push(x0_zeta(n, q)?);
    }
    for i in 0..x0.len() {
        for j in i + 1..x0.len() {
            acc = acc.mul(&tensor_factorization(&x0[i], &x0[j])?);
        }
    }
    Ok(acc)
}
