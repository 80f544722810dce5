//! Factorisation of monic integer polynomials whose irreducible factors all
//! have degree at most three.
//!
//! Candidate factors come from numerical roots and are accepted only after
//! exact division, so the result is always a correct factorisation; the
//! search gives up (returns `None`) when a factor of higher degree remains.

use nalgebra::{DMatrix, Schur};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::IntPoly;

const SCHUR_ITERATIONS: usize = 10_000;

/// Irreducible factors with multiplicities, each monic. Returns `None` when
/// some irreducible factor could not be certified.
pub fn factor_monic(f: &IntPoly) -> Option<Vec<(IntPoly, u32)>> {
    assert!(f.is_monic(), "factorisation expects a monic polynomial");
    let mut out = Vec::new();
    let mut f = f.clone();
    let lowest = f.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    if lowest > 0 {
        out.push((IntPoly::from_i64s(&[0, 1]), lowest as u32));
        f = IntPoly::new(f.coeffs()[lowest..].to_vec());
    }
    for (part, mult) in squarefree_decomposition(&f) {
        for g in factor_squarefree(&part)? {
            out.push((g, mult));
        }
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(a.0.coeffs().cmp(b.0.coeffs())));
    Some(out)
}

/// Yun's algorithm over Q; inputs and outputs are monic integer polynomials.
fn squarefree_decomposition(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div_monic(&a0).expect("gcd divides");
    let mut c = exact_div_general(&df, &a0);
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.exact_div_monic(&a).expect("gcd divides");
        c = exact_div_general(&d, &a);
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

/// Division by a monic polynomial known to divide exactly.
fn exact_div_general(a: &IntPoly, d: &IntPoly) -> IntPoly {
    a.exact_div_monic(d).expect("exact division")
}

fn factor_squarefree(f: &IntPoly) -> Option<Vec<IntPoly>> {
    let mut factors = Vec::new();
    let mut rest = f.clone();
    let mut roots = numeric_roots(&rest)?;

    // integer roots first, so every later factor has no rational root
    let mut i = 0;
    while i < roots.len() {
        let z = roots[i];
        let scale = z.norm().max(1.0);
        if z.im.abs() <= 1e-6 * scale {
            let r = z.re.round();
            let mut hit = None;
            for cand in [r, r - 1.0, r + 1.0] {
                let c = BigInt::from(cand as i64);
                if rest.eval(&c).is_zero() {
                    hit = Some(c);
                    break;
                }
            }
            if let Some(c) = hit {
                let lin = IntPoly::new(vec![-c, BigInt::one()]);
                rest = rest.exact_div_monic(&lin).expect("root divides");
                factors.push(lin);
                roots.remove(i);
                continue;
            }
        }
        i += 1;
    }

    while rest.degree().unwrap_or(0) > 0 {
        let deg = rest.degree().unwrap();
        if deg <= 3 {
            if deg == 2 && quadratic_has_integer_roots(&rest) {
                return None;
            }
            if deg == 3 && !no_integer_root_near(&rest, &roots) {
                return None;
            }
            factors.push(rest);
            break;
        }
        let (g, used) = find_small_factor(&rest, &roots)?;
        rest = rest.exact_div_monic(&g).expect("candidate divides");
        factors.push(g);
        let mut used = used;
        used.sort_unstable_by(|a, b| b.cmp(a));
        for k in used {
            roots.remove(k);
        }
    }
    Some(factors)
}

fn quadratic_has_integer_roots(f: &IntPoly) -> bool {
    let (c, b) = (f.coeff(0), f.coeff(1));
    let disc = &b * &b - BigInt::from(4) * c;
    !disc.is_negative() && {
        let s = disc.sqrt();
        &s * &s == disc
    }
}

fn no_integer_root_near(f: &IntPoly, roots: &[Complex64]) -> bool {
    roots.iter().filter(|z| z.im.abs() <= 1e-6 * z.norm().max(1.0)).all(|z| {
        let r = z.re.round() as i64;
        (r - 2..=r + 2).all(|c| !f.eval(&BigInt::from(c)).is_zero())
    })
}

/// Tries products of two or three numerical roots as integer factors.
fn find_small_factor(f: &IntPoly, roots: &[Complex64]) -> Option<(IntPoly, Vec<usize>)> {
    let n = roots.len();
    for i in 0..n {
        for j in i + 1..n {
            if let Some(g) = rounded_factor(&[roots[i], roots[j]]) {
                if f.exact_div_monic(&g).is_some() {
                    return Some((g, vec![i, j]));
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if let Some(g) = rounded_factor(&[roots[i], roots[j], roots[k]]) {
                    if f.exact_div_monic(&g).is_some() {
                        return Some((g, vec![i, j, k]));
                    }
                }
            }
        }
    }
    None
}

/// Rounds `prod (x - z)` to an integer polynomial when it is numerically
/// close to one.
fn rounded_factor(zs: &[Complex64]) -> Option<IntPoly> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &z in zs {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, &a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * z;
        }
        c = next;
    }
    let mut out = Vec::with_capacity(c.len());
    for a in c {
        let tol = 1e-6 * a.norm().max(1.0);
        if a.im.abs() > tol || (a.re - a.re.round()).abs() > tol.max(1e-3) {
            return None;
        }
        out.push(BigInt::from(a.re.round() as i128));
    }
    Some(IntPoly::new(out))
}

/// All complex roots of a monic polynomial from the eigenvalues of its
/// rescaled companion matrix.
fn numeric_roots(f: &IntPoly) -> Option<Vec<Complex64>> {
    let d = f.degree()?;
    if d == 0 {
        return Some(Vec::new());
    }
    // scale x = 2^s y so that the roots of the rescaled polynomial have
    // modulus of order one
    let s = (0..d)
        .filter(|&i| !f.coeff(i).is_zero())
        .map(|i| (f.coeff(i).bits() as f64 / (d - i) as f64).ceil() as u64)
        .max()
        .unwrap_or(0);
    let scaled: Vec<f64> = (0..d)
        .map(|i| scaled_to_f64(&f.coeff(i), s * (d - i) as u64))
        .collect();
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -scaled[i];
    }
    // the unbounded Schur iteration can stall on badly scaled companions
    let eig = Schur::try_new(comp, f64::EPSILON, SCHUR_ITERATIONS)?.complex_eigenvalues();
    let factor = 2f64.powi(s as i32);
    let roots: Vec<Complex64> = eig.iter().map(|&z| newton_polish(&scaled, z) * factor).collect();
    roots.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(roots)
}

/// Newton iterations on the monic polynomial `y^d + sum c_i y^i`.
fn newton_polish(c: &[f64], mut z: Complex64) -> Complex64 {
    for _ in 0..60 {
        let (mut f, mut df) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        for &a in c.iter().rev() {
            df = df * z + f;
            f = f * z + a;
        }
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        z -= step;
        if step.norm() <= 1e-16 * z.norm().max(1e-300) {
            break;
        }
    }
    z
}

/// `a / 2^shift` as a float without overflowing on huge integers.
fn scaled_to_f64(a: &BigInt, shift: u64) -> f64 {
    const EXTRA: u64 = 64;
    let x: BigInt = (a << EXTRA) >> shift;
    x.to_f64().unwrap_or(0.0) / 2f64.powi(EXTRA as i32)
}
