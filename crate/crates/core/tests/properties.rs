use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use tits_zeta::digraph::{Digraph, DEFAULT_EXACT_CAP};
use tits_zeta::hecke::{HeckeElement, Permutation};
use tits_zeta::linalg::{charpoly, charpoly_multimodular};
use tits_zeta::partition::{kostka_closed3, kostka_ssyt, partitions_of, q_binomial, q_binomial_at, Partition};
use tits_zeta::poly::IntPoly;
use tits_zeta::zeta::{pair_eigenvalues, tensor_factorization, FactoredZeta, OrbitFactor};

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let edges = (0..n * n).filter(|&i| bits[i] && i / n != i % n).map(|i| (i / n, i % n));
            Digraph::from_edges(n, edges).unwrap()
        })
    })
}

fn partition(max_n: usize, max_rows: usize) -> impl Strategy<Value = Partition> {
    proptest::collection::vec(1..=max_n, 1..=max_rows)
        .prop_map(Partition::new)
        .prop_filter("size cap", move |p| p.size() <= max_n)
}

/// A pair `λ ⊵ μ` of partitions with at most three rows, built by moving
/// boxes down from `λ`.
fn dominating_pair(max_n: usize) -> impl Strategy<Value = (Partition, Partition)> {
    (1..=max_n / 3, 0..=max_n / 3, 0..=max_n / 3, proptest::collection::vec((0..3usize, 0..3usize), 0..10)).prop_map(
        |(a, b, c, moves)| {
            let mut parts = vec![a.max(b).max(c), a.min(b).max(b.min(c)).max(a.min(c)), a.min(b).min(c)];
            let lambda = Partition::new(parts.clone());
            for (i, j) in moves {
                let (hi, lo) = (i.min(j), i.max(j));
                if hi != lo && parts[hi] > parts[lo] + 1 {
                    parts[hi] -= 1;
                    parts[lo] += 1;
                }
            }
            (lambda, Partition::new(parts))
        },
    )
}

/// A partition together with an unsorted content of the same size.
fn content_pair() -> impl Strategy<Value = (Partition, Vec<usize>)> {
    proptest::collection::vec(0..4usize, 1..5)
        .prop_filter("nonempty", |m| m.iter().sum::<usize>() > 0)
        .prop_flat_map(|m| {
            let shapes = partitions_of(m.iter().sum());
            (proptest::sample::select(shapes), Just(m))
        })
}

fn orbit_factor() -> impl Strategy<Value = OrbitFactor> {
    prop_oneof![
        (prop_oneof![Just(1i8), Just(-1i8)], 0..6u64, 1..=6u64).prop_map(|(sign, e, m)| OrbitFactor::Binomial { sign, e, m }),
        (0..4u64, 1..=3u64).prop_map(|(e, m)| OrbitFactor::Trinomial { e, m }),
    ]
}

fn binomial() -> impl Strategy<Value = OrbitFactor> {
    (prop_oneof![Just(1i8), Just(-1i8)], 0..5u64, 1..=4u64).prop_map(|(sign, e, m)| OrbitFactor::Binomial { sign, e, m })
}

/// Products of binomial orbits, the shape of every X0 spectrum.
fn binomial_factored(q: u64) -> impl Strategy<Value = FactoredZeta> {
    proptest::collection::vec((binomial(), 1..3u64), 0..3).prop_map(move |fs| FactoredZeta::from_factors(q, fs))
}

fn factored(q: u64) -> impl Strategy<Value = FactoredZeta> {
    proptest::collection::vec((orbit_factor(), 1..3u64), 0..4).prop_map(move |fs| FactoredZeta::from_factors(q, fs))
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_one_line(&v.iter().map(|x| x + 1).collect::<Vec<_>>()).unwrap())
}

fn hecke_element(n: usize, q: u64) -> impl Strategy<Value = HeckeElement> {
    proptest::collection::vec((permutation(n), -3i64..=3), 1..4).prop_map(move |terms| {
        terms.into_iter().fold(HeckeElement::zero(n, q).unwrap(), |acc, (w, c)| {
            let term = HeckeElement::basis(w, q).unwrap().scale(&BigRational::from_integer(c.into()));
            acc.add(&term).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn union_multiplies_zeta(a in digraph(6), b in digraph(6)) {
        let za = a.inverse_zeta_polynomial(DEFAULT_EXACT_CAP).unwrap();
        let zb = b.inverse_zeta_polynomial(DEFAULT_EXACT_CAP).unwrap();
        let zu = a.disjoint_union(&b).inverse_zeta_polynomial(DEFAULT_EXACT_CAP).unwrap();
        prop_assert_eq!(zu, &za * &zb);
    }

    #[test]
    fn tensor_multiplies_traces(a in digraph(5), b in digraph(5)) {
        let ta = a.closed_walk_counts(8);
        let tb = b.closed_walk_counts(8);
        let tt = a.tensor_product(&b).closed_walk_counts(8);
        let prod: Vec<BigInt> = ta.iter().zip(&tb).map(|(x, y)| x * y).collect();
        prop_assert_eq!(tt, prod);
    }

    #[test]
    fn zeta_routes_agree(g in digraph(8)) {
        let reduced = g.inverse_zeta_polynomial(DEFAULT_EXACT_CAP).unwrap();
        let full = g.inverse_zeta_polynomial_unreduced(DEFAULT_EXACT_CAP).unwrap();
        prop_assert_eq!(&reduced, &full);
        let n = g.vertex_count();
        prop_assert_eq!(reduced.newton_power_sums(n), g.closed_walk_counts(n));
    }

    #[test]
    fn charpoly_routes_agree(g in digraph(8)) {
        let a = g.adjacency_matrix();
        prop_assert_eq!(charpoly(&a), charpoly_multimodular(&a));
    }

    #[test]
    fn conjugation_is_an_involution(p in partition(12, 5)) {
        prop_assert_eq!(p.conjugate().conjugate(), p.clone());
        prop_assert_eq!(p.conjugate().size(), p.size());
        prop_assert_eq!(p.wt_r(), p.conjugate().wt_c());
    }

    #[test]
    fn dominance_reverses_under_conjugation(a in partition(8, 8), b in partition(8, 8)) {
        prop_assume!(a.size() == b.size());
        prop_assert_eq!(a.dominates(&b), b.conjugate().dominates(&a.conjugate()));
    }

    #[test]
    fn hooks_sum_to_content(p in partition(12, 6)) {
        // sum of hook lengths is n + wt_r + wt_c
        let total: usize = p.hooks().iter().sum();
        prop_assert_eq!(total, p.size() + p.wt_r() + p.wt_c());
    }

    #[test]
    fn kostka_forms_agree((l, m) in dominating_pair(12)) {
        prop_assert_eq!(kostka_closed3(&l, &m).unwrap(), kostka_ssyt(&l, m.parts()).unwrap());
    }

    #[test]
    fn kostka_is_symmetric_in_content((l, m) in content_pair()) {
        let mut sorted = m.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        prop_assert_eq!(kostka_ssyt(&l, &m).unwrap(), kostka_ssyt(&l, &sorted).unwrap());
    }

    #[test]
    fn q_binomial_symmetry_and_pascal(n in 1i64..12, k in 0i64..12) {
        prop_assume!(k <= n);
        prop_assert_eq!(q_binomial(n, k), q_binomial(n, n - k));
        if k >= 1 {
            // [n, k] = [n-1, k-1] + q^k [n-1, k]
            let rhs = &q_binomial(n - 1, k - 1) + &q_binomial(n - 1, k).shift(k as usize);
            prop_assert_eq!(q_binomial(n, k), rhs);
        }
        let binom = (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1));
        prop_assert_eq!(q_binomial_at(n, k, 1), binom);
    }

    #[test]
    fn pairing_recovers_factors(f in factored(3)) {
        let view = f.eigenvalue_view();
        prop_assert_eq!(pair_eigenvalues(3, &view).unwrap().expand(), f.expand());
    }

    #[test]
    fn expansions_agree(f in factored(2)) {
        let full = f.expand();
        prop_assert_eq!(f.expand_truncated(10), full.truncated(10));
        prop_assert_eq!(f.power_sums(10), full.newton_power_sums(10));
    }

    #[test]
    fn tensor_is_symmetric(a in binomial_factored(2), b in binomial_factored(2)) {
        let ab = tensor_factorization(&a, &b).unwrap();
        let ba = tensor_factorization(&b, &a).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(ab.degree(), 2 * a.degree() * b.degree());
    }

    #[test]
    fn hecke_multiplication_is_associative(
        x in hecke_element(4, 2),
        y in hecke_element(4, 2),
        z in hecke_element(4, 2),
    ) {
        let left = x.mul(&y).unwrap().mul(&z).unwrap();
        let right = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn reduced_words_have_length_many_letters(w in permutation(6)) {
        let word = w.reduced_word();
        prop_assert_eq!(word.len(), w.length());
        let rebuilt = word
            .iter()
            .fold(Permutation::identity(6), |acc, &i| acc.compose(&Permutation::generator(6, i)));
        prop_assert_eq!(rebuilt, w);
    }

    #[test]
    fn basis_products_follow_reduced_words(v in permutation(4), w in permutation(4)) {
        // a_v a_w = a_{vw} whenever lengths add
        prop_assume!(v.compose(&w).length() == v.length() + w.length());
        let prod = HeckeElement::basis(v.clone(), 3).unwrap().mul(&HeckeElement::basis(w.clone(), 3).unwrap()).unwrap();
        prop_assert_eq!(prod, HeckeElement::basis(v.compose(&w), 3).unwrap());
    }
}

#[test]
fn tensor_outside_the_orbit_vocabulary_is_rejected() {
    // (1 + u) against (1 + u^3 + u^6) has inverse zeta 1 - u^3 + u^6 at u^2,
    // a cyclotomic factor no binomial or trinomial orbit produces
    let a = FactoredZeta::from_factors(2, [(OrbitFactor::Binomial { sign: -1, e: 0, m: 1 }, 1)]);
    let b = FactoredZeta::from_factors(2, [(OrbitFactor::Trinomial { e: 0, m: 3 }, 1)]);
    assert!(tensor_factorization(&a, &b).is_err());
}

#[test]
fn poly_identity_helpers() {
    let p = IntPoly::from_i64s(&[1, -3, 2]);
    assert_eq!(p.reversed_to(2), IntPoly::from_i64s(&[2, -3, 1]));
    assert_eq!(p.substitute_power(2), IntPoly::from_i64s(&[1, 0, -3, 0, 2]));
}
