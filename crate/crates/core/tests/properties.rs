use std::collections::BTreeMap;

use conftc::certificate::CertificateKind;
use conftc::closed_forms::upper_bound;
use conftc::{
    basis, parse, standard_certificate, tc_s, verify, Coefficients, Element, Generator, RingSpec, TcQuery,
    TensorElement,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Word = Vec<Generator>;

/// Independent normal form: applies the defining relations at randomly chosen
/// adjacent positions until every word has strictly decreasing first indices,
/// works in the unpunctured ring on all points and only then discards
/// monomials with an obstacle-obstacle factor.
fn oracle_normal_form(spec: &RingSpec, word: &[Generator], rng: &mut ChaCha8Rng) -> BTreeMap<Vec<(u32, u32)>, i64> {
    let swap_sign = if spec.m() % 2 == 0 { -1 } else { 1 };
    let mut pending: Vec<(Word, i64)> = vec![(word.to_vec(), 1)];
    let mut done: BTreeMap<Vec<(u32, u32)>, i64> = BTreeMap::new();
    while let Some((mut w, mut c)) = pending.pop() {
        let unsorted: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&k| w[k].i <= w[k + 1].i).collect();
        if unsorted.is_empty() {
            *done.entry(w.iter().map(|g| (g.i, g.j)).collect()).or_default() += c;
            continue;
        }
        let k = unsorted[rng.random_range(0..unsorted.len())];
        let (x, y) = (w[k], w[k + 1]);
        if x == y {
            continue;
        }
        if x.i < y.i || x.j < y.j {
            w.swap(k, k + 1);
            c *= swap_sign;
        }
        if x.i != y.i {
            pending.push((w, c));
            continue;
        }
        // w[k] = A[i,a], w[k+1] = A[i,b] with a > b
        let (i, a, b) = (w[k].i, w[k].j, w[k + 1].j);
        let mut first = w.clone();
        first[k + 1] = Generator::new(a, b);
        let mut second = w;
        second[k] = Generator::new(i, b);
        second[k + 1] = Generator::new(a, b);
        pending.push((first, c));
        pending.push((second, -c));
    }
    done.retain(|mono, c| {
        if spec.coeff() == Coefficients::Mod2 {
            *c = c.rem_euclid(2);
        }
        *c != 0 && mono.iter().all(|&(i, _)| i > spec.p())
    });
    done
}

fn as_map(e: &Element) -> BTreeMap<Vec<(u32, u32)>, i64> {
    e.terms()
        .map(|(m, c)| (m.factors().iter().map(|g| (g.i, g.j)).collect(), i64::try_from(c).unwrap()))
        .collect()
}

fn random_word(spec: &RingSpec, len: usize, rng: &mut ChaCha8Rng) -> Word {
    let gens = spec.generators();
    (0..len).map(|_| gens[rng.random_range(0..gens.len())]).collect()
}

fn random_element(spec: RingSpec, rng: &mut ChaCha8Rng) -> Element {
    let mut acc = Element::zero(spec);
    for _ in 0..rng.random_range(1..4) {
        let len = rng.random_range(0..=spec.n() as usize);
        let word = random_word(&spec, len, rng);
        let coeff = BigInt::from(rng.random_range(-3i64..=3));
        acc = &acc + &Element::normal_form(spec, coeff, &word).unwrap();
    }
    acc
}

fn homogeneous_element(spec: RingSpec, len: usize, rng: &mut ChaCha8Rng) -> Element {
    let mut acc = Element::zero(spec);
    for _ in 0..rng.random_range(1..4) {
        let word = random_word(&spec, len, rng);
        let coeff = BigInt::from(rng.random_range(-3i64..=3));
        acc = &acc + &Element::normal_form(spec, coeff, &word).unwrap();
    }
    acc
}

fn random_tensor(spec: RingSpec, s: u32, rng: &mut ChaCha8Rng) -> TensorElement {
    let mut acc = TensorElement::zero(spec, s).unwrap();
    for _ in 0..rng.random_range(1..3) {
        let mut term = TensorElement::one(spec, s).unwrap();
        for slot in 1..=s {
            let factor = TensorElement::inject(&random_element(spec, rng), slot, s).unwrap();
            term = term.tmultiply(&factor).unwrap();
        }
        acc = acc.try_add(&term).unwrap();
    }
    acc
}

fn random_spec(rng: &mut ChaCha8Rng) -> RingSpec {
    let m = rng.random_range(2..=5);
    let p = rng.random_range(0..=2);
    let n = rng.random_range(if p == 0 { 2 } else { 1 }..=4);
    RingSpec::auto(m, n, p).unwrap()
}

#[test]
fn rewriting_is_confluent_on_random_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let spec = random_spec(&mut rng);
        let len = rng.random_range(0..=spec.n() as usize + 1);
        let word = random_word(&spec, len, &mut rng);
        let expected = oracle_normal_form(&spec, &word, &mut rng);
        let got = Element::normal_form(spec, BigInt::from(1), &word).unwrap();
        assert_eq!(as_map(&got), expected, "{spec:?} {word:?}");
    }
}

fn poincare_coefficients(n: u32, p: u32) -> Vec<u64> {
    // prod_k (1 + k t) over the fibre ranks of the forgetful tower
    let ranks: Vec<u64> = if p == 0 { (1..n as u64).collect() } else { (p as u64..(p + n) as u64).collect() };
    let mut poly = vec![1u64];
    for k in ranks {
        let mut next = vec![0; poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d] += c;
            next[d + 1] += c * k;
        }
        poly = next;
    }
    poly
}

#[test]
fn basis_sizes_match_poincare_polynomials() {
    for n in 1..=5u32 {
        for p in 0..=5u32 {
            if n == 1 && p == 0 {
                continue;
            }
            let spec = RingSpec::auto(3, n, p).unwrap();
            let poly = poincare_coefficients(n, p);
            let mut total = 0u64;
            for r in 0..=n as usize {
                let count = basis(&spec, r).unwrap().len() as u64;
                assert_eq!(count, poly.get(r).copied().unwrap_or(0), "n={n} p={p} r={r}");
                total += count;
            }
            let expected: u64 = if p == 0 { (1..=n as u64).product() } else { (p as u64 + 1..=(p + n) as u64).product() };
            assert_eq!(total, expected);
            assert_eq!(spec.dimension(), BigInt::from(expected));
        }
    }
}

#[test]
fn punctured_first_degree_counts() {
    // e_1 = sum over robots of the number of earlier points
    let spec = RingSpec::auto(2, 2, 2).unwrap();
    assert_eq!(basis(&spec, 1).unwrap().len(), 5);
}

#[test]
fn defining_relations_hold_in_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let spec = random_spec(&mut rng);
        let points = spec.points();
        if points < 3 {
            continue;
        }
        let g = |i: u32, j: u32| Element::generator(spec, i, j);
        for gen in spec.generators() {
            let a = g(gen.i, gen.j).unwrap();
            assert!((&a * &a).is_zero());
        }
        let i = rng.random_range(spec.p().max(2) + 1..=points);
        let k = rng.random_range(2..i);
        let j = rng.random_range(1..k);
        let (Ok(aik), Ok(aij)) = (g(i, k), g(i, j)) else { continue };
        // A[k,j] may be an obstacle class that vanishes in the punctured ring
        let akj = g(k, j).unwrap_or_else(|_| Element::zero(spec));
        assert_eq!(&aik * &aij, &(&aik - &aij) * &akj);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative_and_graded_commutative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(&mut rng);
        let (a, b, c) = (random_element(spec, &mut rng), random_element(spec, &mut rng), random_element(spec, &mut rng));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        let (da, db) = (rng.random_range(0..=2usize), rng.random_range(0..=2usize));
        let (x, y) = (homogeneous_element(spec, da, &mut rng), homogeneous_element(spec, db, &mut rng));
        let odd = spec.m() % 2 == 0 && da % 2 == 1 && db % 2 == 1;
        let yx = &y * &x;
        prop_assert_eq!(&x * &y, if odd { -&yx } else { yx });
    }

    #[test]
    fn diagonal_pullback_is_a_ring_map(seed in any::<u64>(), s in 2u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(&mut rng);
        let (x, y) = (random_tensor(spec, s, &mut rng), random_tensor(spec, s, &mut rng));
        let lhs = x.tmultiply(&y).unwrap().diagonal_pullback();
        prop_assert_eq!(lhs, &x.diagonal_pullback() * &y.diagonal_pullback());
        prop_assert_eq!(x.try_add(&y).unwrap().diagonal_pullback(), &x.diagonal_pullback() + &y.diagonal_pullback());
    }

    #[test]
    fn tensor_products_of_injections_have_kunneth_size(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(&mut rng);
        let (a, b) = (random_element(spec, &mut rng), random_element(spec, &mut rng));
        let t = TensorElement::inject(&a, 1, 2).unwrap().tmultiply(&TensorElement::inject(&b, 2, 2).unwrap()).unwrap();
        prop_assert_eq!(t.len(), a.len() * b.len());
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let c = spec.coeff();
                let expected = if c == Coefficients::Mod2 { (ca * cb) % 2 } else { ca * cb };
                prop_assert_eq!(t.coefficient(&[ma.clone(), mb.clone()]), expected);
            }
        }
    }

    #[test]
    fn relabeling_is_a_ring_automorphism(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(&mut rng);
        let p = spec.p();
        let mut robots: Vec<u32> = (p + 1..=spec.points()).collect();
        for k in (1..robots.len()).rev() {
            robots.swap(k, rng.random_range(0..=k));
        }
        let perm: Vec<u32> = (1..=p).chain(robots.iter().copied()).collect();
        let mut inverse = vec![0; perm.len()];
        for (k, &v) in perm.iter().enumerate() {
            inverse[v as usize - 1] = k as u32 + 1;
        }
        let (x, y) = (random_element(spec, &mut rng), random_element(spec, &mut rng));
        let rx = x.relabel(&perm).unwrap();
        prop_assert_eq!((&x * &y).relabel(&perm).unwrap(), &rx * &y.relabel(&perm).unwrap());
        prop_assert_eq!(rx.relabel(&inverse).unwrap(), x);
    }
}

#[test]
fn certificates_survive_relabeling() {
    for (m, n, p, s) in [(3, 3, 0, 2), (2, 3, 0, 2), (2, 2, 2, 2), (3, 2, 1, 2)] {
        let cert = standard_certificate(m, n, p, s).unwrap();
        let perm: Vec<u32> = (1..=p).chain((p + 1..=p + n).rev()).collect();
        let moved = cert.relabel(&perm).unwrap();
        let (a, b) = (verify(&cert), verify(&moved));
        assert!(a.passed() && b.passed());
        assert_eq!(a.lower_bound, b.lower_bound);
        assert!(a.lower_bound.is_some());
    }
}

#[test]
fn certificates_sit_below_the_table_and_upper_bound() {
    for m in 2..=5 {
        for n in 1..=3 {
            for p in 0..=3 {
                for s in 2..=3 {
                    let Ok(q) = TcQuery::new(m, n, p, s) else { continue };
                    let cert = standard_certificate(m, n, p, s).unwrap();
                    let report = verify(&cert);
                    assert!(report.passed(), "{q:?}");
                    let lower = report.lower_bound.expect("verified certificates carry a bound");
                    let tc = tc_s(&q);
                    assert!(lower as u32 <= tc && tc <= upper_bound(&q), "{q:?}");
                    // every standard certificate is sharp
                    assert_eq!(lower as u32, tc, "{q:?} {:?}", cert.kind());
                    if cert.kind() == CertificateKind::Pi {
                        assert_eq!(tc, upper_bound(&q));
                    }
                }
            }
        }
    }
}

#[test]
fn printing_then_parsing_is_the_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..500 {
        let spec = random_spec(&mut rng);
        if k % 2 == 0 {
            let e = random_element(spec, &mut rng);
            let back = parse(&e.to_string()).unwrap().eval_ring(spec).unwrap();
            assert_eq!(back, e, "{e}");
        } else {
            let s = rng.random_range(2..=3);
            let t = random_tensor(spec, s, &mut rng);
            let back = parse(&t.to_string()).unwrap().eval_tensor(spec, s).unwrap();
            assert_eq!(back, t, "{t}");
        }
    }
}
