use std::collections::BTreeSet;

use proptest::prelude::*;
use subshift::graph::Analysis;
use subshift::langtools::{factors_oracle, factors_oracle_capped, intersect_finite, member_language};
use subshift::points::{self, FixedShape};
use subshift::transforms::higher_block;
use subshift::word::{periodic_orbit_key, Letter, Word};
use subshift::{decide, Alphabet, Morphism, Verdict};

fn morphisms(min_len: usize) -> impl Strategy<Value = Morphism> {
    (1usize..=4).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(0..n, min_len..=4), n)
            .prop_map(move |images| Morphism::endo(Alphabet::from_chars(&"abcd"[..n]).unwrap(), images).unwrap())
    })
}

fn small_morphisms(max_len: usize) -> impl Strategy<Value = Morphism> {
    (1usize..=3).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(0..n, 0..=max_len), n)
            .prop_map(move |images| Morphism::endo(Alphabet::from_chars(&"abc"[..n]).unwrap(), images).unwrap())
    })
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 256, ..ProptestConfig::default() }
}

/// `σ^k(x)[-len, len)` from windows of `x`, keeping only the ends of each image.
fn image_window(m: &Morphism, k: usize, window: impl Fn(usize) -> Word, len: usize) -> Option<Word> {
    const KEEP: usize = 4096;
    let mut w = 1;
    while w <= 4096 {
        let x = window(w);
        let (mut left, mut right) = (x[..w].to_vec(), x[w..].to_vec());
        for _ in 0..k {
            left = m.apply(&left).unwrap();
            left.drain(..left.len().saturating_sub(KEEP));
            right = m.apply(&right).unwrap();
            right.truncate(KEEP);
        }
        if left.len() >= len && right.len() >= len {
            let mut out = left[left.len() - len..].to_vec();
            out.extend_from_slice(&right[..len]);
            return Some(out);
        }
        w *= 2;
    }
    None
}

/// Over three letters with images of length at most two, finite avoiding
/// languages have no word longer than 29 (found by exhaustive search), so an
/// avoiding factor of length 32 means the language is infinite.
fn has_long_avoiding_factor(m: &Morphism, x: Letter) -> bool {
    factors_oracle_capped(m, 32, 32).unwrap().iter().any(|w| !w.contains(&x))
}

fn all_factors_in(m: &Morphism, x: &[Letter], n: usize) -> bool {
    let f = factors_oracle(m, n).unwrap();
    x.len() < n || x.windows(n).all(|w| f.contains(w))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn powers_compose(m in morphisms(0), j in 0usize..4, k in 0usize..4) {
        let lhs = m.power(j + k).unwrap();
        let rhs = Morphism::compose(&m.power(j).unwrap(), &m.power(k).unwrap()).unwrap();
        prop_assert_eq!(lhs.images(), rhs.images());
        for a in 0..m.card() {
            let mut w = vec![a];
            for _ in 0..j + k {
                w = m.apply(&w).unwrap();
            }
            prop_assert_eq!(&w[..], lhs.image(a));
        }
    }

    #[test]
    fn mex_is_bounded(m in morphisms(0)) {
        let an = Analysis::new(&m).unwrap();
        prop_assert!(an.classes.mex_morphism() <= m.card());
        for a in 0..m.card() {
            let mut w = vec![a];
            let mut dies = None;
            for n in 1..=m.card() {
                w = m.apply(&w).unwrap();
                if w.is_empty() {
                    dies = Some(n);
                    break;
                }
            }
            prop_assert_eq!(an.classes.mex[a], dies);
        }
    }

    #[test]
    fn language_matches_oracle(m in morphisms(0)) {
        for n in 1..=4 {
            let f = factors_oracle(&m, n).unwrap();
            let mut words: Vec<Word> = vec![vec![]];
            for _ in 0..n {
                words = words.iter().flat_map(|w| (0..m.card()).map(move |a| { let mut x = w.clone(); x.push(a); x })).collect();
            }
            for w in words {
                prop_assert_eq!(member_language(&m, &w).unwrap(), f.contains(&w));
            }
        }
    }

    #[test]
    fn fixed_points_are_fixed(m in morphisms(0)) {
        let f = points::enumerate_fixed_orbits(&m, None).unwrap();
        prop_assert!(f.closure_certified);
        for d in &f.descriptors {
            let x = points::expand(&m, d, 64, 64).unwrap();
            let y = image_window(&m, d.power, |w| points::expand(&m, d, w, w).unwrap(), 64);
            prop_assert!(y.is_some());
            prop_assert_eq!(y.unwrap(), x.clone());
            prop_assert!(all_factors_in(&m, &x, 4));
        }
    }

    #[test]
    fn quasi_fixed_points_shift(m in morphisms(0)) {
        let q = points::enumerate_quasi_fixed_orbits(&m, None).unwrap();
        for d in &q {
            let x = points::expand_quasi(&m, d, 160, 160).unwrap();
            let y = image_window(&m, d.power, |w| points::expand_quasi(&m, d, w, w).unwrap(), 32);
            prop_assert!(y.is_some());
            let y = y.unwrap();
            let found = (0..=256usize).any(|s| x[s..s + 64] == y[..]);
            prop_assert!(found, "no shift for {:?}", d);
            prop_assert!(all_factors_in(&m, &x, 4));
        }
    }

    #[test]
    fn block_diagram_commutes(m in morphisms(1), k in 1usize..=3) {
        let Ok(bs) = higher_block(&m, k) else { return Ok(()) };
        for b in 0..bs.blocks.len() {
            let mut x = vec![b];
            let mut y = vec![bs.blocks[b][0]];
            for _ in 1..=4 {
                x = bs.sigma_k.apply(&x).unwrap();
                y = m.apply(&y).unwrap();
                prop_assert_eq!(bs.projection.apply(&x).unwrap(), y.clone());
            }
        }
    }

    #[test]
    fn decisions_are_consistent(m in morphisms(0)) {
        let ap = decide::is_aperiodic(&m).unwrap();
        let fr = decide::is_fully_recognizable(&m).unwrap();
        if ap.is_true() {
            prop_assert!(fr.is_true());
        }
        let an = Analysis::new(&m).unwrap();
        let nonempty = an.classes.in_shift_language.iter().any(|&b| b);
        let per = decide::is_periodic_shift(&m).unwrap();
        if nonempty && per.is_true() {
            prop_assert_eq!(ap.verdict, Verdict::False);
        }
        for (w, k) in decide::growing_periodic_orbits(&m).unwrap() {
            prop_assert!(subshift::word::is_primitive(&w));
            prop_assert!(member_language(&m, &subshift::word::concat(&w, &w)).unwrap());
            let img = m.power(k).unwrap().apply(&w).unwrap();
            prop_assert!(subshift::word::is_power_of_conjugate(&img, &w));
        }
        if decide::is_minimal(&m).unwrap().is_true() {
            prop_assert_ne!(decide::is_irreducible(&m).unwrap().verdict, Verdict::False);
        }
    }

    #[test]
    fn avoiding_language_matches_oracle(m in small_morphisms(2), x in 0usize..3) {
        prop_assume!(x < m.card());
        prop_assert_eq!(intersect_finite(&m, x).unwrap(), has_long_avoiding_factor(&m, x));
    }

    #[test]
    fn infinite_avoiding_language_has_long_words(m in small_morphisms(3), x in 0usize..3) {
        prop_assume!(x < m.card());
        if intersect_finite(&m, x).unwrap() {
            prop_assert!(factors_oracle(&m, 16).unwrap().iter().any(|w| !w.contains(&x)));
        }
    }

    /// With every image of length at least two, two-sided fixed points of
    /// `σ^k` are exactly the pairs `b·a` in `L(σ)` with `σ^k(b)` ending with
    /// `b` and `σ^k(a)` starting with `a`.
    #[test]
    fn fixed_points_match_pairs(m in morphisms(2)) {
        let f = points::enumerate_fixed_orbits(&m, None).unwrap();
        let two = factors_oracle(&m, 2).unwrap();
        let mut pairs: BTreeSet<(Letter, Letter, usize)> = BTreeSet::new();
        let last = |x: Letter| *m.image(x).last().unwrap();
        let first = |x: Letter| m.image(x)[0];
        for pair in &two {
            let (b, a) = (pair[0], pair[1]);
            let (mut x, mut y) = (b, a);
            for k in 1..=12 {
                x = last(x);
                y = first(y);
                if x == b && y == a {
                    pairs.insert((b, a, k));
                    break;
                }
            }
        }
        let bound = decide::period_bound(&m).unwrap().bound.max(8);
        let mut expected_aperiodic = BTreeSet::new();
        let mut expected_periodic = BTreeSet::new();
        for &(b, a, k) in &pairs {
            let d = subshift::FixedPointDescriptor { power: k, shape: FixedShape::TwoSeed { left: vec![b], right: vec![a] } };
            let x = points::expand(&m, &d, 4 * bound, 4 * bound).unwrap();
            let p = subshift::word::smallest_period(&x);
            if p <= bound && subshift::word::power_exponent(&m.power(k).unwrap().apply(&x[4 * bound..4 * bound + p]).unwrap(), &x[4 * bound..4 * bound + p]).is_some() {
                expected_periodic.insert(periodic_orbit_key(&x[..p]));
            } else {
                expected_aperiodic.insert((b, a, k));
            }
        }
        let mut got_aperiodic = BTreeSet::new();
        let mut got_periodic = BTreeSet::new();
        for d in &f.descriptors {
            match (&d.shape, points::descriptor_period(&m, d, bound).unwrap()) {
                (_, Some(_)) => {
                    let x = points::expand(&m, d, 0, 4 * bound).unwrap();
                    got_periodic.insert(periodic_orbit_key(&x[..subshift::word::smallest_period(&x)]));
                }
                (FixedShape::TwoSeed { left, right }, None) => {
                    prop_assert_eq!(left.len(), 1);
                    prop_assert_eq!(right.len(), 1);
                    got_aperiodic.insert((left[0], right[0], d.power));
                }
                (s, None) => prop_assert!(false, "unexpected shape {:?}", s),
            }
        }
        prop_assert_eq!(got_aperiodic, expected_aperiodic);
        prop_assert_eq!(got_periodic, expected_periodic);
    }
}

#[test]
fn avoiding_language_exhaustive() {
    for n in 1..=3usize {
        let mut images: Vec<Word> = vec![vec![]];
        for a in 0..n {
            images.push(vec![a]);
            images.extend((0..n).map(|b| vec![a, b]));
        }
        for code in 0..images.len().pow(n as u32) {
            let mut c = code;
            let rules = (0..n)
                .map(|_| {
                    let i = c % images.len();
                    c /= images.len();
                    images[i].clone()
                })
                .collect();
            let m = Morphism::endo(Alphabet::from_chars(&"abc"[..n]).unwrap(), rules).unwrap();
            for x in 0..n {
                assert_eq!(intersect_finite(&m, x).unwrap(), has_long_avoiding_factor(&m, x), "{m:?} avoiding {x}");
            }
        }
    }
}
