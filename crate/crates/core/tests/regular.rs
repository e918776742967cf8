mod common;

use common::{expand, hankel_rank as oracle_hankel_rank, poly_coeff, q, random_expr, series, words};
use freefield::regular::{coeff, hankel_rank, is_regular, minimize_regular, truncated_families};
use freefield::{compile, Alphabet, Als, CompileOptions, Expr, Scalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn xy() -> Alphabet {
    Alphabet::from_chars("xy").unwrap()
}

fn plain(e: &Expr) -> Als {
    compile(e, &CompileOptions { minimize: false, alphabet: Some(xy()) }).unwrap()
}

fn word_names(ab: &Alphabet, w: &[usize]) -> Vec<String> {
    w.iter().map(|&l| ab.letters()[l].clone()).collect()
}

fn polynomial(seed: u64) -> Expr {
    random_expr(&mut ChaCha8Rng::seed_from_u64(seed), &["x", "y"], 3, false)
}

#[test]
fn monomial_ranks_match_brute_force_hankel() {
    let ab = Alphabet::from_chars("xyz").unwrap();
    for w in ab.words_up_to(4) {
        let f = Als::monomial(&ab, &w).unwrap();
        let k = w.len();
        let m = minimize_regular(&f).unwrap();
        assert_eq!(m.dim(), k + 1);
        assert_eq!(hankel_rank(&f, k).unwrap(), k + 1);
        let oracle = oracle_hankel_rank(3, k, |u| if u == w.as_slice() { q(1) } else { q(0) });
        assert_eq!(oracle, k + 1);
    }
}

#[test]
fn zero_and_scalars() {
    let ab = xy();
    let zero = plain(&Expr::sub(Expr::letter("x"), Expr::letter("x")));
    assert_eq!(minimize_regular(&zero).unwrap().dim(), 0);
    assert_eq!(hankel_rank(&zero, zero.dim()).unwrap(), 0);
    let three = Als::scalar(&ab, &q(3));
    assert_eq!(minimize_regular(&three).unwrap().dim(), 1);
    assert_eq!(coeff(&three, &[]).unwrap(), q(3));
}

#[test]
fn short_window_is_rejected() {
    let f = Als::monomial(&xy(), &[0, 1, 0]).unwrap();
    assert!(hankel_rank(&f, 1).is_err());
}

#[test]
fn non_regular_input_is_rejected() {
    let f = Als::monomial(&xy(), &[0]).unwrap().std_inverse().unwrap();
    assert!(!is_regular(&f));
    assert!(minimize_regular(&f).is_err());
    assert!(coeff(&f, &[]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minimal_dimension_is_hankel_rank(seed in any::<u64>()) {
        let e = polynomial(seed);
        let f = plain(&e);
        let m = minimize_regular(&f).unwrap();
        prop_assert!(m.is_certified_minimal());
        prop_assert_eq!(m.dim(), hankel_rank(&f, f.dim()).unwrap());
        let p = expand(&e).unwrap();
        let ab = xy();
        let oracle = oracle_hankel_rank(2, m.dim(), |w| poly_coeff(&p, &word_names(&ab, w)));
        prop_assert_eq!(m.dim(), oracle);
    }

    #[test]
    fn minimization_is_idempotent_and_keeps_coefficients(seed in any::<u64>()) {
        let e = polynomial(seed);
        let f = plain(&e);
        let m = minimize_regular(&f).unwrap();
        let again = minimize_regular(&m.clone().with_cert(freefield::CertFlags::UNKNOWN)).unwrap();
        prop_assert_eq!(again.dim(), m.dim());
        let p = expand(&e).unwrap();
        let ab = xy();
        for w in words(2, f.dim().min(6)) {
            let expected = poly_coeff(&p, &word_names(&ab, &w));
            prop_assert_eq!(&coeff(&f, &w).unwrap(), &expected);
            prop_assert_eq!(&coeff(&m, &w).unwrap(), &expected);
        }
    }

    #[test]
    fn minimized_families_have_full_rank(seed in any::<u64>()) {
        let m = minimize_regular(&plain(&polynomial(seed))).unwrap();
        let n = m.dim();
        if n > 0 {
            let s = series(&m).expect("minimal regular systems have an invertible constant part");
            prop_assert_eq!(s.family_ranks(), (n, n));
            let fam = truncated_families(&freefield::regular::to_pls(&m).unwrap());
            prop_assert_eq!(fam.ctrl.rank(), n);
            prop_assert_eq!(fam.obs.rank(), n);
        }
    }

    #[test]
    fn sum_and_cauchy_product(a in any::<u64>(), b in any::<u64>()) {
        let (f, g) = (plain(&polynomial(a)), plain(&polynomial(b)));
        let sum = f.add(&g).unwrap();
        let prod = f.mul(&g).unwrap();
        for w in words(2, 4) {
            prop_assert_eq!(coeff(&sum, &w).unwrap(), coeff(&f, &w).unwrap() + coeff(&g, &w).unwrap());
            let mut expected = Scalar::from_integer(0.into());
            for split in 0..=w.len() {
                expected += coeff(&f, &w[..split]).unwrap() * coeff(&g, &w[split..]).unwrap();
            }
            prop_assert_eq!(coeff(&prod, &w).unwrap(), expected);
        }
    }

    #[test]
    fn coefficients_match_reference_series(seed in any::<u64>()) {
        let f = plain(&polynomial(seed));
        let s = series(&f).unwrap();
        for w in words(2, 4) {
            prop_assert_eq!(coeff(&f, &w).unwrap(), s.coeff(&w));
        }
    }
}
