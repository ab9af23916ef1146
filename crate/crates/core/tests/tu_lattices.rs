//! Kernel lattices of generated TU matrices, checked against the binary
//! matroid and against a second short-vector route.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use tuiso::gen::tu_corpus;
use tuiso::tulattice::{conformal_decompose, is_tu, lambda, matrix_circuits, short_vectors, ShortVectorMethod};
use tuiso::{BinaryMatroid, Bound, ZMatrix, ZMatrix64, ZVector64};

fn corpus() -> Vec<ZMatrix64> {
    tu_corpus(2024, 120, 10)
}

#[test]
fn circuit_supports_match_the_binary_matroid() {
    for a in corpus() {
        let m = BinaryMatroid::with_prefix("c", a.mod2());
        let circuits = matrix_circuits(&a).unwrap();
        assert_eq!(circuits.len(), m.circuits().unwrap().len());
        let supports: BTreeSet<Vec<usize>> = circuits.iter().map(|c| c.support()).collect();
        assert_eq!(supports.len(), circuits.len());
        for c in &circuits {
            assert!(a.annihilates(c) && c.is_unit_valued());
        }
    }
}

#[test]
fn short_vectors_agree_below_twice_lambda() {
    for a in corpus().into_iter().filter(|a| a.n_cols() <= 8) {
        let Some(l) = lambda(&a).unwrap() else {
            continue;
        };
        let bound = Bound::from_integer(2 * l);
        let fast = short_vectors(&a, &bound, ShortVectorMethod::Circuits).unwrap();
        let scan = short_vectors(&a, &bound, ShortVectorMethod::BoxScan).unwrap();
        assert_eq!(fast.vectors, scan.vectors, "{a:?}");
        assert_eq!(scan.lambda, Some(l));
    }
}

#[test]
fn scalar_types_agree() {
    for a in corpus().into_iter().take(40) {
        let big: ZMatrix = a.convert().unwrap();
        let small: Vec<String> = matrix_circuits(&a).unwrap().iter().map(ToString::to_string).collect();
        let wide: Vec<String> = matrix_circuits(&big).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(small, wide);
        assert_eq!(is_tu(&a).unwrap(), is_tu(&big).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn conformal_pieces_add_up(pick in 0usize..120, coeffs in proptest::collection::vec(-2i64..=2, 6)) {
        let a = &corpus()[pick];
        let circuits = matrix_circuits(a).unwrap();
        prop_assume!(!circuits.is_empty());
        let mut v = ZVector64::zeros(a.n_cols());
        for (i, &k) in coeffs.iter().enumerate() {
            let c = &circuits[i % circuits.len()];
            for (x, y) in v.0.iter_mut().zip(&c.0) {
                *x += k * y;
            }
        }
        prop_assume!(!v.is_zero());
        let parts = conformal_decompose(a, &v).unwrap();
        let mut sum = ZVector64::zeros(a.n_cols());
        let mut norms = 0;
        for u in &parts {
            prop_assert!(u.is_conformal_to(&v));
            prop_assert!(circuits.contains(u) || circuits.contains(&-u.clone()));
            sum = &sum + u;
            norms += u.l1_norm();
        }
        prop_assert_eq!(sum, v.clone());
        prop_assert_eq!(norms, v.l1_norm());
    }

    #[test]
    fn transposes_stay_tu(pick in 0usize..120) {
        let a = &corpus()[pick];
        prop_assert!(is_tu(&a.transpose()).unwrap());
    }
}

#[test]
fn bigint_short_vectors() {
    let a: ZMatrix = ZMatrix64::from_i64_rows(&[&[1, 1, 1]]).convert().unwrap();
    let r = short_vectors(&a, &Bound::new(3, 1), ShortVectorMethod::BoxScan).unwrap();
    assert_eq!(r.count(), 6);
    assert!(r.vectors.iter().all(|v| v.l1_norm() == BigInt::from(2)));
}
