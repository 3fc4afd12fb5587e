mod common;

use proptest::prelude::*;

use rnsym::bundle::RnBundle;
use rnsym::expr::{parse_field, parse_form};
use rnsym::linalg::Matrix;
use rnsym::{CdgaModel, GradedElement};

use common::*;

fn models() -> Vec<CdgaModel> {
    vec![CdgaModel::affine(2, None).unwrap(), CdgaModel::torus(3).unwrap(), CdgaModel::sphere_even(2).unwrap()]
}

fn sign(k: i32) -> rnsym::Scalar {
    int(if k.rem_euclid(2) == 0 { 1 } else { -1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative_and_graded_commutative(seed in any::<u64>(), which in 0usize..3, ka in 0i32..4, kb in 0i32..4, kc in 0i32..3) {
        let m = &models()[which];
        let mut r = rng(seed);
        let alg = m.algebra();
        let (a, b, c) = (element(&mut r, alg, ka, 1), element(&mut r, alg, kb, 1), element(&mut r, alg, kc, 1));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, (&b * &a).scale(&sign(ka * kb)));
    }

    #[test]
    fn derivations_obey_leibniz_and_jacobi(seed in any::<u64>(), which in 0usize..3, kd in -1i32..=1, ka in 0i32..3, kb in 0i32..3) {
        let m = &models()[which];
        let mut r = rng(seed);
        let alg = m.algebra();
        let d = derivation(&mut r, alg, kd, 1);
        let (a, b) = (element(&mut r, alg, ka, 1), element(&mut r, alg, kb, 1));
        let lhs = d.apply(&(&a * &b));
        let rhs = &(&d.apply(&a) * &b) + &(&a * &d.apply(&b)).scale(&sign(kd * ka));
        prop_assert_eq!(lhs, rhs);
        let (e, f) = (derivation(&mut r, alg, 1, 1), derivation(&mut r, alg, -1, 1));
        prop_assert!(derivation_jacobi(&d, &e, &f).is_zero());
    }

    #[test]
    fn sym_bracket_is_graded_antisymmetric(seed in any::<u64>(), qa in -2i32..=0, qb in -2i32..=0) {
        let t3 = CdgaModel::torus(3).unwrap();
        let p = RnBundle::new(&t3, 2, parse_form("th1 th2 th3", &t3).unwrap()).unwrap();
        let mut r = rng(seed);
        let a = sym_combination(&mut r, &p, qa, &p.sym_space(qa, 1).unwrap().basis);
        let b = sym_combination(&mut r, &p, qb, &p.sym_space(qb, 1).unwrap().basis);
        let ab = p.sym_bracket(&a, &b).unwrap();
        let ba = p.sym_bracket(&b, &a).unwrap().scale(&sign(qa * qb + 1));
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn f_map_is_invertible(seed in any::<u64>(), q in -2i32..=0) {
        let m = CdgaModel::affine(3, None).unwrap();
        let p = RnBundle::new(&m, 2, parse_form("dx dy dz", &m).unwrap()).unwrap();
        let mut r = rng(seed);
        let e = sym_combination(&mut r, &p, q, &p.sym_space(q, 1).unwrap().basis);
        prop_assert_eq!(p.map_f_inverse(&p.map_f(&e).unwrap()).unwrap(), e);
    }

    #[test]
    fn printed_elements_parse_back(seed in any::<u64>(), which in 0usize..3, k in 0i32..4) {
        let m = &models()[which];
        let mut r = rng(seed);
        let e = element(&mut r, m.algebra(), k, 2);
        prop_assert_eq!(parse_form(&e.to_string(), m).unwrap(), e);
        let x = field(&mut r, m, 2);
        prop_assert_eq!(parse_field(&m.field_string(&x), m).unwrap(), x);
    }

    #[test]
    fn rank_ignores_permutations(entries in prop::collection::vec(-3i64..=3, 20), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let a = Matrix::from_rows(entries.chunks(5).map(|row| row.iter().map(|&v| int(v)).collect()).collect());
        let mut cols: Vec<usize> = (0..5).collect();
        cols.shuffle(&mut rng(seed));
        let mut rows: Vec<usize> = (0..4).collect();
        rows.shuffle(&mut rng(seed ^ 1));
        let b = a.permute_rows(&rows).permute_columns(&cols);
        prop_assert_eq!(a.rank(), b.rank());
        prop_assert!(a.rank() <= 4);
        prop_assert_eq!(a.kernel().len(), 5 - a.rank());
    }

    #[test]
    fn zero_is_neutral(which in 0usize..3, k in 0i32..3, seed in any::<u64>()) {
        let m = &models()[which];
        let e = element(&mut rng(seed), m.algebra(), k, 1);
        prop_assert_eq!(&e + &GradedElement::zero(m.algebra()), e.clone());
        prop_assert!((&e * &GradedElement::zero(m.algebra())).is_zero());
    }
}
