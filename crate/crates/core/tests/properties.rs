use std::sync::OnceLock;

use ekp_core::cayley_dickson::CdElem;
use ekp_core::jordan::{jordan_product, JordanStructure};
use ekp_core::poly::{print_poly_file, Point};
use ekp_core::tau::tau;
use ekp_core::{herm3_norm, parse_poly, parse_poly_file, CubicForm, Monomial, Poly, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn point_of(n: usize) -> impl Strategy<Value = Point> {
    proptest::collection::vec(rational(), n)
}

fn cubic_poly(n: usize) -> impl Strategy<Value = Poly> {
    let monos = Monomial::all_of_degree(n, 3);
    let len = monos.len();
    proptest::collection::vec(rational(), len).prop_map(move |cs| {
        Poly::from_terms(n, cs.into_iter().zip(monos.iter().map(|m| m.exponents().to_vec()))).unwrap()
    })
}

fn herm_c() -> &'static (CubicForm, JordanStructure) {
    static CELL: OnceLock<(CubicForm, JordanStructure)> = OnceLock::new();
    CELL.get_or_init(|| {
        let e = herm3_norm(1).unwrap();
        let j = jordan_product(&e.form, e.unit.as_ref().unwrap()).unwrap();
        (e.form, j)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_round_trip(p in cubic_poly(4)) {
        prop_assert_eq!(parse_poly(&p.to_string(), Some(4)).unwrap(), p.clone());
        prop_assert_eq!(parse_poly_file(&print_poly_file(&p)).unwrap(), p);
    }

    #[test]
    fn polarization_is_symmetric_and_diagonal(a in point_of(9), b in point_of(9), c in point_of(9)) {
        let (f, _) = herm_c();
        let q = f.polarize(&a, &b, &c).unwrap();
        prop_assert_eq!(&q, &f.polarize(&b, &c, &a).unwrap());
        prop_assert_eq!(&q, &f.polarize(&c, &a, &b).unwrap());
        prop_assert_eq!(f.polarize(&a, &a, &a).unwrap(), f.eval(&a).unwrap());
    }

    #[test]
    fn tau_is_symmetric_of_degree_minus_two(a in point_of(6), s in 1i64..5) {
        let f = herm3_norm(0).unwrap().form;
        prop_assume!(f.eval(&a).unwrap() != Rational::from_integer(0.into()));
        let t = tau(&f, &a).unwrap().entries;
        prop_assert!(t.is_symmetric());
        let sa: Point = a.iter().map(|x| x * Rational::from_integer(s.into())).collect();
        let ts = tau(&f, &sa).unwrap().entries;
        prop_assert_eq!(ts.scale(&Rational::from_integer((s * s).into())), t);
    }

    #[test]
    fn octonion_norm_is_multiplicative(a in point_of(8), b in point_of(8)) {
        let (x, y) = (CdElem::new(3, a).unwrap(), CdElem::new(3, b).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().norm(), x.norm() * y.norm());
        prop_assert_eq!(x.mul(&y).unwrap().conj(), y.conj().mul(&x.conj()).unwrap());
    }

    #[test]
    fn complex_hermitian_jordan_laws(a in point_of(9), b in point_of(9)) {
        let (f, j) = herm_c();
        let ab = j.mul(&a, &b).unwrap();
        prop_assert_eq!(&ab, &j.mul(&b, &a).unwrap());
        let a2 = j.square(&a).unwrap();
        prop_assert_eq!(
            j.mul(&j.mul(&a2, &b).unwrap(), &a).unwrap(),
            j.mul(&a2, &ab).unwrap()
        );
        let pb = j.quadratic_rep(&a).unwrap().mul_vec(&b).unwrap();
        let fa = f.eval(&a).unwrap();
        prop_assert_eq!(f.eval(&pb).unwrap(), &fa * &fa * f.eval(&b).unwrap());
    }
}
