use negdim_core::exact::{det_cofactor, det_fraction_free, DensePoly, Matrix, MPoly, PolyJson, Var};
use proptest::prelude::*;
use rug::Rational;

const EG: [Var; 2] = [Var::E, Var::G];

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Rational::from((n, d)))
}

fn small_mpoly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0u32..4, 0u32..3), small_rational()), 0..6).prop_map(|ts| {
        MPoly::from_terms(&EG, ts.into_iter().map(|((a, b), c)| (vec![a, b], c))).unwrap()
    })
}

fn small_dense() -> impl Strategy<Value = DensePoly> {
    prop::collection::vec(small_rational(), 0..6).prop_map(|c| DensePoly::new(Var::D, c))
}

fn digit_matrix(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec((-9i64..=9, 1i64..=9), n * n).prop_map(move |v| {
        Matrix::from_fn(n, n, |i, j| Rational::from(v[i * n + j])).unwrap()
    })
}

proptest! {
    #[test]
    fn addition_associates(a in small_mpoly(), b in small_mpoly(), c in small_mpoly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn multiplication_distributes(a in small_mpoly(), b in small_mpoly(), c in small_mpoly()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn dense_ring_axioms(a in small_dense(), b in small_dense(), c in small_dense()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn bareiss_matches_cofactor(m in (1usize..=4).prop_flat_map(digit_matrix)) {
        prop_assert_eq!(det_fraction_free(&m).unwrap(), det_cofactor(&m).unwrap());
    }

    #[test]
    fn specialize_is_a_homomorphism(a in small_mpoly(), b in small_mpoly(), g in small_rational()) {
        let lhs = (&a * &b).specialize(Var::G, &g).unwrap();
        let rhs = &a.specialize(Var::G, &g).unwrap() * &b.specialize(Var::G, &g).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dense_eval_is_a_homomorphism(a in small_dense(), b in small_dense(), x in small_rational()) {
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
    }

    #[test]
    fn json_round_trip(a in small_mpoly(), d in small_dense()) {
        let s = PolyJson::from_mpoly(&a).to_json_string();
        prop_assert_eq!(PolyJson::parse(&s).unwrap().to_mpoly().unwrap(), a);
        let s = PolyJson::from_dense(&d).to_json_string();
        prop_assert_eq!(PolyJson::parse(&s).unwrap().to_dense().unwrap(), d);
    }

    #[test]
    fn exact_division_inverts_product(a in small_mpoly(), b in small_mpoly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }
}

#[test]
fn json_schema_shape() {
    let p = MPoly::from_terms(&EG, [(vec![3, 0], Rational::from(-1)), (vec![0, 1], Rational::from((16, 3)))]).unwrap();
    let v: serde_json::Value = serde_json::from_str(&PolyJson::from_mpoly(&p).to_json_string()).unwrap();
    assert_eq!(v["var"], serde_json::json!(["E", "g"]));
    let coefs: Vec<&str> = v["terms"].as_array().unwrap().iter().map(|t| t["coef"].as_str().unwrap()).collect();
    assert!(coefs.contains(&"16/3") && coefs.contains(&"-1"));
    assert!(PolyJson::parse(r#"{"var":["E"],"terms":[{"deg":[1],"coef":"0.5"}]}"#).and_then(|j| j.to_mpoly()).is_err());
}
