use negdim_core::exact::{MPoly, Var};
use negdim_core::potential::PotentialSpec;
use negdim_core::spectral::*;
use negdim_core::spin::{make_spin_matrices, trace_pm_formula, trace_ppmm_formula, trace_word, Basis, SpinLabel};
use negdim_core::verify::random_potential;
use proptest::prelude::*;
use rug::Rational;

#[test]
fn algebra_holds_in_both_bases() {
    for tj in 0..=12 {
        for b in [Basis::Standard, Basis::Monomial] {
            assert!(make_spin_matrices(SpinLabel::new(tj), b).check_algebra(), "2j={tj} {b:?}");
        }
    }
}

#[test]
fn traces_match_closed_forms() {
    for tj in 0..=8 {
        let j = SpinLabel::new(tj);
        assert_eq!(trace_word(j, &[true, false]), trace_pm_formula(j));
        assert_eq!(trace_word(j, &[true, true, false, false]), trace_ppmm_formula(j));
    }
    // j = 1: (2/3)·1·2·3 = 4 and (2/15)·1·2·3·1·5 = 4
    assert_eq!(trace_pm_formula(SpinLabel::new(2)), 4);
    assert_eq!(trace_ppmm_formula(SpinLabel::new(2)), 4);
}

#[test]
fn harmonic_specialization() {
    let q = PotentialSpec::quartic();
    for tj in 0..=8 {
        let r = spectral_poly_spin(SpinLabel::new(tj), &q).unwrap().tilde();
        let r0 = r.specialize(Var::G, &Rational::new()).unwrap().with_vars(&[Var::E, Var::G]).unwrap();
        assert_eq!(r0, harmonic_tilde(tj), "2j={tj}");
    }
}

#[test]
fn top_coefficients_follow_traces() {
    for p in [PotentialSpec::quartic(), PotentialSpec::sextic(), PotentialSpec::generic(4)] {
        for tj in 0..=8 {
            let j = SpinLabel::new(tj);
            let sp = spectral_poly_spin(j, &p).unwrap();
            let got = top_coefficients(&sp, 4).unwrap();
            let want = large_e_coefficients(j, &p);
            assert_eq!(&got[..], &want[..got.len()], "{} 2j={tj}", p.name);
        }
    }
}

#[test]
fn constructions_agree_on_named_potentials() {
    let reg = ConstructionRegistry::default();
    for p in [PotentialSpec::quartic(), PotentialSpec::sextic(), random_potential(1).unwrap()] {
        for tj in 0..=8 {
            let polys: Vec<MPoly> = reg.iter().map(|c| c.build(SpinLabel::new(tj), &p).unwrap().monic()).collect();
            assert!(polys.windows(2).all(|w| w[0] == w[1]), "{} 2j={tj}", p.name);
        }
    }
}

#[test]
fn generic_cmatrix_equals_spin_determinant() {
    let p = PotentialSpec::generic(5);
    for tj in 0..=5 {
        let j = SpinLabel::new(tj);
        assert_eq!(spectral_poly_cmatrix(j, &p).unwrap().det(), spectral_poly_spin(j, &p).unwrap().det());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constructions_agree_on_random_potentials(seed in any::<u64>(), tj in 0u32..=6) {
        let p = random_potential(seed).unwrap();
        let j = SpinLabel::new(tj);
        let a = spectral_poly_spin(j, &p).unwrap().monic();
        prop_assert_eq!(&a, &spectral_poly_cmatrix(j, &p).unwrap().monic());
        prop_assert_eq!(&a, &spectral_poly_recursion(j, &p).unwrap().monic());
    }

    #[test]
    fn determinant_has_degree_two_j_plus_one(tj in 0u32..=10) {
        let r = spectral_poly_spin(SpinLabel::new(tj), &PotentialSpec::quartic()).unwrap().det();
        prop_assert_eq!(r.degree_in(Var::E).unwrap(), Some(tj + 1));
    }
}
