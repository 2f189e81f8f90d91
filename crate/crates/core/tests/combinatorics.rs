use negdim_core::combinatorics::*;
use negdim_core::potential::PotentialSpec;
use proptest::prelude::*;
use rug::{Integer, Rational};

#[test]
fn three_routes_to_n_and_n_tilde() {
    for m in 0..=12 {
        assert!(degeneracy_nj(m).consistent(), "M={m}");
    }
}

#[test]
fn dimension_sums() {
    for m in 0..=12u32 {
        let t = degeneracy_nj(m);
        // each site carries a 4-dimensional space: spin 1/2 plus two singlets
        assert_eq!(t.n_dimension(), Integer::from(Integer::u_pow_u(4, m)), "M={m}");
        assert_eq!(t.n_tilde_dimension(), Integer::from(Integer::u_pow_u(2, m)), "M={m}");
    }
}

#[test]
fn small_tables_by_hand() {
    // M = 1: two singlets and a doublet
    let n = n_recursion(1);
    assert_eq!(n.get(&0), Some(&Integer::from(2)));
    assert_eq!(n.get(&1), Some(&Integer::from(1)));
    // M = 2 fermions: 1/2 ⊗ 1/2 = 0 ⊕ 1
    let nt = n_tilde_recursion(2);
    assert_eq!(nt.get(&0), Some(&Integer::from(1)));
    assert_eq!(nt.get(&2), Some(&Integer::from(1)));
}

#[test]
fn z_identity() {
    for m in 0..=12 {
        let r = z_coefficient_identity(m).unwrap();
        assert!(r.holds && r.truncation && r.cancellation, "M={m}");
    }
}

#[test]
fn tensor_factorization_small() {
    for m in 1..=4 {
        let r = dunne_halliday_check(m, &PotentialSpec::quartic()).unwrap();
        assert!(r.holds, "M={m}: {:?}", r.rows);
    }
    let r = dunne_halliday_check(3, &PotentialSpec::sextic()).unwrap();
    assert!(r.holds);
}

#[test]
fn m_in_physical_dimensions() {
    for l in 0..10u32 {
        assert_eq!(degeneracy_m(&Rational::from(3), l).unwrap(), 2 * l + 1);
        assert_eq!(degeneracy_m(&Rational::from(2), l).unwrap(), if l == 0 { 1 } else { 2 });
        assert_eq!(degeneracy_m(&Rational::from(1), l).unwrap(), u32::from(l < 2));
    }
    // D = 4: (l+1)²
    for l in 0..10u32 {
        assert_eq!(degeneracy_m(&Rational::from(4), l).unwrap(), (l + 1) * (l + 1));
    }
}

proptest! {
    #[test]
    fn forms_agree_at_rational_d(n in -40i64..40, d in 1i64..6, l in 0u32..12) {
        let x = Rational::from((n, d));
        let a = degeneracy_m_poly(l, MForm::Direct).unwrap().eval(&x);
        let b = degeneracy_m_poly(l, MForm::Reflected).unwrap().eval(&x);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn closed_forms_vanish_outside_range(m in 0u32..10, extra in 1u32..6) {
        prop_assert_eq!(n_closed(m + extra, m), 0);
        prop_assert_eq!(n_tilde_closed(m + extra, m), 0);
    }
}
