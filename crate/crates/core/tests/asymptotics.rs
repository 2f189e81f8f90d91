use std::sync::OnceLock;

use negdim_core::asymptotics::*;
use negdim_core::potential::PotentialSpec;
use negdim_core::reference::closed_form_singularity;
use negdim_core::series::{algebraic_branch_series, series_generate, SeriesTable};
use rug::{Float, Rational};

const K: usize = 60;
/// Frozen from the exact series: |ratio − 1| at k = 60 for the general-D model.
const GENERAL_D_BOUND_K60: f64 = 2e-3;
/// Same for the negative-even-D model, M = 2, 3, 4.
const SPECIAL_D_BOUND_K60: f64 = 1e-2;

fn table() -> &'static SeriesTable {
    static T: OnceLock<SeriesTable> = OnceLock::new();
    T.get_or_init(|| series_generate(&PotentialSpec::quartic(), K).unwrap())
}

#[test]
fn numeric_route_reproduces_closed_forms() {
    let bits = 256;
    for m in [2u32, 3] {
        let s = singularity_data_numeric(m, &PotentialSpec::quartic(), bits).unwrap();
        assert_eq!(s.provenance, SingularityProvenance::Numeric);
        let half = -((bits / 2) as f64);
        assert!(s.residual_log2.0 <= half && s.residual_log2.1 <= half, "{:?}", s.residual_log2);
        let (e0, g0, c) = closed_form_singularity(m, bits).unwrap();
        for (got, want) in [(s.e0_real().unwrap(), e0), (s.g0_real().unwrap(), g0), (s.c_real().unwrap(), c)] {
            let d = Float::with_val(bits, &got - &want).abs().to_f64();
            assert!(d < 1e-60, "M={m}: {d}");
        }
    }
}

#[test]
fn m2_identity_is_exact() {
    let id = quartic_m2_identity().unwrap();
    assert!(id.prefactor_identity && id.growth_identity);
    assert_eq!(id.c, Rational::from((8, 9)));
    assert_eq!(id.g0_sq, Rational::from((1, 27)));
}

#[test]
fn radius_matches_branch_point() {
    for m in [2u32, 3] {
        let s = singularity_data(m, &PotentialSpec::quartic(), 256).unwrap();
        let g0 = s.g0_real().unwrap().to_f64();
        let b = algebraic_branch_series(m, K, &PotentialSpec::quartic()).unwrap();
        for k in 40..=K {
            let r = series_radius_estimate(&b[..=k], 256).unwrap();
            assert!((r / g0 - 1.0).abs() < 0.02, "M={m} k={k}: {r} vs {g0}");
        }
    }
}

#[test]
fn general_dimension_model_converges() {
    let reg = ModelRegistry::default();
    let model = reg.build("general-D", &ModelParams::default()).unwrap();
    for d in [1i64, 2, 3, -1, -3] {
        let rep = series_report(table(), &Rational::from(d), &[20, 40, 60], model.as_ref(), 256).unwrap();
        let last = rep.rows.last().unwrap().ratio.to_f64();
        assert!((last - 1.0).abs() < GENERAL_D_BOUND_K60, "D={d}: {last}");
        assert!(rep.monotone, "D={d}");
    }
}

#[test]
fn negative_even_dimension_model_converges() {
    let reg = ModelRegistry::default();
    for m in [2u32, 3, 4] {
        let s = singularity_data(m, &PotentialSpec::quartic(), 256).unwrap();
        let model = reg.build("special-D", &ModelParams { singularity: Some(s), ..Default::default() }).unwrap();
        let d = Rational::from(-2 * m as i64);
        let rep = series_report(table(), &d, &[20, 30, 40, 50, 60], model.as_ref(), 256).unwrap();
        assert!(rep.monotone && rep.one_sided, "M={m}");
        let last = rep.rows.last().unwrap().ratio.to_f64();
        assert!((last - 1.0).abs() < SPECIAL_D_BOUND_K60, "M={m}: {last}");
    }
}

#[test]
fn m4_has_no_closed_form_but_is_certified() {
    let s = singularity_data(4, &PotentialSpec::quartic(), 256).unwrap();
    assert_eq!(s.provenance, SingularityProvenance::Numeric);
    let g0 = s.g0_real().unwrap().to_f64();
    assert!(g0 > 0.0 && ((s.radius_estimate / g0) - 1.0).abs() < 0.01);
}

#[test]
fn registry_rejects_missing_inputs() {
    let reg = ModelRegistry::default();
    assert!(reg.build("special-D", &ModelParams::default()).is_err());
    assert!(reg.build("nope", &ModelParams::default()).is_err());
}
