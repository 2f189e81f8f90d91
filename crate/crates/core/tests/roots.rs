use std::sync::OnceLock;

use negdim_core::bigfloat::BigComplex;
use negdim_core::exact::{DensePoly, Var};
use negdim_core::potential::PotentialSpec;
use negdim_core::roots::*;
use negdim_core::series::{series_generate, SeriesTable};
use proptest::prelude::*;
use rug::{Float, Rational};

const K: usize = 30;

fn table() -> &'static SeriesTable {
    static T: OnceLock<SeriesTable> = OnceLock::new();
    T.get_or_init(|| series_generate(&PotentialSpec::quartic(), K).unwrap())
}

fn sets() -> &'static Vec<RootSet> {
    static S: OnceLock<Vec<RootSet>> = OnceLock::new();
    S.get_or_init(|| {
        let orders: Vec<usize> = (5..=K).collect();
        roots_for_orders(table(), &orders, &RootConfig::default())
            .into_iter()
            .map(|r| classify_roots(&r.unwrap(), DEFAULT_WINDOW))
            .collect()
    })
}

fn from_roots(rs: &[i64]) -> DensePoly {
    rs.iter().fold(DensePoly::from_ints(Var::D, &[1]), |acc, &r| &acc * &DensePoly::from_ints(Var::D, &[-r, 1]))
}

#[test]
fn residual_certificates() {
    for rs in sets() {
        for r in &rs.roots {
            assert!(r.exact || r.residual_log2 <= -((rs.bits / 2) as f64), "k={} residual {}", rs.k, r.residual_log2);
        }
    }
}

#[test]
fn vieta_sum_and_product() {
    for rs in sets() {
        let p = table().p(rs.k).unwrap();
        let n = p.degree().unwrap();
        let bits = rs.bits;
        let lead = Float::with_val(bits, &p.coeff(n));
        let mut sum = BigComplex::zero(bits);
        let mut prod = BigComplex::from_f64(bits, 1.0, 0.0);
        for r in &rs.roots {
            sum = &sum + &r.value;
            prod = &prod * &r.value;
        }
        let want_sum = -Float::with_val(bits, &p.coeff(n - 1)) / &lead;
        let mut want_prod = Float::with_val(bits, &p.coeff(0)) / &lead;
        if n % 2 == 1 {
            want_prod = -want_prod;
        }
        let tol = 2f64.powi(-((bits / 4) as i32));
        let rel = |x: &BigComplex, w: &Float| {
            (x - &BigComplex::real(w.clone())).abs().to_f64() / w.clone().abs().to_f64().max(1.0)
        };
        assert!(rel(&sum, &want_sum) < tol, "k={} sum", rs.k);
        assert!(rel(&prod, &want_prod) < tol, "k={} product", rs.k);
    }
}

#[test]
fn conjugates_come_in_adjacent_pairs() {
    for rs in sets() {
        let mut i = 0;
        while i < rs.roots.len() {
            let z = &rs.roots[i].value;
            if z.im.is_zero() {
                i += 1;
                continue;
            }
            let w = &rs.roots[i + 1].value;
            assert!(z.im.is_sign_positive(), "k={}: upper member first", rs.k);
            assert_eq!((&z.re, &z.im), (&w.re, &Float::with_val(w.prec(), -&w.im)), "k={}", rs.k);
            i += 2;
        }
    }
}

#[test]
fn deterministic() {
    let a = roots_of_order(table(), 17, &RootConfig::default()).unwrap();
    let b = roots_of_order(table(), 17, &RootConfig::default()).unwrap();
    assert_eq!(a.bits, b.bits);
    for (x, y) in a.roots.iter().zip(&b.roots) {
        assert_eq!((&x.value.re, &x.value.im), (&y.value.re, &y.value.im));
    }
}

fn offset_signs(m: u32, from: usize) -> Vec<(usize, bool)> {
    sets()
        .iter()
        .filter(|rs| rs.k >= from)
        .map(|rs| {
            let z = rs.cluster_offset(m).unwrap_or_else(|| panic!("k={} lacks cluster(-{})", rs.k, 2 * m));
            assert!(z.im.is_zero(), "k={}: complex offset", rs.k);
            (rs.k, z.re.is_sign_positive())
        })
        .collect()
}

#[test]
fn cluster_offsets_alternate() {
    for (m, from) in [(2, 10), (3, 21)] {
        let s = offset_signs(m, from);
        assert!(!s.is_empty());
        for w in s.windows(2) {
            assert_ne!(w[0].1, w[1].1, "M={m}: k={} and k={}", w[0].0, w[1].0);
        }
    }
}

#[test]
fn small_odd_orders_give_a_pair_near_minus_four() {
    for k in [5, 7, 9] {
        let rs = sets().iter().find(|s| s.k == k).unwrap();
        let pair: Vec<_> = rs.labelled(RootLabel::Cluster(2)).collect();
        assert_eq!(pair.len(), 2, "k={k}");
        assert!(!pair[0].is_real());
    }
}

#[test]
fn fixed_precision_respects_request() {
    let rs = roots_of_order(table(), 12, &RootConfig::fixed(512)).unwrap();
    assert_eq!(rs.bits, 512);
    let capped = RootConfig { max_bits: 128, ..Default::default() };
    assert!(matches!(roots_of_order(table(), 30, &capped), Err(negdim_core::error::Error::NonConvergence { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn integer_roots_are_recovered_exactly(rs in prop::collection::vec(-12i64..=12, 1..8)) {
        let p = from_roots(&rs);
        let set = find_roots(&p, &RootConfig::default()).unwrap();
        let mut got: Vec<i64> = set.roots.iter().map(|r| {
            assert!(r.is_real());
            r.value.re.to_f64().round() as i64
        }).collect();
        let mut want = rs.clone();
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn mixed_roots_satisfy_residual_bound(re in -5i64..=5, im in 1i64..=4, c in prop::collection::vec(-9i64..=9, 3..7)) {
        // (x² − 2re·x + re² + im²) · q(x) with a random q
        let quad = DensePoly::new(Var::D, vec![Rational::from(re * re + im * im), Rational::from(-2 * re), Rational::from(1)]);
        let mut c = c;
        if c.last() == Some(&0) { *c.last_mut().unwrap() = 1; }
        let p = &quad * &DensePoly::from_ints(Var::D, &c);
        let set = find_roots(&p, &RootConfig::default()).unwrap();
        prop_assert_eq!(set.roots.len(), p.degree().unwrap());
        let hit = set.roots.iter().any(|r| {
            (&r.value - &BigComplex::from_f64(set.bits, re as f64, im as f64)).abs().to_f64() < 1e-20
        });
        prop_assert!(hit);
    }
}
