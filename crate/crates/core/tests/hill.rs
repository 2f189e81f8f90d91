use negdim_core::exact::parse_decimal;
use negdim_core::hill::*;
use negdim_core::potential::PotentialSpec;
use negdim_core::series::series_generate;
use rug::ops::Pow;
use rug::{Float, Rational};

fn q(s: &str) -> Rational {
    parse_decimal(s).unwrap()
}

#[test]
fn small_coupling_matches_partial_sums() {
    let g = q("0.01");
    let table = series_generate(&PotentialSpec::quartic(), 8).unwrap();
    let coeffs = table.specialize(&Rational::from(1));
    let mut sum = Float::with_val(256, 0);
    let gf = Float::with_val(256, &g);
    for (k, c) in coeffs.iter().enumerate().take(8) {
        sum += Float::with_val(256, c) * Float::with_val(256, (&gf).pow(k as u32));
    }
    let tail = Float::with_val(256, &coeffs[8]).to_f64().abs() * 0.01f64.powi(8);
    let s = hill_eigenvalues(&Rational::from(1), &PotentialSpec::quartic(), &g, 1, &HillConfig::default()).unwrap();
    let diff = (s.levels[0].e.to_f64() - sum.to_f64()).abs();
    assert!(diff < 2.0 * tail, "diff {diff} tail {tail}");
    assert!(s.levels[0].converged);
}

#[test]
fn agreement_grows_with_truncation() {
    let p = PotentialSpec::quartic();
    let mut last = 0.0;
    for n in [16, 24, 32, 40] {
        let cfg = HillConfig { truncation: n, delta_n: 8, ..Default::default() };
        let s = hill_eigenvalues(&q("-1.3"), &p, &q("1"), 2, &cfg).unwrap();
        let d = s.levels[0].agreement_digits;
        assert!(d >= last - 0.5, "N={n}: {d} after {last}");
        last = d;
    }
    assert!(last > 8.0);
}

/// Just above and below `𝒟 = −2M` the spectrum contains the real roots of
/// the spectral polynomial.
#[test]
fn algebraic_roots_are_limits() {
    let p = PotentialSpec::quartic();
    let g = q("1");
    let eps = q("1e-9");
    for two_j in 1..=3u32 {
        let dcal = Rational::from(-2 * two_j as i64);
        let roots = algebraic_levels(two_j, &p, &g, 256).unwrap();
        assert!(!roots.is_empty());
        let mut near = Vec::new();
        for side in [Rational::from(&dcal + &eps), Rational::from(&dcal - &eps)] {
            let s = hill_eigenvalues(&side, &p, &g, 2 * two_j as usize + 2, &HillConfig::default()).unwrap();
            near.extend(s.levels.into_iter().map(|l| l.e.to_f64()));
        }
        for r in &roots {
            let best = near.iter().map(|e| (e - r.to_f64()).abs()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-6, "2j={two_j}: root {r} missed by {best}");
        }
    }
}

#[test]
fn harmonic_trajectory_is_a_line() {
    let grid = dcal_grid(&q("-3"), &q("2"), &q("0.5")).unwrap();
    let cfg = HillConfig { truncation: 12, delta_n: 4, ..Default::default() };
    let t = trace_trajectory(0, &grid, &PotentialSpec::harmonic(), &Rational::new(), &cfg).unwrap();
    assert_eq!(t.len(), grid.len());
    for p in &t {
        assert!((p.e.to_f64() - p.dcal.to_f64() / 2.0).abs() < 1e-10);
        assert!(!p.merged);
    }
}

#[test]
fn ground_and_first_excited_merge() {
    let grid = dcal_grid(&q("-2.8"), &q("-2.4"), &q("0.05")).unwrap();
    let t = trace_trajectories(2, &grid, &PotentialSpec::quartic(), &q("1"), &HillConfig::default()).unwrap();
    let (lo0, hi0) = merge_interval(&t[0]).expect("ground level merges");
    let (lo1, hi1) = merge_interval(&t[1]).expect("first excited level merges");
    assert_eq!((lo0.clone(), hi0.clone()), (lo1, hi1));
    assert!(lo0 > q("-2.8") && hi0 < q("-2.4"));
    // after the merge both tracks sit on the same complex pair
    let a = &t[0][0];
    let b = &t[1][0];
    assert!(a.merged && b.merged);
    assert!((a.e.to_f64() - b.e.to_f64()).abs() < 1e-12);
}

#[test]
fn alpha_scan_prefers_the_exact_gaussian_for_the_oscillator() {
    let cfg = HillConfig { truncation: 16, delta_n: 4, ..Default::default() };
    let a = select_alpha(&[q("-1"), q("2")], &PotentialSpec::harmonic(), &Rational::new(), 3, &cfg).unwrap();
    assert_eq!(a, 1);
    // strong coupling wants a narrower Gaussian than weak coupling
    let strong = select_alpha(&[q("1")], &PotentialSpec::quartic(), &q("1"), 4, &HillConfig::default()).unwrap();
    let weak = select_alpha(&[q("1")], &PotentialSpec::quartic(), &q("0.01"), 4, &HillConfig::default()).unwrap();
    assert!(strong > weak, "{strong} vs {weak}");
}
