//! Exact D-parametric perturbation series and the algebraic branch series at
//! negative even dimension.

use rayon::prelude::*;
use rug::float::Constant;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::exact::{factorial, ipow, DensePoly, MPoly, Var};
use crate::potential::PotentialSpec;
use crate::spectral::spectral_poly_spin;
use crate::spin::SpinLabel;

/// `E⁽ᵏ⁾(D)` for `k = 0..=K`, with the factored parts `P_k = E⁽ᵏ⁾/(D(D+2))`.
#[derive(Clone, Debug)]
pub struct SeriesTable {
    pub k_max: usize,
    pub potential: PotentialSpec,
    pub terms: Vec<DensePoly>,
    /// `factored[k]` is `Some(P_k)` whenever `D(D+2)` divides `E⁽ᵏ⁾` (k ≥ 1).
    pub factored: Vec<Option<DensePoly>>,
}

impl SeriesTable {
    pub fn term(&self, k: usize) -> &DensePoly {
        &self.terms[k]
    }

    pub fn p(&self, k: usize) -> Option<&DensePoly> {
        self.factored.get(k).and_then(Option::as_ref)
    }

    /// `E⁽ᵏ⁾(D)` at a fixed rational `D`, for every `k`.
    pub fn specialize(&self, d: &Rational) -> Vec<Rational> {
        self.terms.iter().map(|t| t.eval(d)).collect()
    }
}

/// Wavefunction layer `A_k(ζ) = Σ_n a_{k,n}(D) ζ^n`.
#[derive(Clone, Debug)]
pub struct WavefunctionLayer {
    pub k: usize,
    pub coeffs: Vec<DensePoly>,
}

fn d_poly(c: &[Rational]) -> DensePoly {
    DensePoly::new(Var::D, c.to_vec())
}

/// Generate `E⁽ᵏ⁾(D)` for `k ≤ K` with the gauge `A_k(0) = 0` (k ≥ 1).
pub fn series_generate(potential: &PotentialSpec, k_max: usize) -> Result<SeriesTable> {
    series_generate_gauge(potential, k_max, &[]).map(|(t, _)| t)
}

/// Same recursion with the gauge `A_k(0) = gauge[k−1]` (missing entries are 0).
/// Returns the wavefunction layers too.
pub fn series_generate_gauge(
    potential: &PotentialSpec,
    k_max: usize,
    gauge: &[Rational],
) -> Result<(SeriesTable, Vec<WavefunctionLayer>)> {
    let u = potential.perturbation()?;
    let u_coeffs: Vec<(usize, Rational)> = u
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.cmp0().is_ne())
        .map(|(i, c)| (i, c.clone()))
        .collect();
    let u_deg = u.degree().unwrap_or(0);

    let zero = DensePoly::zero(Var::D);
    // (n+1)(n + D/2) as a polynomial in D
    let shift_coeff = |n: usize| d_poly(&[Rational::from((n * (n + 1)) as u64), Rational::from((n as u64 + 1, 2u64))]);
    let minus_half_d = d_poly(&[Rational::new(), Rational::from((-1, 2))]);

    let mut layers: Vec<Vec<DensePoly>> = vec![vec![DensePoly::constant(Var::D, Rational::from(1))]];
    let mut energies: Vec<DensePoly> = vec![d_poly(&[Rational::new(), Rational::from((1, 2))])];

    for k in 1..=k_max {
        let c0 = gauge.get(k - 1).cloned().unwrap_or_default();
        let deg = k * u_deg;
        // rhs_n for n = 1..=deg (the ζ⁰ row is handled separately)
        let prev = &layers[k - 1];
        let rhs: Vec<DensePoly> = (0..=deg)
            .into_par_iter()
            .map(|n| {
                let mut acc = DensePoly::zero(Var::D);
                for (i, ui) in &u_coeffs {
                    if n >= *i {
                        if let Some(a) = prev.get(n - i) {
                            acc = &acc - &a.scale(ui);
                        }
                    }
                }
                for m in 1..k {
                    if let Some(a) = layers[k - m].get(n) {
                        if !a.is_zero() {
                            acc = &acc + &(&energies[m] * a);
                        }
                    }
                }
                acc
            })
            .collect();

        let mut a = vec![zero.clone(); deg + 2];
        a[0] = DensePoly::constant(Var::D, c0.clone());
        for n in (1..=deg).rev() {
            let num = &rhs[n] + &(&shift_coeff(n) * &a[n + 1]);
            a[n] = num.scale(&Rational::from((1u64, 2 * n as u64)));
        }
        // ζ⁰ row: −(D/2)a_{k,1} = rhs₀ + E⁽ᵏ⁾ (rhs₀ holds the m < k terms)
        let ek = &(&minus_half_d * &a[1]) - &rhs[0];
        a.truncate(deg + 1);
        energies.push(ek);
        layers.push(a);
    }

    let d_d2 = d_poly(&[Rational::new(), Rational::from(2), Rational::from(1)]);
    let factored = energies
        .iter()
        .enumerate()
        .map(|(k, e)| if k == 0 { None } else { e.exact_div(&d_d2).ok() })
        .collect();
    let table = SeriesTable {
        k_max,
        potential: potential.clone(),
        terms: energies,
        factored,
    };
    let layers = layers
        .into_iter()
        .enumerate()
        .map(|(k, coeffs)| WavefunctionLayer { k, coeffs })
        .collect();
    Ok((table, layers))
}

/// `Γ(n/2)` split as `(q, has_sqrt_pi)` with `Γ(n/2) = q·√π^{has_sqrt_pi}`.
fn gamma_half(n2: u32) -> (Rational, bool) {
    assert!(n2 > 0, "Γ has a pole at 0");
    if n2.is_multiple_of(2) {
        (Rational::from(factorial(n2 / 2 - 1)), false)
    } else {
        // Γ(m + ½) = (2m)! √π / (4^m m!)
        let m = (n2 - 1) / 2;
        let num = factorial(2 * m);
        let den = ipow(4, m) * factorial(m);
        (Rational::from((num, den)), true)
    }
}

/// `β_k = (−1)^{k+1} 2^{k−2} Γ((3k−1)/2) / [(k+1)! Γ((k+1)/2)]`, exactly.
pub fn beta_k(k: u32) -> Rational {
    assert!(k >= 1);
    let (ga, sa) = gamma_half(3 * k - 1);
    let (gb, sb) = gamma_half(k + 1);
    debug_assert_eq!(sa, sb, "√π factors cancel");
    let two_pow = if k >= 2 {
        Rational::from(ipow(2, k - 2))
    } else {
        Rational::from((1, 2))
    };
    let mut r = two_pow * ga / gb / Rational::from(factorial(k + 1));
    if k.is_multiple_of(2) {
        r = -r;
    }
    r
}

#[derive(Clone, Debug)]
pub struct LeadingCoeffRow {
    pub k: usize,
    pub leading: Rational,
    pub beta: Rational,
    pub ok: bool,
}

/// Compare the leading D-coefficient of every `P_k` with `β_k`.
pub fn leading_coeff_check(table: &SeriesTable) -> Result<Vec<LeadingCoeffRow>> {
    if !table.potential.is_quartic() {
        return Err(Error::InvalidPotential("β_k applies to the quartic only".into()));
    }
    Ok((1..=table.k_max)
        .map(|k| {
            let leading = table.p(k).map(|p| p.leading()).unwrap_or_default();
            let beta = beta_k(k as u32);
            LeadingCoeffRow {
                k,
                ok: leading == beta,
                leading,
                beta,
            }
        })
        .collect())
}

/// 3^{-3/2}: the branch point of the D = −4 ground state.
pub fn g0_minus4(prec: u32) -> Float {
    let three = Float::with_val(prec, 3);
    Float::with_val(prec, three.sqrt() * 3u32).recip()
}

/// Ground-state value at `D = −4` from the trigonometric form of Cardano's
/// formula, on the branch with `E(0) = −2`.
pub fn cardano_value(g: &Float) -> Result<Float> {
    let prec = g.prec();
    let sqrt3 = Float::with_val(prec, 3).sqrt();
    let h = Float::with_val(prec, &sqrt3 * 3u32) * g;
    if h.clone().abs() > 1 {
        return Err(Error::BeyondBranchPoint { g: g.to_f64() });
    }
    // θ = arg(√(1−h²) − i h) = −asin h
    let theta = -Float::with_val(prec, h.asin_ref());
    let pi = Float::with_val(prec, Constant::Pi);
    let angle = Float::with_val(prec, &pi * 5u32) / 6u32 + theta / 3u32;
    let eps = angle.cos() * 2u32;
    Ok(eps * 2u32 / sqrt3)
}

/// Same for an exact coupling; `|g| > 3^{-3/2}` is rejected exactly.
pub fn cardano_value_exact(g: &Rational, prec: u32) -> Result<Float> {
    let g2 = Rational::from(g * g);
    if g2 * 27u32 > 1u32 {
        return Err(Error::BeyondBranchPoint { g: g.to_f64() });
    }
    cardano_value(&Float::with_val(prec, g))
}

/// Taylor coefficients of the `E(0) = −2` root of `E³ − 4E − 16g = 0`, by
/// reverting `g = (8x − 6x² + x³)/16` with `E = −2 + x`.
pub fn cardano_series(order: usize) -> Vec<Rational> {
    // x = 2g + (6x² − x³)/8, iterated; each pass fixes one more order
    let n = order + 1;
    let mut x = vec![Rational::new(); n];
    if n > 1 {
        x[1] = Rational::from(2);
    }
    for _ in 0..order {
        let x2 = series_mul(&x, &x, n);
        let x3 = series_mul(&x2, &x, n);
        let mut next = vec![Rational::new(); n];
        if n > 1 {
            next[1] = Rational::from(2);
        }
        for i in 0..n {
            next[i] += (&x2[i] * Rational::from((6, 8))) - Rational::from(&x3[i] / 8u32);
        }
        x = next;
    }
    x[0] = Rational::from(-2);
    x
}

fn series_mul(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::new(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.cmp0().is_eq() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += Rational::from(x * y);
        }
    }
    out
}

/// `1/a` mod `g^n`; `a[0]` must be nonzero.
fn series_inv(a: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::new(); n];
    let inv0 = Rational::from(a[0].recip_ref());
    out[0] = inv0.clone();
    for k in 1..n {
        let mut s = Rational::new();
        for i in 1..=k.min(a.len() - 1) {
            s += Rational::from(&a[i] * &out[k - i]);
        }
        out[k] = -(s * &inv0);
    }
    out
}

/// Evaluate `Σ c_{ab} E^a g^b` with `E = e(g)` as a series mod `g^n`.
fn eval_bivar_series(r: &MPoly, e: &[Rational], n: usize) -> Result<Vec<Rational>> {
    let deg_e = r.degree_in(Var::E)?.unwrap_or(0) as usize;
    let mut pows = vec![{
        let mut one = vec![Rational::new(); n];
        one[0] = Rational::from(1);
        one
    }];
    for _ in 0..deg_e {
        let next = series_mul(pows.last().unwrap(), e, n);
        pows.push(next);
    }
    let ie = r.vars().iter().position(|v| *v == Var::E).expect("E present");
    let ig = r.vars().iter().position(|v| *v == Var::G).expect("g present");
    let mut out = vec![Rational::new(); n];
    for (exps, c) in r.terms() {
        let (a, b) = (exps[ie] as usize, exps[ig] as usize);
        for i in 0..n.saturating_sub(b) {
            if pows[a][i].cmp0().is_ne() {
                out[i + b] += Rational::from(c * &pows[a][i]);
            }
        }
    }
    Ok(out)
}

/// Branch of `R_M(E,g) = 0` through `E(0) = −M`, to order `g^K`, by Newton
/// iteration in truncated power series (precision doubles per step).
pub fn algebraic_branch_series(m: u32, k_max: usize, potential: &PotentialSpec) -> Result<Vec<Rational>> {
    let r = spectral_poly_spin(SpinLabel::new(m), potential)?.det();
    let re = r.derivative(Var::E)?;
    let e0 = Rational::from(-(m as i64));
    let at0 = |p: &MPoly| -> Result<Rational> {
        p.eval(&[(Var::E, e0.clone()), (Var::G, Rational::new())])
    };
    if at0(&r)?.cmp0().is_ne() {
        return Err(Error::InvalidArgument(format!("E = −{m} is not a root of R_{m}(E, 0)")));
    }
    if at0(&re)?.cmp0().is_eq() {
        return Err(Error::InvalidArgument(format!("E = −{m} is a multiple root at g = 0")));
    }
    let n_total = k_max + 1;
    let mut e = vec![e0];
    let mut prec = 1usize;
    while prec < n_total {
        prec = (2 * prec).min(n_total);
        e.resize(prec, Rational::new());
        let f = eval_bivar_series(&r, &e, prec)?;
        let fp = eval_bivar_series(&re, &e, prec)?;
        let step = series_mul(&f, &series_inv(&fp, prec), prec);
        for (x, s) in e.iter_mut().zip(step) {
            *x -= s;
        }
    }
    e.truncate(n_total);
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn low_orders_quartic() {
        let t = series_generate(&PotentialSpec::quartic(), 7).unwrap();
        assert_eq!(t.term(0), &d_poly(&[q(0, 1), q(1, 2)]));
        assert_eq!(t.term(1), &d_poly(&[q(0, 1), q(1, 2), q(1, 4)]));
        let at = t.specialize(&q(-4, 1));
        let want = [q(-2, 1), q(2, 1), q(3, 1), q(8, 1), q(105, 4), q(96, 1), q(3003, 8), q(1536, 1)];
        assert_eq!(at, want);
        assert_eq!(t.term(1).eval(&q(1, 1)), q(3, 4));
    }

    #[test]
    fn beta_small() {
        assert_eq!(beta_k(1), q(1, 4));
        assert_eq!(beta_k(2), q(-1, 4));
        let t = series_generate(&PotentialSpec::quartic(), 8).unwrap();
        assert!(leading_coeff_check(&t).unwrap().iter().all(|r| r.ok));
    }

    #[test]
    fn gauge_does_not_change_energies() {
        let p = PotentialSpec::quartic();
        let (a, _) = series_generate_gauge(&p, 5, &[]).unwrap();
        let gauge: Vec<Rational> = (1..=5).map(|i| q(2 * i - 7, 3)).collect();
        let (b, layers) = series_generate_gauge(&p, 5, &gauge).unwrap();
        assert_eq!(a.terms, b.terms);
        assert_eq!(layers[3].coeffs[0], DensePoly::constant(Var::D, q(-1, 3)));
    }

    #[test]
    fn cardano_agrees_with_branch() {
        let c = cardano_series(9);
        let b = algebraic_branch_series(2, 9, &PotentialSpec::quartic()).unwrap();
        assert_eq!(c, b);
        assert_eq!(algebraic_branch_series(1, 5, &PotentialSpec::quartic()).unwrap(), vec![q(-1, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1)]);
    }

    #[test]
    fn cardano_values() {
        let prec = 200;
        let z = cardano_value(&Float::with_val(prec, 0)).unwrap();
        assert!((z + 2u32).abs() < Float::with_val(prec, 1e-55));
        let g0 = g0_minus4(prec);
        let at_g0 = cardano_value(&g0).unwrap();
        let want = -Float::with_val(prec, 3).sqrt().recip() * 2u32;
        assert!((at_g0 - want).abs() < Float::with_val(prec, 1e-25));
        assert!(matches!(
            cardano_value_exact(&q(1, 5), prec),
            Err(Error::BeyondBranchPoint { .. })
        ));
    }
}
