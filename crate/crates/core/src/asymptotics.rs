//! Singularity data of the negative-even-dimension branches and the
//! large-order formulas built on it.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::bigfloat::{self, BigComplex};
use crate::error::{Error, Result};
use crate::exact::{det_fraction_free, factorial, DensePoly, MPoly, Matrix, Var};
use crate::potential::PotentialSpec;
use crate::roots::{find_roots, RootConfig, RootSet};
use crate::series::{algebraic_branch_series, SeriesTable};
use crate::spectral::spectral_poly_spin;
use crate::spin::SpinLabel;

/// Order of the branch series used for the radius estimate.
pub const BRANCH_ORDER: usize = 40;
/// Relative tolerance between a candidate `|g₀|` and the estimated radius.
pub const RADIUS_TOLERANCE: f64 = 0.05;

// ---------------------------------------------------------------------------
// Elimination

/// Coefficient `s_{j,i}` of the `j`-th subresultant of `a` and `b` (lists of
/// coefficients in ascending powers, entries univariate in the parameter).
/// `j = i = 0` gives the resultant.
pub fn subresultant_coeff(a: &[DensePoly], b: &[DensePoly], j: usize, i: usize) -> Result<DensePoly> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    if j > n.min(m) || i > j {
        return Err(Error::InvalidArgument(format!("subresultant index ({j},{i}) out of range")));
    }
    let var = a[0].var();
    let size = m + n - 2 * j;
    let mut cols: Vec<usize> = (j + 1..=m + n - j - 1).rev().collect();
    cols.push(i);
    let mut rows: Vec<(usize, &[DensePoly])> = Vec::with_capacity(size);
    for s in (0..n - j).rev() {
        rows.push((s, a));
    }
    for s in (0..m - j).rev() {
        rows.push((s, b));
    }
    if size == 0 {
        return Ok(DensePoly::constant(var, Rational::from(1)));
    }
    let mat = Matrix::from_fn(size, size, |r, c| {
        let (shift, p) = rows[r];
        let t = cols[c];
        if t >= shift && t - shift < p.len() {
            p[t - shift].clone()
        } else {
            DensePoly::zero(var)
        }
    })?;
    det_fraction_free(&mat)
}

fn e_coefficients(r: &MPoly) -> Result<Vec<DensePoly>> {
    r.coefficients_in(Var::E)?.iter().map(|c| c.to_dense(Var::G)).collect()
}

/// `Res_E(R, ∂_E R)` as a polynomial in `g`.
pub fn discriminant_in_g(r: &MPoly) -> Result<DensePoly> {
    let a = e_coefficients(r)?;
    let b = e_coefficients(&r.derivative(Var::E)?)?;
    subresultant_coeff(&a, &b, 0, 0)
}

// ---------------------------------------------------------------------------
// Complex evaluation helpers

fn eval_dense_c(p: &DensePoly, z: &BigComplex) -> BigComplex {
    let prec = z.prec();
    let mut acc = BigComplex::zero(prec);
    for c in p.coeffs().iter().rev() {
        acc = &acc * z;
        acc.re += c;
    }
    acc
}

fn eval_bivar_c(p: &MPoly, e: &BigComplex, g: &BigComplex) -> Result<BigComplex> {
    let prec = e.prec().max(g.prec());
    let vars = p.vars();
    let ie = vars.iter().position(|v| *v == Var::E).ok_or(Error::UnknownVariable("E".into()))?;
    let ig = vars.iter().position(|v| *v == Var::G).ok_or(Error::UnknownVariable("g".into()))?;
    let powers = |z: &BigComplex, n: usize| {
        let mut out = vec![BigComplex::from_f64(prec, 1.0, 0.0)];
        for k in 1..=n {
            let next = &out[k - 1] * z;
            out.push(next);
        }
        out
    };
    let de = p.degree_in(Var::E)?.unwrap_or(0) as usize;
    let dg = p.degree_in(Var::G)?.unwrap_or(0) as usize;
    let pe = powers(e, de);
    let pg = powers(g, dg);
    let mut acc = BigComplex::zero(prec);
    for (exps, c) in p.terms() {
        let t = &pe[exps[ie] as usize] * &pg[exps[ig] as usize];
        acc = &acc + &t.mul_real(&Float::with_val(prec, c));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Singularity data

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityProvenance {
    ClosedForm,
    Numeric,
}

impl fmt::Display for SingularityProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingularityProvenance::ClosedForm => "closed-form",
            SingularityProvenance::Numeric => "numeric",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub g: BigComplex,
    pub e: BigComplex,
    pub c: BigComplex,
}

#[derive(Clone, Debug)]
pub struct SingularityData {
    pub m: u32,
    pub e0: BigComplex,
    pub g0: BigComplex,
    /// Coefficient in `E(g) ≈ E₀ − √(c(1 − g/g₀))`.
    pub c: BigComplex,
    pub provenance: SingularityProvenance,
    pub bits: u32,
    /// `log₂|R_M(E₀,g₀)|` and `log₂|∂_E R_M(E₀,g₀)|` relative to the local scale.
    pub residual_log2: (f64, f64),
    /// Domb–Sykes estimate of the branch-series radius.
    pub radius_estimate: f64,
    /// Every degenerate point found, sorted by `|g|`.
    pub candidates: Vec<Candidate>,
}

impl SingularityData {
    pub fn g0_real(&self) -> Result<Float> {
        real_part(&self.g0, "g0")
    }

    pub fn e0_real(&self) -> Result<Float> {
        real_part(&self.e0, "E0")
    }

    pub fn c_real(&self) -> Result<Float> {
        real_part(&self.c, "c")
    }
}

fn real_part(z: &BigComplex, what: &str) -> Result<Float> {
    if z.im.is_zero() {
        Ok(z.re.clone())
    } else {
        Err(Error::InvalidArgument(format!("{what} = {z} is not real")))
    }
}

fn log2_rel(x: &BigComplex, scale: &Float) -> f64 {
    let a = x.abs();
    if a.is_zero() {
        return f64::NEG_INFINITY;
    }
    let r = a / scale;
    let (m, e) = r.to_f64_exp();
    m.log2() + e as f64
}

/// `Σ|c|·|E|^a·|g|^b`, the magnitude scale for residuals.
fn term_scale(p: &MPoly, e: &BigComplex, g: &BigComplex) -> Float {
    let prec = e.prec();
    let (ae, ag) = (e.abs(), g.abs());
    let mut acc = Float::with_val(prec, 0);
    for (exps, c) in p.terms() {
        let mut t = Float::with_val(prec, c).abs();
        t *= Float::with_val(prec, (&ae).pow(exps[0] as i32));
        t *= Float::with_val(prec, (&ag).pow(exps[1] as i32));
        acc += t;
    }
    if acc.is_zero() {
        acc += 1;
    }
    acc
}

struct Derivs {
    r: MPoly,
    re: MPoly,
    rg: MPoly,
    ree: MPoly,
    reg: MPoly,
}

impl Derivs {
    fn new(r: MPoly) -> Result<Self> {
        let re = r.derivative(Var::E)?;
        let rg = r.derivative(Var::G)?;
        let ree = re.derivative(Var::E)?;
        let reg = re.derivative(Var::G)?;
        Ok(Derivs { r, re, rg, ree, reg })
    }
}

/// 2×2 Newton on `R = ∂_E R = 0` in complex `(E, g)`.
fn refine_degenerate(d: &Derivs, e: &mut BigComplex, g: &mut BigComplex) -> Result<()> {
    let prec = e.prec();
    for _ in 0..200 {
        let f1 = eval_bivar_c(&d.r, e, g)?;
        let f2 = eval_bivar_c(&d.re, e, g)?;
        let j11 = f2.clone();
        let j12 = eval_bivar_c(&d.rg, e, g)?;
        let j21 = eval_bivar_c(&d.ree, e, g)?;
        let j22 = eval_bivar_c(&d.reg, e, g)?;
        let det = &(&j11 * &j22) - &(&j12 * &j21);
        if det.is_zero() {
            return Err(Error::NonConvergence { what: "degenerate-root Newton (singular Jacobian)".into(), bits: prec });
        }
        let de = &(&(&f1 * &j22) - &(&j12 * &f2)) / &det;
        let dg = &(&(&j11 * &f2) - &(&f1 * &j21)) / &det;
        *e = &*e - &de;
        *g = &*g - &dg;
        let mut tol_e = e.abs().max(&Float::with_val(prec, 1));
        tol_e >>= prec as i32 - 8;
        let mut tol_g = g.abs();
        tol_g >>= prec as i32 - 8;
        if de.abs() <= tol_e && dg.abs() <= tol_g {
            return Ok(());
        }
    }
    Err(Error::NonConvergence { what: "degenerate-root Newton".into(), bits: prec })
}

/// Domb–Sykes estimate of the convergence radius from the tail of a series:
/// ratios `a_k/a_{k−1}` extrapolated linearly in `1/k` to `k → ∞`.
pub fn series_radius_estimate(coeffs: &[Rational], prec: u32) -> Option<f64> {
    let k = coeffs.len().checked_sub(1)?;
    if k < 3 || coeffs[k - 2].cmp0().is_eq() || coeffs[k - 1].cmp0().is_eq() {
        return None;
    }
    let r = |i: usize| Float::with_val(prec, &coeffs[i]) / Float::with_val(prec, &coeffs[i - 1]);
    let (rk, rk1) = (r(k), r(k - 1));
    let inv = Float::with_val(prec, &rk * k as u32) - Float::with_val(prec, &rk1 * (k - 1) as u32);
    let v = inv.to_f64().abs();
    (v > 0.0).then(|| 1.0 / v)
}

/// Raw ratio `|a_{k−1}/a_k|` at the last order.
pub fn series_radius_ratio(coeffs: &[Rational], prec: u32) -> Option<f64> {
    let k = coeffs.len().checked_sub(1)?;
    if k < 1 || coeffs[k].cmp0().is_eq() {
        return None;
    }
    let r = Float::with_val(prec, &coeffs[k - 1]) / Float::with_val(prec, &coeffs[k]);
    Some(r.to_f64().abs())
}

fn quartic_closed_form(m: u32, prec: u32) -> Option<(Float, Float, Float)> {
    let f = |x: f64| Float::with_val(prec, x);
    match m {
        2 => {
            let s3 = f(3.0).sqrt();
            let e0 = -(f(2.0) / &s3);
            let g0 = f(3.0).pow(f(-1.5));
            let c = Float::with_val(prec, 8) / 9u32;
            Some((e0, g0, c))
        }
        3 => {
            let s13 = f(13.0).sqrt();
            let inner = Float::with_val(prec, &s13 * 2u32) + 5u32;
            let e0 = -(Float::with_val(prec, &inner / 3u32).sqrt());
            let num = Float::with_val(prec, &s13 * 5u32) - 1u32;
            let den = Float::with_val(prec, &inner * 3u32).sqrt() * 36u32;
            let g0 = num / den;
            let c = (f(5.0) - Float::with_val(prec, s13.recip_ref())) * 2u32 / 9u32;
            Some((e0, g0, c))
        }
        _ => None,
    }
}

fn cmp_candidates(a: &Candidate, b: &Candidate) -> Ordering {
    a.g.abs().partial_cmp(&b.g.abs()).unwrap_or(Ordering::Equal)
}

/// Degenerate roots of `R_M`, the one governing the branch through
/// `E(0) = −M`, and the square-root coefficient `c` there.
pub fn singularity_data(m: u32, potential: &PotentialSpec, bits: u32) -> Result<SingularityData> {
    singularity_inner(m, potential, bits, true)
}

/// As [`singularity_data`] but never replaced by the closed form.
pub fn singularity_data_numeric(m: u32, potential: &PotentialSpec, bits: u32) -> Result<SingularityData> {
    singularity_inner(m, potential, bits, false)
}

fn singularity_inner(m: u32, potential: &PotentialSpec, bits: u32, snap: bool) -> Result<SingularityData> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("M = {m}: need M ≥ 2")));
    }
    if potential.vars() != [Var::E, Var::G] {
        return Err(Error::InvalidArgument("singularity data needs a one-coupling potential".into()));
    }
    let r = spectral_poly_spin(SpinLabel::new(m), potential)?.det();
    let d = Derivs::new(r)?;
    let a = e_coefficients(&d.r)?;
    let b = e_coefficients(&d.re)?;
    let disc = subresultant_coeff(&a, &b, 0, 0)?;
    if disc.is_zero() {
        return Err(Error::NoAdmissibleCandidate(m));
    }
    let s11 = subresultant_coeff(&a, &b, 1, 1)?;
    let s10 = subresultant_coeff(&a, &b, 1, 0)?;
    let sq = disc.squarefree_part()?;
    let work = bits.max(128) + 64;
    let mut candidates = Vec::new();
    if sq.degree().unwrap_or(0) > 0 {
        let rs = find_roots(&sq, &RootConfig { max_bits: 8 * work, ..Default::default() })?;
        for root in rs.roots {
            let mut g = root.value.with_prec(work);
            if g.is_zero() {
                continue;
            }
            let den = eval_dense_c(&s11, &g);
            if den.is_zero() {
                continue;
            }
            let mut e = -&(&eval_dense_c(&s10, &g) / &den);
            refine_degenerate(&d, &mut e, &mut g)?;
            let rg = eval_bivar_c(&d.rg, &e, &g)?;
            let ree = eval_bivar_c(&d.ree, &e, &g)?;
            let two_g = g.mul_real(&Float::with_val(work, 2));
            let c = &(&two_g * &rg) / &ree;
            candidates.push(Candidate { g, e, c });
        }
    }
    candidates.sort_by(cmp_candidates);

    let branch = algebraic_branch_series(m, BRANCH_ORDER, potential)?;
    let radius = series_radius_estimate(&branch, work).ok_or(Error::NoAdmissibleCandidate(m))?;
    let admissible: Vec<&Candidate> = candidates
        .iter()
        .filter(|c| ((c.g.abs().to_f64() - radius) / radius).abs() <= RADIUS_TOLERANCE)
        .collect();
    let Some(first) = admissible.first() else {
        return Err(Error::NoAdmissibleCandidate(m));
    };
    // candidates sharing the minimal modulus: prefer real positive g
    let min_abs = first.g.abs();
    let mut tol = min_abs.clone();
    tol >>= (work / 2) as i32;
    let tied: Vec<&Candidate> = admissible
        .iter()
        .copied()
        .filter(|c| Float::with_val(work, c.g.abs() - &min_abs).abs() <= tol)
        .collect();
    let chosen = tied
        .iter()
        .copied()
        .find(|c| c.g.im.to_f64().abs() <= tol.to_f64() && c.g.re > 0)
        .or_else(|| if tied.len() == 1 { Some(tied[0]) } else { None })
        .ok_or_else(|| Error::BranchAmbiguity {
            m,
            detail: format!("{} candidates at |g| = {}, none real positive", tied.len(), min_abs.to_f64()),
        })?;

    let mut e0 = chosen.e.clone();
    let mut g0 = chosen.g.clone();
    let mut c = chosen.c.clone();
    // snap roundoff-level imaginary parts
    for z in [&mut e0, &mut g0, &mut c] {
        let mut t = z.abs();
        t >>= (work / 2) as i32;
        if Float::with_val(work, z.im.abs_ref()) <= t {
            z.im = Float::new(work);
        }
    }
    let res_r = log2_rel(&eval_bivar_c(&d.r, &e0, &g0)?, &term_scale(&d.r, &e0, &g0));
    let res_e = log2_rel(&eval_bivar_c(&d.re, &e0, &g0)?, &term_scale(&d.re, &e0, &g0));
    let half = -((bits / 2) as f64);
    if res_r > half || res_e > half {
        return Err(Error::NonConvergence { what: format!("degenerate-root certificate for M={m}"), bits });
    }

    let mut provenance = SingularityProvenance::Numeric;
    if snap && potential.is_quartic() {
        if let Some((ce, cg, cc)) = quartic_closed_form(m, work) {
            let close = |x: &BigComplex, y: &Float| {
                let mut t = y.clone().abs();
                t >>= (bits / 2) as i32;
                (x - &BigComplex::real(y.clone())).abs() <= t
            };
            if close(&e0, &ce) && close(&g0, &cg) && close(&c, &cc) {
                e0 = BigComplex::real(ce);
                g0 = BigComplex::real(cg);
                c = BigComplex::real(cc);
                provenance = SingularityProvenance::ClosedForm;
            }
        }
    }
    let round = |z: &BigComplex| z.with_prec(bits);
    Ok(SingularityData {
        m,
        e0: round(&e0),
        g0: round(&g0),
        c: round(&c),
        provenance,
        bits,
        residual_log2: (res_r, res_e),
        radius_estimate: radius,
        candidates: candidates
            .iter()
            .map(|c| Candidate { g: round(&c.g), e: round(&c.e), c: round(&c.c) })
            .collect(),
    })
}

/// Exact facts behind the M = 2 quartic asymptotics: the square-free
/// discriminant, `g₀²`, `E₀²` and `c²` as rationals, and `c` itself.
#[derive(Clone, Debug)]
pub struct QuarticM2Identity {
    pub discriminant: DensePoly,
    pub g0_sq: Rational,
    pub e0_sq: Rational,
    pub c_sq: Rational,
    pub c: Rational,
    /// `½√(c/π) = ⅓√(2/π)`, i.e. `c = 8/9`.
    pub prefactor_identity: bool,
    /// `g₀^{−k} = 3^{3k/2}`, i.e. `g₀⁻² = 27`.
    pub growth_identity: bool,
}

/// Derive the M = 2 data in exact arithmetic. `R₂` is cubic in `E` with
/// `∂_g R₂` constant and `∂_E R₂` even in `E`, so squares are rational.
pub fn quartic_m2_identity() -> Result<QuarticM2Identity> {
    let r = spectral_poly_spin(SpinLabel::new(2), &PotentialSpec::quartic())?.det();
    let disc = discriminant_in_g(&r)?.squarefree_part()?;
    let [c0, c1, c2] = match disc.coeffs() {
        [a, b, c] => [a.clone(), b.clone(), c.clone()],
        _ => return Err(Error::InvalidArgument(format!("unexpected discriminant {disc}"))),
    };
    if c1.cmp0().is_ne() {
        return Err(Error::InvalidArgument("discriminant is not even in g".into()));
    }
    let g0_sq = -Rational::from(&c0 / &c2);
    let re = r.derivative(Var::E)?.to_dense(Var::E)?;
    let [e0c, e1c, e2c] = match re.coeffs() {
        [a, b, c] => [a.clone(), b.clone(), c.clone()],
        _ => return Err(Error::InvalidArgument("∂_E R₂ is not quadratic".into())),
    };
    if e1c.cmp0().is_ne() {
        return Err(Error::InvalidArgument("∂_E R₂ is not even in E".into()));
    }
    let e0_sq = -Rational::from(&e0c / &e2c);
    let rg = r.derivative(Var::G)?.as_constant().ok_or_else(|| Error::InvalidArgument("∂_g R₂ not constant".into()))?;
    // ∂²_E R₂ = 2·e2c·E, so c² = 4g₀²R_g² / (4·e2c²·E₀²)
    let c_sq = Rational::from(&g0_sq * &rg) * &rg / (Rational::from(&e2c * &e2c) * &e0_sq);
    let c = rational_sqrt(&c_sq).ok_or_else(|| Error::InvalidArgument("c² is not a rational square".into()))?;
    let target = Rational::from((8, 9));
    Ok(QuarticM2Identity {
        discriminant: disc,
        prefactor_identity: c == target,
        growth_identity: Rational::from(g0_sq.recip_ref()) == 27,
        g0_sq,
        e0_sq,
        c_sq,
        c,
    })
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.cmp0().is_lt() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    if !n.is_perfect_square() || !d.is_perfect_square() {
        return None;
    }
    Some(Rational::from((n.clone().sqrt(), d.clone().sqrt())))
}

// ---------------------------------------------------------------------------
// Models

/// A large-order formula evaluable at any `k ≥ 1`.
pub trait AsymptoticModel: Send + Sync {
    fn name(&self) -> &'static str;
    fn predict(&self, d: &Float, k: usize) -> Result<Float>;
}

/// `1/Γ(x)`, exactly zero at the poles.
fn recip_gamma(x: &Float) -> Float {
    let prec = x.prec();
    if x.is_integer() && *x <= 0 {
        return Float::new(prec);
    }
    Float::with_val(prec, bigfloat::gamma(x).recip_ref())
}

/// Rising factorial `(x)_k = Γ(x+k)/Γ(x)`.
fn pochhammer(x: &Float, k: usize) -> Float {
    let prec = x.prec();
    let mut acc = Float::with_val(prec, 1);
    for i in 0..k {
        acc *= Float::with_val(prec, x + i as u32);
    }
    acc
}

fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Generic-dimension quartic formula with optional `1/k` correction.
pub struct GeneralD {
    pub correction: bool,
    pub prec: u32,
}

impl AsymptoticModel for GeneralD {
    fn name(&self) -> &'static str {
        if self.correction { "general-D" } else { "general-D-leading" }
    }

    fn predict(&self, d: &Float, k: usize) -> Result<Float> {
        if k == 0 {
            return Err(Error::InvalidArgument("order must be ≥ 1".into()));
        }
        let p = self.prec;
        let half = Float::with_val(p, d / 2u32);
        let mut v = pochhammer(&half, k);
        let expo3 = Float::with_val(p, &half + k as u32);
        v *= Float::with_val(p, 3).pow(&expo3);
        v *= Float::with_val(p, 2).pow(&half);
        v /= pi(p);
        if k.is_multiple_of(2) {
            v = -v;
        }
        if self.correction {
            let dd = Float::with_val(p, d * d);
            let mut inner = Float::with_val(p, 5) / 3u32;
            inner += Float::with_val(p, d * 9u32) / 2u32;
            inner += dd * 7u32 / 4u32;
            let corr = Float::with_val(p, 1) - inner / (6 * k as u32);
            v *= corr;
        }
        Ok(v)
    }
}

/// Potential `r²/2 + g·r^{2N}` in generic dimension.
pub struct GeneralN {
    pub n: u32,
    pub prec: u32,
}

impl AsymptoticModel for GeneralN {
    fn name(&self) -> &'static str {
        "general-N"
    }

    fn predict(&self, d: &Float, k: usize) -> Result<Float> {
        if self.n < 2 {
            return Err(Error::InvalidArgument("N must be ≥ 2".into()));
        }
        let p = self.prec;
        let n1 = self.n - 1;
        let half = Float::with_val(p, d / 2u32);
        let q = |num: u32| Float::with_val(p, num) / n1;
        let a = bigfloat::gamma(&q(2 * self.n)) / Float::with_val(p, bigfloat::gamma(&q(self.n)).square_ref());
        let mut v = Float::with_val(p, &factorial(k as u32 * n1));
        v *= -(Float::with_val(p, n1).pow(&half)) * recip_gamma(&half) / pi(p);
        v *= Float::with_val(p, (&a).pow(&half));
        v *= Float::with_val(p, k as u32).pow(Float::with_val(p, &half - 1u32));
        let base = (-Float::with_val(p, &a / 2u32)).pow(n1);
        v *= base.pow(k as u32);
        Ok(v)
    }
}

/// Pure square-root branch point at `D = −2M`.
pub struct SpecialD {
    pub m: u32,
    pub g0: Float,
    pub c: Float,
}

impl AsymptoticModel for SpecialD {
    fn name(&self) -> &'static str {
        "special-D"
    }

    fn predict(&self, d: &Float, k: usize) -> Result<Float> {
        if *d != -2 * self.m as i64 {
            return Err(Error::InvalidArgument(format!("special-D model lives at D = -{}", 2 * self.m)));
        }
        let p = self.g0.prec();
        let mut v = Float::with_val(p, &self.c / pi(p)).sqrt() / 2u32;
        v *= Float::with_val(p, k as u32).pow(Float::with_val(p, -1.5));
        v *= Float::with_val(p, (&self.g0).pow(-(k as i32)));
        Ok(v)
    }
}

/// Offset `ν + 2M` of the root converging to `−2M`.
pub struct NuOffset {
    pub m: u32,
    pub g0: Float,
    pub c: Float,
}

impl AsymptoticModel for NuOffset {
    fn name(&self) -> &'static str {
        "nu-offset"
    }

    fn predict(&self, _d: &Float, k: usize) -> Result<Float> {
        let p = self.g0.prec();
        let m = self.m;
        let mut v = Float::with_val(p, -6).pow(m) / Float::with_val(p, &factorial(m));
        v *= Float::with_val(p, &self.c * pi(p)).sqrt();
        v /= Float::with_val(p, &factorial(k as u32));
        if k % 2 == 1 {
            v = -v;
        }
        v *= Float::with_val(p, k as u32).pow(Float::with_val(p, m as f64 - 0.5));
        let three_g = Float::with_val(p, &self.g0 * 3u32);
        v *= three_g.pow(-(k as i32));
        Ok(v)
    }
}

/// Parameters consumed by model factories.
#[derive(Clone, Debug)]
pub struct ModelParams {
    pub prec: u32,
    pub n: u32,
    pub correction: bool,
    pub singularity: Option<SingularityData>,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams { prec: 256, n: 2, correction: true, singularity: None }
    }
}

type Factory = fn(&ModelParams) -> Result<Box<dyn AsymptoticModel>>;

/// Model constructors addressable by name.
pub struct ModelRegistry {
    factories: BTreeMap<&'static str, Factory>,
}

fn need_singularity(p: &ModelParams) -> Result<(u32, Float, Float)> {
    let s = p
        .singularity
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("model needs singularity data".into()))?;
    Ok((s.m, Float::with_val(p.prec, &s.g0_real()?), Float::with_val(p.prec, &s.c_real()?)))
}

impl Default for ModelRegistry {
    fn default() -> Self {
        let mut r = ModelRegistry { factories: BTreeMap::new() };
        r.register("general-D", |p| Ok(Box::new(GeneralD { correction: p.correction, prec: p.prec })));
        r.register("general-N", |p| Ok(Box::new(GeneralN { n: p.n, prec: p.prec })));
        r.register("special-D", |p| {
            let (m, g0, c) = need_singularity(p)?;
            Ok(Box::new(SpecialD { m, g0, c }))
        });
        r.register("nu-offset", |p| {
            let (m, g0, c) = need_singularity(p)?;
            Ok(Box::new(NuOffset { m, g0, c }))
        });
        r
    }
}

impl ModelRegistry {
    pub fn register(&mut self, name: &'static str, f: Factory) {
        self.factories.insert(name, f);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.keys().copied().collect()
    }

    pub fn build(&self, name: &str, params: &ModelParams) -> Result<Box<dyn AsymptoticModel>> {
        let f = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownStrategy { kind: "asymptotic model", name: name.to_string() })?;
        f(params)
    }
}

pub fn predict_series_coeff(d: &Float, k: usize, model: &dyn AsymptoticModel) -> Result<Float> {
    model.predict(d, k)
}

pub fn predict_root_offset(s: &SingularityData, k: usize) -> Result<Float> {
    let m = NuOffset { m: s.m, g0: s.g0_real()?, c: s.c_real()? };
    m.predict(&Float::with_val(s.bits, -2 * s.m as i64), k)
}

// ---------------------------------------------------------------------------
// Convergence reports

#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub k: usize,
    pub exact: Float,
    pub predicted: Float,
    pub ratio: Float,
    pub bits: u32,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub model: String,
    pub rows: Vec<ConvergenceRow>,
    /// `|ratio − 1|` never increases along the rows.
    pub monotone: bool,
    /// `ratio − 1` keeps one sign.
    pub one_sided: bool,
}

impl ConvergenceReport {
    pub fn row(&self, k: usize) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.k == k)
    }
}

/// Ratios exact/predicted for a stream of `(k, exact)` pairs.
pub fn convergence_report<I>(exact: I, d: &Float, model: &dyn AsymptoticModel) -> Result<ConvergenceReport>
where
    I: IntoIterator<Item = (usize, Float)>,
{
    let mut rows = Vec::new();
    for (k, x) in exact {
        let pred = model.predict(d, k)?;
        let bits = x.prec().min(pred.prec());
        let ratio = if pred.is_zero() { Float::with_val(bits, f64::NAN) } else { Float::with_val(bits, &x / &pred) };
        rows.push(ConvergenceRow { k, exact: x, predicted: pred, ratio, bits });
    }
    let dev: Vec<f64> = rows.iter().map(|r| r.ratio.to_f64() - 1.0).collect();
    let monotone = dev.windows(2).all(|w| w[1].abs() <= w[0].abs());
    let one_sided = dev.iter().all(|&x| x > 0.0) || dev.iter().all(|&x| x < 0.0);
    Ok(ConvergenceReport { model: model.name().to_string(), rows, monotone, one_sided })
}

/// Exact `E⁽ᵏ⁾(D)` at a rational `D` against a model, for the given orders.
pub fn series_report(
    table: &SeriesTable,
    d: &Rational,
    orders: &[usize],
    model: &dyn AsymptoticModel,
    prec: u32,
) -> Result<ConvergenceReport> {
    let vals = table.specialize(d);
    let pairs = orders.iter().map(|&k| (k, Float::with_val(prec, &vals[k])));
    convergence_report(pairs, &Float::with_val(prec, d), model)
}

/// Cluster offsets `ν + 2M` from classified root sets against the model.
pub fn root_offset_report(sets: &[RootSet], s: &SingularityData) -> Result<ConvergenceReport> {
    let model = NuOffset { m: s.m, g0: s.g0_real()?, c: s.c_real()? };
    let pairs: Vec<(usize, Float)> = sets
        .iter()
        .filter_map(|rs| rs.cluster_offset(s.m).filter(|z| z.im.is_zero()).map(|z| (rs.k, z.re)))
        .collect();
    convergence_report(pairs, &Float::with_val(s.bits, -2 * s.m as i64), &model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2() -> MPoly {
        spectral_poly_spin(SpinLabel::new(2), &PotentialSpec::quartic()).unwrap().det()
    }

    #[test]
    fn m2_discriminant_is_one_minus_27g2() {
        let disc = discriminant_in_g(&r2()).unwrap();
        let sq = disc.squarefree_part().unwrap();
        assert_eq!(sq, DensePoly::new(Var::G, vec![Rational::from((-1, 27)), Rational::new(), Rational::from(1)]));
        // 256 − 6912 g² up to a constant
        let ratio = Rational::from(&disc.coeffs()[2] / &disc.coeffs()[0]);
        assert_eq!(ratio, Rational::from(-27));
    }

    #[test]
    fn m2_exact_identity() {
        let id = quartic_m2_identity().unwrap();
        assert_eq!(id.c, Rational::from((8, 9)));
        assert_eq!(id.g0_sq, Rational::from((1, 27)));
        assert_eq!(id.e0_sq, Rational::from((4, 3)));
        assert!(id.prefactor_identity && id.growth_identity);
    }

    #[test]
    fn subresultant_of_simple_pair() {
        // a = x² − 1, b = x − 1 share the root 1; resultant vanishes
        let c = |v: &[i64]| v.iter().map(|&x| DensePoly::constant(Var::G, Rational::from(x))).collect::<Vec<_>>();
        let res = subresultant_coeff(&c(&[-1, 0, 1]), &c(&[-1, 1]), 0, 0).unwrap();
        assert!(res.is_zero());
        let res = subresultant_coeff(&c(&[-4, 0, 1]), &c(&[-1, 1]), 0, 0).unwrap();
        assert_eq!(res.coeffs()[0], -3);
    }

    #[test]
    fn m2_singularity_closed_form() {
        let s = singularity_data(2, &PotentialSpec::quartic(), 256).unwrap();
        assert_eq!(s.provenance, SingularityProvenance::ClosedForm);
        assert!((s.c_real().unwrap() - Float::with_val(256, 8) / 9u32).abs() < 1e-60);
        assert!(s.residual_log2.0 < -128.0);
        assert_eq!(s.candidates.len(), 2);
    }

    #[test]
    fn m3_singularity_numeric_matches_closed_form() {
        let s = singularity_data(3, &PotentialSpec::quartic(), 256).unwrap();
        assert_eq!(s.provenance, SingularityProvenance::ClosedForm);
        assert!((s.g0_real().unwrap() - 0.078_147_818_745_022_36_f64).abs() < 1e-15);
        assert!((s.e0_real().unwrap() + 2.017_515_183_827_867_f64).abs() < 1e-15);
        assert!((s.c_real().unwrap() - 1.049_477_755_974_974_6_f64).abs() < 1e-15);
    }

    #[test]
    fn general_d_vanishes_at_negative_even_d() {
        let m = GeneralD { correction: true, prec: 128 };
        for d in [-4, -6, -8] {
            let v = m.predict(&Float::with_val(128, d), 20).unwrap();
            assert!(v.is_zero());
        }
        assert!(!m.predict(&Float::with_val(128, 1), 20).unwrap().is_zero());
    }

    #[test]
    fn general_n_two_matches_general_d() {
        let a = GeneralD { correction: false, prec: 256 };
        let b = GeneralN { n: 2, prec: 256 };
        let d = Float::with_val(256, 1);
        let r = a.predict(&d, 2000).unwrap() / b.predict(&d, 2000).unwrap();
        assert!((r - 1.0f64).abs() < 1e-3);
    }

    #[test]
    fn special_d_m2_prefactor() {
        let s = singularity_data(2, &PotentialSpec::quartic(), 256).unwrap();
        let m = SpecialD { m: 2, g0: s.g0_real().unwrap(), c: s.c_real().unwrap() };
        let k = 30usize;
        let v = m.predict(&Float::with_val(256, -4), k).unwrap();
        let p = 256;
        let expect = Float::with_val(p, 2) / pi(p);
        let expect = expect.sqrt() / 3u32 * Float::with_val(p, k as u32).pow(Float::with_val(p, -1.5))
            * Float::with_val(p, 3).pow(Float::with_val(p, 1.5 * k as f64));
        assert!((v / expect - 1u32).abs() < 1e-60);
    }

    #[test]
    fn nu_offset_m2_closed_form() {
        let s = singularity_data(2, &PotentialSpec::quartic(), 256).unwrap();
        let p = 256;
        for k in [11usize, 12] {
            let v = predict_root_offset(&s, k).unwrap();
            let mut e = Float::with_val(p, 2) * pi(p);
            e = e.sqrt() * 12u32 / Float::with_val(p, &factorial(k as u32));
            e *= Float::with_val(p, k as u32).pow(Float::with_val(p, 1.5));
            e *= Float::with_val(p, 3).pow(Float::with_val(p, k as f64 / 2.0));
            if k % 2 == 1 {
                e = -e;
            }
            assert!((v / e - 1u32).abs() < 1e-60);
        }
    }

    #[test]
    fn registry_builds_and_rejects() {
        let reg = ModelRegistry::default();
        assert_eq!(reg.names(), vec!["general-D", "general-N", "nu-offset", "special-D"]);
        assert!(reg.build("special-D", &ModelParams::default()).is_err());
        assert!(matches!(reg.build("borel", &ModelParams::default()), Err(Error::UnknownStrategy { .. })));
    }

    #[test]
    fn radius_estimate_on_known_series() {
        // √(1 − 4g) coefficients: singularity at 1/4
        let mut c = vec![Rational::from(1)];
        for k in 1..40u32 {
            let prev = c[k as usize - 1].clone();
            c.push(prev * Rational::from((2 * k as i64 - 3, 1)) * 2 / Rational::from(k));
        }
        let r = series_radius_estimate(&c, 128).unwrap();
        assert!((r - 0.25).abs() < 1e-3, "{r}");
    }
}
