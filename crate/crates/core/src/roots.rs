//! All complex roots of `P_k(D)` at arbitrary precision, with residual
//! certificates, cluster classification and root-distribution statistics.
//!
//! Roots are found by a simultaneous iteration selected from a
//! [`SolverRegistry`], on a precision ladder that doubles until two
//! consecutive levels agree. Agreement is measured relative to each root's
//! distance from the nearest integer, so offsets like `ν + 4 ≈ 10⁻⁶⁴` are
//! resolved to full relative accuracy rather than swamped by `|ν|`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::bigfloat::BigComplex;
use crate::error::{Error, Result};
use crate::exact::DensePoly;
use crate::series::SeriesTable;

pub const DEFAULT_START_BITS: u32 = 128;
pub const DEFAULT_MAX_BITS: u32 = 8192;
/// Cluster window; see `classify_roots`.
pub const DEFAULT_WINDOW: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Auto,
    Fixed(u32),
}

#[derive(Clone, Debug)]
pub struct RootConfig {
    pub precision: Precision,
    pub max_bits: u32,
    pub solver: String,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig { precision: Precision::Auto, max_bits: DEFAULT_MAX_BITS, solver: "aberth".into() }
    }
}

impl RootConfig {
    pub fn fixed(bits: u32) -> Self {
        RootConfig { precision: Precision::Fixed(bits), max_bits: bits.max(DEFAULT_MAX_BITS), ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RootLabel {
    /// One of the roots `0`, `−2` shared by every `E⁽ᵏ⁾`.
    StableZero(i32),
    /// Converging to `−2M`.
    Cluster(u32),
    Bulk,
}

impl fmt::Display for RootLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLabel::StableZero(z) => write!(f, "stable({z})"),
            RootLabel::Cluster(m) => write!(f, "cluster(-{})", 2 * m),
            RootLabel::Bulk => write!(f, "bulk"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Root {
    pub value: BigComplex,
    /// `log₂(|P(ν)| / (‖P‖₁·max(1,|ν|)^deg))`; `-inf` for exact roots.
    pub residual_log2: f64,
    /// Size of the last Newton correction at the final precision.
    pub newton_bound: Float,
    pub exact: bool,
    pub label: RootLabel,
}

impl Root {
    pub fn is_real(&self) -> bool {
        self.value.im.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct RootSet {
    /// Perturbative order; `deg + 1` for bare polynomials.
    pub k: usize,
    pub bits: u32,
    pub roots: Vec<Root>,
    /// Roots of `E⁽ᵏ⁾` not carried by `P_k`.
    pub stable: Vec<i64>,
}

impl RootSet {
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// `ν + 2M` for the root labelled `cluster(−2M)`; for a conjugate pair the
    /// member with positive imaginary part.
    pub fn cluster_offset(&self, m: u32) -> Option<BigComplex> {
        let r = self
            .roots
            .iter()
            .find(|r| r.label == RootLabel::Cluster(m) && !r.value.im.is_sign_negative())?;
        let shift = BigComplex::real(Float::with_val(self.bits, 2 * m));
        Some(&r.value + &shift)
    }

    pub fn labelled(&self, label: RootLabel) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(move |r| r.label == label)
    }
}

// ---------------------------------------------------------------------------
// Solvers

/// Simultaneous refinement of all roots of a real polynomial.
pub trait RootSolver: Send + Sync {
    fn name(&self) -> &'static str;

    /// Refine `z` in place. `c` holds coefficients in ascending order at the
    /// working precision. Returns whether every root met the stopping rule.
    fn refine(&self, c: &[Float], z: &mut [BigComplex], max_iter: usize) -> bool;
}

/// Ehrlich–Aberth iteration, Gauss–Seidel style.
pub struct Aberth;

/// Weierstrass (Durand–Kerner) iteration, Gauss–Seidel style.
pub struct DurandKerner;

struct Eval {
    p: BigComplex,
    dp: BigComplex,
    /// `Σ|c_i||z|^i`, the scale for the rounding error of `p`.
    scale: Float,
}

fn horner(c: &[Float], z: &BigComplex) -> Eval {
    let prec = z.prec();
    let n = c.len() - 1;
    let az = z.abs();
    let mut p = BigComplex::real(Float::with_val(prec, &c[n]));
    let mut dp = BigComplex::zero(prec);
    let mut scale = Float::with_val(prec, c[n].abs_ref());
    for ci in c[..n].iter().rev() {
        dp = &(&dp * z) + &p;
        p = &p * z;
        p.re += ci;
        scale *= &az;
        scale += Float::with_val(prec, ci.abs_ref());
    }
    Eval { p, dp, scale }
}

/// `|p(z)|` is at the level of rounding noise.
fn at_noise_floor(e: &Eval, n: usize) -> bool {
    let prec = e.scale.prec();
    let mut bound = Float::with_val(prec, &e.scale * (4 * n as u32 + 4));
    bound >>= prec as i32 - 2;
    e.p.abs() <= bound
}

fn step_small(w: &BigComplex, z: &BigComplex) -> bool {
    let prec = z.prec();
    let mut lim = Float::with_val(prec, z.abs());
    if lim < 1 {
        lim = Float::with_val(prec, 1);
    }
    lim >>= prec as i32 - 6;
    w.abs() <= lim
}

impl RootSolver for Aberth {
    fn name(&self) -> &'static str {
        "aberth"
    }

    fn refine(&self, c: &[Float], z: &mut [BigComplex], max_iter: usize) -> bool {
        let n = z.len();
        let prec = c[0].prec();
        let one = BigComplex::from_f64(prec, 1.0, 0.0);
        let mut done = vec![false; n];
        for _ in 0..max_iter {
            let mut moved = false;
            for i in 0..n {
                if done[i] {
                    continue;
                }
                let e = horner(c, &z[i]);
                if at_noise_floor(&e, n) {
                    done[i] = true;
                    continue;
                }
                moved = true;
                let mut sum = BigComplex::zero(prec);
                for j in 0..n {
                    if j != i {
                        let d = &z[i] - &z[j];
                        if !d.is_zero() {
                            sum = &sum + &d.recip();
                        }
                    }
                }
                let w = if e.dp.is_zero() {
                    // nudge off a critical point
                    BigComplex::from_f64(prec, 1e-3, 1e-3)
                } else {
                    let ratio = &e.p / &e.dp;
                    let denom = &one - &(&ratio * &sum);
                    if denom.is_zero() {
                        ratio
                    } else {
                        &ratio / &denom
                    }
                };
                z[i] = &z[i] - &w;
                if step_small(&w, &z[i]) {
                    done[i] = true;
                }
            }
            if !moved {
                return true;
            }
        }
        done.iter().all(|&d| d)
    }
}

impl RootSolver for DurandKerner {
    fn name(&self) -> &'static str {
        "durand-kerner"
    }

    fn refine(&self, c: &[Float], z: &mut [BigComplex], max_iter: usize) -> bool {
        let n = z.len();
        let prec = c[0].prec();
        let lead = BigComplex::real(Float::with_val(prec, &c[n]));
        let mut done = vec![false; n];
        for _ in 0..max_iter {
            let mut moved = false;
            for i in 0..n {
                if done[i] {
                    continue;
                }
                let e = horner(c, &z[i]);
                if at_noise_floor(&e, n) {
                    done[i] = true;
                    continue;
                }
                moved = true;
                let mut prod = lead.clone();
                for j in 0..n {
                    if j != i {
                        prod = &prod * &(&z[i] - &z[j]);
                    }
                }
                let w = if prod.is_zero() { BigComplex::from_f64(prec, 1e-3, 1e-3) } else { &e.p / &prod };
                z[i] = &z[i] - &w;
                if step_small(&w, &z[i]) {
                    done[i] = true;
                }
            }
            if !moved {
                return true;
            }
        }
        done.iter().all(|&d| d)
    }
}

/// Solvers addressable by name.
pub struct SolverRegistry {
    solvers: BTreeMap<&'static str, Arc<dyn RootSolver>>,
}

impl Default for SolverRegistry {
    fn default() -> Self {
        let mut r = SolverRegistry { solvers: BTreeMap::new() };
        r.register(Arc::new(Aberth));
        r.register(Arc::new(DurandKerner));
        r
    }
}

impl SolverRegistry {
    pub fn register(&mut self, s: Arc<dyn RootSolver>) {
        self.solvers.insert(s.name(), s);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn RootSolver>> {
        self.solvers
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy { kind: "root solver", name: name.to_string() })
    }
}

// ---------------------------------------------------------------------------
// Initial approximations

/// Starting points from the Newton polygon of `log|c_i|`: one circle per
/// edge of the upper convex hull, with radius matching that edge's slope.
/// Deterministic angles.
pub fn initial_approximations(c: &[Rational], prec: u32) -> Vec<BigComplex> {
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, x)| x.cmp0() != Ordering::Equal)
        .map(|(i, x)| (i, log2_abs(x)))
        .collect();
    polygon_starts(&pts, c.len() - 1, prec)
}

/// [`initial_approximations`] for floating-point coefficients.
pub fn initial_approximations_float(c: &[Float], prec: u32) -> Vec<BigComplex> {
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| {
            let (m, e) = Float::with_val(64, x).abs().to_f64_exp();
            (i, m.log2() + e as f64)
        })
        .collect();
    polygon_starts(&pts, c.len() - 1, prec)
}

fn polygon_starts(pts: &[(usize, f64)], n: usize, prec: u32) -> Vec<BigComplex> {
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let mut out = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (i0, l0) = w[0];
        let (i1, l1) = w[1];
        let m = i1 - i0;
        let log_r = (l0 - l1) / m as f64;
        let r = Float::with_val(prec, log_r).exp2();
        for j in 0..m {
            let frac = j as f64 / m as f64 + i0 as f64 / n as f64 + 0.0625;
            let theta = Float::with_val(prec, &two_pi * frac);
            out.push(BigComplex::polar(&r, &theta));
        }
    }
    out
}

fn log2_abs(x: &Rational) -> f64 {
    let (m, e) = Float::with_val(64, x).abs().to_f64_exp();
    m.log2() + e as f64
}

// ---------------------------------------------------------------------------
// Driver

fn newton_polish(c: &[Float], z: &mut BigComplex) -> Float {
    let prec = z.prec();
    let mut last = Float::with_val(prec, 0);
    for _ in 0..8 {
        let e = horner(c, z);
        if e.dp.is_zero() {
            break;
        }
        let d = &e.p / &e.dp;
        last = d.abs();
        *z = &*z - &d;
        if e.p.is_zero() || step_small(&d, z) {
            break;
        }
    }
    last
}

fn distance_to_integer(z: &BigComplex) -> Float {
    let prec = z.prec();
    let n = Float::with_val(prec, z.re.round_ref());
    let d = BigComplex::new(Float::with_val(prec, &z.re - &n), z.im.clone());
    d.abs()
}

fn level_roots(
    solver: &dyn RootSolver,
    q: &[Rational],
    seed: &[BigComplex],
    bits: u32,
    max_iter: usize,
) -> Option<(Vec<BigComplex>, Vec<Float>)> {
    let c: Vec<Float> = q.iter().map(|x| Float::with_val(bits, x)).collect();
    let mut z: Vec<BigComplex> = seed.iter().map(|s| s.with_prec(bits)).collect();
    if !solver.refine(&c, &mut z, max_iter) {
        return None;
    }
    let bounds = z.iter_mut().map(|zi| newton_polish(&c, zi)).collect();
    Some((z, bounds))
}

fn agree(a: &[BigComplex], b: &[BigComplex], bits: u32) -> bool {
    a.iter().zip(b).all(|(x, y)| {
        let diff = (x - y).abs();
        let mut floor = y.abs();
        if floor < 1 {
            floor = Float::with_val(floor.prec(), 1);
        }
        floor >>= bits as i32;
        let mut tol = distance_to_integer(y).max(&floor);
        tol >>= (bits / 2) as i32;
        diff <= tol
    })
}

/// Residual exponent `log₂(|P(ν)| / (‖P‖₁·max(1,|ν|)^deg))`.
pub fn residual_log2(p: &DensePoly, z: &BigComplex) -> f64 {
    let prec = z.prec();
    let c: Vec<Float> = p.coeffs().iter().map(|x| Float::with_val(prec, x)).collect();
    let e = horner(&c, z);
    let norm = Float::with_val(prec, p.norm1());
    let deg = p.degree().unwrap_or(0) as i32;
    let mut az = z.abs();
    if az < 1 {
        az = Float::with_val(prec, 1);
    }
    let denom = norm * Float::with_val(prec, (&az).pow(deg));
    let r = e.p.abs();
    if r.is_zero() {
        return -(prec as f64);
    }
    let ratio = r / denom;
    let (m, ex) = ratio.to_f64_exp();
    m.log2() + ex as f64
}

/// Split off exact integer roots of small modulus and the root `0`.
fn deflate_exact(p: &DensePoly) -> (Vec<Rational>, Vec<i64>) {
    let mut c: Vec<Rational> = p.coeffs().to_vec();
    let mut exact = Vec::new();
    while c.len() > 1 && c[0].cmp0() == Ordering::Equal {
        c.remove(0);
        exact.push(0);
    }
    'outer: for n in 1..=64i64 {
        for cand in [-n, n] {
            loop {
                if c.len() <= 1 {
                    break 'outer;
                }
                let x = Rational::from(cand);
                let val = c.iter().rev().fold(Rational::new(), |acc, ci| acc * &x + ci);
                if val.cmp0() != Ordering::Equal {
                    break;
                }
                // synthetic division by (D − cand)
                let deg = c.len() - 1;
                let mut quot = vec![Rational::new(); deg];
                let mut carry = Rational::new();
                for i in (0..deg).rev() {
                    carry = carry * &x + &c[i + 1];
                    quot[i] = carry.clone();
                }
                c = quot;
                exact.push(cand);
            }
        }
    }
    (c, exact)
}

/// All complex roots of `p` at the requested precision policy.
pub fn find_roots(p: &DensePoly, cfg: &RootConfig) -> Result<RootSet> {
    let deg = p.degree().ok_or_else(|| Error::InvalidArgument("zero polynomial has no roots".into()))?;
    if deg == 0 {
        return Err(Error::InvalidArgument("constant polynomial has no roots".into()));
    }
    let solver = SolverRegistry::default().get(&cfg.solver)?;
    let (q, exact) = deflate_exact(p);
    let n = q.len() - 1;
    let (start, fixed) = match cfg.precision {
        Precision::Auto => (DEFAULT_START_BITS, false),
        Precision::Fixed(b) => (b.max(32), true),
    };
    let mut numeric: Vec<BigComplex> = Vec::new();
    let mut bounds: Vec<Float> = Vec::new();
    let mut bits = start;
    if n > 0 {
        let mut seed = initial_approximations(&q, bits);
        let first_cap = 200 + 40 * n;
        let mut cap = first_cap;
        loop {
            if bits > cfg.max_bits {
                return Err(Error::NonConvergence { what: format!("roots of degree-{deg} polynomial"), bits: cfg.max_bits });
            }
            let Some((z, _)) = level_roots(solver.as_ref(), &q, &seed, bits, cap) else {
                if fixed {
                    return Err(Error::NonConvergence { what: format!("roots of degree-{deg} polynomial"), bits });
                }
                seed = seed.iter().map(|s| s.with_prec(bits * 2)).collect();
                bits *= 2;
                cap = first_cap;
                continue;
            };
            if fixed {
                numeric = z;
                bounds = numeric.iter().map(|_| Float::new(bits)).collect();
                let c: Vec<Float> = q.iter().map(|x| Float::with_val(bits, x)).collect();
                for (zi, b) in numeric.iter_mut().zip(bounds.iter_mut()) {
                    *b = newton_polish(&c, zi);
                }
                break;
            }
            let hi = bits * 2;
            if hi > cfg.max_bits {
                return Err(Error::NonConvergence { what: format!("roots of degree-{deg} polynomial"), bits: cfg.max_bits });
            }
            match level_roots(solver.as_ref(), &q, &z, hi, 60 + 4 * n) {
                Some((z2, b2)) if agree(&z, &z2, bits) => {
                    numeric = z2;
                    bounds = b2;
                    bits = hi;
                    break;
                }
                Some((z2, _)) => {
                    seed = z2;
                }
                None => {
                    seed = z.iter().map(|s| s.with_prec(hi)).collect();
                }
            }
            bits = hi;
            cap = 60 + 4 * n;
        }
    }

    let mut roots: Vec<Root> = Vec::with_capacity(deg);
    pair_conjugates(&mut numeric, bits);
    for (z, b) in numeric.into_iter().zip(bounds) {
        let res = residual_log2(p, &z);
        roots.push(Root { value: z, residual_log2: res, newton_bound: b, exact: false, label: RootLabel::Bulk });
    }
    for e in exact {
        roots.push(Root {
            value: BigComplex::real(Float::with_val(bits, e)),
            residual_log2: f64::NEG_INFINITY,
            newton_bound: Float::new(bits),
            exact: true,
            label: RootLabel::Bulk,
        });
    }
    sort_roots(&mut roots);
    let rs = RootSet { k: deg + 1, bits, roots, stable: Vec::new() };
    if !fixed {
        certify(p, &rs)?;
    }
    Ok(rs)
}

/// Spec-level entry point: roots at a fixed working precision.
pub fn find_all_roots(p: &DensePoly, bits: u32) -> Result<RootSet> {
    find_roots(p, &RootConfig::fixed(bits))
}

/// Make the conjugate structure exact: near-real roots become real, and
/// complex roots are matched with their mirror images and symmetrised.
fn pair_conjugates(z: &mut [BigComplex], bits: u32) {
    let n = z.len();
    let tol_of = |x: &BigComplex| {
        let mut t = x.abs();
        if t < 1 {
            t = Float::with_val(t.prec(), 1);
        }
        t >> (bits / 2) as i32
    };
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        if Float::with_val(bits, z[i].im.abs_ref()) <= tol_of(&z[i]) {
            z[i].im = Float::new(bits);
            used[i] = true;
            continue;
        }
        let target = z[i].conj();
        let best = (0..n)
            .filter(|&j| j != i && !used[j])
            .min_by(|&a, &b| (&z[a] - &target).abs().partial_cmp(&(&z[b] - &target).abs()).unwrap_or(Ordering::Equal));
        used[i] = true;
        if let Some(j) = best {
            used[j] = true;
            let mut re = Float::with_val(bits, &z[i].re + &z[j].re);
            re /= 2;
            let mut im = Float::with_val(bits, &z[i].im - &z[j].im);
            im /= 2;
            let im = im.abs();
            z[i] = BigComplex::new(re.clone(), im.clone());
            z[j] = BigComplex::new(re, -im);
        }
    }
}

/// Ascending real part; a conjugate pair lists `+im` first.
fn sort_roots(r: &mut [Root]) {
    r.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap_or(Ordering::Equal)
            .then_with(|| b.value.im.partial_cmp(&a.value.im).unwrap_or(Ordering::Equal))
    });
}

/// Residual and Vieta certificates.
fn certify(p: &DensePoly, rs: &RootSet) -> Result<()> {
    let half = -((rs.bits / 2) as f64);
    if let Some(bad) = rs.roots.iter().find(|r| r.residual_log2 > half) {
        return Err(Error::NonConvergence {
            what: format!("residual certificate failed at {} (2^{:.1})", bad.value, bad.residual_log2),
            bits: rs.bits,
        });
    }
    let v = vieta_check(p, rs);
    if !v.ok {
        return Err(Error::NonConvergence { what: format!("Vieta check failed: {v:?}"), bits: rs.bits });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct VietaReport {
    /// `log₂` of the relative error of `Σν` against `−c_{n−1}/c_n`.
    pub sum_log2_err: f64,
    /// Same for `∏ν` against `(−1)ⁿc₀/c_n`.
    pub product_log2_err: f64,
    pub ok: bool,
}

fn log2_of(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + e as f64
}

/// Sum and product of the numeric roots against coefficient ratios.
pub fn vieta_check(p: &DensePoly, rs: &RootSet) -> VietaReport {
    let bits = rs.bits;
    let n = rs.roots.len();
    let c = p.coeffs();
    let lead = &c[n];
    let mut sum = BigComplex::zero(bits);
    let mut prod = BigComplex::from_f64(bits, 1.0, 0.0);
    let mut abs_sum = Float::new(bits);
    for r in &rs.roots {
        sum = &sum + &r.value;
        prod = &prod * &r.value;
        abs_sum += r.value.abs();
    }
    let exp_sum = Float::with_val(bits, -Rational::from(&c[n - 1] / lead));
    let mut sign_prod = Rational::from(&c[0] / lead);
    if n % 2 == 1 {
        sign_prod = -sign_prod;
    }
    let exp_prod = Float::with_val(bits, &sign_prod);
    let sum_err = (&sum - &BigComplex::real(exp_sum.clone())).abs();
    let mut sum_scale = abs_sum.clone();
    if sum_scale < 1 {
        sum_scale = Float::with_val(bits, 1);
    }
    let sum_rel = sum_err / &sum_scale;
    let prod_err = (&prod - &BigComplex::real(exp_prod.clone())).abs();
    let prod_rel = if exp_prod.is_zero() { prod_err } else { prod_err / exp_prod.abs() };
    let limit = -((bits / 2) as f64);
    let (s, pr) = (log2_of(&sum_rel), log2_of(&prod_rel));
    VietaReport { sum_log2_err: s, product_log2_err: pr, ok: s <= limit && pr <= limit }
}

// ---------------------------------------------------------------------------
// Series orders

/// Roots of `P_k`; the stable roots `0`, `−2` of `E⁽ᵏ⁾` are recorded apart.
pub fn roots_of_order(table: &SeriesTable, k: usize, cfg: &RootConfig) -> Result<RootSet> {
    let p = table
        .p(k)
        .ok_or_else(|| Error::InvalidArgument(format!("order {k} has no factored form")))?;
    let mut rs = if p.degree().unwrap_or(0) == 0 {
        RootSet { k, bits: DEFAULT_START_BITS, roots: Vec::new(), stable: Vec::new() }
    } else {
        find_roots(p, cfg)?
    };
    rs.k = k;
    rs.stable = vec![0, -2];
    Ok(rs)
}

/// Roots for several orders in parallel; results keep the input order.
pub fn roots_for_orders(table: &SeriesTable, orders: &[usize], cfg: &RootConfig) -> Vec<Result<RootSet>> {
    orders.par_iter().map(|&k| roots_of_order(table, k, cfg)).collect()
}

// ---------------------------------------------------------------------------
// Classification

/// Label roots converging to `−2M` (M ≥ 2). For each `M` the candidate is the
/// real root or conjugate pair strictly closest to `−2M`; it is labelled if it
/// lies within `window` and `−2M` is also the even integer nearest to it.
pub fn classify_roots(rs: &RootSet, window: f64) -> RootSet {
    let mut out = rs.clone();
    for r in out.roots.iter_mut() {
        r.label = RootLabel::Bulk;
    }
    if out.roots.is_empty() {
        return out;
    }
    // units: a real root, or a conjugate pair (indices of both members)
    let mut units: Vec<Vec<usize>> = Vec::new();
    let mut taken = vec![false; out.roots.len()];
    for i in 0..out.roots.len() {
        if taken[i] {
            continue;
        }
        taken[i] = true;
        let mut u = vec![i];
        if !out.roots[i].is_real() {
            let conj = out.roots[i].value.conj();
            if let Some(j) = (i + 1..out.roots.len()).find(|&j| !taken[j] && out.roots[j].value == conj) {
                taken[j] = true;
                u.push(j);
            }
        }
        units.push(u);
    }
    let min_re = out.roots.iter().map(|r| r.value.re.to_f64()).fold(f64::INFINITY, f64::min);
    let max_m = ((-min_re + window) / 2.0).ceil().max(2.0) as u32;
    for m in 2..=max_m {
        let target = BigComplex::real(Float::with_val(rs.bits, -2 * m as i64));
        let mut dist: Vec<(Float, usize)> = units
            .iter()
            .enumerate()
            .map(|(ui, u)| ((&out.roots[u[0]].value - &target).abs(), ui))
            .collect();
        dist.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        let (d0, u0) = &dist[0];
        if dist.len() > 1 && dist[1].0 <= *d0 {
            continue;
        }
        if d0.to_f64() >= window {
            continue;
        }
        let re = out.roots[units[*u0][0]].value.re.to_f64();
        let nearest_even = 2.0 * (re / 2.0).round();
        if nearest_even != -2.0 * m as f64 {
            continue;
        }
        for &i in &units[*u0] {
            out.roots[i].label = RootLabel::Cluster(m);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Statistics

#[derive(Clone, Debug)]
pub struct RootStats {
    pub k: usize,
    /// `∏ν̃`, exact from the coefficients.
    pub product: Rational,
    /// `[2·∏|ν̃|]^{1/k}`: geometric mean of the nonzero roots of `E⁽ᵏ⁾`,
    /// the stable root `−2` included.
    pub geometric_mean: Float,
    /// `Σ 1/(D − ν̃)` at the requested `D`.
    pub digamma_lhs: Float,
}

/// Product, geometric mean and partial-fraction sum for the roots of `P_k`.
pub fn root_distribution_stats(p: &DensePoly, rs: &RootSet, d: &Float) -> Result<RootStats> {
    let bits = rs.bits.max(d.prec());
    let n = p.degree().unwrap_or(0);
    let c = p.coeffs();
    let mut product = Rational::from(&c[0] / &c[n]);
    if n % 2 == 1 {
        product = -product;
    }
    let k = rs.k;
    let mut gm = Float::with_val(bits, &product).abs();
    gm *= 2;
    let gm = if gm.is_zero() { gm } else { (gm.ln() / k as u32).exp() };
    let dd = BigComplex::real(Float::with_val(bits, d));
    let mut sum = BigComplex::zero(bits);
    for r in &rs.roots {
        let diff = &dd - &r.value;
        let mut tiny = Float::with_val(bits, 1);
        tiny >>= bits as i32 / 2;
        if diff.abs() <= tiny {
            return Err(Error::Pole(format!("D = {} coincides with root {}", d.to_f64(), r.value)));
        }
        sum = &sum + &diff.recip();
    }
    Ok(RootStats { k, product, geometric_mean: gm, digamma_lhs: sum.re })
}

/// `½[ln(6k) − ψ(D/2 + 2)]`, the large-order limit of the partial-fraction sum.
pub fn digamma_limit(k: usize, d: &Float) -> Float {
    let p = d.prec();
    let six_k = Float::with_val(p, 6 * k as u64).ln();
    let arg = Float::with_val(p, d / 2u32) + 2u32;
    let psi = crate::bigfloat::digamma(&arg);
    (six_k - psi) / 2u32
}

/// `(k/(e√3))·(6k²)^{1/k}`, the large-order geometric mean.
pub fn geometric_mean_limit(k: usize, prec: u32) -> Float {
    let kf = Float::with_val(prec, k as u64);
    let e = Float::with_val(prec, 1).exp();
    let s3 = Float::with_val(prec, 3).sqrt();
    let base = Float::with_val(prec, &kf / e) / s3;
    let corr = Float::with_val(prec, 6 * (k * k) as u64).ln() / k as u32;
    base * corr.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Var;
    use rug::Integer;

    fn poly(c: &[i64]) -> DensePoly {
        DensePoly::from_ints(Var::D, c)
    }

    #[test]
    fn quadratic_roots_exact_pair() {
        // D² + 2D + 5 = 0 → −1 ± 2i
        let rs = find_roots(&poly(&[5, 2, 1]), &RootConfig::default()).unwrap();
        assert_eq!(rs.roots.len(), 2);
        assert_eq!(rs.roots[0].value.re, -1);
        assert!((rs.roots[0].value.im.to_f64() - 2.0).abs() < 1e-30);
        assert_eq!(rs.roots[1].value, rs.roots[0].value.conj());
    }

    #[test]
    fn exact_integer_roots_are_split_off() {
        // (D+4)(D−1)(D²+1)
        let p = poly(&[-4, 3, -3, 3, 1]);
        let rs = find_roots(&p, &RootConfig::default()).unwrap();
        let exact: Vec<_> = rs.roots.iter().filter(|r| r.exact).map(|r| r.value.re.to_f64()).collect();
        assert_eq!(exact, vec![-4.0, 1.0]);
    }

    #[test]
    fn wilkinson_like_cluster_resolves_offsets() {
        // (D + 4 − ε)(D + 1)(D − 3) with ε = 10⁻⁴⁰
        let eps = Rational::from((1, Integer::from(10).pow(40u32)));
        let r = Rational::from(-4) + &eps;
        let lin = DensePoly::new(Var::D, vec![-r, Rational::from(1)]);
        let p = lin.checked_mul(&poly(&[-3, -2, 1])).unwrap();
        let rs = find_roots(&p, &RootConfig::default()).unwrap();
        let near = &rs.roots[0].value;
        let off = Float::with_val(rs.bits, &near.re + 4);
        let rel = (off / Float::with_val(64, &eps) - 1u32).abs();
        assert!(rel < 1e-15, "rel {rel}");
    }

    #[test]
    fn solvers_agree() {
        let p = poly(&[7, -3, 0, 2, 5, 1]);
        let a = find_roots(&p, &RootConfig::default()).unwrap();
        let cfg = RootConfig { solver: "durand-kerner".into(), ..Default::default() };
        let b = find_roots(&p, &cfg).unwrap();
        for (x, y) in a.roots.iter().zip(&b.roots) {
            assert!((&x.value - &y.value).abs() < 1e-30);
        }
    }

    #[test]
    fn deterministic() {
        let p = poly(&[1, 1, 1, 1, 1, 1, 1, 3]);
        let a = find_roots(&p, &RootConfig::default()).unwrap();
        let b = find_roots(&p, &RootConfig::default()).unwrap();
        for (x, y) in a.roots.iter().zip(&b.roots) {
            assert_eq!(x.value, y.value);
        }
    }

    #[test]
    fn unknown_solver() {
        let cfg = RootConfig { solver: "bisection".into(), ..Default::default() };
        assert!(matches!(find_roots(&poly(&[1, 1]), &cfg), Err(Error::UnknownStrategy { .. })));
    }

    #[test]
    fn constant_rejected() {
        assert!(find_all_roots(&poly(&[3]), 128).is_err());
    }

    #[test]
    fn newton_polygon_radii() {
        // roots near 1e-10 and 1e10
        let p = poly(&[1, -10_000_000_000, 1]);
        let z = initial_approximations(p.coeffs(), 64);
        let mut r: Vec<f64> = z.iter().map(|x| x.abs().to_f64()).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(r[0] < 1e-9 && r[1] > 1e9);
    }
}
