//! Eigenvalues at arbitrary real `𝒟` from truncations of the power-series
//! recursion (Hill determinants).
//!
//! With `φ(ζ) = e^{−αζ} χ(ζ)` the Taylor coefficients of `χ` obey
//!
//! `a_{k+1} q_{k+1} = (2αk + α𝒟/2 − E) q_k + (w₁ − α²) q_{k−1} + Σ_{m≥2} w_m q_{k−m}`
//!
//! with `a_k = k(k − 1 + 𝒟/2)`. Imposing `q_{N+1} = 0` turns `E` into an
//! eigenvalue of an `(N+1)`-square lower Hessenberg matrix. For the oscillator
//! at `α = 1` the truncation is exact; for anything else the boundary condition
//! at infinity is only implicit, so every level carries an `N` vs `N+ΔN`
//! agreement figure and nothing here is certified.

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::bigfloat::BigComplex;
use crate::error::{Error, Result};
use crate::exact::Var;
use crate::potential::PotentialSpec;
use crate::roots::{find_roots, initial_approximations_float, RootConfig, SolverRegistry};
use crate::spectral::spectral_poly_spin;
use crate::spin::SpinLabel;

pub const DEFAULT_HILL_BITS: u32 = 256;
pub const DEFAULT_TRUNCATION: usize = 48;
pub const DEFAULT_DELTA_N: usize = 16;
pub const DEFAULT_DIGITS: f64 = 10.0;

#[derive(Clone, Debug)]
pub struct HillConfig {
    pub bits: u32,
    /// `N`: the matrix is `(N+1)`-square.
    pub truncation: usize,
    /// Levels are compared between `N` and `N + delta_n`.
    pub delta_n: usize,
    /// Gaussian factor `e^{−αζ}`; `None` picks [`auto_alpha`].
    pub alpha: Option<Rational>,
    /// Agreement (decimal digits) required for a level to count as converged.
    pub digits: f64,
    pub solver: String,
}

impl Default for HillConfig {
    fn default() -> Self {
        HillConfig {
            bits: DEFAULT_HILL_BITS,
            truncation: DEFAULT_TRUNCATION,
            delta_n: DEFAULT_DELTA_N,
            alpha: None,
            digits: DEFAULT_DIGITS,
            solver: "aberth".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelSource {
    Hill,
    /// Snapped to a root of the spectral polynomial at negative even `𝒟`.
    Algebraic,
}

#[derive(Clone, Debug)]
pub struct HillLevel {
    pub index: usize,
    pub e: Float,
    /// The truncated-determinant value, kept when `e` is replaced by an
    /// algebraic root.
    pub hill_e: Float,
    pub agreement_digits: f64,
    pub converged: bool,
    pub source: LevelSource,
}

#[derive(Clone, Debug)]
pub struct HillSpectrum {
    pub dcal: Rational,
    pub g: Rational,
    pub truncation: usize,
    /// Lowest real eigenvalues, ascending.
    pub levels: Vec<HillLevel>,
    /// Non-real eigenvalues (upper member of each pair) lying below the
    /// highest reported level: levels that have collided and left the axis.
    pub collisions: Vec<BigComplex>,
    /// Every eigenvalue of the larger truncation, sorted by real part.
    pub all: Vec<BigComplex>,
}

/// `2j` when `𝒟 = −4j` is a non-positive even integer.
pub fn negative_even(dcal: &Rational) -> Option<u32> {
    if *dcal.denom() != 1 || dcal.cmp0() == Ordering::Greater {
        return None;
    }
    let n = dcal.numer().to_i64()?;
    (n % 2 == 0).then(|| (-n / 2) as u32)
}

/// `α = 1 + (Σ_{m≥2} |w_m|)^{1/3}` rounded to a quarter: exactly 1 for the
/// oscillator, wider Gaussians as the anharmonic terms grow.
pub fn auto_alpha(potential: &PotentialSpec, g: &Rational) -> Result<Rational> {
    let mut s = 0.0;
    for m in 2..=potential.max_k() {
        s += potential.w_at(m, g)?.to_f64().abs();
    }
    let a = 1.0 + s.cbrt();
    Ok(Rational::from(((a * 4.0).round() as i64, 4)))
}

/// Gaussian factors tried by [`select_alpha`].
pub const ALPHA_CANDIDATES: [(i64, i64); 8] = [(1, 1), (3, 2), (2, 1), (5, 2), (7, 2), (5, 1), (7, 1), (10, 1)];

/// The candidate `α` with the best worst-case `N` vs `N+ΔN` agreement over
/// the lowest `count` levels at the sample points, scanned at half the
/// configured truncation. Ties go to the smaller `α`.
pub fn select_alpha(
    samples: &[Rational],
    potential: &PotentialSpec,
    g: &Rational,
    count: usize,
    cfg: &HillConfig,
) -> Result<Rational> {
    let scan = HillConfig {
        truncation: (cfg.truncation / 2).max(2 * count + 4),
        delta_n: (cfg.delta_n / 2).max(4),
        alpha: None,
        ..cfg.clone()
    };
    let jobs: Vec<(usize, &Rational)> =
        (0..ALPHA_CANDIDATES.len()).flat_map(|a| samples.iter().map(move |d| (a, d))).collect();
    let scores: Vec<(usize, f64)> = jobs
        .par_iter()
        .map(|&(a, d)| {
            let c = HillConfig { alpha: Some(Rational::from(ALPHA_CANDIDATES[a])), ..scan.clone() };
            let s = hill_eigenvalues(d, potential, g, count, &c)?;
            let worst = s.levels.iter().map(|l| l.agreement_digits).fold(f64::INFINITY, f64::min);
            Ok((a, if s.levels.is_empty() { f64::NEG_INFINITY } else { worst }))
        })
        .collect::<Result<_>>()?;
    let mut best = (0, f64::NEG_INFINITY);
    for a in 0..ALPHA_CANDIDATES.len() {
        let score = scores.iter().filter(|s| s.0 == a).map(|s| s.1).fold(f64::INFINITY, f64::min);
        if score > best.1 + 0.05 {
            best = (a, score);
        }
    }
    Ok(Rational::from(ALPHA_CANDIDATES[best.0]))
}

/// Entries of the truncated Gaussian-factored recursion matrix.
struct HillMatrix {
    /// `d_k = 2αk + α𝒟/2` for `k = 0..=N`.
    diag: Vec<Float>,
    /// `a_k` for `k = 0..=N+1`.
    a: Vec<Float>,
    /// `ũ_m` for `m = 0..=L` (`ũ_0` unused).
    u: Vec<Float>,
}

impl HillMatrix {
    fn new(dcal: &Rational, potential: &PotentialSpec, g: &Rational, alpha: &Rational, n: usize, bits: u32) -> Result<Self> {
        let l = potential.max_k() as usize;
        let mut u = vec![Float::new(bits)];
        for m in 1..=l {
            let mut w = potential.w_at(m as u32, g)?;
            if m == 1 {
                w -= Rational::from(alpha * alpha);
            }
            u.push(Float::with_val(bits, &w));
        }
        let half = Rational::from(dcal / 2u32);
        let diag = (0..=n)
            .map(|k| {
                let d = alpha * (Rational::from(2 * k as u64) + &half);
                Float::with_val(bits, &d)
            })
            .collect();
        let a = (0..=n + 1)
            .map(|k| {
                let k = Rational::from(k as u64);
                let v = &k * (Rational::from(&k - 1u32) + &half);
                Float::with_val(bits, &v)
            })
            .collect();
        Ok(HillMatrix { diag, a, u })
    }

    fn size(&self) -> usize {
        self.diag.len()
    }

    /// `Π_{r=k−m+1}^{k} a_r`.
    fn a_product(&self, k: usize, m: usize) -> Float {
        let mut p = Float::with_val(self.a[0].prec(), 1);
        for r in k + 1 - m..=k {
            p *= &self.a[r];
        }
        p
    }

    /// Coefficients (ascending in `E`) of `det(A − E)`, from the
    /// division-free Hessenberg recursion
    /// `f_k = (d_k − E) f_{k−1} + Σ_m ũ_m (a_{k−m+1}⋯a_k) f_{k−m−1}`.
    fn charpoly(&self) -> Vec<Float> {
        let bits = self.diag[0].prec();
        let mut f: Vec<Vec<Float>> = vec![vec![Float::with_val(bits, 1)]];
        for k in 0..self.size() {
            let prev = &f[k];
            let mut next = vec![Float::new(bits); prev.len() + 1];
            for (i, c) in prev.iter().enumerate() {
                next[i] += Float::with_val(bits, &self.diag[k] * c);
                next[i + 1] -= c;
            }
            for m in 1..self.u.len().min(k + 1) {
                if self.u[m].is_zero() {
                    continue;
                }
                let w = Float::with_val(bits, &self.u[m] * &self.a_product(k, m));
                for (i, c) in f[k - m].iter().enumerate() {
                    next[i] += Float::with_val(bits, &w * c);
                }
            }
            f.push(next);
        }
        f.pop().expect("non-empty")
    }

    /// `det(A − E)` and its `E`-derivative at a complex point, straight from
    /// the recursion (no coefficient expansion).
    fn eval(&self, e: &BigComplex) -> (BigComplex, BigComplex) {
        let bits = e.prec();
        let mut f = vec![BigComplex::from_f64(bits, 1.0, 0.0)];
        let mut df = vec![BigComplex::zero(bits)];
        for k in 0..self.size() {
            let shift = &BigComplex::real(self.diag[k].clone()) - e;
            let mut v = &shift * &f[k];
            let mut dv = &(&shift * &df[k]) - &f[k];
            for m in 1..self.u.len().min(k + 1) {
                if self.u[m].is_zero() {
                    continue;
                }
                let w = Float::with_val(bits, &self.u[m] * &self.a_product(k, m));
                v = &v + &f[k - m].mul_real(&w);
                dv = &dv + &df[k - m].mul_real(&w);
            }
            f.push(v);
            df.push(dv);
        }
        (f.pop().expect("non-empty"), df.pop().expect("non-empty"))
    }

    fn polish(&self, z: &mut BigComplex) {
        let bits = z.prec();
        for _ in 0..30 {
            let (p, dp) = self.eval(z);
            if dp.is_zero() || p.is_zero() {
                return;
            }
            let step = &p / &dp;
            *z = &*z - &step;
            let mut lim = z.abs();
            if lim < 1 {
                lim = Float::with_val(bits, 1);
            }
            lim >>= bits as i32 - 8;
            if step.abs() <= lim {
                return;
            }
        }
    }
}

/// All eigenvalues of the `(n+1)`-square truncation, sorted by real part;
/// values whose imaginary part is below `2^{−bits/4}·max(1,|E|)` are put on
/// the real axis.
fn truncated_eigenvalues(
    dcal: &Rational,
    potential: &PotentialSpec,
    g: &Rational,
    n: usize,
    keep: usize,
    cfg: &HillConfig,
) -> Result<Vec<BigComplex>> {
    let bits = cfg.bits;
    let alpha = match &cfg.alpha {
        Some(a) => a.clone(),
        None => auto_alpha(potential, g)?,
    };
    let mat = HillMatrix::new(dcal, potential, g, &alpha, n, bits)?;
    let c = mat.charpoly();
    let registry = SolverRegistry::default();
    let solver = registry.get(&cfg.solver)?;
    let mut z = initial_approximations_float(&c, bits);
    if !solver.refine(&c, &mut z, 2000) {
        return Err(Error::NonConvergence { what: format!("Hill eigenvalues at 𝒟 = {dcal}, N = {n}"), bits });
    }
    // spurious truncation eigenvalues sit far out; polish the small ones
    z.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap_or(Ordering::Equal));
    for zi in z.iter_mut().take(keep) {
        mat.polish(zi);
        let mut tol = zi.abs();
        if tol < 1 {
            tol = Float::with_val(bits, 1);
        }
        tol >>= (bits / 4) as i32;
        if Float::with_val(bits, zi.im.abs_ref()) <= tol {
            zi.im = Float::new(bits);
        }
    }
    z.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(Ordering::Equal)
            .then_with(|| b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal))
    });
    Ok(z)
}

fn reals(z: &[BigComplex]) -> Vec<Float> {
    z.iter().filter(|x| x.im.is_zero()).map(|x| x.re.clone()).collect()
}

fn agreement_digits(a: &Float, b: &Float, cap: f64) -> f64 {
    let diff = Float::with_val(a.prec(), a - b).abs();
    if diff.is_zero() {
        return cap;
    }
    let scale = a.to_f64().abs().max(1.0);
    (-(diff.to_f64() / scale).log10()).min(cap)
}

/// Real roots of `R_{2j}(E)` at coupling `g`.
pub fn algebraic_levels(two_j: u32, potential: &PotentialSpec, g: &Rational, bits: u32) -> Result<Vec<Float>> {
    let r = spectral_poly_spin(SpinLabel::new(two_j), potential)?.det();
    let p = r.specialize(Var::G, g)?.to_dense(Var::E)?;
    let rs = find_roots(&p, &RootConfig::default())?;
    Ok(rs
        .roots
        .iter()
        .filter(|x| x.value.im.is_zero())
        .map(|x| Float::with_val(bits, &x.value.re))
        .collect())
}

/// The `count` lowest real eigenvalues at `𝒟`, with `N` vs `N+ΔN` agreement.
/// At `𝒟 = 0, −2, −4, …` the real roots of the spectral polynomial replace
/// their nearest Hill values.
pub fn hill_eigenvalues(
    dcal: &Rational,
    potential: &PotentialSpec,
    g: &Rational,
    count: usize,
    cfg: &HillConfig,
) -> Result<HillSpectrum> {
    let n = cfg.truncation;
    let coarse = truncated_eigenvalues(dcal, potential, g, n, 2 * count + 4, cfg)?;
    let fine = truncated_eigenvalues(dcal, potential, g, n + cfg.delta_n, 2 * count + 4, cfg)?;
    let coarse_real = reals(&coarse);
    let cap = crate::bigfloat::decimal_digits(cfg.bits) as f64;
    let mut levels: Vec<HillLevel> = reals(&fine)
        .into_iter()
        .take(count)
        .enumerate()
        .map(|(index, e)| {
            let digits = coarse_real
                .iter()
                .map(|c| agreement_digits(&e, c, cap))
                .fold(f64::NEG_INFINITY, f64::max);
            HillLevel { index, hill_e: e.clone(), e, agreement_digits: digits, converged: digits >= cfg.digits, source: LevelSource::Hill }
        })
        .collect();
    if let Some(two_j) = negative_even(dcal) {
        for root in algebraic_levels(two_j, potential, g, cfg.bits)? {
            let nearest = levels.iter_mut().min_by(|x, y| {
                let dx = Float::with_val(cfg.bits, &x.e - &root).abs();
                let dy = Float::with_val(cfg.bits, &y.e - &root).abs();
                dx.partial_cmp(&dy).unwrap_or(Ordering::Equal)
            });
            if let Some(level) = nearest {
                let d = Float::with_val(cfg.bits, &level.e - &root).abs();
                if d < 1e-6 {
                    level.e = root;
                    level.source = LevelSource::Algebraic;
                }
            }
        }
    }
    // a pair counts as a collision only if the smaller truncation has it too
    let top = levels.last().map(|l| l.e.clone());
    let collisions = fine
        .iter()
        .filter(|z| z.im.cmp0() == Some(Ordering::Greater))
        .filter(|z| top.as_ref().is_none_or(|t| z.re <= *t))
        .filter(|z| {
            let scale = z.abs().to_f64().max(1.0);
            coarse.iter().any(|c| (c - *z).abs().to_f64() / scale < 10f64.powf(-cfg.digits / 2.0))
        })
        .cloned()
        .collect();
    Ok(HillSpectrum { dcal: dcal.clone(), g: g.clone(), truncation: n + cfg.delta_n, levels, collisions, all: fine })
}

// ---------------------------------------------------------------------------
// Trajectories

#[derive(Clone, Debug)]
pub struct TrajectoryPoint {
    pub dcal: Rational,
    pub level: usize,
    /// Real part of the tracked eigenvalue.
    pub e: Float,
    /// Imaginary part; nonzero once the level has merged with a neighbour.
    pub im: Float,
    pub truncation: usize,
    /// `None` while the level is off the real axis.
    pub agreement_digits: Option<f64>,
    pub converged: bool,
    pub merged: bool,
    /// The nearest-match step had a competitor almost as close.
    pub ambiguous: bool,
    pub source: LevelSource,
}

/// `from, from+step, …` up to `to` (inclusive when it lands on the grid).
pub fn dcal_grid(from: &Rational, to: &Rational, step: &Rational) -> Result<Vec<Rational>> {
    if step.cmp0() != Ordering::Greater || from > to {
        return Err(Error::InvalidArgument("𝒟 range needs from ≤ to and step > 0".into()));
    }
    let mut out = Vec::new();
    let mut x = from.clone();
    while x <= *to {
        out.push(x.clone());
        x += step;
    }
    Ok(out)
}

/// Track levels `0..levels` across the grid by nearest match, starting from
/// the largest `𝒟` where they are ordered and real. Returned trajectories are
/// in ascending `𝒟`. Without a configured `α` one is picked by
/// [`select_alpha`] on the two ends and the middle of the grid.
pub fn trace_trajectories(
    levels: usize,
    grid: &[Rational],
    potential: &PotentialSpec,
    g: &Rational,
    cfg: &HillConfig,
) -> Result<Vec<Vec<TrajectoryPoint>>> {
    let mut desc: Vec<Rational> = grid.to_vec();
    desc.sort_by(|a, b| b.cmp(a));
    desc.dedup();
    if desc.is_empty() {
        return Err(Error::InvalidArgument("empty 𝒟 grid".into()));
    }
    let chosen;
    let cfg = if cfg.alpha.is_none() {
        let samples = [desc[0].clone(), desc[desc.len() / 2].clone(), desc[desc.len() - 1].clone()];
        let alpha = select_alpha(&samples, potential, g, levels, cfg)?;
        chosen = HillConfig { alpha: Some(alpha), ..cfg.clone() };
        &chosen
    } else {
        cfg
    };
    let spectra: Vec<HillSpectrum> = desc
        .par_iter()
        .map(|d| hill_eigenvalues(d, potential, g, levels + 2, cfg))
        .collect::<Result<_>>()?;
    let bits = cfg.bits;
    let mut out = Vec::with_capacity(levels);
    for level in 0..levels {
        let first = spectra[0].levels.get(level).ok_or_else(|| Error::NonConvergence {
            what: format!("level {level} is not real at 𝒟 = {}", desc[0]),
            bits,
        })?;
        let mut track: Vec<TrajectoryPoint> = vec![point_from_level(&spectra[0], first, level)];
        let mut prev: Vec<BigComplex> = vec![BigComplex::real(first.e.clone())];
        for (i, s) in spectra.iter().enumerate().skip(1) {
            // linear extrapolation from the last two points
            let guess = if prev.len() >= 2 {
                let a = &prev[prev.len() - 1];
                let b = &prev[prev.len() - 2];
                let h1 = Float::with_val(bits, &(Rational::from(&desc[i] - &desc[i - 1])));
                let h0 = Float::with_val(bits, &(Rational::from(&desc[i - 1] - &desc[i - 2])));
                let slope = (a - b).mul_real(&Float::with_val(bits, &h1 / &h0));
                a + &slope
            } else {
                prev[prev.len() - 1].clone()
            };
            let (best, ambiguous) = nearest_candidate(&s.all, &guess);
            let z = s.all[best].clone();
            let mut p = if z.im.is_zero() {
                match s.levels.iter().find(|l| l.e == z.re || Float::with_val(bits, &l.e - &z.re).abs() < 1e-6) {
                    Some(l) => point_from_level(s, l, level),
                    None => raw_point(s, &z, level),
                }
            } else {
                raw_point(s, &z, level)
            };
            p.ambiguous = ambiguous;
            // the conjugate partner is the same pair; keep the upper member
            prev.push(BigComplex::new(p.e.clone(), p.im.clone()));
            track.push(p);
        }
        track.reverse();
        out.push(track);
    }
    Ok(out)
}

/// Single-level convenience wrapper around [`trace_trajectories`].
pub fn trace_trajectory(
    level: usize,
    grid: &[Rational],
    potential: &PotentialSpec,
    g: &Rational,
    cfg: &HillConfig,
) -> Result<Vec<TrajectoryPoint>> {
    let mut all = trace_trajectories(level + 1, grid, potential, g, cfg)?;
    Ok(all.pop().expect("level + 1 ≥ 1 trajectories"))
}

fn nearest_candidate(all: &[BigComplex], guess: &BigComplex) -> (usize, bool) {
    // conjugate pairs count once: compare against the upper half-plane image
    let key = |z: &BigComplex| {
        let up = BigComplex::new(z.re.clone(), Float::with_val(z.prec(), z.im.abs_ref()));
        let g = BigComplex::new(guess.re.clone(), Float::with_val(guess.prec(), guess.im.abs_ref()));
        (&up - &g).abs().to_f64()
    };
    let mut order: Vec<(usize, f64)> = all
        .iter()
        .enumerate()
        .filter(|(_, z)| z.im.cmp0() != Some(Ordering::Less))
        .map(|(i, z)| (i, key(z)))
        .collect();
    order.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal));
    let ambiguous = order.len() >= 2 && order[1].1 < 1.5 * order[0].1 && order[0].1 > 1e-12;
    (order[0].0, ambiguous)
}

fn point_from_level(s: &HillSpectrum, l: &HillLevel, level: usize) -> TrajectoryPoint {
    TrajectoryPoint {
        dcal: s.dcal.clone(),
        level,
        e: l.e.clone(),
        im: Float::new(l.e.prec()),
        truncation: s.truncation,
        agreement_digits: Some(l.agreement_digits),
        converged: l.converged,
        merged: false,
        ambiguous: false,
        source: l.source,
    }
}

fn raw_point(s: &HillSpectrum, z: &BigComplex, level: usize) -> TrajectoryPoint {
    TrajectoryPoint {
        dcal: s.dcal.clone(),
        level,
        e: z.re.clone(),
        im: z.im.clone(),
        truncation: s.truncation,
        agreement_digits: None,
        converged: false,
        merged: !z.im.is_zero(),
        ambiguous: false,
        source: LevelSource::Hill,
    }
}

/// Largest grid `𝒟` at which the trajectory has left the real axis, and the
/// smallest real one above it; the merge lies between the two.
pub fn merge_interval(track: &[TrajectoryPoint]) -> Option<(Rational, Rational)> {
    let mut last_real: Option<&TrajectoryPoint> = None;
    for p in track.iter().rev() {
        if p.merged {
            return last_real.map(|r| (p.dcal.clone(), r.dcal.clone()));
        }
        last_real = Some(p);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        crate::exact::parse_decimal(s).unwrap()
    }

    #[test]
    fn harmonic_is_exact() {
        let cfg = HillConfig { truncation: 20, delta_n: 5, ..Default::default() };
        for d in ["1", "-2.5", "3.25", "-7"] {
            let dcal = q(d);
            let s = hill_eigenvalues(&dcal, &PotentialSpec::harmonic(), &Rational::new(), 5, &cfg).unwrap();
            for (n, l) in s.levels.iter().enumerate() {
                let expect = dcal.to_f64() / 2.0 + 2.0 * n as f64;
                assert!((l.e.to_f64() - expect).abs() < 1e-10, "𝒟={d} n={n}: {}", l.e);
            }
        }
    }

    #[test]
    fn quartic_ground_state_d1() {
        let s = hill_eigenvalues(&q("1"), &PotentialSpec::quartic(), &q("1"), 3, &HillConfig::default()).unwrap();
        assert!((s.levels[0].e.to_f64() - 0.803770651).abs() < 1e-9, "{}", s.levels[0].e);
        assert!(s.levels[0].converged);
    }

    #[test]
    fn cubic_roots_at_minus_four() {
        let g = q("1/10");
        let s = hill_eigenvalues(&q("-4"), &PotentialSpec::quartic(), &g, 3, &HillConfig::default()).unwrap();
        let alg: Vec<&HillLevel> = s.levels.iter().filter(|l| l.source == LevelSource::Algebraic).collect();
        assert_eq!(alg.len(), 3);
        for l in alg {
            let e = l.e.to_f64();
            assert!((e * e * e - 4.0 * e - 16.0 * 0.1).abs() < 1e-10);
        }
    }

    #[test]
    fn negative_even_detection() {
        assert_eq!(negative_even(&q("-4")), Some(2));
        assert_eq!(negative_even(&q("0")), Some(0));
        assert_eq!(negative_even(&q("-3")), None);
        assert_eq!(negative_even(&q("2")), None);
        assert_eq!(negative_even(&q("-9/2")), None);
    }

    #[test]
    fn grid_construction() {
        let g = dcal_grid(&q("-1"), &q("1"), &q("1/2")).unwrap();
        assert_eq!(g.len(), 5);
        assert!(dcal_grid(&q("1"), &q("0"), &q("1")).is_err());
    }
}
