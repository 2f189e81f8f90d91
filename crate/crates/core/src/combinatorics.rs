//! Degeneracies `m(D,l)`, `n(j,M)`, `ñ(j,M)` and the exact identities that tie
//! the continued partition function to the fermion-space decomposition.

use std::collections::BTreeMap;

use rug::{Integer, Rational};

use crate::error::Result;
use crate::exact::{factorial, DensePoly, Var};
use crate::potential::PotentialSpec;
use crate::spectral::spectral_poly_spin;
use crate::spin::{build_tensor_hamiltonian, factor_tensor_charpoly, SpinLabel, DEFAULT_TENSOR_CAP};

/// Which closed form of `m(D,l)` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MForm {
    /// `(2l+D−2)/l! · Γ(D+l−2)/Γ(D−1)`.
    Direct,
    /// `(−1)^{l+1} (2l+D−2)/l! · Γ(2−D)/Γ(3−D−l)`, via the reflection formula.
    Reflected,
}

fn lin(c0: i64, c1: i64) -> DensePoly {
    DensePoly::from_ints(Var::D, &[c0, c1])
}

/// `m(D,l)` as a polynomial in `D` (the Gamma ratios cancel to finite
/// products, and for `l = 0` to a removable singularity).
pub fn degeneracy_m_poly(l: u32, form: MForm) -> Result<DensePoly> {
    let mut num = lin(2 * l as i64 - 2, 1);
    let mut den = DensePoly::constant(Var::D, Rational::from(factorial(l)));
    match form {
        MForm::Direct => {
            // Γ(x + l − 1)/Γ(x) with x = D − 1
            if l == 0 {
                den = den.checked_mul(&lin(-2, 1))?;
            } else {
                for i in 0..l as i64 - 1 {
                    num = num.checked_mul(&lin(i - 1, 1))?;
                }
            }
        }
        MForm::Reflected => {
            // Γ(y)/Γ(y + 1 − l) with y = 2 − D
            if l == 0 {
                den = den.checked_mul(&lin(2, -1))?;
            } else {
                for i in 1..l as i64 {
                    num = num.checked_mul(&lin(2 - i, -1))?;
                }
            }
            if l.is_multiple_of(2) {
                num = num.scale(&Rational::from(-1));
            }
        }
    }
    num.exact_div(&den)
}

/// `m(D,l)` at a rational dimension.
pub fn degeneracy_m(d: &Rational, l: u32) -> Result<Rational> {
    Ok(degeneracy_m_poly(l, MForm::Direct)?.eval(d))
}

/// Spin label as `2j`.
pub type TwoJ = u32;

/// `n(j,M) = 2(2j+1)(2M+1)! / ((M−2j)!(M+2j+2)!)`.
pub fn n_closed(two_j: TwoJ, m: u32) -> Integer {
    if two_j > m {
        return Integer::new();
    }
    let num = Integer::from(2 * (two_j + 1)) * factorial(2 * m + 1);
    let den = factorial(m - two_j) * factorial(m + two_j + 2);
    num / den
}

/// `ñ(j,M) = [(−1)^{M+2j}+1]/2 · (2j+1)M! / ((M/2+j+1)!(M/2−j)!)`.
pub fn n_tilde_closed(two_j: TwoJ, m: u32) -> Integer {
    if two_j > m || (m + two_j) % 2 == 1 {
        return Integer::new();
    }
    let a = (m + two_j) / 2;
    let b = (m - two_j) / 2;
    Integer::from(two_j + 1) * factorial(m) / (factorial(a + 1) * factorial(b))
}

fn get(t: &BTreeMap<TwoJ, Integer>, two_j: i64) -> Integer {
    if two_j < 0 {
        return Integer::new();
    }
    t.get(&(two_j as u32)).cloned().unwrap_or_default()
}

/// `n(·,M)` from `n(j,M+1) = 2n(j,M) + n(j−½,M) + n(j+½,M)`, starting at `n(0,0) = 1`.
pub fn n_recursion(m: u32) -> BTreeMap<TwoJ, Integer> {
    let mut t = BTreeMap::from([(0u32, Integer::from(1))]);
    for mm in 0..m {
        let mut next = BTreeMap::new();
        for tj in 0..=mm + 1 {
            let tj = tj as i64;
            let v = (2 * get(&t, tj)) + get(&t, tj - 1) + get(&t, tj + 1);
            if v != 0 {
                next.insert(tj as u32, v);
            }
        }
        t = next;
    }
    t
}

/// `ñ(·,M)` from `ñ(j,M+1) = ñ(j−½,M) + ñ(j+½,M)`, starting at `ñ(0,0) = 1`.
pub fn n_tilde_recursion(m: u32) -> BTreeMap<TwoJ, Integer> {
    let mut t = BTreeMap::from([(0u32, Integer::from(1))]);
    for mm in 0..m {
        let mut next = BTreeMap::new();
        for tj in 0..=mm + 1 {
            let tj = tj as i64;
            let v = get(&t, tj - 1) + get(&t, tj + 1);
            if v != 0 {
                next.insert(tj as u32, v);
            }
        }
        t = next;
    }
    t
}

/// Decompose a tensor power into irreducibles from its weight multiplicities:
/// `site` lists `(2·weight, multiplicity)` of one factor; the multiplicity of
/// spin `j` is `mult(j) − mult(j+1)`.
pub fn decompose_tensor_power(site: &[(i64, u64)], m: u32) -> BTreeMap<TwoJ, Integer> {
    let mut weights: BTreeMap<i64, Integer> = BTreeMap::from([(0, Integer::from(1))]);
    for _ in 0..m {
        let mut next: BTreeMap<i64, Integer> = BTreeMap::new();
        for (w, c) in &weights {
            for &(sw, sc) in site {
                *next.entry(w + sw).or_default() += Integer::from(c * sc);
            }
        }
        weights = next;
    }
    let mut out = BTreeMap::new();
    for (&w, c) in weights.range(0..) {
        let above = weights.get(&(w + 2)).cloned().unwrap_or_default();
        let mult = Integer::from(c - &above);
        if mult != 0 {
            out.insert(w as u32, mult);
        }
    }
    out
}

/// `([0] ⊕ [0] ⊕ [½])^{⊗M}` by brute force.
pub fn n_brute(m: u32) -> BTreeMap<TwoJ, Integer> {
    decompose_tensor_power(&[(0, 2), (1, 1), (-1, 1)], m)
}

/// `[½]^{⊗M}` by brute force.
pub fn n_tilde_brute(m: u32) -> BTreeMap<TwoJ, Integer> {
    decompose_tensor_power(&[(1, 1), (-1, 1)], m)
}

#[derive(Clone, Debug)]
pub struct DegeneracyRow {
    pub two_j: TwoJ,
    pub n_closed: Integer,
    pub n_recursion: Integer,
    pub n_brute: Integer,
    pub n_tilde_closed: Integer,
    pub n_tilde_recursion: Integer,
    pub n_tilde_brute: Integer,
}

#[derive(Clone, Debug)]
pub struct DegeneracyTable {
    pub m: u32,
    pub rows: Vec<DegeneracyRow>,
}

impl DegeneracyTable {
    /// Closed forms, recursions and brute-force decompositions agree.
    pub fn consistent(&self) -> bool {
        self.rows.iter().all(|r| {
            r.n_closed == r.n_recursion
                && r.n_closed == r.n_brute
                && r.n_tilde_closed == r.n_tilde_recursion
                && r.n_tilde_closed == r.n_tilde_brute
        })
    }

    /// `Σ(2j+1)·n(j,M)`.
    pub fn n_dimension(&self) -> Integer {
        self.rows.iter().map(|r| Integer::from(r.two_j + 1) * &r.n_closed).sum()
    }

    /// `Σ(2j+1)·ñ(j,M)`.
    pub fn n_tilde_dimension(&self) -> Integer {
        self.rows.iter().map(|r| Integer::from(r.two_j + 1) * &r.n_tilde_closed).sum()
    }
}

pub fn degeneracy_nj(m: u32) -> DegeneracyTable {
    let (nr, nb, tr, tb) = (n_recursion(m), n_brute(m), n_tilde_recursion(m), n_tilde_brute(m));
    let rows = (0..=m)
        .map(|tj| DegeneracyRow {
            two_j: tj,
            n_closed: n_closed(tj, m),
            n_recursion: nr.get(&tj).cloned().unwrap_or_default(),
            n_brute: nb.get(&tj).cloned().unwrap_or_default(),
            n_tilde_closed: n_tilde_closed(tj, m),
            n_tilde_recursion: tr.get(&tj).cloned().unwrap_or_default(),
            n_tilde_brute: tb.get(&tj).cloned().unwrap_or_default(),
        })
        .collect();
    DegeneracyTable { m, rows }
}

#[derive(Clone, Debug)]
pub struct ZCoefficient {
    pub two_j: TwoJ,
    /// Coefficient of `Tr e^{−βH_j}` from the finite `l`-sum at `D = −2M`.
    pub from_l_sum: Rational,
    /// `(−1)^{2j−M}·n(j,M)`.
    pub from_fermions: Rational,
}

#[derive(Clone, Debug)]
pub struct ZIdentityReport {
    pub m: u32,
    pub coefficients: Vec<ZCoefficient>,
    /// `m(−2M,l) = 0` for every `l ≥ 2M+3` checked.
    pub truncation: bool,
    /// The `z(β, 2+2k)` terms for `k ≥ 0` cancel pairwise after `D → 4−D`.
    pub cancellation: bool,
    pub holds: bool,
}

/// Rebuild the coefficient of each `Tr e^{−βH_j}` in `Z(β,−2M)` from the
/// degeneracies `m(−2M,l)` and compare with `(−1)^{2j−M} n(j,M)`.
///
/// `Z = Σ_l m(−2M,l)·z(−2M+2l)`. Writing `−2M+2l = 2+2k`, the pair `±k`
/// combines via `z(2−2k) = z(2+2k) + Tr e^{−βH_{(k−1)/2}}`; the `z(2+2k)`
/// parts must cancel, leaving `m(−2M, M+1−k)` in front of the trace.
pub fn z_coefficient_identity(m: u32) -> Result<ZIdentityReport> {
    let d = Rational::from(-2 * m as i64);
    let mm = |l: i64| -> Result<Rational> {
        if l < 0 {
            Ok(Rational::new())
        } else {
            degeneracy_m(&d, l as u32)
        }
    };
    let mut truncation = true;
    for l in 2 * m + 3..=2 * m + 12 {
        truncation &= degeneracy_m(&d, l)?.cmp0().is_eq();
    }
    let m1 = m as i64 + 1;
    let mut cancellation = mm(m1)?.cmp0().is_eq();
    let mut coefficients = Vec::new();
    for k in 1..=m1 {
        let up = mm(m1 + k)?;
        let down = mm(m1 - k)?;
        cancellation &= Rational::from(&up + &down).cmp0().is_eq();
        let two_j = (k - 1) as u32;
        let sign = if (two_j + m).is_multiple_of(2) { 1 } else { -1 };
        let from_fermions = Rational::from(n_closed(two_j, m) * sign);
        coefficients.push(ZCoefficient { two_j, from_l_sum: down, from_fermions });
    }
    coefficients.retain(|c| c.two_j <= m);
    let holds = truncation && cancellation && coefficients.iter().all(|c| c.from_l_sum == c.from_fermions);
    Ok(ZIdentityReport { m, coefficients, truncation, cancellation, holds })
}

#[derive(Clone, Debug)]
pub struct DunneHallidayRow {
    pub two_j: TwoJ,
    /// Power of `R₂ⱼ` divided out of the tensor characteristic polynomial.
    pub measured: u32,
    pub n_tilde: Integer,
}

#[derive(Clone, Debug)]
pub struct DunneHallidayReport {
    pub m: u32,
    pub rows: Vec<DunneHallidayRow>,
    /// Leftover constant after peeling off every factor.
    pub constant: Option<Rational>,
    pub holds: bool,
}

/// Factor `det(H − E)` of the `M`-site spin-½ tensor Hamiltonian into powers of
/// the single-spin spectral polynomials and compare the powers with `ñ(j,M)`.
pub fn dunne_halliday_check(m: u32, potential: &PotentialSpec) -> Result<DunneHallidayReport> {
    let th = build_tensor_hamiltonian(m, potential, DEFAULT_TENSOR_CAP)?;
    let f = factor_tensor_charpoly(&th, |tj| Ok(spectral_poly_spin(SpinLabel::new(tj), potential)?.det()))?;
    let rows: Vec<DunneHallidayRow> = f
        .exponents
        .iter()
        .map(|&(two_j, measured)| DunneHallidayRow { two_j, measured, n_tilde: n_tilde_closed(two_j, m) })
        .collect();
    let holds = f.constant.as_ref().is_some_and(|c| c.cmp0().is_ne()) && rows.iter().all(|r| r.n_tilde == r.measured);
    Ok(DunneHallidayReport { m, rows, constant: f.constant, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn m_examples() {
        let one = Rational::from(1);
        assert_eq!(degeneracy_m(&one, 0).unwrap(), 1);
        assert_eq!(degeneracy_m(&one, 1).unwrap(), 1);
        for l in 2..8 {
            assert_eq!(degeneracy_m(&one, l).unwrap(), 0);
        }
        assert_eq!(degeneracy_m(&Rational::from(3), 2).unwrap(), 5);
        for l in 0..6 {
            assert_eq!(degeneracy_m(&Rational::from(3), l).unwrap(), 2 * l + 1);
        }
    }

    #[test]
    fn two_forms_agree() {
        for l in 0..12 {
            assert_eq!(
                degeneracy_m_poly(l, MForm::Direct).unwrap(),
                degeneracy_m_poly(l, MForm::Reflected).unwrap(),
                "l={l}"
            );
        }
    }

    #[test]
    fn truncation_at_negative_even_d() {
        for m in 0..6u32 {
            let d = Rational::from(-2 * m as i64);
            for l in 2 * m + 3..2 * m + 10 {
                assert_eq!(degeneracy_m(&d, l).unwrap(), 0);
            }
            assert_ne!(degeneracy_m(&d, 2 * m + 2).unwrap(), 0);
        }
    }

    #[test]
    fn n_small_cases() {
        assert_eq!(n_closed(2, 2), 1);
        assert_eq!(n_closed(1, 2), 4);
        assert_eq!(n_closed(0, 2), 5);
        for m in 0..10 {
            assert_eq!(n_closed(m, m), 1);
        }
        assert_eq!(n_tilde_closed(1, 2), 0);
        assert_eq!(n_tilde_closed(0, 2), 1);
    }

    #[test]
    fn all_routes_agree() {
        for m in 0..=12 {
            let t = degeneracy_nj(m);
            assert!(t.consistent(), "M={m}");
            assert_eq!(t.n_dimension(), Integer::from(4).pow(m));
            assert_eq!(t.n_tilde_dimension(), Integer::from(2).pow(m));
        }
    }

    #[test]
    fn z_identity() {
        let r0 = z_coefficient_identity(0).unwrap();
        assert_eq!(r0.coefficients.len(), 1);
        assert_eq!(r0.coefficients[0].from_l_sum, 1);
        for m in 0..=12 {
            assert!(z_coefficient_identity(m).unwrap().holds, "M={m}");
        }
    }

    #[test]
    fn dunne_halliday_small() {
        let p = PotentialSpec::quartic();
        for m in 1..=4 {
            let r = dunne_halliday_check(m, &p).unwrap();
            assert!(r.holds, "{r:?}");
        }
    }
}
