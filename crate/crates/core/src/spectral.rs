//! Spectral polynomials `R₂ⱼ(E) = det[J₊ + V(2J₋) − E]` built three ways.
//!
//! The three constructions are registered behind [`SpectralConstruction`] so
//! callers (and the CLI) pick one by name. They must agree up to a constant;
//! the recursion route's constant is measured from leading coefficients
//! rather than assumed.

use std::fmt;

use rug::Rational;

use crate::error::{Error, Result};
use crate::exact::{det_fraction_free, det_upper_hessenberg, factorial, ipow, MPoly, Matrix, Var};
use crate::potential::PotentialSpec;
use crate::spin::{monomial_matrices, SpinLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    SpinDet,
    CMatrix,
    Recursion,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::SpinDet => "spin-det",
            Provenance::CMatrix => "c-matrix",
            Provenance::Recursion => "recursion",
        })
    }
}

/// Output of one construction.
#[derive(Clone, Debug)]
pub struct SpectralPolynomial {
    pub two_j: u32,
    /// Exactly what the construction produced.
    pub raw: MPoly,
    /// `det[J₊ + V(2J₋) − E] = to_det · raw`.
    pub to_det: Rational,
    pub provenance: Provenance,
}

impl SpectralPolynomial {
    /// `R₂ⱼ` in determinant normalization.
    pub fn det(&self) -> MPoly {
        self.raw.scale(&self.to_det)
    }

    /// `R̃₂ⱼ = (−2)^{−2j} R₂ⱼ`.
    pub fn tilde(&self) -> MPoly {
        self.raw.scale(&(&self.to_det * tilde_factor(self.two_j)))
    }

    /// Factor relating `raw` to the stored `R̃` form.
    pub fn normalization(&self) -> Rational {
        &self.to_det * tilde_factor(self.two_j)
    }

    /// Monic in `E` (the E^{2j+1} coefficient is a nonzero constant).
    pub fn monic(&self) -> MPoly {
        self.raw.monic()
    }
}

/// `(−2)^{−2j}`.
pub fn tilde_factor(two_j: u32) -> Rational {
    let p = Rational::from(ipow(2, two_j));
    let r = Rational::from(p.recip_ref());
    if two_j % 2 == 1 {
        -r
    } else {
        r
    }
}

/// A way of producing `R₂ⱼ` for a potential.
pub trait SpectralConstruction: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, j: SpinLabel, potential: &PotentialSpec) -> Result<SpectralPolynomial>;
}

/// `det[J₊ + Σ w_k J₋^k − E]` from monomial-basis spin matrices and Bareiss
/// elimination.
pub struct SpinDet;

/// `det[w_{k−n} − k(k−1−2j)δ_{k,n−1} − Eδ_{kn}]` from the entry formula,
/// evaluated by the Hessenberg minor recurrence.
pub struct CMatrix;

/// Iterate `a_{k+1} p_{k+1} = Σ_m u_m p_{k−m}` at 𝒟 = −4j and return
/// `s_{2j+1} = Σ_m u_m p_{2j−m}`.
pub struct Recursion;

impl SpectralConstruction for SpinDet {
    fn name(&self) -> &'static str {
        "spin-det"
    }

    fn build(&self, j: SpinLabel, potential: &PotentialSpec) -> Result<SpectralPolynomial> {
        let vars = potential.vars();
        let sm = monomial_matrices(j);
        let lift = |a: &Matrix<Rational>, w: &MPoly| a.map(|x| w.scale(x));
        let e = MPoly::var(&vars, Var::E)?;
        let mut h = lift(&sm.plus, &MPoly::one(&vars));
        let id = sm.zero.identity_like()?;
        h = h.checked_sub(&lift(&id, &e))?;
        let mut pow = sm.minus.clone();
        for k in 1..=potential.max_k().min(j.two_j) {
            let w = potential.w(k);
            if !w.is_zero() {
                h = h.checked_add(&lift(&pow, &w))?;
            }
            pow = pow.checked_mul(&sm.minus)?;
        }
        Ok(SpectralPolynomial {
            two_j: j.two_j,
            raw: det_fraction_free(&h)?,
            to_det: Rational::from(1),
            provenance: Provenance::SpinDet,
        })
    }
}

impl SpectralConstruction for CMatrix {
    fn name(&self) -> &'static str {
        "c-matrix"
    }

    fn build(&self, j: SpinLabel, potential: &PotentialSpec) -> Result<SpectralPolynomial> {
        let vars = potential.vars();
        let n = j.dim();
        let tj = j.two_j as i64;
        let e = MPoly::var(&vars, Var::E)?;
        // 1-based k, n as in the defining formula
        let c = Matrix::from_fn(n, n, |r, col| {
            let (k, nn) = (r as i64 + 1, col as i64 + 1);
            let mut x = if k > nn {
                potential.w((k - nn) as u32)
            } else {
                MPoly::zero(&vars)
            };
            if k == nn - 1 {
                x = &x - &MPoly::constant(&vars, Rational::from(k * (k - 1 - tj)));
            }
            if k == nn {
                x = &x - &e;
            }
            x
        })?;
        // C is lower Hessenberg; its transpose has the same determinant.
        Ok(SpectralPolynomial {
            two_j: j.two_j,
            raw: det_upper_hessenberg(&c.transpose())?,
            to_det: Rational::from(1),
            provenance: Provenance::CMatrix,
        })
    }
}

impl SpectralConstruction for Recursion {
    fn name(&self) -> &'static str {
        "recursion"
    }

    fn build(&self, j: SpinLabel, potential: &PotentialSpec) -> Result<SpectralPolynomial> {
        let vars = potential.vars();
        let tj = j.two_j as i64;
        let l = potential.max_k() as usize;
        let mut u = vec![-&MPoly::var(&vars, Var::E)?];
        u.extend((1..=l as u32).map(|k| potential.w(k)));
        let a = |k: i64| Rational::from(k * (k - 1 - tj));

        let conv = |p: &[MPoly], k: usize| -> MPoly {
            let mut acc = MPoly::zero(&vars);
            for (m, um) in u.iter().enumerate() {
                if m > k {
                    break;
                }
                if !um.is_zero() && !p[k - m].is_zero() {
                    acc = &acc + &(um * &p[k - m]);
                }
            }
            acc
        };

        let mut p = vec![MPoly::one(&vars)];
        for k in 0..j.two_j as usize {
            let ak = a(k as i64 + 1);
            let next = conv(&p, k).scale(&Rational::from(ak.recip_ref()));
            p.push(next);
        }
        let s = conv(&p, j.two_j as usize);
        let lead = s
            .coeff_of(&[(Var::E, j.two_j + 1)])?;
        if lead.cmp0().is_eq() {
            return Err(Error::InvalidArgument("recursion produced a degenerate polynomial".into()));
        }
        // det has E-leading coefficient (−1)^{2j+1}
        let sign = if j.two_j.is_multiple_of(2) { -1 } else { 1 };
        let to_det = Rational::from(sign) / lead;
        Ok(SpectralPolynomial {
            two_j: j.two_j,
            raw: s,
            to_det,
            provenance: Provenance::Recursion,
        })
    }
}

/// Named constructions, selectable at runtime.
pub struct ConstructionRegistry {
    items: Vec<Box<dyn SpectralConstruction>>,
}

impl Default for ConstructionRegistry {
    fn default() -> Self {
        ConstructionRegistry {
            items: vec![Box::new(SpinDet), Box::new(CMatrix), Box::new(Recursion)],
        }
    }
}

impl ConstructionRegistry {
    pub fn register(&mut self, c: Box<dyn SpectralConstruction>) {
        self.items.retain(|x| x.name() != c.name());
        self.items.push(c);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.items.iter().map(|c| c.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn SpectralConstruction> {
        self.items
            .iter()
            .find(|c| c.name() == name)
            .map(|c| c.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "spectral construction",
                name: name.to_string(),
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn SpectralConstruction> {
        self.items.iter().map(|c| c.as_ref())
    }
}

pub fn spectral_poly_spin(j: SpinLabel, p: &PotentialSpec) -> Result<SpectralPolynomial> {
    SpinDet.build(j, p)
}

pub fn spectral_poly_cmatrix(j: SpinLabel, p: &PotentialSpec) -> Result<SpectralPolynomial> {
    CMatrix.build(j, p)
}

pub fn spectral_poly_recursion(j: SpinLabel, p: &PotentialSpec) -> Result<SpectralPolynomial> {
    Recursion.build(j, p)
}

/// `(−1)^{2j}[(2j)!]²`, the value `∏_{k=1}^{2j} a_k(−4j)` takes.
pub fn recursion_constant_product(two_j: u32) -> Rational {
    let f = factorial(two_j);
    let sq = Rational::from(rug::Integer::from(&f * &f));
    if two_j % 2 == 1 {
        -sq
    } else {
        sq
    }
}

/// Top four E-coefficients of `(−1)^{2j+1} R₂ⱼ` predicted by the large-E
/// trace expansion: `1, 0, −Tr(J₊J₋)·w₁, −Tr(J₊²J₋²)·w₂`.
pub fn large_e_coefficients(j: SpinLabel, potential: &PotentialSpec) -> [MPoly; 4] {
    let vars = potential.vars();
    let t1 = crate::spin::trace_pm_formula(j);
    let t2 = crate::spin::trace_ppmm_formula(j);
    [
        MPoly::one(&vars),
        MPoly::zero(&vars),
        potential.w(1).scale(&(-t1)),
        potential.w(2).scale(&(-t2)),
    ]
}

/// Coefficients of `E^{2j+1}, E^{2j}, …` (top `count`) of `(−1)^{2j+1}·det`.
pub fn top_coefficients(sp: &SpectralPolynomial, count: usize) -> Result<Vec<MPoly>> {
    let mut det = sp.det();
    if sp.two_j.is_multiple_of(2) {
        det = -&det;
    }
    let cs = det.coefficients_in(Var::E)?;
    let top = sp.two_j as usize + 1;
    Ok((0..count.min(top + 1))
        .map(|i| cs.get(top - i).cloned().unwrap_or_else(|| MPoly::zero(det.vars())))
        .collect())
}

/// `R̃₂ⱼ(E,g) − R̃₂ⱼ(E,0)` for the quartic.
pub fn quartic_prime_parts(two_j: u32) -> Result<MPoly> {
    let p = PotentialSpec::quartic();
    let r = spectral_poly_spin(SpinLabel::new(two_j), &p)?.tilde();
    let r0 = r
        .specialize(Var::G, &Rational::new())?
        .with_vars(&p.vars())?;
    Ok(&r - &r0)
}

/// `−2 ∏_{k=0}^{2j} ((E − 2j)/2 + k)` over `(E, g)`.
pub fn harmonic_tilde(two_j: u32) -> MPoly {
    let vars = [Var::E, Var::G];
    let half_e = MPoly::var(&vars, Var::E)
        .expect("E present")
        .scale(&Rational::from((1, 2)));
    let mut acc = MPoly::constant(&vars, Rational::from(-2));
    for k in 0..=two_j as i64 {
        let c = MPoly::constant(&vars, Rational::from((2 * k - two_j as i64, 2)));
        acc = &acc * &(&half_e + &c);
    }
    acc
}

/// `2^{2j+1} ∏_{n=−j}^{j} (n − E/2)`, the harmonic determinant.
pub fn harmonic_det(two_j: u32) -> MPoly {
    let vars = [Var::E, Var::G];
    let half_e = MPoly::var(&vars, Var::E)
        .expect("E present")
        .scale(&Rational::from((1, 2)));
    let mut acc = MPoly::constant(&vars, Rational::from(ipow(2, two_j + 1)));
    for i in 0..=two_j as i64 {
        let n = Rational::from((2 * i - two_j as i64, 2));
        acc = &acc * &(&MPoly::constant(&vars, n) - &half_e);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn eg(terms: &[((u32, u32), Rational)]) -> MPoly {
        MPoly::from_terms(
            &[Var::E, Var::G],
            terms.iter().map(|((a, b), c)| (vec![*a, *b], c.clone())),
        )
        .unwrap()
    }

    #[test]
    fn r2_quartic() {
        let r = spectral_poly_spin(SpinLabel::new(2), &PotentialSpec::quartic()).unwrap();
        let want = eg(&[((3, 0), q(-1, 4)), ((1, 0), q(1, 1)), ((0, 1), q(4, 1))]);
        assert_eq!(r.tilde(), want);
    }

    #[test]
    fn r1_quartic_g_free() {
        let r = spectral_poly_spin(SpinLabel::new(1), &PotentialSpec::quartic()).unwrap();
        assert_eq!(r.tilde(), eg(&[((2, 0), q(-1, 2)), ((0, 0), q(1, 2))]));
    }

    #[test]
    fn harmonic_j2() {
        let r = spectral_poly_spin(SpinLabel::new(4), &PotentialSpec::harmonic()).unwrap();
        assert_eq!(r.det(), harmonic_det(4));
    }

    #[test]
    fn cmatrix_generic_small() {
        let p = PotentialSpec::generic(4);
        let vars = p.vars();
        let e = MPoly::var(&vars, Var::E).unwrap();
        let r0 = spectral_poly_cmatrix(SpinLabel::new(0), &p).unwrap();
        assert_eq!(r0.det(), -&e);
        let w1 = MPoly::var(&vars, Var::W(1)).unwrap();
        let w2 = MPoly::var(&vars, Var::W(2)).unwrap();
        let r2 = spectral_poly_cmatrix(SpinLabel::new(2), &p).unwrap();
        let want = &(&(-&e.pow(3)) + &w2.scale(&q(4, 1))) + &(&e * &w1).scale(&q(4, 1));
        assert_eq!(r2.det(), want);
    }

    #[test]
    fn recursion_constant_is_squared_factorial() {
        for tj in 0..=8 {
            let r = spectral_poly_recursion(SpinLabel::new(tj), &PotentialSpec::generic(3)).unwrap();
            assert_eq!(r.to_det, recursion_constant_product(tj), "2j={tj}");
        }
    }

    #[test]
    fn three_routes_agree_small() {
        let reg = ConstructionRegistry::default();
        for tj in 0..=5 {
            let polys: Vec<MPoly> = reg
                .iter()
                .map(|c| c.build(SpinLabel::new(tj), &PotentialSpec::quartic()).unwrap().det())
                .collect();
            assert_eq!(polys[0], polys[1]);
            assert_eq!(polys[0], polys[2]);
        }
    }

    #[test]
    fn j_three_halves_w2_coefficient() {
        // −Tr(J₊²J₋²)·w₂ at j = 3/2 is −24·4g = −96g
        let j = SpinLabel::new(3);
        let p = PotentialSpec::quartic();
        let top = top_coefficients(&spectral_poly_spin(j, &p).unwrap(), 4).unwrap();
        assert_eq!(top[3], eg(&[((0, 1), q(-96, 1))]));
        assert_eq!(top.to_vec(), large_e_coefficients(j, &p).to_vec());
    }

    #[test]
    fn prime_parts() {
        assert_eq!(quartic_prime_parts(2).unwrap(), eg(&[((0, 1), q(4, 1))]));
        let p5 = eg(&[((3, 1), q(28, 1)), ((1, 1), q(-220, 1)), ((0, 2), q(-800, 1))]);
        assert_eq!(quartic_prime_parts(5).unwrap(), p5);
    }

    #[test]
    fn registry_unknown_name() {
        assert!(matches!(
            ConstructionRegistry::default().get("qr"),
            Err(Error::UnknownStrategy { .. })
        ));
    }
}
