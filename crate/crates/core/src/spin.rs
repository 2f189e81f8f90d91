//! Spin-j representations of sl(2), traces of ladder words, and the tensor
//! product Hamiltonian over M spin-½ sites.

use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;

use crate::error::{Error, Result};
use crate::exact::{charpoly_hessenberg, DensePoly, MPoly, Matrix, RingElem, Var};
use crate::potential::PotentialSpec;

/// Default guard on the number of sites of the tensor Hamiltonian.
pub const DEFAULT_TENSOR_CAP: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinLabel {
    pub two_j: u32,
}

impl SpinLabel {
    pub fn new(two_j: u32) -> Self {
        SpinLabel { two_j }
    }

    pub fn j(&self) -> Rational {
        Rational::from((self.two_j, 2))
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_j.is_multiple_of(2) {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// Orthonormal |j,m⟩ basis; ladder elements are square roots.
    Standard,
    /// The ζ^i basis (i = 0..2j, m = j − i); every entry rational.
    Monomial,
}

/// Finite sum `Σ c_r √r` over square-free radicands `r`.
///
/// Closed under ring operations, which is all the standard-basis checks need:
/// products of ladder matrices collapse back to rationals on the diagonal.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Surd {
    terms: BTreeMap<u64, Rational>,
}

impl Surd {
    pub fn rational(c: Rational) -> Self {
        let mut s = Surd::default();
        if c.cmp0().is_ne() {
            s.terms.insert(1, c);
        }
        s
    }

    /// `√n` for a nonnegative integer `n`.
    pub fn sqrt(n: u64) -> Self {
        let (out, inner) = split_square(n);
        let mut s = Surd::default();
        if n != 0 {
            s.terms.insert(inner, Rational::from(out));
        }
        s
    }

    /// `Some(q)` when the value is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::new()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, r: u64, c: Rational) {
        if c.cmp0().is_eq() {
            return;
        }
        let e = self.terms.entry(r).or_default();
        *e += c;
        if e.cmp0().is_eq() {
            self.terms.remove(&r);
        }
    }
}

/// `n = a²·b` with `b` square-free.
fn split_square(mut n: u64) -> (u64, u64) {
    let mut out = 1u64;
    let mut inner = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        out *= p.pow(e / 2);
        if e % 2 == 1 {
            inner *= p;
        }
        p += 1;
    }
    (out, inner * n)
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(r, c)| if *r == 1 { c.to_string() } else { format!("{c}√{r}") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl RingElem for Surd {
    fn zero_like(&self) -> Self {
        Surd::default()
    }
    fn one_like(&self) -> Self {
        Surd::rational(Rational::from(1))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (r, c) in &other.terms {
            s.add_term(*r, c.clone());
        }
        s
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
    fn mul_ref(&self, other: &Self) -> Self {
        let mut s = Surd::default();
        for (ra, ca) in &self.terms {
            for (rb, cb) in &other.terms {
                let (out, inner) = split_square(ra * rb);
                s.add_term(inner, Rational::from(ca * cb) * out);
            }
        }
        s
    }
    fn neg_ref(&self) -> Self {
        Surd {
            terms: self
                .terms
                .iter()
                .map(|(r, c)| (*r, Rational::from(-c)))
                .collect(),
        }
    }
}

/// `J₊`, `J₋`, `J₀` for one spin.
#[derive(Clone, Debug)]
pub struct SpinMatrices<T> {
    pub j: SpinLabel,
    pub basis: Basis,
    pub plus: Matrix<T>,
    pub minus: Matrix<T>,
    pub zero: Matrix<T>,
}

/// Monomial-basis matrices with rational entries.
///
/// Columns index the input basis vector ζ^i: `J₋ζ^i = ζ^{i+1}`,
/// `J₊ζ^i = i(2j−i+1)ζ^{i−1}`, `J₀ζ^i = (j−i)ζ^i`.
pub fn monomial_matrices(j: SpinLabel) -> SpinMatrices<Rational> {
    let n = j.dim();
    let tj = j.two_j as i64;
    let plus = Matrix::from_fn(n, n, |r, c| {
        if r + 1 == c {
            let i = c as i64;
            Rational::from(i * (tj - i + 1))
        } else {
            Rational::new()
        }
    })
    .expect("dim ≥ 1");
    let minus = Matrix::from_fn(n, n, |r, c| Rational::from((r == c + 1) as i64)).expect("dim ≥ 1");
    let zero = Matrix::from_fn(n, n, |r, c| {
        if r == c {
            Rational::from((tj - 2 * r as i64, 2))
        } else {
            Rational::new()
        }
    })
    .expect("dim ≥ 1");
    SpinMatrices {
        j,
        basis: Basis::Monomial,
        plus,
        minus,
        zero,
    }
}

/// Matrices in the requested basis. Entries are [`Surd`]s so both bases share
/// one type; monomial entries are always rational.
pub fn make_spin_matrices(j: SpinLabel, basis: Basis) -> SpinMatrices<Surd> {
    match basis {
        Basis::Monomial => {
            let m = monomial_matrices(j);
            let lift = |a: &Matrix<Rational>| a.map(|x| Surd::rational(x.clone()));
            SpinMatrices {
                j,
                basis,
                plus: lift(&m.plus),
                minus: lift(&m.minus),
                zero: lift(&m.zero),
            }
        }
        Basis::Standard => {
            let n = j.dim();
            let tj = j.two_j as u64;
            // index i ↔ m = j − i
            let plus = Matrix::from_fn(n, n, |r, c| {
                if r + 1 == c {
                    let i = c as u64;
                    Surd::sqrt(i * (tj - i + 1))
                } else {
                    Surd::default()
                }
            })
            .expect("dim ≥ 1");
            let minus = plus.transpose();
            let zero = monomial_matrices(j).zero.map(|x| Surd::rational(x.clone()));
            SpinMatrices {
                j,
                basis,
                plus,
                minus,
                zero,
            }
        }
    }
}

/// Rings that contain ℚ.
pub trait FromRational {
    fn from_rational(q: &Rational) -> Self;
}

impl FromRational for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl FromRational for Surd {
    fn from_rational(q: &Rational) -> Self {
        Surd::rational(q.clone())
    }
}

impl<T: RingElem + PartialEq + FromRational> SpinMatrices<T> {
    fn commutator(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
        let ab = a.checked_mul(b).expect("square");
        let ba = b.checked_mul(a).expect("square");
        ab.checked_sub(&ba).expect("same shape")
    }

    /// `[J₀,J±] = ±J±`, `[J₊,J₋] = 2J₀` and the Casimir, all exact.
    pub fn check_algebra(&self) -> bool {
        let two = T::from_rational(&Rational::from(2));
        let c1 = Self::commutator(&self.zero, &self.plus) == self.plus;
        let c2 = Self::commutator(&self.zero, &self.minus) == self.minus.map(|x| x.neg_ref());
        let c3 = Self::commutator(&self.plus, &self.minus) == self.zero.scale(&two);
        c1 && c2 && c3 && self.casimir_is_scalar()
    }

    /// ½(J₊J₋ + J₋J₊) + J₀² = j(j+1)·Id.
    fn casimir_is_scalar(&self) -> bool {
        let pm = self.plus.checked_mul(&self.minus).expect("square");
        let mp = self.minus.checked_mul(&self.plus).expect("square");
        let zz = self.zero.checked_mul(&self.zero).expect("square");
        let half = T::from_rational(&Rational::from((1, 2)));
        let c = pm.checked_add(&mp).expect("shape").scale(&half).checked_add(&zz).expect("shape");
        let j = self.j.j();
        let want = T::from_rational(&(Rational::from(&j + 1u32) * &j));
        let n = self.j.dim();
        (0..n).all(|r| {
            (0..n).all(|k| {
                let v = c.get(r, k);
                if r == k {
                    *v == want
                } else {
                    v.is_zero()
                }
            })
        })
    }
}

/// Exact trace of a product of ladder operators, e.g. `[true, false]` for
/// `Tr(J₊J₋)` (`true` = J₊, `false` = J₋).
pub fn trace_word(j: SpinLabel, word: &[bool]) -> Rational {
    let m = monomial_matrices(j);
    let mut acc = m.zero.identity_like().expect("square");
    for &up in word {
        let f = if up { &m.plus } else { &m.minus };
        acc = acc.checked_mul(f).expect("square");
    }
    acc.trace().expect("square")
}

/// `(2/3) j(j+1)(2j+1)`.
pub fn trace_pm_formula(j: SpinLabel) -> Rational {
    let jj = j.j();
    let tj1 = Rational::from(j.two_j + 1);
    Rational::from((2, 3)) * &jj * Rational::from(&jj + 1u32) * tj1
}

/// `(2/15) j(j+1)(2j+1)(2j−1)(2j+3)`.
pub fn trace_ppmm_formula(j: SpinLabel) -> Rational {
    let jj = j.j();
    let tj = j.two_j as i64;
    Rational::from((2, 15))
        * &jj
        * Rational::from(&jj + 1u32)
        * Rational::from(tj + 1)
        * Rational::from(tj - 1)
        * Rational::from(tj + 3)
}

/// `T̃₊ + V(2T̃₋)` on `⊗ᴹ[½]`, with site-local spin-½ generators in the
/// monomial basis.
#[derive(Clone, Debug)]
pub struct TensorHamiltonian {
    pub m: u32,
    pub potential: PotentialSpec,
    /// Entries are E-free polynomials over `potential.vars()`.
    pub matrix: Matrix<MPoly>,
}

fn kron_site(op: &Matrix<Rational>, site: u32, m: u32) -> Matrix<Rational> {
    let n = 1usize << m;
    // site 0 is the most significant bit
    let shift = m - 1 - site;
    Matrix::from_fn(n, n, |r, c| {
        let others = !(1usize << shift);
        if r & others != c & others {
            return Rational::new();
        }
        let br = (r >> shift) & 1;
        let bc = (c >> shift) & 1;
        op.get(br, bc).clone()
    })
    .expect("n ≥ 2")
}

pub fn build_tensor_hamiltonian(m: u32, potential: &PotentialSpec, cap: u32) -> Result<TensorHamiltonian> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be positive".into()));
    }
    if m > cap {
        return Err(Error::SpinCapExceeded { m, cap });
    }
    let half = monomial_matrices(SpinLabel::new(1));
    let n = 1usize << m;
    let zero = Matrix::from_fn(n, n, |_, _| Rational::new()).expect("n ≥ 2");
    let mut tp = zero.clone();
    let mut tm = zero;
    for s in 0..m {
        tp = tp.checked_add(&kron_site(&half.plus, s, m))?;
        tm = tm.checked_add(&kron_site(&half.minus, s, m))?;
    }
    let vars = potential.vars();
    let lift = |a: &Matrix<Rational>, w: &MPoly| a.map(|x| w.scale(x));
    let mut h = lift(&tp, &MPoly::one(&vars));
    let mut pow = tm.clone();
    for k in 1..=potential.max_k() {
        let w = potential.w(k);
        if !w.is_zero() {
            h = h.checked_add(&lift(&pow, &w))?;
        }
        pow = pow.checked_mul(&tm)?;
    }
    Ok(TensorHamiltonian {
        m,
        potential: potential.clone(),
        matrix: h,
    })
}

impl TensorHamiltonian {
    /// `det(H − E·Id)` as a polynomial in `(E, g)`.
    ///
    /// Computed from exact characteristic polynomials at enough rational
    /// sample couplings to pin down the g-dependence, then Lagrange
    /// interpolation; one extra sample is checked against the interpolant.
    pub fn characteristic_polynomial(&self) -> Result<MPoly> {
        let vars = self.potential.vars();
        if vars != [Var::E, Var::G] {
            return Err(Error::InvalidPotential(
                "tensor characteristic polynomial needs a split potential".into(),
            ));
        }
        let n = self.matrix.rows();
        // weight counting: J₊ raises by one, a g·J₋^k term lowers by k ≥ 2 …
        // so each permutation term carries at most n/3 powers of g; be generous.
        let deg_g = n / 2 + 1;
        let samples: Vec<Rational> = (0..=deg_g + 1).map(|i| Rational::from(i as i64 - 1)).collect();
        let sign = if n.is_multiple_of(2) { 1 } else { -1 };
        let polys: Vec<DensePoly> = samples
            .iter()
            .map(|g| {
                let a = self.matrix.map(|p| {
                    p.specialize(Var::G, g)
                        .and_then(|q| q.specialize(Var::E, &Rational::new()))
                        .ok()
                        .and_then(|q| q.as_constant())
                        .expect("entries are polynomials in g only")
                });
                charpoly_hessenberg(&a, Var::E).map(|p| p.scale(&Rational::from(sign)))
            })
            .collect::<Result<_>>()?;
        let (fit, check) = samples.split_at(deg_g + 1);
        let mut out = MPoly::zero(&vars);
        for e in 0..=n {
            let ys: Vec<Rational> = polys[..=deg_g].iter().map(|p| p.coeff(e)).collect();
            let poly_g = lagrange(fit, &ys);
            let extra = polys[deg_g + 1].coeff(e);
            if poly_g.eval(&check[0]) != extra {
                return Err(Error::InvalidArgument(
                    "g-degree bound too small for tensor characteristic polynomial".into(),
                ));
            }
            for (d, c) in poly_g.coeffs().iter().enumerate() {
                if c.cmp0().is_ne() {
                    out = &out + &MPoly::from_terms(&vars, [(vec![e as u32, d as u32], c.clone())])?;
                }
            }
        }
        Ok(out)
    }
}

/// Interpolating polynomial in `g` through `(xs[i], ys[i])`.
fn lagrange(xs: &[Rational], ys: &[Rational]) -> DensePoly {
    let mut out = DensePoly::zero(Var::G);
    for (i, xi) in xs.iter().enumerate() {
        if ys[i].cmp0().is_eq() {
            continue;
        }
        let mut basis = DensePoly::constant(Var::G, Rational::from(1));
        let mut denom = Rational::from(1);
        for (k, xk) in xs.iter().enumerate() {
            if k != i {
                basis = &basis * &DensePoly::new(Var::G, vec![Rational::from(-xk), Rational::from(1)]);
                denom *= Rational::from(xi - xk);
            }
        }
        out = &out + &basis.scale(&Rational::from(&ys[i] / &denom));
    }
    out
}

/// Outcome of dividing the tensor characteristic polynomial by powers of the
/// spectral polynomials `R₂ⱼ`.
#[derive(Clone, Debug)]
pub struct TensorFactorization {
    pub m: u32,
    /// `(2j, exponent)` from the top spin down.
    pub exponents: Vec<(u32, u32)>,
    /// Residual after division; a constant when the factorization is complete.
    pub constant: Option<Rational>,
}

/// Peel off `R₂ⱼ` factors (raw determinants supplied by `r_of`) from the
/// tensor characteristic polynomial, largest spin first.
pub fn factor_tensor_charpoly(
    th: &TensorHamiltonian,
    r_of: impl Fn(u32) -> Result<MPoly>,
) -> Result<TensorFactorization> {
    let mut rest = th.characteristic_polynomial()?;
    let mut exponents = Vec::new();
    let mut two_j = th.m as i64;
    while two_j >= 0 {
        let r = r_of(two_j as u32)?;
        let (e, q) = rest.divide_out(&r)?;
        exponents.push((two_j as u32, e));
        rest = q;
        two_j -= 2;
    }
    Ok(TensorFactorization {
        m: th.m,
        exponents,
        constant: rest.as_constant(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn spin_zero_is_trivial() {
        let m = make_spin_matrices(SpinLabel::new(0), Basis::Standard);
        assert!(m.plus.get(0, 0).is_zero() && m.minus.get(0, 0).is_zero() && m.zero.get(0, 0).is_zero());
    }

    #[test]
    fn spin_half_standard() {
        let m = make_spin_matrices(SpinLabel::new(1), Basis::Standard);
        let one = Surd::rational(q(1, 1));
        assert_eq!(m.plus.get(0, 1), &one);
        assert!(m.plus.get(1, 0).is_zero());
        assert_eq!(m.minus, m.plus.transpose());
    }

    #[test]
    fn algebra_both_bases() {
        for tj in 0..=12 {
            for b in [Basis::Standard, Basis::Monomial] {
                assert!(make_spin_matrices(SpinLabel::new(tj), b).check_algebra(), "2j={tj} {b:?}");
            }
            assert!(monomial_matrices(SpinLabel::new(tj)).check_algebra());
        }
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace_word(SpinLabel::new(2), &[true, false]), 4);
        assert_eq!(trace_word(SpinLabel::new(3), &[true, false]), 10);
        assert_eq!(trace_word(SpinLabel::new(2), &[true, true, false, false]), 4);
        assert_eq!(trace_word(SpinLabel::new(5), &[true]), 0);
    }

    #[test]
    fn trace_formulas() {
        for tj in 0..=8 {
            let j = SpinLabel::new(tj);
            assert_eq!(trace_word(j, &[true, false]), trace_pm_formula(j));
            assert_eq!(trace_word(j, &[true, true, false, false]), trace_ppmm_formula(j));
        }
    }

    #[test]
    fn surd_products() {
        let a = Surd::sqrt(6);
        let b = Surd::sqrt(6);
        assert_eq!(a.mul_ref(&b).as_rational(), Some(q(6, 1)));
        assert_eq!(Surd::sqrt(12).mul_ref(&Surd::sqrt(3)).as_rational(), Some(q(6, 1)));
        assert_eq!(split_square(72), (6, 2));
    }

    #[test]
    fn single_site_matches_spin_half() {
        let p = PotentialSpec::quartic();
        let th = build_tensor_hamiltonian(1, &p, DEFAULT_TENSOR_CAP).unwrap();
        let vars = p.vars();
        // H = J₊ + w₁J₋ (J₋² = 0 on one site)
        assert_eq!(th.matrix.get(0, 1), &MPoly::one(&vars));
        assert_eq!(th.matrix.get(1, 0), &MPoly::one(&vars));
        assert!(th.matrix.get(0, 0).is_zero());
    }

    #[test]
    fn cap_enforced() {
        let r = build_tensor_hamiltonian(11, &PotentialSpec::quartic(), DEFAULT_TENSOR_CAP);
        assert!(matches!(r, Err(Error::SpinCapExceeded { m: 11, cap: 10 })));
    }
}
