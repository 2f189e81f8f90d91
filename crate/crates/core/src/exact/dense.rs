use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Rational};

use super::{ExactDivision, RingElem, Var};
use crate::error::{Error, Result};

/// Dense univariate polynomial over ℚ; `coeffs[i]` multiplies `var^i`.
///
/// The coefficient vector never ends in a zero, so the zero polynomial has no
/// coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DensePoly {
    var: Var,
    coeffs: Vec<Rational>,
}

impl DensePoly {
    pub fn new(var: Var, coeffs: Vec<Rational>) -> Self {
        let mut p = DensePoly { var, coeffs };
        p.trim();
        p
    }

    pub fn from_ints(var: Var, coeffs: &[i64]) -> Self {
        DensePoly::new(var, coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero(var: Var) -> Self {
        DensePoly {
            var,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(var: Var, c: Rational) -> Self {
        DensePoly::new(var, vec![c])
    }

    /// The polynomial `var`.
    pub fn x(var: Var) -> Self {
        DensePoly::new(var, vec![Rational::new(), Rational::from(1)])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.cmp0().is_eq()) {
            self.coeffs.pop();
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `var^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    fn check_var(&self, other: &DensePoly) -> Result<()> {
        if self.var != other.var {
            return Err(Error::var_mismatch(&[self.var], &[other.var]));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &DensePoly) -> Result<DensePoly> {
        self.check_var(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => Rational::from(a + b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Ok(DensePoly::new(self.var, coeffs))
    }

    pub fn checked_sub(&self, other: &DensePoly) -> Result<DensePoly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &DensePoly) -> Result<DensePoly> {
        self.check_var(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(DensePoly::zero(self.var));
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cmp0().is_eq() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Ok(DensePoly::new(self.var, out))
    }

    pub fn scale(&self, c: &Rational) -> DensePoly {
        DensePoly::new(
            self.var,
            self.coeffs.iter().map(|a| Rational::from(a * c)).collect(),
        )
    }

    /// Multiply by `var^k`.
    pub fn shift(&self, k: usize) -> DensePoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Rational::new(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        DensePoly::new(self.var, coeffs)
    }

    pub fn derivative(&self) -> DensePoly {
        DensePoly::new(
            self.var,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u32))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Horner evaluation with every coefficient rounded at `x`'s precision.
    pub fn eval_float(&self, x: &Float) -> Float {
        let prec = x.prec();
        let mut acc = Float::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Coefficients rounded to floats of the given precision.
    pub fn to_floats(&self, prec: u32) -> Vec<Float> {
        self.coeffs
            .iter()
            .map(|c| Float::with_val(prec, c))
            .collect()
    }

    /// Euclidean division over ℚ.
    pub fn div_rem(&self, divisor: &DensePoly) -> Result<(DensePoly, DensePoly)> {
        self.check_var(divisor)?;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = Rational::from(divisor.leading().recip_ref());
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((DensePoly::zero(self.var), DensePoly::zero(self.var)));
        };
        if nd < dd {
            return Ok((DensePoly::zero(self.var), self.clone()));
        }
        let mut quot = vec![Rational::new(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = Rational::from(&rem[i + dd] * &lead_inv);
            if c.cmp0().is_eq() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= Rational::from(&c * b);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((DensePoly::new(self.var, quot), DensePoly::new(self.var, rem)))
    }

    /// Quotient when `divisor` divides `self` exactly, otherwise an error.
    pub fn exact_div(&self, divisor: &DensePoly) -> Result<DensePoly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision);
        }
        Ok(q)
    }

    /// Substitute `var = value` and return the resulting constant.
    pub fn specialize(&self, var: Var, value: &Rational) -> Result<Rational> {
        if var != self.var {
            return Err(Error::UnknownVariable(var.to_string()));
        }
        Ok(self.eval(value))
    }

    /// ℓ¹ norm of the coefficient vector.
    pub fn norm1(&self) -> Rational {
        let mut acc = Rational::new();
        for c in &self.coeffs {
            acc += Rational::from(c.abs_ref());
        }
        acc
    }

    /// Monic copy (zero stays zero).
    pub fn make_monic(&self) -> DensePoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = Rational::from(self.leading().recip_ref());
        self.scale(&inv)
    }

    /// Monic greatest common divisor over ℚ.
    pub fn gcd(&self, other: &DensePoly) -> Result<DensePoly> {
        self.check_var(other)?;
        let (mut a, mut b) = (self.make_monic(), other.make_monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r.make_monic();
        }
        Ok(a)
    }

    /// `p / gcd(p, p′)`: same roots, each simple.
    pub fn squarefree_part(&self) -> Result<DensePoly> {
        if self.degree().unwrap_or(0) == 0 {
            return Ok(self.clone());
        }
        let g = self.gcd(&self.derivative())?;
        Ok(self.exact_div(&g)?.make_monic())
    }
}

impl fmt::Debug for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.cmp0().is_eq() {
                continue;
            }
            if !first {
                f.write_str(if c.cmp0().is_lt() { " - " } else { " + " })?;
            } else if c.cmp0().is_lt() {
                f.write_str("-")?;
            }
            first = false;
            let a = Rational::from(c.abs_ref());
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}*")?;
                    }
                    write!(f, "{}", self.var)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &DensePoly {
    type Output = DensePoly;
    fn add(self, rhs: &DensePoly) -> DensePoly {
        self.checked_add(rhs).expect("DensePoly add")
    }
}

impl Sub for &DensePoly {
    type Output = DensePoly;
    fn sub(self, rhs: &DensePoly) -> DensePoly {
        self.checked_sub(rhs).expect("DensePoly sub")
    }
}

impl Mul for &DensePoly {
    type Output = DensePoly;
    fn mul(self, rhs: &DensePoly) -> DensePoly {
        self.checked_mul(rhs).expect("DensePoly mul")
    }
}

impl Neg for &DensePoly {
    type Output = DensePoly;
    fn neg(self) -> DensePoly {
        DensePoly {
            var: self.var,
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
        }
    }
}

impl RingElem for DensePoly {
    fn zero_like(&self) -> Self {
        DensePoly::zero(self.var)
    }
    fn one_like(&self) -> Self {
        DensePoly::constant(self.var, Rational::from(1))
    }
    fn is_zero(&self) -> bool {
        DensePoly::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl ExactDivision for DensePoly {
    fn div_exact(&self, divisor: &Self) -> Result<Self> {
        self.exact_div(divisor)
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn gcd_and_squarefree() {
        // (x−1)²(x+2) and (x−1)(x+3)
        let a = DensePoly::from_ints(Var::D, &[2, -3, 0, 1]);
        let b = DensePoly::from_ints(Var::D, &[-3, 2, 1]);
        assert_eq!(a.gcd(&b).unwrap(), DensePoly::from_ints(Var::D, &[-1, 1]));
        assert_eq!(a.squarefree_part().unwrap(), DensePoly::from_ints(Var::D, &[-2, 1, 1]));
    }

    use super::*;
    use crate::exact::q;

    fn e(c: &[i64]) -> DensePoly {
        DensePoly::from_ints(Var::E, c)
    }

    #[test]
    fn distributivity_example() {
        // (E² − 1)·E = E³ − E
        assert_eq!(&e(&[-1, 0, 1]) * &e(&[0, 1]), e(&[0, -1, 0, 1]));
    }

    #[test]
    fn additive_identity() {
        assert_eq!(&e(&[0, -1]) + &DensePoly::zero(Var::E), e(&[0, -1]));
    }

    #[test]
    fn harmonic_part_of_r3() {
        let p = (&e(&[-9, 0, 1]) * &e(&[-1, 0, 1])).scale(&q(-1, 8));
        let want = DensePoly::new(Var::E, vec![q(-9, 8), q(0, 1), q(10, 8), q(0, 1), q(-1, 8)]);
        assert_eq!(p, want);
    }

    #[test]
    fn mismatched_tags_rejected() {
        let d = DensePoly::x(Var::D);
        assert!(matches!(
            e(&[1]).checked_add(&d),
            Err(Error::VarMismatch { .. })
        ));
    }

    #[test]
    fn division() {
        let a = e(&[0, -1, 0, 1]);
        let b = e(&[-1, 0, 1]);
        assert_eq!(a.exact_div(&b).unwrap(), e(&[0, 1]));
        assert!(matches!(a.exact_div(&e(&[1, 1, 1])), Err(Error::InexactDivision)));
        let (q0, r) = e(&[1, 0, 0, 1]).div_rem(&e(&[1, 1])).unwrap();
        assert_eq!(q0, e(&[1, -1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn specialize_series_term() {
        // (D² + 2D)/4 at D = −4 is 2
        let p = DensePoly::new(Var::D, vec![q(0, 1), q(1, 2), q(1, 4)]);
        assert_eq!(p.specialize(Var::D, &q(-4, 1)).unwrap(), 2);
        assert!(p.specialize(Var::E, &q(1, 1)).is_err());
    }
}
