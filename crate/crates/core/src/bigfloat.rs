//! Complex numbers over MPFR floats.
//!
//! Every value carries its own precision; binary operations produce a result
//! at the larger of the two operand precisions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::{Float, Rational};

pub use rug::Float as BigFloat;

#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn zero(prec: u32) -> Self {
        BigComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn new(re: Float, im: Float) -> Self {
        let p = re.prec().max(im.prec());
        BigComplex { re: Float::with_val(p, re), im: Float::with_val(p, im) }
    }

    pub fn real(re: Float) -> Self {
        let p = re.prec();
        BigComplex { re, im: Float::new(p) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        BigComplex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        Self::real(Float::with_val(prec, q))
    }

    /// Unit vector at angle `theta` scaled by `r`.
    pub fn polar(r: &Float, theta: &Float) -> Self {
        let p = r.prec().max(theta.prec());
        let (s, c) = Float::with_val(p, theta).sin_cos(Float::new(p));
        BigComplex { re: c * r, im: s * r }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Copy at a different precision (rounded to nearest).
    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut out = Float::with_val(p, self.re.square_ref());
        out += Float::with_val(p, self.im.square_ref());
        out
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return Self::zero(p);
        }
        let r = self.abs();
        // sqrt((|z| + |re|)/2) is computed without cancellation
        let mut t = Float::with_val(p, self.re.abs_ref());
        t += &r;
        t /= 2;
        t.sqrt_mut();
        let mut other = Float::with_val(p, &self.im / &t);
        other /= 2;
        if self.re.cmp0() != Some(Ordering::Less) {
            BigComplex { re: t, im: other }
        } else {
            let other = other.abs();
            let t = if self.im.is_sign_negative() { -t } else { t };
            BigComplex { re: other, im: t }
        }
    }

    pub fn mul_real(&self, x: &Float) -> Self {
        let p = self.prec().max(x.prec());
        BigComplex { re: Float::with_val(p, &self.re * x), im: Float::with_val(p, &self.im * x) }
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let n = self.norm_sqr();
        BigComplex {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        }
    }

    /// Decimal rendering of both parts with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (decimal(&self.re, digits), decimal(&self.im, digits))
    }
}

/// Decimal string with `digits` significant digits in scientific notation.
pub fn decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix_round(10, Some(digits.max(1)), Round::Nearest)
}

/// Number of decimal digits represented by `bits` binary digits.
pub fn decimal_digits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor() as usize
}

fn add_parts(a: &BigComplex, b: &BigComplex, sign: bool) -> BigComplex {
    let p = a.prec().max(b.prec());
    if sign {
        BigComplex { re: Float::with_val(p, &a.re + &b.re), im: Float::with_val(p, &a.im + &b.im) }
    } else {
        BigComplex { re: Float::with_val(p, &a.re - &b.re), im: Float::with_val(p, &a.im - &b.im) }
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        add_parts(self, rhs, true)
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        add_parts(self, rhs, false)
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re -= Float::with_val(p, &self.im * &rhs.im);
        let mut im = Float::with_val(p, &self.re * &rhs.im);
        im += Float::with_val(p, &self.im * &rhs.re);
        BigComplex { re, im }
    }
}

impl Div for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        let n = rhs.norm_sqr();
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re += Float::with_val(p, &self.im * &rhs.im);
        let mut im = Float::with_val(p, &self.im * &rhs.re);
        im -= Float::with_val(p, &self.re * &rhs.im);
        re /= &n;
        im /= &n;
        BigComplex { re, im }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: Float::with_val(self.re.prec(), -&self.re), im: Float::with_val(self.im.prec(), -&self.im) }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)@{}", self.re.to_f64(), self.im.to_f64(), self.prec())
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = decimal_digits(self.prec()).min(30);
        let (re, im) = self.to_decimal(d);
        if self.im.is_sign_negative() {
            write!(f, "{re} - {}i", im.trim_start_matches('-'))
        } else {
            write!(f, "{re} + {im}i")
        }
    }
}

/// Digamma at a real argument (MPFR, correctly rounded).
pub fn digamma(x: &Float) -> Float {
    let p = x.prec();
    Float::with_val(p, x.digamma_ref())
}

/// Gamma at arbitrary precision (MPFR, correctly rounded).
pub fn gamma(x: &Float) -> Float {
    Float::with_val(x.prec(), x.gamma_ref())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(128, re, im)
    }

    fn close(a: &BigComplex, b: &BigComplex) -> bool {
        (a - b).abs() < 1e-30
    }

    #[test]
    fn field_ops() {
        let a = c(1.5, -2.0);
        let b = c(-0.25, 3.0);
        assert!(close(&(&(&a * &b) / &b), &a));
        assert!(close(&(&(&a + &b) - &b), &a));
        assert!(close(&(&a * &a.recip()), &c(1.0, 0.0)));
        assert!(close(&(&a * &a.conj()), &BigComplex::real(a.norm_sqr())));
    }

    #[test]
    fn sqrt_principal_branch() {
        for (re, im) in [(4.0, 0.0), (-4.0, 0.0), (0.0, 2.0), (-3.0, -4.0), (3.0, 4.0), (-1.0, 1e-20)] {
            let z = c(re, im);
            let s = z.sqrt();
            assert!(close(&(&s * &s), &z), "{z:?}");
            assert!(s.re >= 0.0);
        }
        let s = c(-4.0, -0.0).sqrt();
        assert_eq!(s.im.to_f64(), -2.0);
    }

    #[test]
    fn precision_is_max_of_operands() {
        let a = BigComplex::from_f64(64, 1.0, 1.0);
        let b = BigComplex::from_f64(200, 1.0, 1.0);
        assert_eq!((&a * &b).prec(), 200);
        assert_eq!((&a + &b).prec(), 200);
    }

    #[test]
    fn special_functions() {
        let x = Float::with_val(128, 2.5);
        let psi = digamma(&x);
        assert!((psi - 0.703_156_640_645_243_2_f64).abs() < 1e-15);
        let g = gamma(&Float::with_val(128, 0.5));
        let sp = Float::with_val(128, rug::float::Constant::Pi).sqrt();
        assert!((g - sp).abs() < 1e-35);
    }

    #[test]
    fn decimal_rendering() {
        let x = Float::with_val(128, 0.04231592827);
        assert!(decimal(&x, 10).starts_with("4.231592827"));
    }
}
