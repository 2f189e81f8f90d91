//! Exact arithmetic over ℚ, ℚ[x] and ℚ[x₁,…,xₙ], plus matrices over those rings.
//!
//! Every value here is immutable once built and all operations are pure, so
//! everything is `Send + Sync` and may be shared freely across worker threads.

mod dense;
mod json;
mod matrix;
mod mpoly;

use std::fmt;
use std::str::FromStr;

pub use dense::DensePoly;
pub use json::{PolyJson, TermJson};
pub use matrix::{charpoly_hessenberg, det_cofactor, det_fraction_free, det_upper_hessenberg, Matrix};
pub use mpoly::{BivarPoly, MPoly};
pub use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Exact rational number. `rug::Rational` is always kept in lowest terms with a
/// positive denominator, which is exactly the invariant we need.
pub type ExactRational = Rational;

/// Polynomial variable tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Energy.
    E,
    /// Coupling constant.
    G,
    /// Dimension (or effective dimension).
    D,
    /// Radial variable r²/2.
    Zeta,
    /// Symbolic potential coefficient w_k.
    W(u32),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::E => f.write_str("E"),
            Var::G => f.write_str("g"),
            Var::D => f.write_str("D"),
            Var::Zeta => f.write_str("zeta"),
            Var::W(k) => write!(f, "w{k}"),
        }
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E" => Ok(Var::E),
            "g" => Ok(Var::G),
            "D" => Ok(Var::D),
            "zeta" | "ζ" => Ok(Var::Zeta),
            _ => {
                if let Some(k) = s.strip_prefix('w') {
                    if let Ok(k) = k.parse::<u32>() {
                        return Ok(Var::W(k));
                    }
                }
                Err(Error::UnknownVariable(s.to_string()))
            }
        }
    }
}

/// Minimal commutative-ring interface used by the generic matrix code.
///
/// Zero and one are produced "like" an existing element because multivariate
/// polynomials carry their variable list with them.
pub trait RingElem: Clone + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

/// Rings in which exact division (when the quotient exists) is computable.
pub trait ExactDivision: RingElem {
    fn div_exact(&self, divisor: &Self) -> Result<Self>;
}

impl RingElem for Rational {
    fn zero_like(&self) -> Self {
        Rational::new()
    }
    fn one_like(&self) -> Self {
        Rational::from(1)
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn add_ref(&self, other: &Self) -> Self {
        Rational::from(self + other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        Rational::from(self - other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Rational::from(self * other)
    }
    fn neg_ref(&self) -> Self {
        Rational::from(-self)
    }
}

impl ExactDivision for Rational {
    fn div_exact(&self, divisor: &Self) -> Result<Self> {
        if RingElem::is_zero(divisor) {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational::from(self / divisor))
    }
}

/// Parse an exact fraction string such as `"-105/4"` or `"3"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.contains('.') || t.contains('e') || t.contains('E') {
        return Err(Error::Parse(format!("`{s}` is not a decimal-free fraction")));
    }
    Rational::from_str_radix(t, 10).map_err(|e| Error::Parse(format!("`{s}`: {e}")))
}

/// Parse a fraction or a plain decimal (`"-2.65"`, `"1e-3"`) exactly.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.contains('/') || !(t.contains('.') || t.contains('e') || t.contains('E')) {
        return parse_rational(t);
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|e| Error::Parse(format!("`{s}`: {e}")))?),
        None => (t, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = format!("{int}{frac}");
    let n = rug::Integer::from_str_radix(&digits, 10).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
    let scale = exp - frac.len() as i32;
    let ten = Rational::from(rug::Integer::from(10).pow(scale.unsigned_abs()));
    Ok(if scale >= 0 { Rational::from(n) * ten } else { Rational::from(n) / ten })
}

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `base^n` as an exact integer.
pub fn ipow(base: i64, n: u32) -> Integer {
    Integer::from(base).pow(n)
}

#[cfg(test)]
pub(crate) fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_decimal("-2.65").unwrap(), Rational::from((-53, 20)));
        assert_eq!(parse_decimal("1e-3").unwrap(), Rational::from((1, 1000)));
        assert_eq!(parse_decimal("2.5E2").unwrap(), 250);
        assert_eq!(parse_decimal("-7/2").unwrap(), Rational::from((-7, 2)));
        assert!(parse_decimal("1.2.3").is_err());
    }

    #[test]
    fn var_round_trip() {
        for v in [Var::E, Var::G, Var::D, Var::Zeta, Var::W(3)] {
            assert_eq!(v.to_string().parse::<Var>().unwrap(), v);
        }
        assert!("x".parse::<Var>().is_err());
    }

    #[test]
    fn rational_parse() {
        assert_eq!(parse_rational("-105/4").unwrap(), q(-105, 4));
        assert_eq!(parse_rational("6/8").unwrap(), q(3, 4));
        assert!(parse_rational("0.5").is_err());
    }
}
