use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;

use super::{DensePoly, ExactDivision, RingElem, Var};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial over ℚ.
///
/// Terms are keyed by exponent vectors aligned with `vars`; the `BTreeMap`
/// order on those keys is lexicographic, so the last entry is the lex-leading
/// term. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: Vec<Var>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

/// Polynomial in `(E, g)`. Same representation as [`MPoly`]; the alias only
/// documents intent at call sites.
pub type BivarPoly = MPoly;

impl MPoly {
    pub fn zero(vars: &[Var]) -> Self {
        MPoly {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[Var], c: Rational) -> Self {
        let mut p = MPoly::zero(vars);
        if c.cmp0().is_ne() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &[Var]) -> Self {
        MPoly::constant(vars, Rational::from(1))
    }

    /// The polynomial consisting of the single variable `v`.
    pub fn var(vars: &[Var], v: Var) -> Result<Self> {
        MPoly::monomial(vars, Rational::from(1), &[(v, 1)])
    }

    /// `c · ∏ v^e` for the listed `(v, e)` pairs.
    pub fn monomial(vars: &[Var], c: Rational, powers: &[(Var, u32)]) -> Result<Self> {
        let mut exps = vec![0u32; vars.len()];
        for &(v, e) in powers {
            let i = index_of(vars, v)?;
            exps[i] += e;
        }
        let mut p = MPoly::zero(vars);
        if c.cmp0().is_ne() {
            p.terms.insert(exps, c);
        }
        Ok(p)
    }

    /// Build from `(exponents, coefficient)` pairs, summing duplicates.
    pub fn from_terms<I>(vars: &[Var], terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = MPoly::zero(vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::BadDimensions(format!(
                    "exponent vector of length {} for {} variables",
                    e.len(),
                    vars.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Lift a univariate polynomial into the given variable list.
    pub fn from_dense(vars: &[Var], p: &DensePoly) -> Result<Self> {
        let i = index_of(vars, p.var())?;
        let mut out = MPoly::zero(vars);
        for (d, c) in p.coeffs().iter().enumerate() {
            if c.cmp0().is_ne() {
                let mut e = vec![0; vars.len()];
                e[i] = d as u32;
                out.terms.insert(e, c.clone());
            }
        }
        Ok(out)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.cmp0().is_eq() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().cmp0().is_eq() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial with exactly these exponents.
    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Coefficient of a monomial given as `(var, exponent)` pairs.
    pub fn coeff_of(&self, powers: &[(Var, u32)]) -> Result<Rational> {
        let mut e = vec![0; self.vars.len()];
        for &(v, d) in powers {
            e[index_of(&self.vars, v)?] = d;
        }
        Ok(self.coeff(&e))
    }

    /// Constant value if the polynomial has no variable dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::new()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Highest power of `v` present (`None` for the zero polynomial).
    pub fn degree_in(&self, v: Var) -> Result<Option<u32>> {
        let i = index_of(&self.vars, v)?;
        Ok(self.terms.keys().map(|e| e[i]).max())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn check_vars(&self, other: &MPoly) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::var_mismatch(&self.vars, &other.vars));
        }
        Ok(())
    }

    /// Re-embed into a larger (or reordered) variable list. Every variable
    /// that actually occurs must be present in `vars`.
    pub fn with_vars(&self, vars: &[Var]) -> Result<MPoly> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match vars.iter().position(|w| w == v) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.terms.keys().any(|e| e[i] != 0) {
                        return Err(Error::var_mismatch(&self.vars, vars));
                    }
                    map.push(None);
                }
            }
        }
        let mut out = MPoly::zero(vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &d) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    ne[j] = d;
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), Rational::from(-c));
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check_vars(other)?;
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let prod = Rational::from(ca * cb);
                *acc.entry(e).or_default() += prod;
            }
        }
        acc.retain(|_, c| c.cmp0().is_ne());
        Ok(MPoly {
            vars: self.vars.clone(),
            terms: acc,
        })
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.cmp0().is_eq() {
            return MPoly::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), Rational::from(a * c)))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut out = MPoly::one(&self.vars);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Partial derivative in `v`.
    pub fn derivative(&self, v: Var) -> Result<MPoly> {
        let i = index_of(&self.vars, v)?;
        let mut out = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut ne = e.clone();
                ne[i] -= 1;
                out.add_term(ne, Rational::from(c * e[i]));
            }
        }
        Ok(out)
    }

    /// Substitute `v = value`; `v` is dropped from the variable list.
    pub fn specialize(&self, v: Var, value: &Rational) -> Result<MPoly> {
        let i = index_of(&self.vars, v)?;
        let vars: Vec<Var> = self.vars.iter().copied().filter(|&w| w != v).collect();
        let mut out = MPoly::zero(&vars);
        let mut pow_cache: Vec<Rational> = vec![Rational::from(1)];
        for (e, c) in &self.terms {
            let d = e[i] as usize;
            while pow_cache.len() <= d {
                let next = Rational::from(pow_cache.last().unwrap() * value);
                pow_cache.push(next);
            }
            let mut ne = e.clone();
            ne.remove(i);
            out.add_term(ne, Rational::from(c * &pow_cache[d]));
        }
        Ok(out)
    }

    /// Substitute every variable and return the resulting number.
    pub fn eval(&self, values: &[(Var, Rational)]) -> Result<Rational> {
        let mut p = self.clone();
        for (v, x) in values {
            p = p.specialize(*v, x)?;
        }
        p.as_constant()
            .ok_or_else(|| Error::InvalidArgument(format!("unassigned variables {:?}", p.vars)))
    }

    /// Substitute `v = q` where `q` is a polynomial over the same variable list.
    pub fn substitute(&self, v: Var, q: &MPoly) -> Result<MPoly> {
        self.check_vars(q)?;
        let i = index_of(&self.vars, v)?;
        let mut out = MPoly::zero(&self.vars);
        let mut pows = vec![MPoly::one(&self.vars)];
        for (e, c) in &self.terms {
            let d = e[i] as usize;
            while pows.len() <= d {
                let next = pows.last().unwrap() * q;
                pows.push(next);
            }
            let mut ne = e.clone();
            ne[i] = 0;
            let mono = MPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::from([(ne, c.clone())]),
            };
            out = &out + &(&mono * &pows[d]);
        }
        Ok(out)
    }

    /// Split into coefficients of powers of `v`: `self = Σ_k out[k] · v^k`.
    /// Each coefficient keeps the full variable list (with zero `v`-degree).
    pub fn coefficients_in(&self, v: Var) -> Result<Vec<MPoly>> {
        let i = index_of(&self.vars, v)?;
        let deg = self.terms.keys().map(|e| e[i]).max().unwrap_or(0) as usize;
        let mut out = vec![MPoly::zero(&self.vars); deg + 1];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let d = ne[i] as usize;
            ne[i] = 0;
            out[d].terms.insert(ne, c.clone());
        }
        Ok(out)
    }

    /// Convert to a dense univariate polynomial; fails if any other variable occurs.
    pub fn to_dense(&self, v: Var) -> Result<DensePoly> {
        let i = index_of(&self.vars, v)?;
        let deg = self.terms.keys().map(|e| e[i]).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::new(); deg + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &d)| j != i && d != 0) {
                return Err(Error::var_mismatch(&self.vars, &[v]));
            }
            coeffs[e[i] as usize] = c.clone();
        }
        Ok(DensePoly::new(v, coeffs))
    }

    /// Lex-leading term.
    pub fn leading_term(&self) -> Option<(&[u32], &Rational)> {
        self.terms.iter().next_back().map(|(e, c)| (e.as_slice(), c))
    }

    /// Divide so that the lex-leading coefficient becomes 1.
    pub fn monic(&self) -> MPoly {
        match self.leading_term() {
            Some((_, c)) => self.scale(&Rational::from(c.recip_ref())),
            None => self.clone(),
        }
    }

    /// Exact division using the multivariate division algorithm in lex order.
    /// Errors if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &MPoly) -> Result<MPoly> {
        self.check_vars(divisor)?;
        let (le, lc) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        let le = le.to_vec();
        let lc_inv = Rational::from(lc.recip_ref());
        let mut rem = self.clone();
        let mut quot = MPoly::zero(&self.vars);
        while let Some((re, rc)) = rem.leading_term() {
            if !re.iter().zip(&le).all(|(a, b)| a >= b) {
                return Err(Error::InexactDivision);
            }
            let qe: Vec<u32> = re.iter().zip(&le).map(|(a, b)| a - b).collect();
            let qc = Rational::from(rc * &lc_inv);
            for (de, dc) in &divisor.terms {
                let e: Vec<u32> = de.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(e, -Rational::from(dc * &qc));
            }
            quot.add_term(qe, qc);
        }
        Ok(quot)
    }

    /// Largest `n` with `divisor^n | self`, together with the cofactor.
    pub fn divide_out(&self, divisor: &MPoly) -> Result<(u32, MPoly)> {
        if divisor.as_constant().is_some() {
            return Err(Error::InvalidArgument(
                "cannot divide out a constant".into(),
            ));
        }
        let mut n = 0;
        let mut cur = self.clone();
        while !cur.is_zero() {
            match cur.exact_div(divisor) {
                Ok(q) => {
                    cur = q;
                    n += 1;
                }
                Err(Error::InexactDivision) => break,
                Err(e) => return Err(e),
            }
        }
        Ok((n, cur))
    }
}

fn index_of(vars: &[Var], v: Var) -> Result<usize> {
    vars.iter()
        .position(|&w| w == v)
        .ok_or_else(|| Error::UnknownVariable(v.to_string()))
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                f.write_str(if c.cmp0().is_lt() { " - " } else { " + " })?;
            } else if c.cmp0().is_lt() {
                f.write_str("-")?;
            }
            let a = Rational::from(c.abs_ref());
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(d, _)| **d > 0)
                .map(|(d, v)| if *d == 1 { v.to_string() } else { format!("{v}^{d}") })
                .collect();
            match (mono.is_empty(), a == 1) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{a}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.checked_add(rhs).expect("MPoly add")
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.checked_sub(rhs).expect("MPoly sub")
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.checked_mul(rhs).expect("MPoly mul")
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), Rational::from(-c)))
                .collect(),
        }
    }
}

impl RingElem for MPoly {
    fn zero_like(&self) -> Self {
        MPoly::zero(&self.vars)
    }
    fn one_like(&self) -> Self {
        MPoly::one(&self.vars)
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
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

impl ExactDivision for MPoly {
    fn div_exact(&self, divisor: &Self) -> Result<Self> {
        self.exact_div(divisor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    const EG: [Var; 2] = [Var::E, Var::G];

    fn r2() -> MPoly {
        // −E(E²−4)/4 + 4g
        MPoly::from_terms(
            &EG,
            [
                (vec![3, 0], q(-1, 4)),
                (vec![1, 0], q(1, 1)),
                (vec![0, 1], q(4, 1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn specialize_g_zero() {
        let h = r2().specialize(Var::G, &q(0, 1)).unwrap();
        let want = DensePoly::new(Var::E, vec![q(0, 1), q(1, 1), q(0, 1), q(-1, 4)]);
        assert_eq!(h.to_dense(Var::E).unwrap(), want);
    }

    #[test]
    fn specialize_absent_variable_keeps_poly() {
        let p = MPoly::from_terms(&[Var::E, Var::D], [(vec![2, 0], q(3, 1))]).unwrap();
        let s = p.specialize(Var::D, &q(7, 1)).unwrap();
        assert_eq!(s.with_vars(&[Var::E, Var::D]).unwrap(), p);
    }

    #[test]
    fn exact_division_and_multiplicity() {
        let a = r2();
        let p = &(&a * &a) * &MPoly::var(&EG, Var::E).unwrap();
        let (n, rest) = p.divide_out(&a).unwrap();
        assert_eq!(n, 2);
        assert_eq!(rest, MPoly::var(&EG, Var::E).unwrap());
        assert!(matches!(
            MPoly::var(&EG, Var::G).unwrap().exact_div(&a),
            Err(Error::InexactDivision)
        ));
    }

    #[test]
    fn substitution() {
        // E → E + g in E² gives E² + 2Eg + g²
        let e = MPoly::var(&EG, Var::E).unwrap();
        let g = MPoly::var(&EG, Var::G).unwrap();
        let got = e.pow(2).substitute(Var::E, &(&e + &g)).unwrap();
        assert_eq!(got, (&e + &g).pow(2));
    }

    #[test]
    fn var_mismatch_detected() {
        let a = MPoly::one(&EG);
        let b = MPoly::one(&[Var::E]);
        assert!(matches!(a.checked_add(&b), Err(Error::VarMismatch { .. })));
    }
}
