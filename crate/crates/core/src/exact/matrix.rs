use std::fmt;

use rug::Rational;

use super::{DensePoly, ExactDivision, RingElem, Var};
use crate::error::{Error, Result};

/// Dense row-major matrix over a ring.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: RingElem> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::BadDimensions("matrix must be non-empty".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::BadDimensions("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// `rows × cols` matrix filled by `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::BadDimensions("matrix must be non-empty".into()));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn map<U: RingElem>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::BadDimensions("add: shape mismatch".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.map(|x| x.neg_ref()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::BadDimensions(format!(
                "mul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let zero = self.data[0].zero_like();
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = zero.clone();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add_ref(&a.mul_ref(b));
                }
            }
            acc
        })
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
            .expect("non-empty by construction")
    }

    pub fn trace(&self) -> Result<T> {
        self.require_square()?;
        let mut acc = self.data[0].zero_like();
        for i in 0..self.rows {
            acc = acc.add_ref(self.get(i, i));
        }
        Ok(acc)
    }

    /// Identity with the same shape and element "kind" as `self`.
    pub fn identity_like(&self) -> Result<Self> {
        self.require_square()?;
        let zero = self.data[0].zero_like();
        let one = self.data[0].one_like();
        Matrix::from_fn(self.rows, self.rows, |i, j| {
            if i == j {
                one.clone()
            } else {
                zero.clone()
            }
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.mul_ref(c))
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self.data[i * self.cols + j])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Determinant by Bareiss fraction-free elimination with row pivoting.
///
/// Every intermediate division is exact, so this works over any integral
/// domain with exact division (ℚ, ℚ[x], ℚ[x,y], …) without introducing
/// fractions of polynomials.
pub fn det_fraction_free<T: ExactDivision>(m: &Matrix<T>) -> Result<T> {
    m.require_square()?;
    let n = m.rows;
    let mut a: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let one = a[0][0].one_like();
    let mut prev = one.clone();
    let mut negate = false;
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(one.zero_like()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j].mul_ref(&a[k][k]).sub_ref(&a[i][k].mul_ref(&a[k][j]));
                a[i][j] = t.div_exact(&prev)?;
            }
            a[i][k] = one.zero_like();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { d.neg_ref() } else { d })
}

/// Determinant by Laplace expansion along the first row. Exponential cost;
/// used only as an independent oracle on small matrices.
pub fn det_cofactor<T: RingElem>(m: &Matrix<T>) -> Result<T> {
    m.require_square()?;
    let idx: Vec<usize> = (0..m.rows).collect();
    Ok(cofactor_rec(m, 0, &idx))
}

fn cofactor_rec<T: RingElem>(m: &Matrix<T>, row: usize, cols: &[usize]) -> T {
    if cols.len() == 1 {
        return m.get(row, cols[0]).clone();
    }
    let mut acc = m.get(0, 0).zero_like();
    for (pos, &c) in cols.iter().enumerate() {
        let a = m.get(row, c);
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = a.mul_ref(&cofactor_rec(m, row + 1, &rest));
        acc = if pos % 2 == 0 {
            acc.add_ref(&term)
        } else {
            acc.sub_ref(&term)
        };
    }
    acc
}

/// Determinant of an upper Hessenberg matrix by the division-free recurrence
/// on leading principal minors:
/// `D_k = Σ_{i≤k} (−1)^{k−i} h_{ik} (∏_{m=i+1}^{k} h_{m,m−1}) D_{i−1}`.
pub fn det_upper_hessenberg<T: RingElem>(m: &Matrix<T>) -> Result<T> {
    m.require_square()?;
    let n = m.rows;
    for i in 0..n {
        for j in 0..i.saturating_sub(1) {
            if !m.get(i, j).is_zero() {
                return Err(Error::BadDimensions(format!(
                    "entry ({i},{j}) below the subdiagonal is nonzero"
                )));
            }
        }
    }
    let one = m.get(0, 0).one_like();
    let mut d: Vec<T> = vec![one.clone()];
    for k in 0..n {
        let mut acc = m.get(k, k).mul_ref(&d[k]);
        let mut prod = one.clone();
        for i in (0..k).rev() {
            prod = prod.mul_ref(m.get(i + 1, i));
            if prod.is_zero() {
                break;
            }
            let h = m.get(i, k);
            if h.is_zero() {
                continue;
            }
            let term = h.mul_ref(&prod).mul_ref(&d[i]);
            acc = if (k - i) % 2 == 0 {
                acc.add_ref(&term)
            } else {
                acc.sub_ref(&term)
            };
        }
        d.push(acc);
    }
    Ok(d.pop().expect("n >= 1"))
}

/// Characteristic polynomial det(x·I − A) of a rational matrix, as a monic
/// polynomial in `var`.
///
/// The matrix is first brought to upper Hessenberg form by elimination
/// similarity transforms over ℚ; the determinant of the shifted Hessenberg
/// matrix then follows from the standard three-term-free recurrence on
/// leading principal minors.
pub fn charpoly_hessenberg(m: &Matrix<Rational>, var: Var) -> Result<DensePoly> {
    m.require_square()?;
    let n = m.rows;
    let mut h: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
        .collect();

    for k in 0..n.saturating_sub(2) {
        let Some(p) = (k + 1..n).find(|&r| h[r][k].cmp0().is_ne()) else {
            continue;
        };
        if p != k + 1 {
            h.swap(p, k + 1);
            for row in h.iter_mut() {
                row.swap(p, k + 1);
            }
        }
        let piv = h[k + 1][k].clone();
        for i in k + 2..n {
            if h[i][k].cmp0().is_eq() {
                continue;
            }
            let f = Rational::from(&h[i][k] / &piv);
            // row_i -= f · row_{k+1}
            for j in 0..n {
                if h[k + 1][j].cmp0().is_ne() {
                    let t = Rational::from(&f * &h[k + 1][j]);
                    h[i][j] -= t;
                }
            }
            // col_{k+1} += f · col_i
            for row in h.iter_mut() {
                if row[i].cmp0().is_ne() {
                    let t = Rational::from(&f * &row[i]);
                    row[k + 1] += t;
                }
            }
        }
    }

    let x = DensePoly::x(var);
    let mut p: Vec<DensePoly> = vec![DensePoly::constant(var, Rational::from(1))];
    for k in 0..n {
        let mut pk = &(&x - &DensePoly::constant(var, h[k][k].clone())) * &p[k];
        let mut prod = Rational::from(1);
        for i in (0..k).rev() {
            prod *= &h[i + 1][i];
            if prod.cmp0().is_eq() {
                break;
            }
            let c = Rational::from(&prod * &h[i][k]);
            if c.cmp0().is_ne() {
                pk = &pk - &p[i].scale(&c);
            }
        }
        p.push(pk);
    }
    Ok(p.pop().expect("n >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, MPoly};

    #[test]
    fn one_by_one() {
        let e = MPoly::var(&[Var::E], Var::E).unwrap();
        let m = Matrix::from_rows(vec![vec![-&e]]).unwrap();
        assert_eq!(det_fraction_free(&m).unwrap(), -&e);
    }

    #[test]
    fn identity_three() {
        let m = Matrix::from_fn(3, 3, |i, j| q((i == j) as i64, 1)).unwrap();
        assert_eq!(det_fraction_free(&m).unwrap(), 1);
    }

    #[test]
    fn two_by_two_generic() {
        let vars = [Var::E, Var::W(1)];
        let e = MPoly::var(&vars, Var::E).unwrap();
        let w1 = MPoly::var(&vars, Var::W(1)).unwrap();
        let m = Matrix::from_rows(vec![vec![-&e, MPoly::one(&vars)], vec![w1.clone(), -&e]]).unwrap();
        assert_eq!(det_fraction_free(&m).unwrap(), &(&e * &e) - &w1);
    }

    #[test]
    fn pivoting_needed() {
        let m = Matrix::from_rows(vec![
            vec![q(0, 1), q(1, 1), q(2, 1)],
            vec![q(1, 1), q(0, 1), q(3, 1)],
            vec![q(4, 1), q(-3, 1), q(8, 1)],
        ])
        .unwrap();
        assert_eq!(det_fraction_free(&m).unwrap(), det_cofactor(&m).unwrap());
    }

    #[test]
    fn non_square_rejected() {
        let m = Matrix::from_fn(2, 3, |_, _| q(1, 1)).unwrap();
        assert!(matches!(det_fraction_free(&m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn hessenberg_matches_bareiss() {
        let m = Matrix::from_rows(vec![
            vec![q(1, 2), q(3, 1), q(-1, 1), q(2, 1)],
            vec![q(5, 1), q(0, 1), q(7, 3), q(1, 1)],
            vec![q(0, 1), q(-2, 1), q(4, 1), q(1, 5)],
            vec![q(0, 1), q(0, 1), q(9, 1), q(-3, 1)],
        ])
        .unwrap();
        assert_eq!(det_upper_hessenberg(&m).unwrap(), det_fraction_free(&m).unwrap());
        assert!(det_upper_hessenberg(&m.transpose()).is_err());
    }

    #[test]
    fn charpoly_small() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3
        let m = Matrix::from_rows(vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(2, 1)]]).unwrap();
        let p = charpoly_hessenberg(&m, Var::E).unwrap();
        assert_eq!(p, DensePoly::from_ints(Var::E, &[3, -4, 1]));
    }
}
