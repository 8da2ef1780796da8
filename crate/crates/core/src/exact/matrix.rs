//! Small dense matrices over exact rings and fields.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Operations needed for matrix products and determinants.
pub trait RingElem:
    Clone + Debug + PartialEq + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> RingElem for T where
    T: Clone + Debug + PartialEq + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Clone, E>(&self, f: impl FnMut(&T) -> std::result::Result<U, E>) -> std::result::Result<Matrix<U>, E> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<std::result::Result<_, _>>()? })
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
}

impl<T: RingElem> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out: Matrix<T> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let next = out.get(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, next);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("matrix-vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect())
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[Matrix<T>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }
}

impl<T> Matrix<T>
where
    T: RingElem + Div<Output = T>,
{
    /// Determinant by Gaussian elimination over a field.
    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Ok(T::zero());
            };
            if piv != col {
                for j in 0..n {
                    let t = a.get(piv, j).clone();
                    a.set(piv, j, a.get(col, j).clone());
                    a.set(col, j, t);
                }
                det = -det;
            }
            let p = a.get(col, col).clone();
            det = det * p.clone();
            for r in col + 1..n {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone() / p.clone();
                for j in col..n {
                    let v = a.get(r, j).clone() - f.clone() * a.get(col, j).clone();
                    a.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv: Matrix<T> = Matrix::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(Error::SingularMatrix)?;
            if piv != col {
                for j in 0..n {
                    let t = a.get(piv, j).clone();
                    a.set(piv, j, a.get(col, j).clone());
                    a.set(col, j, t);
                    let t = inv.get(piv, j).clone();
                    inv.set(piv, j, inv.get(col, j).clone());
                    inv.set(col, j, t);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                let v = a.get(col, j).clone() / p.clone();
                a.set(col, j, v);
                let v = inv.get(col, j).clone() / p.clone();
                inv.set(col, j, v);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j).clone() - f.clone() * a.get(col, j).clone();
                    a.set(r, j, v);
                    let v = inv.get(r, j).clone() - f.clone() * inv.get(col, j).clone();
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Basis of the right nullspace `{x : self x = 0}` from the reduced row
    /// echelon form; one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else { continue };
            if piv != r {
                for j in 0..cols {
                    let t = a.get(piv, j).clone();
                    a.set(piv, j, a.get(r, j).clone());
                    a.set(r, j, t);
                }
            }
            let p = a.get(r, c).clone();
            for j in c..cols {
                let v = a.get(r, j).clone() / p.clone();
                a.set(r, j, v);
            }
            for i in 0..rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in c..cols {
                    let v = a.get(i, j).clone() - f.clone() * a.get(r, j).clone();
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![T::zero(); cols];
                x[fc] = T::one();
                for (i, &pc) in pivots.iter().enumerate() {
                    x[pc] = -a.get(i, fc).clone();
                }
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.det().unwrap(), int(1));
        let inv = a.inverse().unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[-1, 2]]));
        assert!(a.mul(&inv).unwrap().is_identity());
        let s = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.det().unwrap(), int(0));
        assert_eq!(s.inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn nullspace_basis() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
        }
        let b = Matrix::from_rows(vec![vec![rat(1, 2), int(1)]]).unwrap();
        assert_eq!(b.nullspace(), vec![vec![int(-2), int(1)]]);
    }
}
