//! Dense row-major matrices over any [`Ring`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::scalar::{self, Scalar};
use super::Ring;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
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

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Rows `rows` and columns `cols`, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<T> {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Simultaneous row/column reordering: `out[i][j] = self[order[i]][order[j]]`.
    pub fn reordered(&self, order: &[usize]) -> Matrix<T> {
        self.submatrix(order, order)
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn scaled(&self, c: &T) -> Matrix<T> {
        self.map(|x| x.clone() * c)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// `self·other − other·self`
    pub fn commutator(&self, other: &Matrix<T>) -> Matrix<T> {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, e: usize) -> Matrix<T> {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `[I, A, A², …, A^{count−1}]`
    pub fn powers(&self, count: usize) -> Vec<Matrix<T>> {
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return out;
        }
        out.push(Matrix::identity(self.rows));
        for k in 1..count {
            let next = &out[k - 1] * self;
            out.push(next);
        }
        out
    }

    /// Determinant by Laplace expansion along the first row. Exponential;
    /// intended for small matrices and independent cross-checks.
    pub fn determinant_laplace(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        match n {
            0 => T::one(),
            1 => self.data[0].clone(),
            _ => {
                let mut acc = T::zero();
                for j in 0..n {
                    if self[(0, j)].is_zero() {
                        continue;
                    }
                    let rows: Vec<usize> = (1..n).collect();
                    let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                    let minor = self.submatrix(&rows, &cols).determinant_laplace();
                    let term = self[(0, j)].clone() * &minor;
                    acc = if j % 2 == 0 { acc + &term } else { acc - &term };
                }
                acc
            }
        }
    }
}

impl Matrix<Scalar> {
    pub fn from_ints(rows: usize, cols: usize, data: &[i64]) -> Self {
        Matrix::from_vec(rows, cols, data.iter().map(|&v| scalar::int(v)).collect())
    }

    /// Exact Gaussian elimination.
    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Scalar::zero();
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = -det;
            }
            let p = a[(col, col)].clone();
            det *= &p;
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] / &p;
                for c in col..n {
                    let v = &f * &a[(col, c)];
                    a[(r, c)] -= v;
                }
            }
        }
        det
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(scalar::to_f64)
    }

    /// Largest absolute row sum, a bound on the spectral radius.
    pub fn max_row_sum(&self) -> Scalar {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .fold(Scalar::zero(), |acc, x| acc + scalar::abs(x))
            })
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn to_poly(&self) -> Matrix<Poly> {
        self.map(|x| Poly::constant(x.clone()))
    }

    pub fn to_ratfunc(&self) -> Matrix<RatFunc> {
        self.map(|x| RatFunc::constant(x.clone()))
    }

    /// `self − λ·I` as a polynomial matrix.
    pub fn minus_lambda(&self) -> Matrix<Poly> {
        assert!(self.is_square());
        let mut out = self.to_poly();
        for i in 0..self.rows {
            out[(i, i)] = &out[(i, i)] - &Poly::lambda();
        }
        out
    }
}

impl Matrix<Poly> {
    /// Fraction-free (Bareiss) determinant over ℚ[λ].
    pub fn determinant(&self) -> Poly {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Poly::one();
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = Poly::one();
        for k in 0..n - 1 {
            let Some(piv) = (k..n).find(|&r| !a[(r, k)].is_zero()) else {
                return Poly::zero();
            };
            if piv != k {
                a.swap_rows(piv, k);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[(i, j)] * &a[(k, k)]) - &(&a[(i, k)] * &a[(k, j)]);
                    a[(i, j)] = num.exact_div(&prev).expect("Bareiss division is exact");
                }
                a[(i, k)] = Poly::zero();
            }
            prev = a[(k, k)].clone();
        }
        let det = a[(n - 1, n - 1)].clone();
        if sign {
            -det
        } else {
            det
        }
    }

    pub fn eval(&self, x: &Scalar) -> Matrix<Scalar> {
        self.map(|p| p.eval(x))
    }
}

impl Matrix<f64> {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl<T> Matrix<T> {
    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Ring> Add<&Matrix<T>> for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }
}

impl<T: Ring> Sub<&Matrix<T>> for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b)
                .collect(),
        }
    }
}

impl<T: Ring> Mul<&Matrix<T>> for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let acc = std::mem::replace(&mut out[(i, j)], T::zero());
                    out[(i, j)] = acc + &(a.clone() * b);
                }
            }
        }
        out
    }
}

impl<T: Ring> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(0);
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            f.write_str("]")?;
            if i + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::int;

    #[test]
    fn gaussian_and_laplace_agree() {
        let m = Matrix::from_ints(3, 3, &[2, -1, 0, 4, 3, 1, 0, 5, -2]);
        assert_eq!(m.determinant(), m.determinant_laplace());
        assert_eq!(m.determinant(), int(-30));
    }

    #[test]
    fn bareiss_matches_laplace_on_polynomial_matrix() {
        let m = Matrix::from_ints(4, 4, &[0, 1, 0, 2, 1, 0, 3, 0, 0, 3, 1, 1, 2, 0, 1, 0]);
        let a = m.minus_lambda();
        assert_eq!(a.determinant(), a.determinant_laplace());
    }

    #[test]
    fn bareiss_handles_zero_pivot() {
        // leading entry vanishes identically
        let m = Matrix::from_ints(3, 3, &[0, 1, 1, 1, 0, 1, 1, 1, 0]).to_poly();
        assert_eq!(m.determinant(), Poly::constant(int(2)));
    }

    #[test]
    fn singular_polynomial_matrix() {
        let m = Matrix::from_ints(2, 2, &[1, 2, 2, 4]).to_poly();
        assert!(m.determinant().is_zero());
    }

    #[test]
    fn reorder_and_submatrix() {
        let m = Matrix::from_ints(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
        assert_eq!(m.reordered(&[2, 0]), Matrix::from_ints(2, 2, &[9, 7, 3, 1]));
        assert_eq!(m.transpose()[(0, 2)], int(7));
    }
}
