//! Characteristic polynomials and polynomial adjugates of rational matrices.

use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::poly::Poly;
use super::scalar::{self, Scalar};

/// Result of the Faddeev–LeVerrier recurrence for a square matrix `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPolyAdjugate {
    /// `det(λI − M)`, monic of degree `n`.
    pub monic: Poly,
    /// `adj(λI − M)`, entries of degree at most `n − 1`.
    pub adjugate: Matrix<Poly>,
}

impl CharPolyAdjugate {
    /// `det(M − λI) = (−1)ⁿ det(λI − M)`.
    pub fn char_poly(&self) -> Poly {
        if self.adjugate.rows().is_multiple_of(2) {
            self.monic.clone()
        } else {
            -&self.monic
        }
    }
}

/// One pass of Faddeev–LeVerrier: with `B_{n−1} = I`,
/// `c_k = −tr(M·B_k)/(n−k)` and `B_{k−1} = M·B_k + c_k·I`, giving
/// `det(λI − M) = Σ c_k λᵏ` and `adj(λI − M) = Σ B_k λᵏ`.
///
/// For `n = 0` the characteristic polynomial is `1` and the adjugate empty.
pub fn charpoly_and_adjugate(m: &Matrix<Scalar>) -> CharPolyAdjugate {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let n = m.rows();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut terms: Vec<Matrix<Scalar>> = vec![Matrix::zeros(n, n); n];
    if n > 0 {
        let mut b = Matrix::<Scalar>::identity(n);
        for k in (0..n).rev() {
            let mb = m * &b;
            let c = -(mb.trace() / scalar::int((n - k) as i64));
            let next = if k > 0 {
                &mb + &Matrix::identity(n).scaled(&c)
            } else {
                Matrix::zeros(n, n)
            };
            terms[k] = std::mem::replace(&mut b, next);
            coeffs[k] = c;
        }
    }
    let adjugate = Matrix::from_fn(n, n, |i, j| {
        Poly::from_coeffs(terms.iter().map(|t| t[(i, j)].clone()).collect())
    });
    CharPolyAdjugate {
        monic: Poly::from_coeffs(coeffs),
        adjugate,
    }
}

/// `det(M − λI)`.
pub fn char_poly(m: &Matrix<Scalar>) -> Poly {
    charpoly_and_adjugate(m).char_poly()
}

/// `det(λI − M)` by exact determinants at `λ = 0, …, n` and Newton
/// interpolation. Shares no code with the Faddeev–LeVerrier path.
pub fn monic_char_poly_by_interpolation(m: &Matrix<Scalar>) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    let points: Vec<Scalar> = (0..=n).map(|t| scalar::int(t as i64)).collect();
    let values: Vec<Scalar> = points
        .iter()
        .map(|t| {
            let shifted = Matrix::from_fn(n, n, |i, j| {
                let v = -m[(i, j)].clone();
                if i == j {
                    v + t
                } else {
                    v
                }
            });
            shifted.determinant()
        })
        .collect();
    // divided differences
    let mut dd = values.clone();
    for level in 1..=n {
        for i in (level..=n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&points[i] - &points[i - level]);
        }
    }
    let mut acc = Poly::zero();
    for i in (0..=n).rev() {
        acc = &(&acc * &Poly::linear_factor(&points[i])) + &Poly::constant(dd[i].clone());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::int;

    #[test]
    fn one_by_one_zero() {
        let r = charpoly_and_adjugate(&Matrix::from_ints(1, 1, &[0]));
        assert_eq!(r.char_poly(), Poly::from_ints(&[0, -1]));
        assert_eq!(r.adjugate, Matrix::from_vec(1, 1, vec![Poly::one()]));
    }

    #[test]
    fn two_site_hopping() {
        let r = charpoly_and_adjugate(&Matrix::from_ints(2, 2, &[0, 1, 1, 0]));
        assert_eq!(r.char_poly(), Poly::from_ints(&[-1, 0, 1]));
        assert_eq!(r.adjugate[(0, 0)], Poly::lambda());
        assert_eq!(r.adjugate[(0, 1)], Poly::one());
    }

    #[test]
    fn diagonal_complement_block() {
        // diag(v, v, v) → (v − λ)³, here v = 5
        let v = int(5);
        let m = Matrix::from_fn(3, 3, |i, j| if i == j { v.clone() } else { int(0) });
        let expected = Poly::from_ints(&[5, -1]).pow(3);
        assert_eq!(char_poly(&m), expected);
    }

    #[test]
    fn interpolation_agrees() {
        let m = Matrix::from_ints(4, 4, &[1, 2, 0, -1, 2, 0, 3, 1, 0, 3, -2, 0, -1, 1, 0, 4]);
        assert_eq!(monic_char_poly_by_interpolation(&m), charpoly_and_adjugate(&m).monic);
    }

    #[test]
    fn empty_matrix() {
        let r = charpoly_and_adjugate(&Matrix::<Scalar>::zeros(0, 0));
        assert_eq!(r.monic, Poly::one());
        assert_eq!(monic_char_poly_by_interpolation(&Matrix::zeros(0, 0)), Poly::one());
    }
}
