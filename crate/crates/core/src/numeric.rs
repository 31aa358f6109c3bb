//! Floating-point helpers: a cyclic Jacobi eigensolver for real symmetric
//! matrices and polynomial root finding for reports.

use num_complex::Complex64;

use crate::exact::scalar;
use crate::exact::{Matrix, Poly};

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// (as columns).
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix<f64>,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }
}

/// Cyclic Jacobi sweeps until the off-diagonal mass drops below
/// `1e-15 · ‖A‖_F`. Panics if `a` is not square.
pub fn symmetric_eigen(a: &Matrix<f64>) -> SymmetricEigen {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.clone();
    let mut v = Matrix::<f64>::identity(n);
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = 1e-15 * frob.max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].total_cmp(&m[(y, y)]));
    SymmetricEigen {
        values: order.iter().map(|&k| m[(k, k)]).collect(),
        vectors: Matrix::from_fn(n, n, |i, j| v[(i, order[j])]),
    }
}

/// All complex roots of `p` (Aberth–Ehrlich iteration). Best suited to
/// squarefree input; repeated roots converge slowly.
pub fn poly_roots(p: &Poly) -> Vec<Complex64> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let monic = p.monic();
    let coeffs: Vec<f64> = monic.coeffs().iter().map(scalar::to_f64).collect();
    if deg == 1 {
        return vec![Complex64::new(-coeffs[0], 0.0)];
    }
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut val = Complex64::new(0.0, 0.0);
        let mut der = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            der = der * z + val;
            val = val * z + c;
        }
        (val, der)
    };
    let radius = 1.0 + coeffs[..deg].iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, angle)
        })
        .collect();
    for _ in 0..1000 {
        let mut max_step = 0.0_f64;
        for i in 0..deg {
            let (val, der) = eval(z[i]);
            if val.norm() == 0.0 {
                continue;
            }
            let ratio = val / der;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for r in &mut z {
        if r.im.abs() <= 1e-10 * (1.0 + r.re.abs()) {
            r.im = 0.0;
        }
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    z
}

pub fn max_abs_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path3_closed_form() {
        let a = Matrix::from_vec(3, 3, vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        let e = symmetric_eigen(&a);
        let s = 2f64.sqrt();
        for (got, want) in e.values.iter().zip([-s, 0.0, s]) {
            assert!((got - want).abs() < 1e-13);
        }
        // A v = λ v
        for k in 0..3 {
            let v = e.vector(k);
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[(i, j)] * v[j]).sum();
                assert!((av - e.values[k] * v[i]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn roots_of_quartic() {
        // (λ² − 2)(λ² + 1)
        let p = &Poly::from_ints(&[-2, 0, 1]) * &Poly::from_ints(&[1, 0, 1]);
        let roots = poly_roots(&p);
        assert_eq!(roots.len(), 4);
        for r in roots {
            assert!(p.eval_complex(r).norm() < 1e-10, "{r}");
        }
    }
}
