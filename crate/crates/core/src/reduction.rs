//! Isospectral reduction `R_S(H, λ) = H_SS − H_SS̄ (H_S̄S̄ − λI)⁻¹ H_S̄S`
//! as an exact matrix of rational functions, with its pole set, its
//! nonlinear spectrum and a truncated Neumann expansion.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::charpoly::{charpoly_and_adjugate, char_poly, monic_char_poly_by_interpolation};
use crate::exact::scalar::{self, Scalar};
use crate::exact::{squarefree_decomposition, Matrix, Poly, RatFunc, SquarefreeDecomposition};
use crate::hamiltonian::{Hamiltonian, SiteSet};
use crate::numeric;

/// `R_S(H, λ)` together with the polynomial whose roots are excluded from
/// its domain.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedMatrix {
    entries: Matrix<RatFunc>,
    poles: Poly,
    sites: SiteSet,
}

impl ReducedMatrix {
    pub fn entries(&self) -> &Matrix<RatFunc> {
        &self.entries
    }

    /// Monic `det(λI − H_S̄S̄)`; `1` when the complement is empty.
    pub fn poles(&self) -> &Poly {
        &self.poles
    }

    pub fn sites(&self) -> &SiteSet {
        &self.sites
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    /// Every entry has numerator degree ≤ denominator degree.
    pub fn entries_proper(&self) -> bool {
        self.entries.iter().all(RatFunc::is_proper_or_constant)
    }

    /// Every entry denominator divides the pole polynomial.
    pub fn denominators_divide_poles(&self) -> bool {
        self.entries.iter().all(|e| e.den().divides(&self.poles))
    }

    /// Exact evaluation at `λ₀`, refused on the spectrum of `H_S̄S̄`.
    pub fn evaluate(&self, lambda0: &Scalar) -> Result<Matrix<Scalar>> {
        if self.poles.eval(lambda0).is_zero() {
            return Err(Error::Pole {
                point: scalar::format_scalar(lambda0),
                factor: format!("{} of {}", Poly::linear_factor(lambda0), self.poles),
            });
        }
        Ok(self
            .entries
            .map(|e| e.eval(lambda0).expect("entry denominators divide the pole polynomial")))
    }

    /// Least common multiple of the entry denominators.
    pub fn common_denominator(&self) -> Poly {
        self.entries
            .iter()
            .fold(Poly::one(), |acc, e| acc.lcm(e.den()))
    }

    pub fn render_text(&self) -> String {
        let cells: Vec<String> = self.entries.iter().map(|e| e.render_integer("λ")).collect();
        let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(1);
        let n = self.dim();
        let mut out = String::new();
        for i in 0..n {
            out.push_str("[ ");
            for j in 0..n {
                if j > 0 {
                    out.push_str(" | ");
                }
                let cell = &cells[i * n + j];
                out.push_str(cell);
                out.push_str(&" ".repeat(width - cell.chars().count()));
            }
            out.push_str(" ]\n");
        }
        out
    }

    pub fn render_latex(&self) -> String {
        let n = self.dim();
        let rows: Vec<String> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.entries[(i, j)].render_latex())
                    .collect::<Vec<_>>()
                    .join(" & ")
            })
            .collect();
        format!(
            "\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}",
            rows.join(" \\\\\n")
        )
    }

    pub fn to_data(&self) -> Value {
        let n = self.dim();
        let coeffs = |p: &Poly| -> Value {
            p.coeffs()
                .iter()
                .map(|c| Value::String(scalar::format_scalar(c)))
                .collect()
        };
        let entries: Vec<Value> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let e = &self.entries[(i, j)];
                        json!({
                            "text": e.render_integer("λ"),
                            "num": coeffs(e.num()),
                            "den": coeffs(e.den()),
                        })
                    })
                    .collect()
            })
            .collect();
        json!({
            "sites": self.sites.one_based(),
            "poles": coeffs(&self.poles),
            "poles_text": self.poles.to_string(),
            "entries": entries,
            "proper_entries": self.entries_proper(),
        })
    }
}

fn split(h: &Hamiltonian, s: &SiteSet) -> Result<(Vec<usize>, Vec<usize>)> {
    s.check_against(h)?;
    Ok((s.sites().to_vec(), s.complement()))
}

/// Exact `R_S(H)` via the Faddeev–LeVerrier adjugate of the complement block:
/// `(H_S̄S̄ − λI)⁻¹ = −adj(λI − H_S̄S̄) / det(λI − H_S̄S̄)`.
pub fn isospectral_reduce(h: &Hamiltonian, s: &SiteSet) -> Result<ReducedMatrix> {
    let (si, ci) = split(h, s)?;
    let h_ss = h.block(&si, &si);
    if ci.is_empty() {
        return Ok(ReducedMatrix {
            entries: h_ss.to_ratfunc(),
            poles: Poly::one(),
            sites: s.clone(),
        });
    }
    let h_cc = h.block(&ci, &ci);
    let cpa = charpoly_and_adjugate(&h_cc);
    let coupling = &(&h.block(&si, &ci).to_poly() * &cpa.adjugate) * &h.block(&ci, &si).to_poly();
    let entries = Matrix::from_fn(si.len(), si.len(), |i, j| {
        &RatFunc::constant(h_ss[(i, j)].clone()) + &RatFunc::new(coupling[(i, j)].clone(), cpa.monic.clone())
    });
    Ok(ReducedMatrix {
        entries,
        poles: cpa.monic,
        sites: s.clone(),
    })
}

fn binomial(n: usize, k: usize) -> Scalar {
    let mut acc = Scalar::one();
    for i in 0..k {
        acc = acc * scalar::int((n - i) as i64) / scalar::int((i + 1) as i64);
    }
    acc
}

/// Second, independent route to `R_S(H)`: Cayley–Hamilton on
/// `M = H_S̄S̄ − λI` gives `M⁻¹ = −Σ_{k≥1} (c_k/c_0) M^{k−1}`, and the
/// binomial expansion of `M^{k−1}` turns the reduction into
/// `H_SS + Σ_k (c_k/c_0) Σ_n C(k−1, n) (−λ)^{k−1−n} H_SS̄ H_S̄S̄ⁿ H_S̄S`.
/// The `c_k(λ)` are coefficients in `x` of `det(xI − M) = q(x + λ)` with
/// `q(t) = det(tI − H_S̄S̄)` obtained by interpolation.
pub fn reduce_via_charpoly(h: &Hamiltonian, s: &SiteSet) -> Result<ReducedMatrix> {
    let (si, ci) = split(h, s)?;
    let h_ss = h.block(&si, &si);
    if ci.is_empty() {
        return Ok(ReducedMatrix {
            entries: h_ss.to_ratfunc(),
            poles: Poly::one(),
            sites: s.clone(),
        });
    }
    let m = ci.len();
    let h_cc = h.block(&ci, &ci);
    let q = monic_char_poly_by_interpolation(&h_cc);

    // c_k(λ) = Σ_{j ≥ k} q_j C(j, k) λ^{j−k}
    let c: Vec<Poly> = (0..=m)
        .map(|k| {
            Poly::from_coeffs(
                (k..=m)
                    .map(|j| q.coeff(j) * binomial(j, k))
                    .collect(),
            )
        })
        .collect();

    let h_sc = h.block(&si, &ci);
    let h_cs = h.block(&ci, &si);
    let walks: Vec<Matrix<Scalar>> = h_cc
        .powers(m)
        .iter()
        .map(|p| &(&h_sc * p) * &h_cs)
        .collect();

    let neg_lambda = Poly::from_ints(&[0, -1]);
    let mut sum = Matrix::<Poly>::zeros(si.len(), si.len());
    for (k, ck) in c.iter().enumerate().take(m + 1).skip(1) {
        let mut inner = Matrix::<Poly>::zeros(si.len(), si.len());
        for (n, walk) in walks.iter().enumerate().take(k) {
            let weight = neg_lambda.pow(k - 1 - n).scale(&binomial(k - 1, n));
            inner = &inner + &walk.to_poly().scaled(&weight);
        }
        sum = &sum + &inner.scaled(ck);
    }
    let c0 = &c[0];
    let entries = Matrix::from_fn(si.len(), si.len(), |i, j| {
        &RatFunc::constant(h_ss[(i, j)].clone()) + &RatFunc::new(sum[(i, j)].clone(), c0.clone())
    });
    Ok(ReducedMatrix {
        entries,
        poles: q,
        sites: s.clone(),
    })
}

/// Solutions of `det(R_S(H, λ) − λI) = 0` with exact multiplicities.
#[derive(Clone, Debug)]
pub struct NonlinearSpectrum {
    /// Monic numerator of `det(R_S − λI)` in lowest terms.
    pub cleared: Poly,
    pub structure: SquarefreeDecomposition,
    /// Numeric roots with multiplicities; reporting only.
    pub roots: Vec<(Complex64, usize)>,
    /// `det(H − λI) · Dⁿ = det(H_S̄S̄ − λI) · det(N − λD·I)` where `D` is the
    /// common denominator of `R_S` and `N = D·R_S`.
    pub schur_identity: bool,
    /// `cleared` divides `det(H − λI)`.
    pub divides_char_h: bool,
    /// `gcd(det(λI − H), det(λI − H_S̄S̄))`.
    pub shared_factor: Poly,
    /// `cleared` equals the monic characteristic polynomial of `H`.
    pub coincides_with_spectrum: bool,
}

pub fn nonlinear_spectrum(r: &ReducedMatrix, h: &Hamiltonian) -> Result<NonlinearSpectrum> {
    if r.sites().universe() != h.size() {
        return Err(Error::Input(format!(
            "reduction over {} sites does not belong to a {}-site Hamiltonian",
            r.sites().universe(),
            h.size()
        )));
    }
    let ci = r.sites().complement();
    let h_cc = h.block(&ci, &ci);
    let cc = charpoly_and_adjugate(&h_cc);
    if cc.monic != *r.poles() {
        return Err(Error::Input(
            "reduced matrix does not match the complement block of this Hamiltonian".into(),
        ));
    }
    let n = r.dim();
    let d = r.common_denominator();
    let numerators = r.entries().map(|e| {
        e.num() * &d.exact_div(e.den()).expect("denominator divides lcm")
    });
    let mut shifted = numerators;
    let d_lambda = &d * &Poly::lambda();
    for i in 0..n {
        shifted[(i, i)] = &shifted[(i, i)] - &d_lambda;
    }
    let det_cleared = shifted.determinant();
    let d_pow = d.pow(n);

    let char_h = char_poly(h.matrix());
    let schur_identity = &char_h * &d_pow == &cc.char_poly() * &det_cleared;

    let reduced = RatFunc::new(det_cleared, d_pow);
    let cleared = reduced.num().monic();
    let structure = squarefree_decomposition(&cleared);
    let roots = structure
        .factors
        .iter()
        .flat_map(|(f, m)| numeric::poly_roots(f).into_iter().map(move |z| (z, *m)))
        .collect();
    let monic_h = char_h.monic();
    Ok(NonlinearSpectrum {
        divides_char_h: cleared.divides(&monic_h),
        coincides_with_spectrum: cleared == monic_h,
        shared_factor: monic_h.gcd(&cc.monic),
        cleared,
        structure,
        roots,
        schur_identity,
    })
}

/// Checks `det(H−λI) = det(H_S̄S̄−λI)·det(R_S(H,λ)−λI)` exactly.
pub fn schur_determinant_identity(h: &Hamiltonian, s: &SiteSet) -> Result<bool> {
    let r = isospectral_reduce(h, s)?;
    Ok(nonlinear_spectrum(&r, h)?.schur_identity)
}

/// Partial sum `H_SS + Σ_{j=1}^{order} λ₀^{−j} H_SS̄ H_S̄S̄^{j−1} H_S̄S`.
/// Refused unless `|λ₀|` exceeds the max-row-sum bound of `H_S̄S̄`.
pub fn neumann_truncation(
    h: &Hamiltonian,
    s: &SiteSet,
    order: usize,
    lambda0: &Scalar,
) -> Result<Matrix<Scalar>> {
    let (si, ci) = split(h, s)?;
    let mut acc = h.block(&si, &si);
    if ci.is_empty() {
        return Ok(acc);
    }
    let h_cc = h.block(&ci, &ci);
    let bound = h_cc.max_row_sum();
    if lambda0.abs() <= bound {
        return Err(Error::Precondition(format!(
            "|λ₀| = {} does not exceed the row-sum bound {} of the complement block; the series may diverge",
            scalar::format_scalar(&lambda0.abs()),
            scalar::format_scalar(&bound)
        )));
    }
    let h_sc = h.block(&si, &ci);
    let h_cs = h.block(&ci, &si);
    let inv = lambda0.recip();
    let mut left = h_sc; // H_SS̄ H_S̄S̄^{j−1}
    let mut weight = inv.clone();
    for _ in 1..=order {
        let term = &(&left * &h_cs).scaled(&weight);
        acc = &acc + term;
        left = &left * &h_cc;
        weight *= &inv;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::{int, ratio};

    fn chain2() -> Hamiltonian {
        Hamiltonian::new(Matrix::from_ints(2, 2, &[0, 1, 1, 0])).unwrap()
    }

    fn site(sites: &[usize], n: usize) -> SiteSet {
        SiteSet::from_one_based(sites, n).unwrap()
    }

    #[test]
    fn two_site_chain_reduces_to_inverse_lambda() {
        let r = isospectral_reduce(&chain2(), &site(&[1], 2)).unwrap();
        assert_eq!(r.entries()[(0, 0)], RatFunc::new(Poly::one(), Poly::lambda()));
        assert_eq!(r, reduce_via_charpoly(&chain2(), &site(&[1], 2)).unwrap());
    }

    #[test]
    fn full_site_set_returns_h() {
        let h = chain2();
        let r = isospectral_reduce(&h, &SiteSet::all(2)).unwrap();
        assert_eq!(r.entries(), &h.matrix().to_ratfunc());
        assert_eq!(r.poles(), &Poly::one());
        let ns = nonlinear_spectrum(&r, &h).unwrap();
        assert!(ns.coincides_with_spectrum);
    }

    #[test]
    fn chain_nonlinear_spectrum() {
        let h = chain2();
        let r = isospectral_reduce(&h, &site(&[1], 2)).unwrap();
        let ns = nonlinear_spectrum(&r, &h).unwrap();
        assert_eq!(ns.cleared, Poly::from_ints(&[-1, 0, 1]));
        assert!(ns.schur_identity && ns.coincides_with_spectrum);
        let re: Vec<f64> = ns.roots.iter().map(|(z, _)| z.re).collect();
        assert!((re[0] + 1.0).abs() < 1e-12 && (re[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evaluate_and_pole() {
        let r = isospectral_reduce(&chain2(), &site(&[1], 2)).unwrap();
        assert_eq!(r.evaluate(&int(2)).unwrap()[(0, 0)], ratio(1, 2));
        assert!(matches!(r.evaluate(&int(0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn neumann_on_chain() {
        let h = chain2();
        let s = site(&[1], 2);
        // H_S̄S̄ = 0 so the first order is already exact
        assert_eq!(neumann_truncation(&h, &s, 1, &int(2)).unwrap()[(0, 0)], ratio(1, 2));
        assert_eq!(neumann_truncation(&h, &s, 5, &int(2)).unwrap()[(0, 0)], ratio(1, 2));
        assert_eq!(neumann_truncation(&h, &s, 0, &int(2)).unwrap()[(0, 0)], int(0));
    }

    #[test]
    fn neumann_refuses_inside_bound() {
        let h = Hamiltonian::new(Matrix::from_ints(2, 2, &[0, 1, 1, 3])).unwrap();
        let err = neumann_truncation(&h, &site(&[1], 2), 3, &int(3)).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn mismatched_hamiltonian_rejected() {
        let r = isospectral_reduce(&chain2(), &site(&[1], 2)).unwrap();
        let other = Hamiltonian::new(Matrix::from_ints(2, 2, &[0, 1, 1, 7])).unwrap();
        assert!(matches!(nonlinear_spectrum(&r, &other), Err(Error::Input(_))));
        let bigger = Hamiltonian::new(Matrix::from_ints(1, 1, &[0])).unwrap();
        assert!(nonlinear_spectrum(&r, &bigger).is_err());
    }

    #[test]
    fn renders_latex() {
        let r = isospectral_reduce(&chain2(), &site(&[1], 2)).unwrap();
        assert_eq!(r.render_latex(), "\\begin{pmatrix}\n\\frac{1}{\\lambda}\n\\end{pmatrix}");
        assert!(r.render_text().contains("1/λ"));
    }
}
