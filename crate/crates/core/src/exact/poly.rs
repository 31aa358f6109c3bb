//! Dense univariate polynomials in λ over exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::{self, Scalar};

/// Coefficients are stored lowest degree first. The highest stored
/// coefficient is never zero; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| scalar::int(c)).collect())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate λ.
    pub fn lambda() -> Self {
        Poly {
            coeffs: vec![Scalar::zero(), Scalar::one()],
        }
    }

    pub fn monomial(c: Scalar, degree: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    /// (λ − root)
    pub fn linear_factor(root: &Scalar) -> Self {
        Self::from_coeffs(vec![-root.clone(), Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as degree 0.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Scaled to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading();
        if lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + scalar::to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * scalar::int(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// p(λ + shift)
    pub fn shifted(&self, shift: &Scalar) -> Poly {
        let step = Poly::from_coeffs(vec![shift.clone(), Scalar::one()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &step) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Euclidean division. Panics when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lc_inv = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Quotient when `divisor` divides `self`, otherwise `None`.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            // keeping the remainder monic bounds coefficient growth
            b = r.monic();
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other);
        (self * other).exact_div(&g).expect("gcd divides product").monic()
    }

    /// Integer-coefficient form `content · (c_0 + c_1 λ + …)` where the
    /// integer vector is primitive and its leading entry positive.
    pub fn integer_form(&self) -> (Scalar, Vec<BigInt>) {
        if self.is_zero() {
            return (Scalar::zero(), Vec::new());
        }
        let den_lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Scalar::from_integer(den_lcm.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        let prim: Vec<BigInt> = ints.iter().map(|c| c / &g).collect();
        (Scalar::new(g, den_lcm), prim)
    }

    /// Renders with the given variable name, e.g. `3λ - 13`.
    pub fn render(&self, var: &str) -> String {
        render_terms(
            self.coeffs
                .iter()
                .map(|c| (c.is_negative(), scalar::format_scalar(&c.abs())))
                .collect(),
            var,
        )
    }

    /// Renders the primitive integer form (`integer_form`), dropping content.
    pub fn render_integer(&self, var: &str) -> String {
        let (_, ints) = self.integer_form();
        render_terms(
            ints.iter()
                .map(|c| (c.is_negative(), c.abs().to_string()))
                .collect(),
            var,
        )
    }
}

fn render_terms(terms: Vec<(bool, String)>, var: &str) -> String {
    let mut out = String::new();
    for (k, (neg, mag)) in terms.iter().enumerate().rev() {
        if mag == "0" {
            continue;
        }
        if out.is_empty() {
            if *neg {
                out.push('-');
            }
        } else {
            out.push_str(if *neg { " - " } else { " + " });
        }
        let coeff = if k > 0 && mag == "1" {
            String::new()
        } else if k > 0 && mag.contains('/') {
            format!("({mag})")
        } else {
            mag.clone()
        };
        out.push_str(&coeff);
        match k {
            0 => {}
            1 => out.push_str(var),
            _ => out.push_str(&format!("{var}^{k}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("λ"))
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(Scalar::one())
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

super::forward_binops!(Poly);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// `p = unit · ∏ fᵢ^{mᵢ}` with monic, squarefree, pairwise coprime `fᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SquarefreeDecomposition {
    pub unit: Scalar,
    pub factors: Vec<(Poly, usize)>,
}

impl SquarefreeDecomposition {
    pub fn total_degree(&self) -> usize {
        self.factors
            .iter()
            .map(|(f, m)| m * f.degree_or_zero())
            .sum()
    }

    /// Number of distinct roots whose multiplicity is at least `m`.
    pub fn roots_with_multiplicity_at_least(&self, m: usize) -> usize {
        self.factors
            .iter()
            .filter(|(_, k)| *k >= m)
            .map(|(f, _)| f.degree_or_zero())
            .sum()
    }

    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (f, m)| &acc * &f.pow(*m))
    }
}

/// Yun's algorithm. Panics on the zero polynomial.
pub fn squarefree_decomposition(p: &Poly) -> SquarefreeDecomposition {
    assert!(!p.is_zero(), "squarefree decomposition of the zero polynomial");
    let unit = p.leading();
    let f = p.monic();
    let mut factors = Vec::new();
    if f.is_constant() {
        return SquarefreeDecomposition { unit, factors };
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0).expect("gcd divides").monic();
    let mut c = df.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        if !a.is_constant() {
            factors.push((a.clone(), i));
        }
        b = b.exact_div(&a).expect("gcd divides").monic();
        c = d.exact_div(&a).expect("gcd divides");
        d = &c - &b.derivative();
        i += 1;
    }
    SquarefreeDecomposition { unit, factors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::{int, ratio};

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn gcd_shared_factor() {
        // gcd(λ²−1, λ−1) = λ−1
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])), p(&[-1, 1]));
    }

    #[test]
    fn gcd_with_zero_is_monic() {
        let q = p(&[4, 2]);
        assert_eq!(q.gcd(&Poly::zero()), p(&[2, 1]));
        assert_eq!(Poly::zero().gcd(&q), p(&[2, 1]));
        assert!(Poly::zero().gcd(&Poly::zero()).is_zero());
    }

    #[test]
    fn gcd_coprime() {
        // Euclid by hand: λ²+1 = (λ+2)(λ−2) + 5, remainder a nonzero constant
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[2, 1])), Poly::one());
    }

    #[test]
    fn division_identity() {
        let a = p(&[3, -1, 0, 2, 5]);
        let b = p(&[1, 2, 3]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn squarefree_of_constructed_input() {
        // (λ−1)²(λ+2)
        let f = &p(&[-1, 1]).pow(2) * &p(&[2, 1]);
        let sq = squarefree_decomposition(&f);
        assert_eq!(sq.factors, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
        assert_eq!(sq.expand(), f);
    }

    #[test]
    fn squarefree_input_is_single_factor() {
        let f = p(&[-6, 0, 2]);
        let sq = squarefree_decomposition(&f);
        assert_eq!(sq.factors, vec![(p(&[-3, 0, 1]), 1)]);
        assert_eq!(sq.unit, int(2));
    }

    #[test]
    fn shifted_matches_composition() {
        let f = p(&[1, -3, 0, 2]);
        let s = ratio(1, 2);
        for x in [-2, 0, 3] {
            let x = int(x);
            assert_eq!(f.shifted(&s).eval(&x), f.eval(&(&x + &s)));
        }
    }

    #[test]
    fn integer_form_and_rendering() {
        // (3λ − 13) scaled by 1/2
        let f = Poly::from_coeffs(vec![ratio(-13, 2), ratio(3, 2)]);
        let (content, ints) = f.integer_form();
        assert_eq!(content, ratio(1, 2));
        assert_eq!(ints, vec![BigInt::from(-13), BigInt::from(3)]);
        assert_eq!(f.render_integer("λ"), "3λ - 13");
        assert_eq!(f.to_string(), "(3/2)λ - 13/2");
        assert_eq!(p(&[0, 0, -1]).to_string(), "-λ^2");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
