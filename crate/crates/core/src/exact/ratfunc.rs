//! Rational functions in λ kept in canonical form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::scalar::Scalar;

/// `num / den` with `den` monic and `gcd(num, den) = 1`. Two equal rational
/// functions therefore have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Panics if `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        };
        let lc = den.leading();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Numerator degree does not exceed denominator degree.
    pub fn is_proper_or_constant(&self) -> bool {
        self.num.degree_or_zero() <= self.den.degree_or_zero()
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &Scalar) -> Option<Scalar> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn recip(&self) -> Option<RatFunc> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }

    /// Text form `p(λ)/q(λ)` with primitive integer coefficients.
    pub fn render_integer(&self, var: &str) -> String {
        let (num, den) = self.integer_parts_with(var);
        if den == "1" {
            return num;
        }
        let num = if num.contains(' ') { format!("({num})") } else { num };
        let den = if den == var || den.bytes().all(|b| b.is_ascii_digit()) {
            den
        } else {
            format!("({den})")
        };
        format!("{num}/{den}")
    }

    /// LaTeX `\frac{…}{…}` in the same integer form.
    pub fn render_latex(&self) -> String {
        let (num, den) = self.integer_parts_with("\\lambda");
        if den == "1" {
            num
        } else {
            format!("\\frac{{{num}}}{{{den}}}")
        }
    }

    /// Numerator and denominator rescaled so both have primitive integer
    /// coefficients jointly, with a positive leading denominator coefficient.
    fn integer_parts_with(&self, var: &str) -> (String, String) {
        let (nc, nint) = self.num.integer_form();
        let (dc, dint) = self.den.integer_form();
        if self.num.is_zero() {
            return ("0".into(), "1".into());
        }
        // num/den = (nc/dc) · N/D with N, D primitive integer polynomials
        let ratio = nc / dc;
        let n_poly = Poly::from_coeffs(
            nint.into_iter()
                .map(|c| Scalar::from_integer(c) * Scalar::from_integer(ratio.numer().clone()))
                .collect(),
        );
        let d_poly = Poly::from_coeffs(
            dint.into_iter()
                .map(|c| Scalar::from_integer(c) * Scalar::from_integer(ratio.denom().clone()))
                .collect(),
        );
        (n_poly.render(var), d_poly.render(var))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_integer("λ"))
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    /// Panics on division by the zero function.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        let inv = rhs.recip().expect("division by the zero rational function");
        Mul::mul(self, &inv)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

super::forward_binops!(RatFunc);

impl Div<RatFunc> for RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: RatFunc) -> RatFunc {
        &self / &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::{int, ratio};

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn canonical_form_is_reduced_and_monic() {
        // (2λ − 2) / (4λ² − 4) = (1/2) / (λ + 1)
        let r = RatFunc::new(p(&[-2, 2]), p(&[-4, 0, 4]));
        assert_eq!(r.den(), &p(&[1, 1]));
        assert_eq!(r.num(), &Poly::constant(ratio(1, 2)));
    }

    #[test]
    fn add_then_subtract_recovers() {
        let a = RatFunc::new(p(&[1, 3]), p(&[-5, 1]));
        let c = RatFunc::new(p(&[2]), p(&[0, 1, 1]));
        assert_eq!(&(&a + &c) - &c, a);
    }

    #[test]
    fn eval_and_poles() {
        let r = RatFunc::new(p(&[1]), p(&[0, 1]));
        assert_eq!(r.eval(&int(2)), Some(ratio(1, 2)));
        assert_eq!(r.eval(&int(0)), None);
    }

    #[test]
    fn renders_integer_form() {
        // b = 2/(λ−5) + 3 = (3λ − 13)/(λ − 5)
        let b = &RatFunc::new(p(&[2]), p(&[-5, 1])) + &RatFunc::constant(int(3));
        assert_eq!(b.render_integer("λ"), "(3λ - 13)/(λ - 5)");
        let half = RatFunc::new(p(&[1]), p(&[0, 2]));
        assert_eq!(half.render_integer("λ"), "1/(2λ)");
        assert_eq!(half.render_latex(), "\\frac{1}{2\\lambda}");
        assert_eq!(RatFunc::zero().render_integer("λ"), "0");
    }
}
