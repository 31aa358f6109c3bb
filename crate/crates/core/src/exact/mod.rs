//! Exact arithmetic: rationals, λ-polynomials, rational functions and
//! dense matrices over each.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

pub mod charpoly;
pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod scalar;

pub use charpoly::{charpoly_and_adjugate, CharPolyAdjugate};
pub use matrix::Matrix;
pub use poly::{squarefree_decomposition, Poly, SquarefreeDecomposition};
pub use ratfunc::RatFunc;
pub use scalar::Scalar;

/// Commutative ring operations needed by the generic matrix code.
pub trait Ring:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + for<'a> Add<&'a T, Output = T>
        + for<'a> Sub<&'a T, Output = T>
        + for<'a> Mul<&'a T, Output = T>
{
}

/// Derives owned/borrowed operator variants from the `&T op &T` impls.
macro_rules! forward_binops {
    ($t:ty) => {
        $crate::exact::forward_binops!(@one $t, Add, add);
        $crate::exact::forward_binops!(@one $t, Sub, sub);
        $crate::exact::forward_binops!(@one $t, Mul, mul);
    };
    (@one $t:ty, $tr:ident, $m:ident) => {
        impl std::ops::$tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                std::ops::$tr::$m(&self, &rhs)
            }
        }
        impl std::ops::$tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                std::ops::$tr::$m(&self, rhs)
            }
        }
        impl std::ops::$tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                std::ops::$tr::$m(self, &rhs)
            }
        }
    };
}
pub(crate) use forward_binops;
