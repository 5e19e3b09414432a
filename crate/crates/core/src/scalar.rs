//! Scalar abstraction shared by the linear algebra and polynomial code.
//!
//! Everything that does elimination or polynomial arithmetic is generic over
//! [`Field`]. The crate root fixes the exact instantiation ([`crate::Rational`])
//! used by the GKM computations; `f64` and `Ratio<i64>` also satisfy the bound
//! and are handy for quick experiments.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed};

/// A field with enough structure for Gaussian elimination.
pub trait Field: Num + Clone + Debug + Neg<Output = Self> + FromPrimitive + Send + Sync {
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every i64 embeds in the field")
    }

    fn inverse(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl<T> Field for T where T: Num + Clone + Debug + Neg<Output = Self> + FromPrimitive + Send + Sync {}

/// Exact rational from an integer.
pub fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exact rational `num / den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Returns the integer value of a rational if it has denominator one.
pub fn to_integer(q: &BigRational) -> Option<i64> {
    if q.is_integer() {
        num_traits::ToPrimitive::to_i64(q.numer())
    } else {
        None
    }
}

/// Formats a rational compactly: `3`, `-1/2`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Absolute value helper that works for any signed ratio.
pub fn abs_ratio<T: Clone + num_integer::Integer + Signed>(q: &Ratio<T>) -> Ratio<T> {
    if q.is_negative() {
        -q.clone()
    } else {
        q.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(fmt_rational(&ratio(-1, 2)), "-1/2");
        assert_eq!(fmt_rational(&rat(3)), "3");
        assert_eq!(to_integer(&ratio(4, 2)), Some(2));
        assert_eq!(to_integer(&ratio(1, 2)), None);
    }

    #[test]
    fn field_impls() {
        assert_eq!(<f64 as Field>::from_int(3).inverse(), 1.0 / 3.0);
        assert_eq!(Ratio::<i64>::from_int(4).inverse(), Ratio::new(1, 4));
        assert_eq!(abs_ratio(&Ratio::new(-3i64, 4)), Ratio::new(3, 4));
    }
}
