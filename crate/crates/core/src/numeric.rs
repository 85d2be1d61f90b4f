//! Ordered-field abstraction so the closed forms and the dynamics can run
//! either in `f64` or in exact rational arithmetic.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rationals with arbitrary-precision numerator and denominator.
pub type Exact = BigRational;

pub trait Real:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Converts a finite `f64` without rounding.
    fn from_f64(v: f64) -> Self;
    fn from_int(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;

    fn zero() -> Self {
        Self::from_int(0)
    }

    fn half(&self) -> Self {
        self.clone() / Self::from_int(2)
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn half(&self) -> Self {
        self / 2.0
    }

    fn min(self, other: Self) -> Self {
        f64::min(self, other)
    }

    fn max(self, other: Self) -> Self {
        f64::max(self, other)
    }
}

impl Real for BigRational {
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite value required for exact conversion")
    }

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn zero() -> Self {
        Zero::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_conversion_is_lossless() {
        for v in [0.1, -0.3, 1.0 / 7.0, 1e-300, 12345.678] {
            let q = Exact::from_f64(v);
            assert_eq!(Real::to_f64(&q), v);
        }
        let tenth = Exact::from_f64(0.1);
        assert_ne!(tenth, Exact::new(1.into(), 10.into()));
    }

    #[test]
    fn half_and_min_agree_between_fields() {
        let (a, b) = (0.75f64, -0.125f64);
        let (qa, qb) = (Exact::from_f64(a), Exact::from_f64(b));
        assert_eq!(Real::to_f64(&qa.half()), a.half());
        assert_eq!(
            Real::to_f64(&Real::min(qa.clone(), qb.clone())),
            Real::min(a, b)
        );
        assert_eq!(Real::to_f64(&Real::max(qa, qb)), Real::max(a, b));
    }
}
