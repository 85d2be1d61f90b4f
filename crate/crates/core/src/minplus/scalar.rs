use std::cmp::Ordering;
use std::fmt;

use super::MinPlusError;

/// An element of the min-plus semiring `(ℝ ∪ {+∞}, min, +)`.
///
/// The semiring zero ε is stored as `+∞`; the unit `e` is `0`. `NaN` and `−∞`
/// cannot be constructed, and no operation produces them.
#[derive(Clone, Copy, PartialEq)]
pub struct MinPlusScalar(f64);

impl MinPlusScalar {
    /// ε, the neutral element of ⊕ and absorbing element of ⊗.
    pub const EPSILON: Self = MinPlusScalar(f64::INFINITY);
    /// e, the neutral element of ⊗.
    pub const E: Self = MinPlusScalar(0.0);

    /// Wraps a finite value or `+∞`.
    pub fn new(value: f64) -> Result<Self, MinPlusError> {
        if value.is_nan() || value == f64::NEG_INFINITY {
            return Err(MinPlusError::InvalidValue(value));
        }
        Ok(MinPlusScalar(value))
    }

    /// Wraps a finite value.
    ///
    /// Panics on `NaN` or infinities; use [`MinPlusScalar::new`] for untrusted input.
    pub fn finite(value: f64) -> Self {
        assert!(
            value.is_finite(),
            "finite min-plus scalar expected, got {value}"
        );
        MinPlusScalar(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_epsilon(self) -> bool {
        self.0 == f64::INFINITY
    }

    /// `a ⊕ b = min(a, b)`.
    pub fn oplus(self, other: Self) -> Self {
        MinPlusScalar(self.0.min(other.0))
    }

    /// `a ⊗ b = a + b`, with ε absorbing.
    pub fn otimes(self, other: Self) -> Self {
        let sum = self.0 + other.0;
        // Two very negative finite values could overflow to −∞.
        if sum == f64::NEG_INFINITY {
            MinPlusScalar(f64::MIN)
        } else {
            MinPlusScalar(sum)
        }
    }

    /// Residuation `a /° b = a − b`; undefined when `b = ε`.
    pub fn residuate(self, other: Self) -> Result<Self, MinPlusError> {
        if other.is_epsilon() {
            return Err(MinPlusError::UndefinedResiduation);
        }
        if self.is_epsilon() {
            return Ok(Self::EPSILON);
        }
        Ok(MinPlusScalar(self.0 - other.0))
    }

    /// The min-plus square root `√a = a / 2`.
    pub fn half(self) -> Self {
        MinPlusScalar(self.0 / 2.0)
    }

    /// Min-plus power `a^k = k·a`.
    ///
    /// `a^0 = e` for every `a`. Raising ε to a negative power is rejected.
    pub fn scale(self, k: f64) -> Result<Self, MinPlusError> {
        if !k.is_finite() {
            return Err(MinPlusError::InvalidValue(k));
        }
        if k == 0.0 {
            return Ok(Self::E);
        }
        if self.is_epsilon() {
            return if k > 0.0 {
                Ok(Self::EPSILON)
            } else {
                Err(MinPlusError::UndefinedPower(k))
            };
        }
        Self::new(self.0 * k)
    }
}

/// Free-function form of [`MinPlusScalar::oplus`].
pub fn oplus(a: MinPlusScalar, b: MinPlusScalar) -> MinPlusScalar {
    a.oplus(b)
}

/// Free-function form of [`MinPlusScalar::otimes`].
pub fn otimes(a: MinPlusScalar, b: MinPlusScalar) -> MinPlusScalar {
    a.otimes(b)
}

impl Default for MinPlusScalar {
    fn default() -> Self {
        Self::EPSILON
    }
}

impl PartialOrd for MinPlusScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Debug for MinPlusScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MinPlusScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_epsilon() {
            write!(f, "ε")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl From<MinPlusScalar> for f64 {
    fn from(s: MinPlusScalar) -> f64 {
        s.0
    }
}
