//! Dual-mode scalar: exact arbitrary-precision rational or double precision
//! with an attached comparison tolerance.
//!
//! Exact values flow through the recurrences unchanged (they are rational
//! maps), so decisions like `value >= 1 - r` are settled exactly whenever the
//! input was rational. Approximate values compare equal when they differ by
//! at most the larger of the two tolerances.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::Error;

/// Comparison tolerance attached to approximate scalars unless overridden.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Approx { value: f64, tol: f64 },
}

impl Scalar {
    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact `numer/denom`. Panics on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "scalar ratio with zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn exact(value: BigRational) -> Self {
        Scalar::Exact(value)
    }

    pub fn approx(value: f64) -> Self {
        Scalar::approx_with_tol(value, DEFAULT_TOLERANCE)
    }

    pub fn approx_with_tol(value: f64, tol: f64) -> Self {
        debug_assert!(tol >= 0.0);
        Scalar::Approx { value, tol }
    }

    pub fn zero() -> Self {
        Scalar::from_int(0)
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx { .. } => None,
        }
    }

    /// Comparison tolerance; exact scalars carry none.
    pub fn tolerance(&self) -> f64 {
        match self {
            Scalar::Exact(_) => 0.0,
            Scalar::Approx { tol, .. } => *tol,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().expect("rational out of f64 range"),
            Scalar::Approx { value, .. } => *value,
        }
    }

    /// True only for an exact zero (0/1 or the bit pattern 0.0); never uses
    /// the tolerance. The reduced-orbit sentinel relies on this.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Approx { value, .. } => *value == 0.0,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Approx { value, tol } => Scalar::Approx {
                value: value.abs(),
                tol: *tol,
            },
        }
    }

    /// Total order ignoring tolerances: exact pairs compare exactly,
    /// everything else through `f64::total_cmp`.
    pub fn total_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }

    /// Tolerance-aware order: approximate values within the larger tolerance
    /// of each other compare equal.
    pub fn tol_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => {
                let a = self.to_f64();
                let b = other.to_f64();
                let tol = self.tolerance().max(other.tolerance());
                if (a - b).abs() <= tol {
                    Ordering::Equal
                } else {
                    a.total_cmp(&b)
                }
            }
        }
    }

    pub fn tol_eq(&self, other: &Scalar) -> bool {
        self.tol_cmp(other) == Ordering::Equal
    }

    pub fn tol_ge(&self, other: &Scalar) -> bool {
        self.tol_cmp(other) != Ordering::Less
    }

    pub fn tol_le(&self, other: &Scalar) -> bool {
        self.tol_cmp(other) != Ordering::Greater
    }

    fn combine(
        &self,
        other: &Scalar,
        exact: impl FnOnce(&BigRational, &BigRational) -> BigRational,
        float: impl FnOnce(f64, f64) -> f64,
    ) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact(a, b)),
            _ => Scalar::Approx {
                value: float(self.to_f64(), other.to_f64()),
                tol: self.tolerance().max(other.tolerance()).max(0.0),
            },
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.total_cmp(other) == Ordering::Equal
    }
}

macro_rules! impl_scalar_op {
    ($trait:ident, $method:ident, $float:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.combine(rhs, |a, b| a.$method(b), $float)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

impl_scalar_op!(Add, add, |a, b| a + b);
impl_scalar_op!(Sub, sub, |a, b| a - b);
impl_scalar_op!(Mul, mul, |a, b| a * b);
impl_scalar_op!(Div, div, |a, b| a / b);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Approx { value, tol } => Scalar::Approx {
                value: -value,
                tol: *tol,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Approx { value, .. } => write!(f, "{}", value),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `p/q` (exact) or a decimal literal (approximate with the
    /// default tolerance).
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let numer = BigInt::from_str(n.trim())
                .map_err(|_| Error::Parse(format!("invalid numerator in {s:?}")))?;
            let denom = BigInt::from_str(d.trim())
                .map_err(|_| Error::Parse(format!("invalid denominator in {s:?}")))?;
            if denom.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Scalar::Exact(BigRational::new(numer, denom)))
        } else {
            let value = f64::from_str(s)
                .map_err(|_| Error::Parse(format!("invalid number {s:?}")))?;
            if !value.is_finite() {
                return Err(Error::Parse(format!("non-finite number {s:?}")));
            }
            Ok(Scalar::approx(value))
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(_) => serializer.serialize_str(&self.to_string()),
            Scalar::Approx { value, .. } => serializer.serialize_f64(*value),
        }
    }
}
