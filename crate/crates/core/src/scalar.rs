//! Scalar abstraction for the classical layer.
//!
//! Classical weights, divergences, cumulants and exponents are written once
//! against [`Real`] and instantiated for `f32` and `f64`. Exact arithmetic
//! (type rounding) goes through [`Exact`], which also covers
//! [`num_rational::BigRational`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Signed, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar used by the classical routines.
pub trait Real:
    Float + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from a count.
    fn from_count(k: usize) -> Self {
        Self::from_usize(k).expect("count representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Ordered field with floor/ceil, enough for the type-rounding algorithm.
pub trait Exact: Clone + PartialOrd + Signed + Debug {
    fn from_i64(v: i64) -> Self;
    fn floor_i64(&self) -> i64;
    fn ceil_i64(&self) -> i64;
}

macro_rules! exact_float {
    ($t:ty) => {
        impl Exact for $t {
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn floor_i64(&self) -> i64 {
                self.floor() as i64
            }
            fn ceil_i64(&self) -> i64 {
                self.ceil() as i64
            }
        }
    };
}
exact_float!(f32);
exact_float!(f64);

impl Exact for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn floor_i64(&self) -> i64 {
        self.floor().to_integer().to_i64().expect("count fits in i64")
    }
    fn ceil_i64(&self) -> i64 {
        self.ceil().to_integer().to_i64().expect("count fits in i64")
    }
}

/// Sum with Neumaier compensation.
pub fn compensated_sum<F: Real>(xs: impl IntoIterator<Item = F>) -> F {
    let mut s = F::zero();
    let mut c = F::zero();
    for x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c = c + ((s - t) + x);
        } else {
            c = c + ((x - t) + s);
        }
        s = t;
    }
    s + c
}

/// `log Σ exp(xᵢ)` with compensated accumulation; `-∞` for an empty or all-`-∞` input.
pub fn log_sum_exp<F: Real>(xs: &[F]) -> F {
    let m = xs.iter().copied().fold(F::neg_infinity(), F::max);
    if m == F::neg_infinity() {
        return m;
    }
    if m == F::infinity() {
        return m;
    }
    m + compensated_sum(xs.iter().map(|&x| (x - m).exp())).ln()
}

/// Exact ratio helper: `num / den` as a `BigRational`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Check that a value is a non-negative finite number.
pub(crate) fn is_nonneg<F: Real>(x: F) -> bool {
    x >= F::zero() && x.is_finite()
}
