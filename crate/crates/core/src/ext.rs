//! Extended reals: a finite value or `+∞`.

use crate::scalar::Real;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// Finite real or `+∞`. Serialized as a JSON number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal<F = f64> {
    Finite(F),
    PosInf,
}

impl<F: Real> ExtReal<F> {
    /// Wraps a float, mapping `+∞` to [`ExtReal::PosInf`]. NaN and `-∞` are kept finite
    /// so that callers notice them downstream.
    pub fn from_float(x: F) -> Self {
        if x == F::infinity() {
            ExtReal::PosInf
        } else {
            ExtReal::Finite(x)
        }
    }

    pub fn zero() -> Self {
        ExtReal::Finite(F::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtReal::PosInf)
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<F> {
        match *self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::PosInf => None,
        }
    }

    /// As a float, with `+∞` mapped to `F::infinity()`.
    pub fn to_float(&self) -> F {
        match *self {
            ExtReal::Finite(x) => x,
            ExtReal::PosInf => F::infinity(),
        }
    }

    /// The finite value; panics on `+∞`.
    pub fn unwrap(&self) -> F {
        self.finite().expect("ExtReal::unwrap on +inf")
    }

    pub fn map(self, f: impl FnOnce(F) -> F) -> Self {
        match self {
            ExtReal::Finite(x) => ExtReal::from_float(f(x)),
            ExtReal::PosInf => ExtReal::PosInf,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self.partial_cmp(&other) == Some(Ordering::Greater) {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self.partial_cmp(&other) == Some(Ordering::Less) {
            other
        } else {
            self
        }
    }
}

impl<F: Real> PartialOrd for ExtReal<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_float().partial_cmp(&other.to_float())
    }
}

impl<F: Real> fmt::Display for ExtReal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::PosInf => f.write_str("inf"),
        }
    }
}

impl<F: Real + Serialize> Serialize for ExtReal<F> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(x) => x.serialize(s),
            ExtReal::PosInf => s.serialize_str("inf"),
        }
    }
}

impl<'de, F: Real> Deserialize<'de> for ExtReal<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V<F>(std::marker::PhantomData<F>);
        impl<F: Real> Visitor<'_> for V<F> {
            type Value = ExtReal<F>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(ExtReal::Finite(F::c(v)))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(ExtReal::Finite(F::c(v as f64)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(ExtReal::Finite(F::c(v as f64)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                match v {
                    "inf" | "+inf" => Ok(ExtReal::PosInf),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V(std::marker::PhantomData))
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        ExtReal::from_float(x)
    }
}

/// Serde adapter for `f64` fields that may be infinite or NaN: those are
/// written as the strings `"inf"`, `"-inf"`, `"nan"`.
pub mod float_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Str(s) => match s.as_str() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(serde::de::Error::custom(format!("bad float {s:?}"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_serde() {
        let a = ExtReal::Finite(1.0);
        let b: ExtReal = ExtReal::PosInf;
        assert!(a < b);
        assert_eq!(a.min(b), a);
        assert_eq!(serde_json::to_string(&b).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&a).unwrap(), "1.0");
        let back: ExtReal = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(back, ExtReal::PosInf);
        let back: ExtReal = serde_json::from_str("2.5").unwrap();
        assert_eq!(back, ExtReal::Finite(2.5));
    }

    #[test]
    fn from_float_maps_infinity() {
        assert!(ExtReal::from_float(f64::INFINITY).is_inf());
        assert_eq!(ExtReal::from_float(0.5f32), ExtReal::Finite(0.5f32));
    }
}
