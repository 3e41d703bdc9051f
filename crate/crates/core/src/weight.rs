//! Scalar weights for measures: exact rationals or IEEE doubles.
//!
//! Every measure is generic over a [`Weight`]. The exact instantiation
//! ([`Exact`], arbitrary-precision rationals) is the default everywhere and
//! makes all the operator identities hold bit-for-bit; the float
//! instantiation trades that for speed and uses small tolerances instead.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Sub};

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Exact weights: arbitrary-precision rationals, always in lowest terms.
pub type Exact = num::BigRational;

/// Arithmetic mode of a measure, decided by its weight type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }

    pub fn parse(s: &str) -> Result<Mode> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

impl Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What a scalar must provide so measures can be built over it.
///
/// Weights in a measure are nonnegative; the trait still exposes signed
/// values because distances subtract before taking absolute values.
pub trait Weight:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    /// The rational num/den. Panics when den is zero.
    fn ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    /// Rejects NaN and infinities in float mode; exact weights are always fine.
    fn is_finite(&self) -> bool;
    fn abs(&self) -> Self;
    /// 2^-(j+1): the coefficient of the j-th (zero-indexed) term in the
    /// aggregated pseudometric. Must stay exact for arbitrarily large j in
    /// exact mode.
    fn half_power(j: usize) -> Self;
    fn to_f64(&self) -> f64;
    /// Comparison slack used where the math is an identity: zero in exact
    /// mode, 1e-12 in float mode.
    fn default_tol() -> Self;
    /// Slack for internal dual-route agreement checks (looser than
    /// `default_tol` in float mode because the routes order operations
    /// differently).
    fn cross_check_tol() -> Self;
    fn from_json(v: &Value) -> Result<Self>;
    fn to_json(&self) -> Value;
}

/// `a <= b + tol`, the one comparison the tolerance semantics need.
pub fn within<W: Weight>(a: &W, b: &W, tol: &W) -> bool {
    a.clone() <= b.clone() + tol.clone()
}

impl Weight for Exact {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        <Exact as Zero>::zero()
    }

    fn one() -> Self {
        <Exact as One>::one()
    }

    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Exact::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn half_power(j: usize) -> Self {
        Exact::new(BigInt::one(), BigInt::one() << (j + 1))
    }

    fn to_f64(&self) -> f64 {
        num::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn default_tol() -> Self {
        <Exact as Zero>::zero()
    }

    fn cross_check_tol() -> Self {
        <Exact as Zero>::zero()
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => s
                .trim()
                .parse::<Exact>()
                .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}"))),
            // Integer atoms are unambiguous; anything fractional must be a
            // "p/q" string so no binary rounding sneaks into exact mode.
            Value::Number(n) => n
                .as_i64()
                .map(|i| Exact::from(BigInt::from(i)))
                .ok_or_else(|| Error::Parse(format!("exact weights must be integers or \"p/q\" strings, got {n}"))),
            other => Err(Error::Parse(format!("bad exact weight {other}"))),
        }
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl Weight for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        num as f64 / den as f64
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn half_power(j: usize) -> Self {
        0.5f64.powi(j as i32 + 1)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn default_tol() -> Self {
        1e-12
    }

    fn cross_check_tol() -> Self {
        1e-9
    }

    fn from_json(v: &Value) -> Result<Self> {
        v.as_f64()
            .ok_or_else(|| Error::Parse(format!("bad float weight {v}")))
    }

    fn to_json(&self) -> Value {
        // Finite by construction; measures reject NaN/inf on the way in.
        Value::from(*self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_half_power_is_exact() {
        let w = <Exact as Weight>::half_power(0);
        assert_eq!(w, Exact::ratio(1, 2));
        // Far past what u64 denominators could hold.
        let tiny = <Exact as Weight>::half_power(300);
        assert!(!Weight::is_zero(&tiny));
        assert_eq!(tiny * Exact::from(BigInt::one() << 301), Weight::one());
    }

    #[test]
    fn exact_json_round_trip() {
        for s in ["3/4", "0", "17", "22/7"] {
            let w = <Exact as Weight>::from_json(&Value::String(s.into())).unwrap();
            let v = w.to_json();
            let back = <Exact as Weight>::from_json(&v).unwrap();
            assert_eq!(w, back);
        }
    }

    #[test]
    fn exact_rejects_fractional_json_numbers() {
        assert!(<Exact as Weight>::from_json(&serde_json::json!(0.5)).is_err());
        assert!(<Exact as Weight>::from_json(&serde_json::json!(2)).is_ok());
    }

    #[test]
    fn float_round_trip_preserves_bits() {
        let w: f64 = 0.1 + 0.2;
        let back = <f64 as Weight>::from_json(&w.to_json()).unwrap();
        assert_eq!(w.to_bits(), back.to_bits());
    }
}
