//! The scalar rings every frame computation is generic over.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::parse::parse_expr;
use super::poly::{fmt_rational, rational_to_f64};
use super::ratfunc::RatFunc;
use crate::error::Error;

/// Relative zero threshold for the float ring.
pub const FLOAT_ZERO_EPS: f64 = 1e-9;

/// A commutative ring with (checked) division.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Whether equality and `is_zero` are decided exactly.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &BigRational) -> Self;

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, Error>;
    fn is_zero(&self) -> bool;

    /// Converts a parsed expression into this ring.
    fn from_ratfunc(e: &RatFunc) -> Result<Self, Error>;

    /// Float approximation, available when the value has no free symbols.
    fn to_f64(&self) -> Option<f64>;

    /// Lifts into the symbolic ring (floats are not liftable).
    fn to_ratfunc(&self) -> Option<RatFunc>;

    /// Magnitude used to scale float tolerances; exact rings report 0.
    fn scale(&self) -> f64 {
        0.0
    }

    fn parse(text: &str) -> Result<Self, Error> {
        Self::from_ratfunc(&parse_expr(text)?)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as num_traits::One>::one()
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self, Error> {
        if Zero::is_zero(rhs) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_ratfunc(e: &RatFunc) -> Result<Self, Error> {
        e.as_constant().ok_or_else(|| Error::NotConstant(e.to_string()))
    }
    fn to_f64(&self) -> Option<f64> {
        Some(rational_to_f64(self))
    }
    fn to_ratfunc(&self) -> Option<RatFunc> {
        Some(RatFunc::constant(self.clone()))
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(fmt_rational(self))
    }
}

impl Scalar for RatFunc {
    const EXACT: bool = true;

    fn zero() -> Self {
        RatFunc::int(0)
    }
    fn one() -> Self {
        RatFunc::int(1)
    }
    fn from_rational(q: &BigRational) -> Self {
        RatFunc::constant(q.clone())
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self, Error> {
        RatFunc::checked_div(self, rhs)
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn from_ratfunc(e: &RatFunc) -> Result<Self, Error> {
        Ok(e.clone())
    }
    fn to_f64(&self) -> Option<f64> {
        self.as_constant().map(|q| rational_to_f64(&q))
    }
    fn to_ratfunc(&self) -> Option<RatFunc> {
        Some(self.clone())
    }
}

/// A binary64 value carrying the running magnitude of the inputs that
/// produced it, so cancellation can be judged relative to scale.
#[derive(Clone, Copy, Debug)]
pub struct Float {
    value: f64,
    mag: f64,
}

impl Float {
    pub fn new(value: f64) -> Float {
        Float {
            value,
            mag: value.abs(),
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn magnitude(&self) -> f64 {
        self.mag
    }
}

impl From<f64> for Float {
    fn from(v: f64) -> Float {
        Float::new(v)
    }
}

impl PartialEq for Float {
    fn eq(&self, other: &Self) -> bool {
        Scalar::is_zero(&(*self - *other))
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Float {
    type Output = Float;
    fn add(self, rhs: Float) -> Float {
        Float {
            value: self.value + rhs.value,
            mag: self.mag.max(rhs.mag),
        }
    }
}

impl Sub for Float {
    type Output = Float;
    fn sub(self, rhs: Float) -> Float {
        Float {
            value: self.value - rhs.value,
            mag: self.mag.max(rhs.mag),
        }
    }
}

impl Mul for Float {
    type Output = Float;
    fn mul(self, rhs: Float) -> Float {
        Float {
            value: self.value * rhs.value,
            mag: self.mag * rhs.mag,
        }
    }
}

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float {
            value: -self.value,
            mag: self.mag,
        }
    }
}

impl Scalar for Float {
    const EXACT: bool = false;

    fn zero() -> Self {
        Float::new(0.0)
    }
    fn one() -> Self {
        Float::new(1.0)
    }
    fn from_rational(q: &BigRational) -> Self {
        Float::new(rational_to_f64(q))
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self, Error> {
        if Scalar::is_zero(rhs) {
            return Err(Error::DivisionByZero);
        }
        Ok(Float {
            value: self.value / rhs.value,
            mag: self.mag / rhs.value.abs(),
        })
    }
    fn is_zero(&self) -> bool {
        self.value.abs() <= FLOAT_ZERO_EPS * self.mag.max(1.0)
    }
    fn from_ratfunc(e: &RatFunc) -> Result<Self, Error> {
        e.as_constant()
            .map(|q| Float::new(rational_to_f64(&q)))
            .ok_or_else(|| Error::NotConstant(e.to_string()))
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.value)
    }
    fn to_ratfunc(&self) -> Option<RatFunc> {
        None
    }
    fn scale(&self) -> f64 {
        self.mag
    }
    fn parse(text: &str) -> Result<Self, Error> {
        match text.trim().parse::<f64>() {
            Ok(v) => Ok(Float::new(v)),
            Err(_) => Self::from_ratfunc(&parse_expr(text)?),
        }
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(self.value)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}
