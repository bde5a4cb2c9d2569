//! Coefficient abstraction: arbitrary-precision rationals (exact mode) or
//! IEEE doubles (float mode).

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num::bigint::BigInt;
use num::traits::{One, ToPrimitive, Zero};
use num::BigRational;

/// Scalars usable as polynomial coefficients.
pub trait Coeff:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    /// True for exact rational arithmetic, false for floating point.
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    /// Parses a decimal literal (`0.5`), an integer, or a `p/q` rational.
    fn parse_scalar(s: &str) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
}

/// Exact coefficient type.
pub type Rat = BigRational;

fn pow10(k: usize) -> BigInt {
    let mut v = BigInt::one();
    for _ in 0..k {
        v *= 10;
    }
    v
}

fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return None;
    }
    let val = if let Some((num, den)) = body.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Rat::new(n, d)
    } else if let Some((int, frac)) = body.split_once('.') {
        let int = if int.is_empty() { "0" } else { int };
        let i: BigInt = int.parse().ok()?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let f: BigInt = frac.parse().ok()?;
        let scale = pow10(frac.len());
        Rat::new(i * &scale + f, scale)
    } else {
        let n: BigInt = body.parse().ok()?;
        Rat::from_integer(n)
    };
    Some(if neg { -val } else { val })
}

impl Coeff for Rat {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        Rat::from_integer(v.into())
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        parse_rat(s)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Coeff for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let n: f64 = num.trim().parse().ok()?;
            let d: f64 = den.trim().parse().ok()?;
            if d == 0.0 {
                return None;
            }
            Some(n / d)
        } else {
            s.parse().ok()
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}
