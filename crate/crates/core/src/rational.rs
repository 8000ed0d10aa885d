//! Exact rationals for predicted densities and group-count ratios.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction with `i128` parts. All arithmetic is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(Ratio<i128>);

impl ExactRational {
    pub const ZERO: ExactRational = ExactRational(Ratio::new_raw(0, 1));
    pub const ONE: ExactRational = ExactRational(Ratio::new_raw(1, 1));

    pub fn new(numer: i128, denom: i128) -> Result<Self> {
        if denom == 0 {
            return Err(Error::ZeroDenominator);
        }
        if numer == i128::MIN || denom == i128::MIN {
            return Err(Error::Overflow("rational construction"));
        }
        Ok(ExactRational(Ratio::new(numer, denom)))
    }

    pub fn integer(n: i128) -> Self {
        ExactRational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// `base^exp` for a possibly negative exponent.
    pub fn pow(base: i128, exp: i64) -> Result<Self> {
        let mag = checked_ipow(base, exp.unsigned_abs())?;
        if exp >= 0 {
            Ok(Self::integer(mag))
        } else {
            Self::new(1, mag)
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.0
            .checked_add(&rhs.0)
            .map(ExactRational)
            .ok_or(Error::Overflow("rational addition"))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.0
            .checked_sub(&rhs.0)
            .map(ExactRational)
            .ok_or(Error::Overflow("rational subtraction"))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.0
            .checked_mul(&rhs.0)
            .map(ExactRational)
            .ok_or(Error::Overflow("rational multiplication"))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.0.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        self.0
            .checked_div(&rhs.0)
            .map(ExactRational)
            .ok_or(Error::Overflow("rational division"))
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// Decimal rendering with `places` digits, rounding half to even.
    pub fn to_decimal_string(&self, places: u32) -> String {
        let n = self.numer();
        let d = self.denom();
        let neg = n < 0;
        let n = n.unsigned_abs();
        let d = d as u128;
        let scale = 10u128.pow(places);
        // split to avoid overflowing n * scale
        let int_part = n / d;
        let rem = n % d;
        let scaled = rem * scale; // rem < d; only overflows for denominators beyond ~2^94
        let mut frac = scaled / d;
        let frac_rem = scaled % d;
        let mut int_part = int_part;
        let last_digit_odd = if places == 0 { int_part % 2 == 1 } else { frac % 2 == 1 };
        match (2 * frac_rem).cmp(&d) {
            Ordering::Greater => frac += 1,
            Ordering::Equal if last_digit_odd => frac += 1,
            _ => {}
        }
        if frac == scale {
            frac = 0;
            int_part += 1;
        }
        let sign = if neg && (int_part != 0 || frac != 0) { "-" } else { "" };
        if places == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac:0width$}", width = places as usize)
        }
    }
}

pub(crate) fn checked_ipow(base: i128, exp: u64) -> Result<i128> {
    let exp: u32 = exp.try_into().map_err(|_| Error::Overflow("integer power"))?;
    base.checked_pow(exp).ok_or(Error::Overflow("integer power"))
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ExactRational", 2)?;
        s.serialize_field("num", &self.numer())?;
        s.serialize_field("den", &self.denom())?;
        s.end()
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::integer(n as i128)
    }
}
