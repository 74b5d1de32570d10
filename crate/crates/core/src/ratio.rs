//! Exact rationals and ratio caps.
//!
//! Every correctness decision compares `max < C * min` by cross-multiplying
//! integers; floats only ever appear in printed approximations.

use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<BigUint>;

/// Parses `"a/b"`, `"a"` or a plain decimal such as `"2.5"`.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let err = |reason: &str| Error::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let s = input.trim();
    let parse_int = |t: &str| -> Result<BigUint> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("expected decimal digits"));
        }
        t.parse::<BigUint>()
            .map_err(|_| err("expected decimal digits"))
    };
    let r = if let Some((num, den)) = s.split_once('/') {
        let den = parse_int(den)?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        Ratio::new(parse_int(num)?, den)
    } else if let Some((whole, frac)) = s.split_once('.') {
        let whole = if whole.is_empty() {
            BigUint::zero()
        } else {
            parse_int(whole)?
        };
        let scale = BigUint::from(10u32).pow(frac.len() as u32);
        Ratio::new(whole * &scale + parse_int(frac)?, scale)
    } else {
        Ratio::from_integer(parse_int(s)?)
    };
    Ok(r)
}

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Lossy decimal approximation for reports.
pub fn approx(r: &Rational) -> f64 {
    // Scale down both sides together so huge values keep their ratio.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// Upper bound on `max / min` for a short sum.
///
/// Strict means `b_r < C b_1`; inclusive also admits equality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioCap {
    bound: Rational,
    inclusive: bool,
}

impl RatioCap {
    pub fn strict(bound: Rational) -> Self {
        Self {
            bound,
            inclusive: false,
        }
    }

    pub fn inclusive(bound: Rational) -> Self {
        Self {
            bound,
            inclusive: true,
        }
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn is_inclusive(&self) -> bool {
        self.inclusive
    }

    /// Whether `max / min` is within the cap; `min` must be nonzero.
    pub fn admits(&self, max: &BigUint, min: &BigUint) -> bool {
        let lhs = max * self.bound.denom();
        let rhs = min * self.bound.numer();
        if self.inclusive {
            lhs <= rhs
        } else {
            lhs < rhs
        }
    }

    /// Same test in machine integers; `None` when the cap does not fit in u64.
    pub(crate) fn small(&self) -> Option<SmallCap> {
        Some(SmallCap {
            num: self.bound.numer().to_u64()?,
            den: self.bound.denom().to_u64()?,
            inclusive: self.inclusive,
        })
    }

    pub fn exceeds_one(&self) -> bool {
        self.bound > Rational::one()
    }
}

impl fmt::Display for RatioCap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.inclusive { "<=" } else { "<" };
        write!(f, "{op} {}", format_rational(&self.bound))
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct SmallCap {
    num: u64,
    den: u64,
    inclusive: bool,
}

impl SmallCap {
    #[inline]
    pub(crate) fn admits(&self, max: u64, min: u64) -> bool {
        let lhs = max as u128 * self.den as u128;
        let rhs = min as u128 * self.num as u128;
        if self.inclusive {
            lhs <= rhs
        } else {
            lhs < rhs
        }
    }
}
