use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::ratio::Rational;
use crate::smooth::{membership, Params};

/// Outcome of each independent check on a claimed decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub sum: bool,
    pub increasing: bool,
    pub membership: bool,
    pub ratio: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.sum && self.increasing && self.membership && self.ratio
    }

    /// Names of the failed checks.
    pub fn failures(&self) -> Vec<&'static str> {
        [
            (self.sum, "sum"),
            (self.increasing, "increasing"),
            (self.membership, "membership"),
            (self.ratio, "ratio"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

/// Checks that `terms` are strictly increasing members of `A_p` summing to `n`
/// with `max < c * min`, exactly.
pub fn verify(n: &BigUint, params: &Params, terms: &[BigUint], c: &Rational) -> VerifyReport {
    let sum = !terms.is_empty() && terms.iter().sum::<BigUint>() == *n;
    let increasing = terms.windows(2).all(|w| w[0] < w[1]);
    let membership = terms.iter().all(|t| membership(t, params).is_some());
    let ratio = match (terms.first(), terms.last()) {
        (Some(min), Some(max)) if !min.is_zero() => max * c.denom() < min * c.numer(),
        _ => false,
    };
    VerifyReport {
        sum,
        increasing,
        membership,
        ratio,
    }
}
