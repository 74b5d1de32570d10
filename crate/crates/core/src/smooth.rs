//! The sequence `A_p` of integers `2^x p^y`, in increasing order.
//!
//! Elements are produced by a heap merge over the rows `p^y, 2 p^y, 4 p^y, ...`,
//! so generation costs `O(count * log rows)` and never factors anything.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The odd base `p` of `A_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    p: u64,
}

impl Params {
    pub const MAX_P: u64 = 1 << 62;

    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || p >= Self::MAX_P {
            return Err(Error::InvalidBase(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `ceil(log2 p)`; `p` is odd and at least 3, so it is never a power of two.
    pub fn ceil_log2_p(&self) -> u32 {
        64 - self.p.leading_zeros()
    }

    pub fn element(&self, x: u32, y: u32) -> BigUint {
        BigUint::from(self.p).pow(y) << x
    }
}

/// One member `value = 2^x p^y` of `A_p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SmoothElement {
    pub value: BigUint,
    pub x: u32,
    pub y: u32,
}

/// Unbounded increasing iterator over `A_p`.
#[derive(Clone, Debug)]
pub struct SmoothIter {
    p: BigUint,
    heap: BinaryHeap<Reverse<(BigUint, u32, u32)>>,
}

impl SmoothIter {
    pub fn new(params: &Params) -> Self {
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((BigUint::one(), 0, 0)));
        Self {
            p: BigUint::from(params.p),
            heap,
        }
    }
}

impl Iterator for SmoothIter {
    type Item = SmoothElement;

    fn next(&mut self) -> Option<SmoothElement> {
        let Reverse((value, x, y)) = self.heap.pop()?;
        // Each row head opens the next row; every other pop advances its own row.
        if x == 0 {
            self.heap.push(Reverse((&value * &self.p, 0, y + 1)));
        }
        self.heap.push(Reverse((&value << 1u32, x + 1, y)));
        Some(SmoothElement { value, x, y })
    }
}

/// Every element of `A_p` that is at most `bound`, increasing.
pub fn smooth_upto(params: &Params, bound: &BigUint) -> Vec<SmoothElement> {
    SmoothIter::new(params)
        .take_while(|e| &e.value <= bound)
        .collect()
}

/// Exponent pair `(x, y)` with `n = 2^x p^y`, if there is one.
pub fn membership(n: &BigUint, params: &Params) -> Option<(u32, u32)> {
    if n.is_zero() {
        return None;
    }
    let x = n.trailing_zeros().unwrap_or(0);
    let mut rest = n >> x;
    let p = BigUint::from(params.p);
    let mut y = 0u32;
    while !rest.is_one() {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return None;
        }
        rest = q;
        y += 1;
    }
    Some((u32::try_from(x).ok()?, y))
}

pub fn membership_u64(n: u64, params: &Params) -> Option<(u32, u32)> {
    if n == 0 {
        return None;
    }
    let x = n.trailing_zeros();
    let mut rest = n >> x;
    let mut y = 0;
    while rest != 1 {
        if !rest.is_multiple_of(params.p) {
            return None;
        }
        rest /= params.p;
        y += 1;
    }
    Some((x, y))
}

/// `#{x >= 0 : q 2^x < bound}` for `q >= 1`.
fn row_count_below(q: &BigUint, bound: &BigUint) -> u64 {
    if q >= bound {
        return 0;
    }
    let t = bound.bits() - q.bits();
    t + u64::from((q << t) < *bound)
}

/// Number of elements of `A_p` in `[lo, hi)`.
pub fn window_count(params: &Params, lo: &BigUint, hi: &BigUint) -> u64 {
    if lo >= hi {
        return 0;
    }
    let lo = lo.max(&BigUint::one()).clone();
    let p = BigUint::from(params.p);
    let mut q = BigUint::one();
    let mut count = 0;
    while &q < hi {
        count += row_count_below(&q, hi) - row_count_below(&q, &lo);
        q *= &p;
    }
    count
}

/// `floor(log2 x)` from the bit length; `x` must be positive.
pub fn floor_log2(x: &BigUint) -> u64 {
    debug_assert!(!x.is_zero());
    x.bits() - 1
}

fn f_next(v: &BigUint) -> BigUint {
    BigUint::from(floor_log2(v).max(1))
}

/// `f_0(x) = x`, `f_k(x) = max(1, floor(log2 f_{k-1}(x)))`.
pub fn f_iterate(x: &BigUint, k: u32) -> BigUint {
    let mut v = x.clone();
    for _ in 0..k {
        if v.is_one() {
            break;
        }
        v = f_next(&v);
    }
    v
}

/// `F(x)`: the product of `f_k(x)` over all `k`, stopping at the first factor 1.
pub fn f_value(x: &BigUint) -> BigUint {
    let mut product = BigUint::one();
    let mut v = x.clone();
    while !v.is_one() {
        product *= &v;
        v = f_next(&v);
    }
    product
}
