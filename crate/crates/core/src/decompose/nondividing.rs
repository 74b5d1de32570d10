use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Greedy `{2, 3}` decomposition with no term dividing another: strip the
/// factors of two, subtract the largest power of three, repeat.
pub fn nondividing_decompose(n: &BigUint) -> Vec<BigUint> {
    let three = BigUint::from(3u32);
    let mut rest = n.clone();
    let mut shift = 0u64;
    let mut terms = Vec::new();
    while !rest.is_zero() {
        let tz = rest.trailing_zeros().unwrap_or(0);
        rest >>= tz;
        shift += tz;
        let mut power = BigUint::one();
        while &power * &three <= rest {
            power *= &three;
        }
        rest -= &power;
        terms.push(power << shift);
    }
    terms.sort();
    terms
}
