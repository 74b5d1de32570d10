//! Brute-force oracles: minimal-ratio decompositions, representability under a
//! ratio cap, and window counts behind the scarcity argument.
//!
//! The census marks `n <= N` as representable when some subset of a window
//! `A_p ∩ [a_j, C a_j)` sums to `n`. Each window is a bitset subset-sum pass,
//! windows run in parallel and their bitsets are OR-merged.

use num_bigint::BigUint;
use num_traits::{FromPrimitive, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::decompose::Decomposition;
use crate::error::{Error, Result};
use crate::ratio::{approx, RatioCap, Rational};
use crate::smooth::{window_count, Params, SmoothIter};

/// Environment variable holding the largest window size the census accepts.
pub const BUDGET_ENV: &str = "SMOOTHSUM_MAX_WINDOW_EXP";
pub const DEFAULT_MAX_WINDOW_EXP: u32 = 24;

/// Reads [`BUDGET_ENV`], falling back to [`DEFAULT_MAX_WINDOW_EXP`].
pub fn budget_from_env() -> u32 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_WINDOW_EXP)
}

fn elements_upto(params: &Params, n: u64) -> Vec<u64> {
    SmoothIter::new(params)
        .map_while(|e| e.value.to_u64().filter(|&v| v <= n))
        .collect()
}

/// `max / min` within the cap, exactly.
fn admits(cap: &RatioCap, max: u64, min: u64) -> bool {
    match cap.small() {
        Some(small) => small.admits(max, min),
        None => cap.admits(&BigUint::from(max), &BigUint::from(min)),
    }
}

/// Smallest achievable `max / min` for `n`, with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinRatioResult {
    pub n: u64,
    pub ratio: Option<Rational>,
    pub witness: Option<Decomposition>,
}

struct Best {
    num: u64,
    den: u64,
    terms: Vec<u64>,
}

/// Exhaustive search over the smallest term `b_1` and the largest term `b_r`.
///
/// For each `b_1` in increasing order, candidates `b_r` are tried in increasing
/// order while `b_r / b_1` still beats the best ratio so far, and the middle
/// terms are found by an include-first depth-first search. The first witness
/// at the optimal ratio is therefore the lexicographically smallest one.
pub fn min_ratio(n: u64, params: &Params, cap: &RatioCap) -> MinRatioResult {
    let els = elements_upto(params, n);
    let mut best: Option<Best> = None;
    let mut middle = Vec::new();
    for (i, &b1) in els.iter().enumerate() {
        if b1 == n {
            if best.as_ref().is_none_or(|b| b.num > b.den) && admits(cap, b1, b1) {
                best = Some(Best {
                    num: 1,
                    den: 1,
                    terms: vec![n],
                });
            }
            continue;
        }
        for (r, &br) in els.iter().enumerate().skip(i + 1) {
            if !admits(cap, br, b1) {
                break;
            }
            if let Some(b) = &best {
                if br as u128 * b.den as u128 >= b.num as u128 * b1 as u128 {
                    break;
                }
            }
            let Some(rest) = n.checked_sub(b1).and_then(|v| v.checked_sub(br)) else {
                break;
            };
            let pool = &els[i + 1..r];
            middle.clear();
            if pool.iter().sum::<u64>() >= rest && subset_dfs(pool, rest, &mut middle) {
                let mut terms = vec![b1];
                terms.extend_from_slice(&middle);
                terms.push(br);
                best = Some(Best {
                    num: br,
                    den: b1,
                    terms,
                });
                break;
            }
        }
    }
    match best {
        Some(b) => {
            let terms = b.terms.into_iter().map(BigUint::from).collect();
            let witness = Decomposition::new(BigUint::from(n), terms);
            MinRatioResult {
                n,
                ratio: Some(witness.ratio.clone()),
                witness: Some(witness),
            }
        }
        None => MinRatioResult {
            n,
            ratio: None,
            witness: None,
        },
    }
}

/// Include-first search over an increasing pool; leaves the chosen terms in `out`.
fn subset_dfs(pool: &[u64], target: u64, out: &mut Vec<u64>) -> bool {
    fn go(pool: &[u64], suffix: &[u64], i: usize, target: u64, out: &mut Vec<u64>) -> bool {
        if target == 0 {
            return true;
        }
        if i == pool.len() || pool[i] > target || suffix[i] < target {
            return false;
        }
        out.push(pool[i]);
        if go(pool, suffix, i + 1, target - pool[i], out) {
            return true;
        }
        out.pop();
        go(pool, suffix, i + 1, target, out)
    }
    let mut suffix = vec![0u64; pool.len() + 1];
    for i in (0..pool.len()).rev() {
        suffix[i] = suffix[i + 1] + pool[i];
    }
    go(pool, &suffix, 0, target, out)
}

/// One census window `A_p ∩ [a_j, C a_j)`, truncated at `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusWindow {
    pub j: usize,
    pub start: u64,
    pub size: u32,
}

/// One density window `[x_j, (p - delta) x_j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityWindow {
    pub j: u32,
    pub x: f64,
    pub count: u64,
    /// `X_j - log(x_j) log(p - delta) / (log 2 log p)`.
    pub excess: f64,
}

/// Output of [`density_experiment`] besides the census itself.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityFit {
    pub epsilon: f64,
    pub delta: f64,
    #[serde(rename = "L")]
    pub l: u32,
    pub windows: Vec<DensityWindow>,
    pub fitted_cp: f64,
    /// Window where `fitted_cp` is attained.
    pub argmax: u32,
    /// `log(p - delta) / log p`.
    pub exponent: f64,
    /// `2^fitted_cp (L + 1) N^exponent`.
    pub upper_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CensusReport {
    pub p: u64,
    pub cap: RatioCap,
    pub n: u64,
    /// `representable[i]` is for `i + 1`.
    pub representable: Vec<bool>,
    pub count: u64,
    pub fraction: Rational,
    pub windows: Vec<CensusWindow>,
    pub density: Option<DensityFit>,
}

impl CensusReport {
    pub fn is_representable(&self, n: u64) -> bool {
        n >= 1
            && self
                .representable
                .get(n as usize - 1)
                .copied()
                .unwrap_or(false)
    }

    pub fn unrepresentable(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.n).filter(|&n| !self.is_representable(n))
    }

    pub fn max_window(&self) -> u32 {
        self.windows.iter().map(|w| w.size).max().unwrap_or(0)
    }

    /// JSON summary without the per-`n` array.
    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "C": crate::ratio::format_rational(self.cap.bound()),
            "inclusive": self.cap.is_inclusive(),
            "N": self.n,
            "representable": self.count,
            "unrepresentable": self.n - self.count,
            "fraction": {
                "num": self.fraction.numer().to_string(),
                "den": self.fraction.denom().to_string(),
                "approx": approx(&self.fraction),
            },
            "windows": self.windows.len(),
            "max_window": self.max_window(),
            "density": self.density,
        })
    }
}

struct Bitset(Vec<u64>);

impl Bitset {
    fn new(bits: usize) -> Self {
        Self(vec![0; bits.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    /// `self |= self << shift`, dropping bits past the end.
    fn or_shifted(&mut self, shift: usize) {
        let (words, bits) = (shift / 64, shift % 64);
        let w = &mut self.0;
        for i in (words..w.len()).rev() {
            let lo = w[i - words];
            let mut v = lo << bits;
            if bits != 0 && i > words {
                v |= w[i - words - 1] >> (64 - bits);
            }
            w[i] |= v;
        }
    }

    fn or_with(&mut self, other: &Bitset) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
}

/// Representability of every `n <= N` under `cap`, with the budget from the environment.
pub fn census(params: &Params, cap: &RatioCap, n: u64) -> Result<CensusReport> {
    census_with_budget(params, cap, n, budget_from_env())
}

/// As [`census`], rejecting runs whose largest window exceeds `max_window_exp` elements.
pub fn census_with_budget(
    params: &Params,
    cap: &RatioCap,
    n: u64,
    max_window_exp: u32,
) -> Result<CensusReport> {
    if n == 0 {
        return Err(Error::NonPositive);
    }
    if !cap.exceeds_one() {
        return Err(Error::Precondition("the ratio cap must exceed 1".into()));
    }
    let bits = usize::try_from(n)
        .ok()
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| {
            Error::Precondition(format!("N = {n} is too large for an in-memory census"))
        })?;
    let els = elements_upto(params, n);
    let windows: Vec<CensusWindow> = els
        .iter()
        .enumerate()
        .map(|(j, &a)| CensusWindow {
            j,
            start: a,
            size: els[j..].iter().take_while(|&&v| admits(cap, v, a)).count() as u32,
        })
        .collect();
    let largest = windows.iter().map(|w| w.size).max().unwrap_or(0);
    if largest > max_window_exp {
        return Err(Error::Budget {
            size: largest as usize,
            limit: max_window_exp,
        });
    }

    let merged = windows
        .par_iter()
        .fold(
            || Bitset::new(bits),
            |mut acc, w| {
                let mut dp = Bitset::new(bits);
                dp.set(0);
                for &v in &els[w.j..w.j + w.size as usize] {
                    dp.or_shifted(v as usize);
                }
                acc.or_with(&dp);
                acc
            },
        )
        .reduce(
            || Bitset::new(bits),
            |mut a, b| {
                a.or_with(&b);
                a
            },
        );
    let representable: Vec<bool> = (1..bits).map(|i| merged.get(i)).collect();
    let count = representable.iter().filter(|&&r| r).count() as u64;
    Ok(CensusReport {
        p: params.p(),
        cap: cap.clone(),
        n,
        representable,
        count,
        fraction: Rational::new(BigUint::from(count), BigUint::from(n)),
        windows,
        density: None,
    })
}

/// Default `delta = (p - C (1 + epsilon)) / 2`.
pub fn default_delta(params: &Params, cap: &Rational, epsilon: f64) -> f64 {
    (params.p() as f64 - approx(cap) * (1.0 + epsilon)) / 2.0
}

/// Census plus the window counts `X_j` on `[x_j, (p - delta) x_j)`, `x_j = (1 + epsilon)^j`.
pub fn density_experiment(
    params: &Params,
    cap: &RatioCap,
    n: u64,
    epsilon: f64,
    delta: f64,
) -> Result<CensusReport> {
    let p = params.p() as f64;
    let c = approx(cap.bound());
    if !(epsilon > 0.0 && delta > 0.0 && c * (1.0 + epsilon) < p - delta) {
        return Err(Error::Precondition(format!(
            "need epsilon > 0, delta > 0 and C (1 + epsilon) < p - delta; got C = {c}, epsilon = {epsilon}, delta = {delta}"
        )));
    }
    let mut report = census(params, cap, n)?;

    let growth = 1.0 + epsilon;
    let mut l = ((n as f64).ln() / growth.ln()).floor() as u32;
    while l > 0 && growth.powi(l as i32) > n as f64 {
        l -= 1;
    }
    while growth.powi(l as i32 + 1) <= n as f64 {
        l += 1;
    }
    let exponent = (p - delta).ln() / p.ln();
    let slope = exponent / 2f64.ln();
    let to_big = |v: f64| BigUint::from_f64(v.ceil()).expect("finite window bound");
    let windows: Vec<DensityWindow> = (0..=l)
        .map(|j| {
            let x = growth.powi(j as i32);
            let count = window_count(params, &to_big(x), &to_big((p - delta) * x));
            DensityWindow {
                j,
                x,
                count,
                excess: count as f64 - x.ln() * slope,
            }
        })
        .collect();
    let (argmax, fitted_cp) = windows
        .iter()
        .map(|w| (w.j, w.excess))
        .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    report.density = Some(DensityFit {
        epsilon,
        delta,
        l,
        windows,
        fitted_cp,
        argmax,
        exponent,
        upper_bound: fitted_cp.exp2() * (l as f64 + 1.0) * (n as f64).powf(exponent),
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::parse_rational;
    use num_traits::One;
    use proptest::prelude::*;

    fn p3() -> Params {
        Params::new(3).unwrap()
    }

    fn cap(s: &str) -> RatioCap {
        RatioCap::strict(parse_rational(s).unwrap())
    }

    fn terms(r: &MinRatioResult) -> Vec<u64> {
        r.witness
            .as_ref()
            .map(|w| w.terms.iter().map(|t| t.to_u64().unwrap()).collect())
            .unwrap_or_default()
    }

    /// Every subset of `A_p ∩ [1, n]`, scored directly.
    fn brute_min_ratio(n: u64, p: u64, cap: &RatioCap) -> Option<(Rational, Vec<u64>)> {
        let els = elements_upto(&Params::new(p).unwrap(), n);
        let mut best: Option<(Rational, Vec<u64>)> = None;
        for mask in 1u64..1 << els.len() {
            let set: Vec<u64> = (0..els.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| els[i])
                .collect();
            if set.iter().sum::<u64>() != n || !admits(cap, *set.last().unwrap(), set[0]) {
                continue;
            }
            let r = Rational::new(BigUint::from(*set.last().unwrap()), BigUint::from(set[0]));
            let better = match &best {
                None => true,
                Some((br, bs)) => r < *br || (r == *br && set < *bs),
            };
            if better {
                best = Some((r, set));
            }
        }
        best
    }

    #[test]
    fn min_ratio_examples() {
        let r = min_ratio(1, &p3(), &cap("10"));
        assert_eq!(r.ratio, Some(Rational::one()));
        assert_eq!(terms(&r), vec![1]);
        let r = min_ratio(10, &p3(), &cap("10"));
        assert_eq!(r.ratio, Some(parse_rational("3/2").unwrap()));
        assert_eq!(terms(&r), vec![4, 6]);
        let r = min_ratio(11, &p3(), &cap("10"));
        assert_eq!(r.ratio, Some(parse_rational("8/3").unwrap()));
        assert!(min_ratio(11, &p3(), &cap("2")).ratio.is_none());
    }

    #[test]
    fn min_ratio_matches_brute_force() {
        for p in [3, 5, 7] {
            for n in 1..=100 {
                let c = cap("6");
                let fast = min_ratio(n, &Params::new(p).unwrap(), &c);
                let slow = brute_min_ratio(n, p, &c);
                assert_eq!(
                    fast.ratio,
                    slow.as_ref().map(|s| s.0.clone()),
                    "p={p} n={n}"
                );
                assert_eq!(
                    terms(&fast),
                    slow.map(|s| s.1).unwrap_or_default(),
                    "p={p} n={n}"
                );
            }
        }
    }

    #[test]
    fn census_examples() {
        let r = census(&p3(), &cap("6"), 10_000).unwrap();
        assert_eq!(r.count, 10_000);
        let r = census(&p3(), &cap("2"), 10_000).unwrap();
        assert!(r.count < 10_000);
        assert!(!r.is_representable(11));
        assert!(census(&p3(), &cap("1"), 10).is_err());
        assert!(census(&p3(), &cap("6"), 0).is_err());
    }

    #[test]
    fn census_budget_guard() {
        let err = census_with_budget(&p3(), &cap("6"), 10_000, 5).unwrap_err();
        assert!(matches!(err, Error::Budget { limit: 5, .. }));
    }

    #[test]
    fn density_precondition_and_bound() {
        let d = density_experiment(&p3(), &cap("2"), 10_000, 0.05, 0.4).unwrap();
        let fit = d.density.as_ref().unwrap();
        assert_eq!(fit.l, 188);
        assert!(fit.windows.iter().all(|w| w.excess <= fit.fitted_cp));
        assert_eq!(fit.windows[fit.argmax as usize].excess, fit.fitted_cp);
        assert!(d.count as f64 <= fit.upper_bound);
        assert!(density_experiment(&p3(), &cap("2.5"), 100, 0.05, 0.5).is_err());
    }

    #[test]
    fn bitset_shift_matches_naive() {
        for shift in [0usize, 1, 63, 64, 65, 130] {
            let mut b = Bitset::new(300);
            for i in [0, 5, 63, 64, 100, 200] {
                b.set(i);
            }
            let before: Vec<bool> = (0..300).map(|i| b.get(i)).collect();
            b.or_shifted(shift);
            for i in 0..300 {
                let expect = before[i] || (i >= shift && before[i - shift]);
                assert_eq!(b.get(i), expect, "shift {shift} bit {i}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn census_agrees_with_min_ratio(k in 1u64..8, num in 5u64..40, den in 2u64..5) {
            let prm = Params::new(2 * k + 1).unwrap();
            let c = RatioCap::strict(Rational::new(BigUint::from(num.max(den + 1)), BigUint::from(den)));
            let r = census(&prm, &c, 400).unwrap();
            for n in 1..=400 {
                prop_assert_eq!(r.is_representable(n), min_ratio(n, &prm, &c).ratio.is_some(), "n={}", n);
            }
        }
    }
}
