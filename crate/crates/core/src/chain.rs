//! Multiset chains `S'_1, ..., S'_T`.
//!
//! `S'_1` plays the anchor role in the first interval. Each later `S'_k` is a
//! multiset of powers of two (at least 2) used to rewrite the even part of a
//! coefficient in interval `k`; coefficients there are bounded by `|S'_{k-1}|`
//! and the interval widths are `max S'_{k-1}`. The constant is the product of
//! the maxima.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::anchor::{
    default_anchor, derive_chain, grouped_desc, is_subset_sum, preferred_anchor, suffix_sums,
};
use crate::error::{Error as CrateError, Result};
use crate::smooth::{membership_u64, Params};

/// Serialized form: `{"p": .., "m0": .., "sets": [[..], ..]}`, sets sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultisetChain {
    pub p: u64,
    pub m0: u64,
    pub sets: Vec<Vec<u64>>,
}

/// First violated admissibility condition.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ChainViolation {
    #[error("chain is for p = {chain}, expected p = {expected}")]
    BaseMismatch { chain: u64, expected: u64 },
    #[error("chain has no sets")]
    NoSets,
    #[error("set {set} is empty")]
    EmptySet { set: usize },
    #[error("S'_1 element {element} is not an element of A_p greater than 1")]
    NotSmooth { element: u64 },
    #[error("S'_1 has no odd element")]
    NoOddElement,
    #[error("base M0 = {m0} must lie in [1, max S'_1 = {max}]")]
    BaseOutOfRange { m0: u64, max: u64 },
    #[error("S'_1 does not cover {target}")]
    Coverage { target: u64 },
    #[error("S'_{set} element {element} is not a power of two >= 2")]
    NotEvenPower { set: usize, element: u64 },
    #[error("S'_{set} uses {element} more often than S'_{prev}", prev = .set - 1)]
    NotIncluded { set: usize, element: u64 },
    #[error("S'_{set} cannot represent the even value {even} <= |S'_{prev}|", prev = .set - 1)]
    EvenGap { set: usize, even: u64 },
    #[error("last set has {size} elements; it must be a singleton")]
    NotTerminal { size: usize },
}

impl MultisetChain {
    pub fn new(p: u64, m0: u64, mut sets: Vec<Vec<u64>>) -> Self {
        for s in &mut sets {
            s.sort_unstable();
        }
        Self { p, m0, sets }
    }

    /// Product of the set maxima.
    pub fn constant(&self) -> BigUint {
        self.sets
            .iter()
            .map(|s| BigUint::from(s.iter().copied().max().unwrap_or(0)))
            .product()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("chain serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let chain: Self = serde_json::from_str(text).map_err(|e| CrateError::Parse {
            input: "chain document".into(),
            reason: e.to_string(),
        })?;
        Ok(Self::new(chain.p, chain.m0, chain.sets))
    }
}

fn counts(multiset: &[u64]) -> HashMap<u64, usize> {
    let mut map = HashMap::new();
    for &v in multiset {
        *map.entry(v).or_insert(0) += 1;
    }
    map
}

/// Checks every chain condition in order; on success returns the constant.
pub fn chain_admissible(
    chain: &MultisetChain,
    params: &Params,
) -> std::result::Result<BigUint, ChainViolation> {
    if chain.p != params.p() {
        return Err(ChainViolation::BaseMismatch {
            chain: chain.p,
            expected: params.p(),
        });
    }
    let first = chain.sets.first().ok_or(ChainViolation::NoSets)?;
    let max = *first
        .iter()
        .max()
        .ok_or(ChainViolation::EmptySet { set: 1 })?;
    if let Some(&element) = first
        .iter()
        .find(|&&e| e < 2 || membership_u64(e, params).is_none())
    {
        return Err(ChainViolation::NotSmooth { element });
    }
    if first.iter().all(|e| e % 2 == 0) {
        return Err(ChainViolation::NoOddElement);
    }
    if chain.m0 == 0 || chain.m0 > max {
        return Err(ChainViolation::BaseOutOfRange { m0: chain.m0, max });
    }
    let groups = grouped_desc(first);
    let suffix = suffix_sums(&groups);
    if let Some(target) =
        (chain.m0..=chain.m0 + first.len() as u64).find(|&t| !is_subset_sum(&groups, &suffix, t))
    {
        return Err(ChainViolation::Coverage { target });
    }

    for (idx, set) in chain.sets.iter().enumerate().skip(1) {
        let k = idx + 1;
        if set.is_empty() {
            return Err(ChainViolation::EmptySet { set: k });
        }
        if let Some(&element) = set.iter().find(|&&e| e < 2 || !e.is_power_of_two()) {
            return Err(ChainViolation::NotEvenPower { set: k, element });
        }
        let prev = &chain.sets[idx - 1];
        let have = counts(prev);
        for (&element, &n) in &counts(set) {
            if have.get(&element).copied().unwrap_or(0) < n {
                return Err(ChainViolation::NotIncluded { set: k, element });
            }
        }
        let groups = grouped_desc(set);
        let suffix = suffix_sums(&groups);
        if let Some(even) = (2..=prev.len() as u64)
            .step_by(2)
            .find(|&e| !is_subset_sum(&groups, &suffix, e))
        {
            return Err(ChainViolation::EvenGap { set: k, even });
        }
    }

    let last = chain.sets.last().expect("nonempty");
    if last.len() != 1 {
        return Err(ChainViolation::NotTerminal { size: last.len() });
    }
    Ok(chain.constant())
}

/// Multiplicities of `2^j` for `j = 0..64`.
type PowerCounts = [u8; 64];

fn power_counts(multiset: &[u64]) -> PowerCounts {
    let mut c = [0u8; 64];
    for &v in multiset {
        if v >= 2 && v.is_power_of_two() {
            let j = v.trailing_zeros() as usize;
            c[j] = c[j].saturating_add(1);
        }
    }
    c
}

/// Whether the powers `2^j` (with multiplicities) reach every even value in `[2, bound]`.
fn covers_evens(mult: &[(u32, u8)], bound: u64) -> bool {
    let bound = bound as usize;
    let mut reach = vec![false; bound + 1];
    reach[0] = true;
    for &(j, m) in mult {
        let v = 1usize << j;
        for _ in 0..m {
            for s in (v..=bound).rev() {
                reach[s] |= reach[s - v];
            }
        }
    }
    (2..=bound).step_by(2).all(|e| reach[e])
}

/// Constant contributed by a tail, with its sets.
type Tail = (BigUint, Vec<Vec<u64>>);

/// Optimal tail `S'_k, ..., S'_T` by exhaustive search over small multiplicities.
struct TailSearch {
    memo: HashMap<(u64, Vec<u8>), Option<Tail>>,
}

impl TailSearch {
    const MULT_CAP: u8 = 3;

    fn best(&mut self, bound: u64, avail: &PowerCounts) -> Option<Tail> {
        let top = 63 - bound.leading_zeros();
        let usable: Vec<u8> = (1..=top as usize)
            .map(|j| {
                avail[j]
                    .min(Self::MULT_CAP)
                    .min((bound >> j).min(255) as u8)
            })
            .collect();
        let key = (bound, usable.clone());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }

        let mut best: Option<(BigUint, usize, Vec<Vec<u64>>)> = None;
        let mut choice = vec![0u8; usable.len()];
        loop {
            let mult: Vec<(u32, u8)> = choice
                .iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .map(|(i, &m)| (i as u32 + 1, m))
                .collect();
            let size: usize = mult.iter().map(|&(_, m)| m as usize).sum();
            if size > 0 && covers_evens(&mult, bound) {
                let max_exp = mult.iter().map(|&(j, _)| j).max().expect("nonempty");
                let set: Vec<u64> = mult
                    .iter()
                    .flat_map(|&(j, m)| std::iter::repeat_n(1u64 << j, m as usize))
                    .collect();
                let tail = if size == 1 {
                    Some((BigUint::one(), Vec::new()))
                } else {
                    self.best(size as u64, &power_counts(&set))
                };
                if let Some((rest, sets)) = tail {
                    let product = (BigUint::one() << max_exp) * rest;
                    let better = best
                        .as_ref()
                        .is_none_or(|(b, s, _)| product < *b || (product == *b && size < *s));
                    if better {
                        let mut all = vec![set];
                        all.extend(sets);
                        best = Some((product, size, all));
                    }
                }
            }
            // Odometer over the multiplicity vector.
            let mut i = 0;
            while i < choice.len() && choice[i] == usable[i] {
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
            choice[i] += 1;
        }
        let result = best.map(|(c, _, sets)| (c, sets));
        self.memo.insert(key, result.clone());
        result
    }
}

struct ChainSearch<'a> {
    params: &'a Params,
    tails: TailSearch,
    evaluations: usize,
    budget: usize,
}

impl ChainSearch<'_> {
    /// Smallest base near an odd element whose window is covered, if any.
    fn find_m0(&self, s: &[u64]) -> Option<u64> {
        let groups = grouped_desc(s);
        let suffix = suffix_sums(&groups);
        let len = s.len() as u64;
        let max = *s.iter().max()?;
        let mut candidates: Vec<u64> = s
            .iter()
            .filter(|e| *e % 2 == 1)
            .flat_map(|&o| o.saturating_sub(len).max(1)..=o + 2 * len + 2)
            .filter(|&t| t <= max)
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        candidates
            .into_iter()
            .find(|&t| (t..=t + len).all(|x| is_subset_sum(&groups, &suffix, x)))
    }

    fn evaluate(&mut self, s: &[u64]) -> Option<(BigUint, MultisetChain)> {
        if self.evaluations >= self.budget {
            return None;
        }
        self.evaluations += 1;
        if s.len() < 2
            || s.iter()
                .any(|&e| e < 2 || membership_u64(e, self.params).is_none())
            || s.iter().all(|e| e % 2 == 0)
        {
            return None;
        }
        let m0 = self.find_m0(s)?;
        let (tail, sets) = self.tails.best(s.len() as u64, &power_counts(s))?;
        let mut all = vec![s.to_vec()];
        all.extend(sets);
        let chain = MultisetChain::new(self.params.p(), m0, all);
        let c = chain_admissible(&chain, self.params).ok()?;
        debug_assert_eq!(c, BigUint::from(*s.iter().max().unwrap()) * tail);
        Some((c, chain))
    }

    fn neighbours(&self, s: &[u64]) -> Vec<Vec<u64>> {
        let mut distinct = s.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let top = self.params.ceil_log2_p() + 1;
        let mut out = Vec::new();
        for &v in &distinct {
            let mut t = s.to_vec();
            let pos = t.iter().position(|&e| e == v).expect("present");
            t.remove(pos);
            out.push(t);
        }
        for j in 1..=top {
            let mut t = s.to_vec();
            t.push(1 << j);
            out.push(t);
        }
        for q in [self.params.p(), 2 * self.params.p()] {
            if !s.contains(&q) {
                let mut t = s.to_vec();
                t.push(q);
                out.push(t);
            }
        }
        for t in &mut out {
            t.sort_unstable();
        }
        out
    }
}

/// Heuristic hill climb over first sets, each completed with its best tail.
///
/// Deterministic for a given budget (the number of candidate evaluations).
/// The starting point is the derived chain of the preferred anchor, so the
/// result never has a larger constant than that chain.
pub fn chain_search(params: &Params, budget: usize) -> MultisetChain {
    let fallback = derive_chain(&preferred_anchor(params), params)
        .expect("preferred anchor is verified")
        .to_multiset_chain();
    let mut best_c = fallback.constant();
    let mut best = fallback;

    let mut search = ChainSearch {
        params,
        tails: TailSearch {
            memo: HashMap::new(),
        },
        evaluations: 1,
        budget: budget.max(1),
    };

    let p = params.p();
    let ceil = params.ceil_log2_p();
    let mut seeds: Vec<Vec<u64>> = vec![default_anchor(params).elements().to_vec()];
    let larger: Vec<u64> = [1u64 << ceil, 2 * p]
        .into_iter()
        .chain((p + 1..=p + 8).filter(|q| q.is_power_of_two()))
        .collect();
    for q in larger {
        for j in 0..=3u32 {
            let mut seed: Vec<u64> = (1..=j).map(|i| 1u64 << i).collect();
            seed.extend([p, q]);
            seed.sort_unstable();
            seed.dedup();
            seeds.push(seed);
        }
    }
    seeds.dedup();

    let mut current: Option<(BigUint, Vec<u64>)> = None;
    for seed in seeds {
        if let Some((c, chain)) = search.evaluate(&seed) {
            if current.as_ref().is_none_or(|(cc, _)| c < *cc) {
                current = Some((c.clone(), seed));
            }
            if c < best_c {
                best_c = c;
                best = chain;
            }
        }
    }

    while let Some((cur_c, cur)) = current.take() {
        let mut step: Option<(BigUint, Vec<u64>)> = None;
        for cand in search.neighbours(&cur) {
            if let Some((c, chain)) = search.evaluate(&cand) {
                if c < best_c {
                    best_c = c.clone();
                    best = chain;
                }
                if c < cur_c && step.as_ref().is_none_or(|(sc, _)| c < *sc) {
                    step = Some((c, cand));
                }
            }
        }
        current = step;
        if search.evaluations >= search.budget {
            break;
        }
    }
    best
}
