//! Constructive decomposition of `n` into distinct elements of `A_p` with
//! bounded ratio.
//!
//! The driver starts from the representation
//! `n = M0 (a_1 + ... + a_{m-1}) + (binary expansion of the residual)`
//! and then walks the coefficients in increasing order of value. A coefficient
//! below `a_m` is rewritten in full through the anchor's coverage table; a
//! coefficient above 1 at or beyond `a_m` has its even part rewritten through
//! the interval's power-of-two multiset. Every rewrite moves weight to strictly
//! larger elements and preserves the total, and the interval bounds keep all
//! of it below `C a_m`.

mod nondividing;
mod trace;
mod verify;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::anchor::{canonical_representation, derive_chain, preferred_anchor, AnchorChain};
use crate::chain::{chain_admissible, MultisetChain};
use crate::error::{Error, Result};
use crate::ratio::Rational;
use crate::smooth::{membership_u64, Params, SmoothIter};

pub use nondividing::nondividing_decompose;
pub use trace::{Increment, StepTrace, Trace, TraceFailure};
pub use verify::{verify, VerifyReport};

/// A rewrite of one coefficient: multiply the current element by `2^dx p^dy`,
/// `mult` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Shift {
    dx: u32,
    dy: u32,
    mult: u64,
    factor: u64,
}

/// Everything the driver needs from a chain, precomputed.
#[derive(Clone, Debug)]
pub struct ChainPlan {
    p: u64,
    m0: u64,
    /// Representation of `m0 + t`, for `t = 0..=|S'_1|`.
    first: Vec<Vec<Shift>>,
    /// `later[k - 2][e / 2]`: representation of the even value `e` in interval `k`.
    later: Vec<Vec<Vec<Shift>>>,
    /// Coefficient bound of interval `k` at index `k - 1`.
    bounds: Vec<u64>,
    /// Exponents of `P_1, ..., P_K`.
    prods: Vec<(u32, u32)>,
    constant: BigUint,
    chain: MultisetChain,
}

fn shifts(params: &Params, rep: &[u64]) -> Vec<Shift> {
    let mut out: Vec<Shift> = Vec::new();
    for &v in rep {
        match out.last_mut() {
            Some(s) if s.factor == v => s.mult += 1,
            _ => {
                let (dx, dy) = membership_u64(v, params).expect("chain elements are smooth");
                out.push(Shift {
                    dx,
                    dy,
                    mult: 1,
                    factor: v,
                });
            }
        }
    }
    out
}

impl ChainPlan {
    pub fn new(params: &Params, chain: &MultisetChain) -> Result<Self> {
        let constant = chain_admissible(chain, params)?;
        let first_set = &chain.sets[0];
        let first = (chain.m0..=chain.m0 + first_set.len() as u64)
            .map(|t| {
                canonical_representation(first_set, t)
                    .map(|rep| shifts(params, &rep))
                    .ok_or(Error::Coverage { target: t })
            })
            .collect::<Result<Vec<_>>>()?;
        let later = chain
            .sets
            .windows(2)
            .map(|pair| {
                let bound = pair[0].len() as u64;
                (0..=bound / 2)
                    .map(|half| {
                        let rep = canonical_representation(&pair[1], 2 * half)
                            .expect("admissible chains cover every even value");
                        shifts(params, &rep)
                    })
                    .collect()
            })
            .collect();

        let mut bounds = vec![chain.m0 + first_set.len() as u64];
        bounds.extend(chain.sets.iter().map(|s| s.len() as u64));
        let mut prods = vec![(0, 0)];
        for s in &chain.sets {
            let (x, y) = membership_u64(*s.last().expect("nonempty"), params).expect("smooth");
            let &(px, py) = prods.last().expect("nonempty");
            prods.push((px + x, py + y));
        }
        Ok(Self {
            p: params.p(),
            m0: chain.m0,
            first,
            later,
            bounds,
            prods,
            constant,
            chain: chain.clone(),
        })
    }

    pub fn from_anchor_chain(params: &Params, chain: &AnchorChain) -> Result<Self> {
        let plan = Self::new(params, &chain.to_multiset_chain())?;
        if plan.constant != chain.c {
            return Err(Error::Invariant(format!(
                "multiset form of the anchor chain has constant {} instead of {}",
                plan.constant, chain.c
            )));
        }
        Ok(plan)
    }

    /// Number of intervals `K`.
    pub fn intervals(&self) -> usize {
        self.bounds.len()
    }

    /// Per-interval coefficient bounds: `M0 + |S'_1|`, then `|S'_{k-1}|`.
    pub fn bounds(&self) -> &[u64] {
        &self.bounds
    }

    pub fn constant(&self) -> &BigUint {
        &self.constant
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m0(&self) -> u64 {
        self.m0
    }

    pub fn chain(&self) -> &MultisetChain {
        &self.chain
    }
}

/// Elements of `A_p` up to `C a_m` for the largest `n` served, with the
/// running sums `M0 (a_1 + ... + a_i)`.
#[derive(Debug)]
struct SmoothTable {
    values: Vec<BigUint>,
    exps: Vec<(u32, u32)>,
    grid: Vec<Vec<usize>>,
    weighted_prefix: Vec<BigUint>,
}

impl SmoothTable {
    fn build(params: &Params, plan: &ChainPlan, n_max: &BigUint) -> Self {
        let mut table = Self {
            values: Vec::new(),
            exps: Vec::new(),
            grid: Vec::new(),
            weighted_prefix: Vec::new(),
        };
        let m0 = BigUint::from(plan.m0);
        let mut iter = SmoothIter::new(params);
        let mut sum = BigUint::zero();
        let mut limit: Option<BigUint> = None;
        for e in iter.by_ref() {
            if let Some(limit) = &limit {
                if &e.value > limit {
                    break;
                }
            }
            sum += &e.value;
            let weighted = &sum * &m0;
            if limit.is_none() && &weighted > n_max {
                limit = Some(&e.value * &plan.constant);
            }
            table.push(e.value, e.x, e.y, weighted);
        }
        table
    }

    fn push(&mut self, value: BigUint, x: u32, y: u32, weighted: BigUint) {
        let idx = self.values.len();
        if self.grid.len() <= y as usize {
            self.grid.resize(y as usize + 1, Vec::new());
        }
        debug_assert_eq!(self.grid[y as usize].len(), x as usize);
        self.grid[y as usize].push(idx);
        self.values.push(value);
        self.exps.push((x, y));
        self.weighted_prefix.push(weighted);
    }

    fn index(&self, x: u32, y: u32) -> Option<usize> {
        self.grid.get(y as usize)?.get(x as usize).copied()
    }

    /// Index of `a_m`: the first element whose weighted prefix exceeds `n`.
    fn m_index(&self, n: &BigUint) -> Option<usize> {
        let i = self.weighted_prefix.partition_point(|w| w <= n);
        (i < self.values.len()).then_some(i)
    }

    /// Indices of `P_k a_m` for every `k`, when all lie in the table.
    fn boundaries(&self, plan: &ChainPlan, m_idx: usize) -> Option<Vec<usize>> {
        let (xm, ym) = self.exps[m_idx];
        plan.prods
            .iter()
            .map(|&(x, y)| self.index(xm + x, ym + y))
            .collect()
    }
}

/// Drives the transformation for a fixed chain.
#[derive(Clone, Debug)]
pub struct Decomposer {
    params: Params,
    plan: Arc<ChainPlan>,
    table: Arc<SmoothTable>,
}

impl Decomposer {
    pub fn new(params: &Params, chain: &MultisetChain) -> Result<Self> {
        Ok(Self::from_plan(params, ChainPlan::new(params, chain)?))
    }

    pub fn from_anchor_chain(params: &Params, chain: &AnchorChain) -> Result<Self> {
        Ok(Self::from_plan(
            params,
            ChainPlan::from_anchor_chain(params, chain)?,
        ))
    }

    /// Uses the special anchor when one exists, otherwise the default anchor.
    pub fn preferred(params: &Params) -> Self {
        let chain =
            derive_chain(&preferred_anchor(params), params).expect("preferred anchor is verified");
        Self::from_anchor_chain(params, &chain).expect("derived chains are admissible")
    }

    fn from_plan(params: &Params, plan: ChainPlan) -> Self {
        let table = SmoothTable::build(params, &plan, &BigUint::from(1u32));
        Self {
            params: *params,
            plan: Arc::new(plan),
            table: Arc::new(table),
        }
    }

    /// Precomputes the element table for every `n <= n_max`.
    pub fn with_capacity(mut self, n_max: &BigUint) -> Self {
        self.table = Arc::new(SmoothTable::build(&self.params, &self.plan, n_max));
        self
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn plan(&self) -> &ChainPlan {
        &self.plan
    }

    pub fn constant(&self) -> &BigUint {
        &self.plan.constant
    }

    /// The representation before any step.
    pub fn initial_state(&self, n: &BigUint) -> Result<TransformState> {
        if n.is_zero() {
            return Err(Error::NonPositive);
        }
        let (table, m_idx, bounds) = match self.locate(&self.table, n) {
            Some((m, b)) => (Arc::clone(&self.table), m, b),
            None => {
                let table = Arc::new(SmoothTable::build(&self.params, &self.plan, n));
                let (m, b) = self
                    .locate(&table, n)
                    .ok_or_else(|| Error::Invariant("element table does not reach C a_m".into()))?;
                (table, m, b)
            }
        };
        TransformState::new(n.clone(), Arc::clone(&self.plan), table, m_idx, bounds)
    }

    fn locate(&self, table: &SmoothTable, n: &BigUint) -> Option<(usize, Vec<usize>)> {
        let m_idx = table.m_index(n)?;
        Some((m_idx, table.boundaries(&self.plan, m_idx)?))
    }

    pub fn decompose(&self, n: &BigUint) -> Result<Decomposition> {
        let mut state = self.initial_state(n)?;
        while let Some(i) = state.next_due() {
            state.apply(i, |_, _| {})?;
        }
        state.into_decomposition()
    }
}

/// One step of the transformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub value: BigUint,
    pub interval: usize,
    pub before: u64,
    pub after: u64,
    /// Multipliers used, repeated by multiplicity.
    pub representation: Vec<u64>,
    /// `(target value, amount)` pairs.
    pub increments: Vec<(BigUint, u64)>,
}

/// Live coefficients `c_i` for one `n`.
#[derive(Clone, Debug)]
pub struct TransformState {
    n: BigUint,
    plan: Arc<ChainPlan>,
    table: Arc<SmoothTable>,
    m_idx: usize,
    /// Index of `P_k a_m` for `k = 1..=K`; coefficients live below the last.
    bounds: Vec<usize>,
    coeffs: Vec<u64>,
    cursor: usize,
}

impl TransformState {
    fn new(
        n: BigUint,
        plan: Arc<ChainPlan>,
        table: Arc<SmoothTable>,
        m_idx: usize,
        bounds: Vec<usize>,
    ) -> Result<Self> {
        let end = *bounds.last().expect("K >= 1");
        let mut coeffs = vec![0u64; end];
        coeffs[..m_idx].fill(plan.m0);
        let mut residual = n.clone();
        if m_idx > 0 {
            residual -= &table.weighted_prefix[m_idx - 1];
        }
        // The residual is below M0 a_m <= P_2 a_m, so its bits stay in I_1 and I_2.
        let limit = bounds.get(1).copied().unwrap_or(end);
        for bit in (0..residual.bits()).filter(|&b| residual.bit(b)) {
            let idx = u32::try_from(bit)
                .ok()
                .and_then(|b| table.index(b, 0))
                .filter(|&i| i < limit)
                .ok_or_else(|| {
                    Error::Invariant(format!("residual bit 2^{bit} lies beyond P_2 a_m"))
                })?;
            coeffs[idx] += 1;
        }
        Ok(Self {
            n,
            plan,
            table,
            m_idx,
            bounds,
            coeffs,
            cursor: 0,
        })
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    /// The index `m` (1-based) of `a_m`.
    pub fn m(&self) -> usize {
        self.m_idx + 1
    }

    pub fn a_m(&self) -> &BigUint {
        &self.table.values[self.m_idx]
    }

    /// `P_k a_m` for `k = 1..=K`.
    pub fn boundaries(&self) -> Vec<BigUint> {
        self.bounds
            .iter()
            .map(|&i| self.table.values[i].clone())
            .collect()
    }

    pub fn coefficient(&self, value: &BigUint) -> u64 {
        self.table.values[..self.coeffs.len()]
            .binary_search(value)
            .map(|i| self.coeffs[i])
            .unwrap_or(0)
    }

    /// Nonzero coefficients keyed by value.
    pub fn coefficients(&self) -> BTreeMap<BigUint, u64> {
        self.nonzero()
            .map(|(i, c)| (self.table.values[i].clone(), c))
            .collect()
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.coeffs
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, c)| c != 0)
    }

    /// `sum c_i a_i`.
    pub fn weighted_sum(&self) -> BigUint {
        self.nonzero().map(|(i, c)| &self.table.values[i] * c).sum()
    }

    /// 1-based interval of element index `i`: `I_1 = [1, a_m)` and
    /// `I_k = [P_{k-1} a_m, P_k a_m)`.
    fn interval(&self, i: usize) -> usize {
        self.bounds.partition_point(|&b| b <= i) + 1
    }

    /// Largest coefficient in each interval `I_1..I_K`.
    pub fn interval_maxima(&self) -> Vec<u64> {
        let mut start = 0;
        self.bounds
            .iter()
            .map(|&end| {
                let max = self.coeffs[start..end].iter().copied().max().unwrap_or(0);
                start = end;
                max
            })
            .collect()
    }

    fn next_due(&mut self) -> Option<usize> {
        while self.cursor < self.coeffs.len() {
            let c = self.coeffs[self.cursor];
            if c > 1 || (c == 1 && self.cursor < self.m_idx) {
                return Some(self.cursor);
            }
            self.cursor += 1;
        }
        None
    }

    /// Value processed by the next step, if any coefficient is still out of range.
    pub fn due_value(&mut self) -> Option<BigUint> {
        self.next_due().map(|i| self.table.values[i].clone())
    }

    pub fn is_terminal(&mut self) -> bool {
        self.next_due().is_none()
    }

    /// Rewrites the coefficient at index `i`, reporting each increment.
    /// Returns the interval, the old coefficient and the amount removed.
    fn apply(&mut self, i: usize, mut sink: impl FnMut(usize, u64)) -> Result<(usize, u64, u64)> {
        let plan = Arc::clone(&self.plan);
        let c = self.coeffs[i];
        let k = self.interval(i);
        let (reps, removed): (&[Shift], u64) = if k == 1 {
            let offset = c
                .checked_sub(plan.m0)
                .filter(|&o| o < plan.first.len() as u64)
                .ok_or_else(|| {
                    Error::Invariant(format!(
                        "coefficient {c} of {} is outside [M0, M_1] = [{}, {}]",
                        self.table.values[i], plan.m0, plan.bounds[0]
                    ))
                })?;
            (&plan.first[offset as usize], c)
        } else {
            let even = c & !1;
            let table = plan
                .later
                .get(k - 2)
                .and_then(|t| t.get(even as usize / 2))
                .ok_or_else(|| {
                    Error::Invariant(format!(
                        "coefficient {c} of {} exceeds the bound {} of interval {k}",
                        self.table.values[i],
                        plan.bounds.get(k - 1).copied().unwrap_or(1)
                    ))
                })?;
            (table, even)
        };
        let (x, y) = self.table.exps[i];
        self.coeffs[i] = c - removed;
        for s in reps {
            let target = self
                .table
                .index(x + s.dx, y + s.dy)
                .filter(|&t| t < self.coeffs.len())
                .ok_or_else(|| {
                    Error::Invariant(format!(
                        "rewriting {} by {} escapes C a_m",
                        self.table.values[i], s.factor
                    ))
                })?;
            self.coeffs[target] += s.mult;
            sink(target, s.mult);
        }
        Ok((k, c, removed))
    }

    fn shifts_for(&self, k: usize, before: u64, removed: u64) -> &[Shift] {
        if k == 1 {
            &self.plan.first[(before - self.plan.m0) as usize]
        } else {
            &self.plan.later[k - 2][removed as usize / 2]
        }
    }

    /// Performs the next due step; `None` once every coefficient is final.
    pub fn step(&mut self) -> Result<Option<StepRecord>> {
        let Some(i) = self.next_due() else {
            return Ok(None);
        };
        let mut increments = Vec::new();
        let (interval, before, removed) = self.apply(i, |t, by| increments.push((t, by)))?;
        let representation = self
            .shifts_for(interval, before, removed)
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.factor, s.mult as usize))
            .collect();
        Ok(Some(StepRecord {
            value: self.table.values[i].clone(),
            interval,
            before,
            after: self.coeffs[i],
            representation,
            increments: increments
                .into_iter()
                .map(|(t, by)| (self.table.values[t].clone(), by))
                .collect(),
        }))
    }

    /// Support of a finished state.
    pub fn into_decomposition(mut self) -> Result<Decomposition> {
        if let Some(i) = self.next_due() {
            return Err(Error::Invariant(format!(
                "coefficient {} of {} is not final",
                self.coeffs[i], self.table.values[i]
            )));
        }
        if let Some(i) = (0..self.m_idx).find(|&i| self.coeffs[i] != 0) {
            return Err(Error::Invariant(format!(
                "{} below a_m survived",
                self.table.values[i]
            )));
        }
        let terms = self
            .nonzero()
            .map(|(i, _)| self.table.values[i].clone())
            .collect();
        Ok(Decomposition::new(self.n, terms))
    }
}

/// Distinct elements of `A_p` summing to `n`, in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub n: BigUint,
    pub terms: Vec<BigUint>,
    /// `max / min`.
    pub ratio: Rational,
}

impl Decomposition {
    /// `terms` must be nonempty and sorted.
    pub fn new(n: BigUint, terms: Vec<BigUint>) -> Self {
        let ratio = Rational::new(
            terms.last().expect("nonempty").clone(),
            terms.first().expect("nonempty").clone(),
        );
        Self { n, terms, ratio }
    }
}

/// Decomposes `n` with `chain`, or with the preferred derived chain.
pub fn decompose(
    n: &BigUint,
    params: &Params,
    chain: Option<&MultisetChain>,
) -> Result<Decomposition> {
    let decomposer = match chain {
        Some(c) => Decomposer::new(params, c)?,
        None => Decomposer::preferred(params),
    };
    decomposer.decompose(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anchor::default_anchor;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn p3() -> Params {
        Params::new(3).unwrap()
    }

    fn as_map(state: &TransformState) -> Vec<(u64, u64)> {
        state
            .coefficients()
            .into_iter()
            .map(|(v, c)| (v.to_u64().unwrap(), c))
            .collect()
    }

    fn terms(d: &Decomposition) -> Vec<u64> {
        d.terms.iter().map(|t| t.to_u64().unwrap()).collect()
    }

    /// Recomputes `m` and the residual expansion straight from the definition.
    fn initial_oracle(n: u64, p: u64, m0: u64) -> (usize, Vec<(u64, u64)>) {
        let els: Vec<u64> = crate::smooth::smooth_upto(&Params::new(p).unwrap(), &big(4 * n + 4))
            .iter()
            .map(|e| e.value.to_u64().unwrap())
            .collect();
        let mut m = 1;
        while m0 * els[..m].iter().sum::<u64>() <= n {
            m += 1;
        }
        let mut map = BTreeMap::new();
        for &a in &els[..m - 1] {
            *map.entry(a).or_insert(0) += m0;
        }
        let residual = n - m0 * els[..m - 1].iter().sum::<u64>();
        for b in 0..64 {
            if residual >> b & 1 == 1 {
                *map.entry(1 << b).or_insert(0) += 1;
            }
        }
        (m, map.into_iter().collect())
    }

    #[test]
    fn initial_state_examples() {
        let d = Decomposer::preferred(&p3());
        let s = d.initial_state(&big(10)).unwrap();
        assert_eq!((s.m(), s.a_m().clone()), (3, big(3)));
        assert_eq!(as_map(&s), vec![(1, 2), (2, 2), (4, 1)]);

        let s = d.initial_state(&big(1)).unwrap();
        assert_eq!(s.m(), 1);
        assert_eq!(as_map(&s), vec![(1, 1)]);

        let s = d.initial_state(&big(100)).unwrap();
        assert_eq!((s.m(), s.a_m().clone()), (9, big(16)));
        assert_eq!(
            as_map(&s),
            vec![
                (1, 2),
                (2, 3),
                (3, 2),
                (4, 2),
                (6, 2),
                (8, 3),
                (9, 2),
                (12, 2)
            ]
        );
        assert!(d.initial_state(&big(0)).is_err());
    }

    #[test]
    fn initial_state_matches_oracle() {
        for p in [3u64, 5, 7, 11, 19] {
            let prm = Params::new(p).unwrap();
            let d = Decomposer::preferred(&prm);
            for n in 1..600 {
                let s = d.initial_state(&big(n)).unwrap();
                let (m, map) = initial_oracle(n, p, d.plan().m0());
                assert_eq!(s.m(), m, "p={p} n={n}");
                assert_eq!(as_map(&s), map, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn first_steps_for_ten() {
        let d = Decomposer::preferred(&p3());
        let mut s = d.initial_state(&big(10)).unwrap();
        let r = s.step().unwrap().unwrap();
        assert_eq!(
            (r.value.clone(), r.representation.clone()),
            (big(1), vec![2])
        );
        assert_eq!(as_map(&s), vec![(2, 3), (4, 1)]);
        let r = s.step().unwrap().unwrap();
        assert_eq!(
            (r.value.clone(), r.representation.clone()),
            (big(2), vec![3])
        );
        assert_eq!(r.increments, vec![(big(6), 1)]);
        assert_eq!(as_map(&s), vec![(4, 1), (6, 1)]);
        assert!(s.step().unwrap().is_none());
        assert_eq!(terms(&s.into_decomposition().unwrap()), vec![4, 6]);
    }

    #[test]
    fn later_interval_step_removes_even_part() {
        // p = 19 default chain: interval 2 holds coefficients up to |S| = 6.
        let prm = Params::new(19).unwrap();
        let d = Decomposer::from_anchor_chain(
            &prm,
            &derive_chain(&default_anchor(&prm), &prm).unwrap(),
        )
        .unwrap();
        let mut s = d.initial_state(&big(1000)).unwrap();
        let mut saw_later = false;
        while let Some(r) = s.step().unwrap() {
            if r.interval >= 2 {
                saw_later = true;
                let even = r.before & !1;
                assert_eq!(r.after, r.before - even);
                assert_eq!(r.representation.iter().sum::<u64>(), even);
                assert!(r
                    .representation
                    .iter()
                    .all(|v| v.is_power_of_two() && *v >= 2));
            }
        }
        assert!(saw_later);
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(terms(&decompose(&big(1), &p3(), None).unwrap()), vec![1]);
        let d = decompose(&big(10), &p3(), None).unwrap();
        assert_eq!(terms(&d), vec![4, 6]);
        assert_eq!(d.ratio, Rational::new(big(3), big(2)));
    }

    #[test]
    fn p3_verifies_with_c6_up_to_20000() {
        let prm = p3();
        let d = Decomposer::preferred(&prm).with_capacity(&big(20_000));
        let c = Rational::from_integer(big(6));
        for n in 1..=20_000u64 {
            let dec = d.decompose(&big(n)).unwrap();
            assert!(verify(&big(n), &prm, &dec.terms, &c).passed(), "n={n}");
        }
    }

    #[test]
    fn table_grows_on_demand() {
        let d = Decomposer::preferred(&p3()).with_capacity(&big(50));
        let n = big(1) << 100u32;
        let dec = d.decompose(&n).unwrap();
        assert_eq!(dec.terms.iter().sum::<BigUint>(), n);
    }

    proptest! {
        #[test]
        fn decompose_sums_and_bounds_hold(n in 1u64..u64::MAX, k in 1u64..150) {
            let prm = Params::new(2 * k + 1).unwrap();
            let d = Decomposer::preferred(&prm);
            let dec = d.decompose(&big(n)).unwrap();
            let c = Rational::from_integer(d.constant().clone());
            prop_assert!(verify(&big(n), &prm, &dec.terms, &c).passed());
        }
    }
}
