//! Anchor sets and the constant chain `M_k`, `u_k`, `P_k`, `C_p`.
//!
//! An anchor set `S` is a multiset of elements of `A_p` (all at least 2) whose
//! sub-multiset sums cover the `|S| + 1` consecutive integers starting at `M0`.
//! Coefficients in the first interval are rewritten with these sums, so each
//! target gets one fixed, canonical representation.

use num_bigint::BigUint;
use num_traits::One;

use crate::chain::MultisetChain;
use crate::error::{Error, Result};
use crate::smooth::{f_value, floor_log2, membership_u64, Params};

/// Distinct values in decreasing order, with multiplicities.
pub(crate) fn grouped_desc(multiset: &[u64]) -> Vec<(u64, u32)> {
    let mut sorted = multiset.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut groups: Vec<(u64, u32)> = Vec::new();
    for v in sorted {
        match groups.last_mut() {
            Some((w, c)) if *w == v => *c += 1,
            _ => groups.push((v, 1)),
        }
    }
    groups
}

pub(crate) fn suffix_sums(groups: &[(u64, u32)]) -> Vec<u128> {
    let mut suffix = vec![0u128; groups.len() + 1];
    for i in (0..groups.len()).rev() {
        suffix[i] = suffix[i + 1] + groups[i].0 as u128 * groups[i].1 as u128;
    }
    suffix
}

struct Search<'a> {
    groups: &'a [(u64, u32)],
    suffix: &'a [u128],
    chosen: Vec<u64>,
    best: Option<Vec<u64>>,
}

impl Search<'_> {
    /// Largest-element-first backtracking with at most `slots` summands.
    fn run(&mut self, i: usize, remaining: u64, slots: usize) {
        if remaining == 0 {
            let mut candidate = self.chosen.clone();
            candidate.reverse();
            if self.best.as_ref().is_none_or(|b| candidate < *b) {
                self.best = Some(candidate);
            }
            return;
        }
        if i == self.groups.len() || slots == 0 || remaining as u128 > self.suffix[i] {
            return;
        }
        let (v, avail) = self.groups[i];
        if remaining as u128 > slots as u128 * v as u128 {
            return;
        }
        let max_take = (avail as u64).min(remaining / v).min(slots as u64) as usize;
        for take in (0..=max_take).rev() {
            self.chosen.extend(std::iter::repeat_n(v, take));
            self.run(i + 1, remaining - take as u64 * v, slots - take);
            self.chosen.truncate(self.chosen.len() - take);
        }
    }
}

/// Canonical sub-multiset of `multiset` summing to `target`, in increasing order.
///
/// Fewest summands wins; among those, the lexicographically smallest list.
pub fn canonical_representation(multiset: &[u64], target: u64) -> Option<Vec<u64>> {
    if target == 0 {
        return Some(Vec::new());
    }
    let groups = grouped_desc(multiset);
    let suffix = suffix_sums(&groups);
    if !is_subset_sum(&groups, &suffix, target) {
        return None;
    }
    for limit in 1..=multiset.len() {
        let mut search = Search {
            groups: &groups,
            suffix: &suffix,
            chosen: Vec::new(),
            best: None,
        };
        search.run(0, target, limit);
        if search.best.is_some() {
            return search.best;
        }
    }
    None
}

/// Whether some sub-multiset sums to `target`; stops at the first hit.
pub(crate) fn is_subset_sum(groups: &[(u64, u32)], suffix: &[u128], target: u64) -> bool {
    fn go(groups: &[(u64, u32)], suffix: &[u128], i: usize, remaining: u64) -> bool {
        if remaining == 0 {
            return true;
        }
        if i == groups.len() || remaining as u128 > suffix[i] {
            return false;
        }
        let (v, avail) = groups[i];
        let max_take = (avail as u64).min(remaining / v);
        (0..=max_take)
            .rev()
            .any(|take| go(groups, suffix, i + 1, remaining - take * v))
    }
    go(groups, suffix, 0, target)
}

/// True iff every integer in `[m0, m0 + |s|]` is a sub-multiset sum of `s`.
///
/// Repeated elements may be used as often as they occur.
pub fn verify_coverage(s: &[u64], m0: u64) -> bool {
    if s.is_empty() || s.iter().any(|&e| e < 2) {
        return false;
    }
    let groups = grouped_desc(s);
    let suffix = suffix_sums(&groups);
    (m0..=m0 + s.len() as u64).all(|t| is_subset_sum(&groups, &suffix, t))
}

/// A verified anchor multiset with its coverage table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorSet {
    p: u64,
    elements: Vec<u64>,
    m0: u64,
    coverage: Vec<Vec<u64>>,
}

impl AnchorSet {
    pub fn new(params: &Params, mut elements: Vec<u64>, m0: u64) -> Result<Self> {
        elements.sort_unstable();
        let Some(&max) = elements.last() else {
            return Err(Error::InvalidAnchor("empty set".into()));
        };
        if let Some(&bad) = elements
            .iter()
            .find(|&&e| e < 2 || membership_u64(e, params).is_none())
        {
            return Err(Error::InvalidAnchor(format!(
                "{bad} is not an element of A_{} greater than 1",
                params.p()
            )));
        }
        if elements.iter().all(|e| e % 2 == 0) {
            return Err(Error::InvalidAnchor("no odd element".into()));
        }
        if m0 == 0 || m0 > max {
            return Err(Error::InvalidAnchor(format!(
                "base {m0} must lie in [1, max S = {max}]"
            )));
        }
        let coverage = (m0..=m0 + elements.len() as u64)
            .map(|t| canonical_representation(&elements, t).ok_or(Error::Coverage { target: t }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            p: params.p(),
            elements,
            m0,
            coverage,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Elements in increasing order, repeated by multiplicity.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn m0(&self) -> u64 {
        self.m0
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max(&self) -> u64 {
        *self.elements.last().expect("anchor sets are nonempty")
    }

    /// Representation of `t`, for `t` in `[m0, m0 + |S|]`.
    pub fn representation(&self, t: u64) -> Option<&[u64]> {
        let offset = t.checked_sub(self.m0)?;
        self.coverage.get(offset as usize).map(Vec::as_slice)
    }

    /// `(t, representation)` for every covered target.
    pub fn coverage_table(&self) -> impl Iterator<Item = (u64, &[u64])> {
        self.coverage
            .iter()
            .enumerate()
            .map(move |(i, r)| (self.m0 + i as u64, r.as_slice()))
    }
}

/// `{p, 2, 4, ..., 2^ceil(log2 p)}` with `M0 = p`.
pub fn default_anchor(params: &Params) -> AnchorSet {
    let mut elements: Vec<u64> = (1..=params.ceil_log2_p()).map(|j| 1u64 << j).collect();
    elements.push(params.p());
    AnchorSet::new(params, elements, params.p()).expect("default anchor always covers [p, p + |S|]")
}

/// The three-element anchors available when `p - 1` or `p + 1` is a power of two.
///
/// `p - 1` is checked first: for `p = 3` both apply and `{2, 2, 3}` gives the
/// smaller constant.
pub fn special_anchor(params: &Params) -> Option<AnchorSet> {
    let p = params.p();
    let (elements, m0) = if (p - 1).is_power_of_two() {
        (vec![2, p - 1, p], p - 1)
    } else if (p + 1).is_power_of_two() {
        (vec![2, p, p + 1], p)
    } else {
        return None;
    };
    Some(
        AnchorSet::new(params, elements, m0)
            .expect("special anchors cover four consecutive integers"),
    )
}

/// Special anchor when one exists, otherwise the default one.
pub fn preferred_anchor(params: &Params) -> AnchorSet {
    special_anchor(params).unwrap_or_else(|| default_anchor(params))
}

/// An anchor set together with its derived interval constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorChain {
    pub anchor: AnchorSet,
    /// `M_1, ..., M_K`.
    pub m: Vec<u64>,
    /// `u_1, ..., u_K`.
    pub u: Vec<BigUint>,
    /// `P_1, ..., P_K`.
    pub prods: Vec<BigUint>,
    pub k: usize,
    pub c: BigUint,
}

impl AnchorChain {
    /// Powers of two used to rewrite coefficients in intervals `2..K`:
    /// `{2, 4, ..., 2^{M_{k+1}}}` for interval `k`.
    pub fn even_power_sets(&self) -> Vec<Vec<u64>> {
        (2..self.k)
            .map(|k| (1..=self.m[k] as u32).map(|j| 1u64 << j).collect())
            .collect()
    }

    pub fn to_multiset_chain(&self) -> MultisetChain {
        let mut sets = vec![self.anchor.elements().to_vec()];
        sets.extend(self.even_power_sets());
        MultisetChain::new(self.anchor.p(), self.anchor.m0(), sets)
    }
}

/// Derives `M_k`, `u_k`, `P_k` and `C_p = P_K` from an anchor set.
pub fn derive_chain(anchor: &AnchorSet, params: &Params) -> Result<AnchorChain> {
    if anchor.p() != params.p() {
        return Err(Error::InvalidAnchor(format!(
            "anchor built for p = {}, not {}",
            anchor.p(),
            params.p()
        )));
    }
    if !verify_coverage(anchor.elements(), anchor.m0()) {
        return Err(Error::Coverage {
            target: anchor.m0(),
        });
    }
    let size = anchor.len() as u64;
    let mut m = vec![anchor.m0() + size, size];
    while let Some(&last) = m.last().filter(|&&v| v > 1) {
        m.push(floor_log2(&BigUint::from(last)));
    }
    let k = m.len();

    let mut u = vec![BigUint::one(), BigUint::from(anchor.max())];
    u.extend(m[2..].iter().map(|&mk| BigUint::one() << mk));
    let prods: Vec<BigUint> = u
        .iter()
        .scan(BigUint::one(), |acc, uk| {
            *acc *= uk;
            Some(acc.clone())
        })
        .collect();
    let c = prods[k - 1].clone();
    Ok(AnchorChain {
        anchor: anchor.clone(),
        m,
        u,
        prods,
        k,
        c,
    })
}

/// `F(4p) / 2`, the constant available for every odd `p`.
pub fn general_bound(params: &Params) -> BigUint {
    let f = f_value(&(BigUint::from(params.p()) << 2u32));
    assert!(!f.bit(0), "F(4p) is even because f_0 = 4p");
    f >> 1u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::membership;

    fn params(p: u64) -> Params {
        Params::new(p).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// Exhaustive subset enumeration, independent of the backtracking search.
    fn brute_sums(s: &[u64]) -> std::collections::BTreeSet<u64> {
        (0u32..1 << s.len())
            .map(|mask| {
                s.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, v)| v)
                    .sum()
            })
            .collect()
    }

    #[test]
    fn default_anchor_instances() {
        let a = default_anchor(&params(19));
        assert_eq!(a.elements(), &[2, 4, 8, 16, 19, 32]);
        assert_eq!((a.m0(), a.len()), (19, 6));
        assert_eq!(default_anchor(&params(3)).elements(), &[2, 3, 4]);
        assert_eq!(default_anchor(&params(3)).m0(), 3);
        assert_eq!(default_anchor(&params(5)).elements(), &[2, 4, 5, 8]);
        assert_eq!(default_anchor(&params(5)).m0(), 5);
    }

    #[test]
    fn special_anchor_instances() {
        let a = special_anchor(&params(7)).unwrap();
        assert_eq!((a.elements(), a.m0()), (&[2, 7, 8][..], 7));
        let a = special_anchor(&params(3)).unwrap();
        assert_eq!((a.elements(), a.m0()), (&[2, 2, 3][..], 2));
        let a = special_anchor(&params(5)).unwrap();
        assert_eq!((a.elements(), a.m0()), (&[2, 4, 5][..], 4));
        assert!(special_anchor(&params(11)).is_none());
    }

    #[test]
    fn coverage_examples() {
        assert!(verify_coverage(&[2, 4, 16, 19], 18));
        assert!(verify_coverage(&[2, 2, 3], 2));
        assert!(!verify_coverage(&[2, 4], 3));
        assert!(!verify_coverage(&[], 3));
        assert!(!verify_coverage(&[1, 2], 1));
    }

    #[test]
    fn canonical_representations_for_p19_example() {
        let s = [2, 4, 16, 19];
        let got: Vec<_> = (18..=22)
            .map(|t| canonical_representation(&s, t).unwrap())
            .collect();
        assert_eq!(
            got,
            vec![
                vec![2, 16],
                vec![19],
                vec![4, 16],
                vec![2, 19],
                vec![2, 4, 16]
            ]
        );
    }

    #[test]
    fn canonical_prefers_fewer_then_lexicographically_smaller() {
        // {6} beats {2, 4}; for 10, {2, 8} sorts before {4, 6}.
        assert_eq!(canonical_representation(&[2, 4, 6], 6), Some(vec![6]));
        assert_eq!(
            canonical_representation(&[2, 4, 6, 8], 10),
            Some(vec![2, 8])
        );
        assert_eq!(canonical_representation(&[2, 2, 3], 4), Some(vec![2, 2]));
        assert_eq!(canonical_representation(&[2, 2, 3], 8), None);
    }

    #[test]
    fn anchor_rejects_bad_input() {
        let p3 = params(3);
        assert!(matches!(
            AnchorSet::new(&p3, vec![2, 4], 2),
            Err(Error::InvalidAnchor(_))
        ));
        assert!(matches!(
            AnchorSet::new(&p3, vec![1, 3], 1),
            Err(Error::InvalidAnchor(_))
        ));
        assert!(matches!(
            AnchorSet::new(&p3, vec![5, 2], 2),
            Err(Error::InvalidAnchor(_))
        ));
        assert_eq!(
            AnchorSet::new(&p3, vec![2, 3, 8], 2),
            Err(Error::Coverage { target: 4 })
        );
    }

    #[test]
    fn derive_chain_examples() {
        let p3 = params(3);
        let c = derive_chain(&special_anchor(&p3).unwrap(), &p3).unwrap();
        assert_eq!(c.m, vec![5, 3, 1]);
        assert_eq!(c.k, 3);
        assert_eq!(c.u, vec![big(1), big(3), big(2)]);
        assert_eq!(c.c, big(6));

        let p7 = params(7);
        let c = derive_chain(&special_anchor(&p7).unwrap(), &p7).unwrap();
        assert_eq!(&c.m[1..], &[3, 1]);
        assert_eq!(c.u, vec![big(1), big(8), big(2)]);
        assert_eq!(c.c, big(16));

        let p19 = params(19);
        let c = derive_chain(&default_anchor(&p19), &p19).unwrap();
        assert_eq!(c.m, vec![25, 6, 2, 1]);
        assert_eq!(c.k, 4);
        assert_eq!(c.u, vec![big(1), big(32), big(4), big(2)]);
        assert_eq!(c.prods, vec![big(1), big(32), big(128), big(256)]);
        assert_eq!(c.c, big(256));
        assert!(c.c <= general_bound(&p19));
    }

    #[test]
    fn derive_chain_rejects_foreign_anchor() {
        let a = default_anchor(&params(5));
        assert!(derive_chain(&a, &params(7)).is_err());
    }

    #[test]
    fn general_bound_examples() {
        assert_eq!(general_bound(&params(3)), big(18));
        assert_eq!(general_bound(&params(5)), big(80));
        assert_eq!(general_bound(&params(19)), big(456));
    }

    #[test]
    fn default_anchor_satisfies_all_four_properties() {
        for p in (3..=301).step_by(2) {
            let prm = params(p);
            let a = default_anchor(&prm);
            let size = a.len() as u64;
            let ceil = prm.ceil_log2_p();
            // Every even power of two up to |S| is present.
            for j in 1..64 {
                if 1u64 << j <= size {
                    assert!(a.elements().contains(&(1 << j)), "p={p}");
                }
            }
            // Coverage, checked against exhaustive enumeration when small enough.
            let sums = if a.len() <= 16 {
                Some(brute_sums(a.elements()))
            } else {
                None
            };
            for t in a.m0()..=a.m0() + size {
                if let Some(s) = &sums {
                    assert!(s.contains(&t), "p={p} t={t}");
                }
                let rep = a.representation(t).unwrap();
                assert_eq!(rep.iter().sum::<u64>(), t);
            }
            assert!(a.m0() <= p);
            assert!(size <= 1 + ceil as u64);
            assert!(p <= a.max() && a.max() <= 1 << ceil);
            for &e in a.elements() {
                assert!(membership(&big(e), &prm).is_some());
            }
        }
    }

    #[test]
    fn constants_respect_general_bound_and_special_values() {
        for p in (3..=301).step_by(2) {
            let prm = params(p);
            let bound = general_bound(&prm);
            let c = derive_chain(&default_anchor(&prm), &prm).unwrap().c;
            assert!(c <= bound, "p={p}: {c} > {bound}");
            if let Some(s) = special_anchor(&prm) {
                let c = derive_chain(&s, &prm).unwrap().c;
                if (p - 1).is_power_of_two() {
                    assert_eq!(c, big(2 * p));
                } else {
                    assert_eq!(c, big(2 * (p + 1)));
                }
            }
        }
    }

    #[test]
    fn chain_u_values_are_smooth() {
        for p in (3..=101).step_by(2) {
            let prm = params(p);
            let chain = derive_chain(&preferred_anchor(&prm), &prm).unwrap();
            for u in &chain.u {
                assert!(membership(u, &prm).is_some());
            }
            assert_eq!(*chain.m.last().unwrap(), 1);
        }
    }
}
