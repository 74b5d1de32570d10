use num_bigint::BigUint;
use serde::Serialize;

use super::{Decomposer, Decomposition, TransformState};

/// Weight moved onto one element by a step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Increment {
    pub value: String,
    pub interval: usize,
    pub by: u64,
}

/// One logged step, with the interval maxima after it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepTrace {
    pub step: usize,
    pub value: String,
    pub interval: usize,
    pub before: u64,
    pub after: u64,
    pub representation: Vec<u64>,
    pub increments: Vec<Increment>,
    pub interval_max: Vec<u64>,
}

/// A fully checked run.
#[derive(Clone, Debug)]
pub struct Trace {
    pub m: usize,
    pub a_m: BigUint,
    /// `P_k a_m` for `k = 1..=K`.
    pub boundaries: Vec<BigUint>,
    /// Coefficient bound per interval.
    pub bounds: Vec<u64>,
    pub initial_max: Vec<u64>,
    pub steps: Vec<StepTrace>,
    pub decomposition: Decomposition,
}

impl Trace {
    /// One compact JSON object per step.
    pub fn json_lines(&self) -> String {
        self.steps
            .iter()
            .map(|s| serde_json::to_string(s).expect("steps serialize") + "\n")
            .collect()
    }
}

/// The first violated check, with the steps logged up to and including it.
#[derive(Clone, Debug, thiserror::Error)]
#[error("{reason}")]
pub struct TraceFailure {
    pub reason: String,
    pub log: Vec<StepTrace>,
}

impl TransformState {
    fn check_invariants(&self) -> Result<Vec<u64>, String> {
        let sum = self.weighted_sum();
        if sum != self.n {
            return Err(format!("weighted sum {sum} differs from n = {}", self.n));
        }
        let maxima = self.interval_maxima();
        for (k, (&max, &bound)) in maxima.iter().zip(self.plan.bounds()).enumerate() {
            if max > bound {
                return Err(format!(
                    "interval {} holds coefficient {max} above its bound {bound}",
                    k + 1
                ));
            }
        }
        Ok(maxima)
    }
}

impl Decomposer {
    /// Runs the transformation, checking conservation, interval bounds and
    /// lookback after every step.
    pub fn trace(&self, n: &BigUint) -> Result<Trace, TraceFailure> {
        let mut log = Vec::new();
        let fail = |reason: String, log: &mut Vec<StepTrace>| TraceFailure {
            reason,
            log: std::mem::take(log),
        };
        let mut state = self
            .initial_state(n)
            .map_err(|e| fail(e.to_string(), &mut log))?;
        let initial_max = state.check_invariants().map_err(|r| fail(r, &mut log))?;
        let k_total = state.bounds.len();
        // Steps never reach P_{K-1} a_m: from there on every coefficient is 0 or 1.
        let step_limit = state.bounds[k_total.saturating_sub(2)];

        while let Some(i) = state.next_due() {
            let mut targets = Vec::new();
            let applied = state.apply(i, |t, by| targets.push((t, by)));
            let (interval, before, removed) = applied.map_err(|e| fail(e.to_string(), &mut log))?;
            let increments: Vec<Increment> = targets
                .iter()
                .map(|&(t, by)| Increment {
                    value: state.table.values[t].to_string(),
                    interval: state.interval(t),
                    by,
                })
                .collect();
            let entry = StepTrace {
                step: log.len(),
                value: state.table.values[i].to_string(),
                interval,
                before,
                after: state.coeffs[i],
                representation: state
                    .shifts_for(interval, before, removed)
                    .iter()
                    .flat_map(|s| std::iter::repeat_n(s.factor, s.mult as usize))
                    .collect(),
                interval_max: state.interval_maxima(),
                increments,
            };
            let lookback = entry
                .increments
                .iter()
                .find(|inc| inc.interval != interval && inc.interval != interval + 1)
                .map(|inc| {
                    format!(
                        "step at {} in interval {interval} moved weight into interval {}",
                        entry.value, inc.interval
                    )
                });
            log.push(entry);
            if i >= step_limit {
                let reason = format!("step at {} is not below P_(K-1) a_m", state.table.values[i]);
                return Err(fail(reason, &mut log));
            }
            if let Some(reason) = lookback {
                return Err(fail(reason, &mut log));
            }
            state.check_invariants().map_err(|r| fail(r, &mut log))?;
        }

        let m = state.m();
        let a_m = state.a_m().clone();
        let boundaries = state.boundaries();
        let decomposition = state
            .into_decomposition()
            .map_err(|e| fail(e.to_string(), &mut log))?;
        let upper = &a_m * self.constant();
        let in_range = decomposition.terms.first().is_some_and(|t| *t >= a_m)
            && decomposition.terms.last().is_some_and(|t| *t < upper);
        if !in_range {
            return Err(fail(
                format!("support leaves [a_m, C a_m) = [{a_m}, {upper})"),
                &mut log,
            ));
        }
        Ok(Trace {
            m,
            a_m,
            boundaries,
            bounds: self.plan.bounds().to_vec(),
            initial_max,
            steps: log,
            decomposition,
        })
    }
}
