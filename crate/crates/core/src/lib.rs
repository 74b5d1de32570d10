//! Decompositions of positive integers into sums of distinct numbers `2^x p^y`
//! whose largest and smallest terms differ by a bounded factor.
//!
//! * [`smooth`] enumerates `A_p = {2^x p^y}` and counts it in windows.
//! * [`anchor`] builds anchor sets and the chain constants `C_p` derived from them.
//! * [`chain`] checks general multiset chains and searches for better ones.
//! * [`decompose`] runs the transformation and verifies its output.
//! * [`census`] measures which `n` admit a decomposition under a given cap.

pub mod anchor;
pub mod census;
pub mod chain;
pub mod decompose;
pub mod error;
pub mod ratio;
pub mod smooth;

pub use anchor::{
    canonical_representation, default_anchor, derive_chain, general_bound, preferred_anchor,
    special_anchor, verify_coverage, AnchorChain, AnchorSet,
};
pub use census::{
    census, census_with_budget, density_experiment, min_ratio, CensusReport, CensusWindow,
    DensityFit, DensityWindow, MinRatioResult,
};
pub use chain::{chain_admissible, chain_search, ChainViolation, MultisetChain};
pub use decompose::{
    decompose, nondividing_decompose, verify, ChainPlan, Decomposer, Decomposition, StepRecord,
    Trace, TraceFailure, TransformState, VerifyReport,
};
pub use error::{Error, Result};
pub use ratio::{approx, format_rational, parse_rational, RatioCap, Rational};
pub use smooth::{membership, smooth_upto, window_count, Params, SmoothElement, SmoothIter};
