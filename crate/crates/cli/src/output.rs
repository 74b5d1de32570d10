use num_bigint::BigUint;
use serde::Serialize;
use smoothsum_core::decompose::StepTrace;
use smoothsum_core::{approx, AnchorChain, Decomposition, Rational, Trace, VerifyReport};

fn strings(values: &[BigUint]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

#[derive(Serialize)]
pub struct RatioDoc {
    pub num: String,
    pub den: String,
    pub approx: f64,
}

impl From<&Rational> for RatioDoc {
    fn from(r: &Rational) -> Self {
        Self {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            approx: approx(r),
        }
    }
}

#[derive(Serialize)]
pub struct ConstantsDoc {
    pub p: u64,
    pub anchor: &'static str,
    #[serde(rename = "S")]
    pub s: Vec<u64>,
    #[serde(rename = "M0")]
    pub m0: u64,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "M")]
    pub m: Vec<u64>,
    pub u: Vec<String>,
    #[serde(rename = "P")]
    pub prods: Vec<String>,
    #[serde(rename = "C_p")]
    pub c_p: String,
    #[serde(rename = "F(4p)/2")]
    pub general_bound: String,
}

impl ConstantsDoc {
    pub fn new(chain: &AnchorChain, anchor: &'static str, general_bound: &BigUint) -> Self {
        Self {
            p: chain.anchor.p(),
            anchor,
            s: chain.anchor.elements().to_vec(),
            m0: chain.anchor.m0(),
            k: chain.k,
            m: chain.m.clone(),
            u: strings(&chain.u),
            prods: strings(&chain.prods),
            c_p: chain.c.to_string(),
            general_bound: general_bound.to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct DecompositionDoc {
    pub n: String,
    pub p: u64,
    #[serde(rename = "C_p")]
    pub c_p: String,
    pub terms: Vec<String>,
    pub ratio: RatioDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceDoc>,
}

impl DecompositionDoc {
    pub fn new(d: &Decomposition, p: u64, c_p: &BigUint) -> Self {
        Self {
            n: d.n.to_string(),
            p,
            c_p: c_p.to_string(),
            terms: strings(&d.terms),
            ratio: RatioDoc::from(&d.ratio),
            trace: None,
        }
    }
}

#[derive(Serialize)]
pub struct TraceDoc {
    pub m: usize,
    pub a_m: String,
    pub boundaries: Vec<String>,
    pub bounds: Vec<u64>,
    pub initial_max: Vec<u64>,
    pub steps: Vec<StepTrace>,
}

impl From<Trace> for TraceDoc {
    fn from(t: Trace) -> Self {
        Self {
            m: t.m,
            a_m: t.a_m.to_string(),
            boundaries: strings(&t.boundaries),
            bounds: t.bounds,
            initial_max: t.initial_max,
            steps: t.steps,
        }
    }
}

#[derive(Serialize)]
pub struct VerifyDoc {
    pub passed: bool,
    #[serde(flatten)]
    pub report: VerifyReport,
    pub failures: Vec<&'static str>,
}

impl From<VerifyReport> for VerifyDoc {
    fn from(report: VerifyReport) -> Self {
        Self {
            passed: report.passed(),
            report,
            failures: report.failures(),
        }
    }
}

#[derive(Serialize)]
pub struct TermsDoc {
    pub n: String,
    pub terms: Vec<String>,
}

impl TermsDoc {
    pub fn new(n: &BigUint, terms: &[BigUint]) -> Self {
        Self {
            n: n.to_string(),
            terms: strings(terms),
        }
    }
}

#[derive(Serialize)]
pub struct MinRatioDoc {
    pub n: u64,
    pub p: u64,
    pub cap: String,
    pub ratio: Option<RatioDoc>,
    pub terms: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct ChainCheckDoc {
    pub admissible: bool,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
}

#[derive(Serialize)]
pub struct ChainSearchDoc {
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "C_over_p")]
    pub c_over_p: RatioDoc,
    pub chain: smoothsum_core::MultisetChain,
}
