//! `smoothsum`: decompositions into distinct `2^x p^y` with bounded ratio.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use smoothsum_core::census::{self, CensusReport};
use smoothsum_core::{
    chain_admissible, chain_search, default_anchor, derive_chain, general_bound,
    nondividing_decompose, parse_rational, special_anchor, verify, Decomposer, Error,
    MultisetChain, Params, RatioCap, Rational,
};

use output::*;

#[derive(Parser)]
#[command(
    name = "smoothsum",
    version,
    about = "Sums of distinct 2^x p^y with bounded max/min ratio"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnchorKind {
    /// `{2, p-1, p}` or `{2, p, p+1}` when available, else the default set.
    Preferred,
    /// `{p, 2, 4, ..., 2^ceil(log2 p)}`.
    Default,
    Special,
}

#[derive(Subcommand)]
enum Command {
    /// Print the anchor set and the constants M_k, u_k, P_k, C_p.
    Constants {
        #[arg(short)]
        p: u64,
        #[arg(long, value_enum, default_value = "preferred")]
        anchor: AnchorKind,
    },
    /// Decompose n.
    Decompose {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        n: String,
        /// Chain document to use instead of the derived chain.
        #[arg(long)]
        chain: Option<PathBuf>,
        /// Include the checked step log.
        #[arg(long)]
        trace: bool,
        /// Write the step log as JSON lines, one step per line.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Check a claimed decomposition; exits 1 if any check fails.
    Verify {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        n: String,
        /// Comma-separated terms.
        #[arg(long, value_delimiter = ',')]
        terms: Vec<String>,
        /// Ratio bound; max < C * min is required.
        #[arg(short = 'C')]
        c: String,
    },
    /// Greedy {2, 3} decomposition with pairwise non-dividing terms.
    Nondividing {
        #[arg(short)]
        n: String,
    },
    /// Smallest achievable max/min ratio for n, by exhaustive search.
    MinRatio {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        n: String,
        /// Only report ratios below this cap (default: unrestricted).
        #[arg(long)]
        cap: Option<String>,
        #[arg(long)]
        inclusive: bool,
    },
    /// Mark every n <= N that is a short sum with ratio below C.
    Census {
        #[arg(short)]
        p: u64,
        #[arg(short = 'C')]
        c: String,
        #[arg(short = 'N')]
        bound: u64,
        /// Allow max/min equal to C.
        #[arg(long)]
        inclusive: bool,
        #[arg(long)]
        list_unrepresentable: bool,
        /// Write the windows (j, a_j, X_j) as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the unrepresentable n as CSV.
        #[arg(long)]
        unrepresentable_csv: Option<PathBuf>,
    },
    /// Census plus window counts on [x_j, (p - delta) x_j).
    Density {
        #[arg(short)]
        p: u64,
        #[arg(short = 'C')]
        c: String,
        #[arg(short = 'N')]
        bound: u64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// Default (p - C (1 + eps)) / 2.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        inclusive: bool,
        /// Write (j, x_j, X_j, excess) as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check a chain document; exits 1 if it is inadmissible.
    ChainCheck {
        #[arg(long)]
        chain: PathBuf,
        #[arg(short)]
        p: u64,
    },
    /// Local search for a chain with a smaller constant.
    ChainSearch {
        #[arg(short)]
        p: u64,
        #[arg(long)]
        budget: usize,
        /// Also write the chain document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit 1 for failed checks, 2 for bad input.
enum Failure {
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inadmissible(_) | Error::Invariant(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn print<T: Serialize>(doc: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(doc).expect("documents serialize")
    );
}

fn big(s: &str) -> Result<BigUint, Failure> {
    let t = s.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(usage(format!(
            "{s:?} is not a non-negative decimal integer"
        )));
    }
    t.parse().map_err(|_| usage(format!("cannot parse {s:?}")))
}

fn positive(s: &str) -> Result<BigUint, Failure> {
    let n = big(s)?;
    if n == BigUint::ZERO {
        return Err(usage("n must be positive"));
    }
    Ok(n)
}

fn small(s: &str) -> Result<u64, Failure> {
    positive(s)?
        .to_u64()
        .ok_or_else(|| usage(format!("{s} does not fit in 64 bits")))
}

fn cap(s: &str, inclusive: bool) -> Result<RatioCap, Failure> {
    let r = parse_rational(s)?;
    if r == Rational::from_integer(BigUint::ZERO) {
        return Err(usage("the ratio bound must be positive"));
    }
    Ok(if inclusive {
        RatioCap::inclusive(r)
    } else {
        RatioCap::strict(r)
    })
}

fn read_chain(path: &Path) -> Result<MultisetChain, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(MultisetChain::from_json(&text)?)
}

fn write_csv<R: Serialize>(path: &Path, rows: impl IntoIterator<Item = R>) -> Outcome {
    let io = |e: csv::Error| usage(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    w.flush()
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn census_output(report: &CensusReport, list: bool) {
    let mut summary = report.summary();
    if list {
        summary["unrepresentable_values"] = report.unrepresentable().collect::<Vec<_>>().into();
    }
    print(&summary);
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Constants { p, anchor } => {
            let prm = Params::new(p)?;
            let (set, name) = match anchor {
                AnchorKind::Default => (default_anchor(&prm), "default"),
                AnchorKind::Special => (
                    special_anchor(&prm)
                        .ok_or_else(|| usage(format!("p = {p} has no special anchor")))?,
                    "special",
                ),
                AnchorKind::Preferred => match special_anchor(&prm) {
                    Some(s) => (s, "special"),
                    None => (default_anchor(&prm), "default"),
                },
            };
            let chain = derive_chain(&set, &prm)?;
            print(&ConstantsDoc::new(&chain, name, &general_bound(&prm)));
        }
        Command::Decompose {
            p,
            n,
            chain,
            trace,
            trace_out,
        } => {
            let prm = Params::new(p)?;
            let n = positive(&n)?;
            let d = match chain {
                Some(path) => Decomposer::new(&prm, &read_chain(&path)?)?,
                None => Decomposer::preferred(&prm),
            };
            if trace || trace_out.is_some() {
                let t = d.trace(&n).map_err(|f| {
                    let log = serde_json::to_string_pretty(&f.log).unwrap_or_default();
                    Failure::Check(format!("{}\n{log}", f.reason))
                })?;
                if let Some(path) = trace_out {
                    fs::write(&path, t.json_lines())
                        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                }
                let mut doc = DecompositionDoc::new(&t.decomposition, p, d.constant());
                if trace {
                    doc.trace = Some(t.into());
                }
                print(&doc);
            } else {
                print(&DecompositionDoc::new(&d.decompose(&n)?, p, d.constant()));
            }
        }
        Command::Verify { p, n, terms, c } => {
            let prm = Params::new(p)?;
            let n = positive(&n)?;
            let terms = terms
                .iter()
                .map(|t| big(t))
                .collect::<Result<Vec<_>, _>>()?;
            let report = verify(&n, &prm, &terms, cap(&c, false)?.bound());
            print(&VerifyDoc::from(report));
            if !report.passed() {
                return Err(Failure::Check(format!(
                    "failed: {}",
                    report.failures().join(", ")
                )));
            }
        }
        Command::Nondividing { n } => {
            let n = positive(&n)?;
            print(&TermsDoc::new(&n, &nondividing_decompose(&n)));
        }
        Command::MinRatio {
            p,
            n,
            cap: bound,
            inclusive,
        } => {
            let prm = Params::new(p)?;
            let n = small(&n)?;
            let cap = match bound {
                Some(b) => cap(&b, inclusive)?,
                // max / min <= n for any sum, so n + 1 never binds.
                None => RatioCap::strict(Rational::from_integer(BigUint::from(n) + 1u32)),
            };
            let r = census::min_ratio(n, &prm, &cap);
            print(&MinRatioDoc {
                n,
                p,
                cap: cap.to_string(),
                ratio: r.ratio.as_ref().map(RatioDoc::from),
                terms: r
                    .witness
                    .map(|w| w.terms.iter().map(ToString::to_string).collect()),
            });
        }
        Command::Census {
            p,
            c,
            bound,
            inclusive,
            list_unrepresentable,
            csv,
            unrepresentable_csv,
        } => {
            let report = census::census(&Params::new(p)?, &cap(&c, inclusive)?, bound)?;
            if let Some(path) = csv {
                write_csv(&path, &report.windows)?;
            }
            if let Some(path) = unrepresentable_csv {
                #[derive(Serialize)]
                struct Row {
                    n: u64,
                }
                write_csv(&path, report.unrepresentable().map(|n| Row { n }))?;
            }
            census_output(&report, list_unrepresentable);
        }
        Command::Density {
            p,
            c,
            bound,
            eps,
            delta,
            inclusive,
            csv,
        } => {
            let prm = Params::new(p)?;
            let cap = cap(&c, inclusive)?;
            let delta = delta.unwrap_or_else(|| census::default_delta(&prm, cap.bound(), eps));
            let report = census::density_experiment(&prm, &cap, bound, eps, delta)?;
            if let (Some(path), Some(fit)) = (csv, &report.density) {
                write_csv(&path, &fit.windows)?;
            }
            census_output(&report, false);
        }
        Command::ChainCheck { chain, p } => {
            let prm = Params::new(p)?;
            match chain_admissible(&read_chain(&chain)?, &prm) {
                Ok(c) => print(&ChainCheckDoc {
                    admissible: true,
                    c: Some(c.to_string()),
                    violation: None,
                }),
                Err(v) => {
                    print(&ChainCheckDoc {
                        admissible: false,
                        c: None,
                        violation: Some(v.to_string()),
                    });
                    return Err(Failure::Check(format!("inadmissible chain: {v}")));
                }
            }
        }
        Command::ChainSearch { p, budget, out } => {
            if budget == 0 {
                return Err(usage("budget must be at least 1"));
            }
            let prm = Params::new(p)?;
            let chain = chain_search(&prm, budget);
            let c = chain.constant();
            if let Some(path) = out {
                fs::write(&path, chain.to_json() + "\n")
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            }
            print(&ChainSearchDoc {
                c_over_p: RatioDoc::from(&Rational::new(c.clone(), BigUint::from(p))),
                c: c.to_string(),
                chain,
            });
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("smoothsum: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("smoothsum: {msg}");
            ExitCode::from(2)
        }
    }
}
