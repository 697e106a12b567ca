//! Experiment records and the single-trial runner behind the CLI.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::construction::{main_construct, run_weak, verify_agreement, Construction, ConstructionConfig};
use crate::error::{Error, Result};
use crate::exact::{brute_force_mast, unrooted_mast, BRUTE_FORCE_CAP, UNROOTED_CAP};
use crate::generators::{adversarial_pair, uniform};
use crate::tree::UnrootedTree;

/// CSV column order of [`ExperimentRecord`].
pub const CSV_HEADER: &str = "n,seed,generator,algorithm,size,kind,branch,verified,millis";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Weak,
    Main,
    ExactDp,
    Brute,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Weak => "weak",
            Algorithm::Main => "main",
            Algorithm::ExactDp => "exact_dp",
            Algorithm::Brute => "brute",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the two trees of a trial are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairModel {
    /// Two independent uniform trees.
    Uniform,
    /// A balanced tree against a randomly labeled caterpillar.
    Adversarial,
}

impl PairModel {
    pub fn as_str(self) -> &'static str {
        match self {
            PairModel::Uniform => "uniform",
            PairModel::Adversarial => "adversarial",
        }
    }

    /// Draws a pair; the second uniform tree uses a derived seed.
    pub fn generate(self, n: usize, seed: u64) -> Result<(UnrootedTree, UnrootedTree)> {
        match self {
            PairModel::Uniform => Ok((uniform(n, seed)?, uniform(n, seed ^ 0x9e37_79b9_7f4a_7c15)?)),
            PairModel::Adversarial => adversarial_pair(n, seed),
        }
    }
}

impl fmt::Display for PairModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PairModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(PairModel::Uniform),
            "adversarial" => Ok(PairModel::Adversarial),
            _ => Err(Error::Generator(format!("unknown pair model {s:?}"))),
        }
    }
}

/// One row of experiment output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub seed: u64,
    pub generator: String,
    pub algorithm: String,
    pub size: usize,
    pub kind: String,
    pub branch: String,
    pub verified: bool,
    pub millis: u64,
}

#[derive(Clone, Debug)]
pub struct TrialOptions {
    pub config: ConstructionConfig,
    pub exact_cap: usize,
    pub brute_cap: usize,
    /// Record wall-clock time; `millis` is 0 otherwise so output is stable.
    pub timing: bool,
}

impl Default for TrialOptions {
    fn default() -> Self {
        TrialOptions { config: ConstructionConfig::default(), exact_cap: UNROOTED_CAP, brute_cap: BRUTE_FORCE_CAP, timing: false }
    }
}

fn record_construction(n: usize, seed: u64, generator: &str, algorithm: Algorithm, run: &Construction, millis: u64) -> Result<ExperimentRecord> {
    let o = &run.outcome;
    let verified = verify_agreement(&run.setup, &o.agreement_set, o.kind)?;
    Ok(ExperimentRecord {
        n,
        seed,
        generator: generator.to_string(),
        algorithm: algorithm.as_str().to_string(),
        size: o.size(),
        kind: o.kind.as_str().to_string(),
        branch: o.branch.clone(),
        verified,
        millis,
    })
}

/// Runs the requested algorithms on one pair. Exact solvers are skipped
/// above their caps.
pub fn run_trial(
    t: &UnrootedTree,
    s: &UnrootedTree,
    seed: u64,
    generator: &str,
    algorithms: &[Algorithm],
    opts: &TrialOptions,
) -> Result<Vec<ExperimentRecord>> {
    let n = t.leaf_count();
    let mut rows = Vec::with_capacity(algorithms.len());
    for &alg in algorithms {
        let start = Instant::now();
        let elapsed = |start: Instant| if opts.timing { start.elapsed().as_millis() as u64 } else { 0 };
        let row = match alg {
            Algorithm::Weak => {
                let run = run_weak(t, s, &opts.config)?;
                record_construction(n, seed, generator, alg, &run, elapsed(start))?
            }
            Algorithm::Main => {
                let run = main_construct(t, s, &opts.config)?;
                record_construction(n, seed, generator, alg, &run, elapsed(start))?
            }
            Algorithm::ExactDp | Algorithm::Brute => {
                let cap = if alg == Algorithm::Brute { opts.brute_cap } else { opts.exact_cap };
                if n > cap {
                    continue;
                }
                let res = if alg == Algorithm::Brute { brute_force_mast(t, s, cap)? } else { unrooted_mast(t, s)? };
                let verified = res.check(t, s).is_ok();
                ExperimentRecord {
                    n,
                    seed,
                    generator: generator.to_string(),
                    algorithm: alg.as_str().to_string(),
                    size: res.size,
                    kind: "exact".into(),
                    branch: if alg == Algorithm::Brute { "brute:unrooted" } else { "dp:unrooted" }.into(),
                    verified,
                    millis: elapsed(start),
                }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}
