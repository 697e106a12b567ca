use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use mastkit::construction::{main_construct, run_weak, verify_agreement, ConstructionConfig, OutcomeKind};
use mastkit::exact::{brute_force_mast, rooted_mast, unrooted_mast, MastResult, BRUTE_FORCE_CAP, ROOTED_CAP, UNROOTED_CAP};
use mastkit::generators::{adversarial_pair, generate, GenSpec, Model};
use mastkit::harness::{run_trial, Algorithm, ExperimentRecord, PairModel, TrialOptions};
use mastkit::tree::{parse_auto, parse_rooted};
use mastkit::{agree_on, Orientation, Phylogeny, RootedTree, Taxon, TaxonSet, UnrootedTree};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::{
    ConstructAlgorithm, ConstructArgs, ExactArgs, ExperimentAlgorithm, ExperimentArgs, ExperimentModel, GenArgs, GenModel,
    Method, TreePair, VerifyArgs,
};

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn parse_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("{}: {e}", path.display()))
}

fn read_unrooted(path: &Path) -> CliResult<UnrootedTree> {
    let text = read_file(path)?;
    parse_auto(&text).and_then(|p| p.into_unrooted()).map_err(|e| parse_error(path, e))
}

fn read_rooted(path: &Path) -> CliResult<RootedTree> {
    parse_rooted(&read_file(path)?).map_err(|e| parse_error(path, e))
}

fn read_pair<P: Phylogeny>(pair: &TreePair, read: fn(&Path) -> CliResult<P>) -> CliResult<(P, P)> {
    let t = read(&pair.t1)?;
    let s = read(&pair.t2)?;
    if t.taxa() != s.taxa() {
        return Err(CliError::TaxaMismatch);
    }
    Ok((t, s))
}

fn labels(set: &TaxonSet) -> Vec<String> {
    set.iter().map(|t| t.to_string()).collect()
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

#[derive(Serialize)]
struct ConstructReport {
    #[serde(flatten)]
    record: ExperimentRecord,
    claimed_bound: f64,
    pair_steps: usize,
    block_steps: usize,
    agreement_set: Vec<String>,
    agreement_tree: String,
}

pub fn construct(args: ConstructArgs) -> CliResult<()> {
    let (t, s) = read_pair(&args.trees, read_unrooted)?;
    let n = t.leaf_count();
    let algorithm = match args.algorithm {
        ConstructAlgorithm::Weak => Algorithm::Weak,
        ConstructAlgorithm::Main => Algorithm::Main,
    };
    let report = if n < 4 {
        let set = t.taxa();
        ConstructReport {
            record: ExperimentRecord {
                n,
                seed: args.seed.unwrap_or(0),
                generator: "file".into(),
                algorithm: algorithm.as_str().into(),
                size: n,
                kind: OutcomeKind::UnrootedCaterpillar.as_str().into(),
                branch: "trivial".into(),
                verified: agree_on(&t, &s, &set).map_err(mastkit::Error::from)?,
                millis: 0,
            },
            claimed_bound: n as f64,
            pair_steps: 0,
            block_steps: 0,
            agreement_tree: t.to_newick(),
            agreement_set: labels(&set),
        }
    } else {
        let mut cfg = ConstructionConfig::default();
        if let Some(seed) = args.seed {
            cfg.orientation = Orientation::Seeded(seed);
        }
        let run = match algorithm {
            Algorithm::Weak => {
                cfg.weak_c = args.c.unwrap_or(cfg.weak_c);
                run_weak(&t, &s, &cfg)?
            }
            _ => {
                cfg.main_c = args.c.unwrap_or(cfg.main_c);
                main_construct(&t, &s, &cfg)?
            }
        };
        let o = &run.outcome;
        let verified = verify_agreement(&run.setup, &o.agreement_set, o.kind)?
            && agree_on(&t, &s, &o.agreement_set).map_err(mastkit::Error::from)?;
        ConstructReport {
            record: ExperimentRecord {
                n,
                seed: args.seed.unwrap_or(0),
                generator: "file".into(),
                algorithm: algorithm.as_str().into(),
                size: o.size(),
                kind: o.kind.as_str().into(),
                branch: o.branch.clone(),
                verified,
                millis: 0,
            },
            claimed_bound: o.claimed_bound,
            pair_steps: o.pair_steps,
            block_steps: o.block_steps,
            agreement_tree: t.restrict(&o.agreement_set).map_err(mastkit::Error::from)?.to_newick(),
            agreement_set: labels(&o.agreement_set),
        }
    };
    if args.json {
        print_json(&report)?;
    } else {
        let r = &report.record;
        println!("size: {}", r.size);
        println!("set: {}", report.agreement_set.join(","));
        println!("tree: {}", report.agreement_tree);
        println!("kind: {}", r.kind);
        println!("branch: {}", r.branch);
        println!("claimed_bound: {}", report.claimed_bound);
        println!("verified: {}", r.verified);
    }
    if !report.record.verified {
        return Err(CliError::Verification(format!("{} output does not verify", report.record.branch)));
    }
    Ok(())
}

#[derive(Serialize)]
struct ExactReport {
    n: usize,
    method: &'static str,
    rooted: bool,
    size: usize,
    agreement_set: Vec<String>,
    agreement_tree: String,
}

fn solve<P: Phylogeny>(
    t: &P,
    s: &P,
    method: Method,
    cap: usize,
    dp: fn(&P, &P) -> mastkit::Result<MastResult<P>>,
) -> CliResult<MastResult<P>> {
    let n = t.leaf_count();
    if n > cap {
        return Err(CliError::Cap(format!("{n} leaves exceeds the cap of {cap}")));
    }
    let res = match method {
        Method::Dp => dp(t, s)?,
        Method::Brute => brute_force_mast(t, s, cap)?,
    };
    Ok(res)
}

pub fn exact(args: ExactArgs) -> CliResult<()> {
    let cap = args.cap.unwrap_or(match (args.method, args.rooted) {
        (Method::Brute, _) => BRUTE_FORCE_CAP,
        (Method::Dp, true) => ROOTED_CAP,
        (Method::Dp, false) => UNROOTED_CAP,
    });
    let (n, size, set, tree) = if args.rooted {
        let (t, s) = read_pair(&args.trees, read_rooted)?;
        let r = solve(&t, &s, args.method, cap, rooted_mast)?;
        (t.leaf_count(), r.size, r.agreement_set, r.witness.to_newick())
    } else {
        let (t, s) = read_pair(&args.trees, read_unrooted)?;
        let r = solve(&t, &s, args.method, cap, unrooted_mast)?;
        (t.leaf_count(), r.size, r.agreement_set, r.witness.to_newick())
    };
    let report = ExactReport {
        n,
        method: match args.method {
            Method::Dp => "dp",
            Method::Brute => "brute",
        },
        rooted: args.rooted,
        size,
        agreement_set: labels(&set),
        agreement_tree: tree,
    };
    if args.json {
        print_json(&report)
    } else {
        println!("size: {}", report.size);
        println!("set: {}", report.agreement_set.join(","));
        println!("tree: {}", report.agreement_tree);
        Ok(())
    }
}

fn parse_set(text: &str) -> CliResult<TaxonSet> {
    let set: TaxonSet = text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(Taxon::from).collect();
    if set.is_empty() {
        return Err(CliError::Usage("--set names no taxa".into()));
    }
    Ok(set)
}

fn check_set<P: Phylogeny>(t: &P, s: &P, set: &TaxonSet) -> CliResult<bool> {
    let all = t.taxa();
    if let Some(x) = set.iter().find(|x| !all.contains(*x)) {
        return Err(CliError::Parse(format!("unknown taxon {x}")));
    }
    Ok(agree_on(t, s, set).map_err(mastkit::Error::from)?)
}

#[derive(Serialize)]
struct VerifyReport {
    rooted: bool,
    size: usize,
    agree: bool,
}

pub fn verify(args: VerifyArgs) -> CliResult<()> {
    let set = parse_set(&args.set)?;
    let agree = if args.rooted {
        let (t, s) = read_pair(&args.trees, read_rooted)?;
        check_set(&t, &s, &set)?
    } else {
        let (t, s) = read_pair(&args.trees, read_unrooted)?;
        check_set(&t, &s, &set)?
    };
    if args.json {
        print_json(&VerifyReport { rooted: args.rooted, size: set.len(), agree })?;
    } else {
        println!("agree: {agree}");
    }
    if agree {
        Ok(())
    } else {
        Err(CliError::Disagree)
    }
}

fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p.display().to_string(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn gen(args: GenArgs) -> CliResult<()> {
    let model = match args.model {
        GenModel::Uniform => Some(Model::Uniform),
        GenModel::Caterpillar => Some(Model::Caterpillar),
        GenModel::Balanced => Some(Model::Balanced),
        GenModel::Adversarial => None,
    };
    match model {
        Some(model) => {
            if args.out2.is_some() {
                return Err(CliError::Usage("--out2 only applies to the adversarial model".into()));
            }
            let t = generate(&GenSpec::new(model, args.n, args.seed))?;
            write_text(args.out.as_deref(), &format!("{}\n", t.to_newick()))
        }
        None => {
            let (a, b) = adversarial_pair(args.n, args.seed)?;
            let (a, b) = (format!("{}\n", a.to_newick()), format!("{}\n", b.to_newick()));
            match args.out2.as_deref() {
                Some(p2) => {
                    write_text(args.out.as_deref(), &a)?;
                    write_text(Some(p2), &b)
                }
                None => write_text(args.out.as_deref(), &(a + &b)),
            }
        }
    }
}

fn grid(n_min: usize, n_max: usize, step: f64) -> CliResult<Vec<usize>> {
    if step.is_nan() || step <= 1.0 || !step.is_finite() {
        return Err(CliError::Usage(format!("--step-factor must exceed 1, got {step}")));
    }
    if n_min < 4 || n_min > n_max {
        return Err(CliError::Usage(format!("need 4 <= n-min <= n-max, got {n_min}..{n_max}")));
    }
    let mut sizes = vec![];
    let mut n = n_min;
    while n <= n_max {
        sizes.push(n);
        n = ((n as f64 * step).round() as usize).max(n + 1);
    }
    Ok(sizes)
}

enum Sink {
    Csv(Box<csv::Writer<Box<dyn Write>>>),
    Json(Vec<ExperimentRecord>, Box<dyn Write>),
}

fn open_sink(args: &ExperimentArgs) -> CliResult<Sink> {
    if args.json && args.append {
        return Err(CliError::Usage("--append cannot be combined with --json".into()));
    }
    let (out, header): (Box<dyn Write>, bool) = match &args.out {
        Some(path) => {
            let shown = path.display().to_string();
            let existing = args.append && fs::metadata(path).map(|m| m.len() > 0).unwrap_or(false);
            let file: File = if args.append {
                OpenOptions::new().create(true).append(true).open(path)
            } else {
                File::create(path)
            }
            .map_err(|e| CliError::io(shown, e))?;
            (Box::new(BufWriter::new(file)), !existing)
        }
        None => (Box::new(BufWriter::new(io::stdout())), true),
    };
    Ok(if args.json {
        Sink::Json(vec![], out)
    } else {
        Sink::Csv(Box::new(csv::WriterBuilder::new().has_headers(header).from_writer(out)))
    })
}

pub fn experiment(args: ExperimentArgs) -> CliResult<()> {
    let sizes = grid(args.n_min, args.n_max, args.step_factor)?;
    let models: Vec<PairModel> = args
        .model
        .iter()
        .map(|m| match m {
            ExperimentModel::Uniform => PairModel::Uniform,
            ExperimentModel::Adversarial => PairModel::Adversarial,
        })
        .collect();
    if models.contains(&PairModel::Adversarial) {
        if let Some(n) = sizes.iter().find(|n| !n.is_power_of_two()) {
            return Err(CliError::Usage(format!("adversarial pairs need power-of-two sizes, grid contains {n}")));
        }
    }
    let algorithms: Vec<Algorithm> = args
        .algorithm
        .iter()
        .map(|a| match a {
            ExperimentAlgorithm::Weak => Algorithm::Weak,
            ExperimentAlgorithm::Main => Algorithm::Main,
            ExperimentAlgorithm::ExactDp => Algorithm::ExactDp,
            ExperimentAlgorithm::Brute => Algorithm::Brute,
        })
        .collect();
    let opts = TrialOptions { exact_cap: args.cap.unwrap_or(UNROOTED_CAP), timing: args.timing, ..TrialOptions::default() };
    let mut sink = open_sink(&args)?;
    let mut failed = None;

    for &model in &models {
        for &n in &sizes {
            let rows: Vec<Vec<ExperimentRecord>> = (0..args.trials)
                .into_par_iter()
                .map(|i| {
                    let seed = args.seed.wrapping_add(i);
                    let (t, s) = model.generate(n, seed)?;
                    run_trial(&t, &s, seed, model.as_str(), &algorithms, &opts)
                })
                .collect::<mastkit::Result<_>>()?;
            let rows: Vec<ExperimentRecord> = rows.into_iter().flatten().collect();
            summarize(model, n, &rows);
            if failed.is_none() {
                failed = rows.iter().find(|r| !r.verified).map(|r| format!("{} on {} n={} seed={}", r.algorithm, r.generator, r.n, r.seed));
            }
            match &mut sink {
                Sink::Csv(w) => {
                    for r in &rows {
                        w.serialize(r)?;
                    }
                    w.flush().map_err(|e| CliError::io("output", e))?;
                }
                Sink::Json(all, _) => all.extend(rows),
            }
            if let Some(what) = &failed {
                return Err(CliError::Verification(format!("unverified output from {what}")));
            }
        }
    }
    if let Sink::Json(all, mut out) = sink {
        serde_json::to_writer_pretty(&mut out, &all)?;
        writeln!(out).and_then(|_| out.flush()).map_err(|e| CliError::io("output", e))?;
    }
    Ok(())
}

/// One stderr line per grid cell: the smallest size of each construction
/// divided by `log2 n`.
fn summarize(model: PairModel, n: usize, rows: &[ExperimentRecord]) {
    let log_n = (n as f64).log2();
    let mut parts = vec![];
    for alg in ["weak", "main", "exact_dp", "brute"] {
        if let Some(min) = rows.iter().filter(|r| r.algorithm == alg).map(|r| r.size).min() {
            parts.push(format!("{alg} min {min} ({:.3} log n)", min as f64 / log_n));
        }
    }
    eprintln!("{model} n={n}: {}", parts.join(", "));
}
