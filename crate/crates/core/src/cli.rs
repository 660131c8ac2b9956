//! Command-line front end. Exit codes: 0 pass, 1 check failure, 2 usage error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bh_core::{bh_constant_upper, BhBase};
use crate::cyclic::{
    inseparable_partition, property_a_check, remez_chain_check, splitting_bound_check, support_split,
    CyclicPolynomial,
};
use crate::error::{Error, Result};
use crate::learning::{ei_sample_size, lmn_sample_size, run_trial, Algorithm, LearnerConfig, Sampler};
use crate::quantum::{hw_expand, random_hermitian, reduce_qudit, HWObservable};
use crate::report::{csv_row, fmt_f64, CheckRecord, VerifyReport};
use crate::rng;
use crate::suite::{self, SuiteConfig, CHECKS};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "bhlab", version, about = "Bohnenblust-Hille toolkit: learning, verification and sweeps")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Learn random Boolean juntas with LMN or EI.
    Learn(LearnArgs),
    /// Run the named invariant checks.
    Verify(VerifyArgs),
    /// Parameter sweeps: sample-size scaling or Boolean BH ratios.
    Scan(ScanArgs),
    /// Remez chain on random polynomials over Omega_K^n.
    CyclicRemez(CyclicArgs),
    /// Support splitting and inseparable groups of random polynomials.
    CyclicSplit(CyclicArgs),
    /// Reduce a Heisenberg-Weyl observable to a polynomial on Omega_K^{(K+1)n}.
    QuditReduce(QuditArgs),
    /// Upper bounds on the BH constant by degree.
    BhScan(BhScanArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Lmn,
    Ei,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SamplerArg {
    Auto,
    Batch,
    Stats,
}

#[derive(Args, Debug)]
struct LearnArgs {
    #[arg(long, value_enum, default_value = "ei")]
    algo: AlgoArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, value_enum, default_value = "auto")]
    sampler: SamplerArg,
    /// BH constant for the EI threshold; defaults to the Boolean-optimal bound.
    #[arg(long)]
    bh: Option<f64>,
    /// Override the sample size given by the learner's formula.
    #[arg(long)]
    samples: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Comma-separated check names or name prefixes such as `cyclic`.
    #[arg(long)]
    only: Option<String>,
    /// Restrict K-parametrized checks to one group order.
    #[arg(long = "K", alias = "k")]
    k: Option<usize>,
    /// List the available checks and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScanWhat {
    NScaling,
    BhRatio,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, value_enum)]
    what: ScanWhat,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Comma-separated cube dimensions for `n-scaling`.
    #[arg(long, value_delimiter = ',', default_value = "64,256,1024")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long)]
    bh: Option<f64>,
    /// Number of random functions for `bh-ratio`.
    #[arg(long, default_value_t = 1000)]
    instances: usize,
    /// Largest cube dimension for `bh-ratio`.
    #[arg(long, default_value_t = 10)]
    nmax: usize,
}

#[derive(Args, Debug)]
struct CyclicArgs {
    #[arg(long = "K", alias = "k", default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Torus grid size; a multiple of 2K.
    #[arg(long, default_value_t = 24)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    instances: u64,
}

#[derive(Args, Debug)]
struct QuditArgs {
    /// Observable as {"K", "n", "coeffs": [[l, m, re, im], ...]}; random Hermitian if absent.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long = "K", alias = "k", default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Random points for the trace cross-check.
    #[arg(long, default_value_t = 100)]
    points: usize,
}

#[derive(Args, Debug)]
struct BhScanArgs {
    #[arg(long, default_value_t = 10)]
    dmax: usize,
}

/// Outcome of one invocation: exit code and the report text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
    pub stderr: String,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_)
        | Error::Unsupported(_)
        | Error::DimensionMismatch { .. }
        | Error::ResourceLimit(_)
        | Error::OutOfRadius { .. } => EXIT_USAGE,
        Error::Singular(_) | Error::NoConvergence { .. } | Error::Hypothesis(_) => EXIT_FAIL,
    }
}

fn need_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| usage(format!("{what} is randomized and needs --seed")))
}

/// Parses `args` (program name first) and runs the command without touching stdout.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            return if code == EXIT_PASS {
                Outcome { code, output: text, stderr: String::new() }
            } else {
                Outcome { code, output: String::new(), stderr: text }
            };
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            return Outcome { code: EXIT_USAGE, output: String::new(), stderr: "--threads must be positive\n".into() };
        }
        // a pool may already exist when called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let result = match &cli.command {
        Command::Learn(a) => cmd_learn(&cli, a),
        Command::Verify(a) => cmd_verify(&cli, a),
        Command::Scan(a) => cmd_scan(&cli, a),
        Command::CyclicRemez(a) => cmd_cyclic_remez(&cli, a),
        Command::CyclicSplit(a) => cmd_cyclic_split(&cli, a),
        Command::QuditReduce(a) => cmd_qudit_reduce(&cli, a),
        Command::BhScan(a) => cmd_bh_scan(&cli, a),
    };
    match result {
        Ok((code, text, note)) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    return Outcome {
                        code: EXIT_USAGE,
                        output: String::new(),
                        stderr: format!("cannot write {}: {e}\n", path.display()),
                    };
                }
                Outcome { code, output: String::new(), stderr: note }
            } else {
                Outcome { code, output: text, stderr: note }
            }
        }
        Err(e) => Outcome { code: exit_code(&e), output: String::new(), stderr: format!("error: {e}\n") },
    }
}

/// Runs the CLI on the process arguments and returns the exit code.
pub fn run() -> i32 {
    let out = execute(std::env::args_os());
    print!("{}", out.output);
    eprint!("{}", out.stderr);
    out.code
}

type CmdResult = Result<(i32, String, String)>;

fn json_line<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable") + "\n"
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

#[derive(Serialize)]
struct LearnSummary {
    algo: Algorithm,
    sampler: Sampler,
    n: usize,
    d: usize,
    epsilon: f64,
    delta: f64,
    bh_constant: f64,
    trials: u64,
    n_used: u64,
    successes: u64,
    success_rate: f64,
    mean_l2err: f64,
    target_rate: f64,
    pass: bool,
}

fn cmd_learn(cli: &Cli, a: &LearnArgs) -> CmdResult {
    let seed = need_seed(cli.seed, "learn")?;
    if a.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    if a.d == 0 || a.d > a.n {
        return Err(usage(format!("need 1 <= d <= n, got d = {}, n = {}", a.d, a.n)));
    }
    let bh = match a.bh {
        Some(b) => b,
        None => bh_constant_upper(a.d, BhBase::BooleanOptimal)?.value,
    };
    let cfg = LearnerConfig::new(a.d, a.epsilon, a.delta, bh)?;
    let algo = match a.algo {
        AlgoArg::Lmn => Algorithm::Lmn,
        AlgoArg::Ei => Algorithm::Ei,
    };
    let samples = match (a.samples, algo) {
        (Some(0), _) => return Err(usage("--samples must be positive")),
        (Some(s), _) => s,
        (None, Algorithm::Lmn) => lmn_sample_size(a.n, &cfg)?,
        (None, Algorithm::Ei) => ei_sample_size(a.n, &cfg)?,
    };
    let sampler = match a.sampler {
        SamplerArg::Batch => Sampler::Batch,
        SamplerArg::Stats => Sampler::Stats,
        SamplerArg::Auto if a.d <= 2 && samples > 1_000_000 => Sampler::Stats,
        SamplerArg::Auto => Sampler::Batch,
    };
    let outcomes = (0..a.trials)
        .into_par_iter()
        .map(|t| run_trial(algo, sampler, a.n, &cfg, samples, seed, t))
        .collect::<Result<Vec<_>>>()?;
    let successes = outcomes.iter().filter(|o| o.success).count() as u64;
    let success_rate = successes as f64 / a.trials as f64;
    let target_rate = 1.0 - a.delta - 0.05;
    let summary = LearnSummary {
        algo,
        sampler,
        n: a.n,
        d: a.d,
        epsilon: a.epsilon,
        delta: a.delta,
        bh_constant: bh,
        trials: a.trials,
        n_used: samples,
        successes,
        success_rate,
        mean_l2err: outcomes.iter().map(|o| o.l2err).sum::<f64>() / a.trials as f64,
        target_rate,
        pass: success_rate >= target_rate,
    };
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut s: String = outcomes.iter().map(json_line).collect();
            s.push_str(&json_line(&json!({ "summary": summary })));
            s
        }
        Format::Csv => {
            let mut s = String::from("trial,algo,sampler,n,d,samples,kept,l2err,success\n");
            for o in &outcomes {
                s.push_str(&csv_row(&[
                    o.trial.to_string(),
                    format!("{:?}", o.algo).to_lowercase(),
                    format!("{:?}", o.sampler).to_lowercase(),
                    o.n.to_string(),
                    o.d.to_string(),
                    o.samples.to_string(),
                    o.kept.to_string(),
                    fmt_f64(o.l2err),
                    o.success.to_string(),
                ]));
            }
            s
        }
    };
    let note = format!(
        "success rate {success_rate} over {} trials (target {target_rate}), N = {samples}\n",
        a.trials
    );
    Ok((if summary.pass { EXIT_PASS } else { EXIT_FAIL }, text, note))
}

fn selected_checks(only: &Option<String>) -> Result<Vec<&'static suite::Check>> {
    let Some(list) = only else {
        return Ok(CHECKS.iter().collect());
    };
    let mut out = Vec::new();
    for raw in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let hits: Vec<&suite::Check> = CHECKS
            .iter()
            .filter(|c| c.name == raw || c.name.starts_with(&format!("{raw}.")))
            .collect();
        if hits.is_empty() {
            return Err(usage(format!("unknown check {raw}; see `verify --list`")));
        }
        for h in hits {
            if !out.iter().any(|c: &&suite::Check| c.name == h.name) {
                out.push(h);
            }
        }
    }
    if out.is_empty() {
        return Err(usage("--only selected no checks"));
    }
    Ok(out)
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> CmdResult {
    if a.list {
        let text = CHECKS
            .iter()
            .map(|c| format!("{}{}\n", c.name, if c.randomized { " (randomized)" } else { "" }))
            .collect();
        return Ok((EXIT_PASS, text, String::new()));
    }
    let checks = selected_checks(&a.only)?;
    if let Some(k) = a.k {
        if !crate::cyclic::is_prime(k) {
            return Err(Error::Unsupported(format!("K = {k} is not prime")));
        }
    }
    if cli.seed.is_none() {
        if let Some(c) = checks.iter().find(|c| c.randomized) {
            return Err(usage(format!("check {} is randomized and needs --seed", c.name)));
        }
    }
    let cfg = SuiteConfig {
        seed: cli.seed,
        ks: a.k.map(|k| vec![k]).unwrap_or_else(|| SuiteConfig::default().ks),
    };
    let mut records: Vec<CheckRecord> = Vec::new();
    for c in checks {
        records.extend(c.run(&cfg)?);
    }
    let report = VerifyReport::new(cli.seed, records);
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    let failing: String = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("FAIL {}: lhs {} rhs {} ({})\n", c.check, c.lhs, c.rhs, c.tag))
        .collect();
    Ok((if report.all_pass() { EXIT_PASS } else { EXIT_FAIL }, text, failing))
}

fn cmd_scan(cli: &Cli, a: &ScanArgs) -> CmdResult {
    let json = cli.format == Some(Format::Json);
    match a.what {
        ScanWhat::NScaling => {
            if a.n.is_empty() {
                return Err(usage("--n needs at least one dimension"));
            }
            let bh = match a.bh {
                Some(b) => b,
                None => bh_constant_upper(a.d, BhBase::BooleanOptimal)?.value,
            };
            let cfg = LearnerConfig::new(a.d, a.epsilon, a.delta, bh)?;
            let mut rows = Vec::new();
            for &n in &a.n {
                let lmn = lmn_sample_size(n, &cfg)?;
                let ei = ei_sample_size(n, &cfg)?;
                rows.push((n, lmn, ei));
            }
            // smallest listed n from which EI needs fewer samples than LMN at every later listed n
            let witness = (0..rows.len())
                .find(|&i| rows[i..].iter().all(|r| r.2 < r.1))
                .map(|i| rows[i].0);
            let text = if json {
                pretty(&json!({
                    "rows": rows.iter().map(|r| json!({"n": r.0, "lmn_samples": r.1, "ei_samples": r.2})).collect::<Vec<_>>(),
                    "crossover_n0": witness,
                }))
            } else {
                let mut s = String::from("n,lmn_samples,ei_samples,ei_per_log_n,ei_below_lmn\n");
                for &(n, lmn, ei) in &rows {
                    s.push_str(&csv_row(&[
                        n.to_string(),
                        lmn.to_string(),
                        ei.to_string(),
                        fmt_f64(ei as f64 / (n as f64).ln()),
                        (ei < lmn).to_string(),
                    ]));
                }
                s
            };
            let note = match witness {
                Some(n0) => format!("crossover witness n0 = {n0}\n"),
                None => "no crossover among the listed n\n".into(),
            };
            Ok((EXIT_PASS, text, note))
        }
        ScanWhat::BhRatio => {
            let seed = need_seed(cli.seed, "scan --what bh-ratio")?;
            if a.instances == 0 {
                return Err(usage("--instances must be positive"));
            }
            if a.d == 0 || a.nmax < a.d || a.nmax > 20 {
                return Err(usage(format!("need 1 <= d <= nmax <= 20, got d = {}, nmax = {}", a.d, a.nmax)));
            }
            let rows = (0..a.instances as u64)
                .into_par_iter()
                .map(|i| {
                    let s = rng::instance_seed(seed, 0xb4, i);
                    let n = rng::stream(s, 1).gen_range(a.d..=a.nmax);
                    let (ratio, bound, spec) = suite::boolean_bh_instance(n, a.d, s)?;
                    Ok((i, n, spec.degree(), ratio, bound))
                })
                .collect::<Result<Vec<_>>>()?;
            let violations = rows.iter().filter(|r| r.3 > r.4 + 1e-9).count();
            let max_ratio = rows.iter().map(|r| r.3).fold(0.0, f64::max);
            let text = if json {
                pretty(&json!({
                    "rows": rows.iter().map(|r| json!({"instance": r.0, "n": r.1, "degree": r.2, "ratio": r.3, "bound": r.4})).collect::<Vec<_>>(),
                    "max_ratio": max_ratio,
                    "violations": violations,
                }))
            } else {
                let mut s = String::from("instance,n,degree,ratio,bound\n");
                for r in &rows {
                    s.push_str(&csv_row(&[
                        r.0.to_string(),
                        r.1.to_string(),
                        r.2.to_string(),
                        fmt_f64(r.3),
                        fmt_f64(r.4),
                    ]));
                }
                s
            };
            let note = format!("max ratio {max_ratio}, {violations} violations\n");
            Ok((if violations == 0 { EXIT_PASS } else { EXIT_FAIL }, text, note))
        }
    }
}

fn random_polys(cli: &Cli, a: &CyclicArgs, what: &str, salt: u64) -> Result<Vec<CyclicPolynomial>> {
    let seed = need_seed(cli.seed, what)?;
    if a.instances == 0 {
        return Err(usage("--instances must be positive"));
    }
    (0..a.instances)
        .map(|i| CyclicPolynomial::random(a.k, a.n, a.d, rng::instance_seed(seed, salt, i)))
        .collect()
}

fn cmd_cyclic_remez(cli: &Cli, a: &CyclicArgs) -> CmdResult {
    let polys = random_polys(cli, a, "cyclic-remez", 0xc1)?;
    let reports = polys
        .par_iter()
        .map(|f| remez_chain_check(f, a.m))
        .collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let text = pretty(&json!({ "K": a.k, "n": a.n, "d": a.d, "m": a.m, "reports": reports, "pass": pass }));
    Ok((if pass { EXIT_PASS } else { EXIT_FAIL }, text, String::new()))
}

fn cmd_cyclic_split(cli: &Cli, a: &CyclicArgs) -> CmdResult {
    let polys = random_polys(cli, a, "cyclic-split", 0xc2)?;
    let mut pass = true;
    let mut items = Vec::new();
    for f in &polys {
        let split = splitting_bound_check(f)?;
        let prop_a = property_a_check(f)?;
        let mut groups = Vec::new();
        for (ell, part) in support_split(f) {
            let p = inseparable_partition(&part);
            for g in &p.groups {
                groups.push(json!({ "support": ell, "tau": [g.tau.re, g.tau.im], "monomials": g.poly.len() }));
            }
            if !p.warnings.is_empty() {
                groups.push(json!({ "support": ell, "warnings": p.warnings }));
            }
        }
        pass &= split.pass && prop_a.iter().all(|r| r.pass);
        items.push(json!({ "polynomial": f, "splitting": split, "property_a": prop_a, "groups": groups }));
    }
    let text = pretty(&json!({ "K": a.k, "n": a.n, "d": a.d, "instances": items, "pass": pass }));
    Ok((if pass { EXIT_PASS } else { EXIT_FAIL }, text, String::new()))
}

fn cmd_qudit_reduce(cli: &Cli, a: &QuditArgs) -> CmdResult {
    let (obs, dense) = match &a.input {
        Some(path) => {
            let raw = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let obs: HWObservable =
                serde_json::from_str(&raw).map_err(|e| usage(format!("bad observable JSON: {e}")))?;
            let dense = if obs.n() <= 3 { Some(crate::quantum::hw_synthesize(&obs)?) } else { None };
            (obs, dense)
        }
        None => {
            let seed = need_seed(cli.seed, "qudit-reduce without --input")?;
            if !crate::cyclic::is_prime(a.k) {
                return Err(Error::Unsupported(format!("K = {} is not prime", a.k)));
            }
            if a.n == 0 || a.n > 3 {
                return Err(usage(format!("random observables need 1 <= n <= 3, got {}", a.n)));
            }
            let m = random_hermitian(a.k.pow(a.n as u32), seed);
            (hw_expand(&m, a.k, a.n)?, Some(m))
        }
    };
    let red = reduce_qudit(&obs)?;
    let mut r = rng::seeded(cli.seed.unwrap_or(0) ^ 0x9d);
    let (k, n) = (obs.k(), obs.n());
    let mut max_error = 0.0f64;
    for _ in 0..a.points {
        let exps: Vec<usize> = (0..(k + 1) * n).map(|_| r.gen_range(0..k)).collect();
        let poly = red.polynomial_value(&exps)?;
        max_error = max_error.max((red.evaluate(&exps)? - poly).norm());
        if let Some(m) = &dense {
            max_error = max_error.max((crate::quantum::qudit_trace_dense(m, k, n, &exps)? - poly).norm());
        }
    }
    let pass = max_error <= 1e-9;
    let text = pretty(&json!({
        "observable": obs,
        "observable_degree": obs.degree(),
        "polynomial": red.poly,
        "polynomial_degree": red.poly.degree(),
        "points": a.points,
        "max_error": max_error,
        "pass": pass,
    }));
    Ok((if pass { EXIT_PASS } else { EXIT_FAIL }, text, String::new()))
}

fn cmd_bh_scan(cli: &Cli, a: &BhScanArgs) -> CmdResult {
    if a.dmax == 0 || a.dmax > 200 {
        return Err(usage(format!("need 1 <= dmax <= 200, got {}", a.dmax)));
    }
    let table = suite::bh_constant_table(a.dmax)?;
    let text = if cli.format == Some(Format::Json) {
        pretty(&table.iter().map(|r| json!({"d": r.0, "boolean_optimal": r.1, "general": r.2})).collect::<Vec<_>>())
    } else {
        let mut s = String::from("d,boolean_optimal,general,boolean_lower\n");
        for &(d, b, g) in &table {
            let lower = 2f64.powf((d as f64 - 1.0) / d as f64);
            s.push_str(&csv_row(&[d.to_string(), fmt_f64(b), fmt_f64(g), fmt_f64(lower)]));
        }
        s
    };
    Ok((EXIT_PASS, text, String::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Outcome {
        execute(std::iter::once("bhlab").chain(args.iter().copied()))
    }

    #[test]
    fn learn_without_seed_is_usage_error() {
        assert_eq!(run(&["learn", "--n", "8", "--d", "2"]).code, EXIT_USAGE);
        assert_eq!(run(&["learn", "--n", "8", "--d", "2", "--trials", "0", "--seed", "1"]).code, EXIT_USAGE);
    }

    #[test]
    fn verify_k3_single_check() {
        let out = run(&["verify", "--only", "cyclic.k3"]);
        assert_eq!(out.code, EXIT_PASS, "{}", out.stderr);
        assert!(out.output.contains("cyclic.k3 value"));
    }

    #[test]
    fn composite_k_is_rejected() {
        assert_eq!(run(&["verify", "--only", "quantum.sigma-cover", "--K", "4"]).code, EXIT_USAGE);
    }

    #[test]
    fn empty_scan_list_is_rejected() {
        assert_eq!(run(&["scan", "--what", "n-scaling", "--n", ""]).code, EXIT_USAGE);
    }

    #[test]
    fn unknown_subcommand() {
        assert_eq!(run(&["frobnicate"]).code, EXIT_USAGE);
    }
}
