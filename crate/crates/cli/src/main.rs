mod error;
mod input;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wmetrics::experiments::tercile_weights;
use wmetrics::multiclass::scores;
use wmetrics::numfmt::format_significant;
use wmetrics::verify::{eps_limit, random_instance};
use wmetrics::{
    mcc, run_sweep, verify_bound, BinaryLabeledData, Metric, MetricError, MulticlassLabeledData,
    SweepConfig, Weights64,
};

use crate::error::CliError;
use crate::input::read_labeled;

/// Attempts at generating an instance that meets the bound's data preconditions.
const MAX_INSTANCE_ATTEMPTS: usize = 1000;

#[derive(Debug, Parser)]
#[command(
    name = "wmetrics",
    version,
    about = "Observation-weighted classification metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weighted and unweighted metrics for a labeled CSV file
    Compute(ComputeArgs),
    /// Sliding-segment sweep over synthetic predictions, written as CSV
    Sweep(SweepArgs),
    /// Check a stability bound against random weight perturbations
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Binary,
    Multi,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    /// CSV with header `truth,prediction[,weight]`
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Binary)]
    mode: Mode,
    /// Number of classes in multi mode (default: largest label + 1)
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 150)]
    n: usize,
    /// 1 for binary labels, otherwise the number of classes
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Match proportion inside the segment
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Match proportion outside the segment
    #[arg(long, default_value_t = 0.5)]
    p0: f64,
    #[arg(long, default_value_t = 50)]
    segment_len: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, env = "WMETRICS_SEED", default_value_t = 0)]
    seed: u64,
    /// Weight runs as `count:weight,...` (default: thirds of n weighted 1, 100, 10000)
    #[arg(long)]
    weights: Option<String>,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reuse one truth vector for every sample
    #[arg(long)]
    fixed_truth: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    metric: Metric,
    #[arg(long, default_value_t = 50)]
    n: usize,
    /// Classes for the multiclass measures
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Perturbation radius (default: half the largest admissible value)
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, env = "WMETRICS_SEED", default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Compute(args) => compute(&args),
        Command::Sweep(args) => sweep(&args),
        Command::Verify(args) => verify(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn compute(args: &ComputeArgs) -> Result<(), CliError> {
    let path = args.input.display().to_string();
    let file = File::open(&args.input).map_err(|e| CliError::io(&path, e))?;
    let data = read_labeled(BufReader::new(file))?;
    let unweighted = Weights64::uniform(data.truth.len())?;
    let weighted = match &data.weights {
        Some(w) => Weights64::new(w.clone())?,
        None => unweighted.clone(),
    };

    let rows = match args.mode {
        Mode::Binary => {
            if args.k.is_some_and(|k| k != 2) {
                return Err(CliError::Usage("--k must be 2 in binary mode".into()));
            }
            data.check_classes(2)?;
            let bits = |v: &[usize]| v.iter().map(|&x| x as u8).collect();
            let d = BinaryLabeledData::new(bits(&data.truth), bits(&data.prediction))?;
            vec![
                ("MCC", mcc(&d, &unweighted)?),
                ("WMCC", mcc(&d, &weighted)?),
            ]
        }
        Mode::Multi => {
            let k = match args.k {
                Some(k) if k < 2 => {
                    return Err(CliError::Usage("--k must be at least 2".into()));
                }
                Some(k) => k,
                None => (data.max_class() + 1).max(2),
            };
            data.check_classes(k)?;
            let d = MulticlassLabeledData::new(data.truth.clone(), data.prediction.clone(), k)?;
            let u = scores(&d, &unweighted)?;
            let w = scores(&d, &weighted)?;
            vec![
                ("ECC", u.ecc),
                ("WECC", w.ecc),
                ("MPC1", u.mpc1),
                ("WMPC1", w.mpc1),
                ("MPC2", u.mpc2),
                ("WMPC2", w.mpc2),
            ]
        }
    };

    let mut out = io::stdout().lock();
    for (name, value) in rows {
        writeln!(out, "{name},{}", format_significant(value, 12))
            .map_err(|e| CliError::io("stdout", e))?;
    }
    Ok(())
}

fn parse_weight_pattern(spec: &str) -> Result<Vec<(usize, f64)>, CliError> {
    let bad = |part: &str| {
        CliError::Usage(format!(
            "invalid value for --weights: '{part}' is not of the form count:weight"
        ))
    };
    spec.split(',')
        .map(|part| {
            let (count, weight) = part.trim().split_once(':').ok_or_else(|| bad(part))?;
            let count = count.trim().parse().map_err(|_| bad(part))?;
            let weight = weight.trim().parse().map_err(|_| bad(part))?;
            Ok((count, weight))
        })
        .collect()
}

fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let weight_pattern = match &args.weights {
        Some(spec) => parse_weight_pattern(spec)?,
        None => tercile_weights(args.n),
    };
    let config = SweepConfig {
        n: args.n,
        k: args.k,
        p: args.p,
        p0: args.p0,
        segment_len: args.segment_len,
        samples: args.samples,
        weight_pattern,
        seed: args.seed,
        fixed_truth: args.fixed_truth,
    };
    let result = run_sweep(&config)?;
    match &args.out {
        Some(path) => {
            let name = path.display().to_string();
            let file = File::create(path).map_err(|e| CliError::io(&name, e))?;
            let mut out = BufWriter::new(file);
            result
                .write_csv(&mut out)
                .and_then(|()| out.flush())
                .map_err(|e| CliError::io(&name, e))
        }
        None => result
            .write_csv(io::stdout().lock())
            .map_err(|e| CliError::io("stdout", e)),
    }
}

fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    if args.n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    if !args.metric.is_binary() && args.k < 2 {
        return Err(CliError::Usage("--k must be at least 2".into()));
    }
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if let Some(eps) = args.eps {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(CliError::Usage(format!("--eps {eps} must be positive")));
        }
    }

    // instance generation uses a stream disjoint from the per-trial streams
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    rng.set_stream(u64::MAX);
    let mut found = None;
    for _ in 0..MAX_INSTANCE_ATTEMPTS {
        let (instance, w) = random_instance(args.metric, args.n, args.k, &mut rng)?;
        match eps_limit(args.metric, &instance, &w) {
            Ok(limit) => {
                found = Some((instance, w, limit));
                break;
            }
            Err(MetricError::DegenerateLabels(_) | MetricError::PreconditionViolated(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let (instance, w, limit) = found.ok_or(CliError::Preconditions(MAX_INSTANCE_ATTEMPTS))?;

    let eps = args.eps.unwrap_or(limit / 2.0);
    let report = verify_bound(args.metric, &instance, &w, eps, args.trials, args.seed)?;
    println!("{report}");
    if report.violations > 0 {
        return Err(CliError::Violations(report.violations));
    }
    Ok(())
}
