use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use osp_cli::{
    run_bench, summarize, verify, write_csv, ExperimentSpec, Family, Fixture, InstanceSpec, RunRecord, Seeds, Shape,
};
use osp_core::io::{read_instance, write_instance};
use osp_core::lexmax::{certify_nondominated, lexmax_dp, lexmax_longest_path};
use osp_core::oracle::{count_efficient_paths, oracle_front, OracleError, DEFAULT_PATH_CAP};
use osp_core::{Dag, LabelingSolver, Level, NodeId, OrdinalScale, SolveError, SolverVariant};

/// Exit status when the oracle's path cap is reached.
const EXIT_CAP: u8 = 3;
/// Exit status when verification finds a mismatch.
const EXIT_MISMATCH: u8 = 4;
/// Exit status when a solve exceeds its time limit.
const EXIT_TIMEOUT: u8 = 5;

#[derive(Parser)]
#[command(name = "osp", version, about = "Ordinal shortest paths on DAGs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one generated instance.
    Generate {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance file and print the front.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "mod2")]
        variant: SolverVariant,
        #[arg(long, default_value_t = 300)]
        timeout_secs: u64,
        /// Append a CSV run record to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        paper_style: bool,
    },
    /// Enumerate all paths of an instance file.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PATH_CAP)]
        cap: u64,
    },
    /// Lexicographically best frequency vector of an instance file.
    Lexmax {
        file: PathBuf,
        /// Also check membership in the labeling front.
        #[arg(long)]
        certify: bool,
    },
    /// Timed sweep, written as CSV.
    Bench {
        #[command(flatten)]
        sweep: SweepArgs,
        /// CSV file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        paper_style: bool,
        /// Instances solved concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Compare solvers with the oracle over a sweep.
    Verify {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value_t = DEFAULT_PATH_CAP)]
        cap: u64,
        /// Directory for reproductions of failing instances.
        #[arg(long, default_value = "verify-artifacts")]
        artifacts: PathBuf,
    },
}

#[derive(Args)]
struct ShapeArgs {
    #[arg(long, default_value = "random-dag")]
    family: Family,
    /// Node count (random-dag, exponential).
    #[arg(long, default_value_t = 25)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    width: usize,
    #[arg(long, default_value_t = 8)]
    height: usize,
    /// Arc level for exponential and antisymmetry instances.
    #[arg(long, default_value_t = 1)]
    level: Level,
    #[arg(long, default_value = "bellman")]
    fixture: Fixture,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value = "random-dag")]
    family: Family,
    #[arg(long, value_delimiter = ',', default_value = "25")]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "8")]
    width: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "8")]
    height: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "3")]
    k: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    p: Vec<f64>,
    /// Seed range `a..b` or a single seed.
    #[arg(long, default_value = "0..10", conflicts_with = "seed")]
    seeds: Seeds,
    /// Single seed, same as `--seeds s..s+1`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "variant", value_delimiter = ',', default_value = "base,mod1,mod2")]
    variants: Vec<SolverVariant>,
    #[arg(long, default_value_t = 300)]
    timeout_secs: u64,
    #[arg(long, default_value_t = 1)]
    level: Level,
    #[arg(long, default_value = "bellman")]
    fixture: Fixture,
}

fn scale(k: u32) -> Result<OrdinalScale> {
    Ok(OrdinalScale::new(k)?)
}

impl SweepArgs {
    fn spec(&self) -> Result<ExperimentSpec> {
        for &p in &self.p {
            if !(p > 0.0 && p <= 1.0) {
                bail!("arc probability must be in (0, 1], got {p}");
            }
        }
        Ok(ExperimentSpec {
            family: self.family,
            ns: self.n.clone(),
            widths: self.width.clone(),
            heights: self.height.clone(),
            ks: self.k.iter().map(|&k| scale(k)).collect::<Result<_>>()?,
            ps: self.p.clone(),
            seeds: self.seed.map_or(self.seeds.0.clone(), |s| s..s + 1),
            variants: self.variants.clone(),
            timeout: Duration::from_secs(self.timeout_secs),
            level: self.level,
            fixture: self.fixture,
        })
    }
}

fn load(file: &Path) -> Result<Dag> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    read_instance(&text).with_context(|| format!("parsing {}", file.display()))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn one_based(path: &[NodeId]) -> String {
    path.iter().map(|v| (v.index() + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn generate(shape: ShapeArgs, k: u32, p: f64, seed: u64, out: Option<PathBuf>) -> Result<()> {
    let shape = match shape.family {
        Family::RandomDag => Shape::RandomDag { n: shape.n, p },
        Family::Grid => Shape::Grid { width: shape.width, height: shape.height },
        Family::Exponential => Shape::Exponential { n: shape.n, level: shape.level },
        Family::Fixture => Shape::Fixture { fixture: shape.fixture, level: shape.level },
    };
    let inst = InstanceSpec { shape, k: scale(k)?, seed };
    let g = inst.build().with_context(|| format!("generating {} instance with seed {seed}", inst.family()))?;
    write_output(out.as_deref(), &write_instance(&g))
}

fn solve(file: &Path, variant: SolverVariant, timeout_secs: u64, out: Option<&Path>, paper_style: bool) -> Result<()> {
    let g = load(file)?;
    let timeout = Duration::from_secs(timeout_secs);
    let result = LabelingSolver::new(&g, variant).timeout(timeout).run()?.into_result();
    let mut text = String::new();
    for (vector, path) in &result.representatives {
        text.push_str(&format!("{vector}\n  path {}\n", one_based(path)));
    }
    let stats = &result.stats;
    text.push_str(&format!(
        "# variant {variant} front {} iterations {} labels {} peak {} wall {}\n",
        result.front.len(),
        stats.iterations,
        stats.labels_created,
        stats.max_peak(),
        osp_cli::bench::format_secs(stats.wall_time.as_secs_f64(), paper_style),
    ));
    io::stdout().write_all(text.as_bytes())?;
    if let Some(out) = out {
        let rec = RunRecord::from_result(&g, "file", None, 0, variant, &result);
        let mut buf = Vec::new();
        write_csv(&mut buf, &[rec], &[], paper_style)?;
        let mut body = String::from_utf8(buf)?;
        let existing = fs::read_to_string(out).unwrap_or_default();
        if !existing.is_empty() {
            // keep the file's version line and header
            body = existing + &body.lines().skip(2).map(|l| format!("{l}\n")).collect::<String>();
        }
        fs::write(out, body).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}

fn oracle(file: &Path, cap: u64) -> Result<()> {
    let g = load(file)?;
    let front = oracle_front(&g, cap)?;
    let count = count_efficient_paths(&g, cap)?;
    let mut text: String = front.iter().map(|v| format!("{v}\n")).collect();
    text.push_str(&format!("# efficient paths {count}\n"));
    write_output(None, &text)
}

fn lexmax(file: &Path, certify: bool) -> Result<()> {
    let g = load(file)?;
    let dp = lexmax_dp(&g)?;
    let lp = lexmax_longest_path(&g)?;
    if dp.freq != lp.freq {
        bail!("lexmax routes disagree: {} against {}", dp.freq, lp.freq);
    }
    let mut text = format!("{}\n  path {}\n# counts {}\n", dp.freq.to_sorted(), one_based(&lp.path), dp.freq);
    if certify {
        text.push_str(&format!("# nondominated {}\n", certify_nondominated(&g, &dp.freq)?));
    }
    write_output(None, &text)
}

fn bench(sweep: SweepArgs, out: Option<PathBuf>, paper_style: bool, jobs: usize) -> Result<()> {
    let spec = sweep.spec()?;
    let records = run_bench(&spec, jobs)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &records, &summarize(&records), paper_style)?;
    write_output(out.as_deref(), &String::from_utf8(buf)?)
}

#[derive(Debug)]
struct Mismatched(usize);

impl std::fmt::Display for Mismatched {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed on {} instances", self.0)
    }
}

impl std::error::Error for Mismatched {}

fn run_verify(sweep: SweepArgs, cap: u64, artifacts: &Path) -> Result<()> {
    let spec = sweep.spec()?;
    let report = verify(&spec, &osp_core::solve, cap, Some(artifacts))?;
    println!("checked {} instances, {} skipped without a path", report.instances, report.skipped);
    for m in &report.mismatches {
        let repro = m.repro.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        println!("FAIL seed {}: {} ({repro})", m.instance.seed, m.description);
    }
    if report.passed() {
        println!("pass");
        Ok(())
    } else {
        Err(Mismatched(report.mismatches.len()).into())
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Mismatched>().is_some() {
        return EXIT_MISMATCH;
    }
    for cause in err.chain() {
        if let Some(OracleError::CapExceeded { .. }) = cause.downcast_ref::<OracleError>() {
            return EXIT_CAP;
        }
        if let Some(SolveError::Timeout(_)) = cause.downcast_ref::<SolveError>() {
            return EXIT_TIMEOUT;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate { shape, k, p, seed, out } => generate(shape, k, p, seed, out),
        Command::Solve { file, variant, timeout_secs, out, paper_style } => {
            solve(&file, variant, timeout_secs, out.as_deref(), paper_style)
        }
        Command::Oracle { file, cap } => oracle(&file, cap),
        Command::Lexmax { file, certify } => lexmax(&file, certify),
        Command::Bench { sweep, out, paper_style, jobs } => bench(sweep, out, paper_style, jobs),
        Command::Verify { sweep, cap, artifacts } => run_verify(sweep, cap, &artifacts),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
