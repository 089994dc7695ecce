//! Timed solver runs and their CSV report.

use std::fmt;
use std::io::Write;
use std::time::{Duration, Instant};

use osp_core::{Dag, GraphError, LabelingSolver, SolveError, SolveResult, SolverVariant};
use rayon::prelude::*;

use crate::experiment::{ExperimentSpec, InstanceSpec};

/// Schema line written before the CSV header.
pub const CSV_VERSION_LINE: &str = "# osp-bench-csv v1";

pub const CSV_COLUMNS: [&str; 12] =
    ["family", "n", "m", "k", "p", "seed", "variant", "status", "wall_secs", "front_size", "peak_labels", "iterations"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    Timeout,
    NoPath,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Ok => "ok",
            RunStatus::Timeout => "timeout",
            RunStatus::NoPath => "no-path",
        })
    }
}

/// One solver run. Metrics are present exactly when the status is `Ok`,
/// except `wall_secs`, which a timeout also records.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub family: String,
    pub n: usize,
    pub m: Option<usize>,
    pub k: u32,
    pub p: Option<f64>,
    pub seed: u64,
    pub variant: SolverVariant,
    pub status: RunStatus,
    pub wall_secs: Option<f64>,
    pub front_size: Option<usize>,
    pub peak_labels: Option<usize>,
    pub iterations: Option<u64>,
}

impl RunRecord {
    fn blank(family: String, n: usize, k: u32, p: Option<f64>, seed: u64, variant: SolverVariant) -> Self {
        RunRecord {
            family,
            n,
            m: None,
            k,
            p,
            seed,
            variant,
            status: RunStatus::NoPath,
            wall_secs: None,
            front_size: None,
            peak_labels: None,
            iterations: None,
        }
    }
}

impl RunRecord {
    /// Record of a finished run.
    pub fn from_result(
        g: &Dag,
        family: &str,
        p: Option<f64>,
        seed: u64,
        variant: SolverVariant,
        result: &SolveResult,
    ) -> Self {
        let mut rec = RunRecord::blank(family.to_string(), g.node_count(), g.scale().k(), p, seed, variant);
        rec.m = Some(g.arc_count());
        rec.status = RunStatus::Ok;
        rec.wall_secs = Some(result.stats.wall_time.as_secs_f64());
        rec.front_size = Some(result.front.len());
        rec.peak_labels = Some(result.stats.max_peak());
        rec.iterations = Some(result.stats.iterations);
        rec
    }
}

/// Runs `variant` on `g` under `timeout` and records the outcome.
pub fn run_graph(
    g: &Dag,
    family: &str,
    p: Option<f64>,
    seed: u64,
    variant: SolverVariant,
    timeout: Duration,
) -> RunRecord {
    let started = Instant::now();
    match LabelingSolver::new(g, variant).timeout(timeout).run() {
        Ok(run) => RunRecord::from_result(g, family, p, seed, variant, &run.into_result()),
        Err(err) => {
            let mut rec = RunRecord::blank(family.to_string(), g.node_count(), g.scale().k(), p, seed, variant);
            rec.m = Some(g.arc_count());
            if let SolveError::Timeout(_) = err {
                rec.status = RunStatus::Timeout;
                rec.wall_secs = Some(started.elapsed().as_secs_f64());
            }
            rec
        }
    }
}

fn run_instance(
    inst: &InstanceSpec,
    variants: &[SolverVariant],
    timeout: Duration,
) -> Result<Vec<RunRecord>, GraphError> {
    let family = inst.family().to_string();
    match inst.build_resampled() {
        Ok((g, seed)) => Ok(variants.iter().map(|&v| run_graph(&g, &family, inst.p(), seed, v, timeout)).collect()),
        Err(GraphError::NoPath) => Ok(variants
            .iter()
            .map(|&v| RunRecord::blank(family.clone(), inst.nodes(), inst.scale().k(), inst.p(), inst.seed, v))
            .collect()),
        Err(e) => Err(e),
    }
}

/// Every `(instance, variant)` run of the sweep, in sweep order.
///
/// Instances run on `jobs` worker threads; each run is single-threaded.
/// Fails on parameters the generators reject.
pub fn run_bench(spec: &ExperimentSpec, jobs: usize) -> Result<Vec<RunRecord>, GraphError> {
    let instances = spec.instances();
    let work = || -> Result<Vec<Vec<RunRecord>>, GraphError> {
        instances.par_iter().map(|inst| run_instance(inst, &spec.variants, spec.timeout)).collect()
    };
    let rows = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }?;
    Ok(rows.into_iter().flatten().collect())
}

/// Minimum, mean and maximum of one metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spread {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

impl Spread {
    fn of(values: impl Iterator<Item = f64>) -> Option<Spread> {
        let (mut min, mut max, mut sum, mut count) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
        for v in values {
            min = min.min(v);
            max = max.max(v);
            sum += v;
            count += 1;
        }
        // the mean of floats can drift outside [min, max] by rounding
        (count > 0).then(|| Spread { min, mean: (sum / count as f64).clamp(min, max), max })
    }
}

/// Aggregate over the `ok` runs sharing family, size, scale, probability
/// and variant.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub family: String,
    pub n: usize,
    pub k: u32,
    pub p: Option<f64>,
    pub variant: SolverVariant,
    pub runs: usize,
    pub wall_secs: Spread,
    pub front_size: Spread,
    pub peak_labels: Spread,
    pub iterations: Spread,
}

/// Summaries in order of first appearance; groups without a successful run
/// are omitted.
pub fn summarize(records: &[RunRecord]) -> Vec<Summary> {
    let key = |r: &RunRecord| (r.family.clone(), r.n, r.k, r.p.map(f64::to_bits), r.variant);
    let mut keys = Vec::new();
    for r in records {
        if !keys.contains(&key(r)) {
            keys.push(key(r));
        }
    }
    keys.into_iter()
        .filter_map(|kk| {
            let ok: Vec<&RunRecord> = records.iter().filter(|r| key(r) == kk && r.status == RunStatus::Ok).collect();
            let first = *ok.first()?;
            let spread = |f: &dyn Fn(&RunRecord) -> Option<f64>| Spread::of(ok.iter().filter_map(|r| f(r)));
            Some(Summary {
                family: first.family.clone(),
                n: first.n,
                k: first.k,
                p: first.p,
                variant: first.variant,
                runs: ok.len(),
                wall_secs: spread(&|r| r.wall_secs)?,
                front_size: spread(&|r| r.front_size.map(|v| v as f64))?,
                peak_labels: spread(&|r| r.peak_labels.map(|v| v as f64))?,
                iterations: spread(&|r| r.iterations.map(|v| v as f64))?,
            })
        })
        .collect()
}

/// Seconds with three decimals; with `paper_style`, values below 0.1 s
/// print as `0.1*`.
pub fn format_secs(secs: f64, paper_style: bool) -> String {
    if paper_style && secs < 0.1 {
        "0.1*".to_string()
    } else {
        format!("{secs:.3}")
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn record_row(r: &RunRecord, paper_style: bool) -> Vec<String> {
    vec![
        r.family.clone(),
        r.n.to_string(),
        opt(r.m),
        r.k.to_string(),
        opt(r.p),
        r.seed.to_string(),
        r.variant.to_string(),
        r.status.to_string(),
        r.wall_secs.map(|s| format_secs(s, paper_style)).unwrap_or_default(),
        opt(r.front_size),
        opt(r.peak_labels),
        opt(r.iterations),
    ]
}

fn summary_rows(s: &Summary, paper_style: bool) -> Vec<Vec<String>> {
    let count = |v: f64| if v.fract() == 0.0 { format!("{v}") } else { format!("{v:.3}") };
    type Pick = (&'static str, fn(&Spread) -> f64);
    let pick: [Pick; 3] = [("min", |x| x.min), ("mean", |x| x.mean), ("max", |x| x.max)];
    pick.iter()
        .map(|(label, f)| {
            vec![
                s.family.clone(),
                s.n.to_string(),
                String::new(),
                s.k.to_string(),
                opt(s.p),
                String::new(),
                s.variant.to_string(),
                label.to_string(),
                format_secs(f(&s.wall_secs), paper_style),
                count(f(&s.front_size)),
                count(f(&s.peak_labels)),
                count(f(&s.iterations)),
            ]
        })
        .collect()
}

/// Writes the version line, the header, one row per record and then three
/// rows (`min`, `mean`, `max` in the status column) per summary.
pub fn write_csv<W: Write>(
    mut out: W,
    records: &[RunRecord],
    summaries: &[Summary],
    paper_style: bool,
) -> csv::Result<()> {
    writeln!(out, "{CSV_VERSION_LINE}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.write_record(record_row(r, paper_style))?;
    }
    for s in summaries {
        for row in summary_rows(s, paper_style) {
            w.write_record(row)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::Family;
    use osp_core::OrdinalScale;

    fn small_spec() -> ExperimentSpec {
        let mut spec = ExperimentSpec::new(Family::RandomDag);
        spec.ns = vec![8];
        spec.ps = vec![0.4];
        spec.ks = vec![OrdinalScale::new(3).unwrap()];
        spec.seeds = 0..4;
        spec.variants = vec![SolverVariant::Mod1, SolverVariant::Mod2];
        spec
    }

    #[test]
    fn bench_rows_and_summaries() {
        let records = run_bench(&small_spec(), 1).unwrap();
        assert_eq!(records.len(), 8);
        assert!(records.iter().all(|r| r.status == RunStatus::Ok && r.front_size.is_some()));
        let summaries = summarize(&records);
        assert_eq!(summaries.len(), 2);
        for s in &summaries {
            assert_eq!(s.runs, 4);
            for sp in [s.wall_secs, s.front_size, s.peak_labels, s.iterations] {
                assert!(sp.min <= sp.mean && sp.mean <= sp.max);
            }
        }
    }

    #[test]
    fn csv_layout() {
        let records = run_bench(&small_spec(), 1).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &records, &summarize(&records), false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_VERSION_LINE);
        assert_eq!(lines[1], CSV_COLUMNS.join(","));
        assert_eq!(lines.len(), 2 + 8 + 2 * 3);
        assert!(lines[2].starts_with("random-dag,8,"));
        assert!(lines[10].contains(",mod1,min,"));
    }

    #[test]
    fn empty_seed_range_gives_header_only() {
        let mut spec = small_spec();
        spec.seeds = 0..0;
        let records = run_bench(&spec, 2).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &records, &summarize(&records), false).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 2);
    }

    #[test]
    fn bad_shapes_abort_the_sweep() {
        let mut spec = ExperimentSpec::new(Family::Exponential);
        spec.ns = vec![5];
        assert!(matches!(run_bench(&spec, 1), Err(GraphError::BadShape(_))));
    }

    #[test]
    fn timeouts_are_recorded() {
        let g = osp_core::generate::gen_grid(30, 30, OrdinalScale::new(10).unwrap(), 0).unwrap();
        let r = run_graph(&g, "grid", None, 0, SolverVariant::Base, Duration::ZERO);
        assert_eq!(r.status, RunStatus::Timeout);
        assert!(r.wall_secs.is_some() && r.front_size.is_none());
    }

    #[test]
    fn paper_style_masks_small_times() {
        assert_eq!(format_secs(0.0421, false), "0.042");
        assert_eq!(format_secs(0.0421, true), "0.1*");
        assert_eq!(format_secs(2.5, true), "2.500");
    }

    #[test]
    fn spread_bounds() {
        let s = Spread::of([0.1, 0.1, 0.1].into_iter()).unwrap();
        assert!(s.min <= s.mean && s.mean <= s.max);
        assert!(Spread::of(std::iter::empty()).is_none());
    }
}
