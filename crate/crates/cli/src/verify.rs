//! Solver-against-oracle verification over a sweep.

use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use osp_core::io::write_instance;
use osp_core::oracle::{count_efficient_paths, oracle_front, OracleError};
use osp_core::ordinal::label_bound;
use osp_core::{Dag, GraphError, OrdinalVector, SolveError, SolveResult, SolverVariant};
use thiserror::Error;

use crate::experiment::{ExperimentSpec, InstanceSpec, Shape};

/// Solver under test; [`osp_core::solve`] in production.
pub type Solver<'a> = dyn Fn(&Dag, SolverVariant) -> Result<SolveResult, SolveError> + 'a;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("instance {seed}: {source}")]
    Oracle { seed: u64, source: OracleError },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("writing reproduction: {0}")]
    Io(#[from] io::Error),
}

/// A failed instance and where its reproduction was written.
#[derive(Debug, Clone)]
pub struct Mismatch {
    pub instance: InstanceSpec,
    pub description: String,
    pub repro: Option<PathBuf>,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub instances: usize,
    /// Seeds whose sink stayed unreachable after resampling.
    pub skipped: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks every variant on `g` against the oracle: equal fronts, valid
/// simple representatives realizing their vectors, and peak label counts
/// within the bound. Returns a description of the first violation.
pub fn check_instance(
    g: &Dag,
    variants: &[SolverVariant],
    solver: &Solver,
    cap: u64,
) -> Result<Option<String>, OracleError> {
    let expected = oracle_front(g, cap)?;
    let bound = label_bound(g.node_count() as u64, g.scale());
    let mut first_front: Option<(SolverVariant, Vec<_>)> = None;
    for &variant in variants {
        let result = match solver(g, variant) {
            Ok(r) => r,
            Err(e) => return Ok(Some(format!("{variant}: solver failed: {e}"))),
        };
        if result.front != expected {
            return Ok(Some(format!(
                "{variant}: front {:?} differs from oracle {:?}",
                show(&result.front),
                show(&expected)
            )));
        }
        if let Some((other, front)) = &first_front {
            if front != &result.front {
                return Ok(Some(format!("{variant} and {other} disagree")));
            }
        } else {
            first_front = Some((variant, result.front.clone()));
        }
        for (vector, path) in &result.representatives {
            let levels = match g.path_levels(path) {
                Some(l) => l,
                None => return Ok(Some(format!("{variant}: representative of {vector} does not follow arcs"))),
            };
            let distinct: BTreeSet<_> = path.iter().collect();
            if path.first() != Some(&g.source())
                || path.last() != Some(&g.sink())
                || distinct.len() != path.len()
                || &OrdinalVector::new(levels).sorted() != vector
            {
                return Ok(Some(format!(
                    "{variant}: representative of {vector} is not a simple s-t path with that vector"
                )));
            }
        }
        if let Some(peak) = result.stats.peak_labels.iter().find(|&&p| BigUint::from(p) > bound) {
            return Ok(Some(format!("{variant}: {peak} labels at one node exceed the bound {bound}")));
        }
    }
    Ok(None)
}

fn show(front: &[osp_core::SortedOrdinalVector]) -> Vec<String> {
    front.iter().map(ToString::to_string).collect()
}

/// Expected path counts on exponential instances.
fn check_exponential(g: &Dag, n: usize, cap: u64) -> Result<Option<String>, OracleError> {
    let expected = 1u64 << ((n - 1) / 3);
    let count = count_efficient_paths(g, cap)?;
    let front = oracle_front(g, cap)?;
    if count != expected || front.len() != 1 {
        return Ok(Some(format!(
            "exponential n={n}: {count} efficient paths and {} vectors, expected {expected} and 1",
            front.len()
        )));
    }
    Ok(None)
}

/// Greedily drops arcs while the instance stays valid and still fails.
pub fn minimize(g: &Dag, fails: &dyn Fn(&Dag) -> bool) -> Dag {
    let mut current = g.clone();
    let mut i = 0;
    while i < current.arc_count() {
        let mut arcs = current.arcs().to_vec();
        arcs.remove(i);
        let smaller = Dag::new(current.node_count(), current.scale(), current.source(), current.sink(), arcs);
        match smaller {
            Ok(s) if s.validate().is_valid() && fails(&s) => current = s,
            _ => i += 1,
        }
    }
    current
}

fn write_repro(dir: &Path, inst: &InstanceSpec, g: &Dag, description: &str) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let p = inst.p().map(|p| format!("-p{p}")).unwrap_or_default();
    let stem = format!("{}-n{}-k{}{p}-seed{}", inst.family(), inst.nodes(), inst.scale().k(), inst.seed);
    let path = dir.join(format!("{stem}.txt"));
    let header =
        format!("# {description}\n# family {} seed {} ({} arcs kept)\n", inst.family(), inst.seed, g.arc_count());
    fs::write(&path, header + &write_instance(g))?;
    Ok(path)
}

/// Runs [`check_instance`] (and the path-count check on exponential
/// instances) over every instance of `spec`. Failing instances are shrunk
/// and written to `artifacts` when given.
pub fn verify(
    spec: &ExperimentSpec,
    solver: &Solver,
    cap: u64,
    artifacts: Option<&Path>,
) -> Result<VerifyReport, VerifyError> {
    let mut report = VerifyReport::default();
    for inst in spec.instances() {
        let (g, seed) = match inst.build_resampled() {
            Ok(built) => built,
            Err(GraphError::NoPath) => {
                report.skipped += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let inst = InstanceSpec { seed, ..inst };
        report.instances += 1;
        let oracle_err = |source| VerifyError::Oracle { seed, source };
        let mut failure = check_instance(&g, &spec.variants, solver, cap).map_err(oracle_err)?;
        let shrinkable = failure.is_some();
        if failure.is_none() {
            if let Shape::Exponential { n, .. } = inst.shape {
                failure = check_exponential(&g, n, cap).map_err(oracle_err)?;
            }
        }
        let Some(description) = failure else { continue };
        let repro = match artifacts {
            Some(dir) => {
                let out = if shrinkable {
                    minimize(&g, &|h| matches!(check_instance(h, &spec.variants, solver, cap), Ok(Some(_))))
                } else {
                    g.clone()
                };
                Some(write_repro(dir, &inst, &out, &description)?)
            }
            None => None,
        };
        report.mismatches.push(Mismatch { instance: inst, description, repro });
    }
    Ok(report)
}
