//! Experiment specifications and instance construction.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::time::Duration;

use osp_core::generate::{
    gen_acyclic_reencoding_fixture, gen_antisymmetry_fixture, gen_bellman_fixture, gen_exponential_instance, gen_grid,
    gen_random_dag,
};
use osp_core::{Dag, GraphError, Level, OrdinalScale, SolverVariant};

/// Resampling attempts for random DAGs whose sink is unreachable.
pub const MAX_RESAMPLES: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    RandomDag,
    Grid,
    Exponential,
    Fixture,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::RandomDag => "random-dag",
            Family::Grid => "grid",
            Family::Exponential => "exponential",
            Family::Fixture => "fixture",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random-dag" => Ok(Family::RandomDag),
            "grid" => Ok(Family::Grid),
            "exponential" => Ok(Family::Exponential),
            "fixture" => Ok(Family::Fixture),
            _ => Err(format!("unknown family {s:?} (expected random-dag|grid|exponential|fixture)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fixture {
    Bellman,
    Antisymmetry,
    AcyclicReencoding,
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fixture::Bellman => "bellman",
            Fixture::Antisymmetry => "antisymmetry",
            Fixture::AcyclicReencoding => "acyclic-reencoding",
        })
    }
}

impl FromStr for Fixture {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bellman" => Ok(Fixture::Bellman),
            "antisymmetry" => Ok(Fixture::Antisymmetry),
            "acyclic-reencoding" => Ok(Fixture::AcyclicReencoding),
            _ => Err(format!("unknown fixture {s:?} (expected bellman|antisymmetry|acyclic-reencoding)")),
        }
    }
}

/// Seed range written `a..b` (half-open) or as a single seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seeds(pub Range<u64>);

impl FromStr for Seeds {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |_| format!("invalid seed range {s:?} (expected a..b or a single seed)");
        match s.split_once("..") {
            Some((a, b)) => Ok(Seeds(a.trim().parse().map_err(bad)?..b.trim().parse().map_err(bad)?)),
            None => {
                let a: u64 = s.trim().parse().map_err(bad)?;
                Ok(Seeds(a..a + 1))
            }
        }
    }
}

/// Shape parameters of one instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    RandomDag { n: usize, p: f64 },
    Grid { width: usize, height: usize },
    Exponential { n: usize, level: Level },
    Fixture { fixture: Fixture, level: Level },
}

/// One concrete instance: shape, scale and seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceSpec {
    pub shape: Shape,
    pub k: OrdinalScale,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn family(&self) -> Family {
        match self.shape {
            Shape::RandomDag { .. } => Family::RandomDag,
            Shape::Grid { .. } => Family::Grid,
            Shape::Exponential { .. } => Family::Exponential,
            Shape::Fixture { .. } => Family::Fixture,
        }
    }

    /// Requested node count.
    pub fn nodes(&self) -> usize {
        match self.shape {
            Shape::RandomDag { n, .. } | Shape::Exponential { n, .. } => n,
            Shape::Grid { width, height } => width * height,
            Shape::Fixture { fixture: Fixture::Bellman, .. } => 4,
            Shape::Fixture { fixture: Fixture::Antisymmetry, .. } => 3,
            Shape::Fixture { fixture: Fixture::AcyclicReencoding, .. } => 6,
        }
    }

    pub fn p(&self) -> Option<f64> {
        match self.shape {
            Shape::RandomDag { p, .. } => Some(p),
            _ => None,
        }
    }

    /// Scale of the built graph; two fixtures fix `K = 3`.
    pub fn scale(&self) -> OrdinalScale {
        match self.shape {
            Shape::Fixture { fixture: Fixture::Bellman | Fixture::AcyclicReencoding, .. } => {
                OrdinalScale::new(3).expect("non-zero")
            }
            _ => self.k,
        }
    }

    /// Builds the instance for exactly this seed.
    pub fn build(&self) -> Result<Dag, GraphError> {
        match self.shape {
            Shape::RandomDag { n, p } => gen_random_dag(n, p, self.k, self.seed),
            Shape::Grid { width, height } => gen_grid(width, height, self.k, self.seed),
            Shape::Exponential { n, level } => gen_exponential_instance(n, level, self.k),
            Shape::Fixture { fixture: Fixture::Bellman, .. } => Ok(gen_bellman_fixture()),
            Shape::Fixture { fixture: Fixture::Antisymmetry, level } => gen_antisymmetry_fixture(level, self.k),
            Shape::Fixture { fixture: Fixture::AcyclicReencoding, .. } => Ok(gen_acyclic_reencoding_fixture()),
        }
    }

    /// Builds the instance, moving to `seed + 1, seed + 2, ...` while the
    /// sink is unreachable. Returns the graph and the seed that produced it.
    pub fn build_resampled(&self) -> Result<(Dag, u64), GraphError> {
        let mut spec = *self;
        for _ in 0..MAX_RESAMPLES {
            match spec.build() {
                Err(GraphError::NoPath) => spec.seed = spec.seed.wrapping_add(1),
                other => return other.map(|g| (g, spec.seed)),
            }
        }
        Err(GraphError::NoPath)
    }
}

/// A sweep over instance parameters, seeds and solver variants.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub family: Family,
    /// Node counts for random DAGs and exponential instances.
    pub ns: Vec<usize>,
    pub widths: Vec<usize>,
    pub heights: Vec<usize>,
    pub ks: Vec<OrdinalScale>,
    pub ps: Vec<f64>,
    pub seeds: Range<u64>,
    pub variants: Vec<SolverVariant>,
    pub timeout: Duration,
    pub level: Level,
    pub fixture: Fixture,
}

impl ExperimentSpec {
    pub fn new(family: Family) -> Self {
        ExperimentSpec {
            family,
            ns: vec![25],
            widths: vec![8],
            heights: vec![8],
            ks: vec![OrdinalScale::new(3).expect("non-zero")],
            ps: vec![0.5],
            seeds: 0..10,
            variants: SolverVariant::ALL.to_vec(),
            timeout: Duration::from_secs(300),
            level: 1,
            fixture: Fixture::Bellman,
        }
    }

    fn shapes(&self) -> Vec<Shape> {
        match self.family {
            Family::RandomDag => {
                self.ns.iter().flat_map(|&n| self.ps.iter().map(move |&p| Shape::RandomDag { n, p })).collect()
            }
            Family::Grid => self
                .widths
                .iter()
                .flat_map(|&width| self.heights.iter().map(move |&height| Shape::Grid { width, height }))
                .collect(),
            Family::Exponential => self.ns.iter().map(|&n| Shape::Exponential { n, level: self.level }).collect(),
            Family::Fixture => vec![Shape::Fixture { fixture: self.fixture, level: self.level }],
        }
    }

    /// Every instance of the sweep, grouped by parameter triple with seeds
    /// innermost.
    pub fn instances(&self) -> Vec<InstanceSpec> {
        let mut out = Vec::new();
        for shape in self.shapes() {
            for &k in &self.ks {
                for seed in self.seeds.clone() {
                    out.push(InstanceSpec { shape, k, seed });
                }
            }
        }
        out
    }
}
