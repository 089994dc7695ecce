//! Lexicographically maximal frequency vector over source-sink paths.
//!
//! A path maximising `(h(P,1), ..., h(P,K))` lexicographically is not
//! dominated by any path of the same length, though a shorter path may
//! dominate it. Two routes compute it: a dynamic program over frequency
//! vectors in topological order, and a longest-path computation on integer
//! arc weights whose decimal digit blocks encode the levels.

use num_bigint::BigUint;
use num_traits::{Pow, Zero};
use thiserror::Error;

use crate::graph::{Dag, NodeId};
use crate::labeling::{solve, SolveError, SolverVariant};
use crate::ordinal::FrequencyVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexMaxError {
    #[error("graph contains a cycle")]
    CycleDetected,
    #[error("sink is not reachable from source")]
    NoPath,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexMaxSolution {
    pub freq: FrequencyVector,
    pub path: Vec<NodeId>,
}

/// Predecessor links for a DP over `topo`: relax every arc out of each
/// reached node once, keeping the first-found best value per node.
fn forward_dp<V: Clone>(
    g: &Dag,
    start: V,
    mut step: impl FnMut(&V, u32) -> V,
    better: impl Fn(&V, &V) -> bool,
) -> Result<(V, Vec<NodeId>), LexMaxError> {
    let topo = g.topological_order().map_err(|_| LexMaxError::CycleDetected)?;
    let mut best: Vec<Option<(V, Option<NodeId>)>> = vec![None; g.node_count()];
    best[g.source().index()] = Some((start, None));
    for v in topo {
        let Some((value, _)) = best[v.index()].clone() else { continue };
        for arc in g.out_arcs(v) {
            let candidate = step(&value, arc.level);
            let slot = &mut best[arc.head.index()];
            let replace = match slot {
                None => true,
                Some((incumbent, _)) => better(&candidate, incumbent),
            };
            if replace {
                *slot = Some((candidate, Some(v)));
            }
        }
    }
    let sink = g.sink();
    let (value, _) = best[sink.index()].clone().ok_or(LexMaxError::NoPath)?;
    let mut path = vec![sink];
    let mut cur = sink;
    while let Some((_, Some(prev))) = &best[cur.index()] {
        path.push(*prev);
        cur = *prev;
    }
    path.reverse();
    Ok((value, path))
}

fn path_freq(g: &Dag, path: &[NodeId]) -> FrequencyVector {
    let levels = g.path_levels(path).expect("DP path follows arcs");
    FrequencyVector::from_levels(&levels, g.scale()).expect("levels within scale")
}

/// Lexicographic DP. Correct because adding the same arc to two paths
/// preserves their lexicographic order.
pub fn lexmax_dp(g: &Dag) -> Result<LexMaxSolution, LexMaxError> {
    let (freq, path) = forward_dp(g, FrequencyVector::zeros(g.scale()), |f, level| f.incremented(level), |a, b| a > b)?;
    Ok(LexMaxSolution { freq, path })
}

/// Integer arc weights encoding the lexicographic order.
///
/// Level `k` gets a block of `d_k` decimal digits, the number of digits of
/// `m_k` (arcs at level `k`), so no path count can carry into the next block.
/// Blocks are laid out best level most significant: an arc at level `k`
/// weighs `10^(D - d_1 - ... - d_k)` with `D = d_1 + ... + d_K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitWeights {
    pub arcs_per_level: Vec<usize>,
    pub digits: Vec<u32>,
    pub weights: Vec<BigUint>,
}

fn decimal_digits(mut m: usize) -> u32 {
    let mut d = 0;
    while m > 0 {
        d += 1;
        m /= 10;
    }
    d
}

impl DigitWeights {
    pub fn for_graph(g: &Dag) -> Self {
        let k = g.scale().k() as usize;
        let mut arcs_per_level = vec![0usize; k];
        for arc in g.arcs() {
            arcs_per_level[arc.level as usize - 1] += 1;
        }
        let digits: Vec<u32> = arcs_per_level.iter().map(|&m| decimal_digits(m)).collect();
        let total: u32 = digits.iter().sum();
        let ten = BigUint::from(10u32);
        let mut used = 0;
        let weights = digits
            .iter()
            .map(|&d| {
                used += d;
                Pow::pow(&ten, total - used)
            })
            .collect();
        DigitWeights { arcs_per_level, digits, weights }
    }

    pub fn weight(&self, level: u32) -> &BigUint {
        &self.weights[level as usize - 1]
    }

    /// Total weight of a frequency vector.
    pub fn score(&self, freq: &FrequencyVector) -> BigUint {
        freq.counts().iter().zip(&self.weights).map(|(&c, w)| w * c).sum()
    }
}

/// Longest path under [`DigitWeights`], in one pass over the arcs.
pub fn lexmax_longest_path(g: &Dag) -> Result<LexMaxSolution, LexMaxError> {
    let weights = DigitWeights::for_graph(g);
    let (_, path) = forward_dp(g, BigUint::zero(), |score, level| score + weights.weight(level), |a, b| a > b)?;
    let freq = path_freq(g, &path);
    Ok(LexMaxSolution { freq, path })
}

/// Whether `freq`'s sorted vector is on the front computed by the labeling
/// solver.
pub fn certify_nondominated(g: &Dag, freq: &FrequencyVector) -> Result<bool, SolveError> {
    let front = solve(g, SolverVariant::Mod2)?.front;
    Ok(front.contains(&freq.to_sorted()))
}
