//! Brute-force ground truth by explicit path enumeration.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Dag, NodeId};
use crate::ordinal::{frontier_filter, FrequencyVector, OrdinalVector, SortedOrdinalVector};

pub const DEFAULT_PATH_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("path enumeration cap of {cap} reached")]
    CapExceeded { cap: u64, partial: u64 },
    #[error("graph contains a cycle")]
    CycleDetected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathRecord {
    pub nodes: Vec<NodeId>,
    pub vector: OrdinalVector,
    pub sorted: SortedOrdinalVector,
    pub freq: FrequencyVector,
}

/// Every source-sink path, in lexicographic order of node sequences.
///
/// Paths are not extended past the sink. Fails once more than `cap` paths
/// have been found.
pub fn enumerate_paths(g: &Dag, cap: u64) -> Result<Vec<PathRecord>, OracleError> {
    g.topological_order().map_err(|_| OracleError::CycleDetected)?;
    let (source, sink) = (g.source(), g.sink());
    let mut out = Vec::new();
    let mut nodes = vec![source];
    let mut levels = Vec::new();
    // each frame: node and index of the next out-arc to try
    let mut stack: Vec<(NodeId, usize)> = vec![(source, 0)];
    if source == sink {
        stack.clear();
        out.push(record(g, nodes.clone(), Vec::new()));
    }
    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        let arc = g.out_arcs(v).nth(*next);
        *next += 1;
        match arc {
            None => {
                stack.pop();
                nodes.pop();
                levels.pop();
            }
            Some(arc) if arc.head == sink => {
                if out.len() as u64 >= cap {
                    return Err(OracleError::CapExceeded { cap, partial: out.len() as u64 });
                }
                let mut path = nodes.clone();
                path.push(sink);
                let mut lv = levels.clone();
                lv.push(arc.level);
                out.push(record(g, path, lv));
            }
            Some(arc) => {
                nodes.push(arc.head);
                levels.push(arc.level);
                stack.push((arc.head, 0));
            }
        }
    }
    Ok(out)
}

fn record(g: &Dag, nodes: Vec<NodeId>, levels: Vec<u32>) -> PathRecord {
    let vector = OrdinalVector::new(levels);
    let sorted = vector.sorted();
    let freq = FrequencyVector::from_levels(vector.levels(), g.scale()).expect("arc levels within scale");
    PathRecord { nodes, vector, sorted, freq }
}

/// Distinct sorted path vectors with no one-sided dominator among them.
pub fn oracle_front(g: &Dag, cap: u64) -> Result<Vec<SortedOrdinalVector>, OracleError> {
    let paths = enumerate_paths(g, cap)?;
    Ok(front_of(&paths))
}

fn front_of(paths: &[PathRecord]) -> Vec<SortedOrdinalVector> {
    let all: Vec<_> = paths.iter().map(|p| p.sorted.clone()).collect();
    frontier_filter(&all)
}

/// Number of paths whose sorted vector lies on the front, counting
/// equivalent paths separately.
pub fn count_efficient_paths(g: &Dag, cap: u64) -> Result<u64, OracleError> {
    let paths = enumerate_paths(g, cap)?;
    let front: BTreeSet<_> = front_of(&paths).into_iter().collect();
    Ok(paths.iter().filter(|p| front.contains(&p.sorted)).count() as u64)
}

/// For every node, the distinct frequency vectors of all paths from the
/// source, by set propagation in topological order. Exponential in the worst
/// case like enumeration, but without per-path records.
pub fn reachable_vectors(g: &Dag) -> Result<Vec<BTreeSet<FrequencyVector>>, OracleError> {
    let topo = g.topological_order().map_err(|_| OracleError::CycleDetected)?;
    let mut sets = vec![BTreeSet::new(); g.node_count()];
    sets[g.source().index()].insert(FrequencyVector::zeros(g.scale()));
    for v in topo {
        if sets[v.index()].is_empty() {
            continue;
        }
        let here = std::mem::take(&mut sets[v.index()]);
        for arc in g.out_arcs(v) {
            let extended: Vec<_> = here.iter().map(|f| f.incremented(arc.level)).collect();
            sets[arc.head.index()].extend(extended);
        }
        sets[v.index()] = here;
    }
    Ok(sets)
}
