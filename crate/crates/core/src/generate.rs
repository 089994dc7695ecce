//! Instance generators.
//!
//! Random instances are drawn from `ChaCha8Rng::seed_from_u64(seed)`; the
//! draw order documented on each generator is part of the reproducibility
//! contract.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Arc, Dag, GraphError, NodeId};
use crate::ordinal::{Level, OrdinalScale};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_level(level: Level, k: OrdinalScale) -> Result<(), GraphError> {
    if k.contains(level) {
        Ok(())
    } else {
        Err(GraphError::BadShape(format!("level {level} outside 1..={k}")))
    }
}

/// Upper-triangular `G(n, p)` DAG.
///
/// For every pair `i < j` (row-major over `i`, then `j`) one Bernoulli(`p`)
/// draw decides the arc `i -> j`; an included arc then draws its level
/// uniformly from `1..=k`. Node `0` is the source and node `n - 1` the sink.
/// Fails with [`GraphError::NoPath`] when the sink is unreachable.
pub fn gen_random_dag(n: usize, p: f64, k: OrdinalScale, seed: u64) -> Result<Dag, GraphError> {
    let g = sample_random_dag(n, p, k, seed)?;
    if !g.validate().sink_reachable {
        return Err(GraphError::NoPath);
    }
    Ok(g)
}

/// The sample behind [`gen_random_dag`], without the reachability check.
pub fn sample_random_dag(n: usize, p: f64, k: OrdinalScale, seed: u64) -> Result<Dag, GraphError> {
    if n < 2 {
        return Err(GraphError::BadShape(format!("random DAG needs n >= 2, got {n}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(GraphError::BadShape(format!("arc probability must be in (0, 1], got {p}")));
    }
    let mut rng = rng(seed);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                arcs.push(Arc::new(i, j, rng.gen_range(1..=k.k())));
            }
        }
    }
    Dag::new(n, k, 0usize, n - 1, arcs)
}

/// Grid node id of `(x, y)`.
pub fn grid_node(width: usize, x: usize, y: usize) -> NodeId {
    NodeId::from(y * width + x)
}

/// `width x height` grid with arcs right `(x+1, y)` and up `(x, y+1)`.
///
/// Levels are drawn per node in id order, right arc before up arc. Source is
/// `(0, 0)`, sink `(width-1, height-1)`.
pub fn gen_grid(width: usize, height: usize, k: OrdinalScale, seed: u64) -> Result<Dag, GraphError> {
    if width == 0 || height == 0 {
        return Err(GraphError::BadShape(format!("grid needs positive dimensions, got {width}x{height}")));
    }
    let mut rng = rng(seed);
    let mut arcs = Vec::with_capacity(2 * width * height);
    for y in 0..height {
        for x in 0..width {
            let v = grid_node(width, x, y);
            if x + 1 < width {
                arcs.push(Arc { tail: v, head: grid_node(width, x + 1, y), level: rng.gen_range(1..=k.k()) });
            }
            if y + 1 < height {
                arcs.push(Arc { tail: v, head: grid_node(width, x, y + 1), level: rng.gen_range(1..=k.k()) });
            }
        }
    }
    Dag::new(width * height, k, grid_node(width, 0, 0), grid_node(width, width - 1, height - 1), arcs)
}

/// Chain of diamonds with `2^((n-1)/3)` source-sink paths, all of length
/// `(2n-2)/3` and all arcs at `level`.
///
/// With 1-based nodes `v_1..v_n`: `i ≡ 1 (mod 3)` emits `v_i -> v_{i+1}` and
/// `v_i -> v_{i+2}`, `i ≡ 2` emits `v_i -> v_{i+2}`, `i ≡ 0` emits
/// `v_i -> v_{i+1}`.
pub fn gen_exponential_instance(n: usize, level: Level, k: OrdinalScale) -> Result<Dag, GraphError> {
    if n < 4 || !(n - 1).is_multiple_of(3) {
        return Err(GraphError::BadShape(format!("exponential instance needs n >= 4 with (n-1) % 3 == 0, got {n}")));
    }
    check_level(level, k)?;
    let mut arcs = Vec::with_capacity(4 * (n - 1) / 3);
    // 0-based node i - 1 is v_i
    for i in 1..n {
        match i % 3 {
            1 => {
                arcs.push(Arc::new(i - 1, i, level));
                arcs.push(Arc::new(i - 1, i + 1, level));
            }
            2 => arcs.push(Arc::new(i - 1, i + 1, level)),
            _ => arcs.push(Arc::new(i - 1, i, level)),
        }
    }
    Dag::new(n, k, 0usize, n - 1, arcs)
}

/// `s -> a -> t` and `s -> t`, all at `level`. Nodes: s=0, a=1, t=2.
pub fn gen_antisymmetry_fixture(level: Level, k: OrdinalScale) -> Result<Dag, GraphError> {
    check_level(level, k)?;
    Dag::new(
        3,
        k,
        0usize,
        2usize,
        vec![Arc::new(0usize, 1usize, level), Arc::new(1usize, 2usize, level), Arc::new(0usize, 2usize, level)],
    )
}

/// Four-node graph where a dominated partial path completes to a
/// non-dominated one. Nodes: s=0, a=1, b=2, t=3; `K = 3`.
pub fn gen_bellman_fixture() -> Dag {
    let k = OrdinalScale::new(3).expect("non-zero");
    Dag::new(
        4,
        k,
        0usize,
        3usize,
        vec![
            Arc::new(0usize, 1usize, 1),
            Arc::new(1usize, 2usize, 2),
            Arc::new(0usize, 2usize, 1),
            Arc::new(2usize, 3usize, 3),
        ],
    )
    .expect("fixture is well formed")
}

/// Acyclic re-encoding of the cyclic counterexample graph: node `a` is split
/// into `a1` (entered from s) and `a2` (entered from b) so the two simple
/// paths `s,a,t` and `s,c,b,a,t` survive with levels `(3,1)` and `(3,3,1,1)`.
///
/// Nodes: s=0, a1=1, c=2, b=3, a2=4, t=5; `K = 3`.
pub fn gen_acyclic_reencoding_fixture() -> Dag {
    let k = OrdinalScale::new(3).expect("non-zero");
    Dag::new(
        6,
        k,
        0usize,
        5usize,
        vec![
            Arc::new(0usize, 1usize, 3), // s -> a1
            Arc::new(1usize, 3usize, 3), // a1 -> b
            Arc::new(1usize, 5usize, 1), // a1 -> t
            Arc::new(0usize, 2usize, 3), // s -> c
            Arc::new(2usize, 3usize, 3), // c -> b
            Arc::new(3usize, 4usize, 1), // b -> a2
            Arc::new(3usize, 5usize, 3), // b -> t
            Arc::new(4usize, 5usize, 1), // a2 -> t
        ],
    )
    .expect("fixture is well formed")
}
