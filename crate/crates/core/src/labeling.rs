//! Ordinal labeling algorithm and its two practical modifications.
//!
//! Every node keeps a set of labels, one per distinct sorted ordinal vector
//! of an `s`-`v` path found so far. Labels are expanded from a work queue
//! until it is empty. At the sink a candidate is dropped when an incumbent
//! dominates it one-sidedly and evicts every incumbent it one-sidedly
//! dominates.
//!
//! * [`SolverVariant::Base`] keeps every distinct vector at intermediate
//!   nodes; dominance cannot be used there because a dominated partial path
//!   may still complete to a non-dominated one.
//! * [`SolverVariant::Mod1`] prunes at intermediate nodes, but only between
//!   labels of equal length, where componentwise order survives any common
//!   completion.
//! * [`SolverVariant::Mod2`] applies the same pruning with label sets kept in
//!   lexicographic order of their frequency vectors, so membership is a
//!   binary search and the equal-length scans only visit one side of the key.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{Arc, Dag, NodeId, ValidationReport};
use crate::ordinal::{FrequencyVector, OrdinalScale, SortedOrdinalVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),
    #[error("source and sink coincide")]
    SourceIsSink,
    #[error("sink is not reachable from source")]
    NoPath,
    #[error("timed out after {0:?}")]
    Timeout(Duration),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolverVariant {
    Base,
    Mod1,
    /// Modification 1 pruning plus ordered label storage.
    Mod2,
}

impl SolverVariant {
    pub const ALL: [SolverVariant; 3] = [SolverVariant::Base, SolverVariant::Mod1, SolverVariant::Mod2];

    fn prunes_intermediate(self) -> bool {
        !matches!(self, SolverVariant::Base)
    }

    fn ordered_storage(self) -> bool {
        matches!(self, SolverVariant::Mod2)
    }
}

impl fmt::Display for SolverVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverVariant::Base => "base",
            SolverVariant::Mod1 => "mod1",
            SolverVariant::Mod2 => "mod2",
        })
    }
}

impl FromStr for SolverVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "base" => Ok(SolverVariant::Base),
            "mod1" => Ok(SolverVariant::Mod1),
            "mod2" => Ok(SolverVariant::Mod2),
            other => Err(format!("unknown variant {other:?} (expected base, mod1 or mod2)")),
        }
    }
}

/// Order in which queued labels are expanded. The front does not depend on
/// it; representatives may.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SelectionOrder {
    #[default]
    Fifo,
    Lifo,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("arc tail {arc_tail} does not match label end node {end}")]
pub struct Detached {
    pub arc_tail: NodeId,
    pub end: NodeId,
}

/// A path from the source together with its frequency vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub freq: FrequencyVector,
    pub pred: Vec<NodeId>,
}

impl Label {
    /// The empty path at `source`.
    pub fn initial(source: NodeId, k: OrdinalScale) -> Self {
        Label { freq: FrequencyVector::zeros(k), pred: vec![source] }
    }

    pub fn end(&self) -> NodeId {
        *self.pred.last().expect("label path is never empty")
    }

    /// New label for this path followed by `arc`.
    pub fn extend(&self, arc: &Arc) -> Result<Label, Detached> {
        if arc.tail != self.end() {
            return Err(Detached { arc_tail: arc.tail, end: self.end() });
        }
        let mut pred = Vec::with_capacity(self.pred.len() + 1);
        pred.extend_from_slice(&self.pred);
        pred.push(arc.head);
        Ok(Label { freq: self.freq.incremented(arc.level), pred })
    }

    pub fn reconstruct_path(&self) -> &[NodeId] {
        &self.pred
    }

    pub fn sorted(&self) -> SortedOrdinalVector {
        self.freq.to_sorted()
    }
}

/// Result of offering a candidate to a [`LabelSet`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Update<T> {
    pub accepted: bool,
    pub evicted: Vec<T>,
}

/// Labels at one node keyed by frequency vector; at most one entry per key.
///
/// Each entry also stores its cumulative counts (entries at level `<= l`) in a
/// flat row, so dominance tests are plain componentwise comparisons, plus a
/// one-word signature of the first counts for a quick necessary test.
#[derive(Debug, Clone)]
pub struct LabelSet<T> {
    ordered: bool,
    stride: usize,
    keys: Vec<FrequencyVector>,
    cums: Vec<u32>,
    sigs: Vec<u64>,
    payloads: Vec<T>,
}

const SIG_HIGH: u64 = 0x8080_8080_8080_8080;

/// First eight cumulative counts, one byte each, saturated at 127.
/// Saturation is monotone, so `a >= b` componentwise implies
/// `sig_geq(signature(a), signature(b))`.
fn signature(cum: &[u32]) -> u64 {
    cum.iter().take(8).enumerate().fold(0, |sig, (i, &c)| sig | (u64::from(c.min(127)) << (8 * i)))
}

/// Bytewise `a >= b` on signatures.
fn sig_geq(a: u64, b: u64) -> bool {
    ((a | SIG_HIGH) - b) & SIG_HIGH == SIG_HIGH
}

fn cumulative(key: &FrequencyVector) -> Vec<u32> {
    key.counts()
        .iter()
        .scan(0u32, |acc, &c| {
            *acc += c;
            Some(*acc)
        })
        .collect()
}

fn geq_all(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).fold(true, |ok, (x, y)| ok & (x >= y))
}

/// [`FrequencyVector::dominates`] on cumulative rows; the last entry is the length.
fn cum_dominates(a: &[u32], b: &[u32]) -> bool {
    let (m, n) = (a[a.len() - 1], b[b.len() - 1]);
    if m >= n {
        let d = m - n;
        a.iter().zip(b).fold(true, |ok, (x, y)| ok & (x.saturating_sub(d) >= *y))
    } else {
        a.iter().zip(b).fold(true, |ok, (x, y)| ok & (*x >= (*y).min(m)))
    }
}

impl<T: Clone> LabelSet<T> {
    fn with_order(ordered: bool) -> Self {
        LabelSet { ordered, stride: 0, keys: Vec::new(), cums: Vec::new(), sigs: Vec::new(), payloads: Vec::new() }
    }

    /// Unsorted storage with linear scans.
    pub fn unordered() -> Self {
        Self::with_order(false)
    }

    /// Storage sorted lexicographically by frequency vector.
    pub fn ordered() -> Self {
        Self::with_order(true)
    }

    fn for_variant(variant: SolverVariant) -> Self {
        Self::with_order(variant.ordered_storage())
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    fn rows(&self) -> std::slice::ChunksExact<'_, u32> {
        self.cums.chunks_exact(self.stride.max(1))
    }

    /// `Ok(i)` when present at `i`, otherwise `Err` with the insertion point.
    fn locate(&self, key: &FrequencyVector, cum: &[u32]) -> Result<usize, usize> {
        if self.ordered {
            self.keys.binary_search(key)
        } else {
            self.rows().position(|r| r == cum).ok_or(self.keys.len())
        }
    }

    pub fn contains(&self, key: &FrequencyVector) -> bool {
        self.locate(key, &cumulative(key)).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FrequencyVector, &T)> + '_ {
        self.keys.iter().zip(&self.payloads)
    }

    pub fn keys(&self) -> impl Iterator<Item = &FrequencyVector> + '_ {
        self.keys.iter()
    }

    fn insert_at(&mut self, at: usize, key: FrequencyVector, cum: Vec<u32>, payload: T) {
        if self.keys.is_empty() {
            self.stride = cum.len();
        }
        debug_assert_eq!(cum.len(), self.stride);
        self.keys.insert(at, key);
        self.payloads.insert(at, payload);
        self.sigs.insert(at, signature(&cum));
        let offset = at * self.stride;
        self.cums.splice(offset..offset, cum);
    }

    /// Unconditional insert of a key not yet present.
    pub fn insert(&mut self, key: FrequencyVector, payload: T) {
        let cum = cumulative(&key);
        let at = self.locate(&key, &cum);
        debug_assert!(at.is_err(), "key already present");
        let at = at.unwrap_or_else(|i| i);
        self.insert_at(at, key, cum, payload);
    }

    /// Removes the entries whose index is in `doomed` (ascending), keeping
    /// the order of the rest.
    fn remove_indices(&mut self, doomed: &[usize]) -> Vec<T> {
        if doomed.is_empty() {
            return Vec::new();
        }
        let evicted = doomed.iter().map(|&i| self.payloads[i].clone()).collect();
        let stride = self.stride;
        let mut next = doomed.iter().peekable();
        let mut write = 0;
        for read in 0..self.keys.len() {
            if next.peek() == Some(&&read) {
                next.next();
                continue;
            }
            if write != read {
                self.keys.swap(write, read);
                self.payloads.swap(write, read);
                self.sigs[write] = self.sigs[read];
                self.cums.copy_within(read * stride..(read + 1) * stride, write * stride);
            }
            write += 1;
        }
        self.keys.truncate(write);
        self.payloads.truncate(write);
        self.sigs.truncate(write);
        self.cums.truncate(write * stride);
        evicted
    }

    fn finish(
        &mut self,
        accepted: bool,
        doomed: &[usize],
        key: FrequencyVector,
        cum: Vec<u32>,
        payload: T,
    ) -> Update<T> {
        let evicted = self.remove_indices(doomed);
        if accepted {
            let at = self.locate(&key, &cum).unwrap_or_else(|i| i);
            self.insert_at(at, key, cum, payload);
        }
        Update { accepted, evicted }
    }

    /// Sink rule: evict incumbents the candidate dominates one-sidedly, and
    /// insert the candidate unless an incumbent dominates it one-sidedly.
    /// Mutually dominating vectors coexist.
    pub fn sink_update(&mut self, key: FrequencyVector, payload: T) -> Update<T> {
        let cum = cumulative(&key);
        if self.locate(&key, &cum).is_ok() {
            return Update { accepted: false, evicted: Vec::new() };
        }
        let mut accepted = true;
        let mut doomed = Vec::new();
        for (i, inc) in self.rows().enumerate() {
            let cand_dom = cum_dominates(&cum, inc);
            let inc_dom = cum_dominates(inc, &cum);
            if cand_dom && !inc_dom {
                doomed.push(i);
            }
            if inc_dom && !cand_dom {
                accepted = false;
            }
        }
        self.finish(accepted, &doomed, key, cum, payload)
    }

    /// Equal-length pruning: among incumbents with the candidate's length,
    /// evict those the candidate is componentwise `<=` to, and reject the
    /// candidate if some incumbent is componentwise `<=` to it.
    ///
    /// Equal-length entries form an antichain, so a rejected candidate never
    /// dominates an incumbent.
    pub fn mod1_update(&mut self, key: FrequencyVector, payload: T) -> Update<T> {
        let cum = cumulative(&key);
        let at = match self.locate(&key, &cum) {
            Ok(_) => return Update { accepted: false, evicted: Vec::new() },
            Err(at) => at,
        };
        let last = cum.len() - 1;
        let len = cum[last];
        let sig = signature(&cum);
        let dominator = |i: usize| {
            sig_geq(self.sigs[i], sig) && {
                let r = &self.cums[i * self.stride..(i + 1) * self.stride];
                r[last] == len && geq_all(r, &cum)
            }
        };
        let dominated = |i: usize| {
            sig_geq(sig, self.sigs[i]) && {
                let r = &self.cums[i * self.stride..(i + 1) * self.stride];
                r[last] == len && geq_all(&cum, r)
            }
        };
        // for equal lengths, a <= b componentwise implies a is
        // lexicographically greater, so dominators sit above the key and
        // dominated labels below it
        let n = self.keys.len();
        let (above, below) = if self.ordered { (at, at) } else { (0, n) };
        if (above..n).any(dominator) {
            return Update { accepted: false, evicted: Vec::new() };
        }
        let doomed: Vec<usize> = (0..below).filter(|&i| dominated(i)).collect();
        self.finish(true, &doomed, key, cum, payload)
    }
}

/// Counters collected during a run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Labels taken from the work queue and expanded.
    pub iterations: u64,
    /// Labels produced by extension, accepted or not.
    pub labels_created: u64,
    /// Largest label set size observed at each node.
    pub peak_labels: Vec<usize>,
    pub wall_time: Duration,
}

impl SolveStats {
    pub fn max_peak(&self) -> usize {
        self.peak_labels.iter().copied().max().unwrap_or(0)
    }
}

/// Non-dominated sink vectors with one representative path each.
#[derive(Debug, Clone)]
pub struct SolveResult {
    /// Ascending in the derived order of [`SortedOrdinalVector`].
    pub front: Vec<SortedOrdinalVector>,
    pub representatives: BTreeMap<SortedOrdinalVector, Vec<NodeId>>,
    pub stats: SolveStats,
}

type LabelId = u32;

#[derive(Debug, Clone)]
struct Entry {
    node: NodeId,
    parent: Option<LabelId>,
    freq: FrequencyVector,
    alive: bool,
}

/// Configured labeling run over one graph.
#[derive(Debug, Clone)]
pub struct LabelingSolver<'g> {
    graph: &'g Dag,
    variant: SolverVariant,
    selection: SelectionOrder,
    deadline: Option<Instant>,
}

impl<'g> LabelingSolver<'g> {
    pub fn new(graph: &'g Dag, variant: SolverVariant) -> Self {
        LabelingSolver { graph, variant, selection: SelectionOrder::Fifo, deadline: None }
    }

    pub fn selection(mut self, order: SelectionOrder) -> Self {
        self.selection = order;
        self
    }

    pub fn timeout(mut self, limit: Duration) -> Self {
        self.deadline = Some(Instant::now() + limit);
        self
    }

    pub fn deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    fn check_graph(&self) -> Result<(), SolveError> {
        let g = self.graph;
        let report = g.validate();
        if !report.is_valid() {
            let only_unreachable = report.acyclic
                && report.loops.is_empty()
                && report.parallel_arcs.is_empty()
                && report.bad_levels.is_empty();
            return Err(if only_unreachable { SolveError::NoPath } else { SolveError::InvalidGraph(report) });
        }
        if g.source() == g.sink() {
            return Err(SolveError::SourceIsSink);
        }
        Ok(())
    }

    pub fn run(&self) -> Result<Run, SolveError> {
        self.check_graph()?;
        let started = Instant::now();
        let g = self.graph;
        let (source, sink) = (g.source(), g.sink());

        let mut arena =
            vec![Entry { node: source, parent: None, freq: FrequencyVector::zeros(g.scale()), alive: true }];
        let mut sets: Vec<LabelSet<LabelId>> =
            (0..g.node_count()).map(|_| LabelSet::for_variant(self.variant)).collect();
        sets[source.index()].insert(arena[0].freq.clone(), 0);
        let mut stats = SolveStats { peak_labels: vec![0; g.node_count()], ..SolveStats::default() };
        stats.peak_labels[source.index()] = 1;
        let mut temp: VecDeque<LabelId> = VecDeque::from([0]);

        loop {
            let next = match self.selection {
                SelectionOrder::Fifo => temp.pop_front(),
                SelectionOrder::Lifo => temp.pop_back(),
            };
            let Some(id) = next else { break };
            // evicted by equal-length pruning while queued
            if !arena[id as usize].alive {
                continue;
            }
            stats.iterations += 1;
            if stats.iterations.is_multiple_of(256) {
                if let Some(deadline) = self.deadline {
                    if Instant::now() >= deadline {
                        return Err(SolveError::Timeout(started.elapsed()));
                    }
                }
            }
            let v = arena[id as usize].node;
            debug_assert_ne!(v, sink);
            for arc in g.out_arcs(v) {
                let w = arc.head;
                let freq = arena[id as usize].freq.incremented(arc.level);
                stats.labels_created += 1;
                let set = &mut sets[w.index()];
                let new_id = LabelId::try_from(arena.len()).expect("label arena exceeds u32");
                let accepted = if w == sink {
                    set.sink_update(freq.clone(), new_id).accepted
                } else if self.variant.prunes_intermediate() {
                    let update = set.mod1_update(freq.clone(), new_id);
                    for dead in update.evicted {
                        arena[dead as usize].alive = false;
                    }
                    update.accepted
                } else if set.contains(&freq) {
                    false
                } else {
                    set.insert(freq.clone(), new_id);
                    true
                };
                if accepted {
                    arena.push(Entry { node: w, parent: Some(id), freq, alive: true });
                    let peak = &mut stats.peak_labels[w.index()];
                    *peak = (*peak).max(sets[w.index()].len());
                    if w != sink {
                        temp.push_back(new_id);
                    }
                }
            }
        }
        stats.wall_time = started.elapsed();
        Ok(Run { sink, arena, sets, stats })
    }
}

/// Final state of a labeling run.
#[derive(Debug, Clone)]
pub struct Run {
    sink: NodeId,
    arena: Vec<Entry>,
    sets: Vec<LabelSet<LabelId>>,
    stats: SolveStats,
}

impl Run {
    fn path_of(&self, mut id: LabelId) -> Vec<NodeId> {
        let mut path = vec![self.arena[id as usize].node];
        while let Some(parent) = self.arena[id as usize].parent {
            path.push(self.arena[parent as usize].node);
            id = parent;
        }
        path.reverse();
        path
    }

    /// Labels remaining at `v`, as materialised [`Label`]s.
    pub fn labels_at(&self, v: NodeId) -> Vec<Label> {
        self.sets[v.index()].iter().map(|(freq, &id)| Label { freq: freq.clone(), pred: self.path_of(id) }).collect()
    }

    /// Sorted vectors of the labels at `v`, ascending.
    pub fn vectors_at(&self, v: NodeId) -> Vec<SortedOrdinalVector> {
        let mut out: Vec<_> = self.sets[v.index()].keys().map(FrequencyVector::to_sorted).collect();
        out.sort();
        out
    }

    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }

    pub fn into_result(self) -> SolveResult {
        let representatives: BTreeMap<_, _> =
            self.sets[self.sink.index()].iter().map(|(freq, &id)| (freq.to_sorted(), self.path_of(id))).collect();
        SolveResult { front: representatives.keys().cloned().collect(), representatives, stats: self.stats }
    }
}

/// Runs the labeling algorithm with FIFO selection and no time limit.
pub fn solve(g: &Dag, variant: SolverVariant) -> Result<SolveResult, SolveError> {
    LabelingSolver::new(g, variant).run().map(Run::into_result)
}
