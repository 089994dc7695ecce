//! Ordinally weighted directed acyclic graphs.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::ordinal::{Level, OrdinalScale};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("node {node} out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("graph contains a cycle")]
    CycleDetected,
    #[error("sink is not reachable from source")]
    NoPath,
    #[error("bad instance shape: {0}")]
    BadShape(String),
}

/// Dense node index in `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(u32::try_from(i).expect("node index fits in u32"))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
    pub level: Level,
}

impl Arc {
    pub fn new(tail: impl Into<NodeId>, head: impl Into<NodeId>, level: Level) -> Self {
        Arc { tail: tail.into(), head: head.into(), level }
    }
}

/// A directed graph with ordinal arc levels and distinguished source and sink.
///
/// Construction only checks that arc endpoints are in range; acyclicity and
/// the remaining structural assumptions are checked by [`Dag::validate`].
/// Arcs are kept sorted by `(tail, head)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    n: usize,
    k: OrdinalScale,
    source: NodeId,
    sink: NodeId,
    arcs: Vec<Arc>,
    // arc indices by tail, heads ascending
    out: Vec<Vec<usize>>,
}

impl Dag {
    pub fn new(
        n: usize,
        k: OrdinalScale,
        source: impl Into<NodeId>,
        sink: impl Into<NodeId>,
        mut arcs: Vec<Arc>,
    ) -> Result<Dag, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let (source, sink) = (source.into(), sink.into());
        for node in [source, sink].into_iter().chain(arcs.iter().flat_map(|a| [a.tail, a.head])) {
            if node.index() >= n {
                return Err(GraphError::NodeOutOfRange { node: node.index(), n });
            }
        }
        arcs.sort_by_key(|a| (a.tail, a.head));
        let mut out = vec![Vec::new(); n];
        for (i, arc) in arcs.iter().enumerate() {
            out[arc.tail.index()].push(i);
        }
        Ok(Dag { n, k, source, sink, arcs, out })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn scale(&self) -> OrdinalScale {
        self.k
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.n).map(NodeId::from)
    }

    pub fn out_arcs(&self, v: NodeId) -> impl Iterator<Item = &Arc> + '_ {
        self.out[v.index()].iter().map(move |&i| &self.arcs[i])
    }

    /// Level of arc `tail -> head`, if present.
    pub fn arc_level(&self, tail: NodeId, head: NodeId) -> Option<Level> {
        self.out_arcs(tail).find(|a| a.head == head).map(|a| a.level)
    }

    /// Kahn's algorithm, smallest ready node first.
    pub fn topological_order(&self) -> Result<Vec<NodeId>, GraphError> {
        let mut indegree = vec![0usize; self.n];
        for arc in &self.arcs {
            indegree[arc.head.index()] += 1;
        }
        let mut ready: BinaryHeap<Reverse<NodeId>> =
            self.nodes().filter(|v| indegree[v.index()] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for arc in self.out_arcs(v) {
                let d = &mut indegree[arc.head.index()];
                *d -= 1;
                if *d == 0 {
                    ready.push(Reverse(arc.head));
                }
            }
        }
        if order.len() == self.n {
            Ok(order)
        } else {
            Err(GraphError::CycleDetected)
        }
    }

    fn reachable_from_source(&self) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([self.source]);
        seen[self.source.index()] = true;
        while let Some(v) = queue.pop_front() {
            for arc in self.out_arcs(v) {
                if !seen[arc.head.index()] {
                    seen[arc.head.index()] = true;
                    queue.push_back(arc.head);
                }
            }
        }
        seen
    }

    fn reaching_sink(&self) -> Vec<bool> {
        let mut incoming = vec![Vec::new(); self.n];
        for arc in &self.arcs {
            incoming[arc.head.index()].push(arc.tail);
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([self.sink]);
        seen[self.sink.index()] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &incoming[v.index()] {
                if !seen[u.index()] {
                    seen[u.index()] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    pub fn validate(&self) -> ValidationReport {
        let loops = self.arcs.iter().filter(|a| a.tail == a.head).copied().collect();
        let parallel_arcs = self
            .arcs
            .windows(2)
            .filter(|w| (w[0].tail, w[0].head) == (w[1].tail, w[1].head))
            .map(|w| (w[0].tail, w[0].head))
            .collect();
        let bad_levels = self.arcs.iter().filter(|a| !self.k.contains(a.level)).copied().collect();
        let forward = self.reachable_from_source();
        let backward = self.reaching_sink();
        let off_path_nodes = self.nodes().filter(|v| !(forward[v.index()] && backward[v.index()])).collect();
        ValidationReport {
            acyclic: self.topological_order().is_ok(),
            loops,
            parallel_arcs,
            bad_levels,
            sink_reachable: forward[self.sink.index()],
            off_path_nodes,
        }
    }

    /// Subgraph induced by the nodes lying on some source-sink path.
    ///
    /// Returns the pruned graph and, for each original node, its new id.
    pub fn prune_unreachable(&self) -> Result<(Dag, Vec<Option<NodeId>>), GraphError> {
        let forward = self.reachable_from_source();
        if !forward[self.sink.index()] {
            return Err(GraphError::NoPath);
        }
        let backward = self.reaching_sink();
        let mut mapping = vec![None; self.n];
        let mut next = 0usize;
        for v in 0..self.n {
            if forward[v] && backward[v] {
                mapping[v] = Some(NodeId::from(next));
                next += 1;
            }
        }
        let arcs = self
            .arcs
            .iter()
            .filter_map(|a| {
                Some(Arc { tail: mapping[a.tail.index()]?, head: mapping[a.head.index()]?, level: a.level })
            })
            .collect();
        let source = mapping[self.source.index()].expect("source kept");
        let sink = mapping[self.sink.index()].expect("sink kept");
        let pruned = Dag::new(next, self.k, source, sink, arcs)?;
        Ok((pruned, mapping))
    }

    /// Levels along a node sequence, or `None` if some step is not an arc.
    pub fn path_levels(&self, path: &[NodeId]) -> Option<Vec<Level>> {
        path.windows(2).map(|w| self.arc_level(w[0], w[1])).collect()
    }
}

/// Outcome of [`Dag::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub acyclic: bool,
    pub loops: Vec<Arc>,
    pub parallel_arcs: Vec<(NodeId, NodeId)>,
    pub bad_levels: Vec<Arc>,
    pub sink_reachable: bool,
    /// Nodes on no source-sink path. Informational; does not invalidate.
    pub off_path_nodes: Vec<NodeId>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.acyclic
            && self.loops.is_empty()
            && self.parallel_arcs.is_empty()
            && self.bad_levels.is_empty()
            && self.sink_reachable
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        let mut problems = Vec::new();
        if !self.acyclic {
            problems.push("not acyclic".to_string());
        }
        if !self.loops.is_empty() {
            problems.push(format!("{} loop(s)", self.loops.len()));
        }
        if !self.parallel_arcs.is_empty() {
            problems.push(format!("{} parallel arc(s)", self.parallel_arcs.len()));
        }
        if !self.bad_levels.is_empty() {
            problems.push(format!("{} arc level(s) out of range", self.bad_levels.len()));
        }
        if !self.sink_reachable {
            problems.push("sink unreachable from source".to_string());
        }
        write!(f, "invalid: {}", problems.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(k: u32) -> OrdinalScale {
        OrdinalScale::new(k).unwrap()
    }

    fn small() -> Dag {
        Dag::new(
            3,
            k(1),
            0usize,
            2usize,
            vec![Arc::new(0usize, 1usize, 1), Arc::new(1usize, 2usize, 1), Arc::new(0usize, 2usize, 1)],
        )
        .unwrap()
    }

    #[test]
    fn smallest_multipath_graph_is_valid() {
        let report = small().validate();
        assert!(report.is_valid(), "{report}");
        assert!(report.off_path_nodes.is_empty());
    }

    #[test]
    fn loop_is_reported() {
        let g = Dag::new(
            3,
            k(1),
            0usize,
            2usize,
            vec![Arc::new(0usize, 1usize, 1), Arc::new(1usize, 1usize, 1), Arc::new(1usize, 2usize, 1)],
        )
        .unwrap();
        let report = g.validate();
        assert!(!report.is_valid());
        assert_eq!(report.loops.len(), 1);
    }

    #[test]
    fn cycle_is_reported() {
        let g = Dag::new(
            4,
            k(1),
            0usize,
            3usize,
            vec![
                Arc::new(0usize, 1usize, 1),
                Arc::new(1usize, 2usize, 1),
                Arc::new(2usize, 1usize, 1),
                Arc::new(2usize, 3usize, 1),
            ],
        )
        .unwrap();
        let report = g.validate();
        assert!(!report.acyclic);
        assert_eq!(g.topological_order(), Err(GraphError::CycleDetected));
    }

    #[test]
    fn parallel_arcs_and_levels() {
        let g =
            Dag::new(2, k(2), 0usize, 1usize, vec![Arc::new(0usize, 1usize, 1), Arc::new(0usize, 1usize, 3)]).unwrap();
        let report = g.validate();
        assert_eq!(report.parallel_arcs, vec![(NodeId(0), NodeId(1))]);
        assert_eq!(report.bad_levels.len(), 1);
        assert!(!report.is_valid());
    }

    #[test]
    fn unreachable_sink() {
        let g = Dag::new(2, k(1), 0usize, 1usize, vec![]).unwrap();
        assert!(!g.validate().sink_reachable);
        assert_eq!(g.prune_unreachable().unwrap_err(), GraphError::NoPath);
    }

    #[test]
    fn out_of_range_endpoint() {
        let err = Dag::new(2, k(1), 0usize, 1usize, vec![Arc::new(0usize, 2usize, 1)]).unwrap_err();
        assert_eq!(err, GraphError::NodeOutOfRange { node: 2, n: 2 });
        assert_eq!(Dag::new(0, k(1), 0usize, 0usize, vec![]).unwrap_err(), GraphError::Empty);
    }

    #[test]
    fn topological_orders() {
        let chain =
            Dag::new(3, k(1), 0usize, 2usize, vec![Arc::new(1usize, 2usize, 1), Arc::new(0usize, 1usize, 1)]).unwrap();
        assert_eq!(chain.topological_order().unwrap(), vec![NodeId(0), NodeId(1), NodeId(2)]);
        let single = Dag::new(1, k(1), 0usize, 0usize, vec![]).unwrap();
        assert_eq!(single.topological_order().unwrap(), vec![NodeId(0)]);
    }

    #[test]
    fn pruning() {
        // s -> t plus isolated u
        let g = Dag::new(3, k(1), 0usize, 1usize, vec![Arc::new(0usize, 1usize, 1)]).unwrap();
        let (pruned, mapping) = g.prune_unreachable().unwrap();
        assert_eq!(pruned.node_count(), 2);
        assert_eq!(mapping, vec![Some(NodeId(0)), Some(NodeId(1)), None]);
        assert_eq!(g.validate().off_path_nodes, vec![NodeId(2)]);

        let (same, _) = small().prune_unreachable().unwrap();
        assert_eq!(same, small());

        // s -> t -> u, u is past the sink
        let g =
            Dag::new(3, k(1), 0usize, 1usize, vec![Arc::new(0usize, 1usize, 1), Arc::new(1usize, 2usize, 1)]).unwrap();
        let (pruned, _) = g.prune_unreachable().unwrap();
        assert_eq!(pruned.node_count(), 2);
        assert_eq!(pruned.arc_count(), 1);
    }

    #[test]
    fn path_levels_follow_arcs() {
        let g = small();
        assert_eq!(g.path_levels(&[NodeId(0), NodeId(1), NodeId(2)]), Some(vec![1, 1]));
        assert_eq!(g.path_levels(&[NodeId(1), NodeId(0)]), None);
    }
}
