//! Ordinal shortest paths on directed acyclic graphs.
//!
//! Arcs carry qualitative levels `1..=K` (1 best). A path is summarised by the
//! sorted sequence of its levels, and paths of different lengths are compared
//! by ordinal dominance (see [`ordinal::dominates`]). The labeling solvers in
//! [`labeling`] compute every non-dominated sorted vector from source to sink
//! together with one representative path each; [`oracle`] recomputes the same
//! front by enumeration and [`lexmax`] finds the lexicographically best path
//! directly.

pub mod generate;
pub mod graph;
pub mod io;
pub mod labeling;
pub mod lexmax;
pub mod oracle;
pub mod ordinal;

pub use graph::{Arc, Dag, GraphError, NodeId, ValidationReport};
pub use labeling::{solve, LabelingSolver, SelectionOrder, SolveError, SolveResult, SolveStats, SolverVariant};
pub use ordinal::{FrequencyVector, Level, OrdinalScale, OrdinalVector, SortedOrdinalVector};
