//! Library side of the `osp` command: experiment sweeps, timed benchmark
//! runs with CSV output, and verification against the oracle.

pub mod bench;
pub mod experiment;
pub mod verify;

pub use bench::{run_bench, summarize, write_csv, RunRecord, RunStatus, Summary};
pub use experiment::{ExperimentSpec, Family, Fixture, InstanceSpec, Seeds, Shape};
pub use verify::{verify, VerifyError, VerifyReport};
