//! Synthetic benchmark networks with built-in ground-truth communities.
//!
//! Two generator families are provided: the FARZ growth model, where
//! communities form intrinsically while the network grows, and a generalized
//! 3-pass pipeline (start model, community assignment, overlay rewiring) in
//! the LFR tradition. Companion modules compute structural properties of the
//! results and score detected partitions against the planted ground truth.
//!
//! All generation is deterministic per [`Seed`]. Replicate sweeps and the
//! BFS-heavy analyzers run data-parallel under the default `parallel`
//! feature; disabling it yields an identical-output sequential build.

pub mod analysis;
pub mod classic;
pub mod error;
pub mod farz;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod sweep;
pub mod three_pass;

pub use analysis::{Assortativity, PropertyReport};
pub use classic::ThetaG;
pub use error::{Error, Result};
pub use farz::{FarzOutput, FarzParams};
pub use graph::{CommunityAssignment, Graph, Seed};
pub use sweep::{GeneratorSpec, SweepConfig, SweepParam, SweepRow};
pub use three_pass::{AssignStrategy, RewireStats, ThetaC, ThreePassOutput};
