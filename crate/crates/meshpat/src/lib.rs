//! Mesh pattern containment and classification under a dominating classical pattern.
//!
//! The crate has three layers:
//!
//! - `perm` and `mesh`: permutations in one-line notation, classical and mesh
//!   pattern occurrences, subpattern containment, and the point/ascent/descent
//!   insertion operators on mesh patterns.
//! - `avoidance` and `engine`: generation of avoider classes of a dominating
//!   pattern (Catalan-sized for length-3 patterns), joint avoidance filtering,
//!   and bitmask sweeps over all shadings of a small underlying pattern.
//! - `rules`, `classify`, `series`: the three dominating-pattern coincidence
//!   rules as certificate producers, coincidence/Wilf partitions of the 512
//!   shadings of each length-2 pattern, and exact power-series cross-checks.
//!
//! All operations are deterministic; parallel sweeps (feature `parallel`,
//! enabled by default) reduce in a fixed order and produce identical output
//! to the sequential fallback.

pub mod avoidance;
pub mod classify;
pub mod engine;
pub mod exec;
pub mod mesh;
pub mod perm;
pub mod rules;
pub mod series;
mod unionfind;

pub use avoidance::{AvoidanceError, AvoidanceSignature, AvoidanceTask};
pub use classify::{
    ClassifyError, EquivalencePartition, Provenance, ReconcileReport, UnexplainedMerge,
};
pub use exec::ExecMode;
pub use mesh::{GridBox, InsertVariant, MeshError, MeshPattern, MonotoneKind, Region};
pub use perm::{Occurrence, PermError, Permutation, Symmetry};
pub use rules::{MonotoneSet, RuleCertificate, RuleKind, RuleSet};
pub use series::{Series, SeriesCheck};

/// Error for text inputs (permutations, mesh patterns, certificate logs).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

/// Error for generation requests above a configured length bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("length {requested} exceeds the configured bound {bound}")]
pub struct BoundError {
    pub requested: usize,
    pub bound: usize,
}
