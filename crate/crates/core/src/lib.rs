//! Young tableau models of task assignments in heterogeneous distributed
//! systems.
//!
//! An n-task-n-processor assignment is a pair of equally shaped Young
//! tableaux (tasks, processors). When processors in the same row share an
//! execution rate, the task rows may be reordered freely and the assignment
//! is captured by a *standard assignment tabloid*. This crate provides:
//!
//! * [`partition`], [`perm`], [`tableau`]: shapes, permutations and the
//!   symmetric-group action on tableaux and tabloids;
//! * [`assignment`]: assignment tableaux/tabloids and the `Y…`/`y…` term
//!   encoding;
//! * [`schedule`]: task graphs, processor systems, deterministic schedule
//!   evaluation and exhaustive optimisation over tabloids;
//! * [`space`]: the k-assignments vector space over the tabloid basis, its
//!   characters and dual space;
//! * [`retrieval`]: tf-idf weighting and cosine ranking of documents made of
//!   encoded assignments.
//!
//! Loops over tabloids, table cells and documents run on rayon when the
//! `parallel` feature is enabled (the default); see [`Execution`].

pub mod assignment;
pub mod error;
mod exec;
pub mod partition;
pub mod perm;
pub mod retrieval;
pub mod schedule;
pub mod space;
pub mod tableau;

pub use assignment::{
    decode, AssignmentSet, AssignmentTableau, GeneralizedAssignmentTableau, ProcessorTableau,
    StandardAssignmentTabloid, TaskTableau, Term, TermKind,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use partition::{partitions_of, Partition};
pub use perm::Permutation;
pub use retrieval::{Corpus, Document, Query, RankedResult, WeightVector};
pub use schedule::{Metric, Optimum, ProcessorSystem, Schedule, TaskGraph};
pub use space::{CharacterTable, Functional, KVector, SquareMatrix};
pub use tableau::{enumerate_tabloids, enumerate_tabloids_within, Tableau, Tabloid};

/// Largest `n` for which tabloids, permutations or assignments are
/// enumerated exhaustively.
pub const DEFAULT_ENUMERATION_BOUND: usize = 10;
