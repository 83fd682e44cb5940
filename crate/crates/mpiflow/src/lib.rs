//! Static control- and data-flow analysis for SPMD message-passing programs
//! written in a small Fortran/MPI subset.
//!
//! The pipeline has three stages:
//!
//! 1. [`frontend`] lexes and parses the source, numbers every executable
//!    statement, and classifies rank-guard `IF` statements by detecting the
//!    variable bound by `MPI_Comm_rank`.
//! 2. [`cfg`] partitions the statements into basic blocks (including message
//!    and finalize blocks), assigns each block its rank context, and generates
//!    sequential, parallel, and synchronization edges. Synchronization edges
//!    come from conservatively matching `MPI_Send`/`MPI_Recv` parameters.
//! 3. [`dataflow`] collects definitions and c-/p-uses, runs an iterative
//!    reaching-definitions fixpoint that respects rank scoping, and derives
//!    def-use pairs plus the transitive cross-process influence relation.
//!
//! [`report`] drives the stages end to end and renders the annotated listing,
//! the graph export, and the analysis report in text or JSON.

pub mod cfg;
pub mod dataflow;
pub mod frontend;
pub mod report;
pub mod testgen;

pub use cfg::{BasicBlock, BlockKind, CfgError, EdgeRecord, MpiCfg, RankContext};
pub use dataflow::{Dataflow, Definition};
pub use frontend::{FrontendError, SourceProgram, StatementKind, TypedStatement};
pub use report::{analyze_source, Analysis, AnalysisReport, ReportOptions};

/// Any error the analysis pipeline can produce on invalid input.
#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Frontend(#[from] frontend::FrontendError),
    #[error(transparent)]
    Cfg(#[from] cfg::CfgError),
}

impl AnalysisError {
    /// Source line the error refers to, when known.
    pub fn line(&self) -> Option<usize> {
        match self {
            AnalysisError::Frontend(e) => e.line(),
            AnalysisError::Cfg(e) => Some(e.line()),
        }
    }

    /// Source column the error refers to, when known.
    pub fn column(&self) -> Option<usize> {
        match self {
            AnalysisError::Frontend(e) => e.column(),
            AnalysisError::Cfg(_) => None,
        }
    }
}
