//! The MPI control-flow graph: basic blocks (including message and finalize
//! blocks), rank contexts, and the three edge categories.

mod blocks;
mod dot;
mod edges;
mod matching;

pub use blocks::build_blocks;
pub use dot::export_dot;
pub use edges::{gen_parallel_edges, gen_sequential_edges};
pub use matching::{match_sends_recvs, MatchOptions, MatchWarning};

use crate::frontend::{RecvSource, RecvTag, SourceProgram};
use serde::Serialize;

/// A basic block of the MPI-CFG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicBlock {
    /// 1-based id, consecutive in source order.
    pub id: u32,
    pub kind: BlockKind,
    /// Statement numbers in the block, in order.
    pub stmts: Vec<u32>,
    pub rank_context: RankContext,
}

impl BasicBlock {
    pub fn first_stmt(&self) -> u32 {
        self.stmts[0]
    }

    pub fn last_stmt(&self) -> u32 {
        *self.stmts.last().unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockKind {
    Normal,
    Receive,
    Send,
    Finalize,
    RankIf,
    RankJoin,
    OrdinaryJoin,
}

impl BlockKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BlockKind::Normal => "normal",
            BlockKind::Receive => "receive",
            BlockKind::Send => "send",
            BlockKind::Finalize => "finalize",
            BlockKind::RankIf => "rank-if",
            BlockKind::RankJoin => "rank-join",
            BlockKind::OrdinaryJoin => "ordinary-join",
        }
    }
}

/// Rank scope of a block: global code every process executes, or the body
/// of a rank section executed by a single process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RankContext {
    Global,
    Section(i64),
}

impl RankContext {
    pub fn rank(&self) -> Option<i64> {
        match self {
            RankContext::Global => None,
            RankContext::Section(r) => Some(*r),
        }
    }
}

impl std::fmt::Display for RankContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RankContext::Global => write!(f, "global"),
            RankContext::Section(r) => write!(f, "rank {r}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeCategory {
    Parallel,
    Sequential,
    Synchronization,
}

impl EdgeCategory {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeCategory::Parallel => "parallel",
            EdgeCategory::Sequential => "sequential",
            EdgeCategory::Synchronization => "synchronization",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    True,
    False,
}

/// One categorized edge. Branch labels appear on edges leaving a block that
/// ends in a predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeRecord {
    pub from: u32,
    pub to: u32,
    pub category: EdgeCategory,
    pub branch: Option<Branch>,
}

impl EdgeRecord {
    fn sort_key(&self) -> (u32, u32, &'static str, Option<Branch>) {
        (self.from, self.to, self.category.as_str(), self.branch)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommDirection {
    Send,
    Receive,
}

/// Recorded and classified parameters of one send or receive call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommRecord {
    pub block: u32,
    pub stmt: u32,
    pub direction: CommDirection,
    pub buffer: String,
    pub count: i64,
    pub datatype: String,
    /// Destination rank for a send; source rank or wildcard for a receive.
    pub peer: RecvSource,
    /// Tag literal for a send; tag literal or wildcard for a receive.
    pub tag: RecvTag,
    pub communicator: String,
    /// Rank context of the enclosing block.
    pub section: RankContext,
}

/// The complete MPI control-flow graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpiCfg {
    pub blocks: Vec<BasicBlock>,
    /// All edges, sorted by (from, to, category, branch).
    pub edges: Vec<EdgeRecord>,
    pub comms: Vec<CommRecord>,
    pub entry: Option<u32>,
    pub exit: Option<u32>,
    pub warnings: Vec<MatchWarning>,
}

impl MpiCfg {
    pub fn block(&self, id: u32) -> &BasicBlock {
        &self.blocks[(id - 1) as usize]
    }

    /// Block containing the given statement number.
    pub fn block_of_stmt(&self, stmt: u32) -> Option<u32> {
        self.blocks
            .iter()
            .find(|b| b.stmts.contains(&stmt))
            .map(|b| b.id)
    }

    /// Edges that carry control flow (sequential and parallel).
    pub fn flow_edges(&self) -> impl Iterator<Item = &EdgeRecord> {
        self.edges
            .iter()
            .filter(|e| e.category != EdgeCategory::Synchronization)
    }

    pub fn sync_edges(&self) -> impl Iterator<Item = &EdgeRecord> {
        self.edges
            .iter()
            .filter(|e| e.category == EdgeCategory::Synchronization)
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum CfgError {
    #[error("nested rank section (statement {stmt})")]
    NestedRankSection { line: usize, stmt: u32 },
    #[error("ELSE attached to a rank IF (statement {stmt})")]
    ElseOnRankIf { line: usize, stmt: u32 },
}

impl CfgError {
    pub fn line(&self) -> usize {
        match self {
            CfgError::NestedRankSection { line, .. } | CfgError::ElseOnRankIf { line, .. } => *line,
        }
    }
}

/// Builds the full MPI-CFG: blocks, the three edge categories, and
/// unmatched-communication warnings.
pub fn build(program: &SourceProgram, opts: &MatchOptions) -> Result<MpiCfg, CfgError> {
    let (blocks, comms) = build_blocks(program)?;
    let mut edges = gen_sequential_edges(program, &blocks);
    edges.extend(gen_parallel_edges(program, &blocks));
    let (sync, warnings) = match_sends_recvs(&comms, opts);
    edges.extend(sync);
    edges.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));

    let entry = blocks.first().map(|b| b.id);
    let exit = blocks.last().map(|b| b.id);
    Ok(MpiCfg {
        blocks,
        edges,
        comms,
        entry,
        exit,
        warnings,
    })
}
