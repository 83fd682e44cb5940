//! SPMD-aware def-use analysis over the MPI-CFG.
//!
//! Definitions carry the rank context of their block. The reaching-
//! definitions fixpoint propagates over sequential and parallel edges only;
//! a definition local to one rank section is filtered out at the entry of a
//! differently-ranked section. Synchronization edges do not propagate reach
//! sets (a receive overwrites its buffer); they feed the cross-process
//! influence relation instead.

mod collect;
mod influence;
mod oracle;
mod pairs;
mod reach;

pub use collect::{collect_defs_uses, CUse, DefUses, PUse};
pub use influence::{cross_process_influence, InfluenceEntry};
pub use oracle::{oracle_reach, OracleError};
pub use pairs::{compute_dcu, compute_dpu, DcuPair, DpuPair};
pub use reach::{compute_gen_kill, compute_reach_avail, scope_admits, GenKill, ReachAvail};

use crate::cfg::{MpiCfg, RankContext};
use crate::frontend::SourceProgram;
use serde::Serialize;
use std::collections::BTreeSet;

/// One definition of a variable, with the rank context of its block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub var: String,
    pub block: u32,
    pub stmt: u32,
    pub context: RankContext,
    pub origin: DefOrigin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefOrigin {
    Assignment,
    ReceiveBuffer,
    CommRankVar,
    CommSizeVar,
}

impl DefOrigin {
    pub fn as_str(&self) -> &'static str {
        match self {
            DefOrigin::Assignment => "assignment",
            DefOrigin::ReceiveBuffer => "receive-buffer",
            DefOrigin::CommRankVar => "comm-rank-var",
            DefOrigin::CommSizeVar => "comm-size-var",
        }
    }

    /// MPI bookkeeping definitions are hidden from reports by default.
    pub fn is_bookkeeping(&self) -> bool {
        matches!(self, DefOrigin::CommRankVar | DefOrigin::CommSizeVar)
    }
}

/// Set of definition indices (into [`Dataflow::defs`]).
pub type DefSet = BTreeSet<usize>;

/// Complete dataflow result for one program.
#[derive(Debug, Clone)]
pub struct Dataflow {
    pub defs: Vec<Definition>,
    pub cuses: Vec<CUse>,
    pub puses: Vec<PUse>,
    /// Indexed by block id; index 0 is unused.
    pub gen: Vec<DefSet>,
    pub kill: Vec<DefSet>,
    pub reach: Vec<DefSet>,
    pub avail: Vec<DefSet>,
    /// Fixpoint sweeps until stabilization.
    pub sweeps: usize,
    pub dcu: Vec<DcuPair>,
    pub dpu: Vec<DpuPair>,
    /// One entry per definition, in definition order.
    pub influence: Vec<InfluenceEntry>,
}

/// Runs the whole dataflow stage on a built CFG.
pub fn run(program: &SourceProgram, cfg: &MpiCfg) -> Dataflow {
    let uses = collect_defs_uses(program, cfg);
    let gk = compute_gen_kill(cfg, &uses.defs);
    let ra = compute_reach_avail(cfg, &uses.defs, &gk);
    let dcu = compute_dcu(&uses, &ra.reach);
    let dpu = compute_dpu(&uses, &ra.avail);
    let influence = cross_process_influence(cfg, &uses, &dcu, &dpu);
    Dataflow {
        defs: uses.defs,
        cuses: uses.cuses,
        puses: uses.puses,
        gen: gk.gen,
        kill: gk.kill,
        reach: ra.reach,
        avail: ra.avail,
        sweeps: ra.sweeps,
        dcu,
        dpu,
        influence,
    }
}

impl Dataflow {
    /// Index of the definition at a given statement, if any.
    pub fn def_at_stmt(&self, stmt: u32) -> Option<usize> {
        self.defs.iter().position(|d| d.stmt == stmt)
    }

    /// Indices of definitions of `var`.
    pub fn defs_of<'a>(&'a self, var: &'a str) -> impl Iterator<Item = usize> + 'a {
        self.defs
            .iter()
            .enumerate()
            .filter(move |(_, d)| d.var == var)
            .map(|(i, _)| i)
    }
}
