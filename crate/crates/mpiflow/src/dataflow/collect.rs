//! Definition and use collection.
//!
//! Definitions: assignment targets, receive buffers, and the variables
//! bound by `MPI_Comm_rank` / `MPI_Comm_size`. C-uses: assignment
//! right-hand sides, WRITE arguments, and send buffers. P-uses: predicate
//! variables, attached to every outgoing branch edge of the predicate's
//! block. `ierr` and `status` arguments are MPI plumbing and generate
//! nothing.

use super::{DefOrigin, Definition};
use crate::cfg::{Branch, MpiCfg};
use crate::frontend::{SourceProgram, StatementKind};

/// A computation use: variable read at a statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CUse {
    pub var: String,
    pub block: u32,
    pub stmt: u32,
}

/// A predicate use: variable read by the predicate ending block `from`,
/// attributed to the edge toward `to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PUse {
    pub var: String,
    pub from: u32,
    pub to: u32,
    pub branch: Option<Branch>,
    /// Statement number of the predicate itself.
    pub stmt: u32,
}

#[derive(Debug, Clone, Default)]
pub struct DefUses {
    pub defs: Vec<Definition>,
    pub cuses: Vec<CUse>,
    pub puses: Vec<PUse>,
}

fn dedup_in_order(vars: Vec<String>) -> Vec<String> {
    let mut seen = Vec::new();
    for v in vars {
        if !seen.contains(&v) {
            seen.push(v);
        }
    }
    seen
}

pub fn collect_defs_uses(program: &SourceProgram, cfg: &MpiCfg) -> DefUses {
    let mut out = DefUses::default();

    for block in &cfg.blocks {
        for &n in &block.stmts {
            let stmt = program.statement(n).expect("block statement exists");
            let mut def = |var: &str, origin: DefOrigin| {
                out.defs.push(Definition {
                    var: var.to_string(),
                    block: block.id,
                    stmt: n,
                    context: block.rank_context,
                    origin,
                });
            };
            match &stmt.kind {
                StatementKind::Assignment { target, value } => {
                    for var in dedup_in_order(value.variables()) {
                        out.cuses.push(CUse {
                            var,
                            block: block.id,
                            stmt: n,
                        });
                    }
                    def(target, DefOrigin::Assignment);
                }
                StatementKind::Write { args, .. } => {
                    for var in dedup_in_order(args.clone()) {
                        out.cuses.push(CUse {
                            var,
                            block: block.id,
                            stmt: n,
                        });
                    }
                }
                StatementKind::CallRecv { buffer, .. } => def(buffer, DefOrigin::ReceiveBuffer),
                StatementKind::CallCommRank { rank_var } => def(rank_var, DefOrigin::CommRankVar),
                StatementKind::CallCommSize { count_var } => def(count_var, DefOrigin::CommSizeVar),
                StatementKind::CallSend { buffer, .. } => {
                    out.cuses.push(CUse {
                        var: buffer.clone(),
                        block: block.id,
                        stmt: n,
                    });
                }
                StatementKind::IfOrdinary { cond } => {
                    push_puses(&mut out, cfg, block.id, n, dedup_in_order(cond.variables()));
                }
                StatementKind::IfRank { var, .. } => {
                    push_puses(&mut out, cfg, block.id, n, vec![var.clone()]);
                }
                _ => {}
            }
        }
    }
    out
}

fn push_puses(out: &mut DefUses, cfg: &MpiCfg, block: u32, stmt: u32, vars: Vec<String>) {
    for var in vars {
        for edge in cfg
            .flow_edges()
            .filter(|e| e.from == block && e.branch.is_some())
        {
            out.puses.push(PUse {
                var: var.clone(),
                from: edge.from,
                to: edge.to,
                branch: edge.branch,
                stmt,
            });
        }
    }
}
