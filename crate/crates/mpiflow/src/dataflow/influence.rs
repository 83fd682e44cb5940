//! Cross-process influence: the transitive closure of def-use dependence,
//! extended across synchronization edges.
//!
//! Within a process, a definition influences the statements of its dcu/dpu
//! pairs, and chains onward through any assignment those uses feed. Across
//! processes, a definition feeding a matched send influences the receive
//! statement and continues through the receive buffer's definition.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::{DcuPair, DefOrigin, DefUses, DpuPair};
use crate::cfg::{CommDirection, MpiCfg};

/// Influence of one definition: every statement it can affect, with the
/// subset only reachable by crossing a synchronization edge flagged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfluenceEntry {
    pub def: usize,
    pub stmts: Vec<u32>,
    pub xproc: Vec<u32>,
}

pub fn cross_process_influence(
    cfg: &MpiCfg,
    uses: &DefUses,
    dcu: &[DcuPair],
    dpu: &[DpuPair],
) -> Vec<InfluenceEntry> {
    let ndefs = uses.defs.len();

    // Definition made at a given statement (at most one in this subset).
    let def_at: HashMap<u32, usize> = uses
        .defs
        .iter()
        .enumerate()
        .map(|(k, d)| (d.stmt, k))
        .collect();

    // Per-def direct statement contributions and local def->def successors.
    let mut local_stmts: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); ndefs];
    let mut local_succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ndefs];
    for p in dcu {
        let use_stmt = uses.cuses[p.cuse].stmt;
        local_stmts[p.def].insert(use_stmt);
        if let Some(&next) = def_at.get(&use_stmt) {
            if uses.defs[next].origin == DefOrigin::Assignment {
                local_succ[p.def].insert(next);
            }
        }
    }
    for p in dpu {
        local_stmts[p.def].insert(uses.puses[p.puse].stmt);
    }

    // Crossing contributions: a def feeding the send of a synchronization
    // edge influences the receive statement and its buffer definition.
    let mut sync_stmts: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); ndefs];
    let mut sync_succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ndefs];
    for edge in cfg.sync_edges() {
        let send = cfg
            .comms
            .iter()
            .find(|c| c.block == edge.from && c.direction == CommDirection::Send)
            .expect("sync edge leaves a send block");
        let recv = cfg
            .comms
            .iter()
            .find(|c| c.block == edge.to && c.direction == CommDirection::Receive)
            .expect("sync edge enters a receive block");
        let recv_def = def_at[&recv.stmt];
        for p in dcu {
            if uses.cuses[p.cuse].stmt == send.stmt {
                sync_stmts[p.def].insert(recv.stmt);
                sync_succ[p.def].insert(recv_def);
            }
        }
    }

    // Per def: BFS over (successor def, crossed-a-sync-edge) states. A
    // statement is flagged cross-process when it is never contributed on a
    // purely local path.
    let mut entries = Vec::with_capacity(ndefs);
    for d in 0..ndefs {
        let mut contributed: BTreeMap<u32, bool> = BTreeMap::new(); // stmt -> any local path
        let mut visited = vec![[false; 2]; ndefs];
        let mut queue = VecDeque::from([(d, false)]);
        while let Some((cur, crossed)) = queue.pop_front() {
            if std::mem::replace(&mut visited[cur][crossed as usize], true) {
                continue;
            }
            for &s in &local_stmts[cur] {
                let entry = contributed.entry(s).or_insert(false);
                *entry |= !crossed;
            }
            for &s in &sync_stmts[cur] {
                contributed.entry(s).or_insert(false);
            }
            for &n in &local_succ[cur] {
                queue.push_back((n, crossed));
            }
            for &n in &sync_succ[cur] {
                queue.push_back((n, true));
            }
        }
        let stmts: Vec<u32> = contributed.keys().copied().collect();
        let xproc: Vec<u32> = contributed
            .iter()
            .filter(|(_, &local)| !local)
            .map(|(&s, _)| s)
            .collect();
        entries.push(InfluenceEntry {
            def: d,
            stmts,
            xproc,
        });
    }
    entries
}
