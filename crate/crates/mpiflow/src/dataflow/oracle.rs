//! Independent reach oracle: exhaustive def-clear path search. Used by the
//! test suites to cross-check the iterative fixpoint; deliberately shares
//! no code with it beyond gen/kill and the scope rule.

use super::{scope_admits, DefSet, Definition, GenKill};
use crate::cfg::MpiCfg;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for the path-enumeration oracle ({blocks} blocks)")]
    InstanceTooLarge { blocks: usize },
}

/// A definition reaches a block iff there is a def-clear path from its own
/// block over sequential/parallel edges, with the scope rule applied at
/// every hop. Decided per definition by depth-first search with a visited
/// set.
pub fn oracle_reach(
    cfg: &MpiCfg,
    defs: &[Definition],
    gk: &GenKill,
) -> Result<Vec<DefSet>, OracleError> {
    if cfg.blocks.len() > 30 {
        return Err(OracleError::InstanceTooLarge {
            blocks: cfg.blocks.len(),
        });
    }

    let n = cfg.blocks.len() + 1;
    let mut succs: Vec<Vec<u32>> = vec![Vec::new(); n];
    for e in cfg.flow_edges() {
        if !succs[e.from as usize].contains(&e.to) {
            succs[e.from as usize].push(e.to);
        }
    }

    let defines_var = |block: u32, var: &str| defs.iter().any(|d| d.block == block && d.var == var);

    let mut reach = vec![DefSet::new(); n];
    for (k, d) in defs.iter().enumerate() {
        // Only downward-exposed definitions leave their block.
        if !gk.gen[d.block as usize].contains(&k) {
            continue;
        }
        let mut visited = vec![false; n];
        let mut stack = vec![d.block];
        while let Some(cur) = stack.pop() {
            for &next in &succs[cur as usize] {
                if visited[next as usize] {
                    continue;
                }
                if !scope_admits(d.context, cfg.block(next).rank_context) {
                    continue;
                }
                visited[next as usize] = true;
                reach[next as usize].insert(k);
                // The path is def-clear only while no block redefines the
                // variable.
                if !defines_var(next, &d.var) {
                    stack.push(next);
                }
            }
        }
    }
    Ok(reach)
}

#[cfg(test)]
mod tests {
    use super::super::{collect_defs_uses, compute_gen_kill, compute_reach_avail};
    use super::*;
    use crate::cfg::{build, MatchOptions};
    use crate::frontend::parse;

    const CANONICAL: &str = include_str!("../../../../samples/sum.f");

    fn oracle_vs_fixpoint(src: &str) {
        let p = parse(src).unwrap();
        let cfg = build(&p, &MatchOptions::default()).unwrap();
        let uses = collect_defs_uses(&p, &cfg);
        let gk = compute_gen_kill(&cfg, &uses.defs);
        let ra = compute_reach_avail(&cfg, &uses.defs, &gk);
        let oracle = oracle_reach(&cfg, &uses.defs, &gk).unwrap();
        for b in &cfg.blocks {
            assert_eq!(
                ra.reach[b.id as usize], oracle[b.id as usize],
                "block {} disagrees",
                b.id
            );
        }
    }

    #[test]
    fn canonical_matches_fixpoint() {
        oracle_vs_fixpoint(CANONICAL);
    }

    #[test]
    fn single_block_program_reaches_nothing() {
        oracle_vs_fixpoint("X=1\n");
    }

    #[test]
    fn two_block_chain_matches() {
        oracle_vs_fixpoint("X=1\ncall MPI_Init(ierr)\ncall MPI_Finalize(ierr)\nEND\n");
    }

    #[test]
    fn too_large_instance_is_rejected() {
        let mut src = String::new();
        for i in 0..40 {
            src.push_str(&format!("IF(A.LT.{i}) THEN\nX=1\nENDIF\n"));
        }
        src.push_str("END\n");
        let p = parse(&src).unwrap();
        let cfg = build(&p, &MatchOptions::default()).unwrap();
        let uses = collect_defs_uses(&p, &cfg);
        let gk = compute_gen_kill(&cfg, &uses.defs);
        assert!(matches!(
            oracle_reach(&cfg, &uses.defs, &gk),
            Err(OracleError::InstanceTooLarge { .. })
        ));
    }
}
