//! Sequential and parallel edge generation.
//!
//! Sequential edges are the ordinary fall-through and branch edges within
//! each process. A block ending in an ordinary predicate gets a labeled
//! True edge to the THEN arm and a False edge to the ELSE arm (or straight
//! to the join when there is no ELSE); the last block of a THEN arm jumps
//! over the ELSE arm to the join block.
//!
//! Parallel edges model process declaration points: a rank-IF block forks
//! with a True edge into the section body and a False edge that bypasses it
//! to the matching join block, the path every process with a different rank
//! takes.

use std::collections::HashMap;

use super::blocks::if_structure;
use super::{BasicBlock, BlockKind, Branch, EdgeCategory, EdgeRecord};
use crate::frontend::{SourceProgram, StatementKind};

fn stmt_block_map(blocks: &[BasicBlock]) -> HashMap<u32, u32> {
    let mut map = HashMap::new();
    for b in blocks {
        for &s in &b.stmts {
            map.insert(s, b.id);
        }
    }
    map
}

pub fn gen_sequential_edges(program: &SourceProgram, blocks: &[BasicBlock]) -> Vec<EdgeRecord> {
    let structure = if_structure(program);
    let block_of = stmt_block_map(blocks);
    let mut edges = Vec::new();

    for b in blocks {
        let last = b.last_stmt();
        let kind = &program.statement(last).unwrap().kind;
        match kind {
            StatementKind::IfRank { .. } => {} // fork handled by parallel edges
            StatementKind::End => {}
            StatementKind::IfOrdinary { .. } => {
                let (else_stmt, endif_stmt) = structure.ifs[&last];
                edges.push(EdgeRecord {
                    from: b.id,
                    to: block_of[&(last + 1)],
                    category: EdgeCategory::Sequential,
                    branch: Some(Branch::True),
                });
                edges.push(EdgeRecord {
                    from: b.id,
                    to: block_of[&else_stmt.unwrap_or(endif_stmt)],
                    category: EdgeCategory::Sequential,
                    branch: Some(Branch::False),
                });
            }
            _ => {
                let next = last + 1;
                let Some(next_stmt) = program.statement(next) else {
                    continue; // no terminating END; block is the exit
                };
                // The end of a THEN arm skips the ELSE arm.
                let to = if matches!(next_stmt.kind, StatementKind::Else) {
                    block_of[&structure.else_to_endif[&next]]
                } else {
                    block_of[&next]
                };
                edges.push(EdgeRecord {
                    from: b.id,
                    to,
                    category: EdgeCategory::Sequential,
                    branch: None,
                });
            }
        }
    }
    edges
}

pub fn gen_parallel_edges(program: &SourceProgram, blocks: &[BasicBlock]) -> Vec<EdgeRecord> {
    let structure = if_structure(program);
    let block_of = stmt_block_map(blocks);
    let mut edges = Vec::new();

    for b in blocks {
        if b.kind != BlockKind::RankIf {
            continue;
        }
        let n = b.first_stmt();
        let (_, endif_stmt) = structure.ifs[&n];
        let join = block_of[&endif_stmt];
        let body_first = (b.id + 1).min(join); // empty section forks straight to the join
        edges.push(EdgeRecord {
            from: b.id,
            to: body_first,
            category: EdgeCategory::Parallel,
            branch: Some(Branch::True),
        });
        edges.push(EdgeRecord {
            from: b.id,
            to: join,
            category: EdgeCategory::Parallel,
            branch: Some(Branch::False),
        });
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::super::{build, MatchOptions};
    use super::*;
    use crate::frontend::parse;

    const CANONICAL: &str = include_str!("../../../../samples/sum.f");

    fn has(edges: &[EdgeRecord], from: u32, to: u32, cat: EdgeCategory) -> bool {
        edges
            .iter()
            .any(|e| e.from == from && e.to == to && e.category == cat)
    }

    #[test]
    fn canonical_inner_if_edges() {
        let cfg = build(&parse(CANONICAL).unwrap(), &MatchOptions::default()).unwrap();
        let e = &cfg.edges;
        assert!(has(e, 8, 9, EdgeCategory::Sequential));
        assert!(has(e, 8, 10, EdgeCategory::Sequential));
        assert!(has(e, 9, 11, EdgeCategory::Sequential));
        assert!(has(e, 10, 11, EdgeCategory::Sequential));
        let branch = |f, t| {
            e.iter()
                .find(|x| x.from == f && x.to == t && x.category == EdgeCategory::Sequential)
                .unwrap()
                .branch
        };
        assert_eq!(branch(8, 9), Some(Branch::True));
        assert_eq!(branch(8, 10), Some(Branch::False));
    }

    #[test]
    fn canonical_parallel_edges() {
        let cfg = build(&parse(CANONICAL).unwrap(), &MatchOptions::default()).unwrap();
        let e = &cfg.edges;
        for (f, t) in [(2, 3), (7, 8), (16, 17)] {
            assert!(has(e, f, t, EdgeCategory::Parallel), "{f}->{t}");
        }
        for (f, t) in [(2, 6), (7, 15), (16, 21)] {
            assert!(has(e, f, t, EdgeCategory::Parallel), "{f}->{t}");
        }
        assert_eq!(
            cfg.edges
                .iter()
                .filter(|x| x.category == EdgeCategory::Parallel)
                .count(),
            6
        );
    }

    #[test]
    fn parallel_edges_touch_only_rank_blocks() {
        let cfg = build(&parse(CANONICAL).unwrap(), &MatchOptions::default()).unwrap();
        for e in cfg
            .edges
            .iter()
            .filter(|e| e.category == EdgeCategory::Parallel)
        {
            let from = cfg.block(e.from).kind;
            assert_eq!(
                from,
                BlockKind::RankIf,
                "parallel edge must leave a rank IF"
            );
        }
    }

    #[test]
    fn straight_line_program() {
        let cfg = build(&parse("X=1\nY=2\n").unwrap(), &MatchOptions::default()).unwrap();
        assert_eq!(cfg.blocks.len(), 1); // no leaders beyond the start
        assert!(cfg.edges.is_empty());
    }

    #[test]
    fn then_arm_without_else_falls_to_join() {
        let src = "IF(X.LT.0) THEN\nX=1\nENDIF\nEND\n";
        let cfg = build(&parse(src).unwrap(), &MatchOptions::default()).unwrap();
        // blocks: 1 = IF, 2 = X=1, 3 = ENDIF, 4 = END
        assert!(has(&cfg.edges, 1, 3, EdgeCategory::Sequential));
        let false_edge = cfg.edges.iter().find(|e| e.from == 1 && e.to == 3).unwrap();
        assert_eq!(false_edge.branch, Some(Branch::False));
    }

    #[test]
    fn empty_rank_section_forks_to_join() {
        let src = "\
call MPI_Comm_rank(MPI_COMM_WORLD, myid, ierr)
IF(MYID.EQ.0) THEN
ENDIF
END
";
        let cfg = build(&parse(src).unwrap(), &MatchOptions::default()).unwrap();
        let parallel: Vec<_> = cfg
            .edges
            .iter()
            .filter(|e| e.category == EdgeCategory::Parallel)
            .collect();
        assert_eq!(parallel.len(), 2);
        assert!(parallel.iter().all(|e| e.from == 2 && e.to == 3));
    }

    #[test]
    fn every_block_reachable_from_entry() {
        let cfg = build(&parse(CANONICAL).unwrap(), &MatchOptions::default()).unwrap();
        let mut seen = vec![false; cfg.blocks.len() + 1];
        let mut stack = vec![cfg.entry.unwrap()];
        while let Some(b) = stack.pop() {
            if std::mem::replace(&mut seen[b as usize], true) {
                continue;
            }
            for e in cfg.flow_edges().filter(|e| e.from == b) {
                stack.push(e.to);
            }
        }
        assert!(seen[1..].iter().all(|&s| s), "unreachable block");
    }
}
