//! Basic block construction and rank-context assignment.

use std::collections::HashMap;

use super::{BasicBlock, BlockKind, CfgError, CommDirection, CommRecord, RankContext};
use crate::frontend::{SourceProgram, StatementKind, TypedStatement};

/// Statement-level IF/ELSE/ENDIF matching, shared by block and edge
/// construction. Keys are statement numbers.
#[derive(Debug, Default)]
pub(crate) struct IfStructure {
    /// IF statement -> (ELSE statement if any, ENDIF statement).
    pub ifs: HashMap<u32, (Option<u32>, u32)>,
    /// ELSE statement -> its ENDIF statement.
    pub else_to_endif: HashMap<u32, u32>,
    /// ELSE statement -> its IF statement.
    pub else_to_if: HashMap<u32, u32>,
    /// ENDIF statement -> its IF statement.
    pub endif_to_if: HashMap<u32, u32>,
}

/// Matches IF statements with their ELSE/ENDIF. The parser has already
/// validated balance.
pub(crate) fn if_structure(program: &SourceProgram) -> IfStructure {
    let mut s = IfStructure::default();
    let mut stack: Vec<(u32, Option<u32>)> = Vec::new();
    for stmt in program.executable() {
        let n = stmt.number.unwrap();
        match &stmt.kind {
            StatementKind::IfRank { .. } | StatementKind::IfOrdinary { .. } => {
                stack.push((n, None));
            }
            StatementKind::Else => {
                let top = stack.last_mut().expect("balanced");
                top.1 = Some(n);
                s.else_to_if.insert(n, top.0);
            }
            StatementKind::EndIf => {
                let (if_stmt, else_stmt) = stack.pop().expect("balanced");
                s.ifs.insert(if_stmt, (else_stmt, n));
                s.endif_to_if.insert(n, if_stmt);
                if let Some(e) = else_stmt {
                    s.else_to_endif.insert(e, n);
                }
            }
            _ => {}
        }
    }
    s
}

/// Does `kind` start a new block?
fn starts_block(kind: &StatementKind) -> bool {
    matches!(
        kind,
        StatementKind::IfRank { .. }
            | StatementKind::Else
            | StatementKind::EndIf
            | StatementKind::CallFinalize
            | StatementKind::End
            | StatementKind::CallRecv { .. }
            | StatementKind::CallSend { .. }
    )
}

/// Does the statement after `kind` start a new block? Note the statement
/// after an ELSE does not: the ELSE heads the block of its arm.
fn closes_block(kind: &StatementKind) -> bool {
    matches!(
        kind,
        StatementKind::IfRank { .. }
            | StatementKind::IfOrdinary { .. }
            | StatementKind::EndIf
            | StatementKind::CallFinalize
            | StatementKind::CallRecv { .. }
            | StatementKind::CallSend { .. }
    )
}

/// Partitions the executable statements into basic blocks, assigns rank
/// contexts, and extracts one [`CommRecord`] per send/receive call.
pub fn build_blocks(
    program: &SourceProgram,
) -> Result<(Vec<BasicBlock>, Vec<CommRecord>), CfgError> {
    let stmts: Vec<&TypedStatement> = program.executable().collect();
    let structure = if_structure(program);

    // Rank context per statement.
    let mut contexts: Vec<RankContext> = Vec::with_capacity(stmts.len());
    let mut active: Option<(i64, u32)> = None; // (rank, endif statement)
    for stmt in &stmts {
        let n = stmt.number.unwrap();
        match active {
            Some((_, endif)) if n == endif => {
                // The join itself is outside the section.
                contexts.push(RankContext::Global);
                active = None;
            }
            Some((rank, _)) => contexts.push(RankContext::Section(rank)),
            None => contexts.push(RankContext::Global),
        }
        match &stmt.kind {
            StatementKind::IfRank { rank, .. } => {
                if active.is_some() {
                    return Err(CfgError::NestedRankSection {
                        line: stmt.line,
                        stmt: n,
                    });
                }
                let (else_stmt, endif) = structure.ifs[&n];
                if else_stmt.is_some() {
                    return Err(CfgError::ElseOnRankIf {
                        line: stmt.line,
                        stmt: n,
                    });
                }
                active = Some((*rank, endif));
            }
            StatementKind::Else => {
                // An ELSE whose IF is a rank guard was already rejected above.
                debug_assert!(!matches!(
                    program.statement(structure.else_to_if[&n]).unwrap().kind,
                    StatementKind::IfRank { .. }
                ));
            }
            _ => {}
        }
    }

    // Split at leaders.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, stmt) in stmts.iter().enumerate() {
        let leader = i == 0 || starts_block(&stmt.kind) || closes_block(&stmts[i - 1].kind);
        if leader {
            groups.push(vec![i]);
        } else {
            groups.last_mut().unwrap().push(i);
        }
    }

    let mut blocks = Vec::new();
    let mut comms = Vec::new();
    for (bi, group) in groups.iter().enumerate() {
        let id = (bi + 1) as u32;
        let numbers: Vec<u32> = group.iter().map(|&i| stmts[i].number.unwrap()).collect();
        let context = contexts[group[0]];
        debug_assert!(group.iter().all(|&i| contexts[i] == context));

        let kind = block_kind(&stmts, group, &structure, program);

        for &i in group {
            let stmt = stmts[i];
            match &stmt.kind {
                StatementKind::CallSend {
                    buffer,
                    count,
                    datatype,
                    dest,
                    tag,
                    comm,
                } => comms.push(CommRecord {
                    block: id,
                    stmt: stmt.number.unwrap(),
                    direction: CommDirection::Send,
                    buffer: buffer.clone(),
                    count: *count,
                    datatype: datatype.clone(),
                    peer: crate::frontend::RecvSource::Rank(*dest),
                    tag: crate::frontend::RecvTag::Tag(*tag),
                    communicator: comm.clone(),
                    section: context,
                }),
                StatementKind::CallRecv {
                    buffer,
                    count,
                    datatype,
                    source,
                    tag,
                    comm,
                } => comms.push(CommRecord {
                    block: id,
                    stmt: stmt.number.unwrap(),
                    direction: CommDirection::Receive,
                    buffer: buffer.clone(),
                    count: *count,
                    datatype: datatype.clone(),
                    peer: *source,
                    tag: *tag,
                    communicator: comm.clone(),
                    section: context,
                }),
                _ => {}
            }
        }

        blocks.push(BasicBlock {
            id,
            kind,
            stmts: numbers,
            rank_context: context,
        });
    }

    Ok((blocks, comms))
}

fn block_kind(
    stmts: &[&TypedStatement],
    group: &[usize],
    structure: &IfStructure,
    program: &SourceProgram,
) -> BlockKind {
    let first = &stmts[group[0]].kind;
    let last = &stmts[*group.last().unwrap()].kind;
    match first {
        StatementKind::CallRecv { .. } => return BlockKind::Receive,
        StatementKind::CallFinalize => return BlockKind::Finalize,
        StatementKind::IfRank { .. } => return BlockKind::RankIf,
        StatementKind::EndIf => {
            let n = stmts[group[0]].number.unwrap();
            let if_stmt = structure.endif_to_if[&n];
            return if matches!(
                program.statement(if_stmt).unwrap().kind,
                StatementKind::IfRank { .. }
            ) {
                BlockKind::RankJoin
            } else {
                BlockKind::OrdinaryJoin
            };
        }
        _ => {}
    }
    if matches!(last, StatementKind::CallSend { .. }) {
        BlockKind::Send
    } else {
        BlockKind::Normal
    }
}
