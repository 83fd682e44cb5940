//! Statement classification: detect the rank variable bound by
//! `MPI_Comm_rank` and turn matching `IF` statements into rank guards.

use super::{Condition, Expr, FrontendError, RelOp, SourceProgram, StatementKind};

/// Records `special_id` from the single `MPI_Comm_rank` call and reclassifies
/// every `IF` whose condition references it as [`StatementKind::IfRank`].
///
/// Only the exact form `<special_id> .EQ. <integer literal>` is accepted as a
/// rank guard; any other condition mentioning the rank variable is an error.
pub fn classify_statements(mut program: SourceProgram) -> Result<SourceProgram, FrontendError> {
    let mut comm_rank: Option<(u32, String)> = None;
    for stmt in program.statements.iter() {
        if let StatementKind::CallCommRank { rank_var } = &stmt.kind {
            let number = stmt.number.expect("comm_rank is executable");
            if comm_rank.is_some() {
                return Err(FrontendError::MultipleCommRank {
                    line: stmt.line,
                    stmt: number,
                });
            }
            comm_rank = Some((number, rank_var.clone()));
        }
    }

    let Some((rank_stmt, special_id)) = comm_rank else {
        // No MPI_Comm_rank: a purely sequential program, nothing to reclassify.
        return Ok(program);
    };

    for stmt in program.statements.iter_mut() {
        let StatementKind::IfOrdinary { cond } = &stmt.kind else {
            continue;
        };
        if !cond.variables().contains(&special_id) {
            continue;
        }
        let number = stmt.number.expect("IF is executable");
        let line = stmt.line;
        match rank_guard(cond, &special_id) {
            Some(rank) => {
                if number < rank_stmt {
                    return Err(FrontendError::RankIfBeforeCommRank { line, stmt: number });
                }
                stmt.kind = StatementKind::IfRank {
                    rank,
                    var: special_id.clone(),
                };
            }
            None => return Err(FrontendError::UnsupportedRankCondition { line, stmt: number }),
        }
    }

    program.special_id = Some(special_id);
    Ok(program)
}

fn rank_guard(cond: &Condition, special_id: &str) -> Option<i64> {
    match (&cond.lhs, cond.op, &cond.rhs) {
        (Expr::Var(v), RelOp::Eq, Expr::Int(r)) if v == special_id => Some(*r),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    const CANONICAL: &str = include_str!("../../../../samples/sum.f");

    #[test]
    fn canonical_special_id_and_statement_count() {
        let p = parse(CANONICAL).unwrap();
        assert_eq!(p.special_id.as_deref(), Some("MYID"));
        assert_eq!(p.executable().count(), 33);
        assert_eq!(
            p.statement(7).map(|s| &s.kind),
            Some(&StatementKind::CallCommRank {
                rank_var: "MYID".into()
            })
        );
    }

    #[test]
    fn canonical_rank_ifs() {
        let p = parse(CANONICAL).unwrap();
        for (stmt, rank) in [(8, 0), (14, 1), (25, 2)] {
            match &p.statement(stmt).unwrap().kind {
                StatementKind::IfRank { rank: r, var } => {
                    assert_eq!((*r, var.as_str()), (rank, "MYID"));
                }
                other => panic!("stmt {stmt}: {other:?}"),
            }
        }
        assert!(matches!(
            p.statement(16).unwrap().kind,
            StatementKind::IfOrdinary { .. }
        ));
    }

    #[test]
    fn every_statement_has_a_kind_and_numbering_is_gapless() {
        let p = parse(CANONICAL).unwrap();
        let nums: Vec<u32> = p.executable().map(|s| s.number.unwrap()).collect();
        assert_eq!(nums, (1..=33).collect::<Vec<_>>());
    }

    #[test]
    fn duplicate_comm_rank_rejected() {
        let src = "\
call MPI_Comm_rank(MPI_COMM_WORLD, myid, ierr)
call MPI_Comm_rank(MPI_COMM_WORLD, other, ierr)
END
";
        assert!(matches!(
            parse(src),
            Err(FrontendError::MultipleCommRank { stmt: 2, .. })
        ));
    }

    #[test]
    fn rank_if_before_comm_rank_rejected() {
        let src = "\
IF(MYID.EQ.0) THEN
ENDIF
call MPI_Comm_rank(MPI_COMM_WORLD, myid, ierr)
END
";
        assert!(matches!(
            parse(src),
            Err(FrontendError::RankIfBeforeCommRank { stmt: 1, .. })
        ));
    }

    #[test]
    fn unsupported_rank_condition_rejected() {
        let src = "\
call MPI_Comm_rank(MPI_COMM_WORLD, myid, ierr)
IF(MYID.LT.2) THEN
ENDIF
END
";
        assert!(matches!(
            parse(src),
            Err(FrontendError::UnsupportedRankCondition { stmt: 2, .. })
        ));
    }

    #[test]
    fn no_mpi_calls_is_fine() {
        let p = parse("X=1\nIF(X.EQ.1) THEN\nENDIF\nEND\n").unwrap();
        assert_eq!(p.special_id, None);
        assert!(matches!(
            p.statement(2).unwrap().kind,
            StatementKind::IfOrdinary { .. }
        ));
    }

    #[test]
    fn reparse_is_deterministic() {
        let a = parse(CANONICAL).unwrap();
        let b = parse(CANONICAL).unwrap();
        assert_eq!(a, b);
    }
}
