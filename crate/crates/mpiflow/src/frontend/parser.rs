//! Recursive-descent parser over the token stream. Joins continuation
//! lines, validates IF/ELSE/ENDIF nesting, numbers executable statements,
//! and parses every statement form of the subset.

use super::lexer::{Tok, Token};
use super::{
    BinOp, Condition, Expr, FrontendError, RecvSource, RecvTag, SourceProgram, StatementKind,
    TypedStatement, KNOWN_CONSTANTS,
};

/// Parses the token stream from [`super::tokenize`] into a program with raw
/// statement kinds. Rank-IF classification happens later in
/// [`super::classify_statements`].
pub fn parse_program(source: &str, tokens: &[Token]) -> Result<SourceProgram, FrontendError> {
    let lines: Vec<String> = source
        .lines()
        .map(|l| l.trim_end_matches('\r').to_string())
        .collect();

    let mut statements = Vec::new();
    let mut next_number: u32 = 1;
    // (line of the IF, has seen ELSE)
    let mut if_stack: Vec<(usize, bool)> = Vec::new();

    for stmt_tokens in split_statements(tokens) {
        let first_line = stmt_tokens[0].line;
        let mut line_indices: Vec<usize> = Vec::new();
        for t in &stmt_tokens {
            if !line_indices.contains(&(t.line - 1)) {
                line_indices.push(t.line - 1);
            }
        }
        let text = join_text(&lines, &line_indices);

        let kind = parse_statement(&stmt_tokens, &text)?;

        match &kind {
            StatementKind::IfOrdinary { .. } => if_stack.push((first_line, false)),
            StatementKind::Else => match if_stack.last_mut() {
                Some((_, has_else)) if !*has_else => *has_else = true,
                _ => return Err(FrontendError::UnbalancedIf { line: first_line }),
            },
            StatementKind::EndIf if if_stack.pop().is_none() => {
                return Err(FrontendError::UnbalancedIf { line: first_line });
            }
            _ => {}
        }

        let number = if matches!(kind, StatementKind::Format { .. }) {
            None
        } else {
            let n = next_number;
            next_number += 1;
            Some(n)
        };

        statements.push(TypedStatement {
            number,
            kind,
            text,
            line: first_line,
            line_indices,
        });
    }

    if let Some((line, _)) = if_stack.first() {
        return Err(FrontendError::UnbalancedIf { line: *line });
    }

    Ok(SourceProgram {
        lines,
        statements,
        special_id: None,
    })
}

/// Groups tokens into statements: a statement ends at a `Newline` that is
/// not followed by a `Continuation`. Marker tokens are dropped.
fn split_statements(tokens: &[Token]) -> Vec<Vec<Token>> {
    let mut statements = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        match tokens[i].tok {
            Tok::Newline => {
                if matches!(tokens.get(i + 1).map(|t| &t.tok), Some(Tok::Continuation)) {
                    i += 2; // join the continued line
                } else {
                    if !current.is_empty() {
                        statements.push(std::mem::take(&mut current));
                    }
                    i += 1;
                }
            }
            Tok::Continuation => i += 1, // stray continuation starts nothing new
            _ => {
                current.push(tokens[i].clone());
                i += 1;
            }
        }
    }
    if !current.is_empty() {
        statements.push(current);
    }
    statements
}

fn join_text(lines: &[String], line_indices: &[usize]) -> String {
    let mut parts = Vec::new();
    for (i, &li) in line_indices.iter().enumerate() {
        let raw = lines[li].trim();
        let piece = if i > 0 {
            raw.strip_prefix('$').unwrap_or(raw).trim()
        } else {
            raw
        };
        parts.push(piece.to_string());
    }
    parts.join(" ")
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token]) -> Self {
        let line = toks.first().map(|t| t.line).unwrap_or(0);
        Cursor { toks, pos: 0, line }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.toks.get(self.pos);
        if let Some(t) = t {
            self.line = t.line;
        }
        self.pos += 1;
        t
    }

    fn describe_here(&self) -> String {
        match self.toks.get(self.pos) {
            None => "end of statement".into(),
            Some(t) => describe(&t.tok),
        }
    }

    fn err(&self, expected: &str) -> FrontendError {
        FrontendError::SyntaxError {
            line: self.toks.get(self.pos).map(|t| t.line).unwrap_or(self.line),
            expected: expected.into(),
            found: self.describe_here(),
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), FrontendError> {
        if self.peek() == Some(tok) {
            self.next();
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, FrontendError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(name)) = self.next().map(|t| t.tok.clone()) else {
                    unreachable!()
                };
                Ok(name)
            }
            _ => Err(self.err(what)),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<i64, FrontendError> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let Some(Tok::Int(v)) = self.next().map(|t| t.tok.clone()) else {
                    unreachable!()
                };
                Ok(v)
            }
            _ => Err(self.err(what)),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<(), FrontendError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("end of statement"))
        }
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Int(v) => format!("'{v}'"),
        Tok::Str(_) => "string literal".into(),
        Tok::RelOp(op) => format!("'{}'", op.as_str()),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Assign => "'='".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::Newline => "end of line".into(),
        Tok::Continuation => "'$'".into(),
    }
}

/// Rejects MPI named constants used where a plain variable is required.
fn check_var(name: &str, line: usize) -> Result<String, FrontendError> {
    if name.starts_with("MPI_") {
        return Err(FrontendError::UnknownConstant {
            line,
            name: name.to_string(),
        });
    }
    Ok(name.to_string())
}

fn parse_statement(toks: &[Token], text: &str) -> Result<StatementKind, FrontendError> {
    let mut c = Cursor::new(toks);
    match c.peek() {
        Some(Tok::Int(_)) => {
            let label = c.expect_int("statement label")?;
            let kw = c.expect_ident("FORMAT after statement label")?;
            if kw != "FORMAT" {
                return Err(FrontendError::SyntaxError {
                    line: c.line,
                    expected: "FORMAT after statement label".into(),
                    found: format!("'{kw}'"),
                });
            }
            // The format body is kept as raw text; its tokens are not
            // interpreted further.
            let upper = text.to_uppercase();
            let spec = match upper.find("FORMAT") {
                Some(pos) => text[pos + "FORMAT".len()..].trim().to_string(),
                None => String::new(),
            };
            Ok(StatementKind::Format { label, spec })
        }
        Some(Tok::Ident(name)) => {
            let name = name.clone();
            match name.as_str() {
                "INCLUDE" => parse_include(&mut c),
                "INTEGER" => parse_decl(&mut c),
                "IF" => parse_if(&mut c),
                "ELSE" => {
                    c.next();
                    c.expect_end()?;
                    Ok(StatementKind::Else)
                }
                "ENDIF" => {
                    c.next();
                    c.expect_end()?;
                    Ok(StatementKind::EndIf)
                }
                "END" => {
                    c.next();
                    match c.peek() {
                        Some(Tok::Ident(kw)) if kw == "IF" => {
                            c.next();
                            c.expect_end()?;
                            Ok(StatementKind::EndIf)
                        }
                        None => Ok(StatementKind::End),
                        _ => Err(c.err("IF or end of statement")),
                    }
                }
                "WRITE" => parse_write(&mut c),
                "CALL" => parse_call(&mut c),
                _ => parse_assignment(&mut c),
            }
        }
        _ => Err(c.err("statement")),
    }
}

fn parse_include(c: &mut Cursor) -> Result<StatementKind, FrontendError> {
    c.next(); // INCLUDE
    match c.peek() {
        Some(Tok::Str(s)) if s.eq_ignore_ascii_case("mpif.h") => {
            c.next();
            c.expect_end()?;
            Ok(StatementKind::Include)
        }
        _ => Err(c.err("'mpif.h'")),
    }
}

fn parse_decl(c: &mut Cursor) -> Result<StatementKind, FrontendError> {
    c.next(); // INTEGER
    let mut names = Vec::new();
    let first = c.expect_ident("variable name")?;
    names.push(check_var(&first, c.line)?);
    loop {
        match c.peek() {
            Some(Tok::Comma) => {
                c.next();
                let name = c.expect_ident("variable name")?;
                names.push(check_var(&name, c.line)?);
            }
            Some(Tok::LParen) => {
                // Dimension of the preceding name, e.g. status(MPI_STATUS_SIZE).
                c.next();
                let dim = c.expect_ident("dimension identifier")?;
                if dim.starts_with("MPI_") && dim != "MPI_STATUS_SIZE" {
                    return Err(FrontendError::UnknownConstant {
                        line: c.line,
                        name: dim,
                    });
                }
                c.expect(&Tok::RParen, "')'")?;
            }
            None => break,
            _ => return Err(c.err("',' or '('")),
        }
    }
    c.expect_end()?;
    Ok(StatementKind::IntegerDecl { names })
}

fn parse_if(c: &mut Cursor) -> Result<StatementKind, FrontendError> {
    c.next(); // IF
    c.expect(&Tok::LParen, "'('")?;
    let lhs = parse_expr(c)?;
    let op = match c.peek() {
        Some(Tok::RelOp(op)) => {
            let op = *op;
            c.next();
            op
        }
        _ => return Err(c.err("relational operator")),
    };
    let rhs = parse_expr(c)?;
    c.expect(&Tok::RParen, "')'")?;
    let then = c.expect_ident("THEN")?;
    if then != "THEN" {
        return Err(FrontendError::SyntaxError {
            line: c.line,
            expected: "THEN".into(),
            found: format!("'{then}'"),
        });
    }
    c.expect_end()?;
    Ok(StatementKind::IfOrdinary {
        cond: Condition { lhs, op, rhs },
    })
}

fn parse_write(c: &mut Cursor) -> Result<StatementKind, FrontendError> {
    c.next(); // WRITE
    c.expect(&Tok::LParen, "'('")?;
    c.expect(&Tok::Star, "'*'")?;
    c.expect(&Tok::Comma, "','")?;
    let label = c.expect_int("format label")?;
    c.expect(&Tok::RParen, "')'")?;
    let mut args = Vec::new();
    let first = c.expect_ident("variable name")?;
    args.push(check_var(&first, c.line)?);
    while c.peek() == Some(&Tok::Comma) {
        c.next();
        let name = c.expect_ident("variable name")?;
        args.push(check_var(&name, c.line)?);
    }
    c.expect_end()?;
    Ok(StatementKind::Write { args, label })
}

fn parse_assignment(c: &mut Cursor) -> Result<StatementKind, FrontendError> {
    let target = c.expect_ident("variable name")?;
    let target = check_var(&target, c.line)?;
    c.expect(&Tok::Assign, "'='")?;
    let value = parse_expr(c)?;
    c.expect_end()?;
    Ok(StatementKind::Assignment { target, value })
}

fn parse_expr(c: &mut Cursor) -> Result<Expr, FrontendError> {
    let mut lhs = parse_term(c)?;
    loop {
        let op = match c.peek() {
            Some(Tok::Plus) => BinOp::Add,
            Some(Tok::Minus) => BinOp::Sub,
            _ => break,
        };
        c.next();
        let rhs = parse_term(c)?;
        lhs = Expr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        };
    }
    Ok(lhs)
}

fn parse_term(c: &mut Cursor) -> Result<Expr, FrontendError> {
    let mut lhs = parse_factor(c)?;
    loop {
        let op = match c.peek() {
            Some(Tok::Star) => BinOp::Mul,
            Some(Tok::Slash) => BinOp::Div,
            _ => break,
        };
        c.next();
        let rhs = parse_factor(c)?;
        lhs = Expr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        };
    }
    Ok(lhs)
}

fn parse_factor(c: &mut Cursor) -> Result<Expr, FrontendError> {
    match c.peek().cloned() {
        Some(Tok::Int(v)) => {
            c.next();
            Ok(Expr::Int(v))
        }
        Some(Tok::Ident(name)) => {
            c.next();
            Ok(Expr::Var(check_var(&name, c.line)?))
        }
        Some(Tok::LParen) => {
            c.next();
            let e = parse_expr(c)?;
            c.expect(&Tok::RParen, "')'")?;
            Ok(e)
        }
        _ => Err(c.err("expression")),
    }
}

/// One argument of an MPI call: the subset only passes idents and literals.
enum Arg {
    Int(i64),
    Ident(String),
}

fn parse_call(c: &mut Cursor) -> Result<StatementKind, FrontendError> {
    c.next(); // CALL
    let name = c.expect_ident("subroutine name")?;
    let line = c.line;
    c.expect(&Tok::LParen, "'('")?;
    let mut args = Vec::new();
    if c.peek() != Some(&Tok::RParen) {
        loop {
            match c.peek().cloned() {
                Some(Tok::Int(v)) => {
                    c.next();
                    args.push(Arg::Int(v));
                }
                Some(Tok::Ident(id)) => {
                    c.next();
                    if id.starts_with("MPI_") && !KNOWN_CONSTANTS.contains(&id.as_str()) {
                        return Err(FrontendError::UnknownConstant {
                            line: c.line,
                            name: id,
                        });
                    }
                    args.push(Arg::Ident(id));
                }
                _ => return Err(c.err("call argument")),
            }
            if c.peek() == Some(&Tok::Comma) {
                c.next();
            } else {
                break;
            }
        }
    }
    c.expect(&Tok::RParen, "')'")?;
    c.expect_end()?;
    build_call(&name, args, line)
}

fn arity_err(name: &str, want: &str, line: usize, got: usize) -> FrontendError {
    FrontendError::SyntaxError {
        line,
        expected: format!("{want} arguments to {name}"),
        found: format!("{got}"),
    }
}

fn want_ident(arg: &Arg, what: &str, line: usize) -> Result<String, FrontendError> {
    match arg {
        Arg::Ident(s) => Ok(s.clone()),
        Arg::Int(v) => Err(FrontendError::SyntaxError {
            line,
            expected: what.into(),
            found: format!("'{v}'"),
        }),
    }
}

fn want_var(arg: &Arg, what: &str, line: usize) -> Result<String, FrontendError> {
    let name = want_ident(arg, what, line)?;
    check_var(&name, line)
}

fn want_int(arg: &Arg, what: &str, line: usize) -> Result<i64, FrontendError> {
    match arg {
        Arg::Int(v) => Ok(*v),
        Arg::Ident(s) => Err(FrontendError::SyntaxError {
            line,
            expected: what.into(),
            found: format!("'{s}'"),
        }),
    }
}

fn want_const(arg: &Arg, expected: &str, line: usize) -> Result<String, FrontendError> {
    let name = want_ident(arg, expected, line)?;
    if name != expected {
        return Err(FrontendError::SyntaxError {
            line,
            expected: expected.into(),
            found: format!("'{name}'"),
        });
    }
    Ok(name)
}

fn build_call(name: &str, args: Vec<Arg>, line: usize) -> Result<StatementKind, FrontendError> {
    match name {
        "MPI_INIT" => {
            if args.len() != 1 {
                return Err(arity_err(name, "1", line, args.len()));
            }
            want_var(&args[0], "error variable", line)?;
            Ok(StatementKind::CallMpiInit)
        }
        "MPI_FINALIZE" => {
            if args.len() != 1 {
                return Err(arity_err(name, "1", line, args.len()));
            }
            want_var(&args[0], "error variable", line)?;
            Ok(StatementKind::CallFinalize)
        }
        "MPI_COMM_SIZE" => {
            if args.len() != 3 {
                return Err(arity_err(name, "3", line, args.len()));
            }
            want_const(&args[0], "MPI_COMM_WORLD", line)?;
            let count_var = want_var(&args[1], "count variable", line)?;
            want_var(&args[2], "error variable", line)?;
            Ok(StatementKind::CallCommSize { count_var })
        }
        "MPI_COMM_RANK" => {
            if args.len() != 3 {
                return Err(arity_err(name, "3", line, args.len()));
            }
            want_const(&args[0], "MPI_COMM_WORLD", line)?;
            let rank_var = want_var(&args[1], "rank variable", line)?;
            want_var(&args[2], "error variable", line)?;
            Ok(StatementKind::CallCommRank { rank_var })
        }
        "MPI_SEND" => {
            if args.len() != 7 {
                return Err(arity_err(name, "7", line, args.len()));
            }
            let buffer = want_var(&args[0], "send buffer", line)?;
            let count = want_int(&args[1], "count literal", line)?;
            let datatype = want_const(&args[2], "MPI_INTEGER", line)?;
            let dest = want_int(&args[3], "destination rank literal", line)?;
            let tag = want_int(&args[4], "tag literal", line)?;
            let comm = want_const(&args[5], "MPI_COMM_WORLD", line)?;
            want_var(&args[6], "error variable", line)?;
            Ok(StatementKind::CallSend {
                buffer,
                count,
                datatype,
                dest,
                tag,
                comm,
            })
        }
        "MPI_RECV" => {
            if args.len() != 8 {
                return Err(arity_err(name, "8", line, args.len()));
            }
            let buffer = want_var(&args[0], "receive buffer", line)?;
            let count = want_int(&args[1], "count literal", line)?;
            let datatype = want_const(&args[2], "MPI_INTEGER", line)?;
            let source = match &args[3] {
                Arg::Int(v) => RecvSource::Rank(*v),
                Arg::Ident(s) if s == "MPI_ANY_SOURCE" => RecvSource::AnySource,
                Arg::Ident(s) => {
                    return Err(FrontendError::SyntaxError {
                        line,
                        expected: "source rank literal or MPI_ANY_SOURCE".into(),
                        found: format!("'{s}'"),
                    })
                }
            };
            let tag = match &args[4] {
                Arg::Int(v) => RecvTag::Tag(*v),
                Arg::Ident(s) if s == "MPI_ANY_TAG" => RecvTag::AnyTag,
                Arg::Ident(s) => {
                    return Err(FrontendError::SyntaxError {
                        line,
                        expected: "tag literal or MPI_ANY_TAG".into(),
                        found: format!("'{s}'"),
                    })
                }
            };
            let comm = want_const(&args[5], "MPI_COMM_WORLD", line)?;
            want_var(&args[6], "status variable", line)?;
            want_var(&args[7], "error variable", line)?;
            Ok(StatementKind::CallRecv {
                buffer,
                count,
                datatype,
                source,
                tag,
                comm,
            })
        }
        _ => Err(FrontendError::UnknownCall {
            line,
            name: name.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse, tokenize};
    use super::*;

    fn program(src: &str) -> SourceProgram {
        let toks = tokenize(src).unwrap();
        parse_program(src, &toks).unwrap()
    }

    #[test]
    fn empty_input_is_empty_program() {
        let p = program("");
        assert!(p.statements.is_empty());
    }

    #[test]
    fn numbers_are_consecutive() {
        let p = program("SUM=3\nX=1\nEND\n");
        let nums: Vec<_> = p.statements.iter().map(|s| s.number).collect();
        assert_eq!(nums, vec![Some(1), Some(2), Some(3)]);
    }

    #[test]
    fn format_gets_no_number() {
        let p = program("WRITE(*,5) X\n5 format ('x: ', I3)\nEND\n");
        assert_eq!(p.statements[1].number, None);
        match &p.statements[1].kind {
            StatementKind::Format { label, spec } => {
                assert_eq!(*label, 5);
                assert!(spec.contains("I3"));
            }
            other => panic!("unexpected: {other:?}"),
        }
        assert_eq!(p.statements[2].number, Some(2));
    }

    #[test]
    fn continuation_joins_statement() {
        let src = "call MPI_Recv(received,1,MPI_INTEGER, MPI_ANY_SOURCE,\n$ MPI_ANY_TAG, MPI_COMM_WORLD, status, ierr)\n";
        let p = program(src);
        assert_eq!(p.statements.len(), 1);
        assert!(matches!(
            p.statements[0].kind,
            StatementKind::CallRecv { .. }
        ));
        assert_eq!(p.statements[0].line_indices, vec![0, 1]);
    }

    #[test]
    fn if_without_endif_is_unbalanced() {
        let src = "IF(X.LT.0) THEN\nX=1\nEND\n";
        match parse(src) {
            Err(FrontendError::UnbalancedIf { line: 1 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn stray_endif_is_unbalanced() {
        assert!(matches!(
            parse("ENDIF\n"),
            Err(FrontendError::UnbalancedIf { .. })
        ));
    }

    #[test]
    fn double_else_is_unbalanced() {
        let src = "IF(X.LT.0) THEN\nELSE\nELSE\nENDIF\n";
        assert!(matches!(
            parse(src),
            Err(FrontendError::UnbalancedIf { .. })
        ));
    }

    #[test]
    fn end_if_two_words() {
        let p = program("IF(X.LT.0) THEN\nEND IF\n");
        assert!(matches!(p.statements[1].kind, StatementKind::EndIf));
    }

    #[test]
    fn unknown_call_rejected() {
        assert!(matches!(
            parse("call MPI_Bcast(x,1,MPI_INTEGER,0,MPI_COMM_WORLD,ierr)\n"),
            Err(FrontendError::UnknownCall { .. })
        ));
    }

    #[test]
    fn unknown_constant_rejected() {
        assert!(matches!(
            parse("call MPI_Send(X,1,MPI_REAL,0,0,MPI_COMM_WORLD,ierr)\n"),
            Err(FrontendError::UnknownConstant { .. })
        ));
    }

    #[test]
    fn decl_with_dimension() {
        let p = program("integer ierr, status(MPI_STATUS_SIZE), x\n");
        match &p.statements[0].kind {
            StatementKind::IntegerDecl { names } => {
                assert_eq!(names, &["IERR", "STATUS", "X"]);
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn expression_precedence() {
        let p = program("Y=A+B*C\n");
        match &p.statements[0].kind {
            StatementKind::Assignment { value, .. } => match value {
                Expr::Binary {
                    op: BinOp::Add,
                    rhs,
                    ..
                } => {
                    assert!(matches!(**rhs, Expr::Binary { op: BinOp::Mul, .. }))
                }
                other => panic!("unexpected: {other:?}"),
            },
            other => panic!("unexpected: {other:?}"),
        }
    }
}
