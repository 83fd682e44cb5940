//! Frontend: lexing, parsing, statement numbering, and kind classification.
//!
//! The accepted language is a frozen mini-subset of fixed-ish-form Fortran:
//! integer scalars only, one program unit, no loops, no arrays (apart from
//! the `status(MPI_STATUS_SIZE)` declaration), and the handful of MPI calls
//! listed in [`StatementKind`]. Identifiers are case-insensitive and folded
//! to uppercase. A line whose first non-blank character is `$` continues the
//! previous statement; lines starting with `!` or a lone `C` are comments.

mod classify;
mod lexer;
mod parser;

pub use classify::classify_statements;
pub use lexer::{tokenize, RelOp, Tok, Token};
pub use parser::parse_program;

use serde::Serialize;

/// A parsed program: raw lines, numbered statements, and the detected rank
/// variable (the paper calls it `special_id`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceProgram {
    /// Raw source lines, in order.
    pub lines: Vec<String>,
    /// Parsed statements in source order. Executable statements carry
    /// consecutive numbers starting at 1; `FORMAT` statements carry none.
    pub statements: Vec<TypedStatement>,
    /// The second argument of the single `MPI_Comm_rank` call, if present.
    pub special_id: Option<String>,
}

impl SourceProgram {
    /// Executable statements only, in numbering order.
    pub fn executable(&self) -> impl Iterator<Item = &TypedStatement> {
        self.statements.iter().filter(|s| s.number.is_some())
    }

    pub fn statement(&self, number: u32) -> Option<&TypedStatement> {
        self.executable().find(|s| s.number == Some(number))
    }
}

/// One source statement with its number, kind, and joined raw text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedStatement {
    /// Statement number; `None` for non-executable `FORMAT` statements.
    pub number: Option<u32>,
    pub kind: StatementKind,
    /// Raw source text with continuation lines joined.
    pub text: String,
    /// 1-based source line of the first line of the statement.
    pub line: usize,
    /// 0-based indices into [`SourceProgram::lines`] covered by this
    /// statement (first line plus continuations).
    pub line_indices: Vec<usize>,
}

/// The assigned "type" of a statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementKind {
    Include,
    IntegerDecl {
        names: Vec<String>,
    },
    Assignment {
        target: String,
        value: Expr,
    },
    /// `IF(<special_id> .EQ. <rank>) THEN` — declares a rank section.
    IfRank {
        rank: i64,
        var: String,
    },
    IfOrdinary {
        cond: Condition,
    },
    Else,
    EndIf,
    Write {
        args: Vec<String>,
        label: i64,
    },
    /// Non-executable; attached to its label.
    Format {
        label: i64,
        spec: String,
    },
    CallMpiInit,
    CallCommSize {
        count_var: String,
    },
    CallCommRank {
        rank_var: String,
    },
    CallSend {
        buffer: String,
        count: i64,
        datatype: String,
        dest: i64,
        tag: i64,
        comm: String,
    },
    CallRecv {
        buffer: String,
        count: i64,
        datatype: String,
        source: RecvSource,
        tag: RecvTag,
        comm: String,
    },
    CallFinalize,
    End,
}

/// Source argument of a receive: a literal rank or the any-source wildcard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecvSource {
    Rank(i64),
    AnySource,
}

/// Tag argument of a receive: a literal tag or the any-tag wildcard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecvTag {
    Tag(i64),
    AnyTag,
}

/// Integer expression over scalar variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Var(String),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A single relational comparison, the only condition form in the subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub lhs: Expr,
    pub op: RelOp,
    pub rhs: Expr,
}

impl Expr {
    /// Pushes every referenced identifier, once per occurrence site.
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) => out.push(v.clone()),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
        }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }
}

impl Condition {
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.lhs.collect_vars(&mut out);
        self.rhs.collect_vars(&mut out);
        out
    }
}

/// MPI named constants the subset accepts; anything else spelled `MPI_*`
/// is rejected.
pub const KNOWN_CONSTANTS: &[&str] = &[
    "MPI_COMM_WORLD",
    "MPI_INTEGER",
    "MPI_ANY_SOURCE",
    "MPI_ANY_TAG",
    "MPI_STATUS_SIZE",
];

/// Errors from the frontend stages.
#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum FrontendError {
    #[error("illegal character '{ch}'")]
    IllegalCharacter { line: usize, col: usize, ch: char },
    #[error("syntax error: expected {expected}, found {found}")]
    SyntaxError {
        line: usize,
        expected: String,
        found: String,
    },
    #[error("unbalanced IF")]
    UnbalancedIf { line: usize },
    #[error("unknown call {name}")]
    UnknownCall { line: usize, name: String },
    #[error("unknown MPI constant {name}")]
    UnknownConstant { line: usize, name: String },
    #[error("multiple MPI_Comm_rank calls (statement {stmt})")]
    MultipleCommRank { line: usize, stmt: u32 },
    #[error("IF references rank variable before MPI_Comm_rank (statement {stmt})")]
    RankIfBeforeCommRank { line: usize, stmt: u32 },
    #[error(
        "unsupported rank condition (statement {stmt}): only <rank_var> .EQ. <integer> is accepted"
    )]
    UnsupportedRankCondition { line: usize, stmt: u32 },
}

impl FrontendError {
    pub fn line(&self) -> Option<usize> {
        Some(match self {
            FrontendError::IllegalCharacter { line, .. }
            | FrontendError::SyntaxError { line, .. }
            | FrontendError::UnbalancedIf { line }
            | FrontendError::UnknownCall { line, .. }
            | FrontendError::UnknownConstant { line, .. }
            | FrontendError::MultipleCommRank { line, .. }
            | FrontendError::RankIfBeforeCommRank { line, .. }
            | FrontendError::UnsupportedRankCondition { line, .. } => *line,
        })
    }

    pub fn column(&self) -> Option<usize> {
        match self {
            FrontendError::IllegalCharacter { col, .. } => Some(*col),
            _ => None,
        }
    }
}

/// Full frontend: tokenize, parse, classify.
pub fn parse(source: &str) -> Result<SourceProgram, FrontendError> {
    let tokens = tokenize(source)?;
    let program = parse_program(source, &tokens)?;
    classify_statements(program)
}
