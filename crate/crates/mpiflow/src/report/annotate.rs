//! Annotated listing: each source line prefixed with its block and
//! statement number.

use crate::cfg::MpiCfg;
use crate::frontend::{SourceProgram, StatementKind};

/// Renders `<block> <stmt> <source line>` for every line. Continuation,
/// comment, and blank lines get empty number columns; a FORMAT line shows
/// the block and statement of the WRITE that references its label, marked
/// with `*`.
pub fn annotate(program: &SourceProgram, cfg: &MpiCfg) -> String {
    // line index -> (numbers-or-blank, is the first line of its statement)
    let mut columns: Vec<Option<(String, String)>> = vec![None; program.lines.len()];

    for stmt in &program.statements {
        let cols = match (&stmt.kind, stmt.number) {
            (StatementKind::Format { label, .. }, _) => {
                write_for_label(program, cfg, *label).map(|(b, s)| (b.to_string(), format!("{s}*")))
            }
            (_, Some(n)) => cfg.block_of_stmt(n).map(|b| (b.to_string(), n.to_string())),
            _ => None,
        };
        if let (Some(cols), Some(&first)) = (cols, stmt.line_indices.first()) {
            columns[first] = Some(cols);
        }
    }

    let bw = columns
        .iter()
        .flatten()
        .map(|(b, _)| b.len())
        .max()
        .unwrap_or(1);
    let sw = columns
        .iter()
        .flatten()
        .map(|(_, s)| s.len())
        .max()
        .unwrap_or(1);

    let mut out = String::new();
    for (i, line) in program.lines.iter().enumerate() {
        let (b, s) = match &columns[i] {
            Some((b, s)) => (b.as_str(), s.as_str()),
            None => ("", ""),
        };
        out.push_str(&format!("{b:>bw$} {s:>sw$}  {line}\n"));
    }
    out
}

fn write_for_label(program: &SourceProgram, cfg: &MpiCfg, label: i64) -> Option<(u32, u32)> {
    program.statements.iter().find_map(|s| match &s.kind {
        StatementKind::Write { label: l, .. } if *l == label => {
            let n = s.number?;
            Some((cfg.block_of_stmt(n)?, n))
        }
        _ => None,
    })
}
