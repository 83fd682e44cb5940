//! Text and JSON renderers for the analysis report. Both are pure
//! functions of the report, so identical inputs render byte-identically.

use super::{context_label, AnalysisReport};
use std::fmt::Write;

pub fn render_text(report: &AnalysisReport) -> String {
    let mut out = String::new();
    let s = &report.summary;

    out.push_str("SUMMARY\n");
    writeln!(out, "  statements: {}", s.statements).unwrap();
    writeln!(out, "  blocks: {}", s.blocks).unwrap();
    writeln!(
        out,
        "  special_id: {}",
        s.special_id.as_deref().unwrap_or("-")
    )
    .unwrap();
    let ranks = s
        .ranks
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    writeln!(out, "  ranks: [{ranks}]").unwrap();
    writeln!(
        out,
        "  rows: {} definitions, {} dcu, {} dpu, {} sync, {} influence, {} warnings",
        s.definition_rows, s.dcu_rows, s.dpu_rows, s.sync_rows, s.influence_rows, s.warning_rows
    )
    .unwrap();

    out.push_str("\nDEFINITIONS\n");
    for d in &report.definitions {
        writeln!(
            out,
            "  {}@{} block {} [{}] ({})",
            d.var,
            d.stmt,
            d.block,
            context_label(d.rank),
            d.origin
        )
        .unwrap();
    }

    out.push_str("\nDEF->C-USE PAIRS\n");
    for p in &report.dcu {
        writeln!(
            out,
            "  {}@{} -> stmt {} ({})",
            p.var, p.def_stmt, p.use_stmt, p.use_text
        )
        .unwrap();
    }

    out.push_str("\nDEF->P-USE PAIRS\n");
    for p in &report.dpu {
        writeln!(
            out,
            "  {}@{} -> edge ({},{}) stmt {} ({})",
            p.var, p.def_stmt, p.edge_from, p.edge_to, p.pred_stmt, p.pred_text
        )
        .unwrap();
    }

    out.push_str("\nSYNC EDGES\n");
    for e in &report.sync {
        writeln!(
            out,
            "  send stmt {} (block {}) -> recv stmt {} (block {})",
            e.send_stmt, e.send_block, e.recv_stmt, e.recv_block
        )
        .unwrap();
    }

    out.push_str("\nCROSS-PROCESS INFLUENCE\n");
    for row in &report.influence {
        let flag = if row.xproc.is_empty() { "" } else { " [XPROC]" };
        let stmts = row
            .stmts
            .iter()
            .map(|n| {
                if row.xproc.contains(n) {
                    format!("{n}*")
                } else {
                    n.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(", ");
        writeln!(out, "  {}@{}{flag} -> {stmts}", row.var, row.def_stmt).unwrap();
    }

    out.push_str("\nWARNINGS\n");
    for w in &report.warnings {
        writeln!(out, "  {w}").unwrap();
    }

    out
}

pub fn render_json(report: &AnalysisReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}
