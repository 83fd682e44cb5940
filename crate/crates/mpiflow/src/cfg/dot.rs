//! Deterministic Graphviz export of the MPI-CFG. Edge categories are
//! encoded both as styles and as an explicit `category` attribute so
//! consumers need not interpret styling.

use super::{Branch, EdgeCategory, MpiCfg};
use std::fmt::Write;

pub fn export_dot(cfg: &MpiCfg) -> String {
    let mut out = String::from("digraph mpicfg {\n  rankdir=TB;\n  node [shape=box];\n");

    for b in &cfg.blocks {
        writeln!(
            out,
            "  b{} [label=\"B{} [{}] s{}..s{}\"];",
            b.id,
            b.id,
            b.kind.as_str(),
            b.first_stmt(),
            b.last_stmt()
        )
        .unwrap();
    }

    let mut edges = cfg.edges.clone();
    edges.sort_by(|a, b| {
        (a.from, a.to, a.category.as_str(), a.branch).cmp(&(
            b.from,
            b.to,
            b.category.as_str(),
            b.branch,
        ))
    });
    for e in &edges {
        let style = match e.category {
            EdgeCategory::Sequential => "solid",
            EdgeCategory::Parallel => "dashed",
            EdgeCategory::Synchronization => "dotted",
        };
        let mut attrs = format!("category=\"{}\", style={}", e.category.as_str(), style);
        match e.branch {
            Some(Branch::True) => attrs.push_str(", label=\"T\""),
            Some(Branch::False) => attrs.push_str(", label=\"F\""),
            None => {}
        }
        writeln!(out, "  b{} -> b{} [{}];", e.from, e.to, attrs).unwrap();
    }

    out.push_str("}\n");
    out
}
