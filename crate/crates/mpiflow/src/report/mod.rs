//! End-to-end pipeline driver and the analysis report model.

mod annotate;
mod render;

pub use annotate::annotate;
pub use render::{render_json, render_text};

use serde::Serialize;

use crate::cfg::{self, MatchOptions, MpiCfg, RankContext};
use crate::dataflow::{self, Dataflow};
use crate::frontend::{self, SourceProgram};
use crate::AnalysisError;

#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    /// Require exact send/receive count equality when matching.
    pub strict_count: bool,
    /// Include MPI bookkeeping variables (rank/size) in the report.
    pub show_mpi_vars: bool,
}

/// Everything the pipeline produced for one source file.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub program: SourceProgram,
    pub cfg: MpiCfg,
    pub dataflow: Dataflow,
    pub report: AnalysisReport,
}

/// Parses, builds the MPI-CFG, runs dataflow, and assembles the report.
pub fn analyze_source(source: &str, opts: &ReportOptions) -> Result<Analysis, AnalysisError> {
    let program = frontend::parse(source)?;
    let cfg = cfg::build(
        &program,
        &MatchOptions {
            strict_count: opts.strict_count,
        },
    )?;
    let dataflow = dataflow::run(&program, &cfg);
    let report = build_report(&program, &cfg, &dataflow, opts);
    Ok(Analysis {
        program,
        cfg,
        dataflow,
        report,
    })
}

/// The rendered analysis report. Field order is the JSON key order.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AnalysisReport {
    pub schema: u32,
    pub summary: Summary,
    pub definitions: Vec<DefinitionRow>,
    pub dcu: Vec<DcuRow>,
    pub dpu: Vec<DpuRow>,
    pub sync: Vec<SyncRow>,
    pub influence: Vec<InfluenceRow>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub statements: usize,
    pub blocks: usize,
    pub special_id: Option<String>,
    pub ranks: Vec<i64>,
    pub definition_rows: usize,
    pub dcu_rows: usize,
    pub dpu_rows: usize,
    pub sync_rows: usize,
    pub influence_rows: usize,
    pub warning_rows: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct DefinitionRow {
    pub var: String,
    pub stmt: u32,
    pub block: u32,
    /// Section rank, or null for global context.
    pub rank: Option<i64>,
    pub origin: &'static str,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct DcuRow {
    pub var: String,
    pub def_stmt: u32,
    pub def_block: u32,
    pub use_stmt: u32,
    pub use_block: u32,
    pub use_text: String,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct DpuRow {
    pub var: String,
    pub def_stmt: u32,
    pub edge_from: u32,
    pub edge_to: u32,
    pub pred_stmt: u32,
    pub pred_text: String,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SyncRow {
    pub send_stmt: u32,
    pub send_block: u32,
    pub recv_stmt: u32,
    pub recv_block: u32,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct InfluenceRow {
    pub var: String,
    pub def_stmt: u32,
    /// Section rank of the definition, or null for global.
    pub rank: Option<i64>,
    pub stmts: Vec<u32>,
    /// Statements only reachable across a synchronization edge.
    pub xproc: Vec<u32>,
}

pub fn build_report(
    program: &SourceProgram,
    cfg: &MpiCfg,
    df: &Dataflow,
    opts: &ReportOptions,
) -> AnalysisReport {
    let visible = |def: usize| opts.show_mpi_vars || !df.defs[def].origin.is_bookkeeping();
    let text_of = |stmt: u32| {
        program
            .statement(stmt)
            .map(|s| s.text.clone())
            .unwrap_or_default()
    };

    let definitions: Vec<DefinitionRow> = df
        .defs
        .iter()
        .enumerate()
        .filter(|(k, _)| visible(*k))
        .map(|(_, d)| DefinitionRow {
            var: d.var.clone(),
            stmt: d.stmt,
            block: d.block,
            rank: d.context.rank(),
            origin: d.origin.as_str(),
        })
        .collect();

    let dcu: Vec<DcuRow> = df
        .dcu
        .iter()
        .filter(|p| visible(p.def))
        .map(|p| DcuRow {
            var: df.defs[p.def].var.clone(),
            def_stmt: df.defs[p.def].stmt,
            def_block: df.defs[p.def].block,
            use_stmt: df.cuses[p.cuse].stmt,
            use_block: df.cuses[p.cuse].block,
            use_text: text_of(df.cuses[p.cuse].stmt),
        })
        .collect();

    let dpu: Vec<DpuRow> = df
        .dpu
        .iter()
        .filter(|p| visible(p.def))
        .map(|p| DpuRow {
            var: df.defs[p.def].var.clone(),
            def_stmt: df.defs[p.def].stmt,
            edge_from: df.puses[p.puse].from,
            edge_to: df.puses[p.puse].to,
            pred_stmt: df.puses[p.puse].stmt,
            pred_text: text_of(df.puses[p.puse].stmt),
        })
        .collect();

    let sync: Vec<SyncRow> = cfg
        .sync_edges()
        .map(|e| {
            let send = cfg
                .comms
                .iter()
                .find(|c| c.block == e.from && c.direction == cfg::CommDirection::Send)
                .expect("send record");
            let recv = cfg
                .comms
                .iter()
                .find(|c| c.block == e.to && c.direction == cfg::CommDirection::Receive)
                .expect("receive record");
            SyncRow {
                send_stmt: send.stmt,
                send_block: e.from,
                recv_stmt: recv.stmt,
                recv_block: e.to,
            }
        })
        .collect();

    let influence: Vec<InfluenceRow> = df
        .influence
        .iter()
        .filter(|e| visible(e.def) && !e.stmts.is_empty())
        .map(|e| InfluenceRow {
            var: df.defs[e.def].var.clone(),
            def_stmt: df.defs[e.def].stmt,
            rank: df.defs[e.def].context.rank(),
            stmts: e.stmts.clone(),
            xproc: e.xproc.clone(),
        })
        .collect();

    let warnings: Vec<String> = cfg.warnings.iter().map(|w| w.to_string()).collect();

    let mut ranks: Vec<i64> = cfg
        .blocks
        .iter()
        .filter_map(|b| b.rank_context.rank())
        .collect();
    ranks.sort_unstable();
    ranks.dedup();

    AnalysisReport {
        schema: 1,
        summary: Summary {
            statements: program.executable().count(),
            blocks: cfg.blocks.len(),
            special_id: program.special_id.clone(),
            ranks,
            definition_rows: definitions.len(),
            dcu_rows: dcu.len(),
            dpu_rows: dpu.len(),
            sync_rows: sync.len(),
            influence_rows: influence.len(),
            warning_rows: warnings.len(),
        },
        definitions,
        dcu,
        dpu,
        sync,
        influence,
        warnings,
    }
}

pub(crate) fn context_label(rank: Option<i64>) -> String {
    match rank {
        None => RankContext::Global.to_string(),
        Some(r) => RankContext::Section(r).to_string(),
    }
}
