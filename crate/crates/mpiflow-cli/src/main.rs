use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mpiflow::cfg::export_dot;
use mpiflow::report::{annotate, render_json, render_text, ReportOptions};
use mpiflow::{analyze_source, AnalysisError};

/// Static control- and data-flow analyzer for a mini-Fortran/MPI subset.
#[derive(Parser)]
#[command(name = "mpiflow", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the source with block and statement numbers in the margin.
    Annotate { file: PathBuf },
    /// Export the MPI control-flow graph in DOT format.
    Cfg {
        file: PathBuf,
        /// Write the graph to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full dataflow analysis and print a report.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Require exact send/receive count equality when matching.
        #[arg(long)]
        strict_count: bool,
        /// Include MPI bookkeeping variables (rank/size) in the report.
        #[arg(long)]
        show_mpi_vars: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("{message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Annotate { file } => {
            let analysis = load(&file, &ReportOptions::default())?;
            print!("{}", annotate(&analysis.program, &analysis.cfg));
        }
        Command::Cfg { file, out } => {
            let analysis = load(&file, &ReportOptions::default())?;
            let dot = export_dot(&analysis.cfg);
            match out {
                Some(path) => std::fs::write(&path, dot)
                    .map_err(|e| format!("{}: error: {e}", path.display()))?,
                None => print!("{dot}"),
            }
        }
        Command::Analyze {
            file,
            format,
            strict_count,
            show_mpi_vars,
        } => {
            let opts = ReportOptions {
                strict_count,
                show_mpi_vars,
            };
            let analysis = load(&file, &opts)?;
            for warning in &analysis.cfg.warnings {
                eprintln!("warning: {warning}");
            }
            match format {
                Format::Text => print!("{}", render_text(&analysis.report)),
                Format::Json => print!("{}", render_json(&analysis.report)),
            }
        }
    }
    Ok(())
}

fn load(file: &Path, opts: &ReportOptions) -> Result<mpiflow::Analysis, String> {
    let source =
        std::fs::read_to_string(file).map_err(|e| format!("{}: error: {e}", file.display()))?;
    analyze_source(&source, opts).map_err(|e| diagnostic(file, &e))
}

fn diagnostic(file: &Path, err: &AnalysisError) -> String {
    format!(
        "{}:{}:{}: error: {err}",
        file.display(),
        err.line().unwrap_or(1),
        err.column().unwrap_or(1)
    )
}
