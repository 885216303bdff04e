//! The `tss` command line.
//!
//! `run` does all the work and returns the text to print, so tests can drive
//! it without spawning a process.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tss_core::catalog::Catalog;
use tss_core::export::{
    export_graph, export_histogram, export_metrics, metrics_csv_row, ExportError, ExportFormat,
    LabelMode, METRICS_CSV_HEADER,
};
use tss_core::expr::{evaluate, parse, EvalContext, EvalError, GateExpr, ParseError};
use tss_core::matrix::{
    check_unitarity, ComplexMatrix, DEFAULT_MAX_DIM, DEFAULT_UNITARITY_TOLERANCE,
};
use tss_core::metrics::{compute_metrics, islands, CycleBudget, MetricsReport, DEFAULT_CYCLE_CAP};
use tss_core::tss::{build_tss, GraphError, TssGraph, DEFAULT_THRESHOLD};

#[derive(Debug, Parser)]
#[command(
    name = "tss",
    version,
    about = "Directed support graphs of quantum gates",
    after_help = "Expressions: `berkeley (x) px`, `px ^(x) 4`, `kron(pz, gr4)`, `swap_alpha(-0.5)`, `file(m.csv)`.\nUse `-` as the expression to read it from stdin."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in gates with their qubit counts and parameters.
    Catalog,
    /// Unitarity check, metrics and island summary.
    Analyze(Input),
    /// Metrics report (or out-degree histogram with --histogram).
    Metrics {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Print the out-degree histogram instead of the report.
        #[arg(long)]
        histogram: bool,
    },
    /// Write the full graph, or one vertex's star with --node.
    Export {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        format: GraphFormat,
        /// Only the out-edges of this vertex.
        #[arg(long)]
        node: Option<usize>,
        #[arg(long, value_enum, default_value_t = Labels::Decimal)]
        labels: Labels,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Input {
    /// Gate expression, or `-` to read it from stdin.
    #[arg(required_unless_present = "input_file", conflicts_with = "input_file")]
    pub expr: Option<String>,
    /// Matrix file (.json or .csv) instead of an expression.
    #[arg(long = "input", value_name = "FILE")]
    pub input_file: Option<PathBuf>,
    /// Entries with magnitude at or below this are treated as zero.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Stop counting simple cycles after this many.
    #[arg(long, env = "TSS_CYCLE_CAP", default_value_t = DEFAULT_CYCLE_CAP)]
    pub cycle_cap: u64,
    /// Only count cycles with at most this many vertices.
    #[arg(long)]
    pub max_cycle_length: Option<usize>,
    /// Largest matrix dimension to build.
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    pub max_dim: usize,
    /// Name used in reports (defaults to the normalized expression).
    #[arg(long)]
    pub name: Option<String>,
    /// Write output here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Graphml,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Labels {
    Decimal,
    Binary,
}

impl From<TableFormat> for ExportFormat {
    fn from(f: TableFormat) -> Self {
        match f {
            TableFormat::Csv => ExportFormat::Csv,
            TableFormat::Json => ExportFormat::Json,
        }
    }
}

impl From<GraphFormat> for ExportFormat {
    fn from(f: GraphFormat) -> Self {
        match f {
            GraphFormat::Dot => ExportFormat::Dot,
            GraphFormat::Graphml => ExportFormat::GraphMl,
            GraphFormat::Json => ExportFormat::Json,
        }
    }
}

impl From<Labels> for LabelMode {
    fn from(l: Labels) -> Self {
        match l {
            Labels::Decimal => LabelMode::Decimal,
            Labels::Binary => LabelMode::Binary,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{source}\n  {input}\n  {marker}^")]
    Parse {
        source: ParseError,
        input: String,
        marker: String,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for bad input, 2 for configured limits.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Eval(e) if e.is_limit() => 2,
            _ => 1,
        }
    }
}

/// Runs one command and returns what it prints.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let catalog = Catalog::standard();
    match &cli.command {
        Command::Catalog => Ok(catalog_listing(&catalog)),
        Command::Analyze(input) => {
            let loaded = load(input, &catalog)?;
            analyze(&loaded, input)
        }
        Command::Metrics {
            input,
            format,
            histogram,
        } => {
            let loaded = load(input, &catalog)?;
            if *histogram {
                let h = tss_core::metrics::out_degree_histogram(&loaded.graph);
                Ok(export_histogram(&h, (*format).into())?)
            } else {
                Ok(export_metrics(&report(&loaded, input)?, (*format).into())?)
            }
        }
        Command::Export {
            input,
            format,
            node,
            labels,
        } => {
            let loaded = load(input, &catalog)?;
            let graph = match node {
                Some(j) => loaded.graph.star_subgraph(*j)?,
                None => loaded.graph,
            };
            Ok(export_graph(&graph, (*format).into(), (*labels).into())?)
        }
    }
}

/// Where output goes for this command, if not stdout.
pub fn output_path(cli: &Cli) -> Option<&PathBuf> {
    match &cli.command {
        Command::Catalog => None,
        Command::Analyze(input)
        | Command::Metrics { input, .. }
        | Command::Export { input, .. } => input.output.as_ref(),
    }
}

fn catalog_listing(catalog: &Catalog) -> String {
    let mut out = format!(
        "{:<20} {:<6} {:<8} {}\n",
        "gate", "qubits", "unitary", "description"
    );
    for spec in catalog.iter() {
        let _ = writeln!(
            out,
            "{:<20} {:<6} {:<8} {}",
            spec.signature(),
            spec.arity.to_string(),
            spec.unitary,
            spec.summary
        );
    }
    out
}

struct Loaded {
    name: String,
    matrix: ComplexMatrix,
    graph: TssGraph,
}

fn load(input: &Input, catalog: &Catalog) -> Result<Loaded, CliError> {
    if input.threshold.is_nan() || input.threshold < 0.0 {
        return Err(CliError::Usage(format!(
            "--threshold must be non-negative, got {}",
            input.threshold
        )));
    }
    if input.cycle_cap == 0 {
        return Err(CliError::Usage("--cycle-cap must be at least 1".into()));
    }
    if input.max_cycle_length == Some(0) {
        return Err(CliError::Usage("--max-cycle-length must be at least 1".into()));
    }
    let expr = match (&input.expr, &input.input_file) {
        (Some(text), None) => {
            let text = if text == "-" {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|source| CliError::Io {
                        path: "<stdin>".into(),
                        source,
                    })?;
                buf
            } else {
                text.clone()
            };
            parse_located(text.trim())?
        }
        (None, Some(path)) => GateExpr::MatrixFile(path.clone()),
        _ => {
            return Err(CliError::Usage(
                "give exactly one of an expression or --input FILE".into(),
            ))
        }
    };
    let ctx = EvalContext {
        max_dim: input.max_dim,
        ..EvalContext::new(catalog)
    };
    let matrix = evaluate(&expr, &ctx)?;
    let graph = build_tss(&matrix, input.threshold);
    let name = match (&input.name, &expr) {
        (Some(name), _) => name.clone(),
        (None, GateExpr::MatrixFile(path)) => path.display().to_string(),
        (None, e) => e.to_string(),
    };
    Ok(Loaded {
        name,
        matrix,
        graph,
    })
}

fn parse_located(text: &str) -> Result<GateExpr, CliError> {
    parse(text).map_err(|source| CliError::Parse {
        marker: " ".repeat(source.offset),
        input: text.to_string(),
        source,
    })
}

fn budget(input: &Input) -> CycleBudget {
    let b = CycleBudget::new(input.cycle_cap);
    match input.max_cycle_length {
        Some(len) => b.with_max_length(len),
        None => b,
    }
}

fn report(loaded: &Loaded, input: &Input) -> Result<MetricsReport, CliError> {
    Ok(compute_metrics(&loaded.graph, &budget(input)).with_name(&loaded.name))
}

fn analyze(loaded: &Loaded, input: &Input) -> Result<String, CliError> {
    let unitarity = check_unitarity(&loaded.matrix, DEFAULT_UNITARITY_TOLERANCE);
    let r = report(loaded, input)?;
    let mut out = String::new();
    let _ = writeln!(out, "name: {}", loaded.name);
    let _ = writeln!(out, "dimension: {}", loaded.matrix.dim());
    let _ = writeln!(
        out,
        "unitary: {} (max deviation {:.3e}, tolerance {:e})",
        unitarity.is_unitary, unitarity.max_deviation, unitarity.tolerance_used
    );
    let _ = writeln!(out, "threshold: {:e}", loaded.graph.threshold());
    let _ = writeln!(out, "edges: {}", r.num_edges);
    if r.cycles_capped {
        let _ = writeln!(out, "loops: more than {} (cap reached)", r.num_cycles);
    }
    out.push('\n');
    out.push_str(METRICS_CSV_HEADER);
    out.push('\n');
    out.push_str(&metrics_csv_row(&r));
    out.push_str("\n\n");
    let comps = islands(&loaded.graph);
    let _ = writeln!(out, "islands: {}", comps.len());
    for (k, comp) in comps.iter().enumerate() {
        let members: Vec<String> = comp.iter().map(usize::to_string).collect();
        let self_loops = comp.iter().filter(|&&v| loaded.graph.has_edge(v, v)).count();
        let _ = writeln!(
            out,
            "  {}: size {}, self loops {}, vertices {}",
            k + 1,
            comp.len(),
            self_loops,
            members.join(" ")
        );
    }
    Ok(out)
}
