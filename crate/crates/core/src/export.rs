//! Text serializations of graphs, metrics and histograms.
//!
//! | format  | graph | metrics | histogram |
//! |---------|-------|---------|-----------|
//! | dot     | yes   |         |           |
//! | graphml | yes   |         |           |
//! | json    | yes   | yes     | yes       |
//! | csv     |       | yes     | yes       |
//!
//! Output is deterministic: edges ascend by `(from, to)` and vertices by index.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::MetricsReport;
use crate::tss::{GraphError, TssGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExportFormat {
    Dot,
    GraphMl,
    Json,
    Csv,
}

impl ExportFormat {
    pub fn name(self) -> &'static str {
        match self {
            ExportFormat::Dot => "dot",
            ExportFormat::GraphMl => "graphml",
            ExportFormat::Json => "json",
            ExportFormat::Csv => "csv",
        }
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(Self::Dot),
            "graphml" => Ok(Self::GraphMl),
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(format!(
                "unknown format `{other}` (expected dot, graphml, json or csv)"
            )),
        }
    }
}

/// How vertices are named in graph output.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LabelMode {
    #[default]
    Decimal,
    /// Zero-padded basis-state bit strings (`|1111>` is `1111`). Falls back
    /// to decimal when the vertex count is not a power of two.
    Binary,
}

impl FromStr for LabelMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "decimal" => Ok(Self::Decimal),
            "binary" => Ok(Self::Binary),
            other => Err(format!("unknown label mode `{other}` (expected decimal or binary)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("format `{format}` cannot represent a {what}")]
    UnsupportedFormat { format: ExportFormat, what: &'static str },
    #[error("invalid graph JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Renders vertex labels for a graph on `n` vertices.
#[derive(Clone, Copy, Debug)]
pub struct Labeler {
    width: Option<usize>,
}

impl Labeler {
    pub fn new(n: usize, mode: LabelMode) -> Self {
        let width = match mode {
            LabelMode::Binary if n.is_power_of_two() => Some((n.trailing_zeros() as usize).max(1)),
            _ => None,
        };
        Self { width }
    }

    pub fn label(&self, v: usize) -> String {
        match self.width {
            Some(w) => format!("{v:0w$b}"),
            None => v.to_string(),
        }
    }
}

pub fn export_graph(
    g: &TssGraph,
    format: ExportFormat,
    labels: LabelMode,
) -> Result<String, ExportError> {
    match format {
        ExportFormat::Dot => Ok(to_dot(g, labels)),
        ExportFormat::GraphMl => Ok(to_graphml(g, labels)),
        ExportFormat::Json => Ok(to_json(g)),
        ExportFormat::Csv => Err(ExportError::UnsupportedFormat {
            format,
            what: "graph",
        }),
    }
}

fn to_dot(g: &TssGraph, labels: LabelMode) -> String {
    let labeler = Labeler::new(g.n(), labels);
    let mut out = String::from("digraph tss {\n");
    for (j, i) in g.edges() {
        let _ = writeln!(out, "  {} -> {};", labeler.label(j), labeler.label(i));
    }
    out.push_str("}\n");
    out
}

fn to_graphml(g: &TssGraph, labels: LabelMode) -> String {
    let labeler = Labeler::new(g.n(), labels);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str(
        "  <key id=\"threshold\" for=\"graph\" attr.name=\"threshold\" attr.type=\"double\"/>\n",
    );
    out.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    out.push_str("  <graph id=\"tss\" edgedefault=\"directed\">\n");
    let _ = writeln!(out, "    <data key=\"threshold\">{:e}</data>", g.threshold());
    for v in 0..g.n() {
        let _ = writeln!(
            out,
            "    <node id=\"{v}\"><data key=\"label\">{}</data></node>",
            labeler.label(v)
        );
    }
    for (j, i) in g.edges() {
        let _ = writeln!(out, "    <edge source=\"{j}\" target=\"{i}\"/>");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    threshold: f64,
    edges: Vec<[usize; 2]>,
}

fn to_json(g: &TssGraph) -> String {
    let doc = GraphJson {
        n: g.n(),
        threshold: g.threshold(),
        edges: g.edges().map(|(j, i)| [j, i]).collect(),
    };
    let mut s = serde_json::to_string(&doc).expect("graph JSON serializes");
    s.push('\n');
    s
}

/// Reads back the output of `export_graph(.., ExportFormat::Json, ..)`.
pub fn graph_from_json(text: &str) -> Result<TssGraph, ExportError> {
    let doc: GraphJson = serde_json::from_str(text)?;
    Ok(TssGraph::from_edges(
        doc.n,
        doc.edges.into_iter().map(|[j, i]| (j, i)),
        doc.threshold,
    )?)
}

pub const METRICS_CSV_HEADER: &str =
    "name,sinks,sources,sink_source_ratio,self_loops,loops,loops_capped,multiplicity,islands";

pub fn export_metrics(r: &MetricsReport, format: ExportFormat) -> Result<String, ExportError> {
    match format {
        ExportFormat::Csv => {
            let mut out = String::from(METRICS_CSV_HEADER);
            out.push('\n');
            out.push_str(&metrics_csv_row(r));
            out.push('\n');
            Ok(out)
        }
        ExportFormat::Json => {
            let mut s = serde_json::to_string_pretty(r)?;
            s.push('\n');
            Ok(s)
        }
        _ => Err(ExportError::UnsupportedFormat {
            format,
            what: "metrics report",
        }),
    }
}

/// One data row matching [`METRICS_CSV_HEADER`], without a trailing newline.
pub fn metrics_csv_row(r: &MetricsReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        csv_field(&r.name),
        r.num_sinks,
        r.num_sources,
        format_real(r.sink_source_ratio),
        r.num_self_loops,
        r.num_cycles,
        r.cycles_capped,
        format_real(r.multiplicity),
        r.num_islands,
    )
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn export_histogram(
    h: &BTreeMap<usize, usize>,
    format: ExportFormat,
) -> Result<String, ExportError> {
    match format {
        ExportFormat::Csv => {
            let mut out = String::from("vertex,out_degree\n");
            for (v, d) in h {
                let _ = writeln!(out, "{v},{d}");
            }
            Ok(out)
        }
        ExportFormat::Json => {
            let mut s = serde_json::to_string(h)?;
            s.push('\n');
            Ok(s)
        }
        _ => Err(ExportError::UnsupportedFormat {
            format,
            what: "histogram",
        }),
    }
}

/// Integers print bare; everything else with at most six significant digits.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
