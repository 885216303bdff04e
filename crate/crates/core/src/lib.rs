//! Directed support graphs of unitary operators.
//!
//! A unitary `U` on an `N`-dimensional space becomes a directed graph on the
//! basis states `0..N`, with an edge `j -> i` whenever `<i|U|j>` is non-zero.
//! The crate covers the whole pipeline:
//!
//! - [`matrix`]: dense complex matrices, Kronecker products, unitarity checks, matrix files
//! - [`catalog`]: named gates (Paulis, Hadamards, Swap Alpha, Berkeley, Grover)
//! - [`expr`]: the `berkeley (x) px` expression language
//! - [`tss`]: support-graph construction and node-level stars
//! - [`metrics`]: sinks, sources, self loops, simple cycles, multiplicity, islands
//! - [`export`]: DOT, GraphML, JSON and CSV output
//!
//! ```
//! use tss_core::{catalog::Catalog, expr, metrics, tss};
//!
//! let catalog = Catalog::standard();
//! let ctx = expr::EvalContext::new(&catalog);
//! let u = expr::evaluate(&expr::parse("px ^(x) 4").unwrap(), &ctx).unwrap();
//! let g = tss::build_tss(&u, tss::DEFAULT_THRESHOLD);
//! let report = metrics::compute_metrics(&g, &metrics::CycleBudget::default());
//! assert_eq!(report.num_cycles, 8);
//! assert_eq!(report.num_self_loops, 0);
//! ```

pub mod catalog;
pub mod export;
pub mod expr;
pub mod matrix;
pub mod metrics;
pub mod tss;
