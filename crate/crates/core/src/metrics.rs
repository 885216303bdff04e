//! Structural metrics of support graphs.
//!
//! Conventions used throughout:
//! - a *sink* is a vertex with in-degree at least one, a *source* one with
//!   out-degree at least one (every vertex of a unitary's graph is both);
//! - *loops* are all simple directed cycles, self loops included;
//! - *multiplicity* is the mean in-degree, `edges / n`;
//! - *islands* are weakly connected components.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::tss::TssGraph;

/// Stop counting cycles after this many; one more than a million, so a capped
/// count reads as "more than a million".
pub const DEFAULT_CYCLE_CAP: u64 = 1_000_001;

/// Limits for simple-cycle enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleBudget {
    max_cycles: u64,
    max_length: Option<usize>,
}

impl Default for CycleBudget {
    fn default() -> Self {
        Self {
            max_cycles: DEFAULT_CYCLE_CAP,
            max_length: None,
        }
    }
}

impl CycleBudget {
    /// Panics if `max_cycles` is zero.
    pub fn new(max_cycles: u64) -> Self {
        assert!(max_cycles >= 1, "cycle cap must be at least 1");
        Self {
            max_cycles,
            max_length: None,
        }
    }

    /// Only count cycles with at most `len` vertices. Panics if `len` is zero.
    pub fn with_max_length(mut self, len: usize) -> Self {
        assert!(len >= 1, "cycle length limit must be at least 1");
        self.max_length = Some(len);
        self
    }

    pub fn max_cycles(&self) -> u64 {
        self.max_cycles
    }

    pub fn max_length(&self) -> Option<usize> {
        self.max_length
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCount {
    pub count: u64,
    /// More cycles exist than `count`; `count` equals the cap.
    pub capped: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub name: String,
    pub n: usize,
    pub num_sinks: usize,
    pub num_sources: usize,
    /// `num_sinks / num_sources`, or 0 for a graph without edges.
    pub sink_source_ratio: f64,
    pub num_self_loops: usize,
    pub num_cycles: u64,
    pub cycles_capped: bool,
    pub multiplicity: f64,
    pub num_edges: usize,
    pub out_degree_histogram: BTreeMap<usize, usize>,
    pub num_islands: usize,
}

impl MetricsReport {
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

pub fn compute_metrics(g: &TssGraph, budget: &CycleBudget) -> MetricsReport {
    let n = g.n();
    let in_deg = g.in_degrees();
    let num_sinks = in_deg.iter().filter(|&&d| d >= 1).count();
    let num_sources = (0..n).filter(|&v| g.out_degree(v) >= 1).count();
    let num_edges = g.edge_count();
    let cycles = count_simple_cycles(g, budget);
    MetricsReport {
        name: String::new(),
        n,
        num_sinks,
        num_sources,
        sink_source_ratio: if num_sources == 0 {
            0.0
        } else {
            num_sinks as f64 / num_sources as f64
        },
        num_self_loops: (0..n).filter(|&v| g.has_edge(v, v)).count(),
        num_cycles: cycles.count,
        cycles_capped: cycles.capped,
        multiplicity: num_edges as f64 / n as f64,
        num_edges,
        out_degree_histogram: out_degree_histogram(g),
        num_islands: islands(g).len(),
    }
}

pub fn out_degree_histogram(g: &TssGraph) -> BTreeMap<usize, usize> {
    (0..g.n()).map(|v| (v, g.out_degree(v))).collect()
}

/// Weakly connected components, each sorted, ordered by smallest member.
pub fn islands(g: &TssGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut uf = UnionFind::<usize>::new(n);
    for (j, i) in g.edges() {
        uf.union(j, i);
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        by_root.entry(uf.find(v)).or_default().push(v);
    }
    let mut comps: Vec<Vec<usize>> = by_root.into_values().collect();
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Strongly connected components, each sorted, ordered by smallest member.
pub fn strongly_connected_components(g: &TssGraph) -> Vec<Vec<usize>> {
    let mut pg = DiGraph::<(), ()>::with_capacity(g.n(), g.edge_count());
    for _ in 0..g.n() {
        pg.add_node(());
    }
    for (j, i) in g.edges() {
        pg.add_edge(NodeIndex::new(j), NodeIndex::new(i), ());
    }
    let mut comps: Vec<Vec<usize>> = petgraph::algo::tarjan_scc(&pg)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(NodeIndex::index).collect();
            c.sort_unstable();
            c
        })
        .collect();
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Counts simple directed cycles (self loops included) up to the budget.
///
/// Each cycle is discovered once, rooted at its smallest vertex, inside its
/// strongly connected component. Components are visited in order of their
/// smallest vertex so a capped count is reproducible.
pub fn count_simple_cycles(g: &TssGraph, budget: &CycleBudget) -> CycleCount {
    let mut counter = Counter {
        count: 0,
        cap: budget.max_cycles,
    };
    let mut search = CircuitSearch::new(g);
    for comp in strongly_connected_components(g) {
        if comp.len() == 1 && !g.has_edge(comp[0], comp[0]) {
            continue;
        }
        search.set_component(&comp);
        for &s in &comp {
            let flow = match budget.max_length {
                None => search.johnson_from(s, &mut counter),
                Some(limit) => search.bounded_from(s, limit, &mut counter),
            };
            if flow.is_break() {
                return CycleCount {
                    count: counter.count,
                    capped: true,
                };
            }
            search.allowed.set(s, false);
        }
    }
    CycleCount {
        count: counter.count,
        capped: false,
    }
}

struct Counter {
    count: u64,
    cap: u64,
}

impl Counter {
    /// Records one cycle; breaks once a cycle beyond the cap turns up.
    #[inline]
    fn hit(&mut self) -> ControlFlow<()> {
        if self.count == self.cap {
            return ControlFlow::Break(());
        }
        self.count += 1;
        ControlFlow::Continue(())
    }
}

/// Johnson's circuit search restricted to one component and to vertices
/// not smaller than the current root.
struct CircuitSearch<'g> {
    g: &'g TssGraph,
    allowed: FixedBitSet,
    blocked: FixedBitSet,
    blocked_by: Vec<Vec<usize>>,
    on_path: FixedBitSet,
    depth: usize,
}

impl<'g> CircuitSearch<'g> {
    fn new(g: &'g TssGraph) -> Self {
        let n = g.n();
        Self {
            g,
            allowed: FixedBitSet::with_capacity(n),
            blocked: FixedBitSet::with_capacity(n),
            blocked_by: vec![Vec::new(); n],
            on_path: FixedBitSet::with_capacity(n),
            depth: 0,
        }
    }

    fn set_component(&mut self, comp: &[usize]) {
        self.allowed.clear();
        for &v in comp {
            self.allowed.insert(v);
        }
    }

    fn johnson_from(&mut self, s: usize, counter: &mut Counter) -> ControlFlow<()> {
        for v in self.allowed.ones() {
            self.blocked.set(v, false);
            self.blocked_by[v].clear();
        }
        self.circuit(s, s, counter).map_continue(|_| ())
    }

    /// Returns whether a cycle through `s` was found below `v`.
    fn circuit(&mut self, v: usize, s: usize, counter: &mut Counter) -> ControlFlow<(), bool> {
        let mut found = false;
        self.blocked.insert(v);
        let g = self.g;
        for &w in g.successors(v) {
            if !self.allowed.contains(w) {
                continue;
            }
            if w == s {
                counter.hit()?;
                found = true;
            } else if !self.blocked.contains(w) && self.circuit(w, s, counter)? {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in g.successors(v) {
                if self.allowed.contains(w) && !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        ControlFlow::Continue(found)
    }

    fn unblock(&mut self, u: usize) {
        let mut stack = vec![u];
        while let Some(u) = stack.pop() {
            if !self.blocked.contains(u) {
                continue;
            }
            self.blocked.set(u, false);
            stack.append(&mut self.blocked_by[u]);
        }
    }

    /// Plain depth-first search for cycles of at most `limit` vertices.
    /// Johnson's blocking is unsound under a length bound, so nothing is pruned.
    fn bounded_from(&mut self, s: usize, limit: usize, counter: &mut Counter) -> ControlFlow<()> {
        self.on_path.clear();
        self.depth = 0;
        self.bounded(s, s, limit, counter)
    }

    fn bounded(&mut self, v: usize, s: usize, limit: usize, counter: &mut Counter) -> ControlFlow<()> {
        self.on_path.insert(v);
        self.depth += 1;
        let g = self.g;
        for &w in g.successors(v) {
            if !self.allowed.contains(w) {
                continue;
            }
            if w == s {
                counter.hit()?;
            } else if self.depth < limit && !self.on_path.contains(w) {
                self.bounded(w, s, limit, counter)?;
            }
        }
        self.depth -= 1;
        self.on_path.set(v, false);
        ControlFlow::Continue(())
    }
}
