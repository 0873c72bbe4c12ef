//! Serialized forms: DOT, edge lists, JSON documents and the sweep CSV.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use wbf_core::faultsim::FaultReport;
use wbf_core::routing::{Independence, MultipathPlan, Route};
use wbf_core::topology::EdgeKind;
use wbf_core::trust::{self, GraphRedundancy, RedundancyResult};
use wbf_core::{Butterfly, Graph, NodeId};

fn kind_name(k: EdgeKind) -> &'static str {
    match k {
        EdgeKind::Down => "down",
        EdgeKind::DownRight => "down-right",
    }
}

pub fn label(g: &Butterfly, u: NodeId) -> String {
    g.label_of(u).to_string()
}

/// One directed edge per line, `src dst # kind`. Reads back through
/// [`crate::edgelist::parse_graph`] as the undirected view.
pub fn butterfly_edges(g: &Butterfly) -> String {
    let mut out = String::new();
    for (a, b, k) in g.edges() {
        let _ = writeln!(out, "{} {} # {}", label(g, a), label(g, b), kind_name(k));
    }
    out
}

fn dot_header(g: &Butterfly, out: &mut String) {
    let _ = writeln!(out, "digraph wbf{} {{", g.m());
    out.push_str("  rankdir=TB;\n  node [shape=box, fontname=monospace];\n");
    for level in 0..g.m() {
        let _ = write!(out, "  {{ rank=same;");
        for place in 0..g.places() {
            let _ = write!(out, " \"{}\";", label(g, NodeId::new(level, place)));
        }
        out.push_str(" }\n");
    }
}

pub fn butterfly_dot(g: &Butterfly) -> String {
    let mut out = String::new();
    dot_header(g, &mut out);
    for (a, b, k) in g.edges() {
        let style = if k == EdgeKind::Down { "solid" } else { "dashed" };
        let _ = writeln!(out, "  \"{}\" -> \"{}\" [style={style}];", label(g, a), label(g, b));
    }
    out.push_str("}\n");
    out
}

const PALETTE: [&str; 8] = ["red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan"];

/// The butterfly in grey with each route's hops overlaid in its own colour.
pub fn routes_dot(g: &Butterfly, routes: &[Route]) -> String {
    let mut out = String::new();
    dot_header(g, &mut out);
    for (a, b, _) in g.edges() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\" [color=gray85];", label(g, a), label(g, b));
    }
    for (i, r) in routes.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let name = r.param.map_or_else(|| i.to_string(), |p| p.to_string());
        for (t, pair) in r.hops.windows(2).enumerate() {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [color={colour}, penwidth=2, label=\"{name}:{}\"];",
                label(g, pair[0]),
                label(g, pair[1]),
                r.stages[t]
            );
        }
    }
    out.push_str("}\n");
    out
}

/// Hop list, one route per line: `s: node node ...`.
pub fn routes_text(g: &Butterfly, routes: &[Route]) -> String {
    let mut out = String::new();
    for (i, r) in routes.iter().enumerate() {
        let name = r.param.map_or_else(|| i.to_string(), |p| p.to_string());
        let hops: Vec<String> = r.hops.iter().map(|&u| label(g, u)).collect();
        let _ = writeln!(out, "{name}: {}", hops.join(" "));
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphDoc {
    pub m: u32,
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EdgeDoc {
    pub from: String,
    pub to: String,
    pub kind: String,
}

pub fn graph_doc(g: &Butterfly) -> GraphDoc {
    GraphDoc {
        m: g.m(),
        nodes: g.nodes().map(|u| label(g, u)).collect(),
        edges: g
            .edges()
            .map(|(a, b, k)| EdgeDoc { from: label(g, a), to: label(g, b), kind: kind_name(k).into() })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RouteDoc {
    /// Path parameter as an `h`-bit string, absent for unipath routes.
    pub s: Option<String>,
    pub length: usize,
    pub shortcut: bool,
    pub hops: Vec<String>,
    /// `stages[t]` labels the hop from `hops[t]` to `hops[t + 1]`.
    pub stages: Vec<String>,
}

pub fn route_doc(g: &Butterfly, r: &Route) -> RouteDoc {
    RouteDoc {
        s: r.param.map(|p| p.to_string()),
        length: r.len(),
        shortcut: r.is_shortcut(),
        hops: r.hops.iter().map(|&u| label(g, u)).collect(),
        stages: r.stages.iter().map(|s| s.as_str().to_string()).collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ViolationDoc {
    pub s: u32,
    pub s_prime: u32,
    pub node: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerdictDoc {
    pub passed: bool,
    pub pairs_checked: usize,
    pub violations: Vec<ViolationDoc>,
}

pub fn verdict_doc(g: &Butterfly, v: &Independence) -> VerdictDoc {
    VerdictDoc {
        passed: v.passed(),
        pairs_checked: v.pairs_checked,
        violations: v
            .violations
            .iter()
            .map(|x| ViolationDoc { s: x.s, s_prime: x.s_prime, node: label(g, x.node) })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MultipathDoc {
    pub m: u32,
    pub h: u32,
    pub source: String,
    pub destination: String,
    /// Destination after relabelling the source to `(0,0...0)`.
    pub canonical_destination: String,
    /// `L` in `h..m+h`; non-shortcut routes have `m + L` hops.
    pub level_offset: u32,
    pub routes: Vec<RouteDoc>,
    pub verdict: VerdictDoc,
}

pub fn multipath_doc(
    g: &Butterfly,
    v: NodeId,
    w: NodeId,
    plan: &MultipathPlan,
    routes: &[Route],
    verdict: &Independence,
) -> MultipathDoc {
    MultipathDoc {
        m: g.m(),
        h: plan.radius(),
        source: label(g, v),
        destination: label(g, w),
        canonical_destination: label(g, plan.canonical_target()),
        level_offset: plan.offset(),
        routes: routes.iter().map(|r| route_doc(g, r)).collect(),
        verdict: verdict_doc(g, verdict),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RedundancyDoc {
    pub source: String,
    pub sink: String,
    pub h: u32,
    pub status: String,
    pub delta: u32,
    pub boundary_source: usize,
    pub boundary_sink: usize,
    pub boundary_bound: usize,
    pub min_cut: Vec<String>,
    pub witness_paths: Vec<Vec<String>>,
    /// Butterfly inputs only: the `2^h` lower bound and whether it holds.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower_bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower_bound_holds: Option<bool>,
}

pub fn redundancy_doc<G: Graph>(g: &G, r: &RedundancyResult, lower_bound: Option<u32>) -> RedundancyDoc {
    let bounded = r.status.is_bounded();
    RedundancyDoc {
        source: g.label(r.source),
        sink: g.label(r.sink),
        h: r.radius.get(),
        status: r.status.as_str().to_string(),
        delta: r.delta,
        boundary_source: r.boundary_source,
        boundary_sink: r.boundary_sink,
        boundary_bound: r.boundary_bound(),
        min_cut: trust::labels(g, &r.min_cut),
        witness_paths: r.witness_paths.iter().map(|p| trust::labels(g, p)).collect(),
        lower_bound,
        lower_bound_holds: lower_bound.filter(|_| bounded).map(|b| r.delta >= b),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphRedundancyDoc {
    pub h: u32,
    pub value: Option<u32>,
    pub exact: bool,
    pub pairs_evaluated: usize,
    pub pairs_excluded: usize,
    pub argmin: Option<(String, String)>,
}

pub fn graph_redundancy_doc<G: Graph>(g: &G, h: u32, r: &GraphRedundancy) -> GraphRedundancyDoc {
    GraphRedundancyDoc {
        h,
        value: r.value,
        exact: r.exact,
        pairs_evaluated: r.pairs_evaluated,
        pairs_excluded: r.pairs_excluded,
        argmin: r.argmin.map(|(a, b)| (g.label(a), g.label(b))),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FaultReportDoc {
    pub delta: u32,
    pub k: u32,
    pub c: u32,
    pub trials: u64,
    pub accepted_clean: u64,
    pub detected_error: u64,
    pub undetected_failure: u64,
    pub estimate: f64,
    pub exact: f64,
    pub std_error: f64,
    pub within_3_se: bool,
    pub seed: u64,
}

impl From<&FaultReport> for FaultReportDoc {
    fn from(r: &FaultReport) -> Self {
        Self {
            delta: r.delta,
            k: r.k,
            c: r.c,
            trials: r.trials,
            accepted_clean: r.tally.clean,
            detected_error: r.tally.detected,
            undetected_failure: r.tally.failures,
            estimate: r.estimate,
            exact: r.exact,
            std_error: r.std_error,
            within_3_se: r.within(3.0),
            seed: r.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SimulationDoc {
    pub m: u32,
    pub h: u32,
    pub source: String,
    pub destination: String,
    /// Cut nodes the adversary draws from, one per route.
    pub cut: Vec<String>,
    pub report: FaultReportDoc,
}

/// One row of the sweep CSV.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepRow {
    pub delta: u32,
    pub k: u32,
    pub c: u32,
    pub exact: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

impl From<&FaultReport> for SweepRow {
    fn from(r: &FaultReport) -> Self {
        Self {
            delta: r.delta,
            k: r.k,
            c: r.c,
            exact: r.exact,
            estimate: r.estimate,
            stderr: r.std_error,
            trials: r.trials,
            seed: r.seed,
        }
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn read_sweep_csv(text: &str) -> Result<Vec<SweepRow>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}
