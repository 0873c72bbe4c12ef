//! Subcommand implementations. Each returns the text to emit; the binary
//! only handles flags, output files and exit codes.

use std::collections::BTreeSet;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use wbf_core::faultsim::{cell_seed, ChannelModel, FaultReport, NetworkError, NetworkScenario, TrialSource};
use wbf_core::routing::{
    trusted_region, unipath_route, verify_independence, MultipathPlan, Route, RoutingError, Variant,
};
use wbf_core::topology::{self, Automorphism};
use wbf_core::trust::{self, RedundancyMode, TrustError};
use wbf_core::{Butterfly, Graph, NodeId, TrustRadius};

use crate::edgelist::load_graph;
use crate::error::CliError;
use crate::formats::{self, label, to_json, FaultReportDoc, SimulationDoc, SweepRow};
use crate::parallel::Runner;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5EED_2009;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Edges,
    Dot,
    Json,
    Csv,
    Text,
}

/// Text to emit plus whether any verification inside the command failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub verified: bool,
}

fn unsupported(cmd: &str, f: Format) -> CliError {
    CliError::Usage(format!("{cmd} does not support --format {f:?}").to_lowercase())
}

pub fn butterfly(m: u32) -> Result<Butterfly, CliError> {
    Butterfly::with_dimension(m).map_err(|e| CliError::Usage(e.to_string()))
}

/// Parses a node literal, defaulting to `(0,0...0)`.
pub fn node(g: &Butterfly, text: Option<&str>) -> Result<NodeId, CliError> {
    match text {
        None => Ok(NodeId::new(0, 0)),
        Some(t) => g.parse_node(t).map_err(|e| CliError::Usage(e.to_string())),
    }
}

fn radius(h: u32) -> Result<TrustRadius, CliError> {
    TrustRadius::new(h).map_err(|e| CliError::Usage(e.to_string()))
}

fn routing_error(e: RoutingError) -> CliError {
    match e {
        RoutingError::TooClose { .. } => CliError::Precondition(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    }
}

fn network_error(e: NetworkError) -> CliError {
    match e {
        NetworkError::Routing(r) => routing_error(r),
        NetworkError::CutMismatch { .. } => CliError::Precondition(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    }
}

pub fn cmd_build(m: u32, format: Format) -> Result<String, CliError> {
    let g = butterfly(m)?;
    match format {
        Format::Edges => Ok(formats::butterfly_edges(&g)),
        Format::Dot => Ok(formats::butterfly_dot(&g)),
        Format::Json => Ok(to_json(&formats::graph_doc(&g))),
        f => Err(unsupported("build", f)),
    }
}

fn emit_routes(g: &Butterfly, routes: &[Route], format: Format, cmd: &str) -> Result<String, CliError> {
    match format {
        Format::Dot => Ok(formats::routes_dot(g, routes)),
        Format::Text | Format::Edges => Ok(formats::routes_text(g, routes)),
        Format::Json => Ok(to_json(&routes.iter().map(|r| formats::route_doc(g, r)).collect::<Vec<_>>())),
        f => Err(unsupported(cmd, f)),
    }
}

pub fn cmd_route(m: u32, v: Option<&str>, w: &str, format: Format) -> Result<String, CliError> {
    let g = butterfly(m)?;
    let (v, w) = (node(&g, v)?, node(&g, Some(w))?);
    let r = unipath_route(&g, v, w).map_err(routing_error)?;
    emit_routes(&g, &[r], format, "route")
}

pub fn cmd_multipath(
    m: u32,
    h: u32,
    v: Option<&str>,
    w: &str,
    format: Format,
    variant: Variant,
) -> Result<Output, CliError> {
    let g = butterfly(m)?;
    let (v, w) = (node(&g, v)?, node(&g, Some(w))?);
    let h = radius(h)?;
    let plan = MultipathPlan::with_variant(&g, v, w, h, variant).map_err(routing_error)?;
    let routes = plan.routes();
    let verdict = verify_independence(&routes, &trusted_region(&g, v, w, h).map_err(routing_error)?);
    let text = match format {
        Format::Json => to_json(&formats::multipath_doc(&g, v, w, &plan, &routes, &verdict)),
        f => {
            let mut t = emit_routes(&g, &routes, f, "multipath")?;
            if f != Format::Dot {
                t.push_str(if verdict.passed() { "independent: yes\n" } else { "independent: NO\n" });
            }
            t
        }
    };
    Ok(Output { text, verified: verdict.passed() })
}

pub enum GraphSource<'a> {
    File(&'a Path),
    Butterfly(u32),
}

/// Effective redundancy of one pair, or of the whole graph when `all` is
/// given.
pub fn cmd_redundancy(
    source: GraphSource<'_>,
    h: u32,
    v: Option<&str>,
    w: Option<&str>,
    all: Option<RedundancyMode>,
    format: Format,
) -> Result<String, CliError> {
    let h = radius(h)?;
    match source {
        GraphSource::File(path) => {
            let g = load_graph(path)?;
            let pick = |t: Option<&str>, which: &str| -> Result<usize, CliError> {
                let t = t.ok_or_else(|| CliError::Usage(format!("--{which} is required")))?;
                g.index_of(t).ok_or_else(|| CliError::Usage(format!("node {t:?} is not in the graph")))
            };
            match all {
                Some(mode) => graph_level(&g, h, mode, format),
                None => pair_level(&g, pick(v, "v")?, pick(w, "w")?, h, None, format),
            }
        }
        GraphSource::Butterfly(m) => {
            let g = butterfly(m)?;
            if let Some(mode) = all {
                return graph_level(&g, h, mode, format);
            }
            let (v, w) = (node(&g, v)?, node(&g, w)?);
            let (vi, wi) = (g.index_of(v), g.index_of(w));
            let d = topology::distance(&g, vi, wi).expect("butterfly is connected");
            let lower = (h.get() <= m / 2 && d >= 2 * h.get()).then(|| 1u32 << h.get());
            pair_level(&g, vi, wi, h, lower, format)
        }
    }
}

fn pair_level<G: Graph>(
    g: &G,
    v: usize,
    w: usize,
    h: TrustRadius,
    lower: Option<u32>,
    format: Format,
) -> Result<String, CliError> {
    let r = trust::effective_redundancy(g, v, w, h).map_err(|e: TrustError| CliError::Usage(e.to_string()))?;
    let doc = formats::redundancy_doc(g, &r, lower);
    match format {
        Format::Json => Ok(to_json(&doc)),
        Format::Text => {
            let mut t = format!(
                "source {}\nsink {}\nh {}\nstatus {}\ndelta {}\nboundary {} {} (bound {})\ncut {}\n",
                doc.source,
                doc.sink,
                doc.h,
                doc.status,
                doc.delta,
                doc.boundary_source,
                doc.boundary_sink,
                doc.boundary_bound,
                doc.min_cut.join(" ")
            );
            if let (Some(b), Some(ok)) = (doc.lower_bound, doc.lower_bound_holds) {
                t.push_str(&format!("lower bound {b} {}\n", if ok { "holds" } else { "VIOLATED" }));
            }
            Ok(t)
        }
        f => Err(unsupported("redundancy", f)),
    }
}

fn graph_level<G: Graph>(g: &G, h: TrustRadius, mode: RedundancyMode, format: Format) -> Result<String, CliError> {
    let r = trust::graph_redundancy(g, h, mode);
    let doc = formats::graph_redundancy_doc(g, h.get(), &r);
    match format {
        Format::Json => Ok(to_json(&doc)),
        Format::Text => Ok(format!(
            "h {}\nvalue {}\nexact {}\npairs {} ({} excluded)\n",
            doc.h,
            doc.value.map_or_else(|| "none".to_string(), |v| v.to_string()),
            doc.exact,
            doc.pairs_evaluated,
            doc.pairs_excluded
        )),
        f => Err(unsupported("redundancy", f)),
    }
}

/// Rows for every `1 <= k <= delta`, `0 <= c <= delta`. Each cell gets its
/// own seed derived from `seed`, reported in the `seed` column.
pub fn sweep_rows(delta: u32, trials: u64, seed: u64, runner: &Runner) -> Result<Vec<SweepRow>, CliError> {
    if delta == 0 {
        return Err(CliError::Usage("--delta must be at least 1".into()));
    }
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for k in 1..=delta {
        for c in 0..=delta {
            let model = ChannelModel::new(delta, k, c).expect("grid stays in range");
            let s = cell_seed(seed, delta, k, c);
            let report = FaultReport::new(model, s, runner.tally(&model, s, trials));
            rows.push(SweepRow::from(&report));
        }
    }
    Ok(rows)
}

pub fn cmd_sweep(delta: u32, trials: u64, seed: u64, runner: &Runner) -> Result<String, CliError> {
    Ok(formats::sweep_csv(&sweep_rows(delta, trials, seed, runner)?))
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_simulate(
    m: u32,
    h: u32,
    v: Option<&str>,
    w: &str,
    k: u32,
    c: u32,
    trials: u64,
    seed: u64,
    runner: &Runner,
) -> Result<String, CliError> {
    let g = butterfly(m)?;
    let (vn, wn) = (node(&g, v)?, node(&g, Some(w))?);
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let scenario = NetworkScenario::new(&g, vn, wn, radius(h)?, k, c).map_err(network_error)?;
    let report = FaultReport::new(scenario.channel_model(), seed, runner.tally(&scenario, seed, trials));
    let doc = SimulationDoc {
        m,
        h,
        source: label(&g, vn),
        destination: label(&g, wn),
        cut: scenario.cut().iter().map(|&u| label(&g, u)).collect(),
        report: FaultReportDoc::from(&report),
    };
    Ok(to_json(&doc))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct VerifySummary {
    pub configurations: usize,
    pub routes: usize,
    pub hops_checked: usize,
    pub shortcut_routes: usize,
    /// Human-readable failures, at most a few per kind.
    pub failures: Vec<String>,
    pub failure_count: usize,
    pub passed: bool,
}

impl VerifySummary {
    fn fail(&mut self, msg: String) {
        self.failure_count += 1;
        if self.failures.len() < 50 {
            self.failures.push(msg);
        }
    }
}

/// Property suite over `m` in `min_m..=max_m`, every `h`, and `samples`
/// destinations per `(m, h)` (all of them when fewer exist), each also
/// checked from a random non-canonical source.
pub fn verify_grid(
    min_m: u32,
    max_m: u32,
    samples: usize,
    seed: u64,
    variant: Variant,
) -> Result<VerifySummary, CliError> {
    if min_m < 2 || min_m > max_m {
        return Err(CliError::Usage(format!("bad dimension range {min_m}..={max_m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = VerifySummary::default();
    for m in min_m..=max_m {
        let g = butterfly(m)?;
        let origin = NodeId::new(0, 0);
        let dist = topology::bfs_distances(&g, 0);
        for h in 1..=m / 2 {
            let hr = radius(h)?;
            let mut targets: Vec<NodeId> = g.nodes().filter(|&w| dist[g.index_of(w)] >= 2 * h).collect();
            targets.shuffle(&mut rng);
            targets.truncate(samples);
            for w in targets {
                let shift = g.node_at(rand::Rng::gen_range(&mut rng, 0..g.node_total()));
                // same canonical pair seen from a relabelled source
                let frame = Automorphism::sending_to_origin(m, shift);
                let pairs = [(origin, w), (shift, frame.invert(w))];
                for (v, w) in pairs {
                    check_pair(&g, v, w, hr, variant, &mut sum);
                }
            }
        }
    }
    sum.passed = sum.failure_count == 0;
    Ok(sum)
}

fn check_pair(g: &Butterfly, v: NodeId, w: NodeId, h: TrustRadius, variant: Variant, sum: &mut VerifySummary) {
    let tag = format!("m={} h={} v={} w={}", g.m(), h.get(), label(g, v), label(g, w));
    sum.configurations += 1;
    let plan = match MultipathPlan::with_variant(g, v, w, h, variant) {
        Ok(p) => p,
        Err(e) => return sum.fail(format!("{tag}: {e}")),
    };
    let routes = plan.routes();
    sum.routes += routes.len();
    if routes.len() != 1 << h.get() {
        sum.fail(format!("{tag}: {} routes", routes.len()));
    }
    for (s, r) in routes.iter().enumerate() {
        sum.hops_checked += r.len();
        if !r.is_valid_in(g) || r.source() != v || r.destination() != w {
            sum.fail(format!("{tag} s={s}: invalid route"));
        }
        if r.is_shortcut() {
            sum.shortcut_routes += 1;
        } else if r.len() as u32 != plan.full_length() {
            sum.fail(format!("{tag} s={s}: {} hops, expected {}", r.len(), plan.full_length()));
        }
        let mut cur = v;
        for t in 0..r.len() as u32 {
            match plan.next_hop(cur, t, s as u32) {
                Ok(n) if n == r.hops[t as usize + 1] => cur = n,
                other => {
                    sum.fail(format!("{tag} s={s} t={t}: next_hop gave {other:?}"));
                    break;
                }
            }
        }
    }
    let trusted: BTreeSet<NodeId> = trusted_region(g, v, w, h).expect("nodes valid");
    let verdict = verify_independence(&routes, &trusted);
    for x in &verdict.violations {
        sum.fail(format!("{tag}: routes {} and {} share untrusted {}", x.s, x.s_prime, label(g, x.node)));
    }
}

pub fn cmd_verify(
    min_m: u32,
    max_m: u32,
    samples: usize,
    seed: u64,
    variant: Variant,
    format: Format,
) -> Result<Output, CliError> {
    let sum = verify_grid(min_m, max_m, samples, seed, variant)?;
    let text = match format {
        Format::Json => to_json(&sum),
        Format::Text => {
            let mut t = format!(
                "configurations {}\nroutes {}\nhops {}\nshortcuts {}\nfailures {}\n",
                sum.configurations, sum.routes, sum.hops_checked, sum.shortcut_routes, sum.failure_count
            );
            for f in &sum.failures {
                t.push_str(f);
                t.push('\n');
            }
            t
        }
        f => return Err(unsupported("verify", f)),
    };
    Ok(Output { text, verified: sum.passed })
}
