//! Partial-trust model and effective redundancy.
//!
//! Nodes closer than the trust radius `h` to an endpoint are trusted by
//! it; an adversary may only compromise nodes in the untrusted region
//! outside both trusted neighborhoods. The effective redundancy of a pair
//! is the number of paths that share no untrusted node, which by Menger's
//! theorem equals the vertex max-flow after each trusted neighborhood has
//! been collapsed into a single terminal.

pub mod flow;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::topology::{bfs_tree, Graph, UNREACHABLE};
use flow::Side;

pub use flow::VertexCut;

/// Trust radius `h >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrustRadius(u32);

impl TrustRadius {
    pub fn new(h: u32) -> Result<Self, TrustError> {
        if h == 0 {
            return Err(TrustError::RadiusOutOfRange { h, max: None });
        }
        Ok(Self(h))
    }

    /// Radius valid for butterfly routing on `WBF(m)`: `1 <= h <= m/2`.
    pub fn for_butterfly(h: u32, m: u32) -> Result<Self, TrustError> {
        if h == 0 || h > m / 2 {
            return Err(TrustError::RadiusOutOfRange { h, max: Some(m / 2) });
        }
        Ok(Self(h))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrustError {
    RadiusOutOfRange { h: u32, max: Option<u32> },
    NodeOutOfRange { index: usize, node_count: usize },
    /// The pair has no untrusted region between them, so no minimum cut
    /// exists.
    MutuallyTrusted { status: PairStatus },
}

impl fmt::Display for TrustError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrustError::RadiusOutOfRange { h, max: Some(max) } => {
                write!(f, "trust radius h={h} outside 1..={max}")
            }
            TrustError::RadiusOutOfRange { h, max: None } => write!(f, "trust radius h={h} must be at least 1"),
            TrustError::NodeOutOfRange { index, node_count } => {
                write!(f, "node index {index} out of range (graph has {node_count} nodes)")
            }
            TrustError::MutuallyTrusted { status } => {
                write!(f, "pair is mutually trusted ({status}); no untrusted cut exists")
            }
        }
    }
}

impl core::error::Error for TrustError {}

/// How a pair relates under the trust model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairStatus {
    /// Disjoint, non-adjacent trusted neighborhoods; `delta` is finite.
    Separated,
    /// No path at all; `delta` is 0.
    Disconnected,
    /// The trusted neighborhoods intersect.
    OverlappingTrust,
    /// Disjoint neighborhoods joined by an edge, giving a path with no
    /// untrusted node.
    TrustedBridge,
}

impl PairStatus {
    /// Whether the pair contributes to the graph-level minimum.
    pub fn is_bounded(self) -> bool {
        matches!(self, PairStatus::Separated | PairStatus::Disconnected)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PairStatus::Separated => "separated",
            PairStatus::Disconnected => "disconnected",
            PairStatus::OverlappingTrust => "overlapping-trust",
            PairStatus::TrustedBridge => "trusted-bridge",
        }
    }
}

impl fmt::Display for PairStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn check_index<G: Graph>(g: &G, u: usize) -> Result<(), TrustError> {
    let n = g.node_count();
    if u >= n {
        return Err(TrustError::NodeOutOfRange { index: u, node_count: n });
    }
    Ok(())
}

/// `T_h(u)`: every node at distance `< h` from `u`, sorted.
pub fn trusted_neighborhood<G: Graph>(g: &G, u: usize, h: TrustRadius) -> Result<Vec<usize>, TrustError> {
    check_index(g, u)?;
    let (dist, _) = bfs_tree(g, u);
    Ok((0..dist.len()).filter(|&x| dist[x] < h.0).collect())
}

/// `B_h(u)`: every node at distance exactly `h` from `u`, sorted.
pub fn trust_boundary<G: Graph>(g: &G, u: usize, h: TrustRadius) -> Result<Vec<usize>, TrustError> {
    check_index(g, u)?;
    let (dist, _) = bfs_tree(g, u);
    Ok((0..dist.len()).filter(|&x| dist[x] == h.0).collect())
}

/// Trusted neighborhoods, boundaries and untrusted region for one
/// `(v, w, h)` triple.
#[derive(Debug, Clone)]
pub struct TrustContext {
    pub source: usize,
    pub sink: usize,
    pub radius: TrustRadius,
    dist_source: Vec<u32>,
    dist_sink: Vec<u32>,
    parent_source: Vec<usize>,
    parent_sink: Vec<usize>,
}

impl TrustContext {
    pub fn new<G: Graph>(g: &G, v: usize, w: usize, h: TrustRadius) -> Result<Self, TrustError> {
        check_index(g, v)?;
        check_index(g, w)?;
        let (dist_source, parent_source) = bfs_tree(g, v);
        let (dist_sink, parent_sink) = bfs_tree(g, w);
        Ok(Self { source: v, sink: w, radius: h, dist_source, dist_sink, parent_source, parent_sink })
    }

    pub fn trusted_by_source(&self, u: usize) -> bool {
        self.dist_source[u] < self.radius.0
    }

    pub fn trusted_by_sink(&self, u: usize) -> bool {
        self.dist_sink[u] < self.radius.0
    }

    pub fn is_trusted(&self, u: usize) -> bool {
        self.trusted_by_source(u) || self.trusted_by_sink(u)
    }

    fn select(&self, f: impl Fn(usize) -> bool) -> Vec<usize> {
        (0..self.dist_source.len()).filter(|&u| f(u)).collect()
    }

    pub fn trusted_source(&self) -> Vec<usize> {
        self.select(|u| self.trusted_by_source(u))
    }

    pub fn trusted_sink(&self) -> Vec<usize> {
        self.select(|u| self.trusted_by_sink(u))
    }

    pub fn boundary_source(&self) -> Vec<usize> {
        self.select(|u| self.dist_source[u] == self.radius.0)
    }

    pub fn boundary_sink(&self) -> Vec<usize> {
        self.select(|u| self.dist_sink[u] == self.radius.0)
    }

    pub fn untrusted(&self) -> Vec<usize> {
        self.select(|u| !self.is_trusted(u))
    }

    /// Distance between the endpoints, `None` if disconnected.
    pub fn endpoint_distance(&self) -> Option<u32> {
        let d = self.dist_source[self.sink];
        (d != UNREACHABLE).then_some(d)
    }

    pub fn status<G: Graph>(&self, g: &G) -> PairStatus {
        let n = self.dist_source.len();
        if (0..n).any(|u| self.trusted_by_source(u) && self.trusted_by_sink(u)) {
            return PairStatus::OverlappingTrust;
        }
        if self.endpoint_distance().is_none() {
            return PairStatus::Disconnected;
        }
        let mut bridged = false;
        for u in (0..n).filter(|&u| self.trusted_by_source(u)) {
            g.for_each_neighbor(u, |x| bridged |= self.trusted_by_sink(x));
            if bridged {
                return PairStatus::TrustedBridge;
            }
        }
        PairStatus::Separated
    }

    fn sides(&self) -> Vec<Side> {
        (0..self.dist_source.len())
            .map(|u| {
                if self.trusted_by_source(u) {
                    Side::Source
                } else if self.trusted_by_sink(u) {
                    Side::Sink
                } else {
                    Side::Free
                }
            })
            .collect()
    }

    /// Extends a flow walk through both trusted neighborhoods along BFS
    /// trees, giving a full `source .. sink` path.
    fn full_path(&self, walk: &[usize]) -> Vec<usize> {
        let mut head = Vec::new();
        let mut x = walk[0];
        while x != self.source {
            x = self.parent_source[x];
            head.push(x);
        }
        head.reverse();
        head.extend_from_slice(walk);
        let mut x = *walk.last().expect("non-empty walk");
        while x != self.sink {
            x = self.parent_sink[x];
            head.push(x);
        }
        head
    }
}

/// Effective redundancy of one pair together with a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedundancyResult {
    pub source: usize,
    pub sink: usize,
    pub radius: TrustRadius,
    pub status: PairStatus,
    /// `delta_{v,w,h}`; meaningful only when `status.is_bounded()`.
    pub delta: u32,
    pub boundary_source: usize,
    pub boundary_sink: usize,
    /// Untrusted nodes whose removal separates the collapsed endpoints,
    /// `min_cut.len() == delta`.
    pub min_cut: Vec<usize>,
    /// `delta` full `source .. sink` paths sharing no untrusted node.
    pub witness_paths: Vec<Vec<usize>>,
}

impl RedundancyResult {
    /// Trust-boundary bound `min(|B_h(v)|, |B_h(w)|)`.
    pub fn boundary_bound(&self) -> usize {
        self.boundary_source.min(self.boundary_sink)
    }
}

pub fn effective_redundancy_in<G: Graph>(g: &G, ctx: &TrustContext) -> RedundancyResult {
    let status = ctx.status(g);
    let mut result = RedundancyResult {
        source: ctx.source,
        sink: ctx.sink,
        radius: ctx.radius,
        status,
        delta: 0,
        boundary_source: ctx.boundary_source().len(),
        boundary_sink: ctx.boundary_sink().len(),
        min_cut: Vec::new(),
        witness_paths: Vec::new(),
    };
    if status != PairStatus::Separated {
        return result;
    }
    let cut = flow::separate(g, &ctx.sides());
    result.delta = cut.value;
    result.witness_paths = cut.segments.iter().map(|w| ctx.full_path(w)).collect();
    result.min_cut = cut.cut;
    result
}

/// `delta_{v,w,h}` via vertex max-flow on the trust-collapsed graph.
///
/// Pairs with overlapping or edge-adjacent trusted neighborhoods are not
/// errors; they come back flagged through [`RedundancyResult::status`].
pub fn effective_redundancy<G: Graph>(
    g: &G,
    v: usize,
    w: usize,
    h: TrustRadius,
) -> Result<RedundancyResult, TrustError> {
    let ctx = TrustContext::new(g, v, w, h)?;
    Ok(effective_redundancy_in(g, &ctx))
}

/// A minimum set of untrusted nodes separating `T_h(v)` from `T_h(w)`.
pub fn min_vertex_cut<G: Graph>(g: &G, v: usize, w: usize, h: TrustRadius) -> Result<Vec<usize>, TrustError> {
    let r = effective_redundancy(g, v, w, h)?;
    if !r.status.is_bounded() {
        return Err(TrustError::MutuallyTrusted { status: r.status });
    }
    Ok(r.min_cut)
}

/// Vertex max-flow between two explicit trusted sets. Nodes in neither
/// set are free (capacity 1).
pub fn vertex_cut_between<G: Graph>(g: &G, source_side: &[bool], sink_side: &[bool]) -> VertexCut {
    let sides: Vec<Side> = source_side
        .iter()
        .zip(sink_side)
        .map(|(&s, &t)| match (s, t) {
            (true, _) => Side::Source,
            (false, true) => Side::Sink,
            _ => Side::Free,
        })
        .collect();
    flow::separate(g, &sides)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RedundancyMode {
    /// Every unordered pair.
    Exhaustive,
    /// `pairs` uniformly drawn pairs; the minimum found is an upper bound
    /// on the true graph redundancy.
    Sampled { pairs: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphRedundancy {
    /// Minimum `delta` over bounded pairs, `None` if every pair was
    /// excluded.
    pub value: Option<u32>,
    /// `false` for sampled runs, whose value is only an upper bound.
    pub exact: bool,
    pub pairs_evaluated: usize,
    /// Pairs skipped as mutually trusted (overlapping or bridged).
    pub pairs_excluded: usize,
    /// A pair attaining `value`.
    pub argmin: Option<(usize, usize)>,
}

/// `delta_h(G)`: the minimum effective redundancy over node pairs.
pub fn graph_redundancy<G: Graph>(g: &G, h: TrustRadius, mode: RedundancyMode) -> GraphRedundancy {
    let n = g.node_count();
    let pairs: Vec<(usize, usize)> = match mode {
        RedundancyMode::Exhaustive => (0..n).flat_map(|v| (v + 1..n).map(move |w| (v, w))).collect(),
        RedundancyMode::Sampled { pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(pairs);
            while n >= 2 && out.len() < pairs {
                let (v, w) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if v != w {
                    out.push((v, w));
                }
            }
            out
        }
    };
    // cache BFS trees per node: each appears in many pairs
    let mut trees: Vec<Option<(Vec<u32>, Vec<usize>)>> = vec![None; n];
    let mut best: Option<(u32, (usize, usize))> = None;
    let mut excluded = 0;
    for &(v, w) in &pairs {
        for x in [v, w] {
            if trees[x].is_none() {
                trees[x] = Some(bfs_tree(g, x));
            }
        }
        let (ds, ps) = trees[v].clone().expect("cached");
        let (dt, pt) = trees[w].clone().expect("cached");
        let ctx = TrustContext {
            source: v,
            sink: w,
            radius: h,
            dist_source: ds,
            dist_sink: dt,
            parent_source: ps,
            parent_sink: pt,
        };
        let r = effective_redundancy_in(g, &ctx);
        if !r.status.is_bounded() {
            excluded += 1;
            continue;
        }
        if best.map_or(true, |(b, _)| r.delta < b) {
            best = Some((r.delta, (v, w)));
        }
    }
    GraphRedundancy {
        value: best.map(|b| b.0),
        exact: matches!(mode, RedundancyMode::Exhaustive),
        pairs_evaluated: pairs.len(),
        pairs_excluded: excluded,
        argmin: best.map(|b| b.1),
    }
}

/// Labels of a node list, for reports.
pub fn labels<G: Graph>(g: &G, nodes: &[usize]) -> Vec<String> {
    nodes.iter().map(|&u| g.label(u)).collect()
}
