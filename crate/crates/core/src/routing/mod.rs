//! Unipath and multipath routing on the wrap-around butterfly.
//!
//! Multipath routes are built in the canonical frame (source at
//! `(0, 0...0)`) and mapped back through the relabelling automorphism.
//! Each of the `2^h` routes is selected by a path parameter `s` and visits
//! three families of places: its `R_s` class while the lowest `h` bits
//! carry `s`, then the `S` class of its assigned pattern while the `h`
//! bits preceding `l_w` carry it. Routes for different parameters can
//! only meet near the endpoints.
//!
//! One route per destination may coincide with another route's stage-7
//! entry node, which lies at distance exactly `h` from `w` and so is not
//! trusted. The plan detects this and pairs the two parameters: the
//! colliding route takes the other's `S` pattern and finishes directly
//! from the end of its stage 2 (stage label [`Stage::Shortcut`]).

mod stages;

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::topology::{self, Automorphism, Butterfly, NodeId, TopologyError};
use crate::trust::{self, TrustRadius};

pub use stages::{classify_stage, level_offset, stage_bounds, ClassPredicates, Stage};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoutingError {
    Topology(TopologyError),
    /// `h` outside `1..=m/2`.
    Radius { h: u32, m: u32 },
    /// `d(v, w) < 2h`.
    TooClose { distance: u32, required: u32 },
    ParamOutOfRange { s: u32, h: u32 },
    StepOutOfRange { t: u32, len: u32 },
    /// `current` is not the step-`t` node of the requested route.
    InconsistentHop { t: u32, expected: NodeId, found: NodeId },
}

impl fmt::Display for RoutingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoutingError::Topology(e) => e.fmt(f),
            RoutingError::Radius { h, m } => write!(f, "trust radius {h} out of range 1..={} for m = {m}", m / 2),
            RoutingError::TooClose { distance, required } => {
                write!(f, "endpoints are at distance {distance}, multipath routing needs at least {required}")
            }
            RoutingError::ParamOutOfRange { s, h } => write!(f, "path parameter {s} does not fit in {h} bits"),
            RoutingError::StepOutOfRange { t, len } => write!(f, "step {t} outside route of {len} hops"),
            RoutingError::InconsistentHop { t, expected, found } => write!(
                f,
                "node ({},{:b}) is not step {t} of the route, expected ({},{:b})",
                found.level, found.place, expected.level, expected.place
            ),
        }
    }
}

impl core::error::Error for RoutingError {}

impl From<TopologyError> for RoutingError {
    fn from(e: TopologyError) -> Self {
        RoutingError::Topology(e)
    }
}

/// An `h`-bit path parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathParam {
    s: u32,
    h: u32,
}

impl PathParam {
    pub fn new(s: u32, h: u32) -> Result<Self, RoutingError> {
        if h >= 32 || s >> h != 0 {
            return Err(RoutingError::ParamOutOfRange { s, h });
        }
        Ok(Self { s, h })
    }

    pub fn value(self) -> u32 {
        self.s
    }

    pub fn width(self) -> u32 {
        self.h
    }
}

impl fmt::Display for PathParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0w$b}", self.s, w = self.h as usize)
    }
}

/// A route: `hops[0]` is the source, `stages[t]` labels the hop
/// `hops[t] -> hops[t + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    pub hops: Vec<NodeId>,
    pub stages: Vec<Stage>,
    pub param: Option<PathParam>,
}

impl Route {
    /// Number of hops (edges).
    pub fn len(&self) -> usize {
        self.hops.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.hops.len() <= 1
    }

    pub fn source(&self) -> NodeId {
        self.hops[0]
    }

    pub fn destination(&self) -> NodeId {
        *self.hops.last().expect("route has a source")
    }

    pub fn is_shortcut(&self) -> bool {
        self.stages.contains(&Stage::Shortcut)
    }

    /// True when every hop follows a directed butterfly edge.
    pub fn is_valid_in(&self, g: &Butterfly) -> bool {
        self.hops.iter().all(|&u| g.contains(u))
            && self.stages.len() + 1 == self.hops.len()
            && self.hops.windows(2).all(|p| g.edge_kind(p[0], p[1]).is_some())
    }
}

fn set_bit(place: u32, i: u32, value: bool) -> u32 {
    (place & !(1 << i)) | ((value as u32) << i)
}

fn check_radius(g: &Butterfly, h: TrustRadius) -> Result<u32, RoutingError> {
    TrustRadius::for_butterfly(h.get(), g.m()).map_err(|_| RoutingError::Radius { h: h.get(), m: g.m() })?;
    Ok(h.get())
}

/// Bit-fixing route: `m` hops fixing bit `t mod m` to `w`'s value, then
/// down edges until the level matches.
pub fn unipath_route(g: &Butterfly, v: NodeId, w: NodeId) -> Result<Route, RoutingError> {
    g.check(v)?;
    g.check(w)?;
    if v == w {
        return Ok(Route { hops: vec![v], stages: Vec::new(), param: None });
    }
    let m = g.m();
    let (target, frame) = g.canonicalize(v, w);
    let len = m + target.level;
    let mut cur = NodeId::new(0, 0);
    let mut hops = vec![v];
    for t in 0..len {
        let i = t % m;
        let place = if t < m { set_bit(cur.place, i, target.bit(i)) } else { cur.place };
        cur = NodeId::new((t + 1) % m, place);
        hops.push(frame.invert(cur));
    }
    debug_assert_eq!(cur, target);
    Ok(Route { hops, stages: vec![Stage::Unipath; len as usize], param: None })
}

/// How the `S` patterns are assigned to path parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    /// Collision-free assignment with shortcut pairing.
    #[default]
    Repaired,
    /// Identity assignment; the parameter equal to the low `h` bits of
    /// `z_w` shortcuts from step `max(h, L - h)`. Kept to exhibit the
    /// shared stage-7 entry node; it is not independent in general.
    Literal,
}

/// Everything needed to produce any route of a multipath set, in the
/// canonical frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipathPlan {
    m: u32,
    h: u32,
    target: NodeId,
    offset: u32,
    frame: Automorphism,
    variant: Variant,
    pattern: Vec<u32>,
    shortcut_from: Vec<Option<u32>>,
}

impl MultipathPlan {
    /// Checks the preconditions and prepares the plan for `(v, w, h)`.
    pub fn new(g: &Butterfly, v: NodeId, w: NodeId, h: TrustRadius) -> Result<Self, RoutingError> {
        Self::with_variant(g, v, w, h, Variant::Repaired)
    }

    pub fn with_variant(
        g: &Butterfly,
        v: NodeId,
        w: NodeId,
        h: TrustRadius,
        variant: Variant,
    ) -> Result<Self, RoutingError> {
        g.check(v)?;
        g.check(w)?;
        let h = check_radius(g, h)?;
        let distance = topology::distance(g, g.index_of(v), g.index_of(w)).expect("butterfly is connected");
        if distance < 2 * h {
            return Err(RoutingError::TooClose { distance, required: 2 * h });
        }
        let (target, frame) = g.canonicalize(v, w);
        Ok(Self::canonical(g.m(), h, target, frame, variant))
    }

    fn canonical(m: u32, h: u32, target: NodeId, frame: Automorphism, variant: Variant) -> Self {
        let n = 1usize << h;
        let offset = level_offset(m, h, target.level);
        let pivot = offset - h;
        let mut pattern: Vec<u32> = (0..n as u32).collect();
        let mut shortcut_from = vec![None; n];
        match variant {
            Variant::Repaired => {
                if pivot >= h {
                    // The end of stage 2 for s is s in the low bits and ones up
                    // to the pivot. It equals the stage-7 entry of pattern u
                    // exactly when it agrees with z_w outside the S window.
                    let preds = ClassPredicates::new(m, h, target.level, 0);
                    let window: u32 = (0..h).map(|i| 1 << preds.window_index(i)).sum();
                    let middle = ((1u32 << pivot) - 1) & !((1u32 << h) - 1);
                    for s in 0..n as u32 {
                        let x = s | middle;
                        if (x ^ target.place) & !window != 0 {
                            continue;
                        }
                        let u = decode_window(m, h, target.level, x);
                        if u != s {
                            assert!(pattern[s as usize] == s && pattern[u as usize] == u, "pairings overlap");
                            pattern.swap(s as usize, u as usize);
                        }
                        shortcut_from[s as usize] = Some(pivot);
                    }
                }
            }
            Variant::Literal => {
                let s = target.place & ((1 << h) - 1);
                shortcut_from[s as usize] = Some(h.max(pivot));
            }
        }
        Self { m, h, target, offset, frame, variant, pattern, shortcut_from }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn radius(&self) -> u32 {
        self.h
    }

    pub fn route_count(&self) -> usize {
        1 << self.h
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Destination in the canonical frame.
    pub fn canonical_target(&self) -> NodeId {
        self.target
    }

    pub fn frame(&self) -> Automorphism {
        self.frame
    }

    /// Level offset `L` in `h..m + h`; full routes have `m + L` hops.
    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn full_length(&self) -> u32 {
        self.m + self.offset
    }

    /// Pattern assigned to the `S` window of route `s`.
    pub fn pattern_of(&self, s: u32) -> u32 {
        self.pattern[s as usize]
    }

    pub fn is_shortcut(&self, s: u32) -> bool {
        self.shortcut_from[s as usize].is_some()
    }

    /// Predicates for route `s`: `R_s` for the low bits, `S` for its
    /// assigned pattern.
    pub fn r_class(&self, s: u32) -> ClassPredicates {
        ClassPredicates::new(self.m, self.h, self.target.level, s)
    }

    pub fn s_class(&self, s: u32) -> ClassPredicates {
        ClassPredicates::new(self.m, self.h, self.target.level, self.pattern_of(s))
    }

    fn param(&self, s: u32) -> Result<PathParam, RoutingError> {
        PathParam::new(s, self.h)
    }

    /// Stage label of canonical hop `t` of route `s`.
    pub fn stage(&self, s: u32, t: u32) -> Stage {
        match self.shortcut_from[s as usize] {
            Some(from) if t >= from => Stage::Shortcut,
            _ => stages::stage_at(t, self.m, self.h, self.offset).expect("step inside route"),
        }
    }

    /// Canonical successor of `cur` at step `t` on route `s`, or `None`
    /// once the route has ended.
    fn step(&self, s: u32, t: u32, cur: NodeId) -> Option<(NodeId, Stage)> {
        if t >= self.full_length() {
            return None;
        }
        let stage = self.stage(s, t);
        if stage == Stage::Shortcut && cur == self.target {
            return None;
        }
        let i = t % self.m;
        let zw = self.target.bit(i);
        let window = || self.s_class(s).window_bit(i);
        let bit = match stage {
            Stage::One => (s >> t) & 1 == 1,
            // inverse of the source bit, which is 0 in this frame
            Stage::Two => true,
            Stage::Three => window().expect("stage 3 stays in the window"),
            Stage::Five => window().unwrap_or(zw),
            _ => zw,
        };
        Some((NodeId::new((cur.level + 1) % self.m, set_bit(cur.place, i, bit)), stage))
    }

    /// Route `s` in the canonical frame.
    pub fn canonical_route(&self, s: u32) -> Result<Route, RoutingError> {
        let param = self.param(s)?;
        let mut cur = NodeId::new(0, 0);
        let mut hops = vec![cur];
        let mut labels = Vec::with_capacity(self.full_length() as usize);
        let mut t = 0;
        while let Some((next, stage)) = self.step(s, t, cur) {
            cur = next;
            hops.push(cur);
            labels.push(stage);
            t += 1;
        }
        debug_assert_eq!(cur, self.target);
        Ok(Route { hops, stages: labels, param: Some(param) })
    }

    /// Route `s` between the original endpoints.
    pub fn route(&self, s: u32) -> Result<Route, RoutingError> {
        let mut r = self.canonical_route(s)?;
        for u in &mut r.hops {
            *u = self.frame.invert(*u);
        }
        Ok(r)
    }

    pub fn routes(&self) -> Vec<Route> {
        (0..self.route_count() as u32).map(|s| self.route(s).expect("parameter in range")).collect()
    }

    /// Forwarding decision for a copy of route `s` sitting at `current`
    /// (original labels) after `t` hops.
    ///
    /// The caller's position is checked by replaying the step rule from
    /// the source; nothing is cached between calls.
    pub fn next_hop(&self, current: NodeId, t: u32, s: u32) -> Result<NodeId, RoutingError> {
        self.param(s)?;
        let found = self.frame.apply(current);
        let mut cur = NodeId::new(0, 0);
        for step in 0..t {
            match self.step(s, step, cur) {
                Some((next, _)) => cur = next,
                None => return Err(RoutingError::StepOutOfRange { t, len: step }),
            }
        }
        if cur != found {
            return Err(RoutingError::InconsistentHop { t, expected: self.frame.invert(cur), found: current });
        }
        match self.step(s, t, cur) {
            Some((next, _)) => Ok(self.frame.invert(next)),
            None => Err(RoutingError::StepOutOfRange { t, len: t }),
        }
    }
}

// Pattern u whose S window, written into a place, reads as `place`.
fn decode_window(m: u32, h: u32, l_w: u32, place: u32) -> u32 {
    let preds = ClassPredicates::new(m, h, l_w, 0);
    let mut u = 0;
    for i in 0..h {
        let b = (place >> preds.window_index(i)) & 1;
        u |= b << ((i + l_w) % h);
    }
    u
}

/// The `2^h` routes from `v` to `w`, indexed by path parameter.
pub fn multipath_routes(g: &Butterfly, v: NodeId, w: NodeId, h: TrustRadius) -> Result<Vec<Route>, RoutingError> {
    Ok(MultipathPlan::new(g, v, w, h)?.routes())
}

/// Stateless forwarding, see [`MultipathPlan::next_hop`].
pub fn next_hop(
    g: &Butterfly,
    current: NodeId,
    t: u32,
    v: NodeId,
    w: NodeId,
    s: u32,
    h: TrustRadius,
) -> Result<NodeId, RoutingError> {
    MultipathPlan::new(g, v, w, h)?.next_hop(current, t, s)
}

/// `T_h(v) ∪ T_h(w)` as a node set.
pub fn trusted_region(g: &Butterfly, v: NodeId, w: NodeId, h: TrustRadius) -> Result<BTreeSet<NodeId>, RoutingError> {
    g.check(v)?;
    g.check(w)?;
    let mut out = BTreeSet::new();
    for end in [v, w] {
        let ids = trust::trusted_neighborhood(g, g.index_of(end), h).expect("node checked above");
        out.extend(ids.into_iter().map(|i| g.node_at(i)));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    /// Route identifiers: the path parameter, or the list position for
    /// routes without one.
    pub s: u32,
    pub s_prime: u32,
    pub node: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Independence {
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl Independence {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Untrusted nodes shared by any two routes.
pub fn verify_independence(routes: &[Route], trusted: &BTreeSet<NodeId>) -> Independence {
    let sets: Vec<BTreeSet<NodeId>> = routes.iter().map(|r| r.hops.iter().copied().collect()).collect();
    let id = |k: usize| routes[k].param.map_or(k as u32, |p| p.value());
    let mut out = Independence::default();
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            out.pairs_checked += 1;
            for &node in sets[a].intersection(&sets[b]) {
                if !trusted.contains(&node) {
                    out.violations.push(Violation { s: id(a), s_prime: id(b), node });
                }
            }
        }
    }
    out
}
