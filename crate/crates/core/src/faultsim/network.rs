//! Network-level attack on a multipath route set.
//!
//! The adversary compromises nodes of a minimum vertex cut separating the
//! two trusted neighborhoods, computed on the subgraph formed by the
//! constructed routes. On that subgraph the cut has exactly one node per
//! route, so each compromised node takes out one channel.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::index;
use rand_chacha::ChaCha8Rng;

use super::protocol::{receive_and_decide, DecodeMode, Decision, MessageCopy};
use super::sim::{Outcome, TrialOutcome, TrialSource};
use super::{ChannelModel, ModelError};
use crate::routing::{MultipathPlan, Route, RoutingError};
use crate::topology::{Butterfly, GenericGraph, NodeId};
use crate::trust::{self, TrustContext, TrustRadius};

const GENUINE: u8 = 0;
const FORGED: u8 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkError {
    Routing(RoutingError),
    Model(ModelError),
    CopiesExceedRoutes { k: u32, routes: u32 },
    BudgetExceedsCut { c: u32, cut: u32 },
    /// The route-union cut did not put exactly one node on every route.
    CutMismatch { cut: u32, routes: u32 },
}

impl fmt::Display for NetworkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkError::Routing(e) => e.fmt(f),
            NetworkError::Model(e) => e.fmt(f),
            NetworkError::CopiesExceedRoutes { k, routes } => {
                write!(f, "cannot send {k} copies over {routes} routes")
            }
            NetworkError::BudgetExceedsCut { c, cut } => {
                write!(f, "adversary budget {c} exceeds the {cut}-node cut")
            }
            NetworkError::CutMismatch { cut, routes } => {
                write!(f, "cut of {cut} nodes does not cross each of the {routes} routes once")
            }
        }
    }
}

impl core::error::Error for NetworkError {}

impl From<RoutingError> for NetworkError {
    fn from(e: RoutingError) -> Self {
        NetworkError::Routing(e)
    }
}

#[derive(Debug, Clone)]
pub struct NetworkScenario {
    model: ChannelModel,
    routes: Vec<Route>,
    cut: Vec<NodeId>,
    mode: DecodeMode,
}

impl NetworkScenario {
    pub fn new(g: &Butterfly, v: NodeId, w: NodeId, h: TrustRadius, k: u32, c: u32) -> Result<Self, NetworkError> {
        let plan = MultipathPlan::new(g, v, w, h)?;
        let routes = plan.routes();
        let n = routes.len() as u32;
        if k == 0 || k > n {
            return Err(NetworkError::CopiesExceedRoutes { k, routes: n });
        }

        let mut union = GenericGraph::new();
        let mut members: Vec<NodeId> = Vec::new();
        for r in &routes {
            for pair in r.hops.windows(2) {
                let [a, b] = [pair[0], pair[1]].map(|u| {
                    let id = union.add_node(&format!("{}", g.label_of(u)));
                    if id == members.len() {
                        members.push(u);
                    }
                    id
                });
                union.add_edge(a, b).expect("route hops are distinct adjacent nodes");
            }
        }
        let ctx = TrustContext::new(g, g.index_of(v), g.index_of(w), h).expect("endpoints checked by the plan");
        let source_side: Vec<bool> = members.iter().map(|&u| ctx.trusted_by_source(g.index_of(u))).collect();
        let sink_side: Vec<bool> = members.iter().map(|&u| ctx.trusted_by_sink(g.index_of(u))).collect();
        let flow = trust::vertex_cut_between(&union, &source_side, &sink_side);
        let cut: Vec<NodeId> = flow.cut.iter().map(|&i| members[i]).collect();
        let one_each = routes.iter().all(|r| cut.iter().filter(|u| r.hops.contains(u)).count() == 1);
        if cut.len() as u32 != n || !one_each {
            return Err(NetworkError::CutMismatch { cut: cut.len() as u32, routes: n });
        }
        if c > n {
            return Err(NetworkError::BudgetExceedsCut { c, cut: n });
        }
        let model = ChannelModel::new(n, k, c).map_err(NetworkError::Model)?;
        Ok(Self { model, routes, cut, mode: DecodeMode::Detect })
    }

    pub fn with_mode(mut self, mode: DecodeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    /// Cut nodes the adversary draws from, one per route.
    pub fn cut(&self) -> &[NodeId] {
        &self.cut
    }

    /// Trial outcome for fixed choices: `compromised` indexes [`Self::cut`],
    /// `chosen` indexes [`Self::routes`].
    pub fn evaluate(&self, compromised: &[usize], chosen: &[usize]) -> TrialOutcome {
        let bad: Vec<NodeId> = compromised.iter().map(|&i| self.cut[i]).collect();
        let mut hits = 0;
        let copies: Vec<MessageCopy<u8>> = chosen
            .iter()
            .map(|&s| {
                let tampered = self.routes[s].hops.iter().any(|u| bad.contains(u));
                hits += tampered as u32;
                MessageCopy { channel: s as u32, payload: if tampered { FORGED } else { GENUINE } }
            })
            .collect();
        let expected: Vec<u32> = chosen.iter().map(|&s| s as u32).collect();
        let decision = receive_and_decide(&copies, &expected, self.mode).expect("one copy per chosen route");
        let outcome = match decision {
            Decision::Accept(GENUINE) => Outcome::AcceptedClean,
            Decision::Accept(_) | Decision::Correct(FORGED) => Outcome::UndetectedFailure,
            Decision::Detect | Decision::Correct(_) => Outcome::DetectedError,
        };
        TrialOutcome { outcome, compromised_chosen: hits }
    }
}

impl TrialSource for NetworkScenario {
    fn channel_model(&self) -> ChannelModel {
        self.model
    }

    fn run_trial(&self, rng: &mut ChaCha8Rng) -> TrialOutcome {
        let compromised = index::sample(rng, self.cut.len(), self.model.c() as usize).into_vec();
        let chosen = index::sample(rng, self.routes.len(), self.model.k() as usize).into_vec();
        self.evaluate(&compromised, &chosen)
    }
}
