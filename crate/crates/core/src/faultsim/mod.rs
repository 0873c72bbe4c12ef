//! Redundant-channel failure model.
//!
//! A sender picks `k` of `delta` independent channels uniformly at random
//! and sends one copy on each; an adversary independently compromises `c`
//! channels. The receiver is fooled only when every chosen channel was
//! compromised and the forged copies agree.

mod network;
mod protocol;
mod sim;

use core::fmt;

pub use network::{NetworkError, NetworkScenario};
pub use protocol::{receive_and_decide, DecodeMode, Decision, MessageCopy, ProtocolError};
pub use sim::{
    cell_seed, monte_carlo, run_trials, simulate_trial, trial_rng, FaultReport, Outcome, Tally, TrialOutcome,
    TrialSource,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelError {
    /// `1 <= k <= delta` and `c <= delta` violated.
    Channels { delta: u32, k: u32, c: u32 },
    /// `0 < alpha < beta <= 1` violated.
    StirlingDomain,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::Channels { delta, k, c } => {
                write!(f, "need 1 <= k <= delta and c <= delta, got delta={delta} k={k} c={c}")
            }
            ModelError::StirlingDomain => f.write_str("approximation needs 0 < alpha < beta <= 1"),
        }
    }
}

impl core::error::Error for ModelError {}

/// `delta` channels, `k` copies sent, `c` channels compromised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChannelModel {
    delta: u32,
    k: u32,
    c: u32,
}

impl ChannelModel {
    pub fn new(delta: u32, k: u32, c: u32) -> Result<Self, ModelError> {
        if k == 0 || k > delta || c > delta {
            return Err(ModelError::Channels { delta, k, c });
        }
        Ok(Self { delta, k, c })
    }

    pub fn delta(self) -> u32 {
        self.delta
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn c(self) -> u32 {
        self.c
    }
}

fn ln_factorial(n: u32) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// Probability that all `k` chosen channels are compromised,
/// `c! (delta-k)! / (delta! (c-k)!)` = `C(c,k) / C(delta,k)`, evaluated
/// through log-gamma. Zero when `k > c`.
pub fn p_failure_exact(model: ChannelModel) -> f64 {
    let ChannelModel { delta, k, c } = model;
    if k > c {
        return 0.0;
    }
    // grouped so that c == delta cancels exactly
    let ln = (ln_factorial(c) - ln_factorial(c - k)) - (ln_factorial(delta) - ln_factorial(delta - k));
    libm::exp(ln).min(1.0)
}

/// Fractions `alpha = k/delta` and `beta = c/delta` at scale `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirlingParams {
    alpha: f64,
    beta: f64,
    delta: f64,
}

impl StirlingParams {
    pub fn new(alpha: f64, beta: f64, delta: f64) -> Result<Self, ModelError> {
        let ok = alpha > 0.0 && alpha < beta && beta <= 1.0 && delta > 0.0 && delta.is_finite();
        if !ok {
            return Err(ModelError::StirlingDomain);
        }
        Ok(Self { alpha, beta, delta })
    }

    /// Parameters matching an integer model.
    pub fn from_model(model: ChannelModel) -> Result<Self, ModelError> {
        let d = model.delta as f64;
        Self::new(model.k as f64 / d, model.c as f64 / d, d)
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    pub fn beta(self) -> f64 {
        self.beta
    }

    pub fn delta(self) -> f64 {
        self.delta
    }
}

/// Stirling form of [`p_failure_exact`]:
/// `sqrt(b(1-a)) / sqrt(b-a) * [((b-a)/(1-a))^a (b/(b-a))^b (1-a)]^delta`.
pub fn p_failure_stirling(p: StirlingParams) -> f64 {
    let StirlingParams { alpha: a, beta: b, delta } = p;
    let ln_pre = 0.5 * (libm::log(b) + libm::log1p(-a) - libm::log(b - a));
    // a = 1 forces b = 1 < a, excluded, so 1 - a > 0 here
    let ln_base = a * (libm::log(b - a) - libm::log1p(-a)) + b * (libm::log(b) - libm::log(b - a)) + libm::log1p(-a);
    libm::exp(ln_pre + delta * ln_base)
}
