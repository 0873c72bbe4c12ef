//! Seeded Monte Carlo over the channel model.
//!
//! Trial `i` of a run with master seed `seed` draws from ChaCha8 seeded
//! with `seed` on stream `i`, so any partition of the trial range over
//! any number of workers reproduces the serial tally exactly.

use core::ops::Range;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{p_failure_exact, ChannelModel};
use alloc::vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// No chosen channel was compromised.
    AcceptedClean,
    /// Some, but not all, chosen channels were compromised.
    DetectedError,
    /// Every chosen channel was compromised.
    UndetectedFailure,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::AcceptedClean => "accepted-clean",
            Outcome::DetectedError => "detected-error",
            Outcome::UndetectedFailure => "undetected-failure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub outcome: Outcome,
    pub compromised_chosen: u32,
}

impl TrialOutcome {
    /// Outcome implied by how many of the `k` chosen channels were hit.
    pub fn from_hits(compromised_chosen: u32, k: u32) -> Self {
        let outcome = match compromised_chosen {
            0 => Outcome::AcceptedClean,
            n if n == k => Outcome::UndetectedFailure,
            _ => Outcome::DetectedError,
        };
        Self { outcome, compromised_chosen }
    }
}

/// Anything that can run one randomized trial against a channel model.
pub trait TrialSource {
    /// The channel model the trials should agree with.
    fn channel_model(&self) -> ChannelModel;

    fn run_trial(&self, rng: &mut ChaCha8Rng) -> TrialOutcome;
}

impl TrialSource for ChannelModel {
    fn channel_model(&self) -> ChannelModel {
        *self
    }

    fn run_trial(&self, rng: &mut ChaCha8Rng) -> TrialOutcome {
        simulate_trial(*self, rng)
    }
}

/// One trial: independent uniform `k`- and `c`-subsets of the channels.
pub fn simulate_trial<R: Rng + ?Sized>(model: ChannelModel, rng: &mut R) -> TrialOutcome {
    let delta = model.delta() as usize;
    let chosen = index::sample(rng, delta, model.k() as usize);
    let mut compromised = vec![false; delta];
    for i in index::sample(rng, delta, model.c() as usize) {
        compromised[i] = true;
    }
    let hits = chosen.iter().filter(|&i| compromised[i]).count() as u32;
    TrialOutcome::from_hits(hits, model.k())
}

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Per-outcome counts. Merging is commutative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub clean: u64,
    pub detected: u64,
    pub failures: u64,
}

impl Tally {
    pub fn record(&mut self, o: Outcome) {
        match o {
            Outcome::AcceptedClean => self.clean += 1,
            Outcome::DetectedError => self.detected += 1,
            Outcome::UndetectedFailure => self.failures += 1,
        }
    }

    pub fn merge(self, other: Tally) -> Tally {
        Tally {
            clean: self.clean + other.clean,
            detected: self.detected + other.detected,
            failures: self.failures + other.failures,
        }
    }

    pub fn total(&self) -> u64 {
        self.clean + self.detected + self.failures
    }
}

/// Runs the trials with indices in `range`.
pub fn run_trials<S: TrialSource + ?Sized>(source: &S, seed: u64, range: Range<u64>) -> Tally {
    let mut tally = Tally::default();
    for i in range {
        tally.record(source.run_trial(&mut trial_rng(seed, i)).outcome);
    }
    tally
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaultReport {
    pub delta: u32,
    pub k: u32,
    pub c: u32,
    pub trials: u64,
    pub tally: Tally,
    /// `failures / trials`.
    pub estimate: f64,
    pub exact: f64,
    /// Binomial standard error `sqrt(p(1-p)/trials)` at the exact `p`.
    pub std_error: f64,
    pub seed: u64,
}

impl FaultReport {
    pub fn new(model: ChannelModel, seed: u64, tally: Tally) -> Self {
        let trials = tally.total();
        let exact = p_failure_exact(model);
        let n = trials.max(1) as f64;
        Self {
            delta: model.delta(),
            k: model.k(),
            c: model.c(),
            trials,
            tally,
            estimate: tally.failures as f64 / n,
            exact,
            std_error: libm::sqrt(exact * (1.0 - exact) / n),
            seed,
        }
    }

    /// `|estimate - exact| <= sigmas * std_error`.
    pub fn within(&self, sigmas: f64) -> bool {
        (self.estimate - self.exact).abs() <= sigmas * self.std_error + 1e-12
    }
}

/// Serial Monte Carlo over `trials` channel-model trials.
pub fn monte_carlo(model: ChannelModel, trials: u64, seed: u64) -> FaultReport {
    FaultReport::new(model, seed, run_trials(&model, seed, 0..trials))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for one cell of a parameter grid, so cells do not share streams.
pub fn cell_seed(master: u64, delta: u32, k: u32, c: u32) -> u64 {
    let cell = ((delta as u64) << 42) ^ ((k as u64) << 21) ^ c as u64;
    splitmix64(splitmix64(master) ^ cell)
}
