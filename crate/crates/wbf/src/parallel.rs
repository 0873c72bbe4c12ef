//! Trial execution on a rayon pool.
//!
//! Trials are cut into fixed-size chunks whose tallies are merged, and
//! every trial owns its random stream, so the result does not depend on
//! the worker count.

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use wbf_core::faultsim::{run_trials, Tally, TrialSource};

use crate::error::CliError;

const CHUNK: u64 = 4096;

pub struct Runner {
    pool: Option<ThreadPool>,
}

impl Runner {
    /// `None` uses rayon's global pool; `Some(n)` a dedicated pool of `n`
    /// threads.
    pub fn new(workers: Option<usize>) -> Result<Self, CliError> {
        let pool = match workers {
            None => None,
            Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
            Some(n) => Some(
                ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CliError::Usage(format!("cannot start {n} workers: {e}")))?,
            ),
        };
        Ok(Self { pool })
    }

    pub fn serial() -> Self {
        Self::new(Some(1)).expect("one worker")
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(p) => p.install(f),
            None => f(),
        }
    }

    pub fn tally<S: TrialSource + Sync + ?Sized>(&self, source: &S, seed: u64, trials: u64) -> Tally {
        self.install(|| {
            (0..trials.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| run_trials(source, seed, c * CHUNK..((c + 1) * CHUNK).min(trials)))
                .reduce(Tally::default, Tally::merge)
        })
    }
}
