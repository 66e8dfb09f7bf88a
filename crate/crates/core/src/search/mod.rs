//! Construction strategies for seminormalized Hadamard matrices.
//!
//! - [`exhaustive_search`]: every unique candidate, or the equivalent clique
//!   enumeration when the candidate space is too large to stream.
//! - [`rvs_construct`]: random vector selection, one column at a time.
//! - [`osa_construct`]: simulated annealing over pair-exchange moves.
//!
//! The stochastic methods are fully determined by their [`SearchBudget`]:
//! restart `r` draws from a ChaCha8 stream seeded with `rng_seed + r`.

mod anneal;
mod exhaustive;
mod rvs;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use anneal::{
    energy, osa_construct, osa_step, AcceptanceRule, AnnealOutcome, AnnealerState, ScheduleShape,
    StepOutcome, ThresholdSchedule,
};
pub use exhaustive::{exhaustive_search, ExhaustiveOutcome, ExhaustiveRoute, ExhaustiveStrategy};
pub use rvs::{rvs_construct, RvsOutcome, RvsTrace};

/// Work limits and seed for a search run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Draws (RVS), annealing steps (OSA) or candidates (exhaustive) allowed
    /// per attempt.
    pub max_iterations: u64,
    /// Number of attempts, each with its own derived seed.
    pub max_restarts: u32,
    pub rng_seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_iterations: 10_000_000,
            max_restarts: 20,
            rng_seed: 0,
        }
    }
}

impl SearchBudget {
    pub fn new(max_iterations: u64, max_restarts: u32, rng_seed: u64) -> Result<Self> {
        let b = Self {
            max_iterations,
            max_restarts,
            rng_seed,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || self.max_restarts == 0 {
            return Err(Error::Domain(
                "search budget needs positive iteration and restart limits".into(),
            ));
        }
        Ok(())
    }

    /// Seed used by attempt `restart`.
    pub fn restart_seed(&self, restart: u32) -> u64 {
        self.rng_seed.wrapping_add(u64::from(restart))
    }

    pub(crate) fn restart_rng(&self, restart: u32) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.restart_seed(restart))
    }
}

/// Runs attempts `0..max_restarts` in parallel batches and returns the
/// lowest-numbered success, so the outcome does not depend on scheduling.
/// On total failure returns every attempt's failure value in order.
pub(crate) fn first_success<T, F, P>(
    budget: &SearchBudget,
    attempt: F,
) -> std::result::Result<(u32, T), Vec<P>>
where
    T: Send,
    P: Send,
    F: Fn(u32) -> std::result::Result<T, P> + Sync,
{
    use rayon::prelude::*;

    let batch = rayon::current_num_threads().max(1) as u32;
    let mut failures = Vec::new();
    let mut start = 0;
    while start < budget.max_restarts {
        let end = (start + batch).min(budget.max_restarts);
        let results: Vec<_> = (start..end)
            .into_par_iter()
            .map(|r| (r, attempt(r)))
            .collect();
        for (r, res) in results {
            match res {
                Ok(t) => return Ok((r, t)),
                Err(p) => failures.push(p),
            }
        }
        start = end;
    }
    Err(failures)
}
