use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{first_success, SearchBudget};
use crate::error::{Error, Result};
use crate::primitives::{ShMatrix, ShVector, MAX_ORDER};
use crate::vectorspace::random_sh_vector;

/// Draw counts per column stage of a random vector selection run.
///
/// Stages are numbered from 1 like matrix columns: column 1 is the unity
/// vector and column 2 is a single random draw, so recorded stages start at 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RvsTrace {
    pub order: usize,
    pub restart: u32,
    pub seed: u64,
    /// `(stage, draws)` pairs in stage order; draws count every candidate
    /// including the accepted one.
    pub stages: Vec<(usize, u64)>,
}

impl RvsTrace {
    pub fn total_iterations(&self) -> u64 {
        self.stages.iter().map(|&(_, n)| n).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.stages.last().map(|&(s, _)| s) == Some(self.order)
    }

    /// `stage,iterations` CSV with a versioned header comment.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("# shmat rvs-trace v1\nstage,iterations\n");
        for (stage, n) in &self.stages {
            out.push_str(&format!("{stage},{n}\n"));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct RvsOutcome {
    pub matrix: ShMatrix,
    pub trace: RvsTrace,
}

fn attempt<R: Rng>(
    k: usize,
    max_draws: u64,
    rng: &mut R,
    trace: &mut RvsTrace,
) -> Option<Vec<ShVector>> {
    let order = 4 * k;
    let mut columns = Vec::with_capacity(order - 1);
    columns.push(random_sh_vector(k, rng));
    let mut draws = 0u64;
    for stage in 3..=order {
        let mut n = 0u64;
        loop {
            if draws == max_draws {
                trace.stages.push((stage, n));
                return None;
            }
            draws += 1;
            n += 1;
            let v = random_sh_vector(k, rng);
            if columns
                .iter()
                .all(|c: &ShVector| c.as_signs().dot(v.as_signs()) == 0)
            {
                columns.push(v);
                break;
            }
        }
        trace.stages.push((stage, n));
    }
    Some(columns)
}

/// Random vector selection: fixes the unity column, draws the second column
/// at random, then for each further column draws random SH vectors until one
/// is orthogonal to every column chosen so far.
///
/// An attempt that spends `max_iterations` draws without finishing is
/// abandoned and the next restart seed is tried. On failure the error
/// carries the trace of the attempt that got furthest.
pub fn rvs_construct(k: usize, budget: &SearchBudget) -> Result<RvsOutcome> {
    budget.validate()?;
    if k == 0 || 4 * k > MAX_ORDER {
        return Err(Error::Domain(format!(
            "k = {k} outside 1..={}",
            MAX_ORDER / 4
        )));
    }
    let result = first_success(budget, |restart| {
        let mut rng = budget.restart_rng(restart);
        let mut trace = RvsTrace {
            order: 4 * k,
            restart,
            seed: budget.restart_seed(restart),
            stages: Vec::new(),
        };
        match attempt(k, budget.max_iterations, &mut rng, &mut trace) {
            Some(columns) => Ok((columns, trace)),
            None => Err(trace),
        }
    });
    match result {
        Ok((_, (columns, trace))) => {
            let matrix = ShMatrix::from_sh_columns(&columns)?;
            Ok(RvsOutcome { matrix, trace })
        }
        Err(partials) => {
            let furthest = partials
                .into_iter()
                .max_by_key(|t| (t.stages.len(), std::cmp::Reverse(t.restart)))
                .expect("at least one attempt");
            Err(Error::RvsExhausted {
                restarts: budget.max_restarts as usize,
                partial: Box::new(furthest),
            })
        }
    }
}
