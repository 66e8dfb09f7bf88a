use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{first_success, SearchBudget};
use crate::error::{Error, Result};
use crate::primitives::{QshMatrix, ShMatrix, ShVector, MAX_ORDER};
use crate::vectorspace::random_sh_vector;

/// Sum of absolute off-diagonal entries of `QᵀQ`. Zero iff `Q` is Hadamard.
pub fn energy(q: &QshMatrix) -> u64 {
    q.gram().off_diagonal_abs_sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScheduleShape {
    Linear,
    Geometric,
}

/// Uphill-acceptance threshold `P(n)` moving from `start_p` to `end_p` over
/// `total_steps` steps, then held at `end_p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSchedule {
    pub start_p: f64,
    pub end_p: f64,
    pub shape: ScheduleShape,
    pub total_steps: u64,
}

impl ThresholdSchedule {
    pub fn new(start_p: f64, end_p: f64, shape: ScheduleShape, total_steps: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&start_p) || !(0.0..=1.0).contains(&end_p) || start_p > end_p {
            return Err(Error::Domain(format!(
                "schedule needs 0 <= start_p <= end_p <= 1, got {start_p}..{end_p}"
            )));
        }
        if shape == ScheduleShape::Geometric && start_p == 0.0 {
            return Err(Error::Domain("geometric schedule needs start_p > 0".into()));
        }
        if total_steps == 0 {
            return Err(Error::Domain("schedule needs at least one step".into()));
        }
        Ok(Self {
            start_p,
            end_p,
            shape,
            total_steps,
        })
    }

    /// 0.5 rising linearly to 1.0.
    pub fn linear(total_steps: u64) -> Self {
        Self::new(0.5, 1.0, ScheduleShape::Linear, total_steps).expect("valid defaults")
    }

    pub fn with_total_steps(self, total_steps: u64) -> Result<Self> {
        Self::new(self.start_p, self.end_p, self.shape, total_steps)
    }

    /// Fraction of the schedule elapsed after `step` steps, in `[0, 1]`.
    pub fn position(&self, step: u64) -> f64 {
        (step as f64 / self.total_steps as f64).min(1.0)
    }

    pub fn threshold(&self, step: u64) -> f64 {
        let t = self.position(step);
        match self.shape {
            ScheduleShape::Linear => self.start_p + (self.end_p - self.start_p) * t,
            ScheduleShape::Geometric => self.start_p * (self.end_p / self.start_p).powf(t),
        }
    }
}

/// Parses `linear:0.5:1.0` or `geometric:0.5:1.0`. `total_steps` is set to 1
/// and is expected to be replaced with [`ThresholdSchedule::with_total_steps`].
impl FromStr for ThresholdSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Domain(format!("schedule {s:?} is not shape:start:end"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let shape = match parts[0] {
            "linear" => ScheduleShape::Linear,
            "geometric" => ScheduleShape::Geometric,
            _ => return Err(bad()),
        };
        let start = parts[1].parse().map_err(|_| bad())?;
        let end = parts[2].parse().map_err(|_| bad())?;
        Self::new(start, end, shape, 1)
    }
}

impl fmt::Display for ThresholdSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shape = match self.shape {
            ScheduleShape::Linear => "linear",
            ScheduleShape::Geometric => "geometric",
        };
        write!(f, "{shape}:{}:{}", self.start_p, self.end_p)
    }
}

/// How uphill moves are judged.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum AcceptanceRule {
    /// Accept iff a uniform draw on `[0, 1)` exceeds the scheduled `P(n)`.
    Threshold,
    /// Accept with probability `exp(−ΔE / T)`, where the temperature is
    /// `T = scale · (1 − P(n))`; `P(n) = 1` is a pure descent.
    Metropolis { temperature_scale: f64 },
}

/// A candidate matrix under annealing together with its Gram entries.
///
/// Unlike [`QshMatrix`] the columns may transiently repeat; a repeated pair
/// contributes `2·4k` to the energy, so a zero-energy state never has one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealerState {
    order: usize,
    /// Columns 2..=4k; the unity column is implicit.
    columns: Vec<ShVector>,
    /// Inner products among `columns`, row-major.
    gram: Vec<i64>,
    pub energy: u64,
    pub step: u64,
    pub schedule_position: f64,
}

impl AnnealerState {
    pub fn new(columns: Vec<ShVector>) -> Result<Self> {
        let order = columns.len() + 1;
        if !order.is_multiple_of(4) {
            return Err(Error::BadOrder(order));
        }
        if let Some(c) = columns.iter().find(|c| c.order() != order) {
            return Err(Error::Dimension {
                expected: order,
                found: c.order(),
            });
        }
        let n = columns.len();
        let mut gram = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                gram[i * n + j] = columns[i].as_signs().dot(columns[j].as_signs());
            }
        }
        let mut s = Self {
            order,
            columns,
            gram,
            energy: 0,
            step: 0,
            schedule_position: 0.0,
        };
        s.energy = s.recompute_energy();
        Ok(s)
    }

    /// Random distinct SH columns.
    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        let mut columns: Vec<ShVector> = Vec::with_capacity(4 * k - 1);
        while columns.len() < 4 * k - 1 {
            let v = random_sh_vector(k, rng);
            if !columns.contains(&v) {
                columns.push(v);
            }
        }
        Self::new(columns).expect("well-formed columns")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn columns(&self) -> &[ShVector] {
        &self.columns
    }

    /// Energy from scratch, ignoring the cached value.
    pub fn recompute_energy(&self) -> u64 {
        let n = self.columns.len();
        let mut e = 0;
        for i in 0..n {
            for j in i + 1..n {
                e += 2 * self.columns[i]
                    .as_signs()
                    .dot(self.columns[j].as_signs())
                    .unsigned_abs();
            }
        }
        e
    }

    /// The state as a candidate matrix; fails while columns repeat.
    pub fn to_qsh(&self) -> Result<QshMatrix> {
        QshMatrix::from_sh_columns(&self.columns)
    }

    fn entry(&self, i: usize, j: usize) -> i64 {
        self.gram[i * self.columns.len() + j]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepOutcome {
    pub accepted: bool,
    pub delta: i64,
}

fn random_position<R: Rng + ?Sized>(v: &ShVector, negative: bool, rng: &mut R) -> usize {
    // Half of the entries qualify, so rejection sampling needs two tries on average.
    loop {
        let j = rng.random_range(0..v.order());
        if v.as_signs().is_negative(j) == negative {
            return j;
        }
    }
}

/// One annealing move: pick a random non-unity column, exchange a random −1
/// entry with a random +1 entry, and keep the change if the energy does not
/// rise or if the uphill test passes.
///
/// Only the Gram row and column of the touched column change, so the update
/// costs O(4k).
pub fn osa_step<R: Rng + ?Sized>(
    state: &mut AnnealerState,
    schedule: &ThresholdSchedule,
    rule: AcceptanceRule,
    rng: &mut R,
) -> StepOutcome {
    let n = state.columns.len();
    let c = rng.random_range(0..n);
    let v = state.columns[c];
    let neg = random_position(&v, true, rng);
    let pos = random_position(&v, false, rng);

    let mut delta = 0i64;
    let mut updated = [0i64; MAX_ORDER];
    for (j, slot) in updated.iter_mut().enumerate().take(n) {
        if j == c {
            continue;
        }
        let q = state.columns[j].as_signs();
        let old = state.entry(c, j);
        let new = old + 2 * i64::from(q.get(neg)) - 2 * i64::from(q.get(pos));
        *slot = new;
        delta += 2 * (new.abs() - old.abs());
    }

    let p = schedule.threshold(state.step);
    let accepted = delta <= 0
        || match rule {
            AcceptanceRule::Threshold => rng.random::<f64>() > p,
            AcceptanceRule::Metropolis { temperature_scale } => {
                let t = temperature_scale * (1.0 - p);
                t > 0.0 && rng.random::<f64>() < (-(delta as f64) / t).exp()
            }
        };

    if accepted {
        state.columns[c].exchange(neg, pos);
        for (j, &val) in updated.iter().enumerate().take(n) {
            if j != c {
                state.gram[c * n + j] = val;
                state.gram[j * n + c] = val;
            }
        }
        state.energy = (state.energy as i64 + delta) as u64;
    }
    state.step += 1;
    state.schedule_position = schedule.position(state.step);
    StepOutcome { accepted, delta }
}

#[derive(Clone, Debug)]
pub struct AnnealOutcome {
    pub matrix: ShMatrix,
    /// Steps taken by the successful attempt.
    pub steps: u64,
    /// Steps summed over every attempt up to and including the successful one.
    pub total_steps: u64,
    pub restart: u32,
    pub seed: u64,
}

/// Anneals random candidates until one reaches zero energy.
///
/// Each attempt starts from random distinct columns and runs at most
/// `budget.max_iterations` steps; the schedule's `total_steps` is stretched
/// to that length. On failure the error carries the lowest-energy state seen.
pub fn osa_construct(
    k: usize,
    schedule: &ThresholdSchedule,
    rule: AcceptanceRule,
    budget: &SearchBudget,
) -> Result<AnnealOutcome> {
    budget.validate()?;
    if k == 0 || 4 * k > MAX_ORDER {
        return Err(Error::Domain(format!(
            "k = {k} outside 1..={}",
            MAX_ORDER / 4
        )));
    }
    let schedule = schedule.with_total_steps(budget.max_iterations)?;
    let result = first_success(budget, |restart| {
        let mut rng = budget.restart_rng(restart);
        let mut state = AnnealerState::random(k, &mut rng);
        let mut best = state.clone();
        while state.energy > 0 && state.step < budget.max_iterations {
            osa_step(&mut state, &schedule, rule, &mut rng);
            if state.energy < best.energy {
                best = state.clone();
            }
        }
        if state.energy == 0 {
            Ok(state)
        } else {
            Err(best)
        }
    });
    match result {
        Ok((restart, state)) => {
            let matrix = ShMatrix::try_from(state.to_qsh()?)?;
            Ok(AnnealOutcome {
                matrix,
                steps: state.step,
                total_steps: u64::from(restart) * budget.max_iterations + state.step,
                restart,
                seed: budget.restart_seed(restart),
            })
        }
        Err(failures) => {
            let best = failures
                .into_iter()
                .min_by_key(|s| s.energy)
                .expect("at least one attempt");
            Err(Error::AnnealExhausted {
                restarts: budget.max_restarts as usize,
                best: Box::new(best),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vectorspace::enumerate_sh_vectors;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sh(s: &str) -> ShVector {
        s.parse().unwrap()
    }

    #[test]
    fn energy_examples() {
        let h = ShMatrix::sylvester(4).unwrap();
        assert_eq!(energy(h.as_qsh()), 0);
        let q = QshMatrix::from_sh_columns(&[sh("++--"), sh("--++"), sh("+-+-")]).unwrap();
        assert_eq!(energy(&q), 8);
        let swapped = QshMatrix::from_sh_columns(&[sh("+-+-"), sh("--++"), sh("++--")]).unwrap();
        assert_eq!(energy(&swapped), 8);
    }

    #[test]
    fn energy_zero_iff_hadamard_for_all_k1_candidates() {
        let vs: Vec<_> = enumerate_sh_vectors(1).unwrap().collect();
        let mut hadamard = 0;
        for a in 0..6 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    let q = QshMatrix::from_sh_columns(&[vs[a], vs[b], vs[c]]).unwrap();
                    assert_eq!(energy(&q) == 0, q.is_hadamard());
                    assert_eq!(energy(&q) % 2, 0);
                    hadamard += usize::from(q.is_hadamard());
                }
            }
        }
        assert_eq!(hadamard, 8);
    }

    #[test]
    fn energy_zero_iff_hadamard_random_candidates() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 2..=3 {
            for _ in 0..200 {
                let s = AnnealerState::random(k, &mut rng);
                let q = s.to_qsh().unwrap();
                assert_eq!(energy(&q), s.energy);
                assert_eq!(energy(&q) == 0, q.is_hadamard());
            }
        }
    }

    #[test]
    fn incremental_energy_matches_recomputation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in [1, 2, 3, 5] {
            let schedule = ThresholdSchedule::linear(2_000);
            let mut s = AnnealerState::random(k, &mut rng);
            for _ in 0..2_000 {
                osa_step(&mut s, &schedule, AcceptanceRule::Threshold, &mut rng);
                assert_eq!(s.energy, s.recompute_energy());
                assert!(s.columns().iter().all(|c| c.as_signs().is_balanced()));
            }
        }
    }

    #[test]
    fn downhill_move_to_zero_is_accepted() {
        // The third column is the negation of the first.
        let mut s = AnnealerState::new(vec![sh("+-+-"), sh("++--"), sh("+-+-").negated()]).unwrap();
        assert!(s.energy > 0);
        let schedule = ThresholdSchedule::linear(100);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        while s.energy > 0 {
            let before = s.energy;
            let out = osa_step(&mut s, &schedule, AcceptanceRule::Threshold, &mut rng);
            if out.delta < 0 {
                assert!(out.accepted);
                assert!(s.energy < before);
            }
            assert!(s.step < 10_000);
        }
        assert!(s.to_qsh().unwrap().is_hadamard());
    }

    #[test]
    fn uphill_moves_rejected_at_threshold_one() {
        let schedule = ThresholdSchedule::new(1.0, 1.0, ScheduleShape::Linear, 10).unwrap();
        let h = ShMatrix::sylvester(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut s = AnnealerState::new(h.sh_columns().collect()).unwrap();
        for _ in 0..1_000 {
            let out = osa_step(&mut s, &schedule, AcceptanceRule::Threshold, &mut rng);
            assert!(out.delta > 0);
            assert!(!out.accepted);
            assert_eq!(s.energy, 0);
        }
    }

    #[test]
    fn uphill_acceptance_frequency_at_half() {
        // Every move away from a Hadamard matrix is uphill; with P = 0.5 the
        // acceptance count over 10⁴ trials is Binomial(10⁴, 0.5): σ = 50.
        let schedule = ThresholdSchedule::new(0.5, 0.5, ScheduleShape::Linear, 10).unwrap();
        let h = ShMatrix::sylvester(3).unwrap();
        let base = AnnealerState::new(h.sh_columns().collect()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let trials = 10_000;
        let mut accepted = 0;
        for _ in 0..trials {
            let mut s = base.clone();
            let out = osa_step(&mut s, &schedule, AcceptanceRule::Threshold, &mut rng);
            assert!(out.delta > 0);
            accepted += usize::from(out.accepted);
        }
        assert!(
            (accepted as f64 - 5_000.0).abs() < 150.0,
            "accepted {accepted}"
        );
    }

    #[test]
    fn schedule_shapes() {
        let lin = ThresholdSchedule::linear(100);
        assert_eq!(lin.threshold(0), 0.5);
        assert_eq!(lin.threshold(50), 0.75);
        assert_eq!(lin.threshold(100), 1.0);
        assert_eq!(lin.threshold(1_000), 1.0);
        let geo = ThresholdSchedule::new(0.25, 1.0, ScheduleShape::Geometric, 2).unwrap();
        assert!((geo.threshold(1) - 0.5).abs() < 1e-12);
        assert!(ThresholdSchedule::new(0.8, 0.5, ScheduleShape::Linear, 1).is_err());
        assert!(ThresholdSchedule::new(0.0, 0.5, ScheduleShape::Geometric, 1).is_err());
        let parsed: ThresholdSchedule = "linear:0.5:1.0".parse().unwrap();
        assert_eq!(parsed.to_string(), "linear:0.5:1");
        assert!("cubic:0.5:1".parse::<ThresholdSchedule>().is_err());
    }

    #[test]
    fn construct_small_orders() {
        let schedule = ThresholdSchedule::linear(1);
        let out = osa_construct(
            1,
            &schedule,
            AcceptanceRule::Threshold,
            &SearchBudget::new(1_000, 3, 0).unwrap(),
        )
        .unwrap();
        assert!(out.matrix.as_qsh().is_hadamard());
        let out = osa_construct(
            2,
            &schedule,
            AcceptanceRule::Threshold,
            &SearchBudget::new(100_000, 10, 0).unwrap(),
        )
        .unwrap();
        assert!(out.matrix.as_qsh().is_hadamard());
        let again = osa_construct(
            2,
            &schedule,
            AcceptanceRule::Threshold,
            &SearchBudget::new(100_000, 10, 0).unwrap(),
        )
        .unwrap();
        assert_eq!(out.matrix, again.matrix);
        assert_eq!(out.steps, again.steps);
    }

    #[test]
    fn metropolis_mode_constructs() {
        let schedule = ThresholdSchedule::linear(1);
        let rule = AcceptanceRule::Metropolis {
            temperature_scale: 8.0,
        };
        let out = osa_construct(
            2,
            &schedule,
            rule,
            &SearchBudget::new(200_000, 10, 4).unwrap(),
        )
        .unwrap();
        assert!(out.matrix.into_sign_matrix().is_hadamard());
    }

    #[test]
    fn exhausted_budget_reports_best_state() {
        let schedule = ThresholdSchedule::linear(1);
        let err = osa_construct(
            4,
            &schedule,
            AcceptanceRule::Threshold,
            &SearchBudget::new(5, 2, 0).unwrap(),
        )
        .unwrap_err();
        match err {
            Error::AnnealExhausted { best, .. } => assert_eq!(best.energy, best.recompute_energy()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
