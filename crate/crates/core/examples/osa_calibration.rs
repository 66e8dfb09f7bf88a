//! Annealing success rates at orders 12 and 16 under several schedules and
//! acceptance rules, 10 seeds each, 10⁶ steps × 10 restarts.
//!
//! cargo run --release -p shmat --example osa_calibration

use shmat::search::ScheduleShape;
use shmat::{osa_construct, AcceptanceRule, Error, SearchBudget, ThresholdSchedule};

const STEPS: u64 = 1_000_000;
const RESTARTS: u32 = 10;
const SEEDS: u64 = 10;

fn main() {
    let linear = |a, b| ThresholdSchedule::new(a, b, ScheduleShape::Linear, STEPS).unwrap();
    let configs = [
        (
            "threshold, linear 0.5..1.0",
            linear(0.5, 1.0),
            AcceptanceRule::Threshold,
        ),
        (
            "threshold, geometric 0.5..1.0",
            ThresholdSchedule::new(0.5, 1.0, ScheduleShape::Geometric, STEPS).unwrap(),
            AcceptanceRule::Threshold,
        ),
        (
            "threshold, constant 1.0",
            linear(1.0, 1.0),
            AcceptanceRule::Threshold,
        ),
        (
            "threshold, linear 0.95..1.0",
            linear(0.95, 1.0),
            AcceptanceRule::Threshold,
        ),
        (
            "metropolis scale 8, linear 0.5..1.0",
            linear(0.5, 1.0),
            AcceptanceRule::Metropolis {
                temperature_scale: 8.0,
            },
        ),
    ];
    for order in [12, 16] {
        for (name, schedule, rule) in &configs {
            let mut ok = 0;
            let mut best = Vec::new();
            for seed in 0..SEEDS {
                let budget = SearchBudget::new(STEPS, RESTARTS, seed).unwrap();
                match osa_construct(order / 4, schedule, *rule, &budget) {
                    Ok(_) => ok += 1,
                    Err(Error::AnnealExhausted { best: b, .. }) => best.push(b.energy),
                    Err(e) => panic!("{e}"),
                }
            }
            println!("order {order:2} {name:38} {ok:2}/{SEEDS}  unsolved best energies {best:?}");
        }
    }
}
