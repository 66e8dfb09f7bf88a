use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shmat::analysis::{
    count_report, degenerate, expected_h_log2, log2_big, log2_bounds, log2_ratio, p_h_given_q_log2,
    p_perp, seminormalize, BoundForm,
};
use shmat::search::{energy, osa_step, AnnealerState};
use shmat::vectorspace::{canonical_permutation, orthogonal_set, osh_vector, random_sh_vector};
use shmat::{
    inner_product, osa_construct, rvs_construct, AcceptanceRule, Permutation, SearchBudget,
    ShMatrix, SignMatrix, ThresholdSchedule,
};

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|s| Permutation::from_source_map(s).unwrap())
}

fn sh_case(max_k: usize) -> impl Strategy<Value = (usize, u64)> {
    (1..=max_k, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orthogonal_set_is_exact((k, seed) in sh_case(4)) {
        let v = random_sh_vector(k, &mut ChaCha8Rng::seed_from_u64(seed));
        let set = orthogonal_set(&v).unwrap();
        let n_o: u64 = count_report(k).unwrap().n_o.try_into().unwrap();
        prop_assert_eq!(set.len() as u64, n_o);
        prop_assert!(set.iter().all(|w| inner_product(&v, w).unwrap() == 0));
        prop_assert!(set.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn canonical_permutation_maps_ordered_vector((k, seed) in sh_case(32)) {
        let v = random_sh_vector(k, &mut ChaCha8Rng::seed_from_u64(seed));
        let sigma = canonical_permutation(&v);
        prop_assert_eq!(sigma.apply(&osh_vector(k).unwrap()).unwrap(), v);
    }

    #[test]
    fn permutation_preserves_orthogonality(
        (k, sigma) in (1usize..=8).prop_flat_map(|k| (Just(k), permutation(4 * k))),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_sh_vector(k, &mut rng);
        let b = random_sh_vector(k, &mut rng);
        prop_assert_eq!(
            inner_product(&sigma.apply(&a).unwrap(), &sigma.apply(&b).unwrap()).unwrap(),
            inner_product(&a, &b).unwrap()
        );
    }

    #[test]
    fn annealer_energy_is_even_and_tracks_recomputation(k in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = AnnealerState::random(k, &mut rng);
        let schedule = ThresholdSchedule::linear(500);
        for _ in 0..500 {
            osa_step(&mut state, &schedule, AcceptanceRule::Threshold, &mut rng);
            prop_assert_eq!(state.energy % 2, 0);
            prop_assert_eq!(state.energy, state.recompute_energy());
        }
        let q = state.to_qsh();
        if let Ok(q) = q {
            prop_assert_eq!(energy(&q), state.energy);
            prop_assert_eq!(q.is_hadamard(), state.energy == 0);
        }
    }

    #[test]
    fn seminormalize_undoes_row_negations(seed in any::<u64>(), mask in any::<u16>()) {
        let out = rvs_construct(2, &SearchBudget::new(100_000, 10, seed).unwrap()).unwrap();
        let original = out.matrix.as_sign_matrix().clone();
        let mut m = original.clone();
        for i in 0..8 {
            if mask >> i & 1 == 1 {
                m.negate_row(i);
            }
        }
        let fixed = seminormalize(&m).unwrap();
        prop_assert_eq!(fixed.as_sign_matrix(), &original);
    }

    #[test]
    fn sandwich_holds_for_unsimplified_bounds(k in 1usize..=16) {
        let c = count_report(k).unwrap();
        let b = log2_bounds::<f64>(k, BoundForm::Unsimplified);
        let pairs = [
            (b.n_o, log2_big::<f64>(&c.n_o)),
            (b.n_v, log2_big(&c.n_v)),
            (b.p_perp, log2_ratio(&p_perp(k))),
            (b.p_h_given_q, p_h_given_q_log2(k)),
            (b.n_qu, log2_big(&c.n_qu)),
            (b.expected_h, expected_h_log2(k)),
        ];
        for (i, (bound, exact)) in pairs.into_iter().enumerate() {
            prop_assert!(bound.contains(exact), "quantity {} at k={}: {:?} vs {}", i, k, bound, exact);
        }
    }

    #[test]
    fn text_format_round_trips(seed in any::<u64>(), k in 1usize..=4) {
        let out = rvs_construct(k, &SearchBudget::new(1_000_000, 10, seed).unwrap()).unwrap();
        let text = out.matrix.to_text();
        let back = ShMatrix::try_from(SignMatrix::parse_text(&text).unwrap()).unwrap();
        prop_assert_eq!(back, out.matrix);
    }
}

#[test]
fn stochastic_methods_are_deterministic() {
    for seed in [0, 17, u64::MAX] {
        let b = SearchBudget::new(1_000_000, 8, seed).unwrap();
        let r1 = rvs_construct(4, &b).unwrap();
        let r2 = rvs_construct(4, &b).unwrap();
        assert_eq!((r1.matrix, r1.trace), (r2.matrix, r2.trace));
        let s = ThresholdSchedule::linear(b.max_iterations);
        let a1 = osa_construct(2, &s, AcceptanceRule::Threshold, &b).unwrap();
        let a2 = osa_construct(2, &s, AcceptanceRule::Threshold, &b).unwrap();
        assert_eq!(
            (a1.matrix, a1.steps, a1.restart),
            (a2.matrix, a2.steps, a2.restart)
        );
    }
}

#[test]
fn degenerate_sets_are_distinct_and_hadamard() {
    for power in [2, 3] {
        let h = ShMatrix::sylvester(power).unwrap();
        let d = degenerate(&h).unwrap();
        let distinct: std::collections::HashSet<_> = d.iter().collect();
        assert_eq!(distinct.len(), 1 << (h.order() - 1));
        assert!(d.iter().all(|m| m.as_qsh().is_hadamard()));
        assert!(d.iter().all(|m| m.as_sign_matrix().is_seminormalized()));
    }
}
