//! Property tests for the invariants of the model, learners and algorithms.

use proptest::prelude::*;

use colearn_core::instances::{gen_big_phi, gen_class_dup, gen_phi, gen_psi};
use colearn_core::learners::{erm_learn, sample_size, tree_learn, FiniteHypothesisClass};
use colearn_core::model::{empirical_error, normalize_weights, DrawPhase, WeightState};
use colearn_core::mw::{run, Algorithm, RunConfig, TestMode};
use colearn_core::{Hypothesis, LabeledExample, Point, SampleSizeProfile};

fn indexed_sample(n: u32) -> impl Strategy<Value = Vec<LabeledExample>> {
    prop::collection::vec((0..n, 0..2u32), 1..40).prop_map(|rows| {
        rows.into_iter()
            .map(|(x, y)| LabeledExample::indexed(x, y))
            .collect()
    })
}

proptest! {
    #[test]
    fn normalization_ignores_scale(
        w in prop::collection::vec(0.001f64..1e3, 1..20),
        c in 1e-3f64..1e3,
    ) {
        let p = normalize_weights(&w).unwrap();
        let scaled: Vec<f64> = w.iter().map(|x| x * c).collect();
        let q = normalize_weights(&scaled).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (a, b) in p.iter().zip(&q) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn erm_matches_an_exhaustive_scan(n in 1u32..5, sample in indexed_sample(5)) {
        let sample: Vec<_> = sample
            .into_iter()
            .filter(|e| matches!(e.point, Point::Index(x) if x < n))
            .collect();
        prop_assume!(!sample.is_empty());
        let class = FiniteHypothesisClass::all_binary(n, None).unwrap();
        let g = erm_learn(&sample, &class).unwrap();
        let mut best = f64::INFINITY;
        for bits in 0..(1u32 << n) {
            let table = (0..n).map(|x| (bits >> x) & 1).collect();
            best = best.min(empirical_error(&Hypothesis::member(0, None, table), &sample).unwrap());
        }
        prop_assert_eq!(empirical_error(&g, &sample).unwrap(), best);
    }

    #[test]
    fn plurality_of_one_child_is_the_child(table in prop::collection::vec(0..2u32, 1..16)) {
        let n = table.len() as u32;
        let child = Hypothesis::member(0, None, table);
        let vote = Hypothesis::plurality(vec![child.clone()]);
        let cached = Hypothesis::plurality_cached(vec![child.clone()], n);
        for x in 0..n {
            let p = Point::Index(x);
            prop_assert_eq!(vote.predict(&p), child.predict(&p));
            prop_assert_eq!(cached.predict(&p), child.predict(&p));
        }
    }

    #[test]
    fn trees_respect_max_depth(
        rows in prop::collection::vec((prop::collection::vec(-5.0f64..5.0, 3), 0..2u32), 1..60),
        depth in 1usize..6,
    ) {
        let sample: Vec<_> = rows
            .into_iter()
            .map(|(v, y)| LabeledExample::new(Point::features(v), y))
            .collect();
        let g = tree_learn(&sample, depth, 1).unwrap();
        prop_assert!(g.depth() <= depth);
    }

    #[test]
    fn sample_size_is_monotone(
        eps in 0.01f64..0.9,
        shrink in 0.1f64..1.0,
        delta in 0.01f64..0.9,
        d in 1u64..50,
        tuned in any::<bool>(),
    ) {
        let profile = if tuned { SampleSizeProfile::tuned() } else { SampleSizeProfile::default() };
        let base = sample_size(eps, delta, d, profile).unwrap();
        prop_assert!(sample_size(eps * shrink, delta, d, profile).unwrap() >= base);
        prop_assert!(sample_size(eps, delta * shrink, d, profile).unwrap() >= base);
        prop_assert!(sample_size(eps, delta, d + 1, profile).unwrap() >= base);
    }

    #[test]
    fn generated_masses_sum_to_one(
        d in 1u32..6,
        mult in 2usize..5,
        eps in 0.001f64..0.1,
        seed in any::<u64>(),
    ) {
        let k = d as usize * mult;
        for h in [
            gen_phi(d, eps, seed).unwrap(),
            gen_big_phi(d as usize, d * mult as u32, eps, seed).unwrap(),
            gen_psi(k, d, eps, seed).unwrap(),
            gen_class_dup(k.max(2), d, d + 1, seed).unwrap(),
        ] {
            for p in &h.players {
                let total: f64 = p.support().iter().map(|(_, m)| m).sum();
                prop_assert!((total - 1.0).abs() <= 1e-12);
                prop_assert!(p.support().iter().all(|(_, m)| *m >= 0.0));
            }
        }
    }

    #[test]
    fn weights_track_rejection_counts(
        kept in prop::collection::vec(prop::collection::vec(any::<bool>(), 5), 0..40),
    ) {
        let mut w = WeightState::new(5);
        let mut counts = [0u32; 5];
        for round in &kept {
            let before: f64 = (0..5).map(|i| 2f64.powi(counts[i] as i32)).sum();
            for (c, &k) in counts.iter_mut().zip(round) {
                *c += !k as u32;
            }
            let after: f64 = (0..5).map(|i| 2f64.powi(counts[i] as i32)).sum();
            let growth = w.update(round);
            prop_assert!((growth - after / before).abs() < 1e-12);
        }
        prop_assert_eq!(w.exponents(), &counts[..]);
        let total: f64 = counts.iter().map(|&c| 2f64.powi(c as i32)).sum();
        for (p, &c) in w.probabilities().iter().zip(&counts) {
            prop_assert!((p - 2f64.powi(c as i32) / total).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ledgers_conserve_draws_and_runs_repeat(
        seed in any::<u64>(),
        algo in prop::sample::select(Algorithm::ALL.to_vec()),
        exact in any::<bool>(),
    ) {
        let inst = gen_psi(4, 2, 0.1, seed).unwrap().to_instance();
        let mode = if exact { TestMode::Exact } else { TestMode::Sampled };
        let cfg = RunConfig::new(algo, 0.2, 0.1, 2)
            .with_profile(SampleSizeProfile::tuned())
            .with_test_mode(mode)
            .with_seed(seed);
        let a = run(&inst, &cfg).unwrap();
        let l = &a.ledger;
        prop_assert_eq!(l.total(), l.per_player().iter().sum::<u64>());
        prop_assert_eq!(l.total(), l.total_by_rounds());
        prop_assert_eq!(
            l.total(),
            l.total_phase(DrawPhase::Learn) + l.total_phase(DrawPhase::Test)
        );
        if exact || algo == Algorithm::Naive {
            prop_assert_eq!(l.total_phase(DrawPhase::Test), 0);
        }
        let b = run(&inst, &cfg).unwrap();
        prop_assert_eq!(a.hypothesis, b.hypothesis);
        prop_assert_eq!(&a.ledger, &b.ledger);
        prop_assert_eq!(a.player_errors, b.player_errors);
    }
}
