//! Seeded Monte-Carlo checks of the learning guarantees and the harness.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use colearn_core::harness::{
    budget_search, player_errors, BudgetSearchSpec, InstanceSource, Ladder,
};
use colearn_core::instances::gen_psi;
use colearn_core::learners::{pac_learn, FiniteHypothesisClass};
use colearn_core::model::{exact_error, mixture_sampler, DrawPhase, PlayerSampler};
use colearn_core::mw::{mweights, naive, run, run_test, test_plan, Algorithm, RunConfig, TestMode};
use colearn_core::rng::{stream, Phase, StreamKey};
use colearn_core::{
    Hypothesis, Instance, LabeledExample, LearnerSpec, PointMassDistribution, SampleLedger,
    SampleOracle, SampleSizeProfile,
};

fn uniform_player(n: u32, target: &[u32]) -> SampleOracle {
    SampleOracle::point_mass(
        PointMassDistribution::new(
            (0..n)
                .map(|x| {
                    (
                        LabeledExample::indexed(x, target[x as usize]),
                        1.0 / n as f64,
                    )
                })
                .collect(),
        )
        .unwrap(),
    )
}

#[test]
fn pac_learn_meets_its_contract() {
    let class = FiniteHypothesisClass::all_binary(10, None).unwrap();
    let mut rng = StdRng::seed_from_u64(5);
    let target: Vec<u32> = (0..10).map(|_| rng.random_range(0..2)).collect();
    let player = uniform_player(10, &target);
    let learner = LearnerSpec::Erm(class.clone());
    let mut ok = 0;
    for seed in 0..100 {
        let mut ledger = SampleLedger::new(1);
        ledger.begin_round();
        let mut rng = stream(seed, StreamKey::new(Phase::Learn, 0, 0));
        let g = pac_learn(
            &PlayerSampler {
                player: 0,
                oracle: &player,
            },
            0.2,
            0.1,
            class.vc_dim(),
            &learner,
            SampleSizeProfile::default(),
            &mut rng,
            &mut ledger,
            0,
        )
        .unwrap();
        ok += (exact_error(&g, player.as_point_mass().unwrap()) <= 0.2) as u32;
    }
    assert!(ok >= 90, "{ok}/100");
}

fn disjoint_pair() -> Instance {
    let single = |x: u32, y: u32| {
        SampleOracle::point_mass(
            PointMassDistribution::new(vec![(LabeledExample::indexed(x, y), 1.0)]).unwrap(),
        )
    };
    Instance::new(
        "disjoint",
        vec![single(0, 1), single(1, 0)],
        LearnerSpec::Erm(FiniteHypothesisClass::all_binary(2, None).unwrap()),
    )
    .unwrap()
}

#[test]
fn basic_mw_learns_disjoint_players() {
    let inst = disjoint_pair();
    let mut ok = 0;
    for seed in 0..100 {
        let cfg = RunConfig::new(Algorithm::BasicMw, 0.2, 0.1, 2)
            .with_test_mode(TestMode::Exact)
            .with_seed(seed);
        let errors = run(&inst, &cfg).unwrap().player_errors.unwrap();
        ok += errors.iter().all(|&e| e <= 0.2) as u32;
    }
    assert!(ok >= 90, "{ok}/100");
}

#[test]
fn test_keeps_accurate_and_drops_inaccurate_players() {
    let (eps, delta, t) = (0.1, 0.1, 3);
    let two_point = |base: u32, err: f64| {
        SampleOracle::point_mass(
            PointMassDistribution::new(vec![
                (LabeledExample::indexed(base, 1), err),
                (LabeledExample::indexed(base + 1, 0), 1.0 - err),
            ])
            .unwrap(),
        )
    };
    let inst = Instance::new(
        "levels",
        vec![two_point(0, eps / 12.0), two_point(2, 0.3 * eps)],
        LearnerSpec::Oracle(Hypothesis::constant(0)),
    )
    .unwrap();
    let plan = test_plan(2, t, eps, delta, SampleSizeProfile::default()).unwrap();
    let trials = 300;
    let mut wrong = 0;
    for seed in 0..trials {
        let mut ledger = SampleLedger::new(2);
        for _ in 0..=t {
            ledger.begin_round();
        }
        let kept = run_test(
            &Hypothesis::constant(0),
            &inst,
            plan,
            TestMode::Sampled,
            seed,
            t,
            &mut ledger,
        )
        .unwrap();
        wrong += (kept != [true, false]) as u32;
    }
    let bound = delta / (4.0 * 16.0) + 0.01;
    assert!(wrong as f64 / trials as f64 <= bound, "{wrong}/{trials}");
}

#[test]
fn chi_is_rare_when_the_learner_meets_its_contract() {
    let inst = gen_psi(8, 2, 0.1, 4).unwrap().to_instance();
    let mut fired = 0;
    let mut rounds = 0;
    for seed in 0..4 {
        let cfg = RunConfig::new(Algorithm::MWeights, 0.1, 0.1, 2)
            .with_test_mode(TestMode::Exact)
            .with_rounds(300)
            .with_seed(seed);
        let result = mweights(&inst, &cfg).unwrap();
        for d in &result.diagnostics {
            fired += (d.chi == Some(true)) as u32;
            rounds += 1;
        }
    }
    assert!(
        fired as f64 / rounds as f64 <= 0.01 + 0.01,
        "{fired}/{rounds}"
    );
}

fn theory_draws(eps: f64, delta: f64, d: u64) -> u64 {
    ((d as f64 + (1.0 / delta).ln()) / eps).ceil() as u64
}

#[test]
fn ledger_matches_closed_form_counts() {
    let inst = gen_psi(4, 2, 0.1, 1).unwrap().to_instance();
    let (eps, delta, d, k) = (0.3, 0.15, 2u64, 4u64);
    let rounds = (10.0 * (k as f64).ln()).ceil() as u64;
    let cfg = RunConfig::new(Algorithm::BasicMw, eps, delta, d).with_seed(8);
    let result = run(&inst, &cfg).unwrap();
    let learn: u64 = (0..rounds)
        .map(|t| {
            let t1 = (t + 1) as f64;
            theory_draws(eps / 120.0, delta / (4.0 * t1 * t1), d)
        })
        .sum();
    let test: u64 = (0..rounds)
        .map(|t| {
            let t1 = (t + 1) as f64;
            k * (432.0 / eps * (4.0 * k as f64 * t1 * t1 / delta).ln()).ceil() as u64
        })
        .sum();
    assert_eq!(result.diagnostics.len() as u64, rounds);
    assert_eq!(result.ledger.total_phase(DrawPhase::Learn), learn);
    assert_eq!(result.ledger.total_phase(DrawPhase::Test), test);
    assert_eq!(result.ledger.total(), learn + test);
}

#[test]
fn naive_on_identical_players_matches_single_learning() {
    let class = FiniteHypothesisClass::all_binary(10, None).unwrap();
    let target: Vec<u32> = (0..10).map(|x| x % 2).collect();
    let player = uniform_player(10, &target);
    let inst = Instance::new(
        "copies",
        vec![player.clone(); 4],
        LearnerSpec::Erm(class.clone()),
    )
    .unwrap();
    let learner = LearnerSpec::Erm(class);
    let dist = player.as_point_mass().unwrap();
    let budget = 30;
    let (mut collab, mut single) = (0.0, 0.0);
    for seed in 0..100 {
        let g = naive(&inst, budget, seed).unwrap().hypothesis;
        collab += exact_error(&g, dist);

        let p = [1.0];
        let solo = [player.clone()];
        let mixture = mixture_sampler(&p, &solo).unwrap();
        let mut ledger = SampleLedger::new(1);
        ledger.begin_round();
        let mut rng = stream(seed + 10_000, StreamKey::new(Phase::Learn, 0, 0));
        let g = colearn_core::learners::learn_from_draws(
            &mixture,
            budget,
            &learner,
            &mut rng,
            &mut ledger,
            0,
        )
        .unwrap();
        single += exact_error(&g, dist);
    }
    assert!(
        ((collab - single) / 100.0).abs() <= 0.02,
        "{collab} vs {single}"
    );
}

#[test]
fn holdout_estimates_track_exact_errors() {
    let mut rng = StdRng::seed_from_u64(12);
    let rows: Vec<LabeledExample> = (0..500)
        .map(|x| LabeledExample::indexed(x % 50, rng.random_range(0..2)))
        .collect();
    let g = Hypothesis::member(0, None, (0..50).map(|x| x % 2).collect());
    let exact = rows
        .iter()
        .filter(|r| g.predict(&r.point) != r.label)
        .count() as f64
        / rows.len() as f64;
    let inst = Instance::new(
        "rows",
        vec![SampleOracle::empirical(rows).unwrap()],
        LearnerSpec::Oracle(g.clone()),
    )
    .unwrap();
    let within = (0..200)
        .filter(|&seed| (player_errors(&inst, &g, seed)[0] - exact).abs() <= 0.02)
        .count();
    assert!(within >= 190, "{within}/200");
}

fn psi_source() -> InstanceSource {
    InstanceSource::fixed(gen_psi(8, 2, 0.1, 0).unwrap().to_instance())
}

/// Compared in learning samples: a d-rung buys more draws at smaller
/// epsilon, so rungs alone need not be monotone.
#[test]
fn budgets_shrink_as_epsilon_grows() {
    let spec = BudgetSearchSpec {
        epsilons: vec![0.05, 0.1, 0.15, 0.2, 0.3],
        runs: 50,
        ..Default::default()
    };
    for algo in [Algorithm::Naive, Algorithm::MWeights] {
        let budgets: Vec<f64> = budget_search(&psi_source(), algo, &spec)
            .unwrap()
            .iter()
            .map(|r| r.learning_samples.expect("found"))
            .collect();
        let inversions = budgets.windows(2).filter(|w| w[1] > w[0]).count();
        assert!(inversions <= 1, "{algo}: {budgets:?}");
    }
}

#[test]
fn vacuous_epsilon_stops_at_the_first_rung() {
    let spec = BudgetSearchSpec {
        epsilons: vec![1.0],
        runs: 20,
        ladder: Ladder {
            start: 3,
            ..Ladder::default()
        },
        ..Default::default()
    };
    for algo in [Algorithm::Naive, Algorithm::BasicMw, Algorithm::MWeights] {
        let rows = budget_search(&psi_source(), algo, &spec).unwrap();
        assert_eq!(rows[0].budget, Some(3));
        assert_eq!(rows[0].success_rate, Some(1.0));
    }
}

#[test]
fn naive_needs_a_larger_budget_on_psi() {
    let spec = BudgetSearchSpec::default();
    let budget = |algo| budget_search(&psi_source(), algo, &spec).unwrap()[0].budget;
    let (n, m) = (budget(Algorithm::Naive), budget(Algorithm::MWeights));
    assert!(n.unwrap() > m.unwrap(), "naive {n:?}, mweights {m:?}");
}
