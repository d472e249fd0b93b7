//! The shared round loop behind `BasicMW` and `MWeights`.

use super::accuracy::{run_test, test_plan, weak_test_plan, TestPlan};
use super::rounds::{basic_round_count, mw_round_count, tuned_round_count};
use super::{RunConfig, RunResult, TestMode};
use crate::error::Result;
use crate::instance::Instance;
use crate::learners::{learn_from_draws, sample_size, SampleSizeProfile};
use crate::model::{mixture_sampler, Hypothesis, RoundDiagnostics, SampleLedger, WeightState};
use crate::rng::{stream, Phase, StreamKey, ALL_PLAYERS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Variant {
    Basic,
    Weak,
}

/// `BasicMW`: `ceil(10 ln k)` rounds, learner at `(eps/120, delta/(4(t+1)^2))`,
/// `Test` after every round.
pub fn basic_mw(instance: &Instance, config: &RunConfig) -> Result<RunResult> {
    run_rounds(instance, config, Variant::Basic)
}

/// `MWeights`: `ceil(2000 ln(k/delta))` rounds, learner at `(eps/120, 1/100)`,
/// `WeakTest` after every round.
pub fn mweights(instance: &Instance, config: &RunConfig) -> Result<RunResult> {
    run_rounds(instance, config, Variant::Weak)
}

fn round_count(k: usize, config: &RunConfig, variant: Variant) -> Result<usize> {
    if let Some(t) = config.rounds_override {
        return Ok(t);
    }
    if k == 1 {
        return Ok(1);
    }
    Ok(match (config.profile, variant) {
        (SampleSizeProfile::Tuned { log_base }, _) => tuned_round_count(k, log_base),
        (_, Variant::Basic) => basic_round_count(k),
        (_, Variant::Weak) => mw_round_count(k, config.delta)?,
    })
}

/// Learning draws for round `t`. The tuned profile learns at the target
/// `(eps, delta)` directly.
fn learn_draws(config: &RunConfig, variant: Variant, t: usize) -> Result<u64> {
    let (eps, delta) = match (config.profile.is_tuned(), variant) {
        (true, _) => (config.epsilon, config.delta),
        (false, Variant::Basic) => {
            let t1 = (t + 1) as f64;
            (config.epsilon / 120.0, config.delta / (4.0 * t1 * t1))
        }
        (false, Variant::Weak) => (config.epsilon / 120.0, 0.01),
    };
    sample_size(eps, delta, config.d, config.profile)
}

fn plan(instance: &Instance, config: &RunConfig, variant: Variant, t: usize) -> Result<TestPlan> {
    match variant {
        Variant::Basic => test_plan(
            instance.k(),
            t,
            config.epsilon,
            config.delta,
            config.profile,
        ),
        Variant::Weak => weak_test_plan(config.epsilon, config.profile),
    }
}

fn run_rounds(instance: &Instance, config: &RunConfig, variant: Variant) -> Result<RunResult> {
    config.validate()?;
    let k = instance.k();
    let eps = config.epsilon;
    let rounds = round_count(k, config, variant)?;
    let exact_available = instance.has_exact_errors();

    let mut weights = WeightState::new(k);
    let mut ledger = SampleLedger::new(k);
    let mut diagnostics = Vec::with_capacity(rounds);
    let mut hypotheses = Vec::with_capacity(rounds);

    for t in 0..rounds {
        let round = ledger.begin_round();
        debug_assert_eq!(round, t);
        let p = weights.probabilities();
        let ln_total_weight = weights.ln_total();

        let mixture = mixture_sampler(&p, &instance.players)?;
        let mut rng = stream(
            config.seed,
            StreamKey::new(Phase::Learn, ALL_PLAYERS, t as u64),
        );
        let draws = learn_draws(config, variant, t)?;
        let g = learn_from_draws(&mixture, draws, &instance.learner, &mut rng, &mut ledger, t)?;

        let plan = plan(instance, config, variant, t)?;
        let errors = if exact_available {
            Some(instance.exact_errors(&g)?)
        } else {
            None
        };
        let kept = match (config.test_mode, &errors) {
            (TestMode::Exact, Some(errs)) => errs.iter().map(|&e| e <= plan.threshold).collect(),
            _ => run_test(
                &g,
                instance,
                plan,
                config.test_mode,
                config.seed,
                t,
                &mut ledger,
            )?,
        };

        let growth = weights.update(&kept);
        let (chi, psi, markov_mass) = match &errors {
            Some(errs) => {
                let mixture_error: f64 = p.iter().zip(errs).map(|(pi, e)| pi * e).sum();
                let psi = errs
                    .iter()
                    .zip(&kept)
                    .map(|(&e, &keep)| (keep && e > eps / 4.0) || (!keep && e <= eps / 12.0))
                    .collect();
                let markov: f64 = p
                    .iter()
                    .zip(errs)
                    .filter(|(_, &e)| e > eps / 12.0)
                    .fold(0.0, |acc, (pi, _)| acc + pi);
                (Some(mixture_error > eps / 120.0), Some(psi), Some(markov))
            }
            None => (None, None, None),
        };
        diagnostics.push(RoundDiagnostics {
            round: t,
            ln_total_weight,
            growth,
            q: growth.ln(),
            probabilities: p,
            kept,
            player_errors: errors,
            chi,
            psi,
            markov_mass,
        });
        hypotheses.push(g);
    }

    let hypothesis = match instance.domain_size {
        Some(n) => Hypothesis::plurality_cached(hypotheses, n),
        None => Hypothesis::plurality(hypotheses),
    };
    let player_errors = if exact_available {
        Some(instance.exact_errors(&hypothesis)?)
    } else {
        None
    };
    Ok(RunResult {
        hypothesis,
        ledger,
        diagnostics,
        weights: Some(weights),
        player_errors,
    })
}
