//! The per-player accuracy tests `Test` and `WeakTest`.

use rayon::prelude::*;

use super::TestMode;
use crate::error::{check_epsilon, check_unit_open, Result};
use crate::instance::Instance;
use crate::learners::{ceil_count, SampleSizeProfile};
use crate::model::{mistakes, DrawPhase, Hypothesis, SampleLedger};
use crate::rng::{stream, Phase, StreamKey};

/// How many draws each player contributes and the error threshold a player
/// must meet to be kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestPlan {
    pub draws_per_player: u64,
    pub threshold: f64,
}

/// `Test` at round `t`: `ceil((432/eps) ln(4k(t+1)^2/delta))` draws, threshold
/// `eps/6`. The tuned profile uses `ceil(30/eps)` draws at threshold `eps/2`.
pub fn test_plan(
    k: usize,
    t: usize,
    epsilon: f64,
    delta: f64,
    profile: SampleSizeProfile,
) -> Result<TestPlan> {
    check_epsilon(epsilon)?;
    check_unit_open("delta", delta)?;
    if profile.is_tuned() {
        return Ok(tuned_plan(epsilon));
    }
    let t1 = (t + 1) as f64;
    let draws = ceil_count(432.0 / epsilon * (4.0 * k as f64 * t1 * t1 / delta).ln());
    Ok(TestPlan {
        draws_per_player: draws,
        threshold: epsilon / 6.0,
    })
}

/// `WeakTest`: `ceil((432/eps) ln 100)` draws, threshold `eps/6`; tuned as
/// for [`test_plan`].
pub fn weak_test_plan(epsilon: f64, profile: SampleSizeProfile) -> Result<TestPlan> {
    check_epsilon(epsilon)?;
    if profile.is_tuned() {
        return Ok(tuned_plan(epsilon));
    }
    Ok(TestPlan {
        draws_per_player: ceil_count(432.0 / epsilon * 100f64.ln()),
        threshold: epsilon / 6.0,
    })
}

fn tuned_plan(epsilon: f64) -> TestPlan {
    TestPlan {
        draws_per_player: ceil_count(30.0 / epsilon),
        threshold: epsilon / 2.0,
    }
}

/// Runs an accuracy test and returns, per player, whether it is kept.
///
/// Sampled mode draws `plan.draws_per_player` fresh examples from each
/// player on its own stream `(seed, Test, player, round)` and charges them to
/// `ledger`. Exact mode compares exact errors and draws nothing.
pub fn run_test(
    g: &Hypothesis,
    instance: &Instance,
    plan: TestPlan,
    mode: TestMode,
    seed: u64,
    round: usize,
    ledger: &mut SampleLedger,
) -> Result<Vec<bool>> {
    match mode {
        TestMode::Exact => Ok(instance
            .exact_errors(g)?
            .into_iter()
            .map(|e| e <= plan.threshold)
            .collect()),
        TestMode::Sampled => {
            let errors: Vec<f64> = instance
                .players
                .par_iter()
                .enumerate()
                .map(|(i, oracle)| {
                    let mut rng = stream(seed, StreamKey::new(Phase::Test, i as u32, round as u64));
                    let drawn = (0..plan.draws_per_player).map(|_| oracle.draw(&mut rng));
                    mistakes(g, drawn) as f64 / plan.draws_per_player as f64
                })
                .collect();
            for i in 0..instance.k() {
                ledger.charge(round, i, DrawPhase::Test, plan.draws_per_player);
            }
            Ok(errors.into_iter().map(|e| e <= plan.threshold).collect())
        }
    }
}

/// `Test(g, k, t, eps, delta)`; returns the kept set `Z` as player indices.
#[allow(clippy::too_many_arguments)]
pub fn test(
    g: &Hypothesis,
    instance: &Instance,
    t: usize,
    epsilon: f64,
    delta: f64,
    mode: TestMode,
    profile: SampleSizeProfile,
    seed: u64,
    ledger: &mut SampleLedger,
) -> Result<Vec<usize>> {
    let plan = test_plan(instance.k(), t, epsilon, delta, profile)?;
    run_test(g, instance, plan, mode, seed, t, ledger).map(|kept| included(&kept))
}

/// `WeakTest(g, k, eps)`; returns the kept set `Z` as player indices.
#[allow(clippy::too_many_arguments)]
pub fn weak_test(
    g: &Hypothesis,
    instance: &Instance,
    t: usize,
    epsilon: f64,
    mode: TestMode,
    profile: SampleSizeProfile,
    seed: u64,
    ledger: &mut SampleLedger,
) -> Result<Vec<usize>> {
    let plan = weak_test_plan(epsilon, profile)?;
    run_test(g, instance, plan, mode, seed, t, ledger).map(|kept| included(&kept))
}

pub fn included(kept: &[bool]) -> Vec<usize> {
    kept.iter()
        .enumerate()
        .filter(|(_, &k)| k)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_sizes() {
        let theory = SampleSizeProfile::default();
        // ceil(4320 ln 400) = ceil(25883.1)
        assert_eq!(
            test_plan(10, 0, 0.1, 0.1, theory).unwrap().draws_per_player,
            25884
        );
        // ceil(4320 ln 100) = ceil(19894.3)
        assert_eq!(weak_test_plan(0.1, theory).unwrap().draws_per_player, 19895);
        assert_eq!(weak_test_plan(0.1, theory).unwrap().threshold, 0.1 / 6.0);
        let tuned = weak_test_plan(0.2, SampleSizeProfile::tuned()).unwrap();
        assert_eq!(tuned.draws_per_player, 150);
        assert_eq!(tuned.threshold, 0.1);
    }

    #[test]
    fn later_rounds_test_more() {
        let theory = SampleSizeProfile::default();
        let a = test_plan(4, 0, 0.2, 0.1, theory).unwrap().draws_per_player;
        let b = test_plan(4, 9, 0.2, 0.1, theory).unwrap().draws_per_player;
        assert!(b > a);
    }
}
