use super::RunResult;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::learners::learn_from_draws;
use crate::model::{mixture_sampler, SampleLedger};
use crate::rng::{stream, Phase, StreamKey, ALL_PLAYERS};

/// Trains one base learner on `budget` draws from the uniform mixture of all
/// players.
pub fn naive(instance: &Instance, budget: u64, seed: u64) -> Result<RunResult> {
    if budget == 0 {
        return Err(Error::Precondition(
            "naive needs a budget of at least one draw".into(),
        ));
    }
    let k = instance.k();
    let p = vec![1.0 / k as f64; k];
    let mixture = mixture_sampler(&p, &instance.players)?;
    let mut ledger = SampleLedger::new(k);
    let round = ledger.begin_round();
    let mut rng = stream(seed, StreamKey::new(Phase::Learn, ALL_PLAYERS, 0));
    let hypothesis = learn_from_draws(
        &mixture,
        budget,
        &instance.learner,
        &mut rng,
        &mut ledger,
        round,
    )?;
    let player_errors = if instance.has_exact_errors() {
        Some(instance.exact_errors(&hypothesis)?)
    } else {
        None
    };
    Ok(RunResult {
        hypothesis,
        ledger,
        diagnostics: Vec::new(),
        weights: None,
        player_errors,
    })
}
