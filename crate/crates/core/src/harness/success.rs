use crate::error::Result;
use crate::instance::Instance;
use crate::model::{mistakes, Hypothesis};
use crate::rng::{stream, Phase, StreamKey};

/// Draws per player when a player's error must be estimated.
pub const HOLDOUT_DRAWS: u64 = 10_000;

/// `err_{D_i}(g)` for every player: exact for point-mass players, otherwise
/// the error on [`HOLDOUT_DRAWS`] fresh draws from stream `(seed, Holdout, i)`.
/// Holdout draws are not charged to any ledger.
pub fn player_errors(instance: &Instance, g: &Hypothesis, seed: u64) -> Vec<f64> {
    instance
        .players
        .iter()
        .enumerate()
        .map(|(i, oracle)| match oracle.as_point_mass() {
            Some(d) => crate::model::exact_error(g, d),
            None => {
                let mut rng = stream(seed, StreamKey::new(Phase::Holdout, i as u32, 0));
                let drawn = (0..HOLDOUT_DRAWS).map(|_| oracle.draw(&mut rng));
                mistakes(g, drawn) as f64 / HOLDOUT_DRAWS as f64
            }
        })
        .collect()
}

/// True iff every player's error is at most `epsilon`.
pub fn evaluate_success(
    instance: &Instance,
    g: &Hypothesis,
    epsilon: f64,
    seed: u64,
) -> Result<bool> {
    Ok(player_errors(instance, g, seed)
        .into_iter()
        .all(|e| e <= epsilon))
}
