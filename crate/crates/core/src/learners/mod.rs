//! Single-distribution PAC learners used as black boxes by the collaborative
//! algorithms.

mod finite_class;
mod sample_size;
mod tree;

pub use finite_class::{erm_learn, ClassKind, FiniteHypothesisClass};
pub use sample_size::{ceil_count, sample_size, LogBase, SampleSizeProfile};
pub use tree::{tree_learn, TreeParams};

use rand::Rng;

use crate::error::Result;
use crate::model::{DrawPhase, Hypothesis, LabeledExample, SampleLedger, Sampler};

/// Which base learner fits a sample.
#[derive(Debug, Clone, PartialEq)]
pub enum LearnerSpec {
    Erm(FiniteHypothesisClass),
    Tree(TreeParams),
    /// Ignores the sample and returns the stored hypothesis. A stand-in for
    /// a perfect learner in tests.
    Oracle(Hypothesis),
}

impl LearnerSpec {
    pub fn fit(&self, sample: &[LabeledExample]) -> Result<Hypothesis> {
        match self {
            LearnerSpec::Erm(class) => erm_learn(sample, class),
            LearnerSpec::Tree(p) => tree_learn(sample, p.max_depth, p.min_leaf),
            LearnerSpec::Oracle(g) => Ok(g.clone()),
        }
    }
}

/// Draws `draws` examples, charging each to its player in `round`, and fits
/// the learner on them.
pub fn learn_from_draws<S: Sampler, R: Rng + ?Sized>(
    sampler: &S,
    draws: u64,
    learner: &LearnerSpec,
    rng: &mut R,
    ledger: &mut SampleLedger,
    round: usize,
) -> Result<Hypothesis> {
    let mut sample = Vec::with_capacity(draws as usize);
    for _ in 0..draws {
        let (player, ex) = sampler.draw(rng);
        ledger.charge(round, player, DrawPhase::Learn, 1);
        sample.push(ex.clone());
    }
    learner.fit(&sample)
}

/// `(eps, delta)`-PAC learner: draws `sample_size(eps, delta, d, profile)`
/// examples and fits the learner on them.
#[allow(clippy::too_many_arguments)]
pub fn pac_learn<S: Sampler, R: Rng + ?Sized>(
    sampler: &S,
    epsilon: f64,
    delta: f64,
    d: u64,
    learner: &LearnerSpec,
    profile: SampleSizeProfile,
    rng: &mut R,
    ledger: &mut SampleLedger,
    round: usize,
) -> Result<Hypothesis> {
    let n = sample_size(epsilon, delta, d, profile)?;
    learn_from_draws(sampler, n, learner, rng, ledger, round)
}
