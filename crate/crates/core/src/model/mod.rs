//! Domain types shared by the learners and the collaborative algorithms.

mod diagnostics;
mod distribution;
mod hypothesis;
mod ledger;
mod point;
mod risk;
mod weights;

pub use diagnostics::RoundDiagnostics;
pub use distribution::{
    mixture_sampler, EmpiricalDistribution, Mixture, PlayerSampler, PointMassDistribution,
    SampleOracle, Sampler, MASS_TOLERANCE,
};
pub use hypothesis::{Hypothesis, MemberTable, PluralityVote, Stump, TreeNode};
pub use ledger::{balance_ratio, DrawPhase, RoundCounts, SampleLedger};
pub use point::{Label, LabeledExample, Point};
pub(crate) use risk::mistakes;
pub use risk::{empirical_error, exact_error};
pub use weights::{normalize_weights, WeightState};
