//! Collaborative PAC learning with multiplicative weights.
//!
//! `k` players each hold a distribution labeled by a common target. The
//! algorithms in [`mw`] learn one hypothesis that is accurate on every
//! player's distribution at once, by repeatedly training a black-box learner
//! on a weighted mixture of the players and doubling the weight of each
//! player the current hypothesis fails. The final answer is the plurality
//! vote of all round hypotheses.
//!
//! Modules:
//! - [`model`]: hypotheses, distributions, weights, sample accounting.
//! - [`learners`]: sample-size formulas, ERM over finite classes, decision trees.
//! - [`mw`]: `BasicMW`, `MWeights`, their accuracy tests, and the naive baseline.
//! - [`instances`]: lower-bound hard instances and the instance file format.
//! - [`harness`]: datasets, partitions, budget search and result CSVs.

pub mod error;
pub mod harness;
pub mod instance;
pub mod instances;
pub mod learners;
pub mod model;
pub mod mw;
pub mod rng;

pub use error::{Error, Result};
pub use instance::Instance;
pub use learners::{LearnerSpec, SampleSizeProfile};
pub use model::{
    Hypothesis, Label, LabeledExample, Point, PointMassDistribution, SampleLedger, SampleOracle,
};
