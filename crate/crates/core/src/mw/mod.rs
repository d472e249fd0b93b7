//! Collaborative learners: `BasicMW`, `MWeights` and the naive baseline.

mod accuracy;
mod driver;
mod naive;
mod rounds;

pub use accuracy::{included, run_test, test, test_plan, weak_test, weak_test_plan, TestPlan};
pub use driver::{basic_mw, mweights};
pub use naive::naive;
pub use rounds::{basic_round_count, mw_round_count, tuned_round_count};

use std::fmt;
use std::str::FromStr;

use crate::error::{check_epsilon, check_unit_open, Error, Result};
use crate::instance::Instance;
use crate::learners::{sample_size, SampleSizeProfile};
use crate::model::{Hypothesis, RoundDiagnostics, SampleLedger, WeightState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Naive,
    BasicMw,
    MWeights,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Naive, Algorithm::BasicMw, Algorithm::MWeights];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::BasicMw => "basicmw",
            Algorithm::MWeights => "mweights",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| {
                Error::Precondition(format!("unknown algorithm `{s}` (naive|basicmw|mweights)"))
            })
    }
}

/// How the accuracy tests decide membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TestMode {
    /// Draw fresh samples from each player.
    #[default]
    Sampled,
    /// Compare exact distribution errors; draws nothing.
    Exact,
}

impl FromStr for TestMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sampled" => Ok(TestMode::Sampled),
            "exact" => Ok(TestMode::Exact),
            other => Err(Error::Precondition(format!(
                "unknown test mode `{other}` (sampled|exact)"
            ))),
        }
    }
}

impl fmt::Display for TestMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestMode::Sampled => "sampled",
            TestMode::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub epsilon: f64,
    pub delta: f64,
    /// VC-dimension parameter fed to the sample-size formula.
    pub d: u64,
    pub profile: SampleSizeProfile,
    pub rounds_override: Option<usize>,
    pub test_mode: TestMode,
    pub algorithm: Algorithm,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, epsilon: f64, delta: f64, d: u64) -> Self {
        RunConfig {
            epsilon,
            delta,
            d,
            profile: SampleSizeProfile::default(),
            rounds_override: None,
            test_mode: TestMode::Sampled,
            algorithm,
            seed: 0,
        }
    }

    pub fn with_profile(mut self, profile: SampleSizeProfile) -> Self {
        self.profile = profile;
        self
    }

    pub fn with_test_mode(mut self, mode: TestMode) -> Self {
        self.test_mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_rounds(mut self, rounds: usize) -> Self {
        self.rounds_override = Some(rounds);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        check_unit_open("delta", self.delta)?;
        if self.d == 0 {
            return Err(Error::Precondition("d must be positive".into()));
        }
        if self.rounds_override == Some(0) {
            return Err(Error::Precondition("at least one round is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub hypothesis: Hypothesis,
    pub ledger: SampleLedger,
    /// One entry per executed round.
    pub diagnostics: Vec<RoundDiagnostics>,
    /// Final weights; `None` for the naive baseline.
    pub weights: Option<WeightState>,
    /// `err_{D_i}(g)` of the returned hypothesis, when computable.
    pub player_errors: Option<Vec<f64>>,
}

/// Plurality of `gs` (children kept in order; ties to the smallest label).
pub fn plurality(gs: Vec<Hypothesis>) -> Result<Hypothesis> {
    if gs.is_empty() {
        return Err(Error::EmptyPlurality);
    }
    Ok(Hypothesis::plurality(gs))
}

/// Sample count the naive baseline receives for a configuration.
pub fn naive_budget(config: &RunConfig) -> Result<u64> {
    sample_size(config.epsilon, config.delta, config.d, config.profile)
}

/// Runs `config.algorithm` on `instance`.
pub fn run(instance: &Instance, config: &RunConfig) -> Result<RunResult> {
    config.validate()?;
    match config.algorithm {
        Algorithm::Naive => naive(instance, naive_budget(config)?, config.seed),
        Algorithm::BasicMw => basic_mw(instance, config),
        Algorithm::MWeights => mweights(instance, config),
    }
}
