use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use super::results::ResultRow;
use super::success::player_errors;
use crate::error::{check_epsilon, check_unit_open, Error, Result};
use crate::instance::Instance;
use crate::learners::SampleSizeProfile;
use crate::model::DrawPhase;
use crate::mw::{run, Algorithm, RunConfig, RunResult, TestMode};
use crate::rng::derive_seed;

/// A success-rate target kept as an exact fraction, so `successes / runs >=
/// target` is decided in integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TargetRate {
    num: u64,
    den: u64,
}

impl TargetRate {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num > den {
            return Err(Error::Precondition(format!(
                "target rate {num}/{den} must lie in (0, 1]"
            )));
        }
        Ok(TargetRate { num, den })
    }

    pub fn met(&self, successes: u64, runs: u64) -> bool {
        successes as u128 * self.den as u128 >= self.num as u128 * runs as u128
    }

    /// Fewest successes out of `runs` that meet the target.
    pub fn required(&self, runs: u64) -> u64 {
        (self.num as u128 * runs as u128).div_ceil(self.den as u128) as u64
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Default for TargetRate {
    fn default() -> Self {
        TargetRate { num: 9, den: 10 }
    }
}

impl fmt::Display for TargetRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for TargetRate {
    type Err = Error;

    /// Accepts a decimal such as `0.9` or a fraction such as `9/10`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Precondition(format!("cannot parse target rate `{s}`"));
        if let Some((n, d)) = s.split_once('/') {
            return TargetRate::new(
                n.trim().parse().map_err(|_| bad())?,
                d.trim().parse().map_err(|_| bad())?,
            );
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|x| x.checked_add(frac))
            .ok_or_else(bad)?;
        let g = gcd(num, den);
        TargetRate::new(num / g.max(1), den / g.max(1))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Geometric ladder of `d` values: `round(start * step^j)` up to `max`,
/// duplicates removed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ladder {
    pub start: u64,
    pub step: f64,
    pub max: u64,
}

impl Default for Ladder {
    fn default() -> Self {
        Ladder {
            start: 1,
            step: 1.25,
            max: 1 << 20,
        }
    }
}

impl Ladder {
    pub fn rungs(&self) -> Result<Vec<u64>> {
        if self.start == 0 || self.step <= 1.0 || !self.step.is_finite() || self.max < self.start {
            return Err(Error::Precondition(format!(
                "invalid budget ladder {self:?}"
            )));
        }
        let mut out: Vec<u64> = Vec::new();
        let mut x = self.start as f64;
        while x.round() <= self.max as f64 {
            let d = x.round() as u64;
            if out.last() != Some(&d) {
                out.push(d);
            }
            x *= self.step;
        }
        Ok(out)
    }
}

/// How the configured `delta` value is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaReading {
    /// The value is the failure probability itself.
    #[default]
    Literal,
    /// The value is a confidence level; `delta = 1 - value`.
    Confidence,
}

impl FromStr for DeltaReading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "literal" => Ok(DeltaReading::Literal),
            "confidence" => Ok(DeltaReading::Confidence),
            other => Err(Error::Precondition(format!(
                "unknown delta reading `{other}` (literal|confidence)"
            ))),
        }
    }
}

pub fn resolve_delta(value: f64, reading: DeltaReading) -> Result<f64> {
    let delta = match reading {
        DeltaReading::Literal => value,
        DeltaReading::Confidence => 1.0 - value,
    };
    check_unit_open("delta", delta)?;
    Ok(delta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetSearchSpec {
    pub epsilons: Vec<f64>,
    pub runs: usize,
    pub target: TargetRate,
    pub ladder: Ladder,
    /// Failure probability handed to the algorithms.
    pub delta: f64,
    pub profile: SampleSizeProfile,
    pub test_mode: TestMode,
    pub rounds_override: Option<usize>,
    pub seed: u64,
}

impl Default for BudgetSearchSpec {
    fn default() -> Self {
        BudgetSearchSpec {
            epsilons: vec![0.1],
            runs: 100,
            target: TargetRate::default(),
            ladder: Ladder::default(),
            delta: 0.9,
            profile: SampleSizeProfile::tuned(),
            test_mode: TestMode::Sampled,
            rounds_override: None,
            seed: 0,
        }
    }
}

impl BudgetSearchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Precondition("runs must be at least 1".into()));
        }
        if self.epsilons.is_empty() {
            return Err(Error::Precondition("the epsilon grid is empty".into()));
        }
        for &e in &self.epsilons {
            check_epsilon(e)?;
        }
        check_unit_open("delta", self.delta)?;
        self.ladder.rungs().map(|_| ())
    }

    fn config(&self, algorithm: Algorithm, epsilon: f64, d: u64, seed: u64) -> RunConfig {
        RunConfig {
            epsilon,
            delta: self.delta,
            d,
            profile: self.profile,
            rounds_override: self.rounds_override,
            test_mode: self.test_mode,
            algorithm,
            seed,
        }
    }
}

type MakeInstance = dyn Fn(u64) -> Result<Instance> + Send + Sync;

/// Where each trial's instance comes from.
#[derive(Clone)]
pub enum InstanceSource {
    /// Every trial runs on the same instance.
    Fixed(Arc<Instance>),
    /// Each trial draws a fresh instance from its seed.
    Generated { id: String, make: Arc<MakeInstance> },
}

impl fmt::Debug for InstanceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceSource::Fixed(i) => write!(f, "Fixed({})", i.id),
            InstanceSource::Generated { id, .. } => write!(f, "Generated({id})"),
        }
    }
}

impl InstanceSource {
    pub fn fixed(instance: Instance) -> Self {
        InstanceSource::Fixed(Arc::new(instance))
    }

    pub fn generated(
        id: impl Into<String>,
        make: impl Fn(u64) -> Result<Instance> + Send + Sync + 'static,
    ) -> Self {
        InstanceSource::Generated {
            id: id.into(),
            make: Arc::new(make),
        }
    }

    pub fn id(&self) -> &str {
        match self {
            InstanceSource::Fixed(i) => &i.id,
            InstanceSource::Generated { id, .. } => id,
        }
    }

    /// The instance trial seed `seed` runs on.
    pub fn instance(&self, seed: u64) -> Result<Arc<Instance>> {
        match self {
            InstanceSource::Fixed(i) => Ok(Arc::clone(i)),
            InstanceSource::Generated { make, .. } => make(seed).map(Arc::new),
        }
    }
}

/// What one seeded trial cost and whether it met the accuracy target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub success: bool,
    pub max_error: f64,
    pub learning_samples: u64,
    pub test_samples: u64,
    pub balance_ratio: f64,
}

/// Trial `j` itself: the instance is drawn from `derive_seed(seed, j)` and
/// the run uses a seed derived from that one. Trial seeds do not depend on
/// `d` or `epsilon`, so rungs and grid points share their randomness.
pub fn trial_run(
    source: &InstanceSource,
    algorithm: Algorithm,
    epsilon: f64,
    d: u64,
    spec: &BudgetSearchSpec,
    j: u64,
) -> Result<(Arc<Instance>, RunResult)> {
    let trial_seed = derive_seed(spec.seed, j);
    let instance = source.instance(trial_seed)?;
    let config = spec.config(algorithm, epsilon, d, derive_seed(trial_seed, 1));
    let result = run(&instance, &config)?;
    Ok((instance, result))
}

/// Runs trial `j` and scores it; holdout errors use a third derived seed.
pub fn run_trial(
    source: &InstanceSource,
    algorithm: Algorithm,
    epsilon: f64,
    d: u64,
    spec: &BudgetSearchSpec,
    j: u64,
) -> Result<TrialOutcome> {
    let (instance, result) = trial_run(source, algorithm, epsilon, d, spec, j)?;
    let errors = match result.player_errors {
        Some(e) => e,
        None => player_errors(
            &instance,
            &result.hypothesis,
            derive_seed(derive_seed(spec.seed, j), 2),
        ),
    };
    let max_error = errors.iter().copied().fold(0.0, f64::max);
    Ok(TrialOutcome {
        success: max_error <= epsilon,
        max_error,
        learning_samples: result.ledger.total_phase(DrawPhase::Learn),
        test_samples: result.ledger.total_phase(DrawPhase::Test),
        balance_ratio: result.ledger.balance_ratio()?,
    })
}

/// Outcome of all trials at one rung, or of the trials run before the rung
/// could no longer reach the target.
#[derive(Debug, Clone, PartialEq)]
pub struct RungOutcome {
    pub d: u64,
    pub trials: Vec<TrialOutcome>,
    pub passed: bool,
}

impl RungOutcome {
    pub fn successes(&self) -> u64 {
        self.trials.iter().filter(|t| t.success).count() as u64
    }
}

/// Runs the trials of one rung in parallel batches and stops as soon as the
/// failures already seen rule out the target.
pub fn evaluate_rung(
    source: &InstanceSource,
    algorithm: Algorithm,
    epsilon: f64,
    d: u64,
    spec: &BudgetSearchSpec,
) -> Result<RungOutcome> {
    let runs = spec.runs as u64;
    let allowed_failures = runs - spec.target.required(runs);
    let batch = (2 * rayon::current_num_threads()).max(1) as u64;
    let mut trials = Vec::with_capacity(spec.runs);
    let mut failures = 0;
    let mut next = 0;
    while next < runs {
        let end = (next + batch).min(runs);
        let outcomes = (next..end)
            .into_par_iter()
            .map(|j| run_trial(source, algorithm, epsilon, d, spec, j))
            .collect::<Result<Vec<_>>>()?;
        failures += outcomes.iter().filter(|t| !t.success).count() as u64;
        trials.extend(outcomes);
        next = end;
        if failures > allowed_failures {
            return Ok(RungOutcome {
                d,
                trials,
                passed: false,
            });
        }
    }
    let passed = spec.target.met(runs - failures, runs);
    Ok(RungOutcome { d, trials, passed })
}

/// Summary row for a completed rung.
pub fn summarize(
    instance: &str,
    algorithm: Algorithm,
    epsilon: f64,
    rung: &RungOutcome,
    seed: u64,
) -> ResultRow {
    let n = rung.trials.len() as f64;
    let mean = |f: &dyn Fn(&TrialOutcome) -> f64| rung.trials.iter().map(f).sum::<f64>() / n;
    let learning = rung.trials.iter().map(|t| t.learning_samples).sum::<u64>() as f64 / n;
    let test = rung.trials.iter().map(|t| t.test_samples).sum::<u64>() as f64 / n;
    ResultRow {
        instance: instance.to_string(),
        algorithm,
        epsilon,
        budget: Some(rung.d),
        total_samples: Some(learning + test),
        learning_samples: Some(learning),
        test_samples: Some(test),
        success_rate: Some(rung.successes() as f64 / n),
        balance_ratio: Some(mean(&|t| t.balance_ratio)),
        seed,
    }
}

/// Runs `spec.runs` trials at a fixed `d` and summarizes them.
pub fn run_fixed(
    source: &InstanceSource,
    algorithm: Algorithm,
    epsilon: f64,
    d: u64,
    spec: &BudgetSearchSpec,
) -> Result<ResultRow> {
    spec.validate()?;
    let trials = (0..spec.runs as u64)
        .into_par_iter()
        .map(|j| run_trial(source, algorithm, epsilon, d, spec, j))
        .collect::<Result<Vec<_>>>()?;
    let successes = trials.iter().filter(|t| t.success).count() as u64;
    let rung = RungOutcome {
        d,
        passed: spec.target.met(successes, spec.runs as u64),
        trials,
    };
    Ok(summarize(source.id(), algorithm, epsilon, &rung, spec.seed))
}

/// For each `epsilon`, the first ladder rung whose success fraction meets
/// the target, with the mean realized sample counts of that rung. A grid
/// point whose ladder runs out yields a not-found row.
pub fn budget_search(
    source: &InstanceSource,
    algorithm: Algorithm,
    spec: &BudgetSearchSpec,
) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let rungs = spec.ladder.rungs()?;
    let mut rows = Vec::with_capacity(spec.epsilons.len());
    for &epsilon in &spec.epsilons {
        let mut found = None;
        for &d in &rungs {
            let outcome = evaluate_rung(source, algorithm, epsilon, d, spec)?;
            if outcome.passed {
                found = Some(outcome);
                break;
            }
        }
        rows.push(match found {
            Some(rung) => summarize(source.id(), algorithm, epsilon, &rung, spec.seed),
            None => ResultRow::not_found(source.id(), algorithm, epsilon, spec.seed),
        });
    }
    Ok(rows)
}
