//! Sample-size calculators for the base learner and the accuracy tests.

use crate::error::{check_epsilon, check_unit_open, Error, Result};

/// Logarithm used by the tuned formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

/// How many examples a single-distribution learner is given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleSizeProfile {
    /// `c * (d + ln(1/delta)) / eps` with the asymptotic constants of the
    /// analysis elsewhere (rounds, test sizes).
    Theory { constant: f64 },
    /// `(d + log(1/delta)) / (10 eps)`, `ceil(10 log k)` rounds and
    /// `30/eps`-draw tests at threshold `eps/2`.
    Tuned { log_base: LogBase },
}

impl Default for SampleSizeProfile {
    fn default() -> Self {
        SampleSizeProfile::Theory { constant: 1.0 }
    }
}

impl SampleSizeProfile {
    pub fn tuned() -> Self {
        SampleSizeProfile::Tuned {
            log_base: LogBase::Natural,
        }
    }

    pub fn is_tuned(&self) -> bool {
        matches!(self, SampleSizeProfile::Tuned { .. })
    }
}

/// Relative slack absorbed before taking a ceiling, so that a count whose
/// exact value is an integer is not bumped up by representation error in
/// `eps` or `delta` (e.g. `ln(1/(1/e))` evaluating to `1 + 2^-52`).
const CEIL_SLACK: f64 = 1e-9;

/// Ceiling of a nonnegative real count, tolerant of float noise.
pub fn ceil_count(x: f64) -> u64 {
    debug_assert!(x.is_finite() && x >= 0.0, "count {x}");
    (x - x.abs() * CEIL_SLACK).ceil().max(0.0) as u64
}

pub fn sample_size(epsilon: f64, delta: f64, d: u64, profile: SampleSizeProfile) -> Result<u64> {
    check_epsilon(epsilon)?;
    check_unit_open("delta", delta)?;
    if d == 0 {
        return Err(Error::Precondition("VC dimension must be positive".into()));
    }
    let raw = match profile {
        SampleSizeProfile::Theory { constant } => {
            if !(constant > 0.0 && constant.is_finite()) {
                return Err(Error::OutOfRange {
                    name: "theory constant",
                    value: constant,
                    reason: "must be positive",
                });
            }
            constant * (d as f64 + (1.0 / delta).ln()) / epsilon
        }
        SampleSizeProfile::Tuned { log_base } => {
            (d as f64 + log_base.log(1.0 / delta)) / (10.0 * epsilon)
        }
    };
    Ok(ceil_count(raw).max(1))
}
