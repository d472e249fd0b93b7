use crate::error::{Error, Result};
use crate::learners::LearnerSpec;
use crate::model::{exact_error, Hypothesis, PointMassDistribution, SampleOracle};

/// `k` labeled player distributions together with the base learner that
/// fits samples drawn from them.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub id: String,
    pub players: Vec<SampleOracle>,
    pub learner: LearnerSpec,
    /// Size of the finite domain, when points are indices. Enables the
    /// tabulated plurality.
    pub domain_size: Option<u32>,
}

impl Instance {
    pub fn new(
        id: impl Into<String>,
        players: Vec<SampleOracle>,
        learner: LearnerSpec,
    ) -> Result<Self> {
        if players.is_empty() {
            return Err(Error::Precondition(
                "an instance needs at least one player".into(),
            ));
        }
        let domain_size = match &learner {
            LearnerSpec::Erm(class) => Some(class.domain_size()),
            LearnerSpec::Tree(_) | LearnerSpec::Oracle(_) => None,
        };
        Ok(Instance {
            id: id.into(),
            players,
            learner,
            domain_size,
        })
    }

    pub fn k(&self) -> usize {
        self.players.len()
    }

    /// Point-mass form of every player, if all have one.
    pub fn point_masses(&self) -> Option<Vec<&PointMassDistribution>> {
        self.players.iter().map(|o| o.as_point_mass()).collect()
    }

    pub fn has_exact_errors(&self) -> bool {
        self.players.iter().all(|o| o.as_point_mass().is_some())
    }

    /// `err_{D_i}(g)` for every player.
    pub fn exact_errors(&self, g: &Hypothesis) -> Result<Vec<f64>> {
        let masses = self.point_masses().ok_or(Error::ExactErrorUnavailable)?;
        Ok(masses.into_iter().map(|d| exact_error(g, d)).collect())
    }
}
