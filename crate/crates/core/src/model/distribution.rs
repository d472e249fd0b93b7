use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;

use super::point::LabeledExample;
use crate::error::{Error, Result};

/// Tolerance on the total mass of a distribution.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Finite distribution over labeled examples.
#[derive(Debug, Clone)]
pub struct PointMassDistribution {
    support: Vec<(LabeledExample, f64)>,
    sampler: WeightedAliasIndex<f64>,
}

impl PartialEq for PointMassDistribution {
    fn eq(&self, other: &Self) -> bool {
        self.support == other.support
    }
}

impl PointMassDistribution {
    pub fn new(support: Vec<(LabeledExample, f64)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let mut seen = HashSet::with_capacity(support.len());
        let mut total = 0.0;
        for (example, mass) in &support {
            if !mass.is_finite() || *mass < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "mass {mass} at point {} is not a nonnegative number",
                    example.point
                )));
            }
            if !seen.insert((example.point.key(), example.label)) {
                return Err(Error::InvalidDistribution(format!(
                    "example ({}, {}) appears twice in the support",
                    example.point, example.label
                )));
            }
            total += mass;
        }
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {total:.17}, expected 1"
            )));
        }
        let sampler = WeightedAliasIndex::new(support.iter().map(|(_, m)| *m).collect())
            .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        Ok(PointMassDistribution { support, sampler })
    }

    /// Uniform distribution over a multiset; repeated examples merge and keep
    /// their multiplicity as mass. A point seen with two labels keeps both.
    /// Examples keep first-appearance order.
    pub fn from_multiset(rows: &[LabeledExample]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidDistribution("empty multiset".into()));
        }
        let mut position: HashMap<_, usize> = HashMap::new();
        let mut merged: Vec<(LabeledExample, usize)> = Vec::new();
        for row in rows {
            match position.entry((row.point.key(), row.label)) {
                Entry::Occupied(at) => merged[*at.get()].1 += 1,
                Entry::Vacant(slot) => {
                    slot.insert(merged.len());
                    merged.push((row.clone(), 1));
                }
            }
        }
        let n = rows.len() as f64;
        Self::new(merged.into_iter().map(|(e, c)| (e, c as f64 / n)).collect())
    }

    pub fn support(&self) -> &[(LabeledExample, f64)] {
        &self.support
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> &LabeledExample {
        &self.support[self.sampler.sample(rng)].0
    }
}

/// Uniform resampling (with replacement) of a fixed set of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    rows: Vec<LabeledExample>,
}

impl EmpiricalDistribution {
    pub fn new(rows: Vec<LabeledExample>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidDistribution("no rows to resample".into()));
        }
        Ok(EmpiricalDistribution { rows })
    }

    pub fn rows(&self) -> &[LabeledExample] {
        &self.rows
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> &LabeledExample {
        &self.rows[rng.random_range(0..self.rows.len())]
    }
}

/// Source of i.i.d. examples for one player.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleOracle {
    PointMass(Arc<PointMassDistribution>),
    Empirical(Arc<EmpiricalDistribution>),
}

impl SampleOracle {
    pub fn point_mass(d: PointMassDistribution) -> Self {
        SampleOracle::PointMass(Arc::new(d))
    }

    pub fn empirical(rows: Vec<LabeledExample>) -> Result<Self> {
        Ok(SampleOracle::Empirical(Arc::new(
            EmpiricalDistribution::new(rows)?,
        )))
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> &LabeledExample {
        match self {
            SampleOracle::PointMass(d) => d.draw(rng),
            SampleOracle::Empirical(d) => d.draw(rng),
        }
    }

    pub fn as_point_mass(&self) -> Option<&PointMassDistribution> {
        match self {
            SampleOracle::PointMass(d) => Some(d),
            SampleOracle::Empirical(_) => None,
        }
    }
}

/// Anything that yields examples attributed to a player.
pub trait Sampler {
    fn draw<'s, R: Rng + ?Sized>(&'s self, rng: &mut R) -> (usize, &'s LabeledExample);
}

/// A single player's oracle, attributing draws to `player`.
#[derive(Debug, Clone, Copy)]
pub struct PlayerSampler<'a> {
    pub player: usize,
    pub oracle: &'a SampleOracle,
}

impl Sampler for PlayerSampler<'_> {
    fn draw<'s, R: Rng + ?Sized>(&'s self, rng: &mut R) -> (usize, &'s LabeledExample) {
        (self.player, self.oracle.draw(rng))
    }
}

/// The mixture `sum_i p(i) D_i`: pick player `i` with probability `p(i)`,
/// then draw from that player's oracle.
#[derive(Debug, Clone)]
pub struct Mixture<'a> {
    oracles: &'a [SampleOracle],
    picker: Option<WeightedAliasIndex<f64>>,
}

pub fn mixture_sampler<'a>(p: &[f64], oracles: &'a [SampleOracle]) -> Result<Mixture<'a>> {
    if p.len() != oracles.len() {
        return Err(Error::DimensionMismatch {
            expected: oracles.len(),
            found: p.len(),
        });
    }
    if p.is_empty() {
        return Err(Error::Precondition("mixture over zero players".into()));
    }
    let total: f64 = p.iter().sum();
    if p.iter().any(|x| !x.is_finite() || *x < 0.0) || (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::InvalidDistribution(format!(
            "mixture weights {p:?} are not a probability vector"
        )));
    }
    let picker = if p.len() == 1 {
        None
    } else {
        Some(
            WeightedAliasIndex::new(p.to_vec())
                .map_err(|e| Error::InvalidDistribution(e.to_string()))?,
        )
    };
    Ok(Mixture { oracles, picker })
}

impl Sampler for Mixture<'_> {
    fn draw<'s, R: Rng + ?Sized>(&'s self, rng: &mut R) -> (usize, &'s LabeledExample) {
        let player = match &self.picker {
            Some(picker) => picker.sample(rng),
            None => 0,
        };
        (player, self.oracles[player].draw(rng))
    }
}
