use super::distribution::PointMassDistribution;
use super::hypothesis::Hypothesis;
use super::point::LabeledExample;
use crate::error::{Error, Result};

/// `err_D(g)`: mass of the support points `g` labels wrongly.
pub fn exact_error(g: &Hypothesis, d: &PointMassDistribution) -> f64 {
    d.support()
        .iter()
        .filter(|(ex, _)| g.predict(&ex.point) != ex.label)
        .map(|(_, mass)| mass)
        .sum()
}

/// `err_T(g)`: fraction of `sample` (with multiplicity) `g` labels wrongly.
pub fn empirical_error(g: &Hypothesis, sample: &[LabeledExample]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::Precondition(
            "empirical error of an empty sample".into(),
        ));
    }
    Ok(mistakes(g, sample) as f64 / sample.len() as f64)
}

pub(crate) fn mistakes<'a>(
    g: &Hypothesis,
    sample: impl IntoIterator<Item = &'a LabeledExample>,
) -> u64 {
    sample
        .into_iter()
        .filter(|ex| g.predict(&ex.point) != ex.label)
        .count() as u64
}
