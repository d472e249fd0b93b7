use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::learners::{LearnerSpec, TreeParams};
use crate::model::{Label, LabeledExample, PointMassDistribution, SampleOracle};
use crate::rng::{stream, Phase, StreamKey, ALL_PLAYERS};

/// How rows are split among the players.
#[derive(Debug, Clone, PartialEq)]
pub enum PartitionStrategy {
    /// Shuffle, then cut into `k` parts whose sizes differ by at most one.
    RandomK,
    /// Player 1 gets the rows of class `first`; players `2..k` all get the
    /// rows of class `second`. `None` picks the first two labels in order.
    ClassDup { classes: Option<(String, String)> },
    /// Player 1 gets the rows with `x[feature] <= threshold`; players `2..k`
    /// all get the remaining rows. The default threshold is the median.
    FeatureThreshold {
        feature: usize,
        threshold: Option<f64>,
    },
    /// `k = r x c` equal-count cells: rows are cut into `r` rank bins on the
    /// first feature, then each bin into `c` rank bins on the second.
    /// `r` is the largest divisor of `k` not above `sqrt(k)`.
    FeatureGrid { features: (usize, usize) },
}

impl PartitionStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            PartitionStrategy::RandomK => "random",
            PartitionStrategy::ClassDup { .. } => "class-dup",
            PartitionStrategy::FeatureThreshold { .. } => "feature-threshold",
            PartitionStrategy::FeatureGrid { .. } => "feature-grid",
        }
    }
}

impl fmt::Display for PartitionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PartitionStrategy {
    type Err = Error;

    /// Parses the strategy name with default parameters.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "random" | "random-k" => Ok(PartitionStrategy::RandomK),
            "class-dup" => Ok(PartitionStrategy::ClassDup { classes: None }),
            "feature-threshold" => Ok(PartitionStrategy::FeatureThreshold {
                feature: 0,
                threshold: None,
            }),
            "feature-grid" => Ok(PartitionStrategy::FeatureGrid { features: (0, 1) }),
            other => Err(Error::Precondition(format!(
                "unknown partition `{other}` (random|class-dup|feature-threshold|feature-grid)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSpec {
    pub strategy: PartitionStrategy,
    pub k: usize,
}

/// The players produced by a partition, with the dataset rows behind each.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// `rows[i]` lists the dataset row indices backing player `i`.
    pub rows: Vec<Vec<usize>>,
    pub players: Vec<SampleOracle>,
}

impl Partition {
    /// Backing rows summed over players, duplicates included.
    pub fn backing_rows(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Each player's rows as a point-mass distribution with multiplicities.
    pub fn point_masses(&self, dataset: &Dataset) -> Result<Vec<SampleOracle>> {
        self.rows
            .iter()
            .map(|r| {
                let examples: Vec<LabeledExample> =
                    r.iter().map(|&i| dataset.rows[i].clone()).collect();
                PointMassDistribution::from_multiset(&examples).map(SampleOracle::point_mass)
            })
            .collect()
    }
}

pub fn partition(dataset: &Dataset, spec: &PartitionSpec, seed: u64) -> Result<Partition> {
    let k = spec.k;
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let n = dataset.len();
    let rows: Vec<Vec<usize>> = match &spec.strategy {
        PartitionStrategy::RandomK => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut stream(
                seed,
                StreamKey::new(Phase::Partition, ALL_PLAYERS, 0),
            ));
            equal_chunks(&order, k)
        }
        PartitionStrategy::ClassDup { classes } => {
            let (a, b) = match classes {
                Some((a, b)) => (label(dataset, a)?, label(dataset, b)?),
                None if dataset.label_names.len() >= 2 => (0, 1),
                None => return Err(Error::Precondition("class-dup needs two classes".into())),
            };
            let first = (0..n).filter(|&i| dataset.rows[i].label == a).collect();
            let second = (0..n).filter(|&i| dataset.rows[i].label == b).collect();
            duplicate_second(first, second, k)?
        }
        PartitionStrategy::FeatureThreshold { feature, threshold } => {
            check_feature(dataset, *feature)?;
            let value = |i: usize| dataset.rows[i].point.feature(*feature).unwrap_or(f64::NAN);
            let cut = match threshold {
                Some(t) => *t,
                None => {
                    let mut v: Vec<f64> = (0..n).map(value).collect();
                    v.sort_by(f64::total_cmp);
                    v.get(n.saturating_sub(1) / 2).copied().unwrap_or(0.0)
                }
            };
            let (first, second) = (0..n).partition(|&i| value(i) <= cut);
            duplicate_second(first, second, k)?
        }
        PartitionStrategy::FeatureGrid { features: (f0, f1) } => {
            check_feature(dataset, *f0)?;
            check_feature(dataset, *f1)?;
            let r = grid_rows(k);
            let c = k / r;
            let by = |f: usize, mut idx: Vec<usize>| {
                idx.sort_by(|&a, &b| {
                    let (xa, xb) = (
                        dataset.rows[a].point.feature(f),
                        dataset.rows[b].point.feature(f),
                    );
                    xa.unwrap_or(0.0)
                        .total_cmp(&xb.unwrap_or(0.0))
                        .then(a.cmp(&b))
                });
                idx
            };
            let bands = equal_chunks(&by(*f0, (0..n).collect()), r);
            bands
                .into_iter()
                .flat_map(|band| equal_chunks(&by(*f1, band), c))
                .collect()
        }
    };
    if let Some(part) = rows.iter().position(Vec::is_empty) {
        return Err(Error::EmptyPart { part });
    }
    let players = rows
        .iter()
        .map(|r| SampleOracle::empirical(r.iter().map(|&i| dataset.rows[i].clone()).collect()))
        .collect::<Result<_>>()?;
    Ok(Partition { rows, players })
}

/// Instance over a partition's empirical players, learned by a tree.
pub fn dataset_instance(
    id: impl Into<String>,
    partition: &Partition,
    tree: TreeParams,
) -> Result<Instance> {
    Instance::new(id, partition.players.clone(), LearnerSpec::Tree(tree))
}

fn label(dataset: &Dataset, token: &str) -> Result<Label> {
    dataset.label_id(token).ok_or_else(|| {
        Error::Precondition(format!("class `{token}` does not occur in the dataset"))
    })
}

fn check_feature(dataset: &Dataset, f: usize) -> Result<()> {
    if f < dataset.dimension() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "feature {f} out of range for {} features",
            dataset.dimension()
        )))
    }
}

fn duplicate_second(first: Vec<usize>, second: Vec<usize>, k: usize) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::Precondition("this partition needs k >= 2".into()));
    }
    let mut rows = vec![first];
    rows.extend(std::iter::repeat_n(second, k - 1));
    Ok(rows)
}

/// Cuts `items` into `k` consecutive chunks whose sizes differ by at most one.
fn equal_chunks(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let (base, extra) = (items.len() / k, items.len() % k);
    let mut out = Vec::with_capacity(k);
    let mut start = 0;
    for j in 0..k {
        let len = base + usize::from(j < extra);
        out.push(items[start..start + len].to_vec());
        start += len;
    }
    out
}

/// Largest divisor of `k` not above `sqrt(k)`.
fn grid_rows(k: usize) -> usize {
    (1..=k)
        .take_while(|r| r * r <= k)
        .filter(|r| k.is_multiple_of(*r))
        .last()
        .unwrap_or(1)
}
