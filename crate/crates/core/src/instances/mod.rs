//! Adversarial input distributions that separate the naive baseline from the
//! multiplicative-weights learners.
//!
//! Domains are finite and indexed. For a dimension `d` the regular points are
//! `0..d` and the special point `⊥` is index `d`; every class pins `⊥` to
//! label `0`.

mod file;

pub use file::{parse, read_instance, render, write_instance, InstanceMeta, FORMAT_HEADER};

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{check_epsilon, Error, Result};
use crate::instance::Instance;
use crate::learners::{FiniteHypothesisClass, LearnerSpec};
use crate::model::{Hypothesis, LabeledExample, Point, PointMassDistribution, SampleOracle};
use crate::rng::{stream, Phase, StreamKey};

/// Which construction produced an instance, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    Phi {
        d: u32,
        epsilon: f64,
    },
    BigPhi {
        k: usize,
        d: u32,
        epsilon: f64,
    },
    Psi {
        k: usize,
        d: u32,
        epsilon: f64,
    },
    /// One outlier player uniform over `outlier` points labeled `1`, and
    /// `k - 1` identical players uniform over `shared` other points labeled `0`.
    ClassDup {
        k: usize,
        outlier: u32,
        shared: u32,
    },
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Phi { .. } => "phi",
            Generator::BigPhi { .. } => "big-phi",
            Generator::Psi { .. } => "psi",
            Generator::ClassDup { .. } => "class-dup",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::Phi { d, epsilon } => write!(f, "phi-d{d}-e{epsilon}"),
            Generator::BigPhi { k, d, epsilon } => write!(f, "big-phi-k{k}-d{d}-e{epsilon}"),
            Generator::Psi { k, d, epsilon } => write!(f, "psi-k{k}-d{d}-e{epsilon}"),
            Generator::ClassDup { k, outlier, shared } => {
                write!(f, "class-dup-k{k}-m{outlier}-n{shared}")
            }
        }
    }
}

/// A generated instance: players as point-mass distributions, the target
/// labeling them, and the class the learner searches.
#[derive(Debug, Clone, PartialEq)]
pub struct HardInstance {
    pub generator: Generator,
    pub seed: u64,
    pub class: FiniteHypothesisClass,
    pub target: Hypothesis,
    pub players: Vec<PointMassDistribution>,
    /// `permutation[p]` is the pre-shuffle index of the player now at `p`.
    pub permutation: Option<Vec<usize>>,
}

impl HardInstance {
    pub fn k(&self) -> usize {
        self.players.len()
    }

    /// Index of `⊥`, when the domain has one.
    pub fn bottom(&self) -> Option<u32> {
        match self.generator {
            Generator::ClassDup { .. } => None,
            _ => Some(self.class.domain_size() - 1),
        }
    }

    pub fn id(&self) -> String {
        format!("{}-s{}", self.generator, self.seed)
    }

    /// File metadata: generator parameters, target table and permutation.
    pub fn meta(&self) -> InstanceMeta {
        let params = match self.generator {
            Generator::Phi { d, epsilon } => {
                vec![("d", d.to_string()), ("epsilon", epsilon.to_string())]
            }
            Generator::BigPhi { d, epsilon, .. } | Generator::Psi { d, epsilon, .. } => {
                vec![("d", d.to_string()), ("epsilon", epsilon.to_string())]
            }
            Generator::ClassDup {
                outlier, shared, ..
            } => {
                vec![
                    ("outlier", outlier.to_string()),
                    ("shared", shared.to_string()),
                ]
            }
        };
        InstanceMeta {
            generator: self.generator.name().to_string(),
            seed: self.seed,
            params: params
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            bottom: self.bottom(),
            target: self.target.as_member().map(|m| m.table.clone()),
            permutation: self.permutation.clone(),
        }
    }

    pub fn to_instance(&self) -> Instance {
        let players = self
            .players
            .iter()
            .cloned()
            .map(SampleOracle::point_mass)
            .collect();
        Instance::new(self.id(), players, LearnerSpec::Erm(self.class.clone()))
            .expect("generated instances have at least one player")
    }
}

fn check_mass(epsilon: f64, factor: f64, reason: &'static str) -> Result<()> {
    check_epsilon(epsilon)?;
    if factor * epsilon >= 1.0 {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            reason,
        });
    }
    Ok(())
}

/// `⊥` with mass `1 - total`, the rest spread evenly over `points`.
fn bottom_heavy(
    target: &Hypothesis,
    bottom: u32,
    points: impl ExactSizeIterator<Item = u32>,
    total: f64,
) -> Result<PointMassDistribution> {
    let each = total / points.len() as f64;
    let mut support: Vec<_> = points
        .map(|x| {
            let p = Point::Index(x);
            (LabeledExample::new(p.clone(), target.predict(&p)), each)
        })
        .collect();
    support.push((LabeledExample::indexed(bottom, 0), 1.0 - total));
    PointMassDistribution::new(support)
}

fn bottom_only(bottom: u32) -> Result<PointMassDistribution> {
    PointMassDistribution::new(vec![(LabeledExample::indexed(bottom, 0), 1.0)])
}

fn pinned_class(d: u32) -> Result<FiniteHypothesisClass> {
    FiniteHypothesisClass::all_binary(d + 1, Some(d))
}

/// `φ_d`: one player, `⊥` with mass `1 - 8ε`, each of the `d` points `8ε/d`.
pub fn gen_phi(d: u32, epsilon: f64, seed: u64) -> Result<HardInstance> {
    if d == 0 {
        return Err(Error::Precondition("d must be at least 1".into()));
    }
    check_mass(epsilon, 8.0, "8·epsilon must be below 1")?;
    let class = pinned_class(d)?;
    let mut rng = stream(seed, StreamKey::new(Phase::Instance, 0, 0));
    let target = class.random_member(&mut rng);
    let player = bottom_heavy(&target, d, 0..d, 8.0 * epsilon)?;
    Ok(HardInstance {
        generator: Generator::Phi { d, epsilon },
        seed,
        class,
        target,
        players: vec![player],
        permutation: None,
    })
}

/// `Φ_{k,d}`: player `i` (zero-based) holds the block `i·d/k .. (i+1)·d/k`
/// with `8ε/(d/k)` each, plus `⊥` with mass `1 - 8ε`.
pub fn gen_big_phi(k: usize, d: u32, epsilon: f64, seed: u64) -> Result<HardInstance> {
    if k == 0 || d as usize <= k {
        return Err(Error::Precondition(format!("need d > k, got k={k}, d={d}")));
    }
    if !(d as usize).is_multiple_of(k) {
        return Err(Error::Precondition(format!("k={k} does not divide d={d}")));
    }
    check_mass(epsilon, 8.0, "8·epsilon must be below 1")?;
    let class = pinned_class(d)?;
    let mut rng = stream(seed, StreamKey::new(Phase::Instance, 0, 0));
    let target = class.random_member(&mut rng);
    let block = d / k as u32;
    let players = (0..k as u32)
        .map(|i| bottom_heavy(&target, d, i * block..(i + 1) * block, 8.0 * epsilon))
        .collect::<Result<_>>()?;
    Ok(HardInstance {
        generator: Generator::BigPhi { k, d, epsilon },
        seed,
        class,
        target,
        players,
        permutation: None,
    })
}

/// `Ψ_{k,d}`: the first `d` players are independent copies of `ψ` on their
/// own point (all mass on `⊥` with probability 1/2, otherwise `2ε` on the
/// point), that block is repeated `k/d` times and the players are shuffled.
pub fn gen_psi(k: usize, d: u32, epsilon: f64, seed: u64) -> Result<HardInstance> {
    if d == 0 || d as usize > k {
        return Err(Error::Precondition(format!(
            "need 1 <= d <= k, got k={k}, d={d}"
        )));
    }
    if !k.is_multiple_of(d as usize) {
        return Err(Error::Precondition(format!("d={d} does not divide k={k}")));
    }
    check_mass(epsilon, 2.0, "2·epsilon must be below 1")?;
    let class = pinned_class(d)?;
    let mut rng = stream(seed, StreamKey::new(Phase::Instance, 0, 0));
    let target = class.random_member(&mut rng);
    let block = (0..d)
        .map(|i| {
            if rng.random_bool(0.5) {
                bottom_only(d)
            } else {
                bottom_heavy(&target, d, i..i + 1, 2.0 * epsilon)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut permutation: Vec<usize> = (0..k).collect();
    permutation.shuffle(&mut rng);
    let players = permutation
        .iter()
        .map(|&j| block[j % d as usize].clone())
        .collect();
    Ok(HardInstance {
        generator: Generator::Psi { k, d, epsilon },
        seed,
        class,
        target,
        players,
        permutation: Some(permutation),
    })
}

/// One outlier player and `k - 1` identical players on disjoint supports.
/// The outlier is uniform over points `0..outlier`, all labeled `1`; the
/// others are uniform over the next `shared` points, labeled `0`. The class
/// is every binary function on the `outlier + shared` points.
pub fn gen_class_dup(k: usize, outlier: u32, shared: u32, seed: u64) -> Result<HardInstance> {
    if k < 2 {
        return Err(Error::Precondition("class-dup needs k >= 2".into()));
    }
    if outlier == 0 || shared == 0 {
        return Err(Error::Precondition(
            "class-dup supports must be nonempty".into(),
        ));
    }
    let n = outlier + shared;
    let class = FiniteHypothesisClass::all_binary(n, None)?;
    let table = (0..n).map(|x| u32::from(x < outlier)).collect();
    let target = class.member_for_table(table);
    let uniform = |range: std::ops::Range<u32>, label| {
        let m = range.len() as f64;
        PointMassDistribution::new(
            range
                .map(|x| (LabeledExample::indexed(x, label), 1.0 / m))
                .collect(),
        )
    };
    let first = uniform(0..outlier, 1)?;
    let rest = uniform(outlier..n, 0)?;
    let mut players = vec![first];
    players.extend(std::iter::repeat_n(rest, k - 1));
    Ok(HardInstance {
        generator: Generator::ClassDup { k, outlier, shared },
        seed,
        class,
        target,
        players,
        permutation: None,
    })
}
