use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Hypothesis, Label, LabeledExample, Point};

/// A finite hypothesis class over the domain `0..domain_size`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteHypothesisClass {
    id: u32,
    domain_size: u32,
    vc_dim: u64,
    kind: ClassKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClassKind {
    /// Every binary function on the domain, optionally pinned to `0` at one
    /// point. Member `m` maps the `j`-th free point (ascending) to bit `j` of `m`.
    AllBinary { fixed_zero: Option<u32> },
    /// Value tables listed in enumeration order.
    Explicit(Vec<Vec<Label>>),
}

impl FiniteHypothesisClass {
    pub fn all_binary(domain_size: u32, fixed_zero: Option<u32>) -> Result<Self> {
        if let Some(z) = fixed_zero {
            if z >= domain_size {
                return Err(Error::Precondition(format!(
                    "pinned point {z} outside the domain of size {domain_size}"
                )));
            }
        }
        let free = domain_size as u64 - fixed_zero.map_or(0, |_| 1);
        Ok(FiniteHypothesisClass {
            id: 0,
            domain_size,
            vc_dim: free.max(1),
            kind: ClassKind::AllBinary { fixed_zero },
        })
    }

    pub fn explicit(domain_size: u32, members: Vec<Vec<Label>>, vc_dim: u64) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyClass);
        }
        if let Some(bad) = members.iter().position(|m| m.len() != domain_size as usize) {
            return Err(Error::Precondition(format!(
                "member {bad} is not defined on all {domain_size} domain points"
            )));
        }
        Ok(FiniteHypothesisClass {
            id: 1,
            domain_size,
            vc_dim,
            kind: ClassKind::Explicit(members),
        })
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn domain_size(&self) -> u32 {
        self.domain_size
    }

    pub fn vc_dim(&self) -> u64 {
        self.vc_dim
    }

    pub fn kind(&self) -> &ClassKind {
        &self.kind
    }

    fn free_points(&self, fixed_zero: Option<u32>) -> impl Iterator<Item = u32> {
        (0..self.domain_size).filter(move |&x| Some(x) != fixed_zero)
    }

    /// Number of members, if it fits in a `u64`.
    pub fn len(&self) -> Option<u64> {
        match &self.kind {
            ClassKind::AllBinary { fixed_zero } => {
                let free = self.free_points(*fixed_zero).count() as u32;
                1u64.checked_shl(free).filter(|_| free < 64)
            }
            ClassKind::Explicit(members) => Some(members.len() as u64),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn member(&self, index: u64) -> Option<Hypothesis> {
        match &self.kind {
            ClassKind::AllBinary { fixed_zero } => {
                if index >= self.len()? {
                    return None;
                }
                let mut table = vec![0; self.domain_size as usize];
                for (bit, x) in self.free_points(*fixed_zero).enumerate() {
                    table[x as usize] = ((index >> bit) & 1) as Label;
                }
                Some(Hypothesis::member(self.id, Some(index), table))
            }
            ClassKind::Explicit(members) => members
                .get(index as usize)
                .map(|t| Hypothesis::member(self.id, Some(index), t.clone())),
        }
    }

    pub fn members(&self) -> impl Iterator<Item = Hypothesis> + '_ {
        let n = self.len().unwrap_or(u64::MAX);
        (0..n).map_while(|i| self.member(i))
    }

    /// Member chosen uniformly at random.
    pub fn random_member<R: Rng + ?Sized>(&self, rng: &mut R) -> Hypothesis {
        match &self.kind {
            ClassKind::AllBinary { fixed_zero } => {
                let mut table = vec![0; self.domain_size as usize];
                for x in self.free_points(*fixed_zero) {
                    table[x as usize] = rng.random_range(0..2);
                }
                self.member_for_table(table)
            }
            ClassKind::Explicit(members) => {
                let i = rng.random_range(0..members.len());
                Hypothesis::member(self.id, Some(i as u64), members[i].clone())
            }
        }
    }

    /// Wraps a binary table of an `AllBinary` class, recovering its index.
    pub(crate) fn member_for_table(&self, table: Vec<Label>) -> Hypothesis {
        let index = match &self.kind {
            ClassKind::AllBinary { fixed_zero } if self.len().is_some() => Some(
                self.free_points(*fixed_zero)
                    .enumerate()
                    .map(|(bit, x)| (table[x as usize] as u64 & 1) << bit)
                    .sum(),
            ),
            _ => None,
        };
        Hypothesis::member(self.id, index, table)
    }
}

/// Empirical risk minimization over a finite class. Ties go to the member
/// with the smallest enumeration index.
pub fn erm_learn(sample: &[LabeledExample], class: &FiniteHypothesisClass) -> Result<Hypothesis> {
    match class.kind() {
        ClassKind::AllBinary { fixed_zero } => Ok(erm_all_binary(sample, class, *fixed_zero)),
        ClassKind::Explicit(members) => {
            let mut best: Option<(u64, usize)> = None;
            for (i, table) in members.iter().enumerate() {
                let errors = sample
                    .iter()
                    .filter(|ex| lookup(table, &ex.point) != ex.label)
                    .count() as u64;
                if best.is_none_or(|(e, _)| errors < e) {
                    best = Some((errors, i));
                }
            }
            let (_, i) = best.ok_or(Error::EmptyClass)?;
            Ok(Hypothesis::member(
                class.id(),
                Some(i as u64),
                members[i].clone(),
            ))
        }
    }
}

/// The all-binary class is a product over points, so the minimizer is
/// chosen pointwise. Picking `0` on every tied point yields the smallest
/// index among all minimizers.
fn erm_all_binary(
    sample: &[LabeledExample],
    class: &FiniteHypothesisClass,
    fixed_zero: Option<u32>,
) -> Hypothesis {
    let n = class.domain_size() as usize;
    let mut zeros = vec![0u64; n];
    let mut ones = vec![0u64; n];
    for ex in sample {
        if let Some(x) = ex.point.as_index().filter(|&x| (x as usize) < n) {
            match ex.label {
                0 => zeros[x as usize] += 1,
                1 => ones[x as usize] += 1,
                _ => {}
            }
        }
    }
    let table = (0..n)
        .map(|x| {
            let pinned = Some(x as u32) == fixed_zero;
            Label::from(!pinned && ones[x] > zeros[x])
        })
        .collect();
    class.member_for_table(table)
}

fn lookup(table: &[Label], point: &Point) -> Label {
    match point {
        Point::Index(i) => table.get(*i as usize).copied().unwrap_or(0),
        Point::Features(_) => 0,
    }
}
