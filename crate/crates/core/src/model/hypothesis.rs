use std::collections::BTreeMap;
use std::sync::Arc;

use super::point::{Label, Point};

/// A labeling function. Evaluation is total, deterministic and pure.
///
/// Hypotheses are cheap to clone; every variant shares its payload.
#[derive(Debug, Clone, PartialEq)]
pub enum Hypothesis {
    /// Member of a finite class, stored as its value table over the domain.
    Member(Arc<MemberTable>),
    Stump(Stump),
    Tree(Arc<TreeNode>),
    /// Pointwise most frequent label of the children. Improper in general.
    Plurality(Arc<PluralityVote>),
}

/// Value table of a finite-class member. Indices outside the table
/// (and feature-vector points) evaluate to label `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberTable {
    pub class_id: u32,
    /// Position in the class enumeration, when it fits in 64 bits.
    pub index: Option<u64>,
    pub table: Vec<Label>,
}

/// `feature <= threshold` predicts `below`, otherwise `above`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
    pub below: Label,
    pub above: Label,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf(Label),
    Split {
        feature: usize,
        threshold: f64,
        /// Taken when `feature <= threshold` (or the feature is missing).
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn predict(&self, point: &Point) -> Label {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf(label) => return *label,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = match point.feature(*feature) {
                        Some(x) if x > *threshold => right,
                        _ => left,
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf(_) => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PluralityVote {
    children: Vec<Hypothesis>,
    /// Precomputed outputs over a finite domain `0..cache.len()`.
    cache: Option<Vec<Label>>,
}

impl PluralityVote {
    pub fn children(&self) -> &[Hypothesis] {
        &self.children
    }

    fn vote(&self, point: &Point) -> Label {
        // Labels below SMALL are counted in an array, the rest in a map.
        const SMALL: usize = 8;
        let mut small = [0u32; SMALL];
        let mut large: BTreeMap<Label, u32> = BTreeMap::new();
        for child in &self.children {
            let label = child.predict(point);
            if (label as usize) < SMALL {
                small[label as usize] += 1;
            } else {
                *large.entry(label).or_default() += 1;
            }
        }
        let mut best = (0 as Label, 0u32);
        let ascending = small
            .iter()
            .enumerate()
            .map(|(l, &c)| (l as Label, c))
            .chain(large);
        for (label, count) in ascending {
            if count > best.1 {
                best = (label, count);
            }
        }
        best.0
    }
}

impl Hypothesis {
    pub fn member(class_id: u32, index: Option<u64>, table: Vec<Label>) -> Self {
        Hypothesis::Member(Arc::new(MemberTable {
            class_id,
            index,
            table,
        }))
    }

    /// The hypothesis predicting `label` everywhere.
    pub fn constant(label: Label) -> Self {
        Hypothesis::Tree(Arc::new(TreeNode::Leaf(label)))
    }

    /// Plurality of `children` in the given order. Ties go to the smallest
    /// label. Panics on an empty list; use `mw::plurality` for a checked
    /// constructor.
    pub fn plurality(children: Vec<Hypothesis>) -> Self {
        assert!(!children.is_empty(), "plurality of zero hypotheses");
        Hypothesis::Plurality(Arc::new(PluralityVote {
            children,
            cache: None,
        }))
    }

    /// Like [`Hypothesis::plurality`], with outputs tabulated for the finite
    /// domain `0..domain_size`.
    pub fn plurality_cached(children: Vec<Hypothesis>, domain_size: u32) -> Self {
        let mut vote = PluralityVote {
            children,
            cache: None,
        };
        assert!(!vote.children.is_empty(), "plurality of zero hypotheses");
        let table = (0..domain_size)
            .map(|i| vote.vote(&Point::Index(i)))
            .collect();
        vote.cache = Some(table);
        Hypothesis::Plurality(Arc::new(vote))
    }

    pub fn predict(&self, point: &Point) -> Label {
        match self {
            Hypothesis::Member(m) => match point {
                Point::Index(i) => m.table.get(*i as usize).copied().unwrap_or(0),
                Point::Features(_) => 0,
            },
            Hypothesis::Stump(s) => match point.feature(s.feature) {
                Some(x) if x > s.threshold => s.above,
                _ => s.below,
            },
            Hypothesis::Tree(t) => t.predict(point),
            Hypothesis::Plurality(p) => {
                if let (Some(cache), Point::Index(i)) = (&p.cache, point) {
                    if let Some(label) = cache.get(*i as usize) {
                        return *label;
                    }
                }
                p.vote(point)
            }
        }
    }

    /// Split depth of a tree or stump; zero for other hypotheses.
    pub fn depth(&self) -> usize {
        match self {
            Hypothesis::Stump(_) => 1,
            Hypothesis::Tree(t) => t.depth(),
            Hypothesis::Member(_) | Hypothesis::Plurality(_) => 0,
        }
    }

    pub fn as_member(&self) -> Option<&MemberTable> {
        match self {
            Hypothesis::Member(m) => Some(m),
            _ => None,
        }
    }
}
