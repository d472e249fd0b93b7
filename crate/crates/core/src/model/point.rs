use std::fmt;
use std::sync::Arc;

/// Discrete label value. Binary tasks use `0` and `1`.
pub type Label = u32;

/// An instance of the domain: either an index into a finite domain or a
/// feature vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Index(u32),
    Features(Arc<[f64]>),
}

impl Point {
    pub fn features(values: Vec<f64>) -> Self {
        Point::Features(values.into())
    }

    pub fn as_index(&self) -> Option<u32> {
        match self {
            Point::Index(i) => Some(*i),
            Point::Features(_) => None,
        }
    }

    pub fn as_features(&self) -> Option<&[f64]> {
        match self {
            Point::Index(_) => None,
            Point::Features(v) => Some(v),
        }
    }

    /// Value of feature `f`. A finite-domain point is seen as the
    /// one-dimensional vector `[index]`.
    pub fn feature(&self, f: usize) -> Option<f64> {
        match self {
            Point::Index(i) => (f == 0).then_some(*i as f64),
            Point::Features(v) => v.get(f).copied(),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Point::Index(_) => 1,
            Point::Features(v) => v.len(),
        }
    }

    /// Hashable identity; feature vectors compare by bit pattern.
    pub(crate) fn key(&self) -> PointKey {
        match self {
            Point::Index(i) => PointKey::Index(*i),
            Point::Features(v) => PointKey::Bits(v.iter().map(|x| x.to_bits()).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum PointKey {
    Index(u32),
    Bits(Vec<u64>),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Index(i) => write!(f, "{i}"),
            Point::Features(v) => {
                write!(f, "[")?;
                for (j, x) in v.iter().enumerate() {
                    if j > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledExample {
    pub point: Point,
    pub label: Label,
}

impl LabeledExample {
    pub fn new(point: Point, label: Label) -> Self {
        LabeledExample { point, label }
    }

    pub fn indexed(index: u32, label: Label) -> Self {
        LabeledExample {
            point: Point::Index(index),
            label,
        }
    }
}
