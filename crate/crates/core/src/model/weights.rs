use crate::error::{Error, Result};

/// Per-player multiplicative weights.
///
/// Weights only ever double, so each one is stored as its exponent:
/// `w_i = 2^{c_i}` where `c_i` counts the rounds in which player `i` was
/// excluded. This keeps weights exact even after thousands of rounds, where
/// `2^{c_i}` no longer fits in an `f64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightState {
    exponents: Vec<u32>,
    round: usize,
}

impl WeightState {
    pub fn new(k: usize) -> Self {
        WeightState {
            exponents: vec![0; k],
            round: 0,
        }
    }

    pub fn k(&self) -> usize {
        self.exponents.len()
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// `2^{c_i}` as floats; overflows to infinity past `2^1023`.
    pub fn weights(&self) -> Vec<f64> {
        self.exponents.iter().map(|&c| pow2(c as i32)).collect()
    }

    /// Weights divided by `2^{max c}`; same ratios, never overflows.
    pub fn scaled_weights(&self) -> Vec<f64> {
        let top = self.exponents.iter().copied().max().unwrap_or(0) as i32;
        self.exponents
            .iter()
            .map(|&c| pow2(c as i32 - top))
            .collect()
    }

    /// `ln sum_i w_i`.
    pub fn ln_total(&self) -> f64 {
        let top = self.exponents.iter().copied().max().unwrap_or(0) as f64;
        top * std::f64::consts::LN_2 + self.scaled_weights().iter().sum::<f64>().ln()
    }

    /// `p(i) = w_i / W`. Players more than ~1074 doublings behind the
    /// heaviest one get probability zero.
    pub fn probabilities(&self) -> Vec<f64> {
        let w = self.scaled_weights();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    }

    /// Doubles the weight of every player not in `kept` and advances the
    /// round. Returns `W^{(t+1)} / W^{(t)}`.
    pub fn update(&mut self, kept: &[bool]) -> f64 {
        assert_eq!(kept.len(), self.k());
        let top = self.exponents.iter().copied().max().unwrap_or(0) as i32;
        let mut before = 0.0;
        let mut after = 0.0;
        for (c, &keep) in self.exponents.iter_mut().zip(kept) {
            let w = pow2(*c as i32 - top);
            before += w;
            if keep {
                after += w;
            } else {
                after += 2.0 * w;
                *c += 1;
            }
        }
        self.round += 1;
        after / before
    }
}

fn pow2(e: i32) -> f64 {
    2f64.powi(e)
}

/// `p(i) = w_i / sum_j w_j`.
pub fn normalize_weights(w: &[f64]) -> Result<Vec<f64>> {
    if w.is_empty() {
        return Err(Error::Precondition("no weights to normalize".into()));
    }
    for (player, &value) in w.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::InvalidWeight { player, value });
        }
    }
    let total: f64 = w.iter().sum();
    if !total.is_finite() {
        // Rescale by the largest weight first.
        let top = w.iter().copied().fold(0.0, f64::max);
        return normalize_weights(&w.iter().map(|x| x / top).collect::<Vec<_>>());
    }
    Ok(w.iter().map(|x| x / total).collect())
}
