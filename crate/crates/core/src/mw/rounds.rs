use crate::error::{check_unit_open, Result};
use crate::learners::{ceil_count, LogBase};

/// `ceil(10 ln k)` rounds for `BasicMW`; a single round when `k = 1`.
pub fn basic_round_count(k: usize) -> usize {
    if k <= 1 {
        return 1;
    }
    ceil_count(10.0 * (k as f64).ln()) as usize
}

/// `ceil(2000 ln(k / delta))` rounds for `MWeights`.
pub fn mw_round_count(k: usize, delta: f64) -> Result<usize> {
    check_unit_open("delta", delta)?;
    Ok(ceil_count(2000.0 * (k.max(1) as f64 / delta).ln()) as usize)
}

/// `ceil(10 log k)` rounds used by the tuned profile; a single round when `k = 1`.
pub fn tuned_round_count(k: usize, base: LogBase) -> usize {
    if k <= 1 {
        return 1;
    }
    (ceil_count(10.0 * base.log(k as f64)) as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_counts() {
        assert_eq!(basic_round_count(10), 24);
        assert_eq!(basic_round_count(4), 14);
        assert_eq!(basic_round_count(1), 1);
    }

    #[test]
    fn mw_counts() {
        assert_eq!(mw_round_count(10, 0.1).unwrap(), 9211);
        assert_eq!(mw_round_count(1, 1.0 / std::f64::consts::E).unwrap(), 2000);
        assert!(mw_round_count(3, 1.0).is_err());
    }

    #[test]
    fn doubling_k_adds_2000_ln_2() {
        // 2000 ln 2 = 1386.29; the outer ceilings move the difference by at most one.
        for k in [2, 5, 10, 37] {
            let a = mw_round_count(k, 0.05).unwrap() as i64;
            let b = mw_round_count(2 * k, 0.05).unwrap() as i64;
            assert!((b - a - 1387).abs() <= 1, "k={k}: {}", b - a);
        }
    }

    #[test]
    fn tuned_counts() {
        assert_eq!(tuned_round_count(8, LogBase::Natural), 21);
        assert_eq!(tuned_round_count(8, LogBase::Two), 30);
        assert_eq!(tuned_round_count(1, LogBase::Natural), 1);
    }
}
