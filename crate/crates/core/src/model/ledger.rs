use crate::error::{Error, Result};

/// Why a draw was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DrawPhase {
    Learn,
    Test,
}

/// Draw counts per round, per player, per phase. Counters only grow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleLedger {
    k: usize,
    rounds: Vec<RoundCounts>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundCounts {
    pub learn: Vec<u64>,
    pub test: Vec<u64>,
}

impl SampleLedger {
    pub fn new(k: usize) -> Self {
        SampleLedger {
            k,
            rounds: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Opens a new round and returns its index.
    pub fn begin_round(&mut self) -> usize {
        self.rounds.push(RoundCounts {
            learn: vec![0; self.k],
            test: vec![0; self.k],
        });
        self.rounds.len() - 1
    }

    pub fn charge(&mut self, round: usize, player: usize, phase: DrawPhase, draws: u64) {
        let counts = &mut self.rounds[round];
        let slot = match phase {
            DrawPhase::Learn => &mut counts.learn[player],
            DrawPhase::Test => &mut counts.test[player],
        };
        *slot += draws;
    }

    pub fn rounds(&self) -> &[RoundCounts] {
        &self.rounds
    }

    pub fn per_player_phase(&self, phase: DrawPhase) -> Vec<u64> {
        let mut out = vec![0; self.k];
        for round in &self.rounds {
            let counts = match phase {
                DrawPhase::Learn => &round.learn,
                DrawPhase::Test => &round.test,
            };
            for (o, c) in out.iter_mut().zip(counts) {
                *o += c;
            }
        }
        out
    }

    pub fn per_player(&self) -> Vec<u64> {
        let learn = self.per_player_phase(DrawPhase::Learn);
        let test = self.per_player_phase(DrawPhase::Test);
        learn.iter().zip(&test).map(|(a, b)| a + b).collect()
    }

    pub fn total_phase(&self, phase: DrawPhase) -> u64 {
        self.per_player_phase(phase).iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.per_player().iter().sum()
    }

    /// Sum over rounds of every counter; equals [`SampleLedger::total`].
    pub fn total_by_rounds(&self) -> u64 {
        self.rounds
            .iter()
            .map(|r| r.learn.iter().sum::<u64>() + r.test.iter().sum::<u64>())
            .sum()
    }

    pub fn balance_ratio(&self) -> Result<f64> {
        balance_ratio(&self.per_player())
    }
}

/// Largest per-player count over the mean per-player count.
pub fn balance_ratio(counts: &[u64]) -> Result<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyLedger);
    }
    let max = *counts.iter().max().expect("nonzero total") as f64;
    Ok(max / (total as f64 / counts.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balance_examples() {
        assert_eq!(balance_ratio(&[10, 10, 10]).unwrap(), 1.0);
        assert_eq!(balance_ratio(&[30, 0, 0]).unwrap(), 3.0);
        assert_eq!(balance_ratio(&[17]).unwrap(), 1.0);
        assert!(matches!(balance_ratio(&[0, 0]), Err(Error::EmptyLedger)));
    }

    #[test]
    fn totals_agree_across_views() {
        let mut ledger = SampleLedger::new(2);
        let r0 = ledger.begin_round();
        ledger.charge(r0, 0, DrawPhase::Learn, 5);
        ledger.charge(r0, 1, DrawPhase::Test, 7);
        let r1 = ledger.begin_round();
        ledger.charge(r1, 1, DrawPhase::Learn, 3);
        assert_eq!(ledger.per_player(), vec![5, 10]);
        assert_eq!(ledger.total_phase(DrawPhase::Learn), 8);
        assert_eq!(ledger.total_phase(DrawPhase::Test), 7);
        assert_eq!(ledger.total(), 15);
        assert_eq!(ledger.total_by_rounds(), 15);
        assert_eq!(ledger.balance_ratio().unwrap(), 10.0 / 7.5);
    }
}
