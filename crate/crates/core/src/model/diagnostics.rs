/// Per-round record of the quantities the correctness argument tracks.
///
/// Fields that need exact distribution errors are `None` when the instance
/// only offers sampling access.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundDiagnostics {
    pub round: usize,
    /// `ln W^{(t)}`, total weight before the update.
    pub ln_total_weight: f64,
    /// `W^{(t+1)} / W^{(t)}`.
    pub growth: f64,
    /// `Q^{(t)} = ln(W^{(t+1)} / W^{(t)})`, at most `ln 2`.
    pub q: f64,
    /// Mixture probabilities `p^{(t)}` used this round.
    pub probabilities: Vec<f64>,
    /// Players kept by the accuracy test (weight unchanged).
    pub kept: Vec<bool>,
    /// `err_{D_i}(g^{(t)})` per player.
    pub player_errors: Option<Vec<f64>>,
    /// Learner failure: `err_{D^{(t)}}(g^{(t)})` above the learner's accuracy target.
    pub chi: Option<bool>,
    /// Test failure per player: kept although `err > eps/4`, or dropped
    /// although `err <= eps/12`.
    pub psi: Option<Vec<bool>>,
    /// `p^{(t)}`-mass of players with `err > eps/12`.
    pub markov_mass: Option<f64>,
}

impl RoundDiagnostics {
    pub fn total_weight(&self) -> f64 {
        self.ln_total_weight.exp()
    }

    pub fn psi_count(&self) -> Option<usize> {
        self.psi.as_ref().map(|p| p.iter().filter(|&&x| x).count())
    }
}
