//! Threshold (0-1) views of a welfare game and the bound they give on the
//! price of competition.
//!
//! For a threshold `α`, the trigger `v̂_ω^α(s)` is 1 when `v_ω(s) >= α`.
//! Every value is the integral of its triggers over `α`, and the triggers
//! only change at the finitely many distinct values of `V`, so the integral
//! is an exact finite sum over those breakpoints.

use crate::duel::{DuelInstance, MixedStrategy, Mode, ModelError};
use crate::minimax::{welfare_ratio, worst_minimax_welfare, EngineError, MinimaxOutcome};
use crate::scalar::FloatScalar;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ZeroOneError {
    #[error("thresholds need a welfare game")]
    CostMode,
    #[error("value {value} is negative; triggers are defined for nonnegative valuations")]
    NegativeValue { value: f64 },
    #[error("threshold {0} is negative")]
    NegativeThreshold(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

fn check_game<F: FloatScalar>(g: &DuelInstance<F>) -> Result<(), ZeroOneError> {
    if g.mode() != Mode::Welfare {
        return Err(ZeroOneError::CostMode);
    }
    if let Some(v) = g.values().iter().flatten().find(|v| v.lt_zero()) {
        return Err(ZeroOneError::NegativeValue { value: v.as_f64() });
    }
    Ok(())
}

/// The 0-1 table `v̂_ω^α(s)` of a game at one threshold.
#[derive(Debug, Clone)]
pub struct TriggerView<'a, F> {
    game: &'a DuelInstance<F>,
    alpha: F,
    table: Vec<Vec<bool>>,
}

impl<'a, F: FloatScalar> TriggerView<'a, F> {
    pub fn new(game: &'a DuelInstance<F>, alpha: F) -> Result<Self, ZeroOneError> {
        check_game(game)?;
        if alpha.lt_zero() {
            return Err(ZeroOneError::NegativeThreshold(alpha.as_f64()));
        }
        let table = game.values().iter().map(|row| row.iter().map(|&v| v >= alpha).collect()).collect();
        Ok(Self { game, alpha, table })
    }

    pub fn alpha(&self) -> F {
        self.alpha
    }
    pub fn game(&self) -> &DuelInstance<F> {
        self.game
    }
    pub fn trigger(&self, s: usize, omega: usize) -> bool {
        self.table[s][omega]
    }

    /// `ŜW(s, α) = Σ_ω p_ω v̂_ω^α(s)`.
    pub fn pure_pseudo_welfare(&self, s: usize) -> F {
        self.table[s].iter().zip(self.game.probs()).filter(|(t, _)| **t).map(|(_, &p)| p).sum()
    }

    /// The triggers as a welfare game of their own.
    pub fn as_game(&self) -> DuelInstance<F> {
        let values = self.table.iter().map(|row| row.iter().map(|&t| if t { F::one() } else { F::zero() }).collect()).collect();
        DuelInstance::new(self.game.probs().to_vec(), values, Mode::Welfare).expect("same probabilities")
    }
}

/// `ŜW(x, α) = E_{s∼x} ŜW(s, α)`.
pub fn pseudo_welfare<F: FloatScalar>(view: &TriggerView<'_, F>, x: &MixedStrategy<F>) -> F {
    x.nonzero().map(|(s, &w)| w * view.pure_pseudo_welfare(s)).sum()
}

/// Distinct values of `V`, ascending.
pub fn thresholds<F: FloatScalar>(g: &DuelInstance<F>) -> Vec<F> {
    let mut t: Vec<F> = g.values().iter().flatten().copied().collect();
    t.sort_by(|a, b| a.partial_cmp(b).expect("values are not NaN"));
    t.dedup();
    t
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PocAlpha {
    pub alpha: f64,
    pub xstar_pseudo_welfare: f64,
    pub opt_pseudo_welfare: f64,
    /// `ŜW(x*, α) / ŜW(OPT, α)`, or 1 when the denominator is 0.
    pub ratio: f64,
}

/// `x*` (least-welfare minimax) and `OPT` (best pure welfare), both fixed
/// under the original values and reused for every threshold.
#[derive(Debug, Clone)]
pub struct ZeroOneAnalysis<'a, F> {
    game: &'a DuelInstance<F>,
    xstar: MinimaxOutcome<F>,
    opt: usize,
}

impl<'a, F: FloatScalar> ZeroOneAnalysis<'a, F> {
    pub fn new(game: &'a DuelInstance<F>) -> Result<Self, ZeroOneError> {
        check_game(game)?;
        let xstar = worst_minimax_welfare(game)?;
        let (_, opt) = game.optimal_welfare()?;
        Ok(Self { game, xstar, opt })
    }

    /// Use a given least-welfare minimax strategy instead of solving for one.
    pub fn with_xstar(game: &'a DuelInstance<F>, xstar: MinimaxOutcome<F>) -> Result<Self, ZeroOneError> {
        check_game(game)?;
        let (_, opt) = game.optimal_welfare()?;
        Ok(Self { game, xstar, opt })
    }

    pub fn xstar(&self) -> &MinimaxOutcome<F> {
        &self.xstar
    }
    pub fn opt(&self) -> usize {
        self.opt
    }

    pub fn poc_alpha(&self, alpha: F) -> Result<PocAlpha, ZeroOneError> {
        let view = TriggerView::new(self.game, alpha)?;
        let xs = pseudo_welfare(&view, &self.xstar.strategy);
        let op = view.pure_pseudo_welfare(self.opt);
        Ok(PocAlpha {
            alpha: alpha.as_f64(),
            xstar_pseudo_welfare: xs.as_f64(),
            opt_pseudo_welfare: op.as_f64(),
            ratio: welfare_ratio(xs, op).as_f64(),
        })
    }

    /// `min_α PoC_α` over the breakpoints, next to the price of competition.
    pub fn bound(&self) -> Result<ZeroOneReport, ZeroOneError> {
        let per_threshold = thresholds(self.game).into_iter().map(|a| self.poc_alpha(a)).collect::<Result<Vec<_>, _>>()?;
        let argmin = per_threshold
            .iter()
            .min_by(|a, b| a.ratio.partial_cmp(&b.ratio).expect("ratios are finite"))
            .expect("a game has at least one value");
        let (opt, _) = self.game.optimal_welfare()?;
        let poc = welfare_ratio(self.xstar.value, opt).as_f64();
        Ok(ZeroOneReport {
            bound: argmin.ratio,
            argmin_alpha: argmin.alpha,
            poc,
            holds: argmin.ratio <= poc + ZERO_ONE_TOL,
            per_threshold,
        })
    }
}

/// Slack allowed in `bound <= PoC`.
pub const ZERO_ONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ZeroOneReport {
    pub bound: f64,
    pub argmin_alpha: f64,
    pub poc: f64,
    /// `bound <= poc` within [`ZERO_ONE_TOL`].
    pub holds: bool,
    pub per_threshold: Vec<PocAlpha>,
}

pub fn poc_alpha<F: FloatScalar>(g: &DuelInstance<F>, alpha: F) -> Result<PocAlpha, ZeroOneError> {
    ZeroOneAnalysis::new(g)?.poc_alpha(alpha)
}

pub fn zero_one_bound<F: FloatScalar>(g: &DuelInstance<F>) -> Result<ZeroOneReport, ZeroOneError> {
    ZeroOneAnalysis::new(g)?.bound()
}

/// `(SW(x), Σ_j (t_j - t_{j-1}) ŜW(x, t_j))` over the ascending breakpoints
/// `t_j` with `t_0 = 0`.
pub fn layer_decomposition<F: FloatScalar>(g: &DuelInstance<F>, x: &MixedStrategy<F>) -> Result<(F, F), ZeroOneError> {
    check_game(g)?;
    let sw = g.social_welfare(x)?;
    let mut prev = F::zero();
    let mut total = F::zero();
    for t in thresholds(g).into_iter().filter(|t| t.gt_zero()) {
        let view = TriggerView::new(g, t)?;
        total += (t - prev) * pseudo_welfare(&view, x);
        prev = t;
    }
    Ok((sw, total))
}

/// Tolerance of the layer reconstruction, relative to `max(1, SW)`.
pub const LAYER_TOL: f64 = 1e-10;

pub fn layer_decomposition_check<F: FloatScalar>(g: &DuelInstance<F>, x: &MixedStrategy<F>) -> Result<bool, ZeroOneError> {
    let (sw, layers) = layer_decomposition(g, x)?;
    let (sw, layers) = (sw.as_f64(), layers.as_f64());
    Ok((sw - layers).abs() <= LAYER_TOL * sw.abs().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> DuelInstance<f64> {
        DuelInstance::new(vec![0.5, 0.5], vec![vec![2.0, 0.0], vec![1.0, 1.0]], Mode::Welfare).unwrap()
    }

    #[test]
    fn trigger_table_and_pseudo_welfare() {
        let g = tiny();
        let v = TriggerView::new(&g, 1.0).unwrap();
        assert!(v.trigger(0, 0) && !v.trigger(0, 1) && v.trigger(1, 1));
        assert_eq!(v.pure_pseudo_welfare(1), 1.0);
        let x = MixedStrategy::new(vec![0.5, 0.5]).unwrap();
        assert!((pseudo_welfare(&v, &x) - 0.75).abs() < 1e-15);
        assert_eq!(thresholds(&g), vec![0.0, 1.0, 2.0]);
        assert!(TriggerView::new(&g, -1.0).is_err());
    }

    #[test]
    fn layers_rebuild_welfare() {
        let g = tiny();
        let x = MixedStrategy::new(vec![0.25, 0.75]).unwrap();
        let (sw, layers) = layer_decomposition(&g, &x).unwrap();
        assert!((sw - 1.0).abs() < 1e-15 && (layers - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cost_games_are_refused() {
        let g = DuelInstance::new(vec![1.0], vec![vec![1.0]], Mode::Cost).unwrap();
        assert_eq!(TriggerView::new(&g, 0.0).unwrap_err(), ZeroOneError::CostMode);
    }
}
