//! Minimax strategies of dueling games and the price of competition.
//!
//! A dueling game is symmetric and zero-sum, so its value is 0 and `x` is
//! minimax exactly when it scores at least 0 against every pure strategy.
//! That turns the set of minimax strategies into a polytope over the
//! catalog, on which welfare is optimised by LP. Ranking duels also have a
//! compact representation through position marginals, see [`marginal`].

mod birkhoff;
pub mod marginal;

pub use birkhoff::{birkhoff_decompose, BirkhoffTerm};
pub use marginal::{ranking_minimax_marginal, ranking_price_of_competition, MarginalMatrix, MarginalOutcome};

use crate::duel::{DuelInstance, MixedStrategy, Mode, ModelError};
use crate::instances::InstanceError;
use crate::lp::{solve, LinearProgram, LpBuilder, LpError, LpStatus, Relation, Sense};
use crate::scalar::FloatScalar;

/// Default limit on catalog size for explicit-representation LPs.
pub const EXPLICIT_CAP: usize = 720;

/// Tolerance on "scores at least 0 against every pure strategy".
pub const MINIMAX_TOL: f64 = 1e-8;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("{strategies} pure strategies exceed the explicit-LP cap of {cap}; for ranking duels use the marginal path")]
    ExplicitCap { strategies: usize, cap: usize },
    #[error("marginal path needs a strictly monotone position valuation; use the explicit path")]
    NotMonotone,
    #[error("LP ended {0:?} where an optimum must exist")]
    UnexpectedStatus(LpStatus),
    #[error("matrix is not doubly stochastic within {tol:e} (deviation {deviation:e})")]
    NotDoublyStochastic { deviation: f64, tol: f64 },
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Which end of the minimax polytope to optimise towards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extreme {
    /// Least welfare, or highest cost.
    Worst,
    /// Highest welfare, or least cost.
    Best,
}

impl Extreme {
    fn sense(self, mode: Mode) -> Sense {
        match (self, mode) {
            (Extreme::Worst, Mode::Welfare) | (Extreme::Best, Mode::Cost) => Sense::Minimize,
            _ => Sense::Maximize,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinimaxOutcome<F> {
    /// Welfare (or cost) of `strategy`.
    pub value: F,
    pub strategy: MixedStrategy<F>,
    /// `min_t u(strategy, t)`; at least `-MINIMAX_TOL` for a minimax strategy.
    pub guarantee: F,
}

/// `U[s][t] = u(s, t)` for all pure pairs.
pub fn payoff_matrix<F: FloatScalar>(g: &DuelInstance<F>) -> Vec<Vec<F>> {
    let m = g.strategy_count();
    let mut u = vec![vec![F::zero(); m]; m];
    for s in 0..m {
        for t in (s + 1)..m {
            let v = g.pure_utility(s, t);
            u[s][t] = v;
            u[t][s] = -v;
        }
    }
    u
}

/// Value and optimal strategies of a general matrix game where the row
/// player maximises `xᵀ A y`. Returns `(value, row strategy, column strategy)`.
pub fn matrix_game_value<F: FloatScalar>(a: &[Vec<F>]) -> Result<(F, Vec<F>, Vec<F>), EngineError> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut b = LpBuilder::new(Sense::Maximize);
    let x: Vec<usize> = (0..rows).map(|_| b.nonneg(F::zero())).collect();
    let v = b.free(F::one());
    for j in 0..cols {
        let mut coeffs: Vec<(usize, F)> = (0..rows).map(|i| (x[i], a[i][j])).collect();
        coeffs.push((v, -F::one()));
        b.row(coeffs, Relation::Ge, F::zero());
    }
    b.row(x.iter().map(|&i| (i, F::one())).collect(), Relation::Eq, F::one());
    let sol = solve(&b.build()?)?;
    if sol.status != LpStatus::Optimal {
        return Err(EngineError::UnexpectedStatus(sol.status));
    }
    // Column duals of the `>= v` rows are the opponent's mixed strategy.
    let y: Vec<F> = sol.y[..cols].iter().map(|&w| w.abs()).collect();
    Ok((sol.objective, sol.x[..rows].to_vec(), y))
}

/// Value of the duel; 0 up to solver tolerance for every dueling game.
pub fn game_value<F: FloatScalar>(g: &DuelInstance<F>) -> Result<F, EngineError> {
    check_cap(g, EXPLICIT_CAP)?;
    Ok(matrix_game_value(&payoff_matrix(g))?.0)
}

fn check_cap<F: FloatScalar>(g: &DuelInstance<F>, cap: usize) -> Result<(), EngineError> {
    let m = g.strategy_count();
    if m > cap {
        Err(EngineError::ExplicitCap { strategies: m, cap })
    } else {
        Ok(())
    }
}

/// The minimax polytope in explicit form: `x >= 0, Σx = 1, Σ_s x_s U[s][t] >= 0` for all `t`.
#[derive(Debug, Clone)]
pub struct MinimaxPolytope<'a, F> {
    game: &'a DuelInstance<F>,
    payoff: Vec<Vec<F>>,
}

impl<'a, F: FloatScalar> MinimaxPolytope<'a, F> {
    pub fn explicit(game: &'a DuelInstance<F>) -> Result<Self, EngineError> {
        Self::explicit_capped(game, EXPLICIT_CAP)
    }

    pub fn explicit_capped(game: &'a DuelInstance<F>, cap: usize) -> Result<Self, EngineError> {
        check_cap(game, cap)?;
        Ok(Self { game, payoff: payoff_matrix(game) })
    }

    pub fn payoff(&self) -> &[Vec<F>] {
        &self.payoff
    }

    /// The LP over the polytope with the given objective on pure strategies.
    pub fn lp(&self, objective: &[F], sense: Sense) -> Result<LinearProgram<F>, EngineError> {
        let m = self.payoff.len();
        let mut b = LpBuilder::new(sense);
        for &c in objective {
            b.nonneg(c);
        }
        for t in 0..m {
            let coeffs: Vec<(usize, F)> =
                (0..m).filter(|&s| self.payoff[s][t] != F::zero()).map(|s| (s, self.payoff[s][t])).collect();
            // A column of zeros is a vacuous `0 >= 0`.
            if !coeffs.is_empty() {
                b.row(coeffs, Relation::Ge, F::zero());
            }
        }
        b.row((0..m).map(|s| (s, F::one())).collect(), Relation::Eq, F::one());
        Ok(b.build()?)
    }

    pub fn optimize(&self, objective: &[F], sense: Sense) -> Result<MinimaxOutcome<F>, EngineError> {
        let sol = solve(&self.lp(objective, sense)?)?;
        if sol.status != LpStatus::Optimal {
            return Err(EngineError::UnexpectedStatus(sol.status));
        }
        let strategy = MixedStrategy::from_solver(sol.x)?;
        let value = strategy.nonzero().map(|(s, &w)| w * objective[s]).sum();
        let guarantee = self.guarantee(&strategy);
        Ok(MinimaxOutcome { value, strategy, guarantee })
    }

    /// `min_t u(x, t)`.
    pub fn guarantee(&self, x: &MixedStrategy<F>) -> F {
        let m = self.payoff.len();
        (0..m)
            .map(|t| x.nonzero().map(|(s, &w)| w * self.payoff[s][t]).sum::<F>())
            .fold(F::infinity(), F::min)
    }

    pub fn contains(&self, x: &MixedStrategy<F>, tol: F) -> bool {
        self.guarantee(x) >= -tol
    }

    pub fn game(&self) -> &DuelInstance<F> {
        self.game
    }
}

/// `min_t u(x, t)` computed directly from the game.
pub fn minimax_guarantee<F: FloatScalar>(g: &DuelInstance<F>, x: &MixedStrategy<F>) -> F {
    g.utility_against_pure(x).into_iter().fold(F::infinity(), F::min)
}

pub fn is_minimax<F: FloatScalar>(g: &DuelInstance<F>, x: &MixedStrategy<F>) -> bool {
    minimax_guarantee(g, x) >= -F::cast_f64(MINIMAX_TOL)
}

/// Optimise welfare (or cost) over minimax strategies.
pub fn extreme_minimax<F: FloatScalar>(g: &DuelInstance<F>, extreme: Extreme, cap: usize) -> Result<MinimaxOutcome<F>, EngineError> {
    let poly = MinimaxPolytope::explicit_capped(g, cap)?;
    let objective: Vec<F> = (0..g.strategy_count()).map(|s| g.pure_value(s)).collect();
    poly.optimize(&objective, extreme.sense(g.mode()))
}

pub fn worst_minimax_welfare<F: FloatScalar>(g: &DuelInstance<F>) -> Result<MinimaxOutcome<F>, EngineError> {
    require(g, Mode::Welfare)?;
    extreme_minimax(g, Extreme::Worst, EXPLICIT_CAP)
}

pub fn best_minimax_welfare<F: FloatScalar>(g: &DuelInstance<F>) -> Result<MinimaxOutcome<F>, EngineError> {
    require(g, Mode::Welfare)?;
    extreme_minimax(g, Extreme::Best, EXPLICIT_CAP)
}

pub fn worst_minimax_cost<F: FloatScalar>(g: &DuelInstance<F>) -> Result<MinimaxOutcome<F>, EngineError> {
    require(g, Mode::Cost)?;
    extreme_minimax(g, Extreme::Worst, EXPLICIT_CAP)
}

pub fn best_minimax_cost<F: FloatScalar>(g: &DuelInstance<F>) -> Result<MinimaxOutcome<F>, EngineError> {
    require(g, Mode::Cost)?;
    extreme_minimax(g, Extreme::Best, EXPLICIT_CAP)
}

fn require<F: FloatScalar>(g: &DuelInstance<F>, mode: Mode) -> Result<(), EngineError> {
    if g.mode() == mode {
        Ok(())
    } else {
        Err(ModelError::ModeMismatch { expected: mode }.into())
    }
}

/// Worst minimax welfare over optimal welfare; 1 when every strategy has
/// welfare 0.
pub fn price_of_competition<F: FloatScalar>(g: &DuelInstance<F>) -> Result<F, EngineError> {
    let worst = worst_minimax_welfare(g)?;
    let (opt, _) = g.optimal_welfare()?;
    Ok(welfare_ratio(worst.value, opt))
}

/// `worst / opt`, or 1 when `opt <= 0`.
pub fn welfare_ratio<F: FloatScalar>(worst: F, opt: F) -> F {
    if opt <= F::zero() {
        F::one()
    } else {
        worst / opt
    }
}

/// Highest minimax cost over least cost; 1 when both are 0.
pub fn price_of_competition_cost<F: FloatScalar>(g: &DuelInstance<F>) -> Result<F, EngineError> {
    let worst = worst_minimax_cost(g)?;
    let (opt, _) = g.optimal_cost()?;
    Ok(cost_ratio(worst.value, opt))
}

/// `worst / opt`; 1 when both are 0, infinite when only `opt` is.
pub fn cost_ratio<F: FloatScalar>(worst: F, opt: F) -> F {
    if opt <= F::zero() {
        if worst <= F::zero() {
            F::one()
        } else {
            F::infinity()
        }
    } else {
        worst / opt
    }
}
