//! Minimax strategies of a ranking duel through position marginals.
//!
//! Payoffs against a fixed opponent ranking `σ` depend on `x` only through
//! `q[ω][i] = Pr_{π~x}[π(ω) = i]`:
//!
//! `u(x, σ) = Σ_ω M[ω][σ(ω)]`, with `M[ω][j] = p_ω Σ_i q[ω][i]·sign(f(i) - f(j))`.
//!
//! The opponent's best reply is an assignment problem, whose LP over the
//! Birkhoff polytope is integral. Its dual, `max Σu + Σv` subject to
//! `u_ω + v_j <= M[ω][j]`, turns "`u(x, σ) >= 0` for every `σ`" into the
//! linear system
//!
//! ```text
//! u_ω + v_j - p_ω Σ_i sign(f(i) - f(j))·q[ω][i] <= 0    for all ω, j
//! Σ_ω u_ω + Σ_j v_j >= 0
//! ```
//!
//! over doubly stochastic `q` and free `u`, `v`: `n² + 2n` variables and
//! `n² + 2n` rows (one column-sum row is dropped as redundant).

use super::{EngineError, Extreme};
use crate::duel::{MixedStrategy, Mode};
use crate::instances::{Permutation, RankingDuel, RankingSpec};
use crate::lp::{solve, LpBuilder, LpStatus, Relation};
use crate::scalar::FloatScalar;

/// Row/column-sum tolerance accepted by [`MarginalMatrix::new`].
pub const MARGINAL_TOL: f64 = 1e-9;

/// `q[ω][i] = Pr[π(ω) = i]`, row-major, pages by row and positions by column.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalMatrix<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: FloatScalar> MarginalMatrix<F> {
    pub fn new(n: usize, data: Vec<F>) -> Result<Self, EngineError> {
        Self::with_tolerance(n, data, MARGINAL_TOL)
    }

    pub fn with_tolerance(n: usize, data: Vec<F>, tol: f64) -> Result<Self, EngineError> {
        assert_eq!(data.len(), n * n, "n×n entries");
        let m = Self { n, data };
        let deviation = m.deviation();
        if deviation > tol {
            return Err(EngineError::NotDoublyStochastic { deviation, tol });
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, EngineError> {
        let n = rows.len();
        Self::new(n, rows.into_iter().flatten().collect())
    }

    /// Largest violation among row sums, column sums and `[0, 1]` bounds.
    pub fn deviation(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            let r: F = (0..n).map(|j| self.get(i, j)).sum();
            let c: F = (0..n).map(|j| self.get(j, i)).sum();
            worst = worst.max((r - F::one()).abs().as_f64()).max((c - F::one()).abs().as_f64());
        }
        for &v in &self.data {
            worst = worst.max((-v).as_f64()).max((v - F::one()).as_f64());
        }
        worst
    }

    /// Marginals of a mixed strategy over a ranking catalog.
    pub fn from_strategy(duel: &RankingDuel<F>, x: &MixedStrategy<F>) -> Self {
        let n = duel.n();
        let mut data = vec![F::zero(); n * n];
        for (s, &w) in x.nonzero() {
            let perm = duel.perm(s);
            for page in 0..n {
                data[page * n + perm.position(page)] += w;
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, page: usize, position: usize) -> F {
        self.data[page * self.n + position]
    }

    pub fn rows(&self) -> Vec<Vec<F>> {
        self.data.chunks(self.n).map(<[F]>::to_vec).collect()
    }

    /// `Σ_{ω,i} p_ω q[ω][i] f(i)`.
    pub fn welfare(&self, spec: &RankingSpec<F>) -> F {
        let (p, f) = (spec.probs(), spec.positions());
        (0..self.n).map(|w| (0..self.n).map(|i| p[w] * self.get(w, i) * f[i]).sum::<F>()).sum()
    }

    /// Payoff against a pure ranking, computed from marginals alone.
    pub fn payoff_against(&self, spec: &RankingSpec<F>, sigma: &Permutation) -> F {
        let (p, f) = (spec.probs(), spec.positions());
        let mut acc = F::zero();
        for w in 0..self.n {
            let j = sigma.position(w);
            for i in 0..self.n {
                acc += p[w] * self.get(w, i) * F::cast_f64(outcome(spec.mode(), f[i], f[j]));
            }
        }
        acc
    }
}

fn outcome<F: FloatScalar>(mode: Mode, mine: F, theirs: F) -> f64 {
    let s = if mine > theirs {
        1.0
    } else if mine < theirs {
        -1.0
    } else {
        0.0
    };
    match mode {
        Mode::Welfare => s,
        Mode::Cost => -s,
    }
}

#[derive(Debug, Clone)]
pub struct MarginalOutcome<F> {
    pub value: F,
    pub q: MarginalMatrix<F>,
}

/// Price of competition (welfare or cost, per the instance's mode) through the
/// marginal path; no catalog is built.
pub fn ranking_price_of_competition<F: FloatScalar>(spec: &RankingSpec<F>) -> Result<F, EngineError> {
    let worst = ranking_minimax_marginal(spec, Extreme::Worst)?;
    let opt = spec.optimal_value();
    Ok(match spec.mode() {
        Mode::Welfare => super::welfare_ratio(worst.value, opt),
        Mode::Cost => super::cost_ratio(worst.value, opt),
    })
}

/// Worst (or best) minimax welfare, or cost in cost mode, of a ranking duel
/// without enumerating rankings.
pub fn ranking_minimax_marginal<F: FloatScalar>(spec: &RankingSpec<F>, extreme: Extreme) -> Result<MarginalOutcome<F>, EngineError> {
    if !spec.is_strictly_monotone() {
        return Err(EngineError::NotMonotone);
    }
    let n = spec.n();
    let (p, f) = (spec.probs(), spec.positions());
    let mut b = LpBuilder::new(extreme.sense(spec.mode()));
    let q = |w: usize, i: usize| w * n + i;
    for w in 0..n {
        for i in 0..n {
            b.named_var(format!("q_{w}_{i}"), p[w] * f[i], Some(F::zero()), None);
        }
    }
    // Shifting every u up and every v down by the same amount changes
    // nothing, so u_0 is pinned at zero to keep the feasible set line-free.
    let u: Vec<usize> = (0..n)
        .map(|w| {
            let pin = (w == 0).then(F::zero);
            b.named_var(format!("u_{w}"), F::zero(), pin, pin)
        })
        .collect();
    let v: Vec<usize> = (0..n).map(|j| b.named_var(format!("v_{j}"), F::zero(), None, None)).collect();
    for w in 0..n {
        b.row((0..n).map(|i| (q(w, i), F::one())).collect(), Relation::Eq, F::one());
    }
    for i in 0..n.saturating_sub(1) {
        b.row((0..n).map(|w| (q(w, i), F::one())).collect(), Relation::Eq, F::one());
    }
    for w in 0..n {
        for j in 0..n {
            let mut coeffs = vec![(u[w], F::one()), (v[j], F::one())];
            for i in 0..n {
                let s = outcome(spec.mode(), f[i], f[j]);
                if s != 0.0 {
                    coeffs.push((q(w, i), -p[w] * F::cast_f64(s)));
                }
            }
            b.row(coeffs, Relation::Le, F::zero());
        }
    }
    b.row(u.iter().chain(&v).map(|&k| (k, F::one())).collect(), Relation::Ge, F::zero());
    let sol = solve(&b.build()?)?;
    if sol.status != LpStatus::Optimal {
        return Err(EngineError::UnexpectedStatus(sol.status));
    }
    let data: Vec<F> = sol.x[..n * n].iter().map(|&x| x.max(F::zero())).collect();
    let q = MarginalMatrix::with_tolerance(n, data, 1e-7)?;
    Ok(MarginalOutcome { value: sol.objective, q })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_page() {
        let spec = RankingSpec::<f64>::linear(vec![1.0], 1.0, 2.0).unwrap();
        let out = ranking_minimax_marginal(&spec, Extreme::Worst).unwrap();
        assert_eq!(out.q.rows(), vec![vec![1.0]]);
        assert!((out.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn refuses_non_monotone() {
        use crate::instances::Valuation;
        let spec = RankingSpec::new(vec![0.5, 0.5], Valuation::Explicit(vec![1.0, 1.0]), Mode::Welfare).unwrap();
        assert!(matches!(ranking_minimax_marginal(&spec, Extreme::Worst), Err(EngineError::NotMonotone)));
    }

    #[test]
    fn rejects_non_stochastic() {
        assert!(MarginalMatrix::from_rows(vec![vec![0.5, 0.6], vec![0.5, 0.4]]).is_err());
    }
}
