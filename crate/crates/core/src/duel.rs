//! Dueling games: requests with probabilities, a shared catalog of pure
//! strategies and the value (or cost) each strategy gives each request.
//! Per request, the player whose structure values it more wins `+1`.

use std::cmp::Ordering;

use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("probabilities sum to {sum}, not 1")]
    BadProbabilities { sum: f64 },
    #[error("negative probability at request {index}")]
    NegativeProbability { index: usize },
    #[error("value table entry ({strategy}, {request}) is negative or not finite")]
    BadValue { strategy: usize, request: usize },
    #[error("value row {strategy} has length {len}, expected {expected}")]
    RaggedValues { strategy: usize, len: usize, expected: usize },
    #[error("a game needs at least one request and one strategy")]
    Empty,
    #[error("operation needs a {expected:?}-mode instance")]
    ModeMismatch { expected: Mode },
    #[error("mixed strategy has {got} weights for {expected} strategies")]
    StrategyLength { got: usize, expected: usize },
    #[error("mixed strategy weights must be nonnegative and sum to 1 (sum {sum})")]
    BadWeights { sum: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Higher value wins; the planner maximises welfare.
    Welfare,
    /// Lower cost wins; the planner minimises cost.
    Cost,
}

/// Sums within this distance of 1 are accepted as is.
const SUM_EXACT_TOL: f64 = 1e-12;
/// Sums within this distance are renormalised; beyond it, rejected.
const SUM_RENORM_TOL: f64 = 1e-9;

fn normalise<T: Scalar>(w: Vec<T>) -> Result<Vec<T>, f64> {
    let s = crate::scalar::sum(w.iter().cloned());
    let dev = (s.clone() - T::one()).abs().as_f64();
    if dev <= SUM_EXACT_TOL && !T::is_exact() || s.is_one() {
        Ok(w)
    } else if dev <= SUM_RENORM_TOL {
        Ok(w.into_iter().map(|v| v / s.clone()).collect())
    } else {
        Err(s.as_f64())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DuelInstance<T> {
    probs: Vec<T>,
    /// `values[s][ω]`
    values: Vec<Vec<T>>,
    mode: Mode,
}

impl<T: Scalar> DuelInstance<T> {
    pub fn new(probs: Vec<T>, values: Vec<Vec<T>>, mode: Mode) -> Result<Self, ModelError> {
        if probs.is_empty() || values.is_empty() {
            return Err(ModelError::Empty);
        }
        if let Some(index) = probs.iter().position(|p| p.lt_zero()) {
            return Err(ModelError::NegativeProbability { index });
        }
        let probs = normalise(probs).map_err(|sum| ModelError::BadProbabilities { sum })?;
        let n = probs.len();
        for (s, row) in values.iter().enumerate() {
            if row.len() != n {
                return Err(ModelError::RaggedValues { strategy: s, len: row.len(), expected: n });
            }
            if let Some(request) = row.iter().position(|v| v.lt_zero() || !v.as_f64().is_finite()) {
                return Err(ModelError::BadValue { strategy: s, request });
            }
        }
        Ok(Self { probs, values, mode })
    }

    pub fn omega_count(&self) -> usize {
        self.probs.len()
    }
    pub fn strategy_count(&self) -> usize {
        self.values.len()
    }
    pub fn probs(&self) -> &[T] {
        &self.probs
    }
    pub fn values(&self) -> &[Vec<T>] {
        &self.values
    }
    pub fn value(&self, s: usize, omega: usize) -> &T {
        &self.values[s][omega]
    }
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// +1, 0 or -1 from the point of view of the player holding `a`.
    fn outcome(&self, a: &T, b: &T) -> i8 {
        let ord = a.partial_cmp(b).unwrap_or(Ordering::Equal);
        let o = match ord {
            Ordering::Greater => 1,
            Ordering::Less => -1,
            Ordering::Equal => 0,
        };
        match self.mode {
            Mode::Welfare => o,
            Mode::Cost => -o,
        }
    }

    /// Probability mass of pairs `(s, t)` with `s ~ x` strictly beating `t ~ y` on `ω`.
    fn win_mass(&self, x: &MixedStrategy<T>, y: &MixedStrategy<T>, omega: usize) -> T {
        let mut total = T::zero();
        for (s, xs) in x.nonzero() {
            let mut inner = T::zero();
            for (t, yt) in y.nonzero() {
                if self.outcome(&self.values[s][omega], &self.values[t][omega]) > 0 {
                    inner = inner + yt.clone();
                }
            }
            total = total + xs.clone() * inner;
        }
        total
    }

    /// Expected per-request outcome; written as `win(x,y) - win(y,x)` so that
    /// swapping the arguments negates the result exactly.
    pub fn utility_omega(&self, x: &MixedStrategy<T>, y: &MixedStrategy<T>, omega: usize) -> T {
        self.win_mass(x, y, omega) - self.win_mass(y, x, omega)
    }

    pub fn utility(&self, x: &MixedStrategy<T>, y: &MixedStrategy<T>) -> T {
        (0..self.omega_count()).fold(T::zero(), |acc, w| acc + self.probs[w].clone() * self.utility_omega(x, y, w))
    }

    /// Payoff of pure `s` against pure `t`.
    pub fn pure_utility(&self, s: usize, t: usize) -> T {
        let (vs, vt) = (&self.values[s], &self.values[t]);
        let mut acc = T::zero();
        for w in 0..self.omega_count() {
            match self.outcome(&vs[w], &vt[w]) {
                1 => acc = acc + self.probs[w].clone(),
                -1 => acc = acc - self.probs[w].clone(),
                _ => {}
            }
        }
        acc
    }

    /// Payoff of the mixed `x` against every pure strategy.
    pub fn utility_against_pure(&self, x: &MixedStrategy<T>) -> Vec<T> {
        (0..self.strategy_count())
            .map(|t| x.nonzero().fold(T::zero(), |acc, (s, xs)| acc + xs.clone() * self.pure_utility(s, t)))
            .collect()
    }

    /// `Σ_ω p_ω V[s][ω]`, the welfare or cost of one pure strategy.
    pub fn pure_value(&self, s: usize) -> T {
        self.values[s].iter().zip(&self.probs).fold(T::zero(), |acc, (v, p)| acc + v.clone() * p.clone())
    }

    fn expected_value(&self, x: &MixedStrategy<T>) -> Result<T, ModelError> {
        x.check_len(self.strategy_count())?;
        Ok(x.nonzero().fold(T::zero(), |acc, (s, xs)| acc + xs.clone() * self.pure_value(s)))
    }

    pub fn social_welfare(&self, x: &MixedStrategy<T>) -> Result<T, ModelError> {
        self.require(Mode::Welfare)?;
        self.expected_value(x)
    }

    pub fn social_cost(&self, x: &MixedStrategy<T>) -> Result<T, ModelError> {
        self.require(Mode::Cost)?;
        self.expected_value(x)
    }

    /// Best pure welfare; ties go to the lowest index.
    pub fn optimal_welfare(&self) -> Result<(T, usize), ModelError> {
        self.require(Mode::Welfare)?;
        Ok(self.extreme(|a, b| a > b))
    }

    /// Least pure cost; ties go to the lowest index.
    pub fn optimal_cost(&self) -> Result<(T, usize), ModelError> {
        self.require(Mode::Cost)?;
        Ok(self.extreme(|a, b| a < b))
    }

    /// The planner's optimum for whichever mode the instance has.
    pub fn optimum(&self) -> (T, usize) {
        match self.mode {
            Mode::Welfare => self.extreme(|a, b| a > b),
            Mode::Cost => self.extreme(|a, b| a < b),
        }
    }

    fn extreme(&self, better: impl Fn(&T, &T) -> bool) -> (T, usize) {
        let mut best = (self.pure_value(0), 0);
        for s in 1..self.strategy_count() {
            let v = self.pure_value(s);
            if better(&v, &best.0) {
                best = (v, s);
            }
        }
        best
    }

    fn require(&self, expected: Mode) -> Result<(), ModelError> {
        if self.mode == expected {
            Ok(())
        } else {
            Err(ModelError::ModeMismatch { expected })
        }
    }

    pub fn convert<U: Scalar>(&self) -> DuelInstance<U> {
        let c = |v: &T| crate::scalar::convert::<T, U>(v);
        DuelInstance {
            probs: self.probs.iter().map(c).collect(),
            values: self.values.iter().map(|r| r.iter().map(c).collect()).collect(),
            mode: self.mode,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy<T> {
    weights: Vec<T>,
}

impl<T: Scalar> MixedStrategy<T> {
    /// Weights must be nonnegative and sum to 1 (renormalised when off by
    /// at most 1e-9).
    pub fn new(weights: Vec<T>) -> Result<Self, ModelError> {
        if weights.is_empty() || weights.iter().any(|w| w.lt_zero()) {
            let sum = crate::scalar::sum(weights.iter().cloned()).as_f64();
            return Err(ModelError::BadWeights { sum });
        }
        let weights = normalise(weights).map_err(|sum| ModelError::BadWeights { sum })?;
        Ok(Self { weights })
    }

    /// Accept solver output: clamp float dust below zero, then normalise.
    pub fn from_solver(weights: Vec<T>) -> Result<Self, ModelError> {
        let floor = T::cast_f64(-1e-9);
        if weights.iter().any(|w| *w < floor) {
            let sum = crate::scalar::sum(weights.iter().cloned()).as_f64();
            return Err(ModelError::BadWeights { sum });
        }
        let clamped: Vec<T> = weights.into_iter().map(|w| if w.lt_zero() { T::zero() } else { w }).collect();
        let s = crate::scalar::sum(clamped.iter().cloned());
        if (s.clone() - T::one()).abs().as_f64() > 1e-6 {
            return Err(ModelError::BadWeights { sum: s.as_f64() });
        }
        Ok(Self { weights: clamped.into_iter().map(|w| w / s.clone()).collect() })
    }

    pub fn pure(count: usize, s: usize) -> Self {
        let mut weights = vec![T::zero(); count];
        weights[s] = T::one();
        Self { weights }
    }

    pub fn uniform(count: usize) -> Self {
        let w = T::one() / T::from_int(count as i64);
        Self { weights: vec![w; count] }
    }

    /// Equal weights on the listed strategies.
    pub fn uniform_over(count: usize, support: &[usize]) -> Self {
        let w = T::one() / T::from_int(support.len() as i64);
        let mut weights = vec![T::zero(); count];
        for &s in support {
            weights[s] = weights[s].clone() + w.clone();
        }
        Self { weights }
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &T)> {
        self.weights.iter().enumerate().filter(|(_, w)| !w.is_zero())
    }

    /// Strategies with weight above `threshold`.
    pub fn support(&self, threshold: f64) -> Vec<usize> {
        self.weights.iter().enumerate().filter(|(_, w)| w.as_f64() > threshold).map(|(s, _)| s).collect()
    }

    fn check_len(&self, expected: usize) -> Result<(), ModelError> {
        if self.weights.len() == expected {
            Ok(())
        } else {
            Err(ModelError::StrategyLength { got: self.weights.len(), expected })
        }
    }
}
