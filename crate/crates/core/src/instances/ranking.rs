use std::fmt;

use itertools::Itertools;

use super::InstanceError;
use crate::duel::{DuelInstance, Mode};
use crate::scalar::Scalar;

/// Largest page count for which all `n!` rankings are enumerated.
pub const RANKING_CAP: usize = 8;

/// A ranking: `order[i]` is the page at position `i` (both 0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl Permutation {
    pub fn from_order(order: Vec<usize>) -> Result<Self, InstanceError> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, &page) in order.iter().enumerate() {
            if page >= n || rank[page] != usize::MAX {
                return Err(InstanceError::InvalidParameter(format!("{order:?} is not a permutation")));
            }
            rank[page] = pos;
        }
        Ok(Self { order, rank })
    }

    pub fn identity(n: usize) -> Self {
        Self { order: (0..n).collect(), rank: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Pages listed by position.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// 0-based position of `page`.
    pub fn position(&self, page: usize) -> usize {
        self.rank[page]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// Swap the pages sitting at two positions.
    pub fn swap_positions(&self, i: usize, j: usize) -> Self {
        let mut order = self.order.clone();
        order.swap(i, j);
        Self::from_order(order).expect("swap keeps a permutation")
    }

    /// Index in the lexicographic enumeration of all `n!` orders.
    pub fn lex_index(&self) -> usize {
        let n = self.order.len();
        let mut idx = 0;
        for i in 0..n {
            let smaller_later = self.order[i + 1..].iter().filter(|&&p| p < self.order[i]).count();
            idx = idx * (n - i) + smaller_later;
        }
        idx
    }
}

impl fmt::Display for Permutation {
    /// `⟨1,3,2⟩`, pages 1-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}⟩", self.order.iter().map(|p| p + 1).join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Valuation<T> {
    /// Value (or cost) at positions `1..=n`.
    Explicit(Vec<T>),
    /// Welfare: `f(i) = c(n-i) + d`. Cost: `c(i) = c·i + d`.
    Linear { c: T, d: T },
}

/// Ranking duel parameters with probabilities sorted in descending order.
/// Page `k` of the duel is the `k`-th most likely page; `original_index`
/// maps it back to the caller's numbering.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingSpec<T> {
    probs: Vec<T>,
    original: Vec<usize>,
    positions: Vec<T>,
    linear: Option<(T, T)>,
    mode: Mode,
}

impl<T: Scalar> RankingSpec<T> {
    pub fn new(probs: Vec<T>, valuation: Valuation<T>, mode: Mode) -> Result<Self, InstanceError> {
        let n = probs.len();
        if n == 0 {
            return Err(InstanceError::InvalidParameter("a ranking duel needs at least one page".into()));
        }
        let mut original: Vec<usize> = (0..n).collect();
        original.sort_by(|&a, &b| probs[b].partial_cmp(&probs[a]).unwrap_or(std::cmp::Ordering::Equal));
        let sorted: Vec<T> = original.iter().map(|&i| probs[i].clone()).collect();
        let (positions, linear) = match valuation {
            Valuation::Explicit(v) => {
                if v.len() != n {
                    return Err(InstanceError::ValuationLength { got: v.len(), expected: n });
                }
                (v, None)
            }
            Valuation::Linear { c, d } => {
                if c.lt_zero() || d.lt_zero() {
                    return Err(InstanceError::NegativeValuation);
                }
                let v = (1..=n as i64)
                    .map(|i| match mode {
                        Mode::Welfare => c.clone() * T::from_int(n as i64 - i) + d.clone(),
                        Mode::Cost => c.clone() * T::from_int(i) + d.clone(),
                    })
                    .collect();
                (v, Some((c, d)))
            }
        };
        if positions.iter().any(|v| v.lt_zero()) {
            return Err(InstanceError::NegativeValuation);
        }
        // Probabilities go through the model's validation and normalisation.
        let sorted = DuelInstance::new(sorted, vec![positions.clone()], mode)?.probs().to_vec();
        Ok(Self { probs: sorted, original, positions, linear, mode })
    }

    /// `f(i) = c(n-i) + d` in welfare mode.
    pub fn linear(probs: Vec<T>, c: T, d: T) -> Result<Self, InstanceError> {
        Self::new(probs, Valuation::Linear { c, d }, Mode::Welfare)
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }
    pub fn probs(&self) -> &[T] {
        &self.probs
    }
    /// Value (or cost) by 0-based position.
    pub fn positions(&self) -> &[T] {
        &self.positions
    }
    pub fn original_index(&self, page: usize) -> usize {
        self.original[page]
    }
    pub fn linear_params(&self) -> Option<(&T, &T)> {
        self.linear.as_ref().map(|(c, d)| (c, d))
    }
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Strictly better at earlier positions: decreasing values, or
    /// increasing costs.
    pub fn is_strictly_monotone(&self) -> bool {
        self.positions.windows(2).all(|w| match self.mode {
            Mode::Welfare => w[0] > w[1],
            Mode::Cost => w[0] < w[1],
        })
    }

    /// Welfare (or cost) of ranking `π`: `Σ_ω p_ω f(π(ω))`.
    pub fn value_of(&self, perm: &Permutation) -> T {
        self.probs
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (w, p)| acc + p.clone() * self.positions[perm.position(w)].clone())
    }

    /// Planner's optimum by the rearrangement inequality: the largest
    /// probabilities meet the best positions.
    pub fn optimal_value(&self) -> T {
        let mut f = self.positions.clone();
        f.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        if self.mode == Mode::Cost {
            f.reverse();
        }
        self.probs.iter().zip(&f).fold(T::zero(), |acc, (p, v)| acc + p.clone() * v.clone())
    }

    /// Same parameters with another valuation.
    pub fn with_positions(&self, positions: Vec<T>) -> Result<Self, InstanceError> {
        let probs = self.original_order_probs();
        Self::new(probs, Valuation::Explicit(positions), self.mode)
    }

    fn original_order_probs(&self) -> Vec<T> {
        let mut p = vec![T::zero(); self.n()];
        for (k, &o) in self.original.iter().enumerate() {
            p[o] = self.probs[k].clone();
        }
        p
    }

    pub fn convert<U: Scalar>(&self) -> RankingSpec<U> {
        let c = |v: &T| crate::scalar::convert::<T, U>(v);
        RankingSpec {
            probs: self.probs.iter().map(c).collect(),
            original: self.original.clone(),
            positions: self.positions.iter().map(c).collect(),
            linear: self.linear.as_ref().map(|(a, b)| (c(a), c(b))),
            mode: self.mode,
        }
    }
}

/// A ranking duel with its full catalog of rankings in lexicographic order.
#[derive(Debug, Clone)]
pub struct RankingDuel<T> {
    spec: RankingSpec<T>,
    perms: Vec<Permutation>,
    game: DuelInstance<T>,
}

pub fn ranking_duel<T: Scalar>(spec: RankingSpec<T>) -> Result<RankingDuel<T>, InstanceError> {
    ranking_duel_capped(spec, RANKING_CAP)
}

pub fn ranking_duel_capped<T: Scalar>(spec: RankingSpec<T>, cap: usize) -> Result<RankingDuel<T>, InstanceError> {
    let n = spec.n();
    if n > cap {
        return Err(InstanceError::CapExceeded { what: "ranking duel page count", requested: n, cap });
    }
    let perms: Vec<Permutation> =
        (0..n).permutations(n).map(|o| Permutation::from_order(o).expect("itertools yields permutations")).collect();
    let values = perms
        .iter()
        .map(|perm| (0..n).map(|w| spec.positions[perm.position(w)].clone()).collect())
        .collect();
    let game = DuelInstance::new(spec.probs.clone(), values, spec.mode)?;
    Ok(RankingDuel { spec, perms, game })
}

impl<T: Scalar> RankingDuel<T> {
    pub fn spec(&self) -> &RankingSpec<T> {
        &self.spec
    }
    pub fn game(&self) -> &DuelInstance<T> {
        &self.game
    }
    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }
    pub fn perm(&self, s: usize) -> &Permutation {
        &self.perms[s]
    }
    pub fn n(&self) -> usize {
        self.spec.n()
    }
    pub fn index_of(&self, perm: &Permutation) -> usize {
        perm.lex_index()
    }
    pub fn index_of_order(&self, order: &[usize]) -> Result<usize, InstanceError> {
        Ok(Permutation::from_order(order.to_vec())?.lex_index())
    }
}
