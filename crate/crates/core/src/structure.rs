//! Checkers for the structural facts about minimax strategies of ranking
//! duels, and for the inequalities behind the 1/4 bound.
//!
//! All checks read probabilities off the strategy's support; they are
//! expected to hold for every minimax strategy and may fail for others.
//! Pages are 0-based indices into the probability-sorted spec, so `a < b`
//! means `p_a >= p_b`. Positions are 0-based too.

use std::collections::BTreeMap;

use crate::duel::{MixedStrategy, ModelError};
use crate::instances::{Permutation, RankingDuel};
use crate::scalar::FloatScalar;

/// Weight above which a permutation counts as played.
pub const SUPPORT_THRESHOLD: f64 = 1e-10;
/// Slack granted to every inequality.
pub const CHECK_TOL: f64 = 1e-8;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum StructureError {
    #[error("position values must be strictly decreasing for position order to decide wins")]
    NotMonotone,
    #[error("pages ({a}, {b}) out of range or not ordered with p_a >= p_b")]
    Pages { a: usize, b: usize },
    #[error("permutation {0} is not in the support or does not put b before a")]
    NotEligible(usize),
    #[error("threshold leaves no position at or above it")]
    EmptyThreshold,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    /// A zero probability makes the statement empty.
    Vacuous,
}

/// Outcome of one inequality: `slack = lhs - rhs`, absent when vacuous.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LemmaCheck {
    pub verdict: Verdict,
    pub slack: Option<f64>,
}

impl LemmaCheck {
    fn from_slack(slack: f64) -> Self {
        let verdict = if slack >= -CHECK_TOL { Verdict::Holds } else { Verdict::Violated };
        Self { verdict, slack: Some(slack) }
    }
    fn vacuous() -> Self {
        Self { verdict: Verdict::Vacuous, slack: None }
    }
    pub fn holds(&self) -> bool {
        self.verdict != Verdict::Violated
    }
}

fn require_monotone<F: FloatScalar>(duel: &RankingDuel<F>) -> Result<(), StructureError> {
    if duel.spec().is_strictly_monotone() {
        Ok(())
    } else {
        Err(StructureError::NotMonotone)
    }
}

fn check_pages(n: usize, a: usize, b: usize) -> Result<(), StructureError> {
    if a < b && b < n {
        Ok(())
    } else {
        Err(StructureError::Pages { a, b })
    }
}

fn support<F: FloatScalar>(x: &MixedStrategy<F>) -> Vec<(usize, f64)> {
    x.nonzero().map(|(s, w)| (s, w.as_f64())).filter(|&(_, w)| w > SUPPORT_THRESHOLD).collect()
}

/// Order and position statistics of two pages under a strategy.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PairOrderStats {
    pub a: usize,
    pub b: usize,
    pub a_before_b: f64,
    pub b_before_a: f64,
    /// `Pr[π(a) = i]` for each position `i`.
    pub marginals_a: Vec<f64>,
    pub marginals_b: Vec<f64>,
    /// Support permutations (catalog indices) with `a` before `b`.
    pub n_ab: Vec<usize>,
    pub n_ba: Vec<usize>,
}

impl PairOrderStats {
    pub fn new<F: FloatScalar>(duel: &RankingDuel<F>, x: &MixedStrategy<F>, a: usize, b: usize) -> Result<Self, StructureError> {
        let n = duel.n();
        if a == b || a >= n || b >= n {
            return Err(StructureError::Pages { a, b });
        }
        let mut st = Self {
            a,
            b,
            a_before_b: 0.0,
            b_before_a: 0.0,
            marginals_a: vec![0.0; n],
            marginals_b: vec![0.0; n],
            n_ab: vec![],
            n_ba: vec![],
        };
        for (s, w) in support(x) {
            let perm = duel.perm(s);
            let (pa, pb) = (perm.position(a), perm.position(b));
            st.marginals_a[pa] += w;
            st.marginals_b[pb] += w;
            if pa < pb {
                st.a_before_b += w;
                st.n_ab.push(s);
            } else {
                st.b_before_a += w;
                st.n_ba.push(s);
            }
        }
        Ok(st)
    }

    /// `Pr[lo < π(c) <= hi] + Pr[lo <= π(c) < hi]` for `c` = a or b.
    fn interval_mass(marginals: &[f64], lo: usize, hi: usize) -> f64 {
        let open_closed: f64 = marginals[lo + 1..=hi].iter().sum();
        let closed_open: f64 = marginals[lo..hi].iter().sum();
        open_closed + closed_open
    }
}

/// The swap inequality for a support permutation `π_ba` placing `b` at `i`
/// and `a` at `j > i`:
/// `Pr[i<π(b)≤j] + Pr[i≤π(b)<j] >= (p_a/p_b)(Pr[i<π(a)≤j] + Pr[i≤π(a)<j])`.
pub fn check_swap_inequality<F: FloatScalar>(
    duel: &RankingDuel<F>,
    x: &MixedStrategy<F>,
    a: usize,
    b: usize,
    pi_ba: usize,
) -> Result<LemmaCheck, StructureError> {
    require_monotone(duel)?;
    check_pages(duel.n(), a, b)?;
    let st = PairOrderStats::new(duel, x, a, b)?;
    if !st.n_ba.contains(&pi_ba) {
        return Err(StructureError::NotEligible(pi_ba));
    }
    let p = duel.spec().probs();
    let (pa, pb) = (p[a].as_f64(), p[b].as_f64());
    if pb == 0.0 {
        return Ok(LemmaCheck::vacuous());
    }
    let perm = duel.perm(pi_ba);
    let (i, j) = (perm.position(b), perm.position(a));
    let lhs = PairOrderStats::interval_mass(&st.marginals_b, i, j);
    let rhs = pa / pb * PairOrderStats::interval_mass(&st.marginals_a, i, j);
    Ok(LemmaCheck::from_slack(lhs - rhs))
}

/// `Pr[a before b] >= (p_a/(2p_b) - 1)·Pr[b before a]`.
pub fn check_pair_order<F: FloatScalar>(duel: &RankingDuel<F>, x: &MixedStrategy<F>, a: usize, b: usize) -> Result<LemmaCheck, StructureError> {
    require_monotone(duel)?;
    check_pages(duel.n(), a, b)?;
    let p = duel.spec().probs();
    let (pa, pb) = (p[a].as_f64(), p[b].as_f64());
    if pb == 0.0 {
        return Ok(LemmaCheck::vacuous());
    }
    let st = PairOrderStats::new(duel, x, a, b)?;
    Ok(LemmaCheck::from_slack(st.a_before_b - (pa / (2.0 * pb) - 1.0) * st.b_before_a))
}

/// `h_ab >= max{p_b, p_a - 2p_b + 2p_b²/p_a}`.
pub fn check_h_bounds<F: FloatScalar>(duel: &RankingDuel<F>, x: &MixedStrategy<F>, a: usize, b: usize) -> Result<LemmaCheck, StructureError> {
    require_monotone(duel)?;
    check_pages(duel.n(), a, b)?;
    let p = duel.spec().probs();
    let (pa, pb) = (p[a].as_f64(), p[b].as_f64());
    if pa == 0.0 {
        return Ok(LemmaCheck::vacuous());
    }
    let st = PairOrderStats::new(duel, x, a, b)?;
    let h = pa * st.a_before_b + pb * st.b_before_a;
    let bound = pb.max(pa - 2.0 * pb + 2.0 * pb * pb / pa);
    Ok(LemmaCheck::from_slack(h - bound))
}

/// The permutations chosen by the greedy cover of `N_ba`: repeatedly take
/// the one with the rightmost `a`, then drop every permutation whose
/// interval `[π(b), π(a)]` meets the chosen one.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct IntervalCover {
    pub a: usize,
    pub b: usize,
    /// Catalog indices, in selection order.
    pub selected: Vec<usize>,
    /// `[π(b), π(a)]` of each selected permutation.
    pub intervals: Vec<(usize, usize)>,
    /// `N_ba` as `(index, weight, π(b), π(a))`.
    n_ba: Vec<(usize, f64, usize, usize)>,
    /// Every support permutation as `(weight, π(a), π(b))`.
    all: Vec<(f64, usize, usize)>,
}

pub fn interval_cover<F: FloatScalar>(duel: &RankingDuel<F>, x: &MixedStrategy<F>, a: usize, b: usize) -> Result<IntervalCover, StructureError> {
    if a == b || a >= duel.n() || b >= duel.n() {
        return Err(StructureError::Pages { a, b });
    }
    let mut all = Vec::new();
    let mut n_ba = Vec::new();
    for (s, w) in support(x) {
        let perm: &Permutation = duel.perm(s);
        let (pa, pb) = (perm.position(a), perm.position(b));
        all.push((w, pa, pb));
        if pb < pa {
            n_ba.push((s, w, pb, pa));
        }
    }
    let mut remaining = n_ba.clone();
    let mut selected = Vec::new();
    let mut intervals = Vec::new();
    while !remaining.is_empty() {
        // Rightmost a; ties go to the smallest catalog index.
        let &(s, _, lo, hi) = remaining
            .iter()
            .max_by(|x, y| x.3.cmp(&y.3).then(y.0.cmp(&x.0)))
            .expect("nonempty");
        selected.push(s);
        intervals.push((lo, hi));
        remaining.retain(|&(_, _, l, h)| h < lo || l > hi);
    }
    Ok(IntervalCover { a, b, selected, intervals, n_ba, all })
}

impl IntervalCover {
    pub fn pairwise_disjoint(&self) -> bool {
        self.intervals.iter().enumerate().all(|(k, &(l1, h1))| self.intervals[k + 1..].iter().all(|&(l2, h2)| h1 < l2 || h2 < l1))
    }

    /// Every `π' ∈ N_ba` has `π'(a)` inside some selected interval.
    pub fn covers_n_ba(&self) -> bool {
        self.n_ba.iter().all(|&(_, _, _, pa)| self.intervals.iter().any(|&(l, h)| l <= pa && pa <= h))
    }

    /// `r_c(π', π)`: 2 strictly inside the interval of `π`, 1 on an end, else 0.
    pub fn r(position: usize, interval: (usize, usize)) -> u32 {
        let (l, h) = interval;
        if l < position && position < h {
            2
        } else if position == l || position == h {
            1
        } else {
            0
        }
    }

    /// `max_{π'} Σ_{π ∈ Π} r_b(π', π)` over the support; at most 2 for a
    /// disjoint cover.
    pub fn max_rb_sum(&self) -> u32 {
        self.all.iter().map(|&(_, _, pb)| self.intervals.iter().map(|&iv| Self::r(pb, iv)).sum()).max().unwrap_or(0)
    }

    /// `(R_a^{ab}, R_a^{ba}, R_b^{ab}, R_b^{ba})`: weighted sums of `r_c`
    /// over support permutations split by the order of `a` and `b`.
    pub fn r_totals(&self) -> (f64, f64, f64, f64) {
        let mut t = (0.0, 0.0, 0.0, 0.0);
        for &(w, pa, pb) in &self.all {
            let ra: u32 = self.intervals.iter().map(|&iv| Self::r(pa, iv)).sum();
            let rb: u32 = self.intervals.iter().map(|&iv| Self::r(pb, iv)).sum();
            if pa < pb {
                t.0 += w * ra as f64;
                t.2 += w * rb as f64;
            } else {
                t.1 += w * ra as f64;
                t.3 += w * rb as f64;
            }
        }
        t
    }

    /// The cover invariants and `Σ_π r_b(π', π) <= 2`.
    pub fn is_valid(&self) -> bool {
        self.pairwise_disjoint() && self.covers_n_ba() && self.max_rb_sum() <= 2
    }
}

/// The proof's response to `x`: play `π` when page `i` already sits at a
/// position worth at least `α`; otherwise swap `i` with a uniformly chosen
/// page that does.
pub fn swap_response<F: FloatScalar>(duel: &RankingDuel<F>, x: &MixedStrategy<F>, i: usize, alpha: f64) -> Result<MixedStrategy<F>, StructureError> {
    let f: Vec<f64> = duel.spec().positions().iter().map(|v| v.as_f64()).collect();
    let top: Vec<usize> = (0..f.len()).filter(|&pos| f[pos] >= alpha).collect();
    if top.is_empty() {
        return Err(StructureError::EmptyThreshold);
    }
    let k = F::from_int(top.len() as i64);
    let mut w = vec![F::zero(); duel.perms().len()];
    for (s, &ws) in x.nonzero() {
        let perm = duel.perm(s);
        if f[perm.position(i)] >= alpha {
            w[s] += ws;
        } else {
            for &pos in &top {
                let swapped = perm.swap_positions(perm.position(i), pos);
                w[duel.index_of(&swapped)] += ws / k;
            }
        }
    }
    Ok(MixedStrategy::from_solver(w)?)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct QuarterCheck {
    pub alpha: f64,
    pub k: usize,
    /// `q_ω = Pr[f(π(ω)) >= α]`.
    pub q: Vec<f64>,
    /// For pages `0..k`: `Σ_ω 2p_ω q_ω / k - p_i(1 - q_i)²`.
    pub slacks: Vec<f64>,
    /// `u(x, x'_i)` for pages `0..k`.
    pub response_utilities: Vec<f64>,
    pub holds: bool,
}

/// For a threshold `α` with `k` positions worth at least `α`, checks
/// `p_i(1-q_i)² <= Σ_ω 2p_ω q_ω / k` for the `k` most likely pages, and that
/// `x` does not lose to the swap response `x'_i`.
pub fn check_quarter_inequalities<F: FloatScalar>(duel: &RankingDuel<F>, x: &MixedStrategy<F>, alpha: f64) -> Result<QuarterCheck, StructureError> {
    let n = duel.n();
    let f: Vec<f64> = duel.spec().positions().iter().map(|v| v.as_f64()).collect();
    let k = f.iter().filter(|&&v| v >= alpha).count();
    if k == 0 {
        return Err(StructureError::EmptyThreshold);
    }
    let p: Vec<f64> = duel.spec().probs().iter().map(|v| v.as_f64()).collect();
    let mut q = vec![0.0; n];
    for (s, w) in x.nonzero() {
        let perm = duel.perm(s);
        for (page, qp) in q.iter_mut().enumerate() {
            if f[perm.position(page)] >= alpha {
                *qp += w.as_f64();
            }
        }
    }
    let rhs: f64 = p.iter().zip(&q).map(|(pw, qw)| 2.0 * pw * qw).sum::<f64>() / k as f64;
    let slacks: Vec<f64> = (0..k).map(|i| rhs - p[i] * (1.0 - q[i]).powi(2)).collect();
    let response_utilities = (0..k)
        .map(|i| Ok(duel.game().utility(x, &swap_response(duel, x, i, alpha)?).as_f64()))
        .collect::<Result<Vec<_>, StructureError>>()?;
    let holds = slacks.iter().chain(&response_utilities).all(|&s| s >= -CHECK_TOL);
    Ok(QuarterCheck { alpha, k, q, slacks, response_utilities, holds })
}

/// Pass/fail tally of one lemma over many checks.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize)]
pub struct LemmaTally {
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    pub vacuous: usize,
    pub worst_slack: Option<f64>,
}

impl LemmaTally {
    /// Adds `other`'s counts; the worst slack is the smaller of the two.
    pub fn merge(&mut self, other: &LemmaTally) {
        self.checked += other.checked;
        self.passed += other.passed;
        self.failed += other.failed;
        self.vacuous += other.vacuous;
        self.worst_slack = match (self.worst_slack, other.worst_slack) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }

    fn add(&mut self, c: LemmaCheck) {
        self.checked += 1;
        match c.verdict {
            Verdict::Holds => self.passed += 1,
            Verdict::Violated => self.failed += 1,
            Verdict::Vacuous => self.vacuous += 1,
        }
        if let Some(s) = c.slack {
            self.worst_slack = Some(self.worst_slack.map_or(s, |w: f64| w.min(s)));
        }
    }
    fn add_bool(&mut self, ok: bool, slack: Option<f64>) {
        let verdict = if ok { Verdict::Holds } else { Verdict::Violated };
        self.add(LemmaCheck { verdict, slack });
    }
}

/// Every checker over every eligible pair (and threshold) of one strategy,
/// keyed by lemma name.
pub fn structure_report<F: FloatScalar>(duel: &RankingDuel<F>, x: &MixedStrategy<F>) -> Result<BTreeMap<String, LemmaTally>, StructureError> {
    require_monotone(duel)?;
    let n = duel.n();
    let mut out: BTreeMap<String, LemmaTally> = BTreeMap::new();
    for a in 0..n {
        for b in a + 1..n {
            let st = PairOrderStats::new(duel, x, a, b)?;
            for &s in &st.n_ba {
                let c = check_swap_inequality(duel, x, a, b, s)?;
                out.entry("swap".into()).or_default().add(c);
            }
            out.entry("pair_order".into()).or_default().add(check_pair_order(duel, x, a, b)?);
            out.entry("h_bounds".into()).or_default().add(check_h_bounds(duel, x, a, b)?);
            let cover = interval_cover(duel, x, a, b)?;
            out.entry("interval_cover".into()).or_default().add_bool(cover.is_valid(), Some(2.0 - cover.max_rb_sum() as f64));
        }
    }
    let mut levels: Vec<f64> = duel.spec().positions().iter().map(|v| v.as_f64()).collect();
    levels.sort_by(|a, b| a.partial_cmp(b).expect("not NaN"));
    levels.dedup();
    for alpha in levels {
        let qc = check_quarter_inequalities(duel, x, alpha)?;
        let worst = qc.slacks.iter().chain(&qc.response_utilities).copied().fold(f64::INFINITY, f64::min);
        out.entry("quarter".into()).or_default().add_bool(qc.holds, Some(worst));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::appendix_example;

    #[test]
    fn interval_mass_counts_inner_positions_twice() {
        let m = [0.1, 0.2, 0.3, 0.4];
        // lo=0, hi=2: (0.2+0.3) + (0.1+0.2)
        assert!((PairOrderStats::interval_mass(&m, 0, 2) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn appendix_pair_checks() {
        let ex = appendix_example::<f64>().unwrap();
        let h = check_h_bounds(&ex.duel, &ex.xstar, 0, 1).unwrap();
        assert!(h.holds() && h.slack.unwrap().abs() < 1e-12);
        let po = check_pair_order(&ex.duel, &ex.xstar, 0, 2).unwrap();
        assert!((po.slack.unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn r_values() {
        assert_eq!(IntervalCover::r(2, (1, 4)), 2);
        assert_eq!(IntervalCover::r(1, (1, 4)), 1);
        assert_eq!(IntervalCover::r(5, (1, 4)), 0);
    }
}
