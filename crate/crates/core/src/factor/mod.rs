//! Lower bounds on the price of competition of linear ranking duels through
//! a factor-revealing LP.
//!
//! For `k` pages with probabilities `p_1 >= … >= p_k` and pair contributions
//! `h_ab`, LP4 minimises `Σ h_ab` subject to
//!
//! ```text
//! Σ_a p_a (k - a) = 1
//! h_ab >= p_b,  h_ab >= p_a - 2 p_b,  h_ab >= (p_a - p_b)/1.208,  h_ab >= (2 p_a - p_b)/3.2
//! ```
//!
//! Its optimum `α_k` bounds the ratio for every linear ranking duel with at
//! least `k` pages. LP5 is its dual, with `θ` on the normalisation row and
//! `β, γ, λ, ρ` on the four pair rows; a feasible LP5 point is therefore a
//! certificate for a lower bound on `α_k`.

pub mod table;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::duel::MixedStrategy;
use crate::instances::RankingDuel;
use crate::lp::{
    solve, verify_certificate, CertificateReport, DualCertificate, LinearProgram, LpBuilder, LpError, LpStatus,
    Relation, Sense,
};
use crate::scalar::{FloatScalar, Scalar};

/// Divisors of the linearised lower bounds on `h_ab`, kept as decimal
/// literals so the exact path reads them without rounding.
pub const LAMBDA_DIVISOR: &str = "1.208";
pub const RHO_DIVISOR: &str = "3.2";

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum FactorError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("{subsets} subsets exceed the cap of {cap}")]
    SubsetCap { subsets: u128, cap: u128 },
    #[error("LP ended {0:?} where an optimum must exist")]
    UnexpectedStatus(LpStatus),
    #[error(transparent)]
    Lp(#[from] LpError),
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub equal: bool,
}

/// Double-counting identity behind the aggregation step:
/// `Σ_{i=0}^{k-1} C(a-1,i)·C(n-a,k-i-1)·(k-i-1) = (n-a)·C(n-2,k-2)`.
pub fn zibaeq_identity(n: usize, a: usize, k: usize) -> Result<IdentityCheck, FactorError> {
    if !(1..n).contains(&a) || !(2..=n).contains(&k) {
        return Err(FactorError::Parameter(format!("need 1 <= a <= n-1 and 2 <= k <= n, got n={n} a={a} k={k}")));
    }
    let lhs = (0..k).fold(BigUint::zero(), |acc, i| {
        acc + binomial(a - 1, i) * binomial(n - a, k - i - 1) * BigUint::from(k - i - 1)
    });
    let rhs = BigUint::from(n - a) * binomial(n - 2, k - 2);
    let equal = lhs == rhs;
    Ok(IdentityCheck { lhs, rhs, equal })
}

/// Index of pair `a < b` (0-based) among the `C(n,2)` pairs in
/// lexicographic order.
pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
}

/// `h_ab = p_a Pr[a before b] + p_b Pr[b before a]` for every pair of
/// (probability-sorted) pages.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseH<F> {
    n: usize,
    h: Vec<F>,
    before: Vec<F>,
}

impl<F: FloatScalar> PairwiseH<F> {
    pub fn h(&self, a: usize, b: usize) -> F {
        self.h[pair_index(self.n, a, b)]
    }
    /// `Pr[π(a) < π(b)]`.
    pub fn before(&self, a: usize, b: usize) -> F {
        self.before[pair_index(self.n, a, b)]
    }
    pub fn sum(&self) -> F {
        self.h.iter().copied().sum()
    }
    pub fn n(&self) -> usize {
        self.n
    }
}

pub fn pairwise_h<F: FloatScalar>(duel: &RankingDuel<F>, x: &MixedStrategy<F>) -> PairwiseH<F> {
    let n = duel.n();
    let p = duel.spec().probs();
    let mut before = vec![F::zero(); n * n.saturating_sub(1) / 2];
    for (s, &w) in x.nonzero() {
        let perm = duel.perm(s);
        for (a, b) in pairs(n) {
            if perm.position(a) < perm.position(b) {
                before[pair_index(n, a, b)] += w;
            }
        }
    }
    let h = pairs(n)
        .map(|(a, b)| {
            let ab = before[pair_index(n, a, b)];
            p[a] * ab + p[b] * (F::one() - ab)
        })
        .collect();
    PairwiseH { n, h, before }
}

/// Both sides of the linearisation: the quadratic bound
/// `max{p_b, p_a - 2p_b + 2p_b²/p_a}` and the four linear bounds used in LP4.
pub fn khat_sides(pa: f64, pb: f64) -> (f64, f64) {
    let lhs = pb.max(pa - 2.0 * pb + 2.0 * pb * pb / pa);
    let rhs = pb.max(pa - 2.0 * pb).max((pa - pb) / 1.208).max((2.0 * pa - pb) / 3.2);
    (lhs, rhs)
}

/// Float slack allowed when comparing the two sides.
pub const KHAT_TOL: f64 = 1e-12;

/// The quadratic bound dominates the linear ones (`0 <= p_b <= p_a <= 1`, `p_a > 0`).
pub fn check_khat(pa: f64, pb: f64) -> bool {
    let (l, r) = khat_sides(pa, pb);
    l >= r - KHAT_TOL
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct KhatGrid {
    pub points: usize,
    pub failures: usize,
    pub min_margin: f64,
    pub argmin: (f64, f64),
}

/// Evaluate [`check_khat`] at `p_a = i/steps`, `p_b = j/steps`, `0 <= j <= i`, `i >= 1`.
pub fn khat_grid(steps: usize) -> KhatGrid {
    let mut g = KhatGrid { points: 0, failures: 0, min_margin: f64::INFINITY, argmin: (0.0, 0.0) };
    for i in 1..=steps {
        let pa = i as f64 / steps as f64;
        for j in 0..=i {
            let pb = j as f64 / steps as f64;
            let (l, r) = khat_sides(pa, pb);
            g.points += 1;
            if l < r - KHAT_TOL {
                g.failures += 1;
            }
            if l - r < g.min_margin {
                g.min_margin = l - r;
                g.argmin = (pa, pb);
            }
        }
    }
    g
}

/// Which linear lower bound on `h_ab` a row (or dual variable) belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairBound {
    /// `h >= p_b`
    Beta,
    /// `h >= p_a - 2p_b`
    Gamma,
    /// `h >= (p_a - p_b)/1.208`
    Lambda,
    /// `h >= (2p_a - p_b)/3.2`
    Rho,
}

const BOUNDS: [PairBound; 4] = [PairBound::Beta, PairBound::Gamma, PairBound::Lambda, PairBound::Rho];

/// Index layout shared by LP4 and LP5.
///
/// LP4 variables: `p_1..p_k`, then `h_ab` by pair. LP4 rows: the
/// normalisation, then four rows per pair in the order β, γ, λ, ρ. LP5 uses
/// the LP4 rows as its variables (`θ` first) and the LP4 variables as its
/// rows, in the same orders, so an LP5 point is literally the LP4 dual vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorRevealingProblem {
    pub k: usize,
}

impl FactorRevealingProblem {
    pub fn new(k: usize) -> Result<Self, FactorError> {
        if k < 2 {
            return Err(FactorError::Parameter(format!("k must be at least 2, got {k}")));
        }
        Ok(Self { k })
    }

    pub fn pair_count(&self) -> usize {
        self.k * (self.k - 1) / 2
    }
    pub fn p_var(&self, a: usize) -> usize {
        a
    }
    pub fn h_var(&self, a: usize, b: usize) -> usize {
        self.k + pair_index(self.k, a, b)
    }
    /// LP4 row of a pair bound; also the LP5 variable of the matching multiplier.
    pub fn pair_row(&self, a: usize, b: usize, bound: PairBound) -> usize {
        1 + 4 * pair_index(self.k, a, b) + bound as usize
    }
    pub fn lp4_rows(&self) -> usize {
        1 + 4 * self.pair_count()
    }
    pub fn lp4_vars(&self) -> usize {
        self.k + self.pair_count()
    }

    /// Coefficients of `(p_a, p_b)` in the row `h + c_a p_a + c_b p_b >= 0`.
    fn bound_coeffs<T: Scalar>(bound: PairBound) -> (T, T) {
        let lam = T::from_decimal(LAMBDA_DIVISOR).expect("literal");
        let rho = T::from_decimal(RHO_DIVISOR).expect("literal");
        let two = T::from_int(2);
        match bound {
            PairBound::Beta => (T::zero(), -T::one()),
            PairBound::Gamma => (-T::one(), two),
            PairBound::Lambda => (-T::one() / lam.clone(), T::one() / lam),
            PairBound::Rho => (-two / rho.clone(), T::one() / rho),
        }
    }

    pub fn lp4<T: Scalar>(&self) -> LinearProgram<T> {
        let k = self.k;
        let mut b = LpBuilder::new(Sense::Minimize);
        for a in 0..k {
            b.named_var(format!("p{}", a + 1), T::zero(), Some(T::zero()), None);
        }
        for (a, c) in pairs(k) {
            b.named_var(format!("h{}_{}", a + 1, c + 1), T::one(), Some(T::zero()), None);
        }
        let norm: Vec<(usize, T)> = (0..k - 1).map(|a| (self.p_var(a), T::from_int((k - a - 1) as i64))).collect();
        b.named_row("norm", norm, Relation::Eq, T::one());
        for (a, c) in pairs(k) {
            for bound in BOUNDS {
                let (ca, cb) = Self::bound_coeffs::<T>(bound);
                let mut coeffs = vec![(self.h_var(a, c), T::one())];
                if !ca.is_zero() {
                    coeffs.push((self.p_var(a), ca));
                }
                coeffs.push((self.p_var(c), cb));
                b.named_row(format!("{}{}_{}", bound_name(bound), a + 1, c + 1), coeffs, Relation::Ge, T::zero());
            }
        }
        b.build().expect("LP4 is well formed")
    }

    /// LP5 written out directly (not via [`LinearProgram::dual`], which
    /// serves as its test oracle).
    pub fn lp5<T: Scalar>(&self) -> LinearProgram<T> {
        let k = self.k;
        let mut b = LpBuilder::new(Sense::Maximize);
        b.named_var("theta", T::one(), None, None);
        for (a, c) in pairs(k) {
            for bound in BOUNDS {
                b.named_var(format!("{}{}_{}", bound_name(bound), a + 1, c + 1), T::zero(), Some(T::zero()), None);
            }
        }
        // Row for page a: θ(k-a) + Σ over pairs containing a of the bound
        // coefficient on p_a times the multiplier, <= 0.
        for a in 0..k {
            let mut coeffs = Vec::new();
            if a + 1 < k {
                coeffs.push((0, T::from_int((k - a - 1) as i64)));
            }
            for (i, j) in pairs(k).filter(|&(i, j)| i == a || j == a) {
                for bound in BOUNDS {
                    let (ci, cj) = Self::bound_coeffs::<T>(bound);
                    let coef = if i == a { ci } else { cj };
                    if !coef.is_zero() {
                        coeffs.push((self.pair_row(i, j, bound), coef));
                    }
                }
            }
            b.named_row(format!("page{}", a + 1), coeffs, Relation::Le, T::zero());
        }
        for (a, c) in pairs(k) {
            let coeffs = BOUNDS.iter().map(|&bd| (self.pair_row(a, c, bd), T::one())).collect();
            b.named_row(format!("pair{}_{}", a + 1, c + 1), coeffs, Relation::Le, T::one());
        }
        b.build().expect("LP5 is well formed")
    }
}

fn bound_name(b: PairBound) -> &'static str {
    match b {
        PairBound::Beta => "beta",
        PairBound::Gamma => "gamma",
        PairBound::Lambda => "lambda",
        PairBound::Rho => "rho",
    }
}

pub fn build_lp4<T: Scalar>(k: usize) -> Result<LinearProgram<T>, FactorError> {
    Ok(FactorRevealingProblem::new(k)?.lp4())
}

pub fn build_dual_lp5<T: Scalar>(k: usize) -> Result<LinearProgram<T>, FactorError> {
    Ok(FactorRevealingProblem::new(k)?.lp5())
}

/// A point of LP5: `θ` and the four multipliers of every pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPoint<T> {
    problem: FactorRevealingProblem,
    values: Vec<T>,
}

impl<T: Scalar> DualPoint<T> {
    pub fn zero(k: usize) -> Result<Self, FactorError> {
        let problem = FactorRevealingProblem::new(k)?;
        Ok(Self { problem, values: vec![T::zero(); problem.lp4_rows()] })
    }

    pub fn from_vector(k: usize, values: Vec<T>) -> Result<Self, FactorError> {
        let problem = FactorRevealingProblem::new(k)?;
        if values.len() != problem.lp4_rows() {
            return Err(FactorError::Parameter(format!("{} entries for {} LP5 variables", values.len(), problem.lp4_rows())));
        }
        Ok(Self { problem, values })
    }

    pub fn k(&self) -> usize {
        self.problem.k
    }
    pub fn theta(&self) -> &T {
        &self.values[0]
    }
    pub fn set_theta(&mut self, v: T) {
        self.values[0] = v;
    }
    /// Pages are 0-based here.
    pub fn get(&self, bound: PairBound, a: usize, b: usize) -> &T {
        &self.values[self.problem.pair_row(a, b, bound)]
    }
    pub fn set(&mut self, bound: PairBound, a: usize, b: usize, v: T) {
        let i = self.problem.pair_row(a, b, bound);
        self.values[i] = v;
    }
    /// LP5 variable vector, equal to the LP4 row-multiplier vector.
    pub fn as_vector(&self) -> &[T] {
        &self.values
    }

    /// As a certificate that LP4's optimum is at least `θ`.
    pub fn certificate(&self) -> DualCertificate<T> {
        DualCertificate { y: self.values.clone(), claimed_bound: self.theta().clone() }
    }

    pub fn convert<U: Scalar>(&self) -> DualPoint<U> {
        DualPoint { problem: self.problem, values: self.values.iter().map(crate::scalar::convert::<T, U>).collect() }
    }
}

/// Feasibility of an LP5 point, checked two ways: as a dual certificate for
/// LP4 and as a primal point of LP5.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPointCheck<T> {
    pub certificate: CertificateReport<T>,
    /// Violation of each LP5 row (pages first, then pairs).
    pub lp5_row_violations: Vec<T>,
    pub lp5_max_violation: T,
    pub lp5_objective: T,
    /// True only when both routes find the point feasible (exactly, for
    /// exact scalars).
    pub feasible: bool,
    /// The two routes reached the same verdict.
    pub routes_agree: bool,
}

pub fn check_dual_point<T: Scalar>(point: &DualPoint<T>) -> DualPointCheck<T> {
    let lp4 = point.problem.lp4::<T>();
    let lp5 = point.problem.lp5::<T>();
    let certificate = verify_certificate(&lp4, &point.certificate());
    let x = point.as_vector();
    let lp5_row_violations: Vec<T> = lp5
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| (lp5.row_activity(i, x) - row.rhs.clone()).max_of(T::zero()))
        .collect();
    let bound_violation =
        x[1..].iter().fold(T::zero(), |acc, v| acc.max_of(-v.clone()));
    let lp5_max_violation =
        lp5_row_violations.iter().fold(bound_violation, |acc, v| acc.max_of(v.clone()));
    let tol = if T::is_exact() { T::zero() } else { T::cast_f64(crate::lp::FEAS_TOL) };
    let lp5_feasible = lp5_max_violation <= tol;
    DualPointCheck {
        lp5_objective: lp5.objective_value(x),
        feasible: certificate.feasible && lp5_feasible,
        routes_agree: certificate.feasible == lp5_feasible,
        certificate,
        lp5_row_violations,
        lp5_max_violation,
    }
}

pub use crate::Rational;

/// The published `k = 10` dual point, read exactly from its decimals.
pub fn paper_dual_point<T: Scalar>() -> DualPoint<T> {
    let mut point = DualPoint::zero(10).expect("k = 10");
    let dec = |s: &str| T::from_decimal(s).expect("table literal");
    point.set_theta(dec(table::THETA));
    for (bound, entries) in [(PairBound::Beta, table::BETA), (PairBound::Lambda, table::LAMBDA), (PairBound::Rho, table::RHO)] {
        for &(a, b, v) in entries {
            point.set(bound, a - 1, b - 1, dec(v));
        }
    }
    point
}

/// Check the published dual point against LP4/LP5 at `k = 10` in exact
/// rational arithmetic, claiming the bound `θ = 0.612275`.
pub fn verify_paper_certificate() -> DualPointCheck<Rational> {
    check_dual_point(&paper_dual_point::<Rational>())
}

/// Turn an almost-feasible LP5 point into an exactly feasible one:
/// scale every pair group down to sum at most 1, scale the positive terms
/// of the last page's row (which has no `θ`) until it holds, then take the
/// largest `θ` every other page row allows. Entries stay nonnegative.
pub fn repair_dual_point(point: &DualPoint<Rational>) -> DualPoint<Rational> {
    let pr = point.problem;
    let k = pr.k;
    let mut p = point.clone();
    for v in p.values.iter_mut().skip(1) {
        if v.lt_zero() {
            *v = Rational::zero();
        }
    }
    for (a, b) in pairs(k) {
        let s = BOUNDS.iter().fold(Rational::zero(), |acc, &bd| acc + p.get(bd, a, b).clone());
        if s > Rational::one() {
            for bd in BOUNDS {
                let v = p.get(bd, a, b).clone() / s.clone();
                p.set(bd, a, b, v);
            }
        }
    }
    let lp5 = pr.lp5::<Rational>();
    let activity = |p: &DualPoint<Rational>, row: usize| {
        let mut x = p.values.clone();
        x[0] = Rational::zero();
        lp5.row_activity(row, &x)
    };
    // Last page: only multipliers of pairs (i, k) appear, with coefficient
    // -1 on β and positive coefficients on γ, λ, ρ.
    let last = k - 1;
    let rest = activity(&p, last);
    if rest.gt_zero() {
        let (pos, neg): (Vec<_>, Vec<_>) = lp5.rows()[last].coeffs.iter().cloned().partition(|(_, c)| c.gt_zero());
        let positive = pos.iter().fold(Rational::zero(), |acc, (j, c)| acc + c.clone() * p.values[*j].clone());
        let negative = neg.iter().fold(Rational::zero(), |acc, (j, c)| acc - c.clone() * p.values[*j].clone());
        let scale = negative / positive;
        for (j, _) in pos {
            p.values[j] = p.values[j].clone() * scale.clone();
        }
    }
    let theta = (0..last)
        .map(|a| -activity(&p, a) / Rational::from_int((k - a - 1) as i64))
        .reduce(|x, y| x.min_of(y))
        .expect("k >= 2");
    p.set_theta(theta);
    p
}

/// The published point after [`repair_dual_point`], and its exact check.
pub fn repaired_paper_certificate() -> (DualPoint<Rational>, DualPointCheck<Rational>) {
    let repaired = repair_dual_point(&paper_dual_point());
    let check = check_dual_point(&repaired);
    (repaired, check)
}

/// Solution of LP4 for one `k`.
#[derive(Debug, Clone)]
pub struct AlphaK {
    pub k: usize,
    pub alpha: f64,
    /// LP4 primal, recovered from LP5's row duals.
    pub p: Vec<f64>,
    pub h: Vec<f64>,
    /// LP5 optimum, i.e. LP4's dual.
    pub dual: DualPoint<f64>,
    pub lp4_residual: f64,
    pub pivots: usize,
}

impl AlphaK {
    /// LP4 primal vector `(p, h)`.
    pub fn lp4_point(&self) -> Vec<f64> {
        self.p.iter().chain(&self.h).copied().collect()
    }

    /// Exactly verified lower bound: the solver's dual point, repaired in
    /// rational arithmetic.
    pub fn exact_certificate(&self) -> (DualPoint<Rational>, DualPointCheck<Rational>) {
        let repaired = repair_dual_point(&self.dual.convert());
        let check = check_dual_point(&repaired);
        (repaired, check)
    }
}

/// `α_k`, the optimum of LP4. LP5 is solved instead: it has `k + C(k,2)`
/// rows against LP4's `4·C(k,2) + 1`, and its row duals give LP4's primal.
pub fn alpha_k(k: usize) -> Result<AlphaK, FactorError> {
    let pr = FactorRevealingProblem::new(k)?;
    let lp5 = pr.lp5::<f64>();
    let sol = solve(&lp5)?;
    if sol.status != LpStatus::Optimal {
        return Err(FactorError::UnexpectedStatus(sol.status));
    }
    let p = sol.y[..k].to_vec();
    let h = sol.y[k..].to_vec();
    let lp4 = pr.lp4::<f64>();
    let x: Vec<f64> = p.iter().chain(&h).copied().collect();
    let lp4_residual = lp4.primal_residual(&x);
    let dual = DualPoint::from_vector(k, sol.x)?;
    Ok(AlphaK { k, alpha: sol.objective, p, h, dual, lp4_residual, pivots: sol.pivots })
}

/// Pairs whose `h_ab` sits on none of its four lower bounds (within `tol`).
pub fn slack_pairs(k: usize, point: &[f64], tol: f64) -> Vec<(usize, usize)> {
    let pr = FactorRevealingProblem { k };
    let lp4 = pr.lp4::<f64>();
    pairs(k)
        .filter(|&(a, b)| {
            BOUNDS.iter().all(|&bd| {
                let r = pr.pair_row(a, b, bd);
                lp4.row_activity(r, point) > tol
            })
        })
        .collect()
}

/// LP4 point built from probabilities through the nonlinear bounds: `h_ab =
/// max{p_b, p_a - 2p_b + 2p_b²/p_a}`, then everything scaled so that
/// `Σ p_a (k-a) = 1` (the bounds are homogeneous of degree one).
pub fn mp2_lp4_point(p: &[f64]) -> Vec<f64> {
    let k = p.len();
    let h: Vec<f64> = pairs(k)
        .map(|(a, b)| {
            let (pa, pb) = (p[a], p[b]);
            if pa > 0.0 {
                pb.max(pa - 2.0 * pb + 2.0 * pb * pb / pa)
            } else {
                pb
            }
        })
        .collect();
    let norm: f64 = p.iter().enumerate().map(|(a, &pa)| pa * (k - a - 1) as f64).sum();
    p.iter().chain(&h).map(|v| v / norm).collect()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AggregationReport {
    pub min_subset_ratio: f64,
    pub global_ratio: f64,
    pub holds: bool,
    pub subsets: usize,
}

/// Largest subset family [`aggregation_check`] enumerates.
pub const SUBSET_CAP: u128 = 100_000;

/// Ratios under `f(i) = n - i`: for every `k`-subset `i_1 < … < i_k`,
/// `Σ h_{i_a i_b} / Σ_a p_{i_a}(k-a)`, and globally `Σ h / Σ_a p_a (n-a)`.
/// The global ratio is at least the smallest subset ratio.
pub fn aggregation_check<F: FloatScalar>(duel: &RankingDuel<F>, x: &MixedStrategy<F>, k: usize) -> Result<AggregationReport, FactorError> {
    let n = duel.n();
    if k < 2 || k > n {
        return Err(FactorError::Parameter(format!("need 2 <= k <= n, got k={k}, n={n}")));
    }
    let subsets: u128 = binomial(n, k).try_into().unwrap_or(u128::MAX);
    if subsets > SUBSET_CAP {
        return Err(FactorError::SubsetCap { subsets, cap: SUBSET_CAP });
    }
    let h = pairwise_h(duel, x);
    let p: Vec<f64> = duel.spec().probs().iter().map(|v| v.as_f64()).collect();
    let ratio = |idx: &[usize]| {
        let m = idx.len();
        let num: f64 = pairs(m).map(|(a, b)| h.h(idx[a], idx[b]).as_f64()).sum();
        let den: f64 = idx.iter().enumerate().map(|(a, &i)| p[i] * (m - a - 1) as f64).sum();
        num / den
    };
    let mut min_subset_ratio = f64::INFINITY;
    let mut count = 0;
    for idx in itertools::Itertools::combinations(0..n, k) {
        min_subset_ratio = min_subset_ratio.min(ratio(&idx));
        count += 1;
    }
    let global_ratio = ratio(&(0..n).collect::<Vec<_>>());
    Ok(AggregationReport { min_subset_ratio, global_ratio, holds: global_ratio >= min_subset_ratio - 1e-12, subsets: count })
}
