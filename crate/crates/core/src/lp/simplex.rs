//! Two-phase revised simplex over a product-form basis inverse.
//!
//! The LP is brought to `min c·z, Az = b, z >= 0, b >= 0` by shifting and
//! splitting variables and adding slack, surplus and artificial columns.
//! Pricing is Dantzig's rule until `10·(rows+cols)` pivots have been spent,
//! then Bland's rule, which cannot cycle. More than `50·(rows+cols)` pivots
//! is reported as a numerical breakdown.

use super::{dual_objective, LinearProgram, LpError, Relation, Sense, FEAS_TOL, GAP_TOL};
use super::eta::{EtaFile, Singular};
use crate::scalar::FloatScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub feas_tol: f64,
    pub gap_tol: f64,
    /// Smallest pivot element accepted in the ratio test.
    pub pivot_tol: f64,
    /// Pivots before switching to Bland's rule; `None` means `10·(rows+cols)`.
    pub bland_after: Option<usize>,
    /// Pivot cap; `None` means `50·(rows+cols)`.
    pub max_pivots: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { feas_tol: FEAS_TOL, gap_tol: GAP_TOL, pivot_tol: 1e-9, bland_after: None, max_pivots: None }
    }
}

/// Solver output. For non-optimal statuses the vectors are empty.
/// `y` holds one multiplier per original row in the `c - Aᵀy` convention.
#[derive(Debug, Clone)]
pub struct LpSolution<F> {
    pub status: LpStatus,
    pub objective: F,
    pub x: Vec<F>,
    pub y: Vec<F>,
    pub reduced_costs: Vec<F>,
    pub pivots: usize,
    pub primal_residual: F,
    pub dual_residual: F,
    pub duality_gap: F,
}

impl<F: FloatScalar> LpSolution<F> {
    fn without_point(status: LpStatus, pivots: usize) -> Self {
        let z = F::zero();
        Self {
            status,
            objective: z,
            x: vec![],
            y: vec![],
            reduced_costs: vec![],
            pivots,
            primal_residual: z,
            dual_residual: z,
            duality_gap: z,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

pub fn solve<F: FloatScalar>(lp: &LinearProgram<F>) -> Result<LpSolution<F>, LpError> {
    solve_with(lp, &SolveOptions::default())
}

pub fn solve_with<F: FloatScalar>(lp: &LinearProgram<F>, opts: &SolveOptions) -> Result<LpSolution<F>, LpError> {
    let sf = StandardForm::new(lp);
    let total = sf.m + sf.ncols();
    let mut t = Tableau::new(&sf, opts, total);

    if sf.artificial.iter().any(|&a| a) {
        let phase1: Vec<F> = sf.artificial.iter().map(|&a| if a { F::one() } else { F::zero() }).collect();
        // Phase 1 is bounded below by zero, so "unbounded" cannot happen.
        t.run(&phase1)?;
        t.refresh_xb();
        let infeas: F = (0..sf.m).filter(|&i| sf.artificial[t.basis[i]]).map(|i| t.xb[i].max(F::zero())).sum();
        let bscale = sf.b.iter().fold(F::one(), |a, &v| a.max(v.abs()));
        if infeas > F::cast_f64(opts.feas_tol) * bscale {
            return Ok(LpSolution::without_point(LpStatus::Infeasible, t.pivots));
        }
        t.drive_out_artificials();
    }
    t.phase2 = true;

    let mut rounds = 0;
    loop {
        match t.run(&sf.cost)? {
            PhaseEnd::Unbounded => return Ok(LpSolution::without_point(LpStatus::Unbounded, t.pivots)),
            PhaseEnd::Optimal => {}
        }
        t.refresh_xb();
        let y = t.refined_duals(&sf.cost);
        // Re-price with refined duals; a handful of extra pivots is normal
        // after drift.
        if rounds < 3 && t.entering(&sf.cost, &y, false).is_some() {
            rounds += 1;
            continue;
        }
        return Ok(t.extract(lp, &y));
    }
}

#[derive(Debug, Clone, Copy)]
enum VarMap<F> {
    /// x = offset + z
    Shift { col: usize, offset: F },
    /// x = offset - z
    Reflect { col: usize, offset: F },
    /// x = z⁺ - z⁻
    Split { pos: usize, neg: usize },
}

struct StandardForm<F> {
    m: usize,
    col_start: Vec<usize>,
    row_idx: Vec<usize>,
    vals: Vec<F>,
    b: Vec<F>,
    cost: Vec<F>,
    artificial: Vec<bool>,
    initial_basis: Vec<usize>,
    var_map: Vec<VarMap<F>>,
    row_sign: Vec<F>,
}

impl<F: FloatScalar> StandardForm<F> {
    fn new(lp: &LinearProgram<F>) -> Self {
        let s = match lp.sense() {
            Sense::Minimize => F::one(),
            Sense::Maximize => -F::one(),
        };
        let mut cols: Vec<Vec<(usize, F)>> = Vec::new();
        let mut cost = Vec::new();
        let mut var_map = Vec::with_capacity(lp.num_vars());
        // Rows: original ones, then `z <= u - l` for doubly bounded variables.
        let mut rows: Vec<(Vec<(usize, F)>, Relation, F)> = Vec::new();
        let mut bound_rows = Vec::new();
        for v in lp.vars() {
            let c = s * v.cost;
            match (v.lower, v.upper) {
                (Some(l), u) => {
                    let col = cols.len();
                    cols.push(vec![]);
                    cost.push(c);
                    var_map.push(VarMap::Shift { col, offset: l });
                    if let Some(u) = u {
                        bound_rows.push((vec![(col, F::one())], Relation::Le, u - l));
                    }
                }
                (None, Some(u)) => {
                    let col = cols.len();
                    cols.push(vec![]);
                    cost.push(-c);
                    var_map.push(VarMap::Reflect { col, offset: u });
                }
                (None, None) => {
                    let pos = cols.len();
                    cols.push(vec![]);
                    cols.push(vec![]);
                    cost.push(c);
                    cost.push(-c);
                    var_map.push(VarMap::Split { pos, neg: pos + 1 });
                }
            }
        }
        for row in lp.rows() {
            let mut coeffs = Vec::with_capacity(row.coeffs.len());
            let mut rhs = row.rhs;
            for &(j, a) in &row.coeffs {
                match var_map[j] {
                    VarMap::Shift { col, offset } => {
                        rhs -= a * offset;
                        coeffs.push((col, a));
                    }
                    VarMap::Reflect { col, offset } => {
                        rhs -= a * offset;
                        coeffs.push((col, -a));
                    }
                    VarMap::Split { pos, neg } => {
                        coeffs.push((pos, a));
                        coeffs.push((neg, -a));
                    }
                }
            }
            rows.push((coeffs, row.relation, rhs));
        }
        rows.extend(bound_rows);

        let m = rows.len();
        let mut b = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        let mut artificial = vec![false; cols.len()];
        let mut initial_basis = Vec::with_capacity(m);
        for (i, (coeffs, rel, rhs)) in rows.into_iter().enumerate() {
            let (sign, rel) = if rhs < F::zero() {
                (-F::one(), match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                })
            } else {
                (F::one(), rel)
            };
            for (j, a) in coeffs {
                cols[j].push((i, sign * a));
            }
            b.push(sign * rhs);
            row_sign.push(sign);
            let mut push_col = |coef: F, art: bool, cols: &mut Vec<Vec<(usize, F)>>| {
                cols.push(vec![(i, coef)]);
                cost.push(F::zero());
                artificial.push(art);
                cols.len() - 1
            };
            match rel {
                Relation::Le => {
                    let c = push_col(F::one(), false, &mut cols);
                    initial_basis.push(c);
                }
                Relation::Ge => {
                    push_col(-F::one(), false, &mut cols);
                    let c = push_col(F::one(), true, &mut cols);
                    initial_basis.push(c);
                }
                Relation::Eq => {
                    let c = push_col(F::one(), true, &mut cols);
                    initial_basis.push(c);
                }
            }
        }
        let mut col_start = Vec::with_capacity(cols.len() + 1);
        let mut row_idx = Vec::new();
        let mut vals = Vec::new();
        col_start.push(0);
        for col in &cols {
            // Rows referencing a split column twice are impossible: each
            // original variable appears once per row after `build()`.
            for &(i, a) in col {
                row_idx.push(i);
                vals.push(a);
            }
            col_start.push(row_idx.len());
        }
        Self { m, col_start, row_idx, vals, b, cost, artificial, initial_basis, var_map, row_sign }
    }

    fn ncols(&self) -> usize {
        self.col_start.len() - 1
    }

    fn col(&self, j: usize) -> (&[usize], &[F]) {
        let (s, e) = (self.col_start[j], self.col_start[j + 1]);
        (&self.row_idx[s..e], &self.vals[s..e])
    }
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

struct Tableau<'a, F> {
    sf: &'a StandardForm<F>,
    m: usize,
    inv: EtaFile<F>,
    /// Etas in `inv` right after the last refactor.
    factored: usize,
    /// Column occupying each basis position.
    basis: Vec<usize>,
    /// Basis position of each column, `usize::MAX` when nonbasic.
    pos: Vec<usize>,
    xb: Vec<F>,
    pivots: usize,
    bland_after: usize,
    cap: usize,
    pivot_tol: F,
    opt_tol: F,
    /// Bound overshoot allowed by the ratio test.
    harris_tol: F,
    /// Relative size below which a ray's improvement is roundoff.
    ray_tol: F,
    /// Columns set aside as roundoff rays until the next pivot.
    rejected: Vec<bool>,
    repairs: usize,
    /// Where the next pricing pass starts.
    price_from: std::cell::Cell<usize>,
    phase2: bool,
}

const NONBASIC: usize = usize::MAX;
/// Pivots between refactorizations of the basis.
const REFACTOR_EVERY: usize = 100;
/// Number of column segments for partial pricing.
const PRICING_SEGMENTS: usize = 8;
/// Relative disagreement between the two computations of a pivot element
/// that forces a refactorization.
const PIVOT_CHECK_TOL: f64 = 1e-9;
/// Pivots smaller than this fraction of the column's largest entry are
/// refused.
const REL_PIVOT_TOL: f64 = 1e-6;
/// Singular-basis repairs allowed per solve before giving up.
const MAX_REPAIRS: usize = 20;

impl<'a, F: FloatScalar> Tableau<'a, F> {
    fn new(sf: &'a StandardForm<F>, opts: &SolveOptions, total: usize) -> Self {
        let m = sf.m;
        let mut pos = vec![NONBASIC; sf.ncols()];
        for (i, &c) in sf.initial_basis.iter().enumerate() {
            pos[c] = i;
        }
        Self {
            sf,
            m,
            inv: EtaFile::identity(),
            factored: 0,
            basis: sf.initial_basis.clone(),
            pos,
            xb: sf.b.clone(),
            pivots: 0,
            bland_after: opts.bland_after.unwrap_or(10 * total),
            cap: opts.max_pivots.unwrap_or(50 * total),
            pivot_tol: F::cast_f64(opts.pivot_tol),
            opt_tol: F::cast_f64(opts.feas_tol * 0.1),
            harris_tol: F::cast_f64(opts.feas_tol * 0.1),
            ray_tol: F::cast_f64(opts.gap_tol),
            rejected: vec![false; sf.ncols()],
            repairs: 0,
            price_from: std::cell::Cell::new(0),
            phase2: false,
        }
    }

    /// `yᵀ = c_Bᵀ B⁻¹`.
    fn duals(&self, cost: &[F]) -> Vec<F> {
        let mut y: Vec<F> = self.basis.iter().map(|&c| cost[c]).collect();
        self.inv.btran(&mut y);
        y
    }

    /// Duals with one step of iterative refinement against `Bᵀy = c_B`.
    fn refined_duals(&self, cost: &[F]) -> Vec<F> {
        let mut y = self.duals(cost);
        let mut r: Vec<F> = self
            .basis
            .iter()
            .map(|&c| {
                let (idx, vals) = self.sf.col(c);
                cost[c] - idx.iter().zip(vals).map(|(&k, &a)| a * y[k]).sum::<F>()
            })
            .collect();
        self.inv.btran(&mut r);
        for (yk, rk) in y.iter_mut().zip(r) {
            *yk += rk;
        }
        y
    }

    fn reduced_cost(&self, cost: &[F], y: &[F], j: usize) -> F {
        let (idx, vals) = self.sf.col(j);
        cost[j] - idx.iter().zip(vals).map(|(&k, &a)| a * y[k]).sum::<F>()
    }

    /// Partial pricing: columns are scanned in segments, resuming where
    /// the previous search stopped, and the most negative reduced cost of
    /// the first segment holding any candidate wins. `None` only after a
    /// full pass finds nothing. Bland mode takes the lowest index instead.
    fn entering(&self, cost: &[F], y: &[F], bland: bool) -> Option<usize> {
        let ncols = self.sf.ncols();
        let eligible = |j: usize| self.pos[j] == NONBASIC && !self.sf.artificial[j] && !self.rejected[j];
        if bland {
            return (0..ncols).find(|&j| eligible(j) && self.reduced_cost(cost, y, j) < -self.opt_tol);
        }
        let seg = ncols.div_ceil(PRICING_SEGMENTS).max(1);
        let start = self.price_from.get().min(ncols);
        let mut best: Option<(usize, F)> = None;
        let mut scanned = 0;
        while scanned < ncols {
            let lo = (start + scanned) % ncols;
            let len = seg.min(ncols - scanned).min(ncols - lo);
            for j in lo..lo + len {
                if !eligible(j) {
                    continue;
                }
                let d = self.reduced_cost(cost, y, j);
                if d < -self.opt_tol && best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
            scanned += len;
            if best.is_some() {
                self.price_from.set((lo + len) % ncols);
                break;
            }
        }
        best.map(|(j, _)| j)
    }

    /// `B⁻¹ a_j`, with cancellation noise removed.
    fn ftran(&self, j: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.m];
        let (idx, vals) = self.sf.col(j);
        for (&k, &a) in idx.iter().zip(vals) {
            v[k] = a;
        }
        self.inv.ftran(&mut v);
        let drop = F::epsilon() * F::cast_f64(500.0);
        for x in v.iter_mut() {
            if x.abs() < drop {
                *x = F::zero();
            }
        }
        v
    }

    /// Row `r` of `B⁻¹`.
    fn btran_unit(&self, r: usize) -> Vec<F> {
        let mut u = vec![F::zero(); self.m];
        u[r] = F::one();
        self.inv.btran(&mut u);
        u
    }

    /// Harris two-pass ratio test: the step may overshoot each bound by
    /// `harris_tol`, and among the rows blocking within that step the
    /// largest pivot wins. Bland mode uses the exact test instead.
    fn ratio_test(&self, alpha: &[F], bland: bool) -> Option<usize> {
        if bland {
            return self.exact_ratio_test(alpha, true);
        }
        let tol = self.pivot_tol;
        if self.phase2 {
            let pinned = (0..self.m)
                .filter(|&i| self.sf.artificial[self.basis[i]] && alpha[i].abs() > tol)
                .max_by(|&i, &j| alpha[i].abs().partial_cmp(&alpha[j].abs()).unwrap_or(std::cmp::Ordering::Equal));
            if pinned.is_some() {
                return pinned;
            }
        }
        let mut step = F::infinity();
        for i in 0..self.m {
            if alpha[i] > tol {
                step = step.min((self.xb[i] + self.harris_tol) / alpha[i]);
            }
        }
        if step == F::infinity() {
            return None;
        }
        let mut best: Option<usize> = None;
        for i in 0..self.m {
            let a = alpha[i];
            if a > tol && self.xb[i].max(F::zero()) / a <= step && best.is_none_or(|b| a > alpha[b]) {
                best = Some(i);
            }
        }
        best
    }

    fn exact_ratio_test(&self, alpha: &[F], bland: bool) -> Option<usize> {
        let mut best: Option<(usize, F)> = None;
        let eps = F::cast_f64(1e-12);
        for i in 0..self.m {
            let a = alpha[i];
            if a == F::zero() {
                continue;
            }
            let art = self.sf.artificial[self.basis[i]];
            let ratio = if self.phase2 && art && a.abs() > self.pivot_tol {
                // A basic artificial sits at zero and must not move.
                F::zero()
            } else if a > self.pivot_tol {
                self.xb[i].max(F::zero()) / a
            } else {
                continue;
            };
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    if ratio < br - eps * (F::one() + br) {
                        Some((i, ratio))
                    } else if ratio <= br + eps * (F::one() + br) {
                        let better = if bland {
                            self.basis[i] < self.basis[bi]
                        } else {
                            a.abs() > alpha[bi].abs()
                        };
                        if better {
                            Some((i, ratio.min(br)))
                        } else {
                            Some((bi, ratio.min(br)))
                        }
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[F]) {
        let theta = self.xb[r].max(F::zero()) / alpha[r];
        for (i, (x, &a)) in self.xb.iter_mut().zip(alpha).enumerate() {
            if i != r && a != F::zero() {
                *x -= theta * a;
            }
        }
        self.xb[r] = theta;
        self.inv.push(r, alpha);
        self.pos[self.basis[r]] = NONBASIC;
        self.basis[r] = q;
        self.pos[q] = r;
        self.pivots += 1;
        self.rejected.iter_mut().for_each(|x| *x = false);
    }

    fn run(&mut self, cost: &[F]) -> Result<PhaseEnd, LpError> {
        let mut y = self.duals(cost);
        // True while `y` and the inverse come straight from a factorization.
        let mut fresh = false;
        loop {
            if self.pivots >= self.cap {
                return Err(LpError::NumericalBreakdown { iterations: self.pivots });
            }
            let bland = self.pivots >= self.bland_after;
            let Some(q) = self.entering(cost, &y, bland) else {
                // Confirm with fresh duals before declaring optimality.
                let fresh = self.duals(cost);
                if self.entering(cost, &fresh, bland).is_none() {
                    return Ok(PhaseEnd::Optimal);
                }
                y = fresh;
                continue;
            };
            let dq = self.reduced_cost(cost, &y, q);
            let alpha = self.ftran(q);
            let Some(r) = self.ratio_test(&alpha, bland) else {
                // Drifted duals can price a zero-cost ray (such as the
                // negative half of a split free variable whose positive half
                // is basic) as improving. Only a fresh basis may report one.
                if fresh {
                    // A real ray improves by more than the roundoff in its
                    // own reduced cost; anything less is set aside.
                    let (idx, vals) = self.sf.col(q);
                    let scale = F::one() + cost[q].abs() + idx.iter().zip(vals).map(|(&k, &a)| (a * y[k]).abs()).sum::<F>();
                    if self.reduced_cost(cost, &y, q) < -self.ray_tol * scale {
                        return Ok(PhaseEnd::Unbounded);
                    }
                    self.rejected[q] = true;
                    continue;
                }
                self.refactor()?;
                self.refresh_xb();
                y = self.duals(cost);
                fresh = true;
                continue;
            };
            // The pivot element again, as (row r of B⁻¹)·a_q. Disagreement
            // with the ftran value means the inverse has drifted; a pivot
            // tiny next to the rest of the column may be roundoff standing
            // in for zero, and pivoting on it makes the basis singular.
            let row = self.btran_unit(r);
            let (idx, vals) = self.sf.col(q);
            let check: F = idx.iter().zip(vals).map(|(&k, &a)| row[k] * a).sum();
            let drifted = (check - alpha[r]).abs() > F::cast_f64(PIVOT_CHECK_TOL) * (F::one() + alpha[r].abs());
            let norm = alpha.iter().fold(F::zero(), |acc, a| acc.max(a.abs()));
            let tiny = alpha[r].abs() < F::cast_f64(REL_PIVOT_TOL) * norm;
            if (drifted || tiny) && !fresh {
                self.refactor()?;
                self.refresh_xb();
                y = self.duals(cost);
                fresh = true;
                continue;
            }
            if tiny {
                self.rejected[q] = true;
                continue;
            }
            self.pivot(r, q, &alpha);
            fresh = false;
            if self.inv.len() >= self.factored + REFACTOR_EVERY {
                self.refactor()?;
                self.refresh_xb();
                y = self.duals(cost);
            } else {
                // Row r of the new inverse is the old row over the pivot, so
                // y' = y + (d_q / α_r) · row.
                let scale = dq / alpha[r];
                for (yk, b) in y.iter_mut().zip(row) {
                    *yk += scale * b;
                }
            }
        }
    }

    /// `x_B = B⁻¹ b` plus one refinement step.
    fn refresh_xb(&mut self) {
        let mut x = self.sf.b.clone();
        self.inv.ftran(&mut x);
        let mut r = self.sf.b.clone();
        for (i, &xi) in x.iter().enumerate() {
            let (idx, vals) = self.sf.col(self.basis[i]);
            for (&k, &a) in idx.iter().zip(vals) {
                r[k] -= a * xi;
            }
        }
        self.inv.ftran(&mut r);
        for (xi, d) in x.iter_mut().zip(r) {
            *xi += d;
        }
        self.xb = x;
    }

    /// Rebuild the inverse from the basic columns; positions are reassigned.
    fn refactor(&mut self) -> Result<(), LpError> {
        let cols: Vec<(&[usize], &[F])> = self.basis.iter().map(|&c| self.sf.col(c)).collect();
        let (inv, rows) = match EtaFile::factor(self.m, &cols) {
            Ok(done) => done,
            Err(Singular { partial, assigned }) => {
                self.repairs += 1;
                if self.repairs > MAX_REPAIRS {
                    return Err(LpError::NumericalBreakdown { iterations: self.pivots });
                }
                (partial, assigned)
            }
        };
        let mut basis = vec![usize::MAX; self.m];
        for (&c, &r) in self.basis.iter().zip(&rows) {
            if r == usize::MAX {
                self.pos[c] = NONBASIC;
            } else {
                basis[r] = c;
                self.pos[c] = r;
            }
        }
        // A pivot on a roundoff-sized element left the basis singular. The
        // dependent columns leave and each uncovered row takes back its own
        // slack or artificial, a unit column the partial inverse already
        // handles.
        let mut repaired = false;
        for (r, slot) in basis.iter_mut().enumerate() {
            if *slot == usize::MAX {
                let c = self.sf.initial_basis[r];
                *slot = c;
                self.pos[c] = r;
                repaired = true;
            }
        }
        self.basis = basis;
        self.factored = inv.len();
        self.inv = inv;
        if repaired {
            // The swap keeps the basis invertible but not necessarily
            // feasible; without a point to resume from, stop.
            self.refresh_xb();
            let tol = F::cast_f64(FEAS_TOL);
            let bad = (0..self.m).any(|i| {
                self.xb[i] < -tol || (self.phase2 && self.sf.artificial[self.basis[i]] && self.xb[i] > tol)
            });
            if bad {
                return Err(LpError::NumericalBreakdown { iterations: self.pivots });
            }
        }
        Ok(())
    }

    /// After phase 1, replace basic artificials (at zero) by structural
    /// columns where possible. Rows where no replacement exists are
    /// redundant; their artificial stays basic and is pinned at zero by the
    /// ratio test.
    fn drive_out_artificials(&mut self) {
        let m = self.m;
        for r in 0..m {
            if !self.sf.artificial[self.basis[r]] {
                continue;
            }
            let mut best: Option<(usize, F)> = None;
            let row = self.btran_unit(r);
            for j in 0..self.sf.ncols() {
                if self.pos[j] != NONBASIC || self.sf.artificial[j] {
                    continue;
                }
                let (idx, vals) = self.sf.col(j);
                let v: F = idx.iter().zip(vals).map(|(&k, &a)| row[k] * a).sum();
                if v.abs() > F::cast_f64(1e-7) && best.is_none_or(|(_, bv)| v.abs() > bv.abs()) {
                    best = Some((j, v));
                }
            }
            if let Some((j, _)) = best {
                let alpha = self.ftran(j);
                self.xb[r] = F::zero();
                self.pivot(r, j, &alpha);
            }
        }
        self.refresh_xb();
    }

    fn extract(&self, lp: &LinearProgram<F>, y_std: &[F]) -> LpSolution<F> {
        let sf = self.sf;
        let mut z = vec![F::zero(); sf.ncols()];
        let clamp = F::cast_f64(FEAS_TOL);
        for (i, &c) in self.basis.iter().enumerate() {
            let v = self.xb[i];
            z[c] = if v < F::zero() && v > -clamp { F::zero() } else { v };
        }
        let x: Vec<F> = sf
            .var_map
            .iter()
            .map(|vm| match *vm {
                VarMap::Shift { col, offset } => offset + z[col],
                VarMap::Reflect { col, offset } => offset - z[col],
                VarMap::Split { pos, neg } => z[pos] - z[neg],
            })
            .collect();
        let s = match lp.sense() {
            Sense::Minimize => F::one(),
            Sense::Maximize => -F::one(),
        };
        let y: Vec<F> = (0..lp.num_rows()).map(|i| s * sf.row_sign[i] * y_std[i]).collect();
        let reduced_costs = lp.reduced_costs(&y);
        let objective = lp.objective_value(&x);
        let primal_residual = lp.primal_residual(&x);
        let (dual_obj, rr, cr) = dual_objective(lp, &y);
        let dual_residual = rr.iter().chain(cr.iter()).fold(F::zero(), |a, &v| a.max(v));
        LpSolution {
            status: LpStatus::Optimal,
            objective,
            x,
            y,
            reduced_costs,
            pivots: self.pivots,
            primal_residual,
            dual_residual,
            duality_gap: (objective - dual_obj).abs(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::LpBuilder;

    #[test]
    fn single_bound_row() {
        let mut b = LpBuilder::<f64>::new(Sense::Minimize);
        let x = b.nonneg(1.0);
        b.row(vec![(x, 1.0)], Relation::Ge, 3.0);
        let s = solve(&b.build().unwrap()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 3.0).abs() < 1e-12);
        assert!((s.y[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn box_constrained_max() {
        // max x + y s.t. x + y <= 2, x,y in [0,1.5]
        let mut b = LpBuilder::<f64>::new(Sense::Maximize);
        let x = b.var(1.0, Some(0.0), Some(1.5));
        let y = b.var(1.0, Some(0.0), Some(1.5));
        b.row(vec![(x, 1.0), (y, 1.0)], Relation::Le, 2.0);
        let s = solve(&b.build().unwrap()).unwrap();
        assert!((s.objective - 2.0).abs() < 1e-12);
        assert!(s.dual_residual <= 1e-12 && s.duality_gap <= 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut b = LpBuilder::<f64>::new(Sense::Minimize);
        let x = b.nonneg(1.0);
        b.row(vec![(x, 1.0)], Relation::Ge, 2.0);
        b.row(vec![(x, 1.0)], Relation::Le, 1.0);
        assert_eq!(solve(&b.build().unwrap()).unwrap().status, LpStatus::Infeasible);

        let mut b = LpBuilder::<f64>::new(Sense::Maximize);
        let x = b.nonneg(1.0);
        let y = b.free(0.0);
        b.row(vec![(x, 1.0), (y, -1.0)], Relation::Le, 1.0);
        assert_eq!(solve(&b.build().unwrap()).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn free_and_reflected_variables() {
        // min x - y  s.t. x >= -2 (free x), y <= 3 (y unbounded below), x + y = 0
        let mut b = LpBuilder::<f64>::new(Sense::Minimize);
        let x = b.free(1.0);
        let y = b.var(-1.0, None, Some(3.0));
        b.row(vec![(x, 1.0)], Relation::Ge, -2.0);
        b.row(vec![(x, 1.0), (y, 1.0)], Relation::Eq, 0.0);
        let s = solve(&b.build().unwrap()).unwrap();
        // x = -2, y = 2 gives -4; y = 3 forces x = -3 < -2, infeasible
        assert!((s.objective + 4.0).abs() < 1e-12, "{s:?}");
        assert!(s.primal_residual < 1e-12);
        assert!(s.duality_gap < 1e-12);
    }

    #[test]
    fn redundant_equality_rows() {
        let mut b = LpBuilder::<f64>::new(Sense::Minimize);
        let x = b.nonneg(1.0);
        let y = b.nonneg(2.0);
        b.row(vec![(x, 1.0), (y, 1.0)], Relation::Eq, 1.0);
        b.row(vec![(x, 2.0), (y, 2.0)], Relation::Eq, 2.0);
        let s = solve(&b.build().unwrap()).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-12);
        assert!(s.dual_residual < 1e-12 && s.duality_gap < 1e-12);
    }

    #[test]
    fn pivot_cap_reports_breakdown() {
        let mut b = LpBuilder::<f64>::new(Sense::Maximize);
        let x = b.nonneg(1.0);
        let y = b.nonneg(1.0);
        b.row(vec![(x, 1.0), (y, 2.0)], Relation::Le, 4.0);
        b.row(vec![(x, 3.0), (y, 1.0)], Relation::Le, 6.0);
        let lp = b.build().unwrap();
        let opts = SolveOptions { max_pivots: Some(0), ..SolveOptions::default() };
        assert!(matches!(solve_with(&lp, &opts), Err(LpError::NumericalBreakdown { .. })));
    }

    #[test]
    fn runs_on_f32() {
        let lp = LinearProgram::<f32>::from_dense(
            Sense::Maximize,
            vec![3.0, 2.0],
            vec![vec![1.0, 1.0], vec![1.0, 3.0]],
            vec![Relation::Le, Relation::Le],
            vec![4.0, 6.0],
        )
        .unwrap();
        let s = solve(&lp).unwrap();
        assert!((s.objective - 12.0).abs() < 1e-5);
    }
}
