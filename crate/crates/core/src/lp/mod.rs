//! Linear programs in general form and everything built around them:
//! the revised simplex solver, dual certificates, the LP dual and an export
//! to CPLEX-LP text.

mod certificate;
mod cplex;
mod eta;
mod simplex;

pub use certificate::{
    dual_objective, verify_certificate, verify_certificate_tol, BoundDirection, CertificateReport, DualCertificate,
};
pub use cplex::to_cplex_lp;
pub use simplex::{solve, solve_with, LpSolution, LpStatus, SolveOptions};

use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum LpError {
    #[error("variable index {index} out of range ({count} variables)")]
    VariableOutOfRange { index: usize, count: usize },
    #[error("row {row} has no nonzero coefficient")]
    EmptyRow { row: usize },
    #[error("variable {index} has lower bound above upper bound")]
    InvertedBounds { index: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("simplex did not terminate within {iterations} pivots (numerical breakdown)")]
    NumericalBreakdown { iterations: usize },
}

/// Default tolerances: primal/dual feasibility and duality gap.
pub const FEAS_TOL: f64 = 1e-9;
pub const GAP_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row<T> {
    pub coeffs: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable<T> {
    pub cost: T,
    pub lower: Option<T>,
    pub upper: Option<T>,
    pub name: String,
}

/// An immutable LP: `min/max c·x` subject to row constraints and variable
/// bounds (`None` meaning infinite). Built through [`LpBuilder`].
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    sense: Sense,
    vars: Vec<Variable<T>>,
    rows: Vec<Row<T>>,
    row_names: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct LpBuilder<T> {
    sense: Sense,
    vars: Vec<Variable<T>>,
    rows: Vec<Row<T>>,
    row_names: Vec<String>,
}

impl<T: Scalar> LpBuilder<T> {
    pub fn new(sense: Sense) -> Self {
        Self { sense, vars: Vec::new(), rows: Vec::new(), row_names: Vec::new() }
    }

    /// Variable with `0 <= x < inf`.
    pub fn nonneg(&mut self, cost: T) -> usize {
        self.var(cost, Some(T::zero()), None)
    }

    pub fn free(&mut self, cost: T) -> usize {
        self.var(cost, None, None)
    }

    pub fn var(&mut self, cost: T, lower: Option<T>, upper: Option<T>) -> usize {
        let name = format!("x{}", self.vars.len());
        self.named_var(name, cost, lower, upper)
    }

    pub fn named_var(&mut self, name: impl Into<String>, cost: T, lower: Option<T>, upper: Option<T>) -> usize {
        self.vars.push(Variable { cost, lower, upper, name: name.into() });
        self.vars.len() - 1
    }

    pub fn row(&mut self, coeffs: Vec<(usize, T)>, relation: Relation, rhs: T) -> usize {
        let name = format!("c{}", self.rows.len());
        self.named_row(name, coeffs, relation, rhs)
    }

    pub fn named_row(&mut self, name: impl Into<String>, coeffs: Vec<(usize, T)>, relation: Relation, rhs: T) -> usize {
        self.rows.push(Row { coeffs, relation, rhs });
        self.row_names.push(name.into());
        self.rows.len() - 1
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    /// Validate and freeze. Duplicate indices within a row are merged and
    /// explicit zeros dropped; a row left without coefficients is an error.
    pub fn build(self) -> Result<LinearProgram<T>, LpError> {
        let n = self.vars.len();
        for (i, v) in self.vars.iter().enumerate() {
            if let (Some(l), Some(u)) = (&v.lower, &v.upper) {
                if l > u {
                    return Err(LpError::InvertedBounds { index: i });
                }
            }
        }
        let mut rows = Vec::with_capacity(self.rows.len());
        for (r, row) in self.rows.into_iter().enumerate() {
            let mut coeffs: Vec<(usize, T)> = Vec::with_capacity(row.coeffs.len());
            let mut sorted = row.coeffs;
            sorted.sort_by_key(|(j, _)| *j);
            for (j, a) in sorted {
                if j >= n {
                    return Err(LpError::VariableOutOfRange { index: j, count: n });
                }
                match coeffs.last_mut() {
                    Some((lj, la)) if *lj == j => *la = la.clone() + a,
                    _ => coeffs.push((j, a)),
                }
            }
            coeffs.retain(|(_, a)| !a.is_zero());
            if coeffs.is_empty() {
                return Err(LpError::EmptyRow { row: r });
            }
            rows.push(Row { coeffs, relation: row.relation, rhs: row.rhs });
        }
        Ok(LinearProgram { sense: self.sense, vars: self.vars, rows, row_names: self.row_names })
    }
}

impl<T: Scalar> LinearProgram<T> {
    pub fn builder(sense: Sense) -> LpBuilder<T> {
        LpBuilder::new(sense)
    }

    /// Dense constructor: `a` is `rows × vars`, all variables nonnegative.
    pub fn from_dense(
        sense: Sense,
        cost: Vec<T>,
        a: Vec<Vec<T>>,
        relations: Vec<Relation>,
        rhs: Vec<T>,
    ) -> Result<Self, LpError> {
        if a.len() != relations.len() || a.len() != rhs.len() {
            return Err(LpError::Dimension(format!(
                "{} rows, {} relations, {} right-hand sides",
                a.len(),
                relations.len(),
                rhs.len()
            )));
        }
        let mut b = LpBuilder::new(sense);
        for c in cost {
            b.nonneg(c);
        }
        for ((row, rel), r) in a.into_iter().zip(relations).zip(rhs) {
            if row.len() != b.var_count() {
                return Err(LpError::Dimension(format!("row of length {} for {} variables", row.len(), b.var_count())));
            }
            b.row(row.into_iter().enumerate().collect(), rel, r);
        }
        b.build()
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }
    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }
    pub fn vars(&self) -> &[Variable<T>] {
        &self.vars
    }
    pub fn rows(&self) -> &[Row<T>] {
        &self.rows
    }
    pub fn row_name(&self, i: usize) -> &str {
        &self.row_names[i]
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        self.vars.iter().zip(x).fold(T::zero(), |acc, (v, xi)| acc + v.cost.clone() * xi.clone())
    }

    pub fn row_activity(&self, i: usize, x: &[T]) -> T {
        self.rows[i].coeffs.iter().fold(T::zero(), |acc, (j, a)| acc + a.clone() * x[*j].clone())
    }

    /// Largest violation of any row or bound at `x` (zero when feasible).
    pub fn primal_residual(&self, x: &[T]) -> T {
        let mut worst = T::zero();
        for (i, row) in self.rows.iter().enumerate() {
            let act = self.row_activity(i, x);
            let viol = match row.relation {
                Relation::Le => act - row.rhs.clone(),
                Relation::Ge => row.rhs.clone() - act,
                Relation::Eq => (act - row.rhs.clone()).abs(),
            };
            worst = worst.max_of(viol);
        }
        for (v, xi) in self.vars.iter().zip(x) {
            if let Some(l) = &v.lower {
                worst = worst.max_of(l.clone() - xi.clone());
            }
            if let Some(u) = &v.upper {
                worst = worst.max_of(xi.clone() - u.clone());
            }
        }
        worst
    }

    /// `c - Aᵀy`.
    pub fn reduced_costs(&self, y: &[T]) -> Vec<T> {
        let mut d: Vec<T> = self.vars.iter().map(|v| v.cost.clone()).collect();
        for (row, yi) in self.rows.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (j, a) in &row.coeffs {
                d[*j] = d[*j].clone() - a.clone() * yi.clone();
            }
        }
        d
    }

    /// The LP dual. Bounds other than `x >= 0` become explicit rows first
    /// (appended after the original rows, lower before upper per variable),
    /// so dual variable `i < num_rows()` belongs to original row `i`.
    /// Sign conventions follow `c - Aᵀy`: for a minimisation, `>=` rows get
    /// `y >= 0` and `<=` rows `y <= 0`; a maximisation flips both.
    pub fn dual(&self) -> LinearProgram<T> {
        let mut rows: Vec<(Row<T>, String)> =
            self.rows.iter().cloned().zip(self.row_names.iter().cloned()).collect();
        // 1 = nonnegative, -1 = nonpositive, 0 = free (bounds moved to rows)
        let mut sign = vec![0i8; self.vars.len()];
        for (j, v) in self.vars.iter().enumerate() {
            let lower_zero = v.lower.as_ref().is_some_and(|l| l.is_zero());
            let upper_zero = v.upper.as_ref().is_some_and(|u| u.is_zero());
            if lower_zero {
                sign[j] = 1;
            } else if upper_zero && v.lower.is_none() {
                sign[j] = -1;
                continue;
            } else if let Some(l) = &v.lower {
                rows.push((Row { coeffs: vec![(j, T::one())], relation: Relation::Ge, rhs: l.clone() }, format!("lb_{}", v.name)));
            }
            if let Some(u) = &v.upper {
                rows.push((Row { coeffs: vec![(j, T::one())], relation: Relation::Le, rhs: u.clone() }, format!("ub_{}", v.name)));
            }
        }
        let (dual_sense, ge_bounds, le_bounds, col_rel) = match self.sense {
            Sense::Minimize => (
                Sense::Maximize,
                (Some(T::zero()), None),
                (None, Some(T::zero())),
                Relation::Le,
            ),
            Sense::Maximize => (
                Sense::Minimize,
                (None, Some(T::zero())),
                (Some(T::zero()), None),
                Relation::Ge,
            ),
        };
        let mut b = LpBuilder::new(dual_sense);
        let mut cols: Vec<Vec<(usize, T)>> = vec![Vec::new(); self.vars.len()];
        for (i, (row, name)) in rows.iter().enumerate() {
            let (lo, hi) = match row.relation {
                Relation::Ge => ge_bounds.clone(),
                Relation::Le => le_bounds.clone(),
                Relation::Eq => (None, None),
            };
            b.named_var(format!("y_{name}"), row.rhs.clone(), lo, hi);
            for (j, a) in &row.coeffs {
                cols[*j].push((i, a.clone()));
            }
        }
        for (j, col) in cols.into_iter().enumerate() {
            let rel = match sign[j] {
                1 => col_rel,
                -1 => flip(col_rel),
                _ => Relation::Eq,
            };
            let name = format!("d_{}", self.vars[j].name);
            if col.is_empty() {
                // A variable in no row: dual constraint is 0 (rel) c_j, which
                // has no variables. Encode it on a fixed helper variable.
                let z = b.named_var(format!("zero_{}", self.vars[j].name), T::zero(), Some(T::zero()), Some(T::zero()));
                b.named_row(name, vec![(z, T::one())], rel, self.vars[j].cost.clone());
            } else {
                b.named_row(name, col, rel, self.vars[j].cost.clone());
            }
        }
        b.build().expect("dual of a valid LP is valid")
    }

    /// Same LP over another scalar type.
    pub fn convert<U: Scalar>(&self) -> LinearProgram<U> {
        let c = |v: &T| crate::scalar::convert::<T, U>(v);
        LinearProgram {
            sense: self.sense,
            vars: self
                .vars
                .iter()
                .map(|v| Variable {
                    cost: c(&v.cost),
                    lower: v.lower.as_ref().map(c),
                    upper: v.upper.as_ref().map(c),
                    name: v.name.clone(),
                })
                .collect(),
            rows: self
                .rows
                .iter()
                .map(|r| Row {
                    coeffs: r.coeffs.iter().map(|(j, a)| (*j, c(a))).collect(),
                    relation: r.relation,
                    rhs: c(&r.rhs),
                })
                .collect(),
            row_names: self.row_names.clone(),
        }
    }
}

fn flip(r: Relation) -> Relation {
    match r {
        Relation::Le => Relation::Ge,
        Relation::Ge => Relation::Le,
        Relation::Eq => Relation::Eq,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_rejects_bad_input() {
        let mut b = LpBuilder::<f64>::new(Sense::Minimize);
        let x = b.nonneg(1.0);
        b.row(vec![(x + 1, 1.0)], Relation::Ge, 1.0);
        assert!(matches!(b.build(), Err(LpError::VariableOutOfRange { .. })));

        let mut b = LpBuilder::<f64>::new(Sense::Minimize);
        let x = b.nonneg(1.0);
        b.row(vec![(x, 1.0), (x, -1.0)], Relation::Ge, 1.0);
        assert!(matches!(b.build(), Err(LpError::EmptyRow { row: 0 })));

        let mut b = LpBuilder::<f64>::new(Sense::Minimize);
        b.var(1.0, Some(2.0), Some(1.0));
        assert!(matches!(b.build(), Err(LpError::InvertedBounds { index: 0 })));

        assert!(LinearProgram::from_dense(Sense::Minimize, vec![1.0, 2.0], vec![vec![1.0]], vec![Relation::Ge], vec![1.0]).is_err());
    }

    #[test]
    fn dual_of_dual_has_original_shape() {
        let lp = LinearProgram::from_dense(
            Sense::Minimize,
            vec![1.0, 2.0],
            vec![vec![1.0, 1.0], vec![1.0, -1.0]],
            vec![Relation::Ge, Relation::Le],
            vec![1.0, 0.5],
        )
        .unwrap();
        let d = lp.dual();
        assert_eq!(d.sense(), Sense::Maximize);
        assert_eq!(d.num_vars(), 2);
        assert_eq!(d.num_rows(), 2);
        assert_eq!(d.vars()[0].lower, Some(0.0));
        assert_eq!(d.vars()[1].upper, Some(0.0));
        let dd = d.dual();
        assert_eq!(dd.sense(), Sense::Minimize);
        assert_eq!(dd.num_vars(), 2);
    }
}
