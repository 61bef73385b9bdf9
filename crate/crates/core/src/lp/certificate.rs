use super::{LinearProgram, Relation, Sense, FEAS_TOL};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundDirection {
    /// Certifies `optimum >= bound` (minimisation).
    Lower,
    /// Certifies `optimum <= bound` (maximisation).
    Upper,
}

/// Row multipliers `y` (one per LP row, `c - Aᵀy` convention) together with
/// the objective bound they are claimed to prove.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate<T> {
    pub y: Vec<T>,
    pub claimed_bound: T,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CertificateReport<T> {
    pub direction: BoundDirection,
    /// Sign violations of `y`, per row.
    pub row_residuals: Vec<T>,
    /// Violations of the dual constraint belonging to each primal variable.
    pub column_residuals: Vec<T>,
    pub max_residual: T,
    pub dual_objective: T,
    pub claimed_bound: T,
    /// True when every residual is within tolerance (zero for exact scalars).
    pub feasible: bool,
    /// True when feasible and the dual objective reaches the claimed bound.
    pub valid: bool,
}

/// Dual objective of `y` plus per-row and per-column feasibility residuals.
/// Bounds are priced in: a variable whose reduced cost pushes against a
/// finite bound contributes `bound * reduced_cost`; against an infinite one it
/// is a violation of size `|reduced_cost|`.
pub fn dual_objective<T: Scalar>(lp: &LinearProgram<T>, y: &[T]) -> (T, Vec<T>, Vec<T>) {
    assert_eq!(y.len(), lp.num_rows(), "one multiplier per row");
    let s = match lp.sense() {
        Sense::Minimize => T::one(),
        Sense::Maximize => -T::one(),
    };
    let mut obj = T::zero();
    let mut row_res = Vec::with_capacity(lp.num_rows());
    for (row, yi) in lp.rows().iter().zip(y) {
        let ym = s.clone() * yi.clone();
        let viol = match row.relation {
            Relation::Ge => (-ym.clone()).max_of(T::zero()),
            Relation::Le => ym.clone().max_of(T::zero()),
            Relation::Eq => T::zero(),
        };
        row_res.push(viol);
        obj = obj + row.rhs.clone() * ym;
    }
    let d = lp.reduced_costs(y);
    let mut col_res = Vec::with_capacity(lp.num_vars());
    for (v, dj) in lp.vars().iter().zip(d) {
        let dm = s.clone() * dj;
        let mut viol = T::zero();
        if dm.gt_zero() {
            match &v.lower {
                Some(l) => obj = obj + l.clone() * dm,
                None => viol = dm,
            }
        } else if dm.lt_zero() {
            match &v.upper {
                Some(u) => obj = obj + u.clone() * dm,
                None => viol = -dm,
            }
        }
        col_res.push(viol);
    }
    (s * obj, row_res, col_res)
}

/// Check a dual certificate. Exact scalars use zero tolerance; floats use
/// the default feasibility tolerance.
pub fn verify_certificate<T: Scalar>(lp: &LinearProgram<T>, cert: &DualCertificate<T>) -> CertificateReport<T> {
    let tol = if T::is_exact() { T::zero() } else { T::cast_f64(FEAS_TOL) };
    verify_certificate_tol(lp, cert, tol)
}

pub fn verify_certificate_tol<T: Scalar>(lp: &LinearProgram<T>, cert: &DualCertificate<T>, tol: T) -> CertificateReport<T> {
    let (obj, row_res, col_res) = dual_objective(lp, &cert.y);
    let max_residual = row_res.iter().chain(col_res.iter()).fold(T::zero(), |a, r| a.max_of(r.clone()));
    let feasible = max_residual <= tol;
    let direction = match lp.sense() {
        Sense::Minimize => BoundDirection::Lower,
        Sense::Maximize => BoundDirection::Upper,
    };
    let reaches = match direction {
        BoundDirection::Lower => obj.clone() >= cert.claimed_bound.clone() - tol.clone(),
        BoundDirection::Upper => obj.clone() <= cert.claimed_bound.clone() + tol,
    };
    CertificateReport {
        direction,
        row_residuals: row_res,
        column_residuals: col_res,
        max_residual,
        dual_objective: obj,
        claimed_bound: cert.claimed_bound.clone(),
        feasible,
        valid: feasible && reaches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::LpBuilder;
    use num_rational::BigRational;

    fn q(s: &str) -> BigRational {
        BigRational::from_decimal(s).unwrap()
    }

    #[test]
    fn exact_certificate_for_small_lp() {
        // min x + y  s.t. x + 2y >= 2, 3x + y >= 3
        let mut b = LpBuilder::new(Sense::Minimize);
        let x = b.nonneg(q("1"));
        let y = b.nonneg(q("1"));
        b.row(vec![(x, q("1")), (y, q("2"))], Relation::Ge, q("2"));
        b.row(vec![(x, q("3")), (y, q("1"))], Relation::Ge, q("3"));
        let lp = b.build().unwrap();
        // optimum x = 4/5, y = 3/5, value 7/5; duals (2/5, 1/5)
        let cert = DualCertificate { y: vec![q("0.4"), q("0.2")], claimed_bound: q("1.4") };
        let r = verify_certificate(&lp, &cert);
        assert!(r.valid);
        assert_eq!(r.max_residual, q("0"));
        assert_eq!(r.dual_objective, q("1.4"));

        let bad = DualCertificate { y: vec![q("0.5"), q("0.2")], claimed_bound: q("1.6") };
        let r = verify_certificate(&lp, &bad);
        assert!(!r.feasible);
        assert_eq!(r.column_residuals[0], q("0.1"));

        let wrong_sign = DualCertificate { y: vec![q("-0.1"), q("0")], claimed_bound: q("-0.2") };
        let r = verify_certificate(&lp, &wrong_sign);
        assert_eq!(r.row_residuals[0], q("0.1"));
    }

    #[test]
    fn bounds_enter_the_dual_objective() {
        // max x s.t. x <= 10, with 1 <= x <= 3: bound certificate via upper bound only
        let mut b = LpBuilder::new(Sense::Maximize);
        let x = b.var(1.0, Some(1.0), Some(3.0));
        b.row(vec![(x, 1.0)], Relation::Le, 10.0);
        let lp = b.build().unwrap();
        let r = verify_certificate(&lp, &DualCertificate { y: vec![0.0], claimed_bound: 3.0 });
        assert!(r.valid, "{r:?}");
        assert_eq!(r.dual_objective, 3.0);
    }
}
