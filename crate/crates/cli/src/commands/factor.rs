use duelbench::factor::{
    alpha_k, repaired_paper_certificate, verify_paper_certificate, DualPoint, DualPointCheck, FactorRevealingProblem, Rational,
};
use duelbench::scalar::Scalar;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{Ctx, Outcome};
use crate::error::CliError;

/// `(k, α_k must reach)` for the anchor points of the curve.
const ANCHORS: [(usize, f64); 2] = [(10, 0.612), (100, 0.637)];

/// The tabulated certificate is for this `k`.
const PAPER_K: usize = 10;

pub fn alpha_curve(_ctx: &Ctx, k_min: usize, k_max: usize, certify: bool) -> Result<Outcome, CliError> {
    if k_max < 2 {
        return Err(CliError::usage(format!("--k-max must be at least 2, got {k_max}")));
    }
    if k_min < 2 || k_min > k_max {
        return Err(CliError::usage(format!("--k-min must lie in [2, {k_max}], got {k_min}")));
    }
    let rows: Vec<(usize, f64, Option<(f64, bool)>, f64, usize)> = (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            let a = alpha_k(k)?;
            let cert = certify.then(|| {
                let (point, check) = a.exact_certificate();
                (point.theta().as_f64(), check.feasible)
            });
            Ok((k, a.alpha, cert, a.lp4_residual, a.pivots))
        })
        .collect::<Result<_, CliError>>()?;
    let mut verified = rows.iter().all(|r| r.2.map_or(true, |(_, ok)| ok));
    let anchors: Vec<Value> = ANCHORS
        .iter()
        .filter_map(|&(k, threshold)| {
            let row = rows.iter().find(|r| r.0 == k)?;
            let met = row.1 >= threshold && row.2.map_or(true, |(bound, ok)| ok && bound >= threshold);
            verified &= met;
            Some(json!({ "k": k, "alpha": row.1, "threshold": threshold, "met": met }))
        })
        .collect();
    let table: Vec<Value> = rows
        .iter()
        .map(|(k, alpha, cert, residual, pivots)| {
            json!({
                "k": k,
                "alpha": alpha,
                "certified_bound": cert.map(|c| c.0),
                "certificate_feasible": cert.map(|c| c.1),
                "lp4_residual": residual,
                "pivots": pivots,
            })
        })
        .collect();
    Ok(Outcome { result: json!({ "anchors": anchors, "rows": table }), verified })
}

fn exact(r: &Rational) -> Value {
    json!({ "value": r.as_f64(), "exact": r.to_string() })
}

fn check_json(point: &DualPoint<Rational>, check: &DualPointCheck<Rational>) -> Value {
    let lp5 = FactorRevealingProblem { k: point.k() }.lp5::<f64>();
    let violations: Vec<Value> = check
        .lp5_row_violations
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| json!({ "row": lp5.row_name(i), "residual": v.as_f64(), "exact": v.to_string() }))
        .collect();
    let cert = &check.certificate;
    json!({
        "k": point.k(),
        "theta": exact(point.theta()),
        "feasible": check.feasible,
        "routes_agree": check.routes_agree,
        "dual_certificate": {
            "max_residual": exact(&cert.max_residual),
            "dual_objective": exact(&cert.dual_objective),
            "valid": cert.valid,
        },
        "lp5": {
            "max_violation": exact(&check.lp5_max_violation),
            "objective": exact(&check.lp5_objective),
            "violated_rows": violations,
        },
    })
}

/// Checks the tabulated `k = 10` point exactly; with `repaired`, the verdict
/// is taken from the repaired point instead.
pub fn certify_dual(_ctx: &Ctx, repaired: bool) -> Result<Outcome, CliError> {
    let paper = verify_paper_certificate();
    let point = duelbench::factor::paper_dual_point::<Rational>();
    debug_assert_eq!(point.k(), PAPER_K);
    let mut result = json!({ "table": check_json(&point, &paper) });
    let mut verified = paper.feasible && paper.routes_agree;
    if repaired {
        let (fixed, check) = repaired_paper_certificate();
        result["repaired"] = check_json(&fixed, &check);
        verified = check.feasible && check.routes_agree;
    }
    Ok(Outcome { result, verified })
}
