mod construct;
mod factor;
mod solve;
mod structure;
mod zero_one;

pub use construct::{construct_bst, construct_compression};
pub use factor::{alpha_curve, certify_dual};
pub use solve::{poc, solve, PathChoice};
pub use structure::{check_structure, RandomFamily};
pub use zero_one::zero_one;

use duelbench::duel::MixedStrategy;
use serde_json::{json, Value};

use crate::instance::Loaded;

/// Run-wide settings shared by every command.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub cap: usize,
    pub seed: u64,
    /// Payoff slack for minimax verdicts.
    pub tol: f64,
}

/// A command's result and whether its verification passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub result: Value,
    pub verified: bool,
}

impl Outcome {
    pub fn ok(result: Value) -> Self {
        Outcome { result, verified: true }
    }
}

/// Support weights above this are listed in reports.
const REPORT_SUPPORT: f64 = 1e-10;

fn strategy_json(loaded: &Loaded, x: &MixedStrategy<f64>) -> Value {
    let support: Vec<Value> = x
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > REPORT_SUPPORT)
        .map(|(s, &w)| json!({ "strategy": loaded.label(s), "weight": w }))
        .collect();
    Value::Array(support)
}
