use duelbench::minimax::{extreme_minimax, Extreme};
use duelbench::zero_one::{layer_decomposition, ZeroOneAnalysis, LAYER_TOL};
use serde_json::json;

use super::solve::explicit_game;
use super::{strategy_json, Ctx, Outcome, PathChoice};
use crate::error::CliError;
use crate::instance::Source;

pub fn zero_one(ctx: &Ctx, src: &Source) -> Result<Outcome, CliError> {
    let game = explicit_game(src, ctx, PathChoice::Explicit)?.expect("explicit path yields a game");
    let xstar = extreme_minimax(game, Extreme::Worst, ctx.cap)?;
    let support = strategy_json(&src.loaded, &xstar.strategy);
    let analysis = ZeroOneAnalysis::with_xstar(game, xstar)?;
    let report = analysis.bound()?;
    let (welfare, layered) = layer_decomposition(game, &analysis.xstar().strategy)?;
    let layers_ok = (welfare - layered).abs() <= LAYER_TOL * welfare.abs().max(1.0);
    Ok(Outcome {
        result: json!({
            "xstar": { "welfare": welfare, "support": support },
            "bound": report.bound,
            "argmin_alpha": report.argmin_alpha,
            "price_of_competition": report.poc,
            "bound_holds": report.holds,
            "layer_decomposition": { "welfare": welfare, "layered": layered, "holds": layers_ok },
            "thresholds": report.per_threshold,
        }),
        verified: report.holds && layers_ok,
    })
}
