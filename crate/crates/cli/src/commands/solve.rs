use duelbench::duel::{Mode, MixedStrategy};
use duelbench::instances::{appendix_example, footnote_example};
use duelbench::minimax::{
    cost_ratio, extreme_minimax, game_value, ranking_minimax_marginal, welfare_ratio, EngineError, Extreme, MinimaxOutcome,
};
use duelbench::Duel;
use serde_json::{json, Value};

use super::{strategy_json, Ctx, Outcome};
use crate::error::CliError;
use crate::instance::{lettered, Builtin, Loaded, Source};

/// Appendix claim: the linear ranking duel has PoC at most this.
const APPENDIX_POC_BOUND: f64 = 0.8334;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PathChoice {
    /// Explicit LP when the catalog fits under the cap, marginal otherwise.
    Auto,
    Explicit,
    Marginal,
}

fn ratio(mode: Mode, worst: f64, opt: f64) -> f64 {
    match mode {
        Mode::Welfare => welfare_ratio(worst, opt),
        Mode::Cost => cost_ratio(worst, opt),
    }
}

fn value_key(mode: Mode) -> &'static str {
    match mode {
        Mode::Welfare => "welfare",
        Mode::Cost => "cost",
    }
}

/// The explicit game when `path` allows it and the catalog is within the cap.
pub(super) fn explicit_game<'a>(src: &'a Source, ctx: &Ctx, path: PathChoice) -> Result<Option<&'a Duel>, CliError> {
    let game = src.loaded.game();
    let ranking = matches!(src.loaded, Loaded::Ranking { .. });
    match (path, game) {
        (PathChoice::Marginal, _) if ranking => Ok(None),
        (PathChoice::Marginal, _) => Err(CliError::usage("the marginal path applies to ranking duels only")),
        (_, Some(g)) if g.strategy_count() <= ctx.cap => Ok(Some(g)),
        (PathChoice::Auto, _) if ranking => Ok(None),
        (_, Some(g)) => Err(EngineError::ExplicitCap { strategies: g.strategy_count(), cap: ctx.cap }.into()),
        (_, None) => {
            let strategies = (2..=src.loaded.requests()).fold(1usize, |acc, i| acc.saturating_mul(i));
            Err(EngineError::ExplicitCap { strategies, cap: ctx.cap }.into())
        }
    }
}

fn outcome_json(src: &Source, o: &MinimaxOutcome<f64>) -> Value {
    json!({ "value": o.value, "guarantee": o.guarantee, "support": strategy_json(&src.loaded, &o.strategy) })
}

fn describe(src: &Source, path: &str) -> Value {
    let strategies = src.loaded.game().map(|g| g.strategy_count());
    json!({
        "source": src.name,
        "type": src.loaded.kind().name(),
        "mode": value_key(src.loaded.mode()),
        "requests": src.loaded.requests(),
        "strategies": strategies,
        "path": path,
    })
}

pub fn solve(ctx: &Ctx, src: &Source) -> Result<Outcome, CliError> {
    let mode = src.loaded.mode();
    let mut verified = true;
    let mut result = match explicit_game(src, ctx, PathChoice::Auto)? {
        Some(game) => {
            let value = game_value(game)?;
            let worst = extreme_minimax(game, Extreme::Worst, ctx.cap)?;
            let best = extreme_minimax(game, Extreme::Best, ctx.cap)?;
            let (opt, opt_index) = game.optimum();
            verified &= worst.guarantee >= -ctx.tol && best.guarantee >= -ctx.tol && value.abs() <= ctx.tol;
            json!({
                "instance": describe(src, "explicit"),
                "game_value": value,
                "optimum": { "value": opt, "strategy": src.loaded.label(opt_index) },
                "worst_minimax": outcome_json(src, &worst),
                "best_minimax": outcome_json(src, &best),
                "price_of_competition": ratio(mode, worst.value, opt),
            })
        }
        None => {
            let Loaded::Ranking { spec, .. } = &src.loaded else { unreachable!("explicit_game only declines ranking duels") };
            let worst = ranking_minimax_marginal(spec, Extreme::Worst)?;
            let best = ranking_minimax_marginal(spec, Extreme::Best)?;
            let opt = spec.optimal_value();
            json!({
                "instance": describe(src, "marginal"),
                // Symmetric zero-sum: the value is zero without solving.
                "game_value": 0.0,
                "optimum": { "value": opt },
                "worst_minimax": { "value": worst.value, "marginals": worst.q.rows() },
                "best_minimax": { "value": best.value, "marginals": best.q.rows() },
                "price_of_competition": ratio(mode, worst.value, opt),
            })
        }
    };
    match src.builtin {
        Some(Builtin::AppendixExample) => {
            let (section, ok) = appendix_section(ctx, &result)?;
            result["appendix"] = section;
            verified &= ok;
        }
        Some(Builtin::FootnoteExample) => {
            let (section, ok) = footnote_section(ctx)?;
            result["footnote"] = section;
            verified &= ok;
        }
        _ => {}
    }
    Ok(Outcome { result, verified })
}

/// Payoff of the designated `x*` against all six rankings and the bound it
/// certifies.
fn appendix_section(ctx: &Ctx, solved: &Value) -> Result<(Value, bool), CliError> {
    let ex = appendix_example::<f64>()?;
    let game = ex.duel.game();
    let label = |s: usize| lettered(ex.duel.perm(s).order());
    let payoffs = game.utility_against_pure(&ex.xstar);
    let table: Vec<Value> =
        payoffs.iter().enumerate().map(|(t, u)| json!({ "against": label(t), "utility": u })).collect();
    let min_payoff = payoffs.iter().copied().fold(f64::INFINITY, f64::min);
    let sw = game.social_welfare(&ex.xstar)?;
    let opt = game.pure_value(ex.opt);
    let xstar_ratio = sw / opt;
    let poc = solved["price_of_competition"].as_f64().unwrap_or(f64::NAN);
    let holds = min_payoff >= -ctx.tol && xstar_ratio <= APPENDIX_POC_BOUND && poc <= xstar_ratio + ctx.tol;
    let support: Vec<String> = ex.xstar.support(0.0).into_iter().map(label).collect();
    let section = json!({
        "xstar": { "support": support, "weights": [0.5, 0.5] },
        "payoff_vs_pure": table,
        "min_payoff": min_payoff,
        "xstar_welfare": sw,
        "opt_welfare": opt,
        "opt_strategy": label(ex.opt),
        "xstar_ratio": xstar_ratio,
        "claim": format!("PoC <= {APPENDIX_POC_BOUND}"),
        "claim_holds": holds,
    });
    Ok((section, holds))
}

/// Page-by-page utility of the welfare-optimal ranking against the rotated
/// one; the aggregate is negative even though the planner maximises welfare.
fn footnote_section(ctx: &Ctx) -> Result<(Value, bool), CliError> {
    let ex = footnote_example::<f64>()?;
    let game = ex.duel.game();
    let m = game.strategy_count();
    let (planner, challenger) = (MixedStrategy::pure(m, ex.planner), MixedStrategy::pure(m, ex.challenger));
    let planner_perm = ex.duel.perm(ex.planner);
    let challenger_perm = ex.duel.perm(ex.challenger);
    let mut loss = 0.0;
    let rows: Vec<Value> = (0..game.omega_count())
        .map(|w| {
            let u = game.utility_omega(&planner, &challenger, w);
            if u < 0.0 {
                loss += game.probs()[w];
            }
            json!({
                "page": w + 1,
                "p": game.probs()[w],
                "planner_rank": planner_perm.position(w) + 1,
                "challenger_rank": challenger_perm.position(w) + 1,
                "utility": u,
            })
        })
        .collect();
    let aggregate = game.utility(&planner, &challenger);
    let ok = (aggregate + 0.30).abs() <= ctx.tol.max(1e-12) && game.optimum().1 == ex.planner;
    let section = json!({
        "planner": planner_perm.to_string(),
        "challenger": challenger_perm.to_string(),
        "utility_table": rows,
        "aggregate_utility": aggregate,
        "planner_loss_probability": loss,
        "planner_is_welfare_optimal": game.optimum().1 == ex.planner,
    });
    Ok((section, ok))
}

pub fn poc(ctx: &Ctx, src: &Source, path: PathChoice) -> Result<Outcome, CliError> {
    let mode = src.loaded.mode();
    let result = match explicit_game(src, ctx, path)? {
        Some(game) => {
            let worst = extreme_minimax(game, Extreme::Worst, ctx.cap)?;
            let (opt, _) = game.optimum();
            json!({
                "instance": describe(src, "explicit"),
                "worst_minimax_value": worst.value,
                "optimum": opt,
                "price_of_competition": ratio(mode, worst.value, opt),
            })
        }
        None => {
            let Loaded::Ranking { spec, .. } = &src.loaded else { unreachable!("explicit_game only declines ranking duels") };
            let worst = ranking_minimax_marginal(spec, Extreme::Worst)?;
            let opt = spec.optimal_value();
            json!({
                "instance": describe(src, "marginal"),
                "worst_minimax_value": worst.value,
                "optimum": opt,
                "price_of_competition": ratio(mode, worst.value, opt),
            })
        }
    };
    Ok(Outcome::ok(result))
}
