use duelbench::duel::MixedStrategy;
use duelbench::instances::{compression_duel_epsilon, sample_uniform_bst, BinarySearchDuel};
use duelbench::minimax::{extreme_minimax, Extreme};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{Ctx, Outcome};
use crate::error::CliError;

/// Samples per independently seeded stream, so results do not depend on the
/// thread count.
const SAMPLE_CHUNK: usize = 4096;

/// Smallest request count the construction can produce.
const BST_MIN_N: usize = 24;

pub fn construct_compression(ctx: &Ctx, epsilon: f64) -> Result<Outcome, CliError> {
    let cd = compression_duel_epsilon(epsilon)?;
    let game = &cd.game;
    let m = game.strategy_count();
    let xstar = MixedStrategy::pure(m, cd.xstar_index);
    let payoffs = game.utility_against_pure(&xstar);
    let min_payoff = payoffs.iter().copied().fold(f64::INFINITY, f64::min);
    let losing = payoffs.iter().filter(|&&u| u < -ctx.tol).count();
    let sw_x = game.pure_value(cd.xstar_index);
    let (sw_opt, opt_index) = game.optimum();
    let bound = sw_x / sw_opt;
    let worst = extreme_minimax(game, Extreme::Worst, ctx.cap)?;
    let poc = worst.value / sw_opt;
    let verified = losing == 0 && bound <= epsilon && poc <= bound + ctx.tol;
    Ok(Outcome {
        result: json!({
            "epsilon": epsilon,
            "trees": m,
            "xstar_tree": cd.trees[cd.xstar_index].to_string(),
            "opt_tree": cd.trees[cd.opt_index].to_string(),
            "optimum_is_caterpillar": game.pure_value(opt_index) == game.pure_value(cd.opt_index),
            "xstar_welfare": sw_x,
            "xstar_welfare_formula": epsilon / 16.0,
            "opt_welfare": sw_opt,
            "opt_welfare_formula": (16.0 + epsilon) / 64.0,
            "xstar_min_payoff": min_payoff,
            "xstar_losing_opponents": losing,
            "poc_bound": bound,
            "poc_at_most_epsilon": bound <= epsilon,
            "price_of_competition": poc,
        }),
        verified,
    })
}

pub fn construct_bst(ctx: &Ctx, beta: f64, samples: usize) -> Result<Outcome, CliError> {
    let duel = BinarySearchDuel::<f64>::new(beta)?;
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let (min_payoff, losing) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            rng.set_stream(c as u64);
            let count = SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK);
            let mut min = f64::INFINITY;
            let mut losing = 0usize;
            for _ in 0..count {
                let t = sample_uniform_bst(duel.n, &mut rng);
                let u = duel.payoff(&duel.xstar, &t);
                min = min.min(u);
                losing += usize::from(u < -ctx.tol);
            }
            (min, losing)
        })
        .reduce(|| (f64::INFINITY, 0), |a, b| (a.0.min(b.0), a.1 + b.1));
    let cases = duel.case_conditions();
    let bound = duel.poc_bound();
    let verified = losing == 0 && bound < beta && cases.depth_profile_ok && cases.first_key_depth == 2;
    Ok(Outcome {
        result: json!({
            "beta": beta,
            "k": duel.k,
            "n": duel.n,
            "n_minimum": BST_MIN_N,
            "note": format!("n = 3·2^k with k >= 3, so n >= {BST_MIN_N} for every beta in (0, 1)"),
            "epsilon": duel.epsilon,
            "xstar_tree": duel.xstar.to_string(),
            "xstar_welfare": duel.welfare(&duel.xstar),
            "xstar_welfare_formula": duel.xstar_welfare_formula(),
            "opt_welfare_lower_bound": duel.opt_lower_bound(),
            "poc_upper": duel.poc_upper(),
            "poc_bound": bound,
            "poc_bound_below_beta": bound < beta,
            "samples": samples,
            "xstar_min_payoff": if samples == 0 { None } else { Some(min_payoff) },
            "xstar_losing_samples": losing,
            "case_conditions": cases,
        }),
        verified,
    })
}
