use std::collections::BTreeMap;

use duelbench::duel::MixedStrategy;
use duelbench::instances::{appendix_example, random, ranking_duel, RankingDuel};
use duelbench::minimax::{extreme_minimax, Extreme};
use duelbench::structure::{structure_report, LemmaTally};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::solve::explicit_game;
use super::{Ctx, Outcome, PathChoice};
use crate::error::CliError;
use crate::instance::{Builtin, Loaded, Source};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RandomFamily {
    /// `f(i) = c(n-i) + d`.
    Linear,
    /// Arbitrary strictly decreasing position values.
    Decreasing,
}

type Tallies = BTreeMap<String, LemmaTally>;

fn merge(into: &mut Tallies, from: &Tallies) {
    for (k, t) in from {
        into.entry(k.clone()).or_default().merge(t);
    }
}

/// Tallies for the worst and best minimax strategies plus any extras.
fn check_duel(ctx: &Ctx, duel: &RankingDuel<f64>, extra: &[MixedStrategy<f64>]) -> Result<(Tallies, usize), CliError> {
    let mut strategies = vec![
        extreme_minimax(duel.game(), Extreme::Worst, ctx.cap)?.strategy,
        extreme_minimax(duel.game(), Extreme::Best, ctx.cap)?.strategy,
    ];
    strategies.extend_from_slice(extra);
    let mut out = Tallies::new();
    for x in &strategies {
        merge(&mut out, &structure_report(duel, x)?);
    }
    Ok((out, strategies.len()))
}

/// `--random count` instances from `family` with `n` pages, or the given
/// source. Instance `i` draws from stream `i` of the seeded generator.
pub fn check_structure(
    ctx: &Ctx,
    src: Option<&Source>,
    random_count: usize,
    n: usize,
    family: RandomFamily,
) -> Result<Outcome, CliError> {
    let mut tallies = Tallies::new();
    let mut instances = 0usize;
    let mut strategies = 0usize;
    if let Some(src) = src {
        explicit_game(src, ctx, PathChoice::Explicit)?;
        let Loaded::Ranking { duel: Some(duel), .. } = &src.loaded else {
            return Err(CliError::usage("check-structure needs a ranking duel"));
        };
        let extra = match src.builtin {
            Some(Builtin::AppendixExample) => vec![appendix_example::<f64>()?.xstar],
            _ => vec![],
        };
        let (t, s) = check_duel(ctx, duel, &extra)?;
        merge(&mut tallies, &t);
        instances += 1;
        strategies += s;
    }
    if random_count > 0 {
        if n == 0 {
            return Err(CliError::usage("--n must be at least 1"));
        }
        let batches: Vec<(Tallies, usize)> = (0..random_count)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
                rng.set_stream(i as u64);
                let spec = match family {
                    RandomFamily::Linear => random::linear_welfare(&mut rng, n),
                    RandomFamily::Decreasing => random::decreasing_welfare(&mut rng, n),
                };
                let duel = ranking_duel(spec)?;
                check_duel(ctx, &duel, &[])
            })
            .collect::<Result<_, CliError>>()?;
        for (t, s) in &batches {
            merge(&mut tallies, t);
            strategies += s;
        }
        instances += random_count;
    }
    if instances == 0 {
        return Err(CliError::usage("give --input, --builtin or --random"));
    }
    let verified = tallies.values().all(|t| t.failed == 0);
    Ok(Outcome { result: json!({ "instances": instances, "strategies": strategies, "lemmas": tallies }), verified })
}
