//! Instance files and builtin instances.

use std::path::Path;

use duelbench::duel::{DuelInstance, Mode};
use duelbench::instances::{
    appendix_example, bst_duel, compression_duel, compression_duel_epsilon, footnote_example, ranking_duel, RankingDuel,
    RankingSpec, Valuation,
};
use duelbench::Duel;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(rename = "type")]
    pub kind: InstanceKind,
    pub p: Vec<f64>,
    #[serde(default)]
    pub valuation: Option<ValuationSpec>,
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(rename = "V", default)]
    pub v: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Ranking,
    Compression,
    Bst,
    Explicit,
}

impl InstanceKind {
    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::Ranking => "ranking",
            InstanceKind::Compression => "compression",
            InstanceKind::Bst => "bst",
            InstanceKind::Explicit => "explicit",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ValuationSpec {
    Linear { c: f64, d: f64 },
    Explicit { values: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Builtin {
    AppendixExample,
    FootnoteExample,
    Compression,
}

/// A loaded instance. Ranking duels keep their spec so that the marginal
/// path stays available when the permutation catalog is too large.
#[derive(Debug, Clone)]
pub enum Loaded {
    Ranking { spec: RankingSpec<f64>, duel: Option<RankingDuel<f64>> },
    Game { kind: InstanceKind, game: Duel, labels: Vec<String> },
}

impl Loaded {
    pub fn kind(&self) -> InstanceKind {
        match self {
            Loaded::Ranking { .. } => InstanceKind::Ranking,
            Loaded::Game { kind, .. } => *kind,
        }
    }

    pub fn game(&self) -> Option<&Duel> {
        match self {
            Loaded::Ranking { duel, .. } => duel.as_ref().map(|d| d.game()),
            Loaded::Game { game, .. } => Some(game),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Loaded::Ranking { spec, .. } => spec.mode(),
            Loaded::Game { game, .. } => game.mode(),
        }
    }

    pub fn requests(&self) -> usize {
        match self {
            Loaded::Ranking { spec, .. } => spec.n(),
            Loaded::Game { game, .. } => game.omega_count(),
        }
    }

    pub fn label(&self, s: usize) -> String {
        match self {
            Loaded::Ranking { duel: Some(d), .. } => d.perm(s).to_string(),
            Loaded::Ranking { duel: None, .. } => format!("#{s}"),
            Loaded::Game { labels, .. } => labels[s].clone(),
        }
    }
}

/// What the user asked for, after parsing.
#[derive(Debug, Clone)]
pub struct Source {
    pub name: String,
    pub builtin: Option<Builtin>,
    pub loaded: Loaded,
}

fn factorial_at_most(n: usize, cap: usize) -> bool {
    let mut acc: usize = 1;
    for i in 2..=n {
        acc = match acc.checked_mul(i) {
            Some(v) if v <= cap => v,
            _ => return false,
        };
    }
    acc <= cap
}

/// Builds the permutation catalog only when the explicit path may use it.
fn ranking(spec: RankingSpec<f64>, cap: usize) -> Result<Loaded, CliError> {
    let duel = if factorial_at_most(spec.n(), cap) { Some(ranking_duel(spec.clone())?) } else { None };
    Ok(Loaded::Ranking { spec, duel })
}

fn schema(source_name: &str, message: impl Into<String>) -> CliError {
    CliError::Schema { source_name: source_name.to_string(), message: message.into() }
}

/// Parses an instance document. Syntax and shape errors carry the line and
/// column reported by the JSON parser.
pub fn parse_instance(text: &str, source_name: &str, cap: usize) -> Result<Loaded, CliError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| schema(source_name, e.to_string()))?;
    let mode = file.mode.unwrap_or(Mode::Welfare);
    let n = file.p.len();
    if n == 0 {
        return Err(schema(source_name, "field `p` must list at least one probability"));
    }
    if file.kind != InstanceKind::Explicit && file.v.is_some() {
        return Err(schema(source_name, format!("field `V` is only allowed for type \"explicit\", not {:?}", file.kind.name())));
    }
    match file.kind {
        InstanceKind::Ranking => {
            let valuation = match file.valuation {
                Some(ValuationSpec::Linear { c, d }) => Valuation::Linear { c, d },
                Some(ValuationSpec::Explicit { values }) => Valuation::Explicit(values),
                None => return Err(schema(source_name, "type \"ranking\" needs a `valuation`")),
            };
            ranking(RankingSpec::new(file.p, valuation, mode)?, cap)
        }
        InstanceKind::Compression | InstanceKind::Bst => {
            let by_depth = match file.valuation {
                Some(ValuationSpec::Explicit { values }) => values,
                Some(ValuationSpec::Linear { .. }) => {
                    return Err(schema(
                        source_name,
                        "tree duels take `valuation.kind = \"explicit\"` with one value per depth (root depth 1)",
                    ))
                }
                None => return Err(schema(source_name, "tree duels need a `valuation` by depth")),
            };
            let (game, labels) = if file.kind == InstanceKind::Compression {
                let (game, trees) = compression_duel(file.p, &by_depth, mode)?;
                (game, trees.iter().map(|t| t.to_string()).collect())
            } else {
                let d = bst_duel(file.p, &by_depth, mode)?;
                (d.game, d.trees.iter().map(|t| t.to_string()).collect())
            };
            Ok(Loaded::Game { kind: file.kind, game, labels })
        }
        InstanceKind::Explicit => {
            if file.valuation.is_some() {
                return Err(schema(source_name, "type \"explicit\" takes its values from `V`, not `valuation`"));
            }
            let v = file.v.ok_or_else(|| schema(source_name, "type \"explicit\" needs a value table `V`"))?;
            if let Some((s, row)) = v.iter().enumerate().find(|(_, row)| row.len() != n) {
                return Err(schema(source_name, format!("`V[{s}]` has {} entries but `p` has {n}", row.len())));
            }
            let labels = (0..v.len()).map(|s| format!("s{s}")).collect();
            let game = DuelInstance::new(file.p, v, mode)?;
            Ok(Loaded::Game { kind: InstanceKind::Explicit, game, labels })
        }
    }
}

pub fn load_file(path: &Path, cap: usize) -> Result<Source, CliError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: name.clone(), source })?;
    let loaded = parse_instance(&text, &name, cap)?;
    Ok(Source { name, builtin: None, loaded })
}

pub fn load_builtin(b: Builtin, epsilon: f64, cap: usize) -> Result<Source, CliError> {
    let loaded = match b {
        Builtin::AppendixExample => {
            let ex = appendix_example::<f64>()?;
            Loaded::Ranking { spec: ex.duel.spec().clone(), duel: Some(ex.duel) }
        }
        Builtin::FootnoteExample => {
            let ex = footnote_example::<f64>()?;
            Loaded::Ranking { spec: ex.duel.spec().clone(), duel: Some(ex.duel) }
        }
        Builtin::Compression => {
            let cd = compression_duel_epsilon(epsilon)?;
            Loaded::Game {
                kind: InstanceKind::Compression,
                game: cd.game,
                labels: cd.trees.iter().map(|t| t.to_string()).collect(),
            }
        }
    };
    if let Some(game) = loaded.game() {
        if game.strategy_count() > cap {
            return Err(duelbench::minimax::EngineError::ExplicitCap { strategies: game.strategy_count(), cap }.into());
        }
    }
    let name = match b {
        Builtin::AppendixExample => "appendix-example",
        Builtin::FootnoteExample => "footnote-example",
        Builtin::Compression => "compression",
    };
    Ok(Source { name: name.to_string(), builtin: Some(b), loaded })
}

/// Letters for the three-page builtins: `⟨a,c,b⟩`.
pub fn lettered(order: &[usize]) -> String {
    let names: Vec<String> = order.iter().map(|&p| ((b'a' + p as u8) as char).to_string()).collect();
    format!("⟨{}⟩", names.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_errors_name_the_line() {
        let err = parse_instance("{\n  \"type\": \"ranking\",\n  \"p\": [0.5, 0.5,]\n}", "t.json", 720).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn explicit_rows_must_match_p() {
        let err = parse_instance(r#"{"type":"explicit","p":[0.5,0.5],"V":[[1,0],[0]]}"#, "t", 720).unwrap_err();
        assert!(err.to_string().contains("V[1]"), "{err}");
    }

    #[test]
    fn large_rankings_skip_the_catalog() {
        let text = r#"{"type":"ranking","p":[0.2,0.2,0.1,0.1,0.1,0.1,0.1,0.1],"valuation":{"kind":"linear","c":1,"d":0}}"#;
        match parse_instance(text, "t", 720).unwrap() {
            Loaded::Ranking { duel, spec } => {
                assert!(duel.is_none());
                assert_eq!(spec.n(), 8);
            }
            other => panic!("{other:?}"),
        }
    }
}
