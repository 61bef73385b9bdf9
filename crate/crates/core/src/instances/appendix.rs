use super::{ranking_duel, InstanceError, RankingDuel, RankingSpec};
use crate::duel::MixedStrategy;
use crate::scalar::Scalar;

/// Three pages with probabilities `(0.4, 0.4, 0.2)` and `f(i) = 3 - i`,
/// together with the minimax strategy `½⟨a,c,b⟩ + ½⟨b,c,a⟩` whose welfare
/// is `1` against an optimum of `1.2`.
#[derive(Debug, Clone)]
pub struct AppendixExample<T> {
    pub duel: RankingDuel<T>,
    pub xstar: MixedStrategy<T>,
    /// `⟨a,b,c⟩`
    pub opt: usize,
}

pub fn appendix_example<T: Scalar>() -> Result<AppendixExample<T>, InstanceError> {
    let dec = |s: &str| T::from_decimal(s).expect("decimal literal");
    let spec = RankingSpec::linear(vec![dec("0.4"), dec("0.4"), dec("0.2")], T::one(), T::zero())?;
    let duel = ranking_duel(spec)?;
    let acb = duel.index_of_order(&[0, 2, 1])?;
    let bca = duel.index_of_order(&[1, 2, 0])?;
    let xstar = MixedStrategy::uniform_over(duel.perms().len(), &[acb, bca]);
    let opt = duel.index_of_order(&[0, 1, 2])?;
    Ok(AppendixExample { duel, xstar, opt })
}

/// Probabilities `(0.35, 0.33, 0.32)`, `f(i) = 3 - i`: the welfare-optimal
/// ranking `⟨1,2,3⟩` loses to `⟨2,3,1⟩` on pages 2 and 3.
#[derive(Debug, Clone)]
pub struct FootnoteExample<T> {
    pub duel: RankingDuel<T>,
    /// `⟨1,2,3⟩`
    pub planner: usize,
    /// `⟨2,3,1⟩`
    pub challenger: usize,
}

pub fn footnote_example<T: Scalar>() -> Result<FootnoteExample<T>, InstanceError> {
    let dec = |s: &str| T::from_decimal(s).expect("decimal literal");
    let spec = RankingSpec::linear(vec![dec("0.35"), dec("0.33"), dec("0.32")], T::one(), T::zero())?;
    let duel = ranking_duel(spec)?;
    let planner = duel.index_of_order(&[0, 1, 2])?;
    let challenger = duel.index_of_order(&[1, 2, 0])?;
    Ok(FootnoteExample { duel, planner, challenger })
}
