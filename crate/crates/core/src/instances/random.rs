//! Seeded random instance generators shared by the tests and the CLI.

use rand::Rng;

use super::{RankingSpec, Valuation};
use crate::duel::Mode;

/// Probabilities from i.i.d. uniform weights in `[0.05, 1)`, normalised.
pub fn probabilities<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// `f(i) = c(n-i) + d` with `c ∈ [0.5, 2)`, `d ∈ [0, 1)`.
pub fn linear_welfare<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RankingSpec<f64> {
    let p = probabilities(rng, n);
    let c = rng.gen_range(0.5..2.0);
    let d = rng.gen_range(0.0..1.0);
    RankingSpec::linear(p, c, d).expect("valid parameters")
}

/// Cost `c·i + d` with `c ∈ [0.5, 2)`, `d ∈ [0, 1)`.
pub fn linear_cost<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RankingSpec<f64> {
    let p = probabilities(rng, n);
    let c = rng.gen_range(0.5..2.0);
    let d = rng.gen_range(0.0..1.0);
    RankingSpec::new(p, Valuation::Linear { c, d }, Mode::Cost).expect("valid parameters")
}

/// Strictly decreasing position values.
pub fn decreasing_welfare<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RankingSpec<f64> {
    let p = probabilities(rng, n);
    let mut f: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    f.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for i in 1..n {
        if f[i] >= f[i - 1] {
            f[i] = f[i - 1] * 0.5;
        }
    }
    RankingSpec::new(p, Valuation::Explicit(f), Mode::Welfare).expect("valid parameters")
}

/// Arbitrary nonnegative position values, not necessarily monotone; ties
/// are likely because values are drawn from a small grid half the time.
pub fn arbitrary_welfare<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RankingSpec<f64> {
    let p = probabilities(rng, n);
    let grid = rng.gen_bool(0.5);
    let f: Vec<f64> =
        (0..n).map(|_| if grid { f64::from(rng.gen_range(0..4u8)) } else { rng.gen_range(0.0..1.0) }).collect();
    RankingSpec::new(p, Valuation::Explicit(f), Mode::Welfare).expect("valid parameters")
}

/// 0-1 position values with at least one 1.
pub fn zero_one_welfare<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RankingSpec<f64> {
    let p = probabilities(rng, n);
    let mut f: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.5) { 1.0 } else { 0.0 }).collect();
    let i = rng.gen_range(0..n);
    f[i] = 1.0;
    RankingSpec::new(p, Valuation::Explicit(f), Mode::Welfare).expect("valid parameters")
}
