//! Dueling games: minimax strategies, the price of competition, and the
//! factor-revealing LP that bounds it for linear ranking duels.
//!
//! Everything numeric is generic over [`scalar::Scalar`]; LP solving and
//! minimax computations need floats ([`scalar::FloatScalar`]), while
//! certificates and instance data also work in exact rationals.

pub mod duel;
pub mod factor;
pub mod instances;
pub mod lp;
pub mod minimax;
pub mod scalar;
pub mod structure;
pub mod zero_one;

pub type Rational = num_rational::BigRational;

pub type Duel = duel::DuelInstance<f64>;
pub type ExactDuel = duel::DuelInstance<Rational>;
pub type Strategy = duel::MixedStrategy<f64>;
pub type ExactStrategy = duel::MixedStrategy<Rational>;
pub type Lp = lp::LinearProgram<f64>;
pub type ExactLp = lp::LinearProgram<Rational>;
pub type Duel32 = duel::DuelInstance<f32>;
