//! Concrete dueling games: ranking duels, the compression and binary-search
//! constructions, the small worked examples, and random generators.

mod appendix;
mod bst;
mod compression;
pub mod random;
mod ranking;
mod trees;

pub use appendix::{appendix_example, footnote_example, AppendixExample, FootnoteExample};
pub use bst::{sample_uniform_bst, BinarySearchDuel, CaseConditions, BST_EPSILON};
pub use compression::{compression_duel, compression_duel_epsilon, CompressionDuel};
pub use ranking::{ranking_duel, ranking_duel_capped, Permutation, RankingDuel, RankingSpec, Valuation, RANKING_CAP};
pub use trees::{
    bst_duel, catalan, enumerate_bsts, enumerate_leaf_trees, BinarySearchTree, BstDuel, LeafTree, CATALOG_CAP,
};

use crate::duel::ModelError;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("{what} of size {requested} exceeds the enumeration cap of {cap}")]
    CapExceeded { what: &'static str, requested: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("valuation has {got} entries, need {expected}")]
    ValuationLength { got: usize, expected: usize },
    #[error("valuation entries must be nonnegative")]
    NegativeValuation,
    #[error("cannot parse tree {0:?}")]
    TreeSyntax(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
