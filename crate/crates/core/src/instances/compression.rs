use super::{enumerate_leaf_trees, InstanceError, LeafTree};
use crate::duel::{DuelInstance, Mode};
use crate::scalar::Scalar;

/// A compression duel with its full tree catalog.
#[derive(Debug, Clone)]
pub struct CompressionDuel<T> {
    pub game: DuelInstance<T>,
    pub trees: Vec<LeafTree>,
    /// Index of the caterpillar `(((1,2),3),4)` in the catalog.
    pub opt_index: usize,
    /// Index of the balanced tree `((1,2),(3,4))`.
    pub xstar_index: usize,
    pub epsilon: T,
}

/// Compression duel over `probs.len()` requests; `by_depth[d-1]` is the
/// value of a request whose leaf sits at depth `d` (root depth 1).
pub fn compression_duel<T: Scalar>(probs: Vec<T>, by_depth: &[T], mode: Mode) -> Result<(DuelInstance<T>, Vec<LeafTree>), InstanceError> {
    let n = probs.len();
    if by_depth.len() < n {
        return Err(InstanceError::ValuationLength { got: by_depth.len(), expected: n });
    }
    if by_depth.iter().any(|v| v.lt_zero()) {
        return Err(InstanceError::NegativeValuation);
    }
    let trees = enumerate_leaf_trees(n)?;
    let values = trees
        .iter()
        .map(|t| t.leaf_depths().into_iter().map(|d| by_depth[d - 1].clone()).collect())
        .collect();
    Ok((DuelInstance::new(probs, values, mode)?, trees))
}

/// Four equally likely requests, worth 1 at depth ≤ 2, `ε/16` at depth 3
/// and nothing deeper. The balanced tree is minimax yet earns only `ε/16`,
/// while the caterpillar earns `(16+ε)/64`.
pub fn compression_duel_epsilon<T: Scalar>(epsilon: T) -> Result<CompressionDuel<T>, InstanceError> {
    if !epsilon.gt_zero() || epsilon > T::one() {
        return Err(InstanceError::InvalidParameter("epsilon must lie in (0, 1]".into()));
    }
    let quarter = T::one() / T::from_int(4);
    let by_depth = vec![T::one(), T::one(), epsilon.clone() / T::from_int(16), T::zero()];
    let (game, trees) = compression_duel(vec![quarter; 4], &by_depth, Mode::Welfare)?;
    let find = |text: &str| {
        let target = LeafTree::parse(text).expect("literal tree");
        trees.iter().position(|t| *t == target).expect("catalog is complete")
    };
    let opt_index = find("(((1,2),3),4)");
    let xstar_index = find("((1,2),(3,4))");
    Ok(CompressionDuel { game, trees, opt_index, xstar_index, epsilon })
}
