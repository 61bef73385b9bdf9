use rand::Rng;

use super::{BinarySearchTree, InstanceError};
use crate::scalar::Scalar;

/// The "very small" value at depths `2..=k+2`.
pub const BST_EPSILON: f64 = 1e-9;

/// Binary search duel whose welfare ratio at the designated minimax tree
/// drops below `β`. Trees are never enumerated (there are `Catalan(n)`, with
/// `n ≥ 24`); payoffs are evaluated per pair of trees.
#[derive(Debug, Clone)]
pub struct BinarySearchDuel<T> {
    pub beta: T,
    pub k: usize,
    pub n: usize,
    pub epsilon: T,
    /// `1/5` for key 0, `4/(5(n-1))` for every other key.
    pub probs: Vec<T>,
    pub xstar: BinarySearchTree,
}

/// Numbers the minimax argument for the designated tree rests on.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CaseConditions {
    /// `p_1 = 1/5 < 2^k·4/(5(n-1))`.
    pub first_key_outweighed: bool,
    /// Keys necessarily deeper than `k+2` in any tree rooted at key 1.
    pub forced_deep_keys: usize,
    pub root: usize,
    pub first_key_depth: usize,
    pub max_depth: usize,
    /// Root `2^k+1`, key 1 at depth 2, the three subtrees complete of height `k`.
    pub depth_profile_ok: bool,
}

impl<T: Scalar> BinarySearchDuel<T> {
    pub fn new(beta: T) -> Result<Self, InstanceError> {
        Self::with_epsilon(beta, T::cast_f64(BST_EPSILON))
    }

    pub fn with_epsilon(beta: T, epsilon: T) -> Result<Self, InstanceError> {
        if !beta.gt_zero() || beta >= T::one() {
            return Err(InstanceError::InvalidParameter("beta must lie in (0, 1)".into()));
        }
        if !epsilon.gt_zero() {
            return Err(InstanceError::InvalidParameter("epsilon must be positive".into()));
        }
        // ⌈lg 1/β⌉ as the least j with 2^j·β ≥ 1, exact for rationals.
        let mut j = 0usize;
        let mut scaled = beta.clone();
        while scaled < T::one() {
            scaled = scaled * T::from_int(2);
            j += 1;
            if j > 40 {
                return Err(InstanceError::InvalidParameter("beta too small".into()));
            }
        }
        let k = j + 2;
        let block = 1usize << k;
        let n = 3 * block;
        let rest = T::from_int(4) / (T::from_int(5) * T::from_int(n as i64 - 1));
        let mut probs = vec![rest; n];
        probs[0] = T::one() / T::from_int(5);

        // 0-based keys: root 2^k, key 0 its left child carrying keys 1..2^k,
        // right child 2^{k+1} over 2^k+1..2^{k+1} and 2^{k+1}+1..3·2^k.
        let xstar = BinarySearchTree::from_root_choice(n, |lo, hi| match (lo, hi) {
            (0, h) if h == n => block,
            (0, h) if h == block => 0,
            (l, h) if l == block + 1 && h == n => 2 * block,
            _ => lo + (hi - lo) / 2,
        });
        Ok(Self { beta, k, n, epsilon, probs, xstar })
    }

    pub fn value_at_depth(&self, d: usize) -> T {
        if d == 1 {
            T::one()
        } else if d <= self.k + 2 {
            self.epsilon.clone()
        } else {
            T::zero()
        }
    }

    pub fn welfare(&self, tree: &BinarySearchTree) -> T {
        (0..self.n).fold(T::zero(), |acc, w| acc + self.probs[w].clone() * self.value_at_depth(tree.depth(w)))
    }

    /// `u(a, b)`: requests where `a` is worth more count `+p`, less `-p`.
    pub fn payoff(&self, a: &BinarySearchTree, b: &BinarySearchTree) -> T {
        let mut acc = T::zero();
        for w in 0..self.n {
            let (va, vb) = (self.value_at_depth(a.depth(w)), self.value_at_depth(b.depth(w)));
            if va > vb {
                acc = acc + self.probs[w].clone();
            } else if va < vb {
                acc = acc - self.probs[w].clone();
            }
        }
        acc
    }

    /// `4/(5(n-1)) + (5(n-1)-4)/(5(n-1))·ε`.
    pub fn xstar_welfare_formula(&self) -> T {
        let m = T::from_int(5) * T::from_int(self.n as i64 - 1);
        T::from_int(4) / m.clone() + (m.clone() - T::from_int(4)) / m * self.epsilon.clone()
    }

    /// Rooting the tree at key 1 already earns `1/5`.
    pub fn opt_lower_bound(&self) -> T {
        T::one() / T::from_int(5)
    }

    /// `SW(x*) / (1/5)`, an upper bound on the price of competition.
    pub fn poc_upper(&self) -> T {
        self.welfare(&self.xstar) / self.opt_lower_bound()
    }

    /// The reported bound `5/n`.
    pub fn poc_bound(&self) -> T {
        T::from_int(5) / T::from_int(self.n as i64)
    }

    pub fn case_conditions(&self) -> CaseConditions {
        let block = 1usize << self.k;
        let first_key_outweighed = self.probs[0] < T::from_int(block as i64) * self.probs[1].clone();
        // Levels 2..=k+2 of the right subtree hold at most 2^{k+1}-1 keys.
        let forced_deep_keys = (self.n - 1).saturating_sub((1usize << (self.k + 1)) - 1);
        let t = &self.xstar;
        let max_depth = (0..self.n).map(|w| t.depth(w)).max().unwrap_or(0);
        let complete = |lo: usize, hi: usize| {
            // complete of height k hanging at depth 3: level d holds 2^{d-3} keys
            (3..self.k + 3).all(|d| (lo..hi).filter(|&w| t.depth(w) == d).count() == 1 << (d - 3))
                && (lo..hi).all(|w| (3..self.k + 3).contains(&t.depth(w)))
        };
        let depth_profile_ok = t.root() == block
            && t.depth(0) == 2
            && t.depth(2 * block) == 2
            && complete(1, block)
            && complete(block + 1, 2 * block)
            && complete(2 * block + 1, 3 * block);
        CaseConditions {
            first_key_outweighed,
            forced_deep_keys,
            root: t.root() + 1,
            first_key_depth: t.depth(0),
            max_depth,
            depth_profile_ok,
        }
    }
}

/// Uniformly random BST on `n` keys: the root of a range of `m` keys is `r`
/// with probability `C(r)·C(m-1-r)/C(m)`.
pub fn sample_uniform_bst<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BinarySearchTree {
    let mut cat = vec![1.0f64; n + 1];
    for m in 1..=n {
        cat[m] = (0..m).map(|r| cat[r] * cat[m - 1 - r]).sum();
    }
    BinarySearchTree::from_root_choice(n, |lo, hi| {
        let m = hi - lo;
        let mut u = rng.gen::<f64>() * cat[m];
        for r in 0..m {
            let w = cat[r] * cat[m - 1 - r];
            if u < w {
                return lo + r;
            }
            u -= w;
        }
        hi - 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_follow_beta() {
        let g = BinarySearchDuel::new(0.25).unwrap();
        assert_eq!((g.k, g.n), (4, 48));
        let g = BinarySearchDuel::new(0.6).unwrap();
        assert_eq!((g.k, g.n), (3, 24));
        let g = BinarySearchDuel::new(0.5).unwrap();
        assert_eq!((g.k, g.n), (3, 24));
        assert!(BinarySearchDuel::new(1.0).is_err());
    }

    #[test]
    fn designated_tree_shape() {
        for beta in [0.5, 0.25, 0.1] {
            let g = BinarySearchDuel::<f64>::new(beta).unwrap();
            let c = g.case_conditions();
            assert!(c.depth_profile_ok, "{c:?}");
            assert!(c.first_key_outweighed);
            assert!(c.forced_deep_keys >= 1 << g.k);
            assert_eq!(c.first_key_depth, 2);
            assert_eq!(c.max_depth, g.k + 2);
            assert!((g.welfare(&g.xstar) - g.xstar_welfare_formula()).abs() < 1e-15);
        }
    }
}
