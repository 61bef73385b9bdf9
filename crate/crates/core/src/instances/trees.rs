use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;

use super::InstanceError;
use crate::duel::{DuelInstance, Mode};
use crate::scalar::Scalar;

/// Largest catalog (number of pure strategies) the tree enumerators build.
pub const CATALOG_CAP: usize = 1_000_000;

pub fn catalan(n: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// A full binary tree whose leaves carry labels `0..n` (printed 1-based).
/// Stored as its preorder shape (`true` = internal node) plus the leaf
/// labels from left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeafTree {
    shape: Vec<bool>,
    leaves: Vec<usize>,
}

impl LeafTree {
    pub fn leaf(label: usize) -> Self {
        Self { shape: vec![false], leaves: vec![label] }
    }

    pub fn join(left: LeafTree, right: LeafTree) -> Self {
        let mut shape = Vec::with_capacity(1 + left.shape.len() + right.shape.len());
        shape.push(true);
        shape.extend(left.shape);
        shape.extend(right.shape);
        let mut leaves = left.leaves;
        leaves.extend(right.leaves);
        Self { shape, leaves }
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// Labels left to right.
    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }

    /// Depth of every label, root at depth 1.
    pub fn leaf_depths(&self) -> Vec<usize> {
        let mut depths = vec![0; self.leaves.len()];
        let mut stack = vec![1usize];
        let mut next_leaf = 0;
        for &internal in &self.shape {
            let d = stack.pop().expect("well-formed preorder");
            if internal {
                stack.push(d + 1);
                stack.push(d + 1);
            } else {
                depths[self.leaves[next_leaf]] = d;
                next_leaf += 1;
            }
        }
        depths
    }

    /// Parse `"((1,2),(3,4))"`; a bare `"1"` is a single leaf.
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let tree = parse_node(&chars, &mut pos).ok_or_else(|| InstanceError::TreeSyntax(text.into()))?;
        if pos != chars.len() {
            return Err(InstanceError::TreeSyntax(text.into()));
        }
        let mut sorted = tree.leaves.clone();
        sorted.sort_unstable();
        if sorted != (0..sorted.len()).collect::<Vec<_>>() {
            return Err(InstanceError::TreeSyntax(text.into()));
        }
        Ok(tree)
    }

    fn fmt_from(&self, f: &mut fmt::Formatter<'_>, node: &mut usize, leaf: &mut usize) -> fmt::Result {
        let internal = self.shape[*node];
        *node += 1;
        if internal {
            write!(f, "(")?;
            self.fmt_from(f, node, leaf)?;
            write!(f, ",")?;
            self.fmt_from(f, node, leaf)?;
            write!(f, ")")
        } else {
            *leaf += 1;
            write!(f, "{}", self.leaves[*leaf - 1] + 1)
        }
    }
}

fn parse_node(c: &[char], pos: &mut usize) -> Option<LeafTree> {
    match c.get(*pos)? {
        '(' => {
            *pos += 1;
            let left = parse_node(c, pos)?;
            if c.get(*pos)? != &',' {
                return None;
            }
            *pos += 1;
            let right = parse_node(c, pos)?;
            if c.get(*pos)? != &')' {
                return None;
            }
            *pos += 1;
            Some(LeafTree::join(left, right))
        }
        d if d.is_ascii_digit() => {
            let start = *pos;
            while c.get(*pos).is_some_and(|d| d.is_ascii_digit()) {
                *pos += 1;
            }
            let label: usize = c[start..*pos].iter().collect::<String>().parse().ok()?;
            (label >= 1).then(|| LeafTree::leaf(label - 1))
        }
        _ => None,
    }
}

impl fmt::Display for LeafTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_from(f, &mut 0, &mut 0)
    }
}

fn shapes(n: usize, memo: &mut HashMap<usize, Vec<Vec<bool>>>) -> Vec<Vec<bool>> {
    if let Some(s) = memo.get(&n) {
        return s.clone();
    }
    let out = if n == 1 {
        vec![vec![false]]
    } else {
        let mut out = Vec::new();
        for l in 1..n {
            for a in shapes(l, memo) {
                for b in shapes(n - l, memo) {
                    let mut s = Vec::with_capacity(1 + a.len() + b.len());
                    s.push(true);
                    s.extend(&a);
                    s.extend(&b);
                    out.push(s);
                }
            }
        }
        out
    };
    memo.insert(n, out.clone());
    out
}

/// Every full binary tree with `n` labelled leaves: `Catalan(n-1)·n!` trees,
/// grouped by shape, labels in lexicographic order within a shape.
pub fn enumerate_leaf_trees(n: usize) -> Result<Vec<LeafTree>, InstanceError> {
    if n == 0 {
        return Err(InstanceError::InvalidParameter("a tree needs at least one leaf".into()));
    }
    let count = catalan(n - 1).saturating_mul(factorial(n));
    if n > 20 || count > CATALOG_CAP as u128 {
        return Err(InstanceError::CapExceeded { what: "leaf-tree catalog", requested: count.min(usize::MAX as u128) as usize, cap: CATALOG_CAP });
    }
    let mut out = Vec::with_capacity(count as usize);
    for shape in shapes(n, &mut HashMap::new()) {
        for labels in (0..n).permutations(n) {
            out.push(LeafTree { shape: shape.clone(), leaves: labels });
        }
    }
    Ok(out)
}

/// A binary search tree over keys `0..n` (printed 1-based), stored as the
/// depth of every key. In-order traversal visits keys in order, so the
/// depth vector determines the tree: the root of a key range is its unique
/// shallowest key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinarySearchTree {
    depths: Vec<u16>,
}

impl BinarySearchTree {
    /// Build by choosing the root of every key range `lo..hi`.
    pub fn from_root_choice(n: usize, mut choose: impl FnMut(usize, usize) -> usize) -> Self {
        let mut depths = vec![0u16; n];
        let mut stack = vec![(0usize, n, 1u16)];
        while let Some((lo, hi, d)) = stack.pop() {
            if lo >= hi {
                continue;
            }
            let r = choose(lo, hi);
            assert!(lo <= r && r < hi, "root outside its range");
            depths[r] = d;
            stack.push((lo, r, d + 1));
            stack.push((r + 1, hi, d + 1));
        }
        Self { depths }
    }

    /// Midpoint roots everywhere; complete when `n = 2^h - 1`.
    pub fn balanced(n: usize) -> Self {
        Self::from_root_choice(n, |lo, hi| lo + (hi - lo) / 2)
    }

    pub fn from_depths(depths: Vec<u16>) -> Result<Self, InstanceError> {
        fn ok(d: &[u16], lo: usize, hi: usize, want: u16) -> bool {
            if lo >= hi {
                return true;
            }
            let roots: Vec<usize> = (lo..hi).filter(|&k| d[k] == want).collect();
            roots.len() == 1
                && (lo..hi).all(|k| d[k] >= want)
                && ok(d, lo, roots[0], want + 1)
                && ok(d, roots[0] + 1, hi, want + 1)
        }
        if ok(&depths, 0, depths.len(), 1) {
            Ok(Self { depths })
        } else {
            Err(InstanceError::InvalidParameter(format!("{depths:?} is not a BST depth profile")))
        }
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }

    /// Depth of `key`, root at depth 1.
    pub fn depth(&self, key: usize) -> usize {
        usize::from(self.depths[key])
    }

    pub fn depths(&self) -> &[u16] {
        &self.depths
    }

    pub fn root(&self) -> usize {
        self.depths.iter().position(|&d| d == 1).expect("nonempty tree has a root")
    }

    fn fmt_range(&self, f: &mut fmt::Formatter<'_>, lo: usize, hi: usize) -> fmt::Result {
        if lo >= hi {
            return write!(f, "-");
        }
        let r = (lo..hi).min_by_key(|&k| self.depths[k]).expect("nonempty range");
        write!(f, "{}", r + 1)?;
        if hi - lo > 1 {
            write!(f, "(")?;
            self.fmt_range(f, lo, r)?;
            write!(f, ",")?;
            self.fmt_range(f, r + 1, hi)?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for BinarySearchTree {
    /// `key(left,right)` with `-` for an empty side, e.g. `2(1,3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_range(f, 0, self.depths.len())
    }
}

/// All `Catalan(n)` binary search trees on `n` keys.
pub fn enumerate_bsts(n: usize) -> Result<Vec<BinarySearchTree>, InstanceError> {
    let count = catalan(n);
    if n > 30 || count > CATALOG_CAP as u128 {
        return Err(InstanceError::CapExceeded { what: "BST catalog", requested: count.min(usize::MAX as u128) as usize, cap: CATALOG_CAP });
    }
    // all[m] = depth vectors of every BST on m keys, root at depth 1
    let mut all: Vec<Vec<Vec<u16>>> = vec![vec![vec![]]];
    for m in 1..=n {
        let mut out = Vec::with_capacity(catalan(m) as usize);
        for r in 0..m {
            for left in &all[r] {
                for right in &all[m - r - 1] {
                    let mut d = Vec::with_capacity(m);
                    d.extend(left.iter().map(|x| x + 1));
                    d.push(1);
                    d.extend(right.iter().map(|x| x + 1));
                    out.push(d);
                }
            }
        }
        all.push(out);
    }
    Ok(all.swap_remove(n).into_iter().map(|depths| BinarySearchTree { depths }).collect())
}

/// A binary search duel small enough to enumerate.
#[derive(Debug, Clone)]
pub struct BstDuel<T> {
    pub game: DuelInstance<T>,
    pub trees: Vec<BinarySearchTree>,
}

/// `by_depth[d-1]` is the value (or cost) of a key found at depth `d`.
pub fn bst_duel<T: Scalar>(probs: Vec<T>, by_depth: &[T], mode: Mode) -> Result<BstDuel<T>, InstanceError> {
    let n = probs.len();
    if by_depth.len() < n {
        return Err(InstanceError::ValuationLength { got: by_depth.len(), expected: n });
    }
    if by_depth.iter().any(|v| v.lt_zero()) {
        return Err(InstanceError::NegativeValuation);
    }
    let trees = enumerate_bsts(n)?;
    let values = trees.iter().map(|t| (0..n).map(|k| by_depth[t.depth(k) - 1].clone()).collect()).collect();
    Ok(BstDuel { game: DuelInstance::new(probs, values, mode)?, trees })
}
