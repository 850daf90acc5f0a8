use crate::featurize::FeatureVector;

use super::RecommendError;

/// One second-level node: a test and the two leaf expectations under it.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub assertion: usize,
    pub if_true: f64,
    pub if_false: f64,
}

/// Complete height-2 regression tree for one method. Leaves, in local index
/// order: (root T, child T) = 0, (T, F) = 1, (F, T) = 2, (F, F) = 3.
#[derive(Clone, Debug, PartialEq)]
pub struct MethodTree {
    pub method: String,
    pub root: usize,
    pub on_true: Branch,
    pub on_false: Branch,
}

impl MethodTree {
    pub const LEAVES: usize = 4;

    pub fn leaves(&self) -> [f64; 4] {
        [self.on_true.if_true, self.on_true.if_false, self.on_false.if_true, self.on_false.if_false]
    }

    pub fn max_assertion(&self) -> usize {
        self.root.max(self.on_true.assertion).max(self.on_false.assertion)
    }

    /// Leaf index reached by `v`, and its expectation.
    pub fn eval(&self, v: &FeatureVector) -> Result<(usize, f64), RecommendError> {
        let bit = |i: usize| {
            v.get(i).ok_or(RecommendError::ConfigMismatch { needed: self.max_assertion() + 1, got: v.len() })
        };
        if self.max_assertion() >= v.len() {
            return Err(RecommendError::ConfigMismatch { needed: self.max_assertion() + 1, got: v.len() });
        }
        let (branch, base) = if bit(self.root)? { (&self.on_true, 0) } else { (&self.on_false, 2) };
        Ok(if bit(branch.assertion)? { (base, branch.if_true) } else { (base + 1, branch.if_false) })
    }
}

pub fn eval_tree(tree: &MethodTree, v: &FeatureVector) -> Result<(usize, f64), RecommendError> {
    tree.eval(v)
}

/// Method trees sorted by method name. Global leaf `4·t + ℓ` is leaf ℓ of the
/// tree at position t.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeBank {
    trees: Vec<MethodTree>,
}

impl TreeBank {
    pub fn new(mut trees: Vec<MethodTree>) -> Result<Self, RecommendError> {
        trees.sort_by(|a, b| a.method.cmp(&b.method));
        if let Some(w) = trees.windows(2).find(|w| w[0].method == w[1].method) {
            return Err(RecommendError::DuplicateMethod(w[0].method.clone()));
        }
        Ok(TreeBank { trees })
    }

    pub fn trees(&self) -> &[MethodTree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn leaf_count(&self) -> usize {
        MethodTree::LEAVES * self.trees.len()
    }

    /// Number of features the bank needs.
    pub fn min_features(&self) -> usize {
        self.trees.iter().map(|t| t.max_assertion() + 1).max().unwrap_or(0)
    }

    /// Leaf expectations of all trees, concatenated in bank order.
    pub fn leaf_expectations(&self) -> Vec<f64> {
        self.trees.iter().flat_map(|t| t.leaves()).collect()
    }
}
