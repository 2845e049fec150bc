use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A node of a binary decision tree. Samples with `x[feature] <= threshold` go left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode<T> {
    Split {
        feature: usize,
        threshold: T,
        left: usize,
        right: usize,
    },
    Leaf {
        value: T,
    },
}

/// Nodes stored in preorder; the root is node 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TreeNode<T>>", into = "Vec<TreeNode<T>>")]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct Tree<T> {
    nodes: Vec<TreeNode<T>>,
}

impl<T: Real> Tree<T> {
    pub fn leaf(value: T) -> Self {
        Self {
            nodes: vec![TreeNode::Leaf { value }],
        }
    }

    /// Validates a preorder node list: children exist, follow their parent,
    /// and every node except the root has exactly one parent.
    pub fn from_preorder(nodes: Vec<TreeNode<T>>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Format("tree has no nodes".into()));
        }
        let mut parents = vec![0usize; nodes.len()];
        for (i, node) in nodes.iter().enumerate() {
            if let TreeNode::Split { left, right, .. } = *node {
                for child in [left, right] {
                    if child <= i || child >= nodes.len() {
                        return Err(Error::Format(format!("node {i} has invalid child {child}")));
                    }
                    parents[child] += 1;
                }
                if left != i + 1 || right <= left {
                    return Err(Error::Format(format!("node {i} children out of preorder")));
                }
            }
        }
        if parents[1..].iter().any(|&p| p != 1) {
            return Err(Error::Format("tree nodes do not form a single tree".into()));
        }
        Ok(Self { nodes })
    }

    /// Re-indexes an arena (root at `root`) into preorder.
    pub(crate) fn from_arena(arena: &[TreeNode<T>], root: usize) -> Self {
        let mut nodes = Vec::with_capacity(arena.len());
        // (arena index, slot in parent to patch)
        let mut stack: Vec<(usize, Option<(usize, bool)>)> = vec![(root, None)];
        while let Some((src, parent)) = stack.pop() {
            let at = nodes.len();
            if let Some((p, is_left)) = parent {
                if let TreeNode::Split { left, right, .. } = &mut nodes[p] {
                    if is_left {
                        *left = at;
                    } else {
                        *right = at;
                    }
                }
            }
            match arena[src] {
                TreeNode::Leaf { value } => nodes.push(TreeNode::Leaf { value }),
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    nodes.push(TreeNode::Split {
                        feature,
                        threshold,
                        left: usize::MAX,
                        right: usize::MAX,
                    });
                    stack.push((right, Some((at, false))));
                    stack.push((left, Some((at, true))));
                }
            }
        }
        Self { nodes }
    }

    pub fn nodes(&self) -> &[TreeNode<T>] {
        &self.nodes
    }

    /// Index of the leaf reached by `x`.
    #[inline]
    pub fn leaf_index(&self, x: &[T]) -> usize {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                TreeNode::Leaf { .. } => return i,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    #[inline]
    pub fn predict_row(&self, x: &[T]) -> T {
        match self.nodes[self.leaf_index(x)] {
            TreeNode::Leaf { value } => value,
            TreeNode::Split { .. } => unreachable!(),
        }
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, TreeNode::Leaf { .. })).count()
    }

    pub fn leaf_values(&self) -> impl Iterator<Item = T> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            TreeNode::Leaf { value } => Some(*value),
            TreeNode::Split { .. } => None,
        })
    }

    pub fn max_feature(&self) -> Option<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                TreeNode::Split { feature, .. } => Some(*feature),
                TreeNode::Leaf { .. } => None,
            })
            .max()
    }

    pub fn depth(&self) -> usize {
        fn go<T>(nodes: &[TreeNode<T>], i: usize) -> usize {
            match nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + go(nodes, left).max(go(nodes, right)),
            }
        }
        go(&self.nodes, 0)
    }
}

impl<T: Real> TryFrom<Vec<TreeNode<T>>> for Tree<T> {
    type Error = Error;

    fn try_from(nodes: Vec<TreeNode<T>>) -> Result<Self> {
        Self::from_preorder(nodes)
    }
}

impl<T: Real> From<Tree<T>> for Vec<TreeNode<T>> {
    fn from(tree: Tree<T>) -> Self {
        tree.nodes
    }
}
