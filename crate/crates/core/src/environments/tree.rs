use serde::{Deserialize, Serialize};

use crate::class::{FunctionClass, Labels};
use crate::error::{param, Error, Result};

/// Upper bound on `functions × arms` for a constructed tree class.
pub const MAX_TREE_CELLS: usize = 1 << 26;

pub const LEFT_EDGE: f64 = 1.0 / 3.0;
pub const RIGHT_EDGE: f64 = 2.0 / 3.0;

/// Layout of a full binary tree class.
///
/// Internal nodes are numbered in heap order (root 0, children `2k+1`,
/// `2k+2`) and occupy arms `0..2^d - 1`. Leaf `l` owns the bucket of arms
/// `2^d - 1 + l*N .. 2^d - 1 + (l+1)*N`. Function `l*N + j` has its single
/// value-1 arm at position `j` of bucket `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeMeta {
    pub depth: usize,
    pub bucket_size: usize,
}

impl TreeMeta {
    pub fn leaf_count(&self) -> usize {
        1 << self.depth
    }

    pub fn internal_count(&self) -> usize {
        self.leaf_count() - 1
    }

    pub fn num_arms(&self) -> usize {
        self.internal_count() + self.leaf_count() * self.bucket_size
    }

    pub fn num_functions(&self) -> usize {
        self.leaf_count() * self.bucket_size
    }

    /// Arm of the internal node at heap index `node`.
    pub fn internal_arm(&self, node: usize) -> usize {
        debug_assert!(node < self.internal_count());
        node
    }

    /// Arm of the internal node reached by following `path` from the root
    /// (`false` = left, `true` = right).
    pub fn internal_arm_of(&self, path: &[bool]) -> usize {
        path.iter()
            .fold(0, |node, &right| 2 * node + 1 + usize::from(right))
    }

    pub fn bucket_arms(&self, leaf: usize) -> std::ops::Range<usize> {
        let start = self.internal_count() + leaf * self.bucket_size;
        start..start + self.bucket_size
    }

    pub fn leaf_of_function(&self, f: usize) -> usize {
        f / self.bucket_size
    }

    pub fn optimal_arm_of_function(&self, f: usize) -> usize {
        self.internal_count() + f
    }

    /// Root-to-leaf directions, most significant bit first.
    pub fn path_to_leaf(&self, leaf: usize) -> Vec<bool> {
        (0..self.depth)
            .rev()
            .map(|bit| (leaf >> bit) & 1 == 1)
            .collect()
    }

    /// Internal nodes on the branch to `leaf`, paired with the direction taken.
    pub fn branch(&self, leaf: usize) -> Vec<(usize, bool)> {
        let mut node = 0;
        self.path_to_leaf(leaf)
            .into_iter()
            .map(|right| {
                let here = node;
                node = 2 * node + 1 + usize::from(right);
                (here, right)
            })
            .collect()
    }

    /// Mean row of function `f`.
    pub fn row(&self, f: usize) -> Vec<f64> {
        let mut row = vec![0.0; self.num_arms()];
        for (node, right) in self.branch(self.leaf_of_function(f)) {
            row[self.internal_arm(node)] = if right { RIGHT_EDGE } else { LEFT_EDGE };
        }
        row[self.optimal_arm_of_function(f)] = 1.0;
        row
    }

    /// Recovers the layout from the shape of `class`, if it is a tree class.
    pub fn infer(class: &FunctionClass) -> Option<Self> {
        let (arms, functions) = (class.num_arms(), class.num_functions());
        let leaves = (arms + 1).checked_sub(functions)?;
        if leaves < 2 || !leaves.is_power_of_two() || functions % leaves != 0 {
            return None;
        }
        let meta = Self {
            depth: leaves.trailing_zeros() as usize,
            bucket_size: functions / leaves,
        };
        (meta.bucket_size > 0 && meta.matches(class)).then_some(meta)
    }

    /// Whether `class` is exactly the tree class with this layout.
    pub fn matches(&self, class: &FunctionClass) -> bool {
        class.num_arms() == self.num_arms()
            && class.num_functions() == self.num_functions()
            && class
                .means()
                .iter()
                .enumerate()
                .all(|(f, row)| *row == self.row(f))
    }
}

/// Builds the depth-`d` tree class with buckets of `N` arms.
pub fn make_tree_class(depth: usize, bucket_size: usize) -> Result<(FunctionClass, TreeMeta)> {
    if depth == 0 {
        return Err(param("depth", "must be at least 1"));
    }
    if bucket_size == 0 {
        return Err(param("bucketSize", "must be at least 1"));
    }
    let leaves = 1usize
        .checked_shl(depth as u32)
        .filter(|_| depth < usize::BITS as usize - 1)
        .ok_or_else(|| Error::Capacity(format!("depth {depth} is too large")))?;
    leaves
        .checked_mul(bucket_size)
        .zip(leaves.checked_mul(bucket_size + 1))
        .and_then(|(f, a)| f.checked_mul(a))
        .filter(|&c| c <= MAX_TREE_CELLS)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "tree with depth {depth} and bucket size {bucket_size} exceeds {MAX_TREE_CELLS} cells"
            ))
        })?;

    let meta = TreeMeta { depth, bucket_size };
    let means = (0..meta.num_functions()).map(|f| meta.row(f)).collect();
    let labels = Labels {
        class: Some(format!("tree-d{depth}-n{bucket_size}")),
        functions: None,
        arms: None,
    };
    let class = FunctionClass::new(means)?.with_labels(labels)?;
    Ok((class, meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_two_layout() {
        let (class, meta) = make_tree_class(2, 1).unwrap();
        assert_eq!(class.num_arms(), 7);
        assert_eq!(class.num_functions(), 4);
        // leaf 2 = right then left
        let row = class.row(2).unwrap();
        assert_eq!(row[0], RIGHT_EDGE);
        assert_eq!(row[2], LEFT_EDGE);
        assert_eq!(row[5], 1.0);
        assert_eq!(row.iter().filter(|v| **v != 0.0).count(), 3);
        assert_eq!(meta.optimal_arm_of_function(2), 5);
        assert_eq!(meta.internal_arm_of(&[true]), 2);
        assert!(meta.matches(&class));
        assert_eq!(TreeMeta::infer(&class), Some(meta));
        assert_eq!(TreeMeta::infer(&crate::environments::make_singletons(3).unwrap()), None);
    }

    #[test]
    fn depth_one_buckets_of_two() {
        let (class, meta) = make_tree_class(1, 2).unwrap();
        assert_eq!(meta.internal_count(), 1);
        assert_eq!(class.num_arms(), 5);
        assert_eq!(class.num_functions(), 4);
        for f in 0..4 {
            let root = class.row(f).unwrap()[0];
            assert!(root == LEFT_EDGE || root == RIGHT_EDGE);
        }
        assert_eq!(meta.bucket_arms(1), 3..5);
    }

    #[test]
    fn structure_invariant_holds() {
        for d in 1..=5 {
            for n in 1..=3 {
                let (class, meta) = make_tree_class(d, n).unwrap();
                assert_eq!(class.num_arms(), (1 << d) - 1 + (1 << d) * n);
                for row in class.means() {
                    assert_eq!(row.iter().filter(|v| **v == 1.0).count(), 1);
                    let internal: Vec<f64> = row[..meta.internal_count()]
                        .iter()
                        .copied()
                        .filter(|v| *v != 0.0)
                        .collect();
                    assert_eq!(internal.len(), d);
                    assert!(internal.iter().all(|v| *v == LEFT_EDGE || *v == RIGHT_EDGE));
                    assert_eq!(row.iter().filter(|v| **v != 0.0).count(), d + 1);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(make_tree_class(0, 1).is_err());
        assert!(make_tree_class(1, 0).is_err());
        assert!(matches!(make_tree_class(20, 4), Err(Error::Capacity(_))));
        assert!(matches!(make_tree_class(70, 1), Err(Error::Capacity(_))));
    }
}
