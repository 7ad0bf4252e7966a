//! Cutting agglomerative-clustering dendrograms into communities.
//!
//! A linkage table is turned into a binary rooted tree whose leaves are the
//! original items, the optimal average cut is computed on it, and each cut
//! edge becomes one community: the items below it.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cut::{optimal_average_cut, CutResult, Objective};
use crate::oracle::is_valid_cut;
use crate::rational::Rational;
use crate::tree::{EdgeId, NodeId, RootedTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DendroError {
    #[error("a linkage needs at least two items, got {0}")]
    TooFewItems(usize),
    #[error("expected {expected} merges for {items} items, got {actual}")]
    MergeCount { items: usize, expected: usize, actual: usize },
    #[error("merge {merge}: cluster index {index} is not available")]
    InvalidIndex { merge: usize, index: usize },
    #[error("merge {merge}: cluster index {index} is merged twice")]
    ReusedIndex { merge: usize, index: usize },
    #[error("merge {merge}: size {given} does not match children ({expected})")]
    SizeMismatch { merge: usize, given: usize, expected: usize },
    #[error("merge {merge}: height {height} is below the height {child_height} of cluster {child}")]
    NegativeGap { merge: usize, child: usize, height: Rational, child_height: Rational },
    #[error("merge {merge}: negative height {height}")]
    NegativeHeight { merge: usize, height: Rational },
    #[error("height weights need a positive final merge height")]
    ZeroHeight,
    #[error("edge set is not a root-separating cut of the dendrogram")]
    InvalidCut,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: Rational,
    pub size: usize,
}

/// Merge sequence of `n_items − 1` merges; index `n_items + k` names the
/// cluster formed by merge `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkageTable {
    n_items: usize,
    merges: Vec<Merge>,
}

impl LinkageTable {
    /// Checks the structural invariants. Height ordering is checked when the
    /// tree is built, where it turns into edge weights.
    pub fn new(n_items: usize, merges: Vec<Merge>) -> Result<Self, DendroError> {
        if n_items < 2 {
            return Err(DendroError::TooFewItems(n_items));
        }
        if merges.len() != n_items - 1 {
            return Err(DendroError::MergeCount {
                items: n_items,
                expected: n_items - 1,
                actual: merges.len(),
            });
        }
        let mut used = vec![false; 2 * n_items - 1];
        let mut size = vec![1usize; 2 * n_items - 1];
        for (k, m) in merges.iter().enumerate() {
            if m.height.is_negative() {
                return Err(DendroError::NegativeHeight { merge: k, height: m.height.clone() });
            }
            for index in [m.left, m.right] {
                if index >= n_items + k {
                    return Err(DendroError::InvalidIndex { merge: k, index });
                }
                if std::mem::replace(&mut used[index], true) {
                    return Err(DendroError::ReusedIndex { merge: k, index });
                }
            }
            let expected = size[m.left] + size[m.right];
            if m.size != expected {
                return Err(DendroError::SizeMismatch { merge: k, given: m.size, expected });
            }
            size[n_items + k] = expected;
        }
        Ok(LinkageTable { n_items, merges })
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    fn height_of(&self, cluster: usize) -> Rational {
        if cluster < self.n_items {
            Rational::zero()
        } else {
            self.merges[cluster - self.n_items].height.clone()
        }
    }
}

/// How merge heights become dendrogram edge weights.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Default)]
pub enum WeightScheme {
    /// Parent merge height minus child merge height (items sit at 0).
    #[default]
    Gap,
    /// Parent merge height.
    Height,
}

impl WeightScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightScheme::Gap => "gap",
            WeightScheme::Height => "height",
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightScheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gap" => Ok(WeightScheme::Gap),
            "height" => Ok(WeightScheme::Height),
            other => Err(format!("unknown weight scheme `{other}` (expected gap or height)")),
        }
    }
}

/// Binary tree of the linkage. Node ids equal cluster indices: items are
/// `0..n`, merge `k` is node `n + k` labelled `c{n+k}`, and the last merge
/// is the root.
pub fn linkage_to_tree(table: &LinkageTable, scheme: WeightScheme) -> Result<RootedTree, DendroError> {
    let n = table.n_items;
    let total = 2 * n - 1;
    if scheme == WeightScheme::Height && !table.merges[n - 2].height.is_positive() {
        return Err(DendroError::ZeroHeight);
    }
    let mut parent = vec![None; total];
    let mut weight = vec![Rational::zero(); total];
    for (k, m) in table.merges.iter().enumerate() {
        let node = n + k;
        for child in [m.left, m.right] {
            let child_height = table.height_of(child);
            if m.height < child_height {
                return Err(DendroError::NegativeGap {
                    merge: k,
                    child,
                    height: m.height.clone(),
                    child_height,
                });
            }
            parent[child] = Some(NodeId(node));
            weight[child] = match scheme {
                WeightScheme::Gap => &m.height - &child_height,
                WeightScheme::Height => m.height.clone(),
            };
        }
    }
    let labels = (0..total)
        .map(|i| if i < n { i.to_string() } else { format!("c{i}") })
        .collect();
    Ok(RootedTree::from_parents(labels, parent, weight)?)
}

/// Disjoint communities of leaves covering every leaf. Each community is
/// ascending and communities are ordered by their smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub communities: Vec<Vec<NodeId>>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    pub fn labels<'t>(&self, tree: &'t RootedTree) -> Vec<Vec<&'t str>> {
        self.communities
            .iter()
            .map(|c| c.iter().map(|&v| tree.label(v)).collect())
            .collect()
    }

    /// Every community of `self` lies inside a community of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        let mut owner = std::collections::HashMap::new();
        for (i, c) in coarser.communities.iter().enumerate() {
            for &v in c {
                owner.insert(v, i);
            }
        }
        self.communities.iter().all(|c| {
            let first = owner.get(&c[0]);
            first.is_some() && c.iter().all(|v| owner.get(v) == first)
        })
    }
}

/// One community per cut edge: the leaves below it.
pub fn communities_from_cut(tree: &RootedTree, cut: &[EdgeId]) -> Result<Partition, DendroError> {
    if !is_valid_cut(tree, cut) {
        return Err(DendroError::InvalidCut);
    }
    let mut communities: Vec<Vec<NodeId>> = cut.iter().map(|&e| tree.subtree_leaves(e)).collect();
    communities.sort_unstable_by_key(|c| c[0]);
    Ok(Partition { communities })
}

#[derive(Clone, Debug)]
pub struct Clustering {
    pub tree: RootedTree,
    pub partition: Partition,
    pub cut: CutResult,
}

pub fn cluster(table: &LinkageTable, objective: Objective, scheme: WeightScheme) -> Result<Clustering, DendroError> {
    let tree = linkage_to_tree(table, scheme)?;
    let cut = optimal_average_cut(&tree, objective);
    let partition = communities_from_cut(&tree, &cut.cut)?;
    Ok(Clustering { tree, partition, cut })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn merge(left: usize, right: usize, height: i64, size: usize) -> Merge {
        Merge { left, right, height: Rational::from_integer(height), size }
    }

    fn three_items() -> LinkageTable {
        LinkageTable::new(3, vec![merge(0, 1, 1, 2), merge(3, 2, 5, 3)]).unwrap()
    }

    fn ids(p: &Partition) -> Vec<Vec<usize>> {
        p.communities.iter().map(|c| c.iter().map(|v| v.index()).collect()).collect()
    }

    #[test]
    fn two_items() {
        let table = LinkageTable::new(2, vec![merge(0, 1, 4, 2)]).unwrap();
        let t = linkage_to_tree(&table, WeightScheme::Gap).unwrap();
        assert_eq!(t.root(), NodeId(2));
        for e in t.out_edges(t.root()) {
            assert_eq!(t.weight(e), &Rational::from_integer(4));
        }
        let c = cluster(&table, Objective::Maximize, WeightScheme::Gap).unwrap();
        assert_eq!(ids(&c.partition), vec![vec![0], vec![1]]);
    }

    #[test]
    fn gap_weights() {
        let t = linkage_to_tree(&three_items(), WeightScheme::Gap).unwrap();
        let w = |v: usize| t.weight(EdgeId::from_head(NodeId(v))).clone();
        assert_eq!(w(0), Rational::from_integer(1));
        assert_eq!(w(1), Rational::from_integer(1));
        assert_eq!(w(3), Rational::from_integer(4));
        assert_eq!(w(2), Rational::from_integer(5));
        let h = linkage_to_tree(&three_items(), WeightScheme::Height).unwrap();
        assert_eq!(h.weight(EdgeId::from_head(NodeId(3))), &Rational::from_integer(5));
        assert_eq!(h.weight(EdgeId::from_head(NodeId(0))), &Rational::from_integer(1));
    }

    #[test]
    fn three_item_partitions() {
        let table = three_items();
        let t = linkage_to_tree(&table, WeightScheme::Gap).unwrap();
        let top = communities_from_cut(&t, &t.out_edges(t.root())).unwrap();
        assert_eq!(ids(&top), vec![vec![0, 1], vec![2]]);
        let leaves: Vec<EdgeId> = t.leaves().into_iter().map(EdgeId::from_head).collect();
        assert_eq!(ids(&communities_from_cut(&t, &leaves).unwrap()), vec![vec![0], vec![1], vec![2]]);
        let c = cluster(&table, Objective::Maximize, WeightScheme::Gap).unwrap();
        assert_eq!(ids(&c.partition), vec![vec![0, 1], vec![2]]);
        assert_eq!(c.cut.average, Rational::new(9, 2).unwrap());
        assert!(communities_from_cut(&t, &[EdgeId::from_head(NodeId(0))]).is_err());
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(
            LinkageTable::new(3, vec![merge(0, 1, 5, 2), merge(3, 2, 1, 3)])
                .and_then(|t| linkage_to_tree(&t, WeightScheme::Gap)),
            Err(DendroError::NegativeGap { merge: 1, child: 3, .. })
        ));
        assert!(matches!(
            LinkageTable::new(3, vec![merge(0, 1, 1, 2), merge(4, 2, 5, 3)]),
            Err(DendroError::InvalidIndex { merge: 1, index: 4 })
        ));
        assert!(matches!(
            LinkageTable::new(3, vec![merge(0, 1, 1, 2), merge(0, 2, 5, 2)]),
            Err(DendroError::ReusedIndex { merge: 1, index: 0 })
        ));
        assert!(matches!(
            LinkageTable::new(3, vec![merge(0, 1, 1, 2), merge(3, 2, 5, 2)]),
            Err(DendroError::SizeMismatch { merge: 1, .. })
        ));
        assert!(matches!(LinkageTable::new(3, vec![merge(0, 1, 1, 2)]), Err(DendroError::MergeCount { .. })));
        assert!(matches!(LinkageTable::new(1, vec![]), Err(DendroError::TooFewItems(1))));
        let flat = LinkageTable::new(2, vec![merge(0, 1, 0, 2)]).unwrap();
        assert_eq!(linkage_to_tree(&flat, WeightScheme::Height), Err(DendroError::ZeroHeight));
    }
}
