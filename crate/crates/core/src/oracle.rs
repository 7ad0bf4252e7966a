//! Exhaustive ground truth for small trees.
//!
//! A root-separating cut is the out-edge boundary of an internal subtree:
//! a parent-closed node set containing the root and no leaf. The two are in
//! bijection, so enumerating internal subtrees enumerates cuts.

use num::{BigUint, One, ToPrimitive};
use thiserror::Error;

use crate::cut::{evaluate_cut, CutError, CutResult, Lambda, Objective};
use crate::rational::Rational;
use crate::tree::{EdgeId, NodeId, RootedTree, TreeError};

pub const DEFAULT_CUT_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("tree has {count} root-separating cuts, over the limit of {limit}")]
    TooManyCuts { count: BigUint, limit: u64 },
    #[error("edge set is not a root-separating boundary cut")]
    InvalidCut,
    #[error("edge {0} is not in the cut")]
    EdgeNotInCut(EdgeId),
    #[error("edge {0} is a leaf edge")]
    LeafEdge(EdgeId),
    #[error("contractibility {lambda} of edge {edge} does not exceed the cut average {average}")]
    NotAboveAverage { edge: EdgeId, lambda: Lambda, average: Rational },
    #[error("the cut is the root's own out-edge set")]
    RootCut,
    #[error("no internal edge is contractible")]
    NotApplicable,
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Cut(#[from] CutError),
}

/// Root-containing, parent-closed, leaf-free node set. Nodes ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InternalSubtree {
    nodes: Vec<NodeId>,
}

impl InternalSubtree {
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// The cut this subtree induces: edges leaving it, ascending.
    pub fn boundary(&self, tree: &RootedTree) -> Vec<EdgeId> {
        let mut cut: Vec<EdgeId> = self
            .nodes
            .iter()
            .flat_map(|&v| tree.children(v).iter().copied())
            .filter(|&c| !self.contains(c))
            .map(EdgeId::from_head)
            .collect();
        cut.sort_unstable();
        cut
    }
}

/// Number of root-separating cuts: `c(leaf) = 0`, `c(u) = ∏(1 + c(child))`.
pub fn count_cuts(tree: &RootedTree) -> BigUint {
    let mut count = vec![BigUint::default(); tree.node_count()];
    for &v in tree.preorder().iter().rev() {
        if tree.is_leaf(v) {
            continue;
        }
        let mut c = BigUint::one();
        for &child in tree.children(v) {
            c *= BigUint::one() + &count[child.index()];
        }
        count[v.index()] = c;
    }
    std::mem::take(&mut count[tree.root().index()])
}

fn check_limit(tree: &RootedTree, limit: u64) -> Result<(), OracleError> {
    let count = count_cuts(tree);
    match count.to_u64() {
        Some(c) if c <= limit => Ok(()),
        _ => Err(OracleError::TooManyCuts { count, limit }),
    }
}

/// Streams every root-separating cut once, together with its internal
/// subtree.
///
/// Internal nodes are listed in preorder and a subtree is a 0/1 vector
/// over them in which a node may be 1 only if its parent is. Successive
/// items are the lexicographic successors among such vectors.
pub struct CutEnumerator<'t> {
    tree: &'t RootedTree,
    order: Vec<NodeId>,
    parent_pos: Vec<usize>,
    included: Vec<bool>,
    started: bool,
    done: bool,
}

impl<'t> CutEnumerator<'t> {
    fn new(tree: &'t RootedTree) -> Self {
        let order: Vec<NodeId> = tree.preorder().into_iter().filter(|&v| !tree.is_leaf(v)).collect();
        let mut pos = vec![usize::MAX; tree.node_count()];
        for (i, v) in order.iter().enumerate() {
            pos[v.index()] = i;
        }
        let parent_pos = order
            .iter()
            .map(|&v| tree.parent(v).map_or(usize::MAX, |p| pos[p.index()]))
            .collect();
        let mut included = vec![false; order.len()];
        included[0] = true;
        CutEnumerator { tree, order, parent_pos, included, started: false, done: false }
    }

    fn advance(&mut self) -> bool {
        let j = (1..self.order.len())
            .rev()
            .find(|&j| !self.included[j] && self.included[self.parent_pos[j]]);
        match j {
            Some(j) => {
                self.included[j] = true;
                self.included[j + 1..].iter_mut().for_each(|b| *b = false);
                true
            }
            None => false,
        }
    }
}

impl Iterator for CutEnumerator<'_> {
    type Item = (InternalSubtree, Vec<EdgeId>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        let mut nodes: Vec<NodeId> = self
            .order
            .iter()
            .zip(&self.included)
            .filter(|(_, &inc)| inc)
            .map(|(&v, _)| v)
            .collect();
        nodes.sort_unstable();
        let subtree = InternalSubtree { nodes };
        let cut = subtree.boundary(self.tree);
        Some((subtree, cut))
    }
}

/// All root-separating cuts of `tree`, provided there are at most `limit`.
pub fn enumerate_cuts(tree: &RootedTree, limit: u64) -> Result<CutEnumerator<'_>, OracleError> {
    check_limit(tree, limit)?;
    Ok(CutEnumerator::new(tree))
}

/// Nodes reachable from the root without crossing a cut edge, if `cut` is
/// a valid boundary cut.
pub fn internal_subtree_of(tree: &RootedTree, cut: &[EdgeId]) -> Option<InternalSubtree> {
    let mut in_cut = vec![false; tree.node_count()];
    for &e in cut {
        if !tree.contains_edge(e) || std::mem::replace(&mut in_cut[e.index()], true) {
            return None;
        }
    }
    // Walk every root-to-leaf path counting cut edges: each must meet
    // exactly one.
    let mut nodes = vec![tree.root()];
    let mut in_subtree = vec![false; tree.node_count()];
    in_subtree[tree.root().index()] = true;
    let mut stack = vec![(tree.root(), false)];
    while let Some((v, crossed)) = stack.pop() {
        if tree.is_leaf(v) {
            if !crossed {
                return None;
            }
            continue;
        }
        for &c in tree.children(v) {
            let here = in_cut[c.index()];
            if here && crossed {
                return None;
            }
            if !crossed && !here {
                nodes.push(c);
                in_subtree[c.index()] = true;
            }
            stack.push((c, crossed || here));
        }
    }
    // Tails of cut edges together with the root form a connected set.
    if cut.iter().any(|&e| !in_subtree[tree.tail(e).index()]) {
        return None;
    }
    nodes.sort_unstable();
    Some(InternalSubtree { nodes })
}

pub fn is_valid_cut(tree: &RootedTree, cut: &[EdgeId]) -> bool {
    internal_subtree_of(tree, cut).is_some()
}

/// Best average over all enumerated cuts. Ties go to the lexicographically
/// smallest sorted edge list.
pub fn brute_force_optimum(tree: &RootedTree, objective: Objective, limit: u64) -> Result<CutResult, OracleError> {
    let mut best: Option<(Vec<EdgeId>, crate::cut::CutValue)> = None;
    for (_, cut) in enumerate_cuts(tree, limit)? {
        let value = evaluate_cut(tree, &cut)?;
        let better = match &best {
            None => true,
            Some((best_cut, best_value)) => {
                objective.improves(&value.average, &best_value.average)
                    || (value.average == best_value.average && cut < *best_cut)
            }
        };
        if better {
            best = Some((cut, value));
        }
    }
    let (cut, value) = best.expect("every tree has at least one cut");
    Ok(CutResult {
        cut,
        total: value.total,
        size: value.size,
        average: value.average,
        contractions: Vec::new(),
    })
}

fn average(tree: &RootedTree, cut: &[EdgeId]) -> Result<Rational, OracleError> {
    Ok(evaluate_cut(tree, cut)?.average)
}

/// Replacing a non-leaf cut edge `e` whose λ exceeds the cut average by the
/// out-edges of its head strictly raises the average.
pub fn check_replacement_gain(tree: &RootedTree, cut: &[EdgeId], e: EdgeId) -> Result<bool, OracleError> {
    if !is_valid_cut(tree, cut) {
        return Err(OracleError::InvalidCut);
    }
    if !cut.contains(&e) {
        return Err(OracleError::EdgeNotInCut(e));
    }
    let lambda = Lambda::of_edge(tree, e, Objective::Maximize).ok_or(OracleError::LeafEdge(e))?;
    let before = average(tree, cut)?;
    if !lambda.beats(&before, Objective::Maximize) {
        return Err(OracleError::NotAboveAverage { edge: e, lambda, average: before });
    }
    let mut replaced: Vec<EdgeId> = cut.iter().copied().filter(|&x| x != e).collect();
    replaced.extend(tree.out_edges(e.head()));
    Ok(is_valid_cut(tree, &replaced) && average(tree, &replaced)? > before)
}

/// For every leaf edge `e` of the internal subtree of `cut`, either λ(e)
/// exceeds the cut average, or pulling the cut back up to `e` loses no
/// average and shrinks the internal subtree.
pub fn check_pull_back(tree: &RootedTree, cut: &[EdgeId]) -> Result<bool, OracleError> {
    let subtree = internal_subtree_of(tree, cut).ok_or(OracleError::InvalidCut)?;
    if subtree.nodes().len() == 1 {
        return Err(OracleError::RootCut);
    }
    let avg = average(tree, cut)?;
    let subtree_leaf_edges = subtree
        .nodes()
        .iter()
        .copied()
        .filter(|&v| v != tree.root() && tree.children(v).iter().all(|c| !subtree.contains(*c)))
        .map(EdgeId::from_head);

    for e in subtree_leaf_edges {
        let lambda = Lambda::of_edge(tree, e, Objective::Maximize).expect("subtree nodes are internal");
        if lambda.beats(&avg, Objective::Maximize) {
            continue;
        }
        let children = tree.children(e.head());
        let mut pulled: Vec<EdgeId> = cut.iter().copied().filter(|x| !children.contains(&x.head())).collect();
        pulled.push(e);
        pulled.sort_unstable();
        let Some(smaller) = internal_subtree_of(tree, &pulled) else {
            return Ok(false);
        };
        if smaller.edge_count() >= subtree.edge_count() || average(tree, &pulled)? < avg {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Contracting the edge of maximal λ, when it beats α₀, does not change
/// the optimal average; an optimum of the contracted tree, read back in
/// original edge ids, is an optimum of the original tree.
pub fn check_contraction_keeps_optimum(tree: &RootedTree, limit: u64) -> Result<bool, OracleError> {
    let alpha0 = average(tree, &tree.out_edges(tree.root()))?;
    let mut best: Option<(Lambda, EdgeId)> = None;
    for e in tree.internal_edges() {
        let lambda = Lambda::of_edge(tree, e, Objective::Maximize).expect("internal edge");
        if best.as_ref().map_or(true, |(b, _)| lambda > *b) {
            best = Some((lambda, e));
        }
    }
    let Some((lambda, e1)) = best else {
        return Err(OracleError::NotApplicable);
    };
    if !lambda.beats(&alpha0, Objective::Maximize) {
        return Err(OracleError::NotApplicable);
    }

    let original = brute_force_optimum(tree, Objective::Maximize, limit)?;
    let (contracted, origin) = tree.contract_edge(e1)?;
    let reduced = brute_force_optimum(&contracted, Objective::Maximize, limit)?;
    let lifted: Vec<EdgeId> = reduced
        .cut
        .iter()
        .map(|e| EdgeId::from_head(origin[e.index()]))
        .collect();
    Ok(reduced.average == original.average
        && is_valid_cut(tree, &lifted)
        && average(tree, &lifted)? == original.average)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::build_tree;

    fn edge(t: &RootedTree, label: &str) -> EdgeId {
        EdgeId::from_head(t.node_by_label(label).unwrap())
    }

    fn path() -> RootedTree {
        build_tree(&[("r", "a", "5"), ("a", "x", "10")]).unwrap()
    }

    #[test]
    fn path_cuts() {
        let t = path();
        let cuts: Vec<Vec<EdgeId>> = enumerate_cuts(&t, 10).unwrap().map(|(_, c)| c).collect();
        assert_eq!(cuts, vec![vec![edge(&t, "a")], vec![edge(&t, "x")]]);
        assert_eq!(count_cuts(&t), BigUint::from(2u32));
    }

    #[test]
    fn star_has_one_cut() {
        let t = build_tree(&[("r", "a", "1"), ("r", "b", "2"), ("r", "c", "3")]).unwrap();
        assert_eq!(count_cuts(&t), BigUint::one());
        assert_eq!(enumerate_cuts(&t, 10).unwrap().count(), 1);
        let best = brute_force_optimum(&t, Objective::Maximize, 10).unwrap();
        assert_eq!(best.average, Rational::from_integer(2));
        assert_eq!(check_contraction_keeps_optimum(&t, 10), Err(OracleError::NotApplicable));
    }

    #[test]
    fn three_edge_path_has_three_cuts() {
        let t = build_tree(&[("r", "a", "1"), ("a", "b", "1"), ("b", "x", "1")]).unwrap();
        assert_eq!(count_cuts(&t), BigUint::from(3u32));
        let cuts: Vec<Vec<EdgeId>> = enumerate_cuts(&t, 10).unwrap().map(|(_, c)| c).collect();
        assert_eq!(cuts.len(), 3);
        for label in ["a", "b", "x"] {
            assert!(cuts.contains(&vec![edge(&t, label)]));
        }
    }

    #[test]
    fn limit_is_enforced() {
        let t = build_tree(&[("r", "a", "1"), ("a", "b", "1"), ("b", "x", "1")]).unwrap();
        assert!(matches!(enumerate_cuts(&t, 2), Err(OracleError::TooManyCuts { limit: 2, .. })));
        assert!(matches!(
            brute_force_optimum(&t, Objective::Maximize, 2),
            Err(OracleError::TooManyCuts { .. })
        ));
    }

    #[test]
    fn validity() {
        let t = path();
        assert!(is_valid_cut(&t, &t.out_edges(t.root())));
        assert!(is_valid_cut(&t, &[edge(&t, "x")]));
        assert!(!is_valid_cut(&t, &[edge(&t, "a"), edge(&t, "x")]));
        assert!(!is_valid_cut(&t, &[]));
        assert!(!is_valid_cut(&t, &[EdgeId::from_head(t.root())]));

        let t = build_tree(&[("r", "a", "1"), ("r", "b", "1"), ("a", "x", "1"), ("a", "y", "1")]).unwrap();
        // misses the path through b
        assert!(!is_valid_cut(&t, &[edge(&t, "a")]));
        // misses y
        assert!(!is_valid_cut(&t, &[edge(&t, "x"), edge(&t, "b")]));
        assert!(is_valid_cut(&t, &[edge(&t, "x"), edge(&t, "y"), edge(&t, "b")]));
    }

    #[test]
    fn path_optima() {
        let t = path();
        let min = brute_force_optimum(&t, Objective::Minimize, 10).unwrap();
        assert_eq!(min.cut, vec![edge(&t, "a")]);
        assert_eq!(min.average, Rational::from_integer(5));
        let max = brute_force_optimum(&t, Objective::Maximize, 10).unwrap();
        assert_eq!(max.cut, vec![edge(&t, "x")]);
    }

    #[test]
    fn exchange_checks_on_path() {
        let t = path();
        assert_eq!(check_replacement_gain(&t, &[edge(&t, "a")], edge(&t, "a")), Ok(true));
        assert_eq!(check_pull_back(&t, &[edge(&t, "x")]), Ok(true));
        assert_eq!(check_pull_back(&t, &[edge(&t, "a")]), Err(OracleError::RootCut));
        assert_eq!(check_contraction_keeps_optimum(&t, 10), Ok(true));
        assert_eq!(
            check_replacement_gain(&t, &[edge(&t, "x")], edge(&t, "a")),
            Err(OracleError::EdgeNotInCut(edge(&t, "a")))
        );
        assert_eq!(check_replacement_gain(&t, &[edge(&t, "x")], edge(&t, "x")), Err(OracleError::LeafEdge(edge(&t, "x"))));
        assert_eq!(
            check_replacement_gain(&t, &[edge(&t, "a"), edge(&t, "x")], edge(&t, "a")),
            Err(OracleError::InvalidCut)
        );

        let flat = build_tree(&[("r", "a", "10"), ("a", "x", "5")]).unwrap();
        assert!(matches!(
            check_replacement_gain(&flat, &[edge(&flat, "a")], edge(&flat, "a")),
            Err(OracleError::NotAboveAverage { .. })
        ));
    }
}
