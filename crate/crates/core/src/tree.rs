//! Validated rooted weighted trees.
//!
//! Nodes are dense indices. Every non-root node has exactly one in-edge, so
//! an edge is named by its head node and there is no separate edge table.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::rational::{ParseRationalError, Rational};

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An edge, identified by its head.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(NodeId);

impl EdgeId {
    pub fn from_head(head: NodeId) -> Self {
        EdgeId(head)
    }

    pub fn head(self) -> NodeId {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 .0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0 .0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree has no edges")]
    Empty,
    #[error("node `{child}` has more than one parent (edge {edge})")]
    DuplicateParent { child: String, edge: usize },
    #[error("the parent relation contains a cycle through `{label}`")]
    Cycle { label: String },
    #[error("the edges do not form a single tree: candidate roots {roots:?}")]
    Disconnected { roots: Vec<String> },
    #[error("negative weight {weight} on edge into `{child}`")]
    NegativeWeight { child: String, weight: String, edge: Option<usize> },
    #[error("malformed weight on edge {edge}: {source}")]
    MalformedWeight {
        edge: usize,
        #[source]
        source: ParseRationalError,
    },
    #[error("label `{0}` names more than one node")]
    DuplicateLabel(String),
    #[error("invalid tree structure: {0}")]
    Invalid(String),
}

impl TreeError {
    /// Index of the offending input edge, when the error is tied to one.
    pub fn edge_index(&self) -> Option<usize> {
        match self {
            TreeError::DuplicateParent { edge, .. } | TreeError::MalformedWeight { edge, .. } => Some(*edge),
            TreeError::NegativeWeight { edge, .. } => *edge,
            _ => None,
        }
    }
}

/// Non-fatal observations about an otherwise valid tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeWarning {
    /// Zero weights are accepted, though strictly positive weights are the
    /// usual setting.
    ZeroWeight(EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    /// Indexed by head node; the root slot holds zero and is never read.
    weight: Vec<Rational>,
    labels: Vec<String>,
    by_label: HashMap<String, NodeId>,
}

impl RootedTree {
    /// Builds a tree from per-node parents, weights (of each node's in-edge;
    /// the root's entry is ignored) and labels.
    pub fn from_parents(
        labels: Vec<String>,
        parent: Vec<Option<NodeId>>,
        mut weight: Vec<Rational>,
    ) -> Result<Self, TreeError> {
        let n = labels.len();
        if parent.len() != n || weight.len() != n {
            return Err(TreeError::Invalid(format!(
                "{} labels, {} parents, {} weights",
                n,
                parent.len(),
                weight.len()
            )));
        }
        if n < 2 {
            return Err(TreeError::Empty);
        }

        let mut by_label = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if by_label.insert(label.clone(), NodeId(i)).is_some() {
                return Err(TreeError::DuplicateLabel(label.clone()));
            }
        }

        let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
        let root = match roots.as_slice() {
            [r] => NodeId(*r),
            [] => return Err(TreeError::Cycle { label: labels[0].clone() }),
            _ => {
                return Err(TreeError::Disconnected {
                    roots: roots.iter().map(|&i| labels[i].clone()).collect(),
                })
            }
        };

        let mut children = vec![Vec::new(); n];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                if p.0 >= n {
                    return Err(TreeError::Invalid(format!("parent {} of node {} out of range", p.0, i)));
                }
                if p.0 == i {
                    return Err(TreeError::Cycle { label: labels[i].clone() });
                }
                children[p.0].push(NodeId(i));
            }
        }
        // Ids ascend in the push order above, so the lists are already sorted.

        let mut seen = vec![false; n];
        let mut stack = vec![root];
        let mut reached = 0;
        while let Some(v) = stack.pop() {
            seen[v.0] = true;
            reached += 1;
            stack.extend(children[v.0].iter().copied());
        }
        if reached != n {
            let stray = (0..n).find(|&i| !seen[i]).expect("unreached node");
            return Err(TreeError::Cycle { label: labels[stray].clone() });
        }

        for i in 0..n {
            if i == root.0 {
                weight[i] = Rational::zero();
            } else if weight[i].is_negative() {
                return Err(TreeError::NegativeWeight {
                    child: labels[i].clone(),
                    weight: weight[i].to_string(),
                    edge: None,
                });
            }
        }

        Ok(RootedTree { root, parent, children, weight, labels, by_label })
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn edge_count(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v.0]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v.0]
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v.0]
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.by_label.get(label).copied()
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.children[v.0].is_empty()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        e.index() < self.node_count() && e.head() != self.root
    }

    pub fn weight(&self, e: EdgeId) -> &Rational {
        debug_assert!(self.contains_edge(e));
        &self.weight[e.index()]
    }

    pub fn tail(&self, e: EdgeId) -> NodeId {
        self.parent[e.index()].expect("edge head is never the root")
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count()).map(NodeId)
    }

    /// All edges, ascending by id.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.nodes().filter(move |&v| v != self.root).map(EdgeId::from_head)
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        self.nodes().filter(|&v| self.is_leaf(v)).collect()
    }

    /// Out-edges of `v` in canonical (ascending id) order.
    pub fn out_edges(&self, v: NodeId) -> Vec<EdgeId> {
        self.children[v.0].iter().map(|&c| EdgeId::from_head(c)).collect()
    }

    /// Total weight and number of out-edges of `v`.
    pub fn out_aggregate(&self, v: NodeId) -> (Rational, usize) {
        let children = &self.children[v.0];
        (children.iter().map(|c| &self.weight[c.0]).sum(), children.len())
    }

    /// Edges whose head is not a leaf.
    pub fn internal_edges(&self) -> Vec<EdgeId> {
        self.edges().filter(|e| !self.is_leaf(e.head())).collect()
    }

    /// Leaf descendants of `head(e)`, including the head itself if it is a
    /// leaf. Ascending by id.
    pub fn subtree_leaves(&self, e: EdgeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![e.head()];
        while let Some(v) = stack.pop() {
            if self.is_leaf(v) {
                out.push(v);
            } else {
                stack.extend(self.children[v.0].iter().copied());
            }
        }
        out.sort_unstable();
        out
    }

    /// Nodes in preorder, children visited in canonical order.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.node_count());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v.0].iter().rev().copied());
        }
        out
    }

    pub fn warnings(&self) -> Vec<TreeWarning> {
        self.edges()
            .filter(|&e| self.weight(e).is_zero())
            .map(TreeWarning::ZeroWeight)
            .collect()
    }

    /// Label-based normal form: equal for two trees iff they are isomorphic
    /// as labeled weighted rooted trees, whatever their node numbering.
    pub fn canonical_string(&self) -> String {
        let mut repr: Vec<String> = vec![String::new(); self.node_count()];
        for &v in self.preorder().iter().rev() {
            let mut parts: Vec<String> = self.children[v.0]
                .iter()
                .map(|c| format!("{}:{}", std::mem::take(&mut repr[c.0]), self.weight[c.0]))
                .collect();
            parts.sort();
            repr[v.0] = if parts.is_empty() {
                self.labels[v.0].clone()
            } else {
                format!("({}){}", parts.join(","), self.labels[v.0])
            };
        }
        std::mem::take(&mut repr[self.root.0])
    }

    /// The same shape with every weight passed through `f`.
    pub fn map_weights(&self, mut f: impl FnMut(&Rational) -> Rational) -> Result<Self, TreeError> {
        let weight = self
            .nodes()
            .map(|v| if v == self.root { Rational::zero() } else { f(&self.weight[v.0]) })
            .collect();
        RootedTree::from_parents(self.labels.clone(), self.parent.clone(), weight)
    }

    /// `T/e`: merges the head of `e` into its tail. Returns the contracted
    /// tree and, for each of its nodes, the original node it came from, so
    /// edges of the result map back to original edges.
    pub fn contract_edge(&self, e: EdgeId) -> Result<(RootedTree, Vec<NodeId>), TreeError> {
        if !self.contains_edge(e) {
            return Err(TreeError::Invalid(format!("no edge {e}")));
        }
        let gone = e.head();
        let tail = self.tail(e);
        let kept: Vec<NodeId> = self.nodes().filter(|&v| v != gone).collect();
        let mut new_index = vec![usize::MAX; self.node_count()];
        for (i, v) in kept.iter().enumerate() {
            new_index[v.0] = i;
        }
        let mut labels = Vec::with_capacity(kept.len());
        let mut parent = Vec::with_capacity(kept.len());
        let mut weight = Vec::with_capacity(kept.len());
        for &v in &kept {
            labels.push(self.labels[v.0].clone());
            let p = self.parent[v.0].map(|p| if p == gone { tail } else { p });
            parent.push(p.map(|p| NodeId(new_index[p.0])));
            weight.push(self.weight[v.0].clone());
        }
        if kept.len() < 2 {
            return Err(TreeError::Empty);
        }
        Ok((RootedTree::from_parents(labels, parent, weight)?, kept))
    }
}

/// Builds a tree from `(parent, child, weight)` triples.
///
/// Node ids follow first appearance (parent before child within an edge);
/// the root is the one label never seen as a child.
pub fn build_tree<P, C, W>(edges: &[(P, C, W)]) -> Result<RootedTree, TreeError>
where
    P: AsRef<str>,
    C: AsRef<str>,
    W: AsRef<str>,
{
    if edges.is_empty() {
        return Err(TreeError::Empty);
    }
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    fn intern<'a>(label: &'a str, ids: &mut HashMap<&'a str, usize>, labels: &mut Vec<String>) -> usize {
        let next = ids.len();
        *ids.entry(label).or_insert_with(|| {
            labels.push(label.to_string());
            next
        })
    }

    let mut parent_of: Vec<Option<usize>> = Vec::new();
    let mut weight: Vec<Rational> = Vec::new();
    let mut has_parent: HashSet<usize> = HashSet::new();

    for (i, (p, c, w)) in edges.iter().enumerate() {
        let (p, c) = (p.as_ref(), c.as_ref());
        let pid = intern(p, &mut ids, &mut labels);
        let cid = intern(c, &mut ids, &mut labels);
        parent_of.resize(labels.len(), None);
        weight.resize(labels.len(), Rational::zero());

        let w: Rational = w
            .as_ref()
            .parse()
            .map_err(|source| TreeError::MalformedWeight { edge: i, source })?;
        if w.is_negative() {
            return Err(TreeError::NegativeWeight {
                child: c.to_string(),
                weight: w.to_string(),
                edge: Some(i),
            });
        }
        if pid == cid {
            return Err(TreeError::Cycle { label: c.to_string() });
        }
        if !has_parent.insert(cid) {
            return Err(TreeError::DuplicateParent { child: c.to_string(), edge: i });
        }
        parent_of[cid] = Some(pid);
        weight[cid] = w;
    }

    let parent = parent_of.into_iter().map(|p| p.map(NodeId)).collect();
    RootedTree::from_parents(labels, parent, weight)
}
