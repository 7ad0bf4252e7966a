//! Optimal average-weight root-separating cuts by edge contraction.
//!
//! Each internal edge `e` carries a contractibility
//! `λ(e) = (w(E⁺(e)) − w(e)) / (|E⁺(e)| − 1)`: the average weight gained per
//! extra cut edge when `e` is replaced by the out-edges of its head. While
//! the best live λ beats the current root average α₀, that edge is
//! contracted. When no edge beats α₀ the root's out-edges are the optimal
//! cut.
//!
//! A contraction merges the head supernode into the tail supernode. Only
//! the in-edge of the tail supernode sees its λ change, so the priority set
//! is touched once per contraction and a full run costs `O(n log n)`
//! rational operations.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::bigint::Sign;
use thiserror::Error;

use crate::rational::{sign, Rational};
use crate::tree::{EdgeId, NodeId, RootedTree};

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Objective {
    Maximize,
    Minimize,
}

impl Objective {
    /// `true` when `a` is strictly better than `b` in this direction.
    pub fn improves(self, a: &Rational, b: &Rational) -> bool {
        match self {
            Objective::Maximize => a > b,
            Objective::Minimize => a < b,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Maximize => "max",
            Objective::Minimize => "min",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Objective {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "max" | "maximize" => Ok(Objective::Maximize),
            "min" | "minimize" => Ok(Objective::Minimize),
            other => Err(format!("unknown objective `{other}` (expected max or min)")),
        }
    }
}

/// Contractibility of an edge, extended with infinities for heads of
/// out-degree one.
///
/// Variant order gives `MinusInfinity < Finite(_) < PlusInfinity`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Lambda {
    MinusInfinity,
    Finite(Rational),
    PlusInfinity,
}

impl Lambda {
    /// λ of an edge of weight `w` whose head currently has `head_count`
    /// out-edges of total weight `head_sum`.
    ///
    /// With one out-edge the replacement is a one-for-one swap. A swap that
    /// helps the objective is always worth taking (an infinity in the
    /// favourable direction); a swap that hurts or is neutral never is.
    pub fn from_aggregate(head_sum: &Rational, head_count: usize, w: &Rational, objective: Objective) -> Self {
        debug_assert!(head_count >= 1, "leaf edges have no contractibility");
        let gain = head_sum - w;
        if head_count >= 2 {
            return Lambda::Finite(gain.div_count(head_count - 1));
        }
        match (objective, sign(&gain)) {
            (Objective::Maximize, Sign::Plus) => Lambda::PlusInfinity,
            (Objective::Maximize, _) => Lambda::MinusInfinity,
            (Objective::Minimize, Sign::Minus) => Lambda::MinusInfinity,
            (Objective::Minimize, _) => Lambda::PlusInfinity,
        }
    }

    /// λ of `e` in the uncontracted tree, or `None` for a leaf edge.
    pub fn of_edge(tree: &RootedTree, e: EdgeId, objective: Objective) -> Option<Self> {
        if tree.is_leaf(e.head()) {
            return None;
        }
        let (sum, count) = tree.out_aggregate(e.head());
        Some(Lambda::from_aggregate(&sum, count, tree.weight(e), objective))
    }

    /// Whether an edge with this λ is contractible against `alpha0`.
    pub fn beats(&self, alpha0: &Rational, objective: Objective) -> bool {
        match (self, objective) {
            (Lambda::Finite(x), obj) => obj.improves(x, alpha0),
            (Lambda::PlusInfinity, Objective::Maximize) => true,
            (Lambda::MinusInfinity, Objective::Minimize) => true,
            _ => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Lambda::Finite(_))
    }
}

impl std::ops::Neg for Lambda {
    type Output = Lambda;
    fn neg(self) -> Lambda {
        match self {
            Lambda::MinusInfinity => Lambda::PlusInfinity,
            Lambda::PlusInfinity => Lambda::MinusInfinity,
            Lambda::Finite(x) => Lambda::Finite(-x),
        }
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::MinusInfinity => f.write_str("-inf"),
            Lambda::PlusInfinity => f.write_str("+inf"),
            Lambda::Finite(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutError {
    #[error("edge {0} is already contracted")]
    DeadEdge(EdgeId),
    #[error("edge {0} ends in a leaf and cannot be contracted")]
    LeafHead(EdgeId),
    #[error("edge {0} does not exist")]
    InvalidEdge(EdgeId),
    #[error("edge {0} appears more than once in the cut")]
    DuplicateEdge(EdgeId),
    #[error("the cut is empty")]
    EmptyCut,
}

/// One contraction in a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionStep {
    pub edge: EdgeId,
    /// λ of the edge at the moment it was contracted.
    pub lambda: Lambda,
    pub alpha0_before: Rational,
    pub alpha0_after: Rational,
    /// The edge left the root supernode, so α₀ was recomputed.
    pub at_root: bool,
}

/// Exact sum, size and average of a cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutValue {
    pub total: Rational,
    pub size: usize,
    pub average: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutResult {
    /// Original edge ids, ascending.
    pub cut: Vec<EdgeId>,
    pub total: Rational,
    pub size: usize,
    pub average: Rational,
    /// Contractions in the order performed; empty for oracle results.
    pub contractions: Vec<ContractionStep>,
}

impl CutResult {
    pub fn contracted_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.contractions.iter().map(|s| s.edge)
    }
}

/// Exact total, size and average weight of `cut`.
pub fn evaluate_cut(tree: &RootedTree, cut: &[EdgeId]) -> Result<CutValue, CutError> {
    if cut.is_empty() {
        return Err(CutError::EmptyCut);
    }
    let mut seen = vec![false; tree.node_count()];
    let mut total = Rational::zero();
    for &e in cut {
        if !tree.contains_edge(e) {
            return Err(CutError::InvalidEdge(e));
        }
        if std::mem::replace(&mut seen[e.index()], true) {
            return Err(CutError::DuplicateEdge(e));
        }
        total += tree.weight(e);
    }
    let average = total.div_count(cut.len());
    Ok(CutValue { total, size: cut.len(), average })
}

/// Disjoint sets over original nodes; each class is one supernode.
#[derive(Clone, Debug)]
struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Non-compressing lookup for `&self` queries.
    fn find_const(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        a
    }
}

/// Priority entry. `rank` is λ under minimization and −λ under
/// maximization, so the first entry is always the best edge, and equal
/// λ values fall back to the smallest edge id.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Candidate {
    rank: Lambda,
    edge: EdgeId,
}

/// Mutable state of one contraction run over a borrowed tree.
#[derive(Clone, Debug)]
pub struct ContractionState<'t> {
    tree: &'t RootedTree,
    objective: Objective,
    sets: DisjointSet,
    // The next three are indexed by representative.
    out_sum: Vec<Rational>,
    out_count: Vec<usize>,
    top: Vec<NodeId>,
    alive: Vec<bool>,
    lambda: Vec<Option<Lambda>>,
    priority: BTreeSet<Candidate>,
    alpha0: Rational,
    trace: Vec<ContractionStep>,
}

impl<'t> ContractionState<'t> {
    pub fn new(tree: &'t RootedTree, objective: Objective) -> Self {
        let n = tree.node_count();
        let mut out_sum = Vec::with_capacity(n);
        let mut out_count = Vec::with_capacity(n);
        for v in tree.nodes() {
            let (sum, count) = tree.out_aggregate(v);
            out_sum.push(sum);
            out_count.push(count);
        }
        let root = tree.root().index();
        let alpha0 = out_sum[root].div_count(out_count[root]);

        let mut state = ContractionState {
            tree,
            objective,
            sets: DisjointSet::new(n),
            out_sum,
            out_count,
            top: tree.nodes().collect(),
            alive: vec![true; n],
            lambda: vec![None; n],
            priority: BTreeSet::new(),
            alpha0,
            trace: Vec::new(),
        };
        state.alive[root] = false;
        for e in tree.internal_edges() {
            let lambda = state.compute_lambda(e);
            state.insert(e, lambda);
        }
        state
    }

    pub fn tree(&self) -> &'t RootedTree {
        self.tree
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn alpha0(&self) -> &Rational {
        &self.alpha0
    }

    pub fn trace(&self) -> &[ContractionStep] {
        &self.trace
    }

    pub fn is_alive(&self, e: EdgeId) -> bool {
        self.tree.contains_edge(e) && self.alive[e.index()]
    }

    /// Representative of the supernode that currently contains `v`.
    pub fn supernode(&self, v: NodeId) -> NodeId {
        NodeId(self.sets.find_const(v.index()))
    }

    /// Total weight and number of live out-edges of the supernode
    /// containing `v`.
    pub fn out_aggregate(&self, v: NodeId) -> (&Rational, usize) {
        let r = self.sets.find_const(v.index());
        (&self.out_sum[r], self.out_count[r])
    }

    /// Live edges currently ranked, best first.
    pub fn ranked(&self) -> impl Iterator<Item = (EdgeId, &Lambda)> + '_ {
        self.priority.iter().map(move |c| (c.edge, self.lambda[c.edge.index()].as_ref().expect("ranked edge")))
    }

    /// The best-ranked live edge and its λ.
    pub fn best(&self) -> Option<(EdgeId, &Lambda)> {
        self.ranked().next()
    }

    /// Contractibility of a live internal edge in the current contracted
    /// tree.
    pub fn contractibility(&self, e: EdgeId) -> Result<Lambda, CutError> {
        self.check_contractible(e)?;
        Ok(self.compute_lambda(e))
    }

    fn check_contractible(&self, e: EdgeId) -> Result<(), CutError> {
        if !self.tree.contains_edge(e) {
            return Err(CutError::InvalidEdge(e));
        }
        if !self.alive[e.index()] {
            return Err(CutError::DeadEdge(e));
        }
        if self.out_count[self.sets.find_const(e.index())] == 0 {
            return Err(CutError::LeafHead(e));
        }
        Ok(())
    }

    fn compute_lambda(&self, e: EdgeId) -> Lambda {
        // A live edge's head is the top of its supernode.
        let head = self.sets.find_const(e.index());
        Lambda::from_aggregate(&self.out_sum[head], self.out_count[head], self.tree.weight(e), self.objective)
    }

    fn rank_of(&self, lambda: &Lambda) -> Lambda {
        match self.objective {
            Objective::Maximize => -lambda.clone(),
            Objective::Minimize => lambda.clone(),
        }
    }

    fn insert(&mut self, e: EdgeId, lambda: Lambda) {
        let rank = self.rank_of(&lambda);
        self.priority.insert(Candidate { rank, edge: e });
        self.lambda[e.index()] = Some(lambda);
    }

    fn remove(&mut self, e: EdgeId) {
        if let Some(lambda) = self.lambda[e.index()].take() {
            let rank = self.rank_of(&lambda);
            self.priority.remove(&Candidate { rank, edge: e });
        }
    }

    /// Contracts `e`: its head supernode is merged into its tail supernode.
    pub fn contract(&mut self, e: EdgeId) -> Result<(), CutError> {
        self.check_contractible(e)?;
        let lambda = self.lambda[e.index()].clone().expect("internal live edge is ranked");
        let head = self.sets.find(e.index());
        let tail = self.sets.find(self.tree.tail(e).index());

        self.remove(e);
        self.alive[e.index()] = false;

        let mut sum = std::mem::take(&mut self.out_sum[tail]);
        sum -= self.tree.weight(e);
        sum += &self.out_sum[head];
        let count = self.out_count[tail] - 1 + self.out_count[head];
        let top = self.top[tail];

        let merged = self.sets.union(tail, head);
        self.out_sum[merged] = sum;
        self.out_count[merged] = count;
        self.top[merged] = top;

        let alpha0_before = self.alpha0.clone();
        let at_root = top == self.tree.root();
        if at_root {
            self.alpha0 = self.out_sum[merged].div_count(count);
        } else {
            // The in-edge of the tail supernode is the only λ that moves.
            let in_edge = EdgeId::from_head(top);
            self.remove(in_edge);
            let lambda = self.compute_lambda(in_edge);
            self.insert(in_edge, lambda);
        }

        self.trace.push(ContractionStep {
            edge: e,
            lambda,
            alpha0_before,
            alpha0_after: self.alpha0.clone(),
            at_root,
        });
        Ok(())
    }

    /// Contracts the best edge if it beats α₀. Returns the edge contracted.
    pub fn step(&mut self) -> Option<EdgeId> {
        let (edge, lambda) = self.best()?;
        if !lambda.beats(&self.alpha0, self.objective) {
            return None;
        }
        self.contract(edge).expect("ranked edges are live and internal");
        Some(edge)
    }

    /// Live out-edges of the root supernode, ascending by id.
    pub fn root_cut(&self) -> Vec<EdgeId> {
        let root = self.sets.find_const(self.tree.root().index());
        self.tree
            .edges()
            .filter(|&e| self.alive[e.index()] && self.sets.find_const(self.tree.tail(e).index()) == root)
            .collect()
    }

    /// Checks the incremental aggregates, α₀ and the priority set against a
    /// from-scratch recomputation over live edges.
    pub fn verify(&self) -> Result<(), String> {
        let n = self.tree.node_count();
        let mut sum = vec![Rational::zero(); n];
        let mut count = vec![0usize; n];
        for e in self.tree.edges().filter(|e| self.alive[e.index()]) {
            let r = self.sets.find_const(self.tree.tail(e).index());
            sum[r] += self.tree.weight(e);
            count[r] += 1;
        }
        for v in 0..n {
            if self.sets.find_const(v) != v {
                continue;
            }
            if sum[v] != self.out_sum[v] || count[v] != self.out_count[v] {
                return Err(format!(
                    "supernode {v}: stored ({}, {}), recomputed ({}, {})",
                    self.out_sum[v], self.out_count[v], sum[v], count[v]
                ));
            }
            if self.tree.parent(self.top[v]).is_some() && !self.alive[self.top[v].index()] {
                return Err(format!("supernode {v}: top {} has a dead in-edge", self.top[v]));
            }
        }
        let root = self.sets.find_const(self.tree.root().index());
        if self.alpha0 != sum[root].div_count(count[root]) {
            return Err(format!("alpha0 {} disagrees with root aggregate", self.alpha0));
        }
        let mut expected = 0;
        for e in self.tree.edges() {
            let live_internal = self.alive[e.index()] && count[self.sets.find_const(e.index())] >= 1;
            match (&self.lambda[e.index()], live_internal) {
                (Some(l), true) => {
                    expected += 1;
                    if *l != self.compute_lambda(e) {
                        return Err(format!("stale lambda on {e}"));
                    }
                    if !self.priority.contains(&Candidate { rank: self.rank_of(l), edge: e }) {
                        return Err(format!("{e} missing from priority"));
                    }
                }
                (None, false) => {}
                (Some(_), false) => return Err(format!("{e} ranked but not a live internal edge")),
                (None, true) => return Err(format!("{e} is a live internal edge without a rank")),
            }
        }
        if expected != self.priority.len() {
            return Err("priority holds extra entries".into());
        }
        Ok(())
    }

    pub fn into_result(self) -> CutResult {
        let cut = self.root_cut();
        let value = evaluate_cut(self.tree, &cut).expect("root cut is non-empty");
        debug_assert_eq!(value.average, self.alpha0);
        CutResult {
            cut,
            total: value.total,
            size: value.size,
            average: value.average,
            contractions: self.trace,
        }
    }
}

/// Root-separating cut of optimal average weight in the given direction,
/// reported in the original edge ids of `tree`.
pub fn optimal_average_cut(tree: &RootedTree, objective: Objective) -> CutResult {
    let mut state = ContractionState::new(tree, objective);
    while state.step().is_some() {}
    state.into_result()
}
