#![allow(dead_code)]

use std::path::PathBuf;

use avgcut::dendro::{LinkageTable, Merge};
use avgcut::io::parse_edgelist;
use avgcut::{EdgeId, NodeId, Rational, RootedTree};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn example() -> RootedTree {
    parse_edgelist(&std::fs::read_to_string(data_path("example.edges")).unwrap()).unwrap()
}

pub fn edge(t: &RootedTree, label: &str) -> EdgeId {
    EdgeId::from_head(t.node_by_label(label).unwrap_or_else(|| panic!("no node {label}")))
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

/// Small-denominator weights; a third of the draws come from a pool of
/// three values so equal weights (and equal λ) are common.
pub fn random_weight<R: Rng>(rng: &mut R, pool: &[Rational]) -> Rational {
    if rng.gen_bool(0.35) {
        pool.choose(rng).unwrap().clone()
    } else {
        let den = *[1i64, 1, 2, 3, 4].choose(rng).unwrap();
        q(rng.gen_range(0..=12), den)
    }
}

/// Random rooted tree on `n` nodes. Node `i` attaches either to `i - 1`
/// (building unary chains) or to a uniformly chosen earlier node.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> RootedTree {
    assert!(n >= 2);
    let pool: Vec<Rational> = (0..3).map(|_| q(rng.gen_range(0..=8), *[1i64, 2].choose(rng).unwrap())).collect();
    let chain_bias = rng.gen_range(0.0..0.5);
    let mut parent = vec![None];
    let mut weight = vec![Rational::zero()];
    for i in 1..n {
        let p = if rng.gen_bool(chain_bias) { i - 1 } else { rng.gen_range(0..i) };
        parent.push(Some(NodeId(p)));
        weight.push(random_weight(rng, &pool));
    }
    let labels = (0..n).map(|i| format!("n{i}")).collect();
    RootedTree::from_parents(labels, parent, weight).unwrap()
}

/// Random linkage over `n` items with non-decreasing heights.
pub fn random_linkage<R: Rng>(rng: &mut R, n: usize) -> LinkageTable {
    let mut active: Vec<(usize, usize)> = (0..n).map(|i| (i, 1)).collect();
    let mut height = Rational::zero();
    let mut merges = Vec::new();
    for k in 0..n - 1 {
        active.shuffle(rng);
        let (a, sa) = active.pop().unwrap();
        let (b, sb) = active.pop().unwrap();
        height += q(rng.gen_range(0..=6), *[1i64, 2, 3].choose(rng).unwrap());
        merges.push(Merge { left: a, right: b, height: height.clone(), size: sa + sb });
        active.push((n + k, sa + sb));
    }
    LinkageTable::new(n, merges).unwrap()
}

/// Every subset of edges that meets each root-to-leaf path exactly once,
/// found by testing all `2^(edges)` subsets. Sorted lists, sorted.
pub fn cuts_by_subsets(t: &RootedTree) -> Vec<Vec<EdgeId>> {
    let edges: Vec<EdgeId> = t.edges().collect();
    assert!(edges.len() <= 16, "subset enumeration is exponential");
    let paths: Vec<Vec<EdgeId>> = t
        .leaves()
        .into_iter()
        .map(|leaf| {
            let mut path = Vec::new();
            let mut v = leaf;
            while let Some(p) = t.parent(v) {
                path.push(EdgeId::from_head(v));
                v = p;
            }
            path
        })
        .collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << edges.len()) {
        let chosen: Vec<EdgeId> = (0..edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
        let ok = paths.iter().all(|p| p.iter().filter(|e| chosen.contains(e)).count() == 1);
        if ok {
            out.push(chosen);
        }
    }
    out.sort();
    out
}

/// Mean weight of `cut`, recomputed from scratch.
pub fn mean(t: &RootedTree, cut: &[EdgeId]) -> Rational {
    let total: Rational = cut.iter().map(|&e| t.weight(e).clone()).sum();
    total.div_count(cut.len())
}
