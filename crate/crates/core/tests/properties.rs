mod common;

use avgcut::cut::ContractionStep;
use avgcut::io::{parse_edgelist, write_edgelist};
use avgcut::oracle::{brute_force_optimum, count_cuts, enumerate_cuts, is_valid_cut};
use avgcut::{build_tree, optimal_average_cut, ContractionState, EdgeId, Objective, Rational, RootedTree};
use num::ToPrimitive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LIMIT: u64 = 1_000_000;

fn tree_with(seed: u64, nodes: usize) -> RootedTree {
    common::random_tree(&mut ChaCha8Rng::seed_from_u64(seed), nodes)
}

fn objectives() -> impl Strategy<Value = Objective> {
    prop_oneof![Just(Objective::Maximize), Just(Objective::Minimize)]
}

fn check_alpha_sequence(steps: &[ContractionStep], objective: Objective) -> Result<(), TestCaseError> {
    for s in steps {
        prop_assert!(!objective.improves(&s.alpha0_before, &s.alpha0_after), "α₀ moved the wrong way at {:?}", s);
        if s.at_root {
            prop_assert!(objective.improves(&s.alpha0_after, &s.alpha0_before), "α₀ did not move at {:?}", s);
        } else {
            prop_assert_eq!(&s.alpha0_after, &s.alpha0_before);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matches_brute_force(seed in any::<u64>(), nodes in 2usize..=22, objective in objectives()) {
        let t = tree_with(seed, nodes);
        let fast = optimal_average_cut(&t, objective);
        let brute = brute_force_optimum(&t, objective, LIMIT).unwrap();
        prop_assert_eq!(&fast.average, &brute.average);
        prop_assert!(is_valid_cut(&t, &fast.cut));
        prop_assert_eq!(common::mean(&t, &fast.cut), fast.average.clone());
        prop_assert_eq!(fast.size, fast.cut.len());
    }

    #[test]
    fn state_stays_consistent(seed in any::<u64>(), nodes in 2usize..=60, objective in objectives()) {
        let t = tree_with(seed, nodes);
        let mut s = ContractionState::new(&t, objective);
        s.verify().map_err(TestCaseError::fail)?;
        let mut steps = 0;
        while s.step().is_some() {
            s.verify().map_err(TestCaseError::fail)?;
            steps += 1;
        }
        prop_assert!(steps <= t.internal_edges().len());
        check_alpha_sequence(s.trace(), objective)?;
        let final_alpha = s.alpha0().clone();
        let res = s.into_result();
        prop_assert_eq!(res.average, final_alpha);
    }

    #[test]
    fn deterministic(seed in any::<u64>(), nodes in 2usize..=40, objective in objectives()) {
        let t = tree_with(seed, nodes);
        prop_assert_eq!(optimal_average_cut(&t, objective), optimal_average_cut(&t, objective));
    }

    #[test]
    fn scaling_keeps_the_cut(seed in any::<u64>(), nodes in 2usize..=40, objective in objectives(),
                             num in 1i64..20, den in 1i64..7) {
        let t = tree_with(seed, nodes);
        let c = Rational::new(num, den).unwrap();
        let scaled = t.map_weights(|w| w * &c).unwrap();
        let a = optimal_average_cut(&t, objective);
        let b = optimal_average_cut(&scaled, objective);
        prop_assert_eq!(&a.cut, &b.cut);
        prop_assert_eq!(a.average * &c, b.average);
    }

    #[test]
    fn enumeration_matches_subsets(seed in any::<u64>(), nodes in 2usize..=13) {
        let t = tree_with(seed, nodes);
        let mut listed: Vec<Vec<EdgeId>> = enumerate_cuts(&t, LIMIT).unwrap().map(|(h, cut)| {
            assert_eq!(h.boundary(&t), cut);
            cut
        }).collect();
        prop_assert_eq!(listed.len() as u64, count_cuts(&t).to_u64().unwrap());
        listed.sort();
        let before = listed.len();
        listed.dedup();
        prop_assert_eq!(listed.len(), before);
        prop_assert_eq!(&listed, &common::cuts_by_subsets(&t));
        for cut in &listed {
            prop_assert!(is_valid_cut(&t, cut));
        }
    }

    #[test]
    fn shuffled_edge_lists_build_the_same_tree(seed in any::<u64>(), nodes in 2usize..=30, shuffle_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let t = tree_with(seed, nodes);
        let mut lines: Vec<(String, String, String)> = t
            .edges()
            .map(|e| (t.label(t.tail(e)).to_string(), t.label(e.head()).to_string(), t.weight(e).to_string()))
            .collect();
        lines.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle_seed));
        let rebuilt = build_tree(&lines).unwrap();
        prop_assert_eq!(rebuilt.canonical_string(), t.canonical_string());
        let a = optimal_average_cut(&t, Objective::Maximize);
        let b = optimal_average_cut(&rebuilt, Objective::Maximize);
        prop_assert_eq!(a.average, b.average);
    }

    #[test]
    fn edgelist_round_trip(seed in any::<u64>(), nodes in 2usize..=30) {
        let t = tree_with(seed, nodes);
        let back = parse_edgelist(&write_edgelist(&t)).unwrap();
        prop_assert_eq!(back.canonical_string(), t.canonical_string());
    }

    #[test]
    fn rational_text_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = Rational::new(n, d).unwrap();
        prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
    }

    #[test]
    fn tree_invariants(seed in any::<u64>(), nodes in 2usize..=50) {
        let t = tree_with(seed, nodes);
        let child_total: usize = t.nodes().map(|v| t.children(v).len()).sum();
        prop_assert_eq!(child_total, t.node_count() - 1);
        for v in t.nodes() {
            prop_assert!(t.children(v).windows(2).all(|w| w[0] < w[1]));
            if let Some(p) = t.parent(v) {
                prop_assert_eq!(t.children(p).iter().filter(|&&c| c == v).count(), 1);
            }
        }
        let leaves = t.leaves();
        for v in t.nodes() {
            let is_parent = t.nodes().any(|u| t.parent(u) == Some(v));
            prop_assert_eq!(leaves.contains(&v), !is_parent);
        }
    }
}
