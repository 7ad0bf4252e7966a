//! Root-separating edge cuts of optimal average weight in rooted weighted
//! trees.
//!
//! [`optimal_average_cut`] finds, among all edge sets that separate the root
//! from every leaf, one whose mean edge weight is maximal (or minimal). It
//! works by repeatedly contracting the edge whose replacement by its head's
//! out-edges gains the most, and stops when no such gain beats the average
//! of the root's current out-edges. All arithmetic is exact.
//!
//! [`oracle`] enumerates every cut of small trees and is the ground truth
//! the algorithm is tested against. [`dendro`] applies the cut to
//! hierarchical-clustering dendrograms.
//!
//! ```
//! use avgcut::{io::parse_edgelist, optimal_average_cut, Objective};
//!
//! let tree = parse_edgelist("r a 5\na x 10\n").unwrap();
//! let best = optimal_average_cut(&tree, Objective::Maximize);
//! assert_eq!(best.average.to_string(), "10");
//! ```

// Error values carry exact rationals for reporting; they are built only on
// the failure path, so their size is not worth boxing.
#![allow(clippy::result_large_err)]

pub mod cli;
pub mod cut;
pub mod dendro;
pub mod io;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod tree;

pub use cut::{evaluate_cut, optimal_average_cut, ContractionState, CutError, CutResult, Lambda, Objective};
pub use rational::Rational;
pub use tree::{build_tree, EdgeId, NodeId, RootedTree, TreeError};
