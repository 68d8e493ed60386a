//! Length-flexible polar codes built on a balanced binary coding tree.
//!
//! A code of any length `N` is defined by a tree whose node of length `ℓ`
//! splits into children of lengths `⌈ℓ/2⌉` and `⌊ℓ/2⌋`, a choice of active
//! leaves, and the `(U+V | V)` combine. The crate provides rate profiling,
//! encoding, SC/SCL/CA-SCL decoding, partitioned decoding over a pruned
//! sub-tree, analytical FER bounds and a Monte-Carlo harness.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bits;
pub mod bounds;
pub mod codec;
pub mod construction;
pub mod error;
pub mod matrix;
pub mod psc;
pub mod sim;
pub mod tree;

pub use bounds::{component_stats, fer_bounds, pairwise_correlation, psi_func, q_func, BoundReport, ComponentStats};
pub use codec::{f_func, g_func, CrcConfig, CrcDecoded, DecodedPath, FRule, LeafCodebook, OpCounter, PolarCode};
pub use construction::{construct, Method, RateProfile};
pub use error::{Error, Result};
pub use matrix::GeneratorMatrix;
pub use psc::{extract_subtree, DecodingLeaf, DecodingSubTree};
pub use sim::{run_simulation, sigma_from_ebn0, DecoderKind, SimConfig, SimResult, SnrPoint};
pub use tree::{CodingTree, LeafPath, NodeId};
