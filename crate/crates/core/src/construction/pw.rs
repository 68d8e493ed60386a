//! Polarization-weight construction over root-to-leaf branch labels:
//! `PW(i) = Σ_j b_j κ^{J−j}` with `J = ⌈log₂N⌉ − 1`.

use crate::construction::{select_most_reliable, Method, RateProfile};
use crate::error::{Error, Result};
use crate::tree::CodingTree;

/// `κ = 2^{1/4}`.
pub const DEFAULT_KAPPA: f64 = 1.189_207_115_002_721;

#[derive(Debug, Clone, PartialEq)]
pub struct PwTable {
    pub weights: Vec<f64>,
    pub kappa: f64,
    pub j: i32,
}

pub fn pw_weights(tree: &CodingTree, kappa: f64) -> Result<PwTable> {
    if !(kappa > 0.0) {
        return Err(Error::InvalidParameter(format!("kappa must be positive, got {kappa}")));
    }
    let j = tree.height() as i32 - 1;
    let weights = tree
        .leaf_paths()
        .iter()
        .map(|p| {
            p.labels().iter().enumerate().filter(|(_, &b)| b == 1).map(|(pos, _)| kappa.powi(j - pos as i32)).sum()
        })
        .collect();
    Ok(PwTable { weights, kappa, j })
}

pub fn construct_pw(n: usize, k: usize) -> Result<RateProfile> {
    construct_pw_with_kappa(n, k, DEFAULT_KAPPA)
}

pub fn construct_pw_with_kappa(n: usize, k: usize, kappa: f64) -> Result<RateProfile> {
    if k > n {
        return Err(Error::InvalidDimension { n, k });
    }
    let tree = CodingTree::new(n)?;
    let table = pw_weights(&tree, kappa)?;
    let w = &table.weights;
    let active = select_most_reliable(n, k, |a, b| w[a].total_cmp(&w[b]))?;
    RateProfile::new(n, active, Method::Pw)
}
