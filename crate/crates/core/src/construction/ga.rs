//! Density evolution under the Gaussian approximation.
//!
//! Each LLR is modelled as `𝒩(m, 2m)`. The mean vector of a node follows the
//! decoder's update pattern: `g` positions add, `f` positions combine through
//! `φ⁻¹(1 − (1 − φ(a))(1 − φ(b)))`, and the unpaired position of an odd node
//! keeps its mean. Everything is done on `ln φ` so means in the thousands do
//! not underflow.

use crate::construction::{select_most_reliable, Method, RateProfile};
use crate::error::{Error, Result};
use crate::sim::sigma_from_ebn0;
use crate::tree::CodingTree;

const ALPHA: f64 = -0.4527;
const BETA: f64 = 0.86;
const GAMMA: f64 = 0.0218;
const SPLIT: f64 = 10.0;
const INV_TOL: f64 = 1e-10;

/// `ln φ(x)`, clamped to `≤ 0`.
pub fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x <= SPLIT {
        (ALPHA * x.powf(BETA) + GAMMA).min(0.0)
    } else {
        0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln()
    }
}

pub fn phi(x: f64) -> f64 {
    ln_phi(x).exp()
}

/// Inverse of `φ` on the log scale by bisection (absolute tolerance 1e-10).
fn phi_inv_ln(ln_y: f64) -> f64 {
    if ln_y >= 0.0 {
        return 0.0;
    }
    let mut hi = 1.0;
    while ln_phi(hi) > ln_y {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > INV_TOL {
        let mid = 0.5 * (lo + hi);
        if ln_phi(mid) > ln_y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn phi_inv(y: f64) -> f64 {
    phi_inv_ln(y.ln())
}

/// Mean of `f(a, b)` for independent consistent-Gaussian inputs with means
/// `a` and `b`.
pub fn f_mean(a: f64, b: f64) -> f64 {
    let la = ln_phi(a);
    let lb = ln_phi(b);
    // ln(φa + φb(1 − φa))
    let other = lb + (-la.exp()).ln_1p();
    let ln_y = if other == f64::NEG_INFINITY {
        la
    } else {
        let m = la.max(other);
        m + ((la - m).exp() + (other - m).exp()).ln()
    };
    phi_inv_ln(ln_y)
}

/// Per-node GA mean vectors, indexed like [`CodingTree::nodes`].
#[derive(Debug, Clone)]
pub struct GaMeanTree {
    pub means: Vec<Vec<f64>>,
}

impl GaMeanTree {
    pub fn leaf_means(&self, tree: &CodingTree) -> Vec<f64> {
        tree.leaf_order().iter().map(|&id| self.means[id][0]).collect()
    }
}

pub fn ga_mean_tree(tree: &CodingTree, sigma: f64) -> Result<GaMeanTree> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let root = vec![2.0 / (sigma * sigma); tree.len()];
    Ok(GaMeanTree { means: tree.propagate(root, f_mean, |a, b| a + b) })
}

pub fn ga_leaf_means(n: usize, sigma: f64) -> Result<Vec<f64>> {
    let tree = CodingTree::new(n)?;
    Ok(ga_mean_tree(&tree, sigma)?.leaf_means(&tree))
}

/// GA construction at a design Eb/N0. `rate` fixes the noise level through
/// the Eb/N0 mapping (normally `K/N`).
pub fn construct_ga(n: usize, k: usize, design_snr_db: f64, rate: f64) -> Result<RateProfile> {
    if k > n {
        return Err(Error::InvalidDimension { n, k });
    }
    let sigma = sigma_from_ebn0(design_snr_db, rate)?;
    let means = ga_leaf_means(n, sigma)?;
    let active = select_most_reliable(n, k, |a, b| means[a].total_cmp(&means[b]))?;
    let mut profile = RateProfile::new(n, active, Method::Ga)?;
    profile.design_snr_db = Some(design_snr_db);
    Ok(profile)
}
