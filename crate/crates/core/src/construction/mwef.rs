//! Minimum-weight enumerators of the per-leaf subcodes, averaged over
//! uniform interleavers between tree layers.
//!
//! Walking from a leaf to the root, a right-child step doubles the minimum
//! weight and keeps the multiplicity; a left-child step keeps the weight and
//! scales the multiplicity by
//! `Σ_{d_r=0}^{min(d, ℓ_r)} C(ℓ_r, d_r) C(d, d_r) / C(ℓ_l, d_r)`.
//! Multiplicities are tracked as natural logs; they overflow `f64` quickly
//! for long codes.

use std::cmp::Ordering;

use crate::construction::{select_most_reliable, Method, RateProfile};
use crate::error::{Error, Result};
use crate::tree::CodingTree;

/// Relative tolerance under which two log-multiplicities count as a tie.
const LN_B_TIE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mwef {
    pub d_min: u64,
    ln_b: f64,
}

impl Mwef {
    pub fn new(d_min: u64, multiplicity: f64) -> Self {
        Self { d_min, ln_b: multiplicity.ln() }
    }

    /// `B(d_min)`; may be `inf` for long codes, use [`Mwef::ln_multiplicity`].
    pub fn multiplicity(&self) -> f64 {
        self.ln_b.exp()
    }

    pub fn ln_multiplicity(&self) -> f64 {
        self.ln_b
    }

    /// Ascending reliability: smaller weight first, then larger multiplicity.
    pub fn reliability_cmp(&self, other: &Self) -> Ordering {
        self.d_min.cmp(&other.d_min).then_with(|| {
            let scale = self.ln_b.abs().max(other.ln_b.abs()).max(1.0);
            if (self.ln_b - other.ln_b).abs() <= LN_B_TIE * scale {
                Ordering::Equal
            } else {
                other.ln_b.total_cmp(&self.ln_b)
            }
        })
    }
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// `ln Σ_{d_r} C(ℓ_r, d_r) C(d, d_r) / C(ℓ_l, d_r)`, using the term ratio
/// `(ℓ_r − d_r)(d − d_r) / ((d_r + 1)(ℓ_l − d_r))`.
fn ln_left_step_factor(d: u64, left_len: usize, right_len: usize) -> f64 {
    let (d, ll, lr) = (d as f64, left_len as f64, right_len as f64);
    let upper = d.min(lr) as usize;
    let mut terms = Vec::with_capacity(upper + 1);
    let mut ln_t = 0.0;
    terms.push(ln_t);
    for dr in 0..upper {
        let dr = dr as f64;
        ln_t += ((lr - dr) * (d - dr)).ln() - ((dr + 1.0) * (ll - dr)).ln();
        terms.push(ln_t);
    }
    log_sum_exp(&terms)
}

pub fn mwef_leaf(tree: &CodingTree, leaf: usize) -> Result<Mwef> {
    if leaf >= tree.len() {
        return Err(Error::InvalidInput(format!("leaf {leaf} out of range for N = {}", tree.len())));
    }
    let mut id = tree.leaf_node(leaf);
    let mut mwef = Mwef { d_min: 1, ln_b: 0.0 };
    while let Some(parent) = tree.node(id).parent {
        let (l, r) = tree.node(parent).children.expect("parent has children");
        if id == r {
            mwef.d_min *= 2;
        } else {
            mwef.ln_b += ln_left_step_factor(mwef.d_min, tree.node(l).len, tree.node(r).len);
        }
        id = parent;
    }
    Ok(mwef)
}

pub fn mwef_leaves(tree: &CodingTree) -> Vec<Mwef> {
    (0..tree.len()).map(|i| mwef_leaf(tree, i).expect("leaf in range")).collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Probability that a uniformly interleaved weight-`d_r` vector overlaps a
/// fixed weight-`d_l` vector of length `ℓ_l` in exactly `k` positions.
pub fn hypergeometric_overlap(d_l: usize, d_r: usize, left_len: usize, k: usize) -> f64 {
    if k > d_l || k > d_r || d_r - k > left_len.saturating_sub(d_l) {
        return 0.0;
    }
    binomial(d_l, k) * binomial(left_len - d_l, d_r - k) / binomial(left_len, d_r)
}

/// Parent weight spectrum from the child spectra (`wef_l[d]` is the average
/// number of left labels of weight `d`, for `d = 0..=ℓ_l`; same for the right).
pub fn wef_convolve(wef_l: &[f64], left_len: usize, wef_r: &[f64], right_len: usize) -> Result<Vec<f64>> {
    if wef_l.len() != left_len + 1 || wef_r.len() != right_len + 1 {
        return Err(Error::InvalidInput(format!(
            "spectrum lengths {}, {} do not match node lengths {left_len}, {right_len}",
            wef_l.len(),
            wef_r.len()
        )));
    }
    if !(left_len == right_len || left_len == right_len + 1) {
        return Err(Error::InvalidPair { left: left_len, right: right_len });
    }
    let mut parent = vec![0.0; left_len + right_len + 1];
    for (dl, &bl) in wef_l.iter().enumerate().filter(|(_, b)| **b != 0.0) {
        for (dr, &br) in wef_r.iter().enumerate().filter(|(_, b)| **b != 0.0) {
            let lo = (dl + dr).saturating_sub(left_len);
            for k in lo..=dl.min(dr) {
                parent[dl + 2 * dr - 2 * k] += bl * br * hypergeometric_overlap(dl, dr, left_len, k);
            }
        }
    }
    Ok(parent)
}

/// Minimum-Hamming-weight construction.
pub fn construct_mhw(n: usize, k: usize) -> Result<RateProfile> {
    if k > n {
        return Err(Error::InvalidDimension { n, k });
    }
    let tree = CodingTree::new(n)?;
    let mwefs = mwef_leaves(&tree);
    let active = select_most_reliable(n, k, |a, b| mwefs[a].reliability_cmp(&mwefs[b]))?;
    RateProfile::new(n, active, Method::Mhw)
}
