//! Rate profiling: choosing which `K` of the `N` leaves carry data.
//!
//! All three methods produce a per-leaf reliability ordering and keep the
//! last `K` entries of the ascending order. Ties go to the higher leaf index.

mod ga;
mod mwef;
mod pw;

pub use ga::{construct_ga, f_mean, ga_leaf_means, ga_mean_tree, ln_phi, phi, phi_inv, GaMeanTree};
pub use mwef::{construct_mhw, hypergeometric_overlap, mwef_leaf, mwef_leaves, wef_convolve, Mwef};
pub use pw::{construct_pw, construct_pw_with_kappa, pw_weights, PwTable, DEFAULT_KAPPA};

use std::cmp::Ordering;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default GA design SNR (Eb/N0, dB).
pub const DEFAULT_DESIGN_SNR_DB: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ga,
    Mhw,
    Pw,
    /// Hand-specified active set.
    Custom,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Ga => "ga",
            Method::Mhw => "mhw",
            Method::Pw => "pw",
            Method::Custom => "custom",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ga" => Ok(Method::Ga),
            "mhw" => Ok(Method::Mhw),
            "pw" => Ok(Method::Pw),
            "custom" => Ok(Method::Custom),
            other => Err(Error::InvalidParameter(format!("unknown construction method {other:?}"))),
        }
    }
}

/// The active leaf set `𝒜` of an `(N, K)` code. The frozen set is its
/// complement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateProfile {
    pub n: usize,
    pub k: usize,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design_snr_db: Option<f64>,
    pub active: Vec<usize>,
}

impl RateProfile {
    pub fn new(n: usize, active: impl IntoIterator<Item = usize>, method: Method) -> Result<Self> {
        let mut active: Vec<usize> = active.into_iter().collect();
        active.sort_unstable();
        active.dedup();
        let profile = Self { n, k: active.len(), method, design_snr_db: None, active };
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidLength("code length must be at least 1".into()));
        }
        if self.k != self.active.len() {
            return Err(Error::Format(format!("k = {} but {} active indices", self.k, self.active.len())));
        }
        if self.k > self.n {
            return Err(Error::InvalidDimension { n: self.n, k: self.k });
        }
        if self.active.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format("active indices must be strictly increasing".into()));
        }
        if self.active.last().is_some_and(|&i| i >= self.n) {
            return Err(Error::Format("active index out of range".into()));
        }
        Ok(())
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn active_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for &i in &self.active {
            mask[i] = true;
        }
        mask
    }

    pub fn frozen(&self) -> Vec<usize> {
        let mask = self.active_mask();
        (0..self.n).filter(|&i| !mask[i]).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n").map_err(|e| Error::Format(e.to_string()))
    }
}

/// Builds a profile from a construction method with the crate defaults
/// (design SNR 3 dB and rate `K/N` for GA).
pub fn construct(method: Method, n: usize, k: usize) -> Result<RateProfile> {
    match method {
        Method::Ga => construct_ga(n, k, DEFAULT_DESIGN_SNR_DB, k.max(1) as f64 / n as f64),
        Method::Mhw => construct_mhw(n, k),
        Method::Pw => construct_pw(n, k),
        Method::Custom => Err(Error::InvalidParameter("custom profiles are not constructed".into())),
    }
}

/// Keeps the `k` most reliable leaves. `less_reliable(a, b)` orders leaf
/// indices by ascending reliability; remaining ties go to the higher index.
pub(crate) fn select_most_reliable(
    n: usize,
    k: usize,
    mut less_reliable: impl FnMut(usize, usize) -> Ordering,
) -> Result<Vec<usize>> {
    if k > n {
        return Err(Error::InvalidDimension { n, k });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| less_reliable(a, b).then(a.cmp(&b)));
    let mut active = order.split_off(n - k);
    active.sort_unstable();
    Ok(active)
}
