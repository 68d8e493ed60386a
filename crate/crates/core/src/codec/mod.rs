//! Encoding and successive-cancellation decoding over the coding tree.

mod crc;
mod list;
mod llr;
mod partition;
mod single;

pub use crc::CrcConfig;
pub use list::DecodedPath;
pub use llr::{f_func, f_min_sum, g_func, pm_increment, FRule};
pub use partition::{LeafCodebook, Partition, Segment, MAX_CODEBOOK_DIMENSION};

pub(crate) use list::ListDecoder;
pub(crate) use single::SinglePath;

use std::ops::AddAssign;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::construction::RateProfile;
use crate::error::{Error, Result};
use crate::tree::CodingTree;

/// LLR operations performed by a decoder: `f`, `g`, and odd-split copies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounter {
    pub f_ops: u64,
    pub g_ops: u64,
    pub copy_ops: u64,
}

impl OpCounter {
    pub fn total(&self) -> u64 {
        self.f_ops + self.g_ops + self.copy_ops
    }
}

impl AddAssign for OpCounter {
    fn add_assign(&mut self, rhs: Self) {
        self.f_ops += rhs.f_ops;
        self.g_ops += rhs.g_ops;
        self.copy_ops += rhs.copy_ops;
    }
}

/// Result of CRC-aided list decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrcDecoded {
    pub data: Vec<u8>,
    pub crc_ok: bool,
}

/// Picks the first path (in metric order) whose CRC checks, else the best one.
pub(crate) fn select_crc(paths: &[DecodedPath], crc: &CrcConfig) -> CrcDecoded {
    let k = paths[0].bits.len() - crc.len();
    match paths.iter().find(|p| crc.check(&p.bits)) {
        Some(p) => CrcDecoded { data: p.bits[..k].to_vec(), crc_ok: true },
        None => CrcDecoded { data: paths[0].bits[..k].to_vec(), crc_ok: false },
    }
}

pub(crate) fn check_list_size(list_size: usize) -> Result<()> {
    if list_size == 0 {
        return Err(Error::InvalidParameter("list size must be at least 1".into()));
    }
    Ok(())
}

/// A rate profile bound to its coding tree. Cheap to clone.
#[derive(Debug, Clone)]
pub struct PolarCode {
    tree: Arc<CodingTree>,
    profile: RateProfile,
    active_mask: Vec<bool>,
    leaves: Arc<Partition>,
    f_rule: FRule,
}

impl PolarCode {
    pub fn new(profile: RateProfile) -> Result<Self> {
        profile.validate()?;
        let tree = CodingTree::new(profile.n)?;
        let active_mask = profile.active_mask();
        let leaves = Partition::leaves(&tree, &active_mask)?;
        Ok(Self { tree: Arc::new(tree), profile, active_mask, leaves: Arc::new(leaves), f_rule: FRule::Exact })
    }

    pub fn with_f_rule(mut self, rule: FRule) -> Self {
        self.f_rule = rule;
        self
    }

    pub fn f_rule(&self) -> FRule {
        self.f_rule
    }

    pub fn tree(&self) -> &CodingTree {
        &self.tree
    }

    pub fn profile(&self) -> &RateProfile {
        &self.profile
    }

    pub fn active_mask(&self) -> &[bool] {
        &self.active_mask
    }

    pub fn n(&self) -> usize {
        self.profile.n
    }

    pub fn k(&self) -> usize {
        self.profile.k
    }

    /// Leaf labels: data on active leaves in ascending order, zero elsewhere.
    pub fn leaf_labels(&self, data: &[u8]) -> Result<Vec<u8>> {
        if data.len() != self.k() {
            return Err(Error::InvalidInput(format!("expected {} data bits, got {}", self.k(), data.len())));
        }
        let mut w = vec![0u8; self.n()];
        for (&i, &b) in self.profile.active.iter().zip(data) {
            if b > 1 {
                return Err(Error::InvalidInput(format!("bit value {b}")));
            }
            w[i] = b;
        }
        Ok(w)
    }

    pub fn encode(&self, data: &[u8]) -> Result<Vec<u8>> {
        self.tree.encode_leaves(&self.leaf_labels(data)?)
    }

    /// Encodes `data ‖ crc(data)`; the profile must have `|data| + c` active leaves.
    pub fn encode_with_crc(&self, data: &[u8], crc: &CrcConfig) -> Result<Vec<u8>> {
        self.check_crc_size(crc)?;
        if data.len() + crc.len() != self.k() {
            return Err(Error::InvalidInput(format!(
                "expected {} data bits, got {}",
                self.k() - crc.len(),
                data.len()
            )));
        }
        self.encode(&crc.attach(data))
    }

    fn check_llrs(&self, llrs: &[f64]) -> Result<()> {
        if llrs.len() != self.n() {
            return Err(Error::InvalidInput(format!("expected {} LLRs, got {}", self.n(), llrs.len())));
        }
        Ok(())
    }

    fn check_crc_size(&self, crc: &CrcConfig) -> Result<()> {
        if self.k() < crc.len() {
            return Err(Error::InvalidInput(format!(
                "profile has {} active leaves, fewer than the {}-bit CRC",
                self.k(),
                crc.len()
            )));
        }
        Ok(())
    }

    pub fn sc_decode(&self, llrs: &[f64], counter: &mut OpCounter) -> Result<Vec<u8>> {
        self.check_llrs(llrs)?;
        let run = SinglePath::run(&self.tree, &self.leaves, self.f_rule, llrs);
        *counter += run.ops;
        Ok(run.word)
    }

    /// All surviving paths, best first.
    pub fn scl_decode_paths(
        &self,
        llrs: &[f64],
        list_size: usize,
        counter: &mut OpCounter,
    ) -> Result<Vec<DecodedPath>> {
        check_list_size(list_size)?;
        self.check_llrs(llrs)?;
        let (paths, ops) = ListDecoder::run(&self.tree, &self.leaves, self.f_rule, list_size, llrs);
        *counter += ops;
        Ok(paths)
    }

    pub fn scl_decode(&self, llrs: &[f64], list_size: usize, counter: &mut OpCounter) -> Result<Vec<u8>> {
        Ok(self.scl_decode_paths(llrs, list_size, counter)?.swap_remove(0).bits)
    }

    pub fn ca_scl_decode(
        &self,
        llrs: &[f64],
        list_size: usize,
        crc: &CrcConfig,
        counter: &mut OpCounter,
    ) -> Result<CrcDecoded> {
        self.check_crc_size(crc)?;
        let paths = self.scl_decode_paths(llrs, list_size, counter)?;
        Ok(select_crc(&paths, crc))
    }

    /// LLR operations of one SC traversal (`Σ ℓ` over internal nodes).
    pub fn sc_op_count(&self) -> u64 {
        self.leaves.llr_op_count(&self.tree)
    }
}
