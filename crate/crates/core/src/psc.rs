//! Partitioned SC decoding: the coding tree is cut at every maximal node of
//! dimension at most `τ`, and each such decoding leaf is decided jointly
//! against its local codebook.

use std::sync::Arc;

use crate::codec::{
    check_list_size, select_crc, CrcConfig, CrcDecoded, DecodedPath, LeafCodebook, ListDecoder, OpCounter, Partition,
    PolarCode, SinglePath,
};
use crate::error::{Error, Result};
use crate::tree::{CodingTree, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodingLeaf {
    pub node: NodeId,
    pub len: usize,
    pub dimension: usize,
    pub span_start: usize,
}

#[derive(Debug, Clone)]
pub struct DecodingSubTree {
    code: PolarCode,
    tau: usize,
    leaves: Vec<DecodingLeaf>,
    partition: Arc<Partition>,
}

/// Number of active leaves beneath every node.
pub fn node_dimensions(tree: &CodingTree, active_mask: &[bool]) -> Vec<usize> {
    let mut dims = vec![0; tree.nodes().len()];
    for id in (0..tree.nodes().len()).rev() {
        let node = tree.node(id);
        dims[id] = match node.children {
            Some((l, r)) => dims[l] + dims[r],
            None => usize::from(active_mask[node.span_start]),
        };
    }
    dims
}

impl DecodingSubTree {
    pub fn new(code: &PolarCode, tau: usize) -> Result<Self> {
        if tau == 0 {
            return Err(Error::InvalidParameter("tau must be at least 1".into()));
        }
        let tree = code.tree();
        let dims = node_dimensions(tree, code.active_mask());
        let mut leaves = Vec::new();
        // depth-first, left before right, so leaves come out in span order
        let mut stack = vec![tree.root()];
        while let Some(id) = stack.pop() {
            let node = tree.node(id);
            match node.children {
                Some((l, r)) if dims[id] > tau => {
                    stack.push(r);
                    stack.push(l);
                }
                _ => leaves.push(DecodingLeaf {
                    node: id,
                    len: node.len,
                    dimension: dims[id],
                    span_start: node.span_start,
                }),
            }
        }
        let nodes: Vec<NodeId> = leaves.iter().map(|l| l.node).collect();
        let partition = Partition::new(tree, code.active_mask(), &nodes)?;
        Ok(Self { code: code.clone(), tau, leaves, partition: Arc::new(partition) })
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    pub fn tree(&self) -> &CodingTree {
        self.code.tree()
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn leaves(&self) -> &[DecodingLeaf] {
        &self.leaves
    }

    pub fn codebook(&self, t: usize) -> &LeafCodebook {
        &self.partition.segments()[t].codebook
    }

    pub fn codebooks(&self) -> impl Iterator<Item = &LeafCodebook> {
        self.partition.segments().iter().map(|s| &s.codebook)
    }

    /// LLR operations of one PSC traversal; nothing is computed below a
    /// decoding leaf.
    pub fn llr_op_count(&self) -> u64 {
        self.partition.llr_op_count(self.tree())
    }

    fn check_llrs(&self, llrs: &[f64]) -> Result<()> {
        if llrs.len() != self.code.n() {
            return Err(Error::InvalidInput(format!("expected {} LLRs, got {}", self.code.n(), llrs.len())));
        }
        Ok(())
    }

    pub fn psc_decode(&self, llrs: &[f64], counter: &mut OpCounter) -> Result<Vec<u8>> {
        Ok(self.psc_decode_with_codeword(llrs, counter)?.0)
    }

    /// Data bits plus the estimated codeword (root HBE).
    pub fn psc_decode_with_codeword(&self, llrs: &[f64], counter: &mut OpCounter) -> Result<(Vec<u8>, Vec<u8>)> {
        self.check_llrs(llrs)?;
        let run = SinglePath::run(self.tree(), &self.partition, self.code.f_rule(), llrs);
        *counter += run.ops;
        Ok((run.word, run.beta))
    }

    pub fn pscl_decode_paths(
        &self,
        llrs: &[f64],
        list_size: usize,
        counter: &mut OpCounter,
    ) -> Result<Vec<DecodedPath>> {
        check_list_size(list_size)?;
        self.check_llrs(llrs)?;
        let (paths, ops) = ListDecoder::run(self.tree(), &self.partition, self.code.f_rule(), list_size, llrs);
        *counter += ops;
        Ok(paths)
    }

    pub fn pscl_decode(&self, llrs: &[f64], list_size: usize, counter: &mut OpCounter) -> Result<Vec<u8>> {
        Ok(self.pscl_decode_paths(llrs, list_size, counter)?.swap_remove(0).bits)
    }

    pub fn ca_pscl_decode(
        &self,
        llrs: &[f64],
        list_size: usize,
        crc: &CrcConfig,
        counter: &mut OpCounter,
    ) -> Result<CrcDecoded> {
        if self.code.k() < crc.len() {
            return Err(Error::InvalidInput(format!(
                "profile has {} active leaves, fewer than the {}-bit CRC",
                self.code.k(),
                crc.len()
            )));
        }
        let paths = self.pscl_decode_paths(llrs, list_size, counter)?;
        Ok(select_crc(&paths, crc))
    }
}

pub fn extract_subtree(code: &PolarCode, tau: usize) -> Result<DecodingSubTree> {
    DecodingSubTree::new(code, tau)
}
