//! A partition of the leaf range into decoding segments. Each segment is a
//! tree node decided as a whole against the codebook of its local code.

use crate::error::{Error, Result};
use crate::tree::{CodingTree, NodeId};

/// Largest local dimension whose codebook we are willing to enumerate.
pub const MAX_CODEBOOK_DIMENSION: usize = 20;

/// All codewords of a node's local code, ordered by information pattern.
/// The first active leaf under the node is the most significant pattern bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafCodebook {
    pub len: usize,
    pub dimension: usize,
    pub codewords: Vec<Vec<u8>>,
    pub weights: Vec<usize>,
    /// Support of each codeword, as positions within the node.
    pub(crate) supports: Vec<Vec<u32>>,
}

impl LeafCodebook {
    /// `active_local` lists the active leaf positions relative to the node.
    pub fn enumerate(len: usize, active_local: &[usize]) -> Result<Self> {
        let dimension = active_local.len();
        if dimension > MAX_CODEBOOK_DIMENSION {
            return Err(Error::InvalidParameter(format!(
                "local dimension {dimension} exceeds the enumeration limit {MAX_CODEBOOK_DIMENSION}"
            )));
        }
        let tree = CodingTree::new(len)?;
        let size = 1usize << dimension;
        let mut codewords = Vec::with_capacity(size);
        let mut leaves = vec![0u8; len];
        for pattern in 0..size {
            for (j, &pos) in active_local.iter().enumerate() {
                leaves[pos] = ((pattern >> (dimension - 1 - j)) & 1) as u8;
            }
            codewords.push(tree.encode_leaves(&leaves)?);
        }
        let supports: Vec<Vec<u32>> = codewords
            .iter()
            .map(|c| c.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| i as u32).collect())
            .collect();
        let weights = supports.iter().map(Vec::len).collect();
        Ok(Self { len, dimension, codewords, weights, supports })
    }

    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    /// Bit `j` of information pattern `p`.
    #[inline]
    pub(crate) fn pattern_bit(&self, pattern: usize, j: usize) -> u8 {
        ((pattern >> (self.dimension - 1 - j)) & 1) as u8
    }

    /// `Σ_{j ∈ supp c} α_j`: lower is more likely. The ML choice minimises it.
    #[inline]
    pub(crate) fn support_sum(&self, index: usize, alpha: &[f64]) -> f64 {
        self.supports[index].iter().map(|&j| alpha[j as usize]).sum()
    }

    /// Index of the most likely codeword; ties go to the smallest pattern.
    pub(crate) fn ml_index(&self, alpha: &[f64]) -> usize {
        let mut best = 0;
        let mut best_sum = self.support_sum(0, alpha);
        for c in 1..self.size() {
            let s = self.support_sum(c, alpha);
            if s < best_sum {
                best = c;
                best_sum = s;
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub node: NodeId,
    pub codebook: LeafCodebook,
    /// Index into the decoded word for each active leaf under the node.
    pub data_positions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    segments: Vec<Segment>,
    segment_of: Vec<Option<usize>>,
    word_len: usize,
}

impl Partition {
    /// `nodes` must be listed left to right and tile `[0, N)`.
    pub fn new(tree: &CodingTree, active_mask: &[bool], nodes: &[NodeId]) -> Result<Self> {
        let mut data_index = vec![usize::MAX; tree.len()];
        let mut word_len = 0;
        for (i, &a) in active_mask.iter().enumerate() {
            if a {
                data_index[i] = word_len;
                word_len += 1;
            }
        }
        let mut segment_of = vec![None; tree.nodes().len()];
        let mut segments = Vec::with_capacity(nodes.len());
        let mut cursor = 0;
        for &id in nodes {
            let node = tree.node(id);
            if node.span_start != cursor {
                return Err(Error::InvalidParameter("decoding nodes do not tile the leaf range".into()));
            }
            cursor += node.len;
            let active_local: Vec<usize> =
                node.span().filter(|&i| active_mask[i]).map(|i| i - node.span_start).collect();
            let data_positions = active_local.iter().map(|&p| data_index[node.span_start + p]).collect();
            segment_of[id] = Some(segments.len());
            segments.push(Segment {
                node: id,
                codebook: LeafCodebook::enumerate(node.len, &active_local)?,
                data_positions,
            });
        }
        if cursor != tree.len() {
            return Err(Error::InvalidParameter("decoding nodes do not tile the leaf range".into()));
        }
        Ok(Self { segments, segment_of, word_len })
    }

    /// One segment per leaf: plain successive cancellation.
    pub fn leaves(tree: &CodingTree, active_mask: &[bool]) -> Result<Self> {
        Self::new(tree, active_mask, tree.leaf_order())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    #[inline]
    pub(crate) fn segment_at(&self, node: NodeId) -> Option<&Segment> {
        self.segment_of[node].map(|s| &self.segments[s])
    }

    /// Number of decoded bits (active leaves).
    pub fn word_len(&self) -> usize {
        self.word_len
    }

    /// LLR operations of one traversal: `ℓ` per internal node above the
    /// segments (`⌈ℓ/2⌉` f or copy, `⌊ℓ/2⌋` g).
    pub fn llr_op_count(&self, tree: &CodingTree) -> u64 {
        let mut total = 0;
        let mut stack = vec![tree.root()];
        while let Some(id) = stack.pop() {
            if self.segment_of[id].is_some() {
                continue;
            }
            let node = tree.node(id);
            let (l, r) = node.children.expect("segments cover every leaf");
            total += node.len as u64;
            stack.push(l);
            stack.push(r);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codebook_examples() {
        let frozen = LeafCodebook::enumerate(3, &[]).unwrap();
        assert_eq!(frozen.codewords, vec![vec![0, 0, 0]]);
        let rep = LeafCodebook::enumerate(2, &[1]).unwrap();
        assert_eq!(rep.codewords, vec![vec![0, 0], vec![1, 1]]);
        let full = LeafCodebook::enumerate(2, &[0, 1]).unwrap();
        assert_eq!(full.codewords, vec![vec![0, 0], vec![1, 1], vec![1, 0], vec![0, 1]]);
        assert_eq!(full.weights, vec![0, 2, 1, 1]);
    }

    #[test]
    fn codebooks_are_linear() {
        for len in 1..=9 {
            for mask in 0u32..(1 << len) {
                let active: Vec<usize> = (0..len).filter(|&i| mask >> i & 1 == 1).collect();
                let cb = LeafCodebook::enumerate(len, &active).unwrap();
                assert_eq!(cb.size(), 1 << active.len());
                let set: std::collections::HashSet<_> = cb.codewords.iter().cloned().collect();
                assert_eq!(set.len(), cb.size(), "codewords distinct");
                assert!(set.contains(&vec![0; len]));
                for a in &cb.codewords {
                    for b in &cb.codewords {
                        let s: Vec<u8> = a.iter().zip(b).map(|(x, y)| x ^ y).collect();
                        assert!(set.contains(&s));
                    }
                }
            }
        }
    }

    #[test]
    fn ml_ties_pick_smallest_pattern() {
        let full = LeafCodebook::enumerate(2, &[0, 1]).unwrap();
        assert_eq!(full.ml_index(&[0.0, 0.0]), 0);
        assert_eq!(full.ml_index(&[-1.0, 2.0]), 2);
        assert_eq!(full.ml_index(&[-1.0, -2.0]), 1);
    }

    #[test]
    fn tiling_is_checked() {
        let tree = CodingTree::new(6).unwrap();
        let mask = vec![true; 6];
        let (l, _) = tree.node(0).children.unwrap();
        assert!(Partition::new(&tree, &mask, &[l]).is_err());
        assert_eq!(Partition::new(&tree, &mask, &[0]).unwrap().llr_op_count(&tree), 0);
        assert_eq!(Partition::leaves(&tree, &mask).unwrap().llr_op_count(&tree), 6 + 3 + 3 + 2 + 2);
    }
}
