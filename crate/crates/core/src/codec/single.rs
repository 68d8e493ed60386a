//! Single-path successive decoding over a partition (SC or PSC).

use super::partition::Partition;
use super::{FRule, OpCounter};
use crate::tree::{combine_span, CodingTree, NodeId};

/// Scratch layout: one LLR block per depth `1..=height`.
pub(crate) fn depth_offsets(tree: &CodingTree) -> (Vec<usize>, usize) {
    let caps = tree.max_len_per_depth();
    let mut offsets = vec![0; caps.len() + 1];
    for d in 1..caps.len() {
        offsets[d + 1] = offsets[d] + caps[d];
    }
    let total = offsets[caps.len()];
    (offsets, total)
}

/// Left-child LLRs: `f` on the paired positions, pass-through for odd `ℓ`.
#[inline]
pub(crate) fn left_llrs(alpha: &[f64], la: usize, lb: usize, out: &mut [f64], rule: FRule, ops: &mut OpCounter) {
    for i in 0..lb {
        out[i] = rule.apply(alpha[i], alpha[la + i]);
    }
    ops.f_ops += lb as u64;
    if la > lb {
        out[la - 1] = alpha[la - 1];
        ops.copy_ops += 1;
    }
}

#[inline]
pub(crate) fn right_llrs(alpha: &[f64], beta_left: &[u8], la: usize, lb: usize, out: &mut [f64], ops: &mut OpCounter) {
    for i in 0..lb {
        out[i] = super::g_func(alpha[i], alpha[la + i], beta_left[i]);
    }
    ops.g_ops += lb as u64;
}

pub(crate) struct SinglePath<'a> {
    tree: &'a CodingTree,
    partition: &'a Partition,
    rule: FRule,
    pub ops: OpCounter,
    pub word: Vec<u8>,
    pub beta: Vec<u8>,
}

impl<'a> SinglePath<'a> {
    pub fn run(tree: &'a CodingTree, partition: &'a Partition, rule: FRule, llrs: &[f64]) -> Self {
        let (offsets, total) = depth_offsets(tree);
        let mut scratch = vec![0.0; total];
        let mut state = Self {
            tree,
            partition,
            rule,
            ops: OpCounter::default(),
            word: vec![0; partition.word_len()],
            beta: vec![0; tree.len()],
        };
        let mut beta = std::mem::take(&mut state.beta);
        state.descend(tree.root(), llrs, &mut scratch, &offsets, &mut beta);
        state.beta = beta;
        state
    }

    fn descend(&mut self, id: NodeId, alpha: &[f64], scratch: &mut [f64], offsets: &[usize], beta: &mut [u8]) {
        let partition = self.partition;
        if let Some(seg) = partition.segment_at(id) {
            let cb = &seg.codebook;
            let best = cb.ml_index(alpha);
            beta.copy_from_slice(&cb.codewords[best]);
            for (j, &pos) in seg.data_positions.iter().enumerate() {
                self.word[pos] = cb.pattern_bit(best, j);
            }
            return;
        }
        let node = self.tree.node(id);
        let (l, r) = node.children.expect("segments cover every leaf");
        let la = self.tree.node(l).len;
        let lb = self.tree.node(r).len;
        let depth = node.depth + 1;
        let block = offsets[depth + 1] - offsets[depth];
        let (child, deeper) = scratch.split_at_mut(block);
        left_llrs(alpha, la, lb, child, self.rule, &mut self.ops);
        self.descend(l, &child[..la], deeper, offsets, &mut beta[..la]);
        right_llrs(alpha, &beta[..la], la, lb, child, &mut self.ops);
        self.descend(r, &child[..lb], deeper, offsets, &mut beta[la..]);
        combine_span(beta);
    }
}
