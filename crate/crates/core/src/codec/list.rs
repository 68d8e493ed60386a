//! List successive decoding over a partition (SCL or PSCL).

use super::partition::{Partition, Segment};
use super::single::{depth_offsets, left_llrs, right_llrs};
use super::{pm_increment, FRule, OpCounter};
use crate::tree::{combine_span, CodingTree, NodeId};

/// A surviving path at the end of list decoding.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedPath {
    pub bits: Vec<u8>,
    pub metric: f64,
}

#[derive(Clone)]
struct PathState {
    llr: Vec<f64>,
    beta: Vec<u8>,
    word: Vec<u8>,
    metric: f64,
}

struct Candidate {
    metric: f64,
    parent: usize,
    codeword: usize,
}

pub(crate) struct ListDecoder<'a> {
    tree: &'a CodingTree,
    partition: &'a Partition,
    rule: FRule,
    list_size: usize,
    offsets: Vec<usize>,
    channel: &'a [f64],
    slots: Vec<PathState>,
    live: Vec<usize>,
    pub ops: OpCounter,
}

impl<'a> ListDecoder<'a> {
    /// Returns the final paths sorted by metric (ties keep creation order).
    pub fn run(
        tree: &'a CodingTree,
        partition: &'a Partition,
        rule: FRule,
        list_size: usize,
        channel: &'a [f64],
    ) -> (Vec<DecodedPath>, OpCounter) {
        let (offsets, total) = depth_offsets(tree);
        let root = PathState {
            llr: vec![0.0; total],
            beta: vec![0; tree.len()],
            word: vec![0; partition.word_len()],
            metric: 0.0,
        };
        let mut dec = Self {
            tree,
            partition,
            rule,
            list_size,
            offsets,
            channel,
            slots: vec![root],
            live: vec![0],
            ops: OpCounter::default(),
        };
        dec.descend(tree.root());
        let mut out: Vec<DecodedPath> = dec
            .live
            .iter()
            .map(|&s| DecodedPath { bits: dec.slots[s].word.clone(), metric: dec.slots[s].metric })
            .collect();
        out.sort_by(|a, b| a.metric.total_cmp(&b.metric));
        (out, dec.ops)
    }

    fn alpha<'s>(channel: &'s [f64], path: &'s PathState, offsets: &[usize], depth: usize, len: usize) -> &'s [f64] {
        if depth == 0 {
            &channel[..len]
        } else {
            &path.llr[offsets[depth]..offsets[depth] + len]
        }
    }

    fn descend(&mut self, id: NodeId) {
        let partition = self.partition;
        if let Some(seg) = partition.segment_at(id) {
            self.extend(id, seg);
            return;
        }
        let node = self.tree.node(id);
        let (l, r) = node.children.expect("segments cover every leaf");
        let la = self.tree.node(l).len;
        let lb = self.tree.node(r).len;
        let (d, len, start) = (node.depth, node.len, node.span_start);
        let dst = self.offsets[d + 1];

        for (n, &s) in self.live.iter().enumerate() {
            let mut ops = OpCounter::default();
            let path = &mut self.slots[s];
            if d == 0 {
                left_llrs(&self.channel[..len], la, lb, &mut path.llr[dst..], self.rule, &mut ops);
            } else {
                let (src, out) = path.llr.split_at_mut(dst);
                left_llrs(&src[self.offsets[d]..self.offsets[d] + len], la, lb, out, self.rule, &mut ops);
            }
            if n == 0 {
                self.ops += ops;
            }
        }
        self.descend(l);

        for (n, &s) in self.live.iter().enumerate() {
            let mut ops = OpCounter::default();
            let path = &mut self.slots[s];
            let beta_left = &path.beta[start..start + la];
            if d == 0 {
                right_llrs(&self.channel[..len], beta_left, la, lb, &mut path.llr[dst..], &mut ops);
            } else {
                let (src, out) = path.llr.split_at_mut(dst);
                right_llrs(&src[self.offsets[d]..self.offsets[d] + len], beta_left, la, lb, out, &mut ops);
            }
            if n == 0 {
                self.ops += ops;
            }
        }
        self.descend(r);

        for &s in &self.live {
            combine_span(&mut self.slots[s].beta[start..start + len]);
        }
    }

    fn extend(&mut self, id: NodeId, seg: &Segment) {
        let node = self.tree.node(id);
        let (d, len, start) = (node.depth, node.len, node.span_start);
        let cb = &seg.codebook;

        let mut cands = Vec::with_capacity(self.live.len() * cb.size());
        for &s in &self.live {
            let path = &self.slots[s];
            let alpha = Self::alpha(self.channel, path, &self.offsets, d, len);
            for (c, word) in cb.codewords.iter().enumerate() {
                let inc: f64 = alpha.iter().zip(word).map(|(&a, &b)| pm_increment(a, b)).sum();
                cands.push(Candidate { metric: path.metric + inc, parent: s, codeword: c });
            }
        }
        if cands.len() > self.list_size {
            // stable: equal metrics keep creation order
            let mut order: Vec<usize> = (0..cands.len()).collect();
            order.sort_by(|&a, &b| cands[a].metric.total_cmp(&cands[b].metric));
            order.truncate(self.list_size);
            order.sort_unstable();
            let mut keep = order.into_iter().peekable();
            let mut i = 0;
            cands.retain(|_| {
                let hit = keep.peek() == Some(&i);
                if hit {
                    keep.next();
                }
                i += 1;
                hit
            });
        }

        // Slot assignment: a parent's first survivor reuses its slot, the
        // rest take slots freed by dead parents or fresh ones.
        let mut survivors = vec![0usize; self.slots.len()];
        for c in &cands {
            survivors[c.parent] += 1;
        }
        let mut free: Vec<usize> = self.live.iter().copied().filter(|&s| survivors[s] == 0).collect();
        free.reverse();
        let mut claimed = vec![false; self.slots.len()];
        let mut targets = Vec::with_capacity(cands.len());
        for c in &cands {
            let slot = if !claimed[c.parent] {
                claimed[c.parent] = true;
                c.parent
            } else if let Some(slot) = free.pop() {
                let (dst, src) = pair_mut(&mut self.slots, slot, c.parent);
                dst.clone_from(src);
                slot
            } else {
                self.slots.push(self.slots[c.parent].clone());
                self.slots.len() - 1
            };
            targets.push(slot);
        }
        for (c, &slot) in cands.iter().zip(&targets) {
            let path = &mut self.slots[slot];
            path.metric = c.metric;
            path.beta[start..start + len].copy_from_slice(&cb.codewords[c.codeword]);
            for (j, &pos) in seg.data_positions.iter().enumerate() {
                path.word[pos] = cb.pattern_bit(c.codeword, j);
            }
        }
        self.live = targets;
    }
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &lo[b])
    }
}
