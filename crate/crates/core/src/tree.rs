//! Balanced binary coding tree and the length-adaptive `(U+V | V)` combine.
//!
//! A node of length `ℓ ≥ 2` has a left child of length `⌈ℓ/2⌉` and a right
//! child of length `⌊ℓ/2⌋`. Nodes are stored in level order with the root at
//! index 0. Every node also records the span of leaf indices beneath it, so a
//! node's label occupies `span_start .. span_start + len` of the leaf-order
//! vector and encoding/decoding can combine children in place.

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub len: usize,
    pub depth: usize,
    pub parent: Option<NodeId>,
    pub children: Option<(NodeId, NodeId)>,
    pub leaf_index: Option<usize>,
    /// First leaf index covered by this node.
    pub span_start: usize,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    pub fn span(&self) -> std::ops::Range<usize> {
        self.span_start..self.span_start + self.len
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingTree {
    n: usize,
    nodes: Vec<Node>,
    leaf_order: Vec<NodeId>,
    height: usize,
}

impl CodingTree {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLength("code length must be at least 1".into()));
        }
        let mut nodes = vec![Node { len: n, depth: 0, parent: None, children: None, leaf_index: None, span_start: 0 }];
        let mut next = 0;
        while next < nodes.len() {
            let Node { len, depth, span_start, .. } = nodes[next];
            if len >= 2 {
                let left = nodes.len();
                let left_len = len.div_ceil(2);
                for (child_len, start) in [(left_len, span_start), (len / 2, span_start + left_len)] {
                    nodes.push(Node {
                        len: child_len,
                        depth: depth + 1,
                        parent: Some(next),
                        children: None,
                        leaf_index: None,
                        span_start: start,
                    });
                }
                nodes[next].children = Some((left, left + 1));
            }
            next += 1;
        }

        let mut leaf_order = vec![0; n];
        let mut height = 0;
        for (id, node) in nodes.iter_mut().enumerate() {
            if node.len == 1 {
                node.leaf_index = Some(node.span_start);
                leaf_order[node.span_start] = id;
                height = height.max(node.depth);
            }
        }
        Ok(Self { n, nodes, leaf_order, height })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Leaf node ids, left to right.
    pub fn leaf_order(&self) -> &[NodeId] {
        &self.leaf_order
    }

    pub fn leaf_node(&self, leaf: usize) -> NodeId {
        self.leaf_order[leaf]
    }

    /// Largest node length found at each depth (`⌈N / 2^d⌉`).
    pub fn max_len_per_depth(&self) -> Vec<usize> {
        let mut caps = vec![0; self.height + 1];
        for node in &self.nodes {
            caps[node.depth] = caps[node.depth].max(node.len);
        }
        caps
    }

    /// Root-to-leaf branch labels of every leaf, left to right.
    pub fn leaf_paths(&self) -> Vec<LeafPath> {
        self.leaf_order.iter().map(|&id| self.path_to(id)).collect()
    }

    pub fn path_to(&self, mut id: NodeId) -> LeafPath {
        let mut labels = Vec::with_capacity(self.nodes[id].depth);
        while let Some(parent) = self.nodes[id].parent {
            let (left, _) = self.nodes[parent].children.expect("parent has children");
            labels.push(u8::from(id != left));
            id = parent;
        }
        labels.reverse();
        LeafPath(labels)
    }

    /// Labels every node from the leaf labels by combining children bottom-up
    /// (reverse level order), in place. Returns the root label.
    pub fn encode_leaves(&self, leaf_labels: &[u8]) -> Result<Vec<u8>> {
        if leaf_labels.len() != self.n {
            return Err(Error::InvalidInput(format!("expected {} leaf labels, got {}", self.n, leaf_labels.len())));
        }
        let mut word = leaf_labels.to_vec();
        self.combine_in_place(&mut word);
        Ok(word)
    }

    /// Pushes a per-position quantity from the root to every node using the
    /// decoder's LLR update pattern: left positions pair `i` with `⌈ℓ/2⌉+i`
    /// through `f` (the unpaired last position of an odd node is copied),
    /// right positions through `g`. Returns one vector per node.
    pub fn propagate<T: Copy>(&self, root: Vec<T>, f: impl Fn(T, T) -> T, g: impl Fn(T, T) -> T) -> Vec<Vec<T>> {
        assert_eq!(root.len(), self.n, "root vector length");
        let mut out: Vec<Vec<T>> = vec![Vec::new(); self.nodes.len()];
        out[0] = root;
        // level order: parents are always filled before their children
        for id in 0..self.nodes.len() {
            let Some((l, r)) = self.nodes[id].children else { continue };
            let parent = &out[id];
            let la = self.nodes[l].len;
            let lb = self.nodes[r].len;
            let mut left: Vec<T> = (0..lb).map(|i| f(parent[i], parent[la + i])).collect();
            if la > lb {
                left.push(parent[la - 1]);
            }
            let right: Vec<T> = (0..lb).map(|i| g(parent[i], parent[la + i])).collect();
            out[l] = left;
            out[r] = right;
        }
        out
    }

    pub(crate) fn combine_in_place(&self, word: &mut [u8]) {
        for node in self.nodes.iter().rev() {
            if node.children.is_some() {
                combine_span(&mut word[node.span()]);
            }
        }
    }
}

/// Branch labels from the root to a leaf: 0 = left, 1 = right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeafPath(pub Vec<u8>);

impl LeafPath {
    pub fn labels(&self) -> &[u8] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

/// In-place form of [`combine`]: `v` holds `(v_l, v_r)` on entry and
/// `(v_l ⊕ v_r, v_r)` on exit.
#[inline]
pub(crate) fn combine_span(v: &mut [u8]) {
    let left = v.len().div_ceil(2);
    let right = v.len() / 2;
    for i in 0..right {
        v[i] ^= v[left + i];
    }
}

/// Parent label `(v_l ⊕ v_r, v_r)`; when `v_l` is one longer its last bit
/// passes through unchanged.
pub fn combine(left: &[u8], right: &[u8]) -> Result<Vec<u8>> {
    if left.is_empty() || right.is_empty() || !(left.len() == right.len() || left.len() == right.len() + 1) {
        return Err(Error::InvalidPair { left: left.len(), right: right.len() });
    }
    let mut v = Vec::with_capacity(left.len() + right.len());
    v.extend_from_slice(left);
    v.extend_from_slice(right);
    combine_span(&mut v);
    Ok(v)
}

/// Exact inverse of [`combine`].
pub fn split(v: &[u8]) -> Result<(Vec<u8>, Vec<u8>)> {
    if v.len() < 2 {
        return Err(Error::InvalidLength(format!("cannot split a vector of length {}", v.len())));
    }
    let mut w = v.to_vec();
    // xor is its own inverse
    combine_span(&mut w);
    let right = w.split_off(v.len().div_ceil(2));
    Ok((w, right))
}
