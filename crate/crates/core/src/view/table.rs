//! Hash-consed views.
//!
//! A depth-`t` view is interned as its degree plus, per local port, the
//! remote port and the interned depth-`t-1` view of the neighbor. Two views
//! get the same [`ViewClassId`] exactly when they are equal as trees, so the
//! id of a node's depth-`t` view names its class in the partition at depth `t`.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::tree::{canonical_encode, ViewChild, ViewError, ViewTree};
use crate::graph::Port;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ViewClassId(pub u32);

impl ViewClassId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ViewNode {
    pub depth: u32,
    pub degree: u32,
    /// `(remote_port, child)` per local port; empty at depth 0.
    pub children: Box<[(Port, ViewClassId)]>,
}

/// Intern table shared by everything that computes views of one or more
/// graphs. Single-writer: callers serialize access.
#[derive(Debug, Default)]
pub struct ViewTable {
    nodes: Vec<ViewNode>,
    index: HashMap<ViewNode, ViewClassId>,
    truncated: HashMap<(ViewClassId, u32), ViewClassId>,
    order: HashMap<(ViewClassId, ViewClassId), Ordering>,
    encoded_len: HashMap<ViewClassId, u128>,
}

impl ViewTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn intern(&mut self, node: ViewNode) -> ViewClassId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = ViewClassId(u32::try_from(self.nodes.len()).expect("intern table overflow"));
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    pub fn leaf(&mut self, degree: u32) -> ViewClassId {
        self.intern(ViewNode { depth: 0, degree, children: Box::new([]) })
    }

    /// Interns the view one level deeper than the children's views.
    pub fn inner(&mut self, degree: u32, children: Vec<(Port, ViewClassId)>) -> ViewClassId {
        debug_assert_eq!(children.len(), degree as usize);
        let depth = children.first().map_or(1, |&(_, c)| self.depth(c) + 1);
        debug_assert!(children.iter().all(|&(_, c)| self.depth(c) + 1 == depth));
        self.intern(ViewNode { depth, degree, children: children.into_boxed_slice() })
    }

    /// An inner view of a degree-0 node; its depth cannot be read off the
    /// children, so it is given explicitly.
    pub fn isolated(&mut self, depth: u32) -> ViewClassId {
        self.intern(ViewNode { depth, degree: 0, children: Box::new([]) })
    }

    pub fn node(&self, id: ViewClassId) -> &ViewNode {
        &self.nodes[id.index()]
    }

    pub fn depth(&self, id: ViewClassId) -> u32 {
        self.nodes[id.index()].depth
    }

    pub fn degree(&self, id: ViewClassId) -> u32 {
        self.nodes[id.index()].degree
    }

    pub fn children(&self, id: ViewClassId) -> &[(Port, ViewClassId)] {
        &self.nodes[id.index()].children
    }

    /// The same view cut down to depth `t` (`t` must not exceed its depth).
    pub fn truncate(&mut self, id: ViewClassId, t: u32) -> ViewClassId {
        let depth = self.depth(id);
        assert!(t <= depth, "cannot truncate a depth-{depth} view to depth {t}");
        if t == depth {
            return id;
        }
        if let Some(&hit) = self.truncated.get(&(id, t)) {
            return hit;
        }
        let node = self.node(id).clone();
        let result = if t == 0 {
            self.leaf(node.degree)
        } else if node.degree == 0 {
            self.isolated(t)
        } else {
            let children = node.children.iter().map(|&(q, c)| (q, self.truncate(c, t - 1))).collect();
            self.inner(node.degree, children)
        };
        self.truncated.insert((id, t), result);
        result
    }

    /// Canonical order: the byte order of [`canonical_encode`], computed
    /// without materializing trees.
    pub fn compare(&mut self, a: ViewClassId, b: ViewClassId) -> Result<Ordering, ViewError> {
        let (da, db) = (self.depth(a), self.depth(b));
        if da != db {
            return Err(ViewError::DepthMismatch(da, db));
        }
        Ok(self.compare_same_depth(a, b))
    }

    fn compare_same_depth(&mut self, a: ViewClassId, b: ViewClassId) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        if let Some(&o) = self.order.get(&(a, b)) {
            return o;
        }
        let (na, nb) = (self.node(a).clone(), self.node(b).clone());
        // encodings are prefix-free, so the first differing component decides
        let mut result = na.degree.cmp(&nb.degree);
        if result == Ordering::Equal {
            for (&(qa, ca), &(qb, cb)) in na.children.iter().zip(nb.children.iter()) {
                result = qa.cmp(&qb).then_with(|| self.compare_same_depth(ca, cb));
                if result != Ordering::Equal {
                    break;
                }
            }
        }
        self.order.insert((a, b), result);
        self.order.insert((b, a), result.reverse());
        result
    }

    /// The smallest view among `ids` (all of one depth).
    pub fn min_view(&mut self, ids: impl IntoIterator<Item = ViewClassId>) -> Option<ViewClassId> {
        let mut best: Option<ViewClassId> = None;
        for id in ids {
            best = Some(match best {
                Some(b) if self.compare_same_depth(b, id) != Ordering::Greater => b,
                _ => id,
            });
        }
        best
    }

    pub fn intern_tree(&mut self, tree: &ViewTree) -> ViewClassId {
        if tree.depth == 0 {
            return self.leaf(tree.degree);
        }
        if tree.degree == 0 {
            return self.isolated(tree.depth);
        }
        let children = tree.children.iter().map(|c| (c.remote_port, self.intern_tree(&c.subtree))).collect();
        self.inner(tree.degree, children)
    }

    /// Explicit tree for an interned view. Exponential in depth.
    pub fn expand(&self, id: ViewClassId) -> ViewTree {
        let node = self.node(id);
        let children = node
            .children
            .iter()
            .enumerate()
            .map(|(p, &(q, c))| ViewChild { port: p as Port, remote_port: q, subtree: self.expand(c) })
            .collect();
        ViewTree { degree: node.degree, depth: node.depth, children }
    }

    pub fn encode(&self, id: ViewClassId) -> Vec<u8> {
        canonical_encode(&self.expand(id))
    }

    /// Length of [`encode`](Self::encode)'s output without building it,
    /// saturating at `u128::MAX` for very deep views.
    pub fn encoded_len(&mut self, id: ViewClassId) -> u128 {
        if let Some(&len) = self.encoded_len.get(&id) {
            return len;
        }
        let children = self.node(id).children.clone();
        let mut len: u128 = 5;
        for &(_, child) in children.iter() {
            len = len.saturating_add(8).saturating_add(self.encoded_len(child));
        }
        self.encoded_len.insert(id, len);
        len
    }
}
