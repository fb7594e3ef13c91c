//! Explicit truncated views and their canonical byte encoding.
//!
//! Encoding (big-endian, self-delimiting):
//!
//! ```text
//! depth 0:  0x01 degree:u32
//! depth t:  0x02 degree:u32 { port:u32 remote_port:u32 <child> }*
//! ```
//!
//! Children appear in increasing local port order, so byte-lexicographic
//! order on encodings of equal depth is the DFS-lexicographic order on views.

use thiserror::Error;

use crate::graph::{Port, PortGraph};

/// Largest depth [`view_at_depth`] will expand by default.
pub const DEFAULT_EXPANSION_CAP: u32 = 16;

const LEAF_TAG: u8 = 0x01;
const INNER_TAG: u8 = 0x02;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ViewTree {
    pub degree: u32,
    /// Remaining truncation depth.
    pub depth: u32,
    /// Indexed by local port: `children[p].port == p`.
    pub children: Vec<ViewChild>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ViewChild {
    pub port: Port,
    pub remote_port: Port,
    pub subtree: ViewTree,
}

impl ViewTree {
    pub fn leaf(degree: u32) -> Self {
        ViewTree { degree, depth: 0, children: Vec::new() }
    }

    /// Number of tree nodes (for sizing explicit expansions).
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.subtree.size()).sum::<usize>()
    }

    /// Checks the structural invariants: children count equals the degree at
    /// positive depth, ports are `0..degree` in order, child depths decrease
    /// by one.
    pub fn is_well_formed(&self) -> bool {
        if self.depth == 0 {
            return self.children.is_empty();
        }
        self.children.len() == self.degree as usize
            && self
                .children
                .iter()
                .enumerate()
                .all(|(p, c)| c.port as usize == p && c.subtree.depth + 1 == self.depth && c.subtree.is_well_formed())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ViewError {
    #[error("explicit expansion to depth {requested} exceeds the cap of {cap}; use interned refinement")]
    DepthCap { requested: u32, cap: u32 },
    #[error("views of different depths ({0} and {1}) are not comparable")]
    DepthMismatch(u32, u32),
    #[error("node {0} out of range")]
    NoSuchNode(usize),
}

/// The view of `u` truncated to depth `t`, expanded explicitly.
///
/// Exponential in `t`; meant for small graphs and oracle checks.
pub fn view_at_depth(g: &PortGraph, u: usize, t: u32) -> Result<ViewTree, ViewError> {
    view_at_depth_capped(g, u, t, DEFAULT_EXPANSION_CAP)
}

pub fn view_at_depth_capped(g: &PortGraph, u: usize, t: u32, cap: u32) -> Result<ViewTree, ViewError> {
    if t > cap {
        return Err(ViewError::DepthCap { requested: t, cap });
    }
    if u >= g.node_count() {
        return Err(ViewError::NoSuchNode(u));
    }
    Ok(expand(g, u, t))
}

fn expand(g: &PortGraph, u: usize, t: u32) -> ViewTree {
    let degree = g.degree(u) as u32;
    if t == 0 {
        return ViewTree::leaf(degree);
    }
    let children = g
        .ports(u)
        .iter()
        .enumerate()
        .map(|(p, &(v, q))| ViewChild { port: p as Port, remote_port: q, subtree: expand(g, v, t - 1) })
        .collect();
    ViewTree { degree, depth: t, children }
}

pub fn canonical_encode(view: &ViewTree) -> Vec<u8> {
    let mut out = Vec::new();
    encode_into(view, &mut out);
    out
}

fn encode_into(view: &ViewTree, out: &mut Vec<u8>) {
    if view.depth == 0 {
        out.push(LEAF_TAG);
        out.extend_from_slice(&view.degree.to_be_bytes());
        return;
    }
    out.push(INNER_TAG);
    out.extend_from_slice(&view.degree.to_be_bytes());
    for child in &view.children {
        out.extend_from_slice(&child.port.to_be_bytes());
        out.extend_from_slice(&child.remote_port.to_be_bytes());
        encode_into(&child.subtree, out);
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("malformed view encoding at byte {offset}: {cause}")]
pub struct DecodeError {
    pub offset: usize,
    pub cause: &'static str,
}

/// Inverse of [`canonical_encode`] for a view of known depth.
pub fn canonical_decode(bytes: &[u8], depth: u32) -> Result<ViewTree, DecodeError> {
    let mut cursor = 0;
    let view = decode_at(bytes, &mut cursor, depth)?;
    if cursor != bytes.len() {
        return Err(DecodeError { offset: cursor, cause: "trailing bytes" });
    }
    Ok(view)
}

fn read_u32(bytes: &[u8], cursor: &mut usize) -> Result<u32, DecodeError> {
    let end = *cursor + 4;
    let chunk = bytes.get(*cursor..end).ok_or(DecodeError { offset: *cursor, cause: "truncated integer" })?;
    *cursor = end;
    Ok(u32::from_be_bytes(chunk.try_into().expect("slice of length 4")))
}

fn decode_at(bytes: &[u8], cursor: &mut usize, depth: u32) -> Result<ViewTree, DecodeError> {
    let tag = *bytes.get(*cursor).ok_or(DecodeError { offset: *cursor, cause: "missing tag" })?;
    let expected = if depth == 0 { LEAF_TAG } else { INNER_TAG };
    if tag != expected {
        return Err(DecodeError { offset: *cursor, cause: "tag does not match depth" });
    }
    *cursor += 1;
    let degree = read_u32(bytes, cursor)?;
    if depth == 0 {
        return Ok(ViewTree::leaf(degree));
    }
    let mut children = Vec::with_capacity(degree.min(1 << 16) as usize);
    for expected_port in 0..degree {
        let at = *cursor;
        let port = read_u32(bytes, cursor)?;
        if port != expected_port {
            return Err(DecodeError { offset: at, cause: "ports out of order" });
        }
        let remote_port = read_u32(bytes, cursor)?;
        let subtree = decode_at(bytes, cursor, depth - 1)?;
        children.push(ViewChild { port, remote_port, subtree });
    }
    Ok(ViewTree { degree, depth, children })
}
