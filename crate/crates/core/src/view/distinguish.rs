//! Shortest port paths that tell two typed nodes apart.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::graph::{Port, PortGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("node {0} has no a/b/c/d type label")]
    MissingType(usize),
    #[error("start nodes must differ (got {0} twice)")]
    SameNode(usize),
}

/// The type letter of a node: the first character of its label, if it is
/// one of `a`, `b`, `c`, `d`.
pub fn node_type(g: &PortGraph, u: usize) -> Option<char> {
    g.label(u).and_then(|l| l.chars().next()).filter(|c| matches!(c, 'a'..='d'))
}

/// A shortest port sequence whose walks from `x` and from `y` pass through
/// different type sequences. Only ports present at both current nodes are
/// followed. Searches up to length `cap` (default `2n`).
pub fn shortest_distinguishing_path(
    g: &PortGraph,
    x: usize,
    y: usize,
    cap: Option<usize>,
) -> Result<Option<Vec<Port>>, PathError> {
    if x == y {
        return Err(PathError::SameNode(x));
    }
    let mut types = Vec::with_capacity(g.node_count());
    for u in g.nodes() {
        types.push(node_type(g, u).ok_or(PathError::MissingType(u))?);
    }
    let cap = cap.unwrap_or(2 * g.node_count());

    let mut seen = HashSet::from([(x, y)]);
    let mut queue = VecDeque::from([((x, y), Vec::new())]);
    while let Some(((a, b), path)) = queue.pop_front() {
        if types[a] != types[b] {
            return Ok(Some(path));
        }
        if path.len() == cap {
            continue;
        }
        let shared = g.degree(a).min(g.degree(b));
        for p in 0..shared as Port {
            let (a2, _) = g.neighbor(a, p);
            let (b2, _) = g.neighbor(b, p);
            if seen.insert((a2, b2)) {
                let mut next = path.clone();
                next.push(p);
                queue.push_back(((a2, b2), next));
            }
        }
    }
    Ok(None)
}
