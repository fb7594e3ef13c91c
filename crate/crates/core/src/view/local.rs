//! Computations a node can perform on its own interned view.
//!
//! Tree nodes at distance `d` from the root of a depth-`i` view carry
//! depth-`(i-d)` subviews. Two tree nodes at the same distance with equal
//! subviews have identical futures, so every scan here works level by level
//! on the set of distinct subview ids rather than on the (exponential) tree.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use super::table::{ViewClassId, ViewTable};
use crate::graph::{EdgeList, GraphError, Port, PortGraph};

/// Distinct subview ids at each distance `0..=max_distance` from the root.
pub fn levels(table: &ViewTable, root: ViewClassId, max_distance: u32) -> Vec<Vec<ViewClassId>> {
    let max_distance = max_distance.min(table.depth(root));
    let mut out = vec![vec![root]];
    for _ in 0..max_distance {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for &id in out.last().expect("nonempty") {
            for &(_, child) in table.children(id) {
                if seen.insert(child) {
                    next.push(child);
                }
            }
        }
        out.push(next);
    }
    out
}

/// Distinct depth-`h` views among tree nodes within distance `within` of the
/// root. Requires `within + h <= depth(root)`.
pub fn distinct_subviews(table: &mut ViewTable, root: ViewClassId, within: u32, h: u32) -> Vec<ViewClassId> {
    assert!(within + h <= table.depth(root), "subviews at distance {within} are shallower than {h}");
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for level in levels(table, root, within) {
        for id in level {
            let t = table.truncate(id, h);
            if seen.insert(t) {
                out.push(t);
            }
        }
    }
    out
}

/// The largest number, over splits `j + h = depth(root)`, of distinct
/// depth-`h` views among tree nodes within distance `j`.
pub fn max_distinct_views(table: &mut ViewTable, root: ViewClassId) -> usize {
    let depth = table.depth(root);
    let all_levels = levels(table, root, depth);
    let mut best = 0;
    for j in 0..=depth {
        let h = depth - j;
        let mut seen = HashSet::new();
        for level in &all_levels[..=j as usize] {
            for &id in level {
                seen.insert(table.truncate(id, h));
            }
        }
        best = best.max(seen.len());
    }
    best
}

/// The least port path, ordered by (length, port sequence), from the root
/// to a tree node within distance `within` whose depth-`h` view is `target`.
pub fn least_path_to(
    table: &mut ViewTable,
    root: ViewClassId,
    within: u32,
    h: u32,
    target: ViewClassId,
) -> Option<Vec<Port>> {
    assert!(within + h <= table.depth(root));
    // level entries sorted by path; first path to reach an id wins
    let mut frontier: Vec<(Vec<Port>, ViewClassId)> = vec![(Vec::new(), root)];
    for distance in 0..=within {
        for (path, id) in &frontier {
            if table.truncate(*id, h) == target {
                return Some(path.clone());
            }
        }
        if distance == within {
            break;
        }
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for (path, id) in &frontier {
            for (p, &(_, child)) in table.children(*id).iter().enumerate() {
                if seen.insert(child) {
                    let mut extended = path.clone();
                    extended.push(p as Port);
                    next.push((extended, child));
                }
            }
        }
        frontier = next;
    }
    None
}

/// The smallest depth-`h` view within distance `within`, and the least path
/// to a tree node carrying it.
pub fn elect_smallest(table: &mut ViewTable, root: ViewClassId, within: u32, h: u32) -> (ViewClassId, Vec<Port>) {
    let candidates = distinct_subviews(table, root, within, h);
    let smallest = table.min_view(candidates).expect("the root itself is a candidate");
    let path = least_path_to(table, root, within, h, smallest).expect("smallest view was seen within range");
    (smallest, path)
}

/// Least (length, port sequence) path from `src` to `dst` in a graph.
pub fn least_graph_path(g: &PortGraph, src: usize, dst: usize) -> Vec<Port> {
    let mut best: Vec<Option<Vec<Port>>> = vec![None; g.node_count()];
    best[src] = Some(Vec::new());
    let mut frontier = vec![src];
    while best[dst].is_none() {
        let mut next = Vec::new();
        for &u in &frontier {
            let base = best[u].clone().expect("frontier nodes have paths");
            for (p, &(v, _)) in g.ports(u).iter().enumerate() {
                if best[v].is_none() {
                    let mut path = base.clone();
                    path.push(p as Port);
                    best[v] = Some(path);
                    next.push(v);
                }
            }
        }
        assert!(!next.is_empty(), "graph is connected");
        frontier = next;
    }
    best[dst].take().expect("loop exits once dst is reached")
}

#[derive(Debug, Error)]
pub enum ReconstructError {
    #[error("more than {n} distinct depth-{h} views within distance {j}")]
    TooManyViews { n: usize, j: u32, h: u32 },
    #[error("representatives of one view class disagree on port {port}")]
    Inconsistent { port: Port },
    #[error("a neighbor's depth-{h} view is not among the {n} classes")]
    UnknownNeighbor { n: usize, h: u32 },
    #[error("reconstructed edges are not symmetric")]
    Asymmetric,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug)]
pub enum Reconstruction {
    NotYet,
    Graph {
        graph: PortGraph,
        /// Node of `graph` corresponding to the root.
        root: usize,
        /// Truncation depth used to name nodes.
        h: u32,
    },
}

/// Rebuilds the graph (up to isomorphism) from a view of a node of a
/// solvable `n`-node graph.
///
/// Looks for a split `j + h + 1 <= depth` such that the tree nodes within
/// distance `j` show exactly `n` distinct depth-`h` views; each such view is
/// one graph node, and its representatives' children give the edges. The
/// extra level of slack guarantees every representative's neighbors have
/// depth-`h` views of their own.
pub fn reconstruct_quotient(
    table: &mut ViewTable,
    root: ViewClassId,
    n: usize,
) -> Result<Reconstruction, ReconstructError> {
    let depth = table.depth(root);
    if depth == 0 {
        return Ok(Reconstruction::NotYet);
    }
    let all_levels = levels(table, root, depth - 1);
    for j in 0..depth {
        let h = depth - 1 - j;
        let mut class: HashMap<ViewClassId, usize> = HashMap::new();
        let mut reps: Vec<(ViewClassId, usize)> = Vec::new();
        for level in &all_levels[..=j as usize] {
            for &id in level {
                let t = table.truncate(id, h);
                let next = class.len();
                let c = *class.entry(t).or_insert(next);
                reps.push((id, c));
            }
        }
        if class.len() > n {
            return Err(ReconstructError::TooManyViews { n, j, h });
        }
        if class.len() < n {
            continue;
        }
        return build_quotient(table, &class, &reps, n, h).map(|graph| Reconstruction::Graph { graph, root: 0, h });
    }
    Ok(Reconstruction::NotYet)
}

fn build_quotient(
    table: &mut ViewTable,
    class: &HashMap<ViewClassId, usize>,
    reps: &[(ViewClassId, usize)],
    n: usize,
    h: u32,
) -> Result<PortGraph, ReconstructError> {
    let mut rows: Vec<Option<Vec<(usize, Port)>>> = vec![None; n];
    for &(id, c) in reps {
        let children = table.children(id).to_vec();
        let mut row = Vec::with_capacity(children.len());
        for (q, child) in children {
            let t = table.truncate(child, h);
            let target = *class.get(&t).ok_or(ReconstructError::UnknownNeighbor { n, h })?;
            row.push((target, q));
        }
        match &rows[c] {
            None => rows[c] = Some(row),
            Some(existing) => {
                if let Some(p) = existing.iter().zip(&row).position(|(a, b)| a != b) {
                    return Err(ReconstructError::Inconsistent { port: p as Port });
                }
            }
        }
    }
    let rows: Vec<Vec<(usize, Port)>> =
        rows.into_iter().map(|r| r.expect("every class has a representative")).collect();
    let mut list = EdgeList::new(n);
    for (u, row) in rows.iter().enumerate() {
        for (p, &(v, q)) in row.iter().enumerate() {
            if rows[v].get(q as usize) != Some(&(u, p as Port)) {
                return Err(ReconstructError::Asymmetric);
            }
            if u < v {
                list.push(u, p as Port, v, q);
            } else if u == v {
                return Err(ReconstructError::Asymmetric);
            }
        }
    }
    let mut edges: BTreeMap<_, _> = BTreeMap::new();
    for e in list.edges.drain(..) {
        edges.insert((e.u, e.p), e);
    }
    list.edges = edges.into_values().collect();
    Ok(PortGraph::try_from(list)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::view::refine::ViewEngine;

    fn p3() -> PortGraph {
        let mut l = EdgeList::new(3);
        l.push(0, 0, 1, 0);
        l.push(1, 1, 2, 0);
        PortGraph::try_from(l).unwrap()
    }

    #[test]
    fn p3_needs_depth_three() {
        let g = p3();
        let mut e = ViewEngine::new();
        let v2 = e.view_id(&g, 1, 2);
        assert!(matches!(reconstruct_quotient(e.table(), v2, 3).unwrap(), Reconstruction::NotYet));
        let v3 = e.view_id(&g, 1, 3);
        match reconstruct_quotient(e.table(), v3, 3).unwrap() {
            Reconstruction::Graph { graph, root, h } => {
                assert_eq!(h, 1);
                assert_eq!(graph.node_count(), 3);
                assert_eq!(graph.degree(root), 2);
                let mut degrees: Vec<_> = graph.nodes().map(|u| graph.degree(u)).collect();
                degrees.sort();
                assert_eq!(degrees, vec![1, 1, 2]);
            }
            Reconstruction::NotYet => panic!("depth 3 suffices for P3"),
        }
    }

    #[test]
    fn depth_zero_is_not_enough() {
        let g = p3();
        let mut e = ViewEngine::new();
        let v0 = e.view_id(&g, 0, 0);
        assert!(matches!(reconstruct_quotient(e.table(), v0, 3).unwrap(), Reconstruction::NotYet));
    }

    #[test]
    fn least_graph_path_prefers_short_then_small_ports() {
        let g = p3();
        assert_eq!(least_graph_path(&g, 0, 2), vec![0, 1]);
        assert_eq!(least_graph_path(&g, 1, 1), Vec::<Port>::new());
    }

    #[test]
    fn p3_elects_smallest_end() {
        let g = p3();
        let mut e = ViewEngine::new();
        // depth-1 views: node 0 has remote port 0, node 2 remote port 1
        let root = e.view_id(&g, 1, 3);
        let (_, path) = elect_smallest(e.table(), root, 2, 1);
        assert_eq!(g.walk(1, &path), Some(0));
    }
}
