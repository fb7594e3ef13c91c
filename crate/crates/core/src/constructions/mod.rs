//! Generators for the graph families behind the lower bounds, plus random
//! port-labeled graphs.
//!
//! Every generator returns a validated [`PortGraph`]. Clique-based families
//! carry [`TypeLabel`]s as node labels so that type-based arguments
//! (distinguishing paths, label prefixes) can be checked on serialized files.

mod clique;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use clique::{clique_q, clique_qtilde, cross_edge, double, q2, qtilde2, Clique, EdgeClass};

use crate::graph::{EdgeList, GraphError, Port, PortGraph};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("no connected graph after {attempts} attempts (n = {n}, density = {density})")]
    Disconnected { n: usize, density: f64, attempts: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn range(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::Range(msg.into())
}

/// Construction metadata for clique nodes: the `a/b/c/d` label string, an
/// overline flag for the second copy of the last doubling, and, in ring-of-
/// cliques graphs, which clique the node sits in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeLabel {
    pub alpha: String,
    pub overlined: bool,
    pub clique: Option<usize>,
}

impl TypeLabel {
    pub fn node_type(&self) -> char {
        self.alpha.chars().next().expect("labels are nonempty")
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.alpha)?;
        if self.overlined {
            write!(f, "~")?;
        }
        if let Some(c) = self.clique {
            write!(f, "@{c}")?;
        }
        Ok(())
    }
}

impl FromStr for TypeLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (body, clique) = match s.split_once('@') {
            Some((b, c)) => (b, Some(c.parse().map_err(|e| format!("bad clique index in {s:?}: {e}"))?)),
            None => (s, None),
        };
        let (alpha, overlined) = match body.strip_suffix('~') {
            Some(a) => (a, true),
            None => (body, false),
        };
        if alpha.is_empty() || !alpha.chars().all(|c| matches!(c, 'a'..='d')) {
            return Err(format!("not a type label: {s:?}"));
        }
        Ok(TypeLabel { alpha: alpha.to_string(), overlined, clique })
    }
}

fn clique_edges(list: &mut EdgeList, q: &Clique, offset: usize, clique: Option<usize>) {
    let n = q.len();
    for u in 0..n {
        for v in (u + 1)..n {
            list.push(offset + u, q.port[u][v], offset + v, q.port[v][u]);
        }
        let tag = TypeLabel { alpha: q.labels[u].clone(), overlined: q.overlined[u], clique };
        list.label(offset + u, tag.to_string());
    }
}

/// The clique `Q_k` (`k >= 1`); `Q_1` is a single node.
pub fn gen_q(k: u32) -> Result<PortGraph, ConstructionError> {
    match k {
        0 => Err(range("Q_k needs k >= 1")),
        1 => {
            let mut list = EdgeList::new(1);
            list.label(0, "a");
            Ok(PortGraph::try_from(list)?)
        }
        _ => {
            let q = clique_q(k);
            let mut list = EdgeList::new(q.len());
            clique_edges(&mut list, &q, 0, None);
            Ok(PortGraph::try_from(list)?)
        }
    }
}

/// The clique `Q̃_k` (`k >= 1`): `Q̃_1` is an edge with port 0 at both ends.
pub fn gen_qtilde(k: u32) -> Result<PortGraph, ConstructionError> {
    match k {
        0 => Err(range("Q̃_k needs k >= 1")),
        1 => {
            let mut list = EdgeList::new(2);
            list.push(0, 0, 1, 0);
            list.label(0, "a");
            list.label(1, "a~");
            Ok(PortGraph::try_from(list)?)
        }
        _ => {
            let q = clique_qtilde(k);
            let mut list = EdgeList::new(q.len());
            clique_edges(&mut list, &q, 0, None);
            Ok(PortGraph::try_from(list)?)
        }
    }
}

/// A cycle of `2D` cliques, clique 0 being `first` and the rest `rest`, each
/// node joined to every node of the following clique. The edge from label
/// `x` to label `y` in the next clique gets port `i` at `x` and `i + m` at
/// `y`, `i` being the color of `{x, ȳ}` when doubling `base` into a `Q̃`.
fn ring_of_cliques(d: usize, base: &Clique, first: &Clique, rest: &Clique) -> Result<PortGraph, ConstructionError> {
    let m = first.len();
    let count = 2 * d;
    let mut list = EdgeList::new(count * m);
    for c in 0..count {
        clique_edges(&mut list, if c == 0 { first } else { rest }, c * m, Some(c));
    }
    for c in 0..count {
        let next = (c + 1) % count;
        for x in 0..m {
            for y in 0..m {
                let (i, _, _) = cross_edge(base, x, y, true);
                list.push(c * m + x, i, next * m + y, i + m as Port);
            }
        }
    }
    Ok(PortGraph::try_from(list)?)
}

/// `R_{D,λ}`: one `Q_{λ+1}` and `2D-1` copies of `Q̃_{λ+1}` in a cycle.
/// Clique `D` is antipodal to the `Q_{λ+1}`.
pub fn gen_r(d: usize, lambda: u32) -> Result<PortGraph, ConstructionError> {
    if d < 2 || lambda < 2 {
        return Err(range(format!("R_(D,λ) needs D >= 2 and λ >= 2, got D={d}, λ={lambda}")));
    }
    let q = clique_q(lambda + 1);
    let qt = clique_qtilde(lambda + 1);
    ring_of_cliques(d, &q, &q, &qt)
}

/// Node ids of the antipodal twins `x`, `x̄` in `R_{D,λ}`: label index `x`
/// (`x < 2^λ`) in clique `D`.
pub fn r_antipodal_pair(d: usize, lambda: u32, x: usize) -> (usize, usize) {
    let m = 1usize << (lambda + 1);
    assert!(x < m / 2);
    (d * m + x, d * m + x + m / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmallCase {
    /// λ = 0, D >= 2.
    SymmetryZero,
    /// λ = 1, D >= 2.
    SymmetryOne,
    /// λ >= 1, D = 1.
    DiameterOne,
}

impl FromStr for SmallCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "1" => Ok(SmallCase::SymmetryZero),
            "2" => Ok(SmallCase::SymmetryOne),
            "3" => Ok(SmallCase::DiameterOne),
            _ => Err(format!("small case must be 1, 2 or 3, got {s:?}")),
        }
    }
}

/// Witness graphs for the small `(D, λ)` ranges.
///
/// Case 1 is a tadpole: a cycle of length `2D-1` with one pendant node.
/// Case 2 is the ring construction with `Q_2` and `2D-1` copies of `Q̃_2`.
/// Case 3 joins `Q_{λ+1}` and `Q̃_{λ+1}` into one clique.
pub fn gen_small_case(case: SmallCase, d: usize, lambda: u32) -> Result<PortGraph, ConstructionError> {
    match case {
        SmallCase::SymmetryZero => {
            if d < 2 || lambda != 0 {
                return Err(range("case 1 needs λ = 0 and D >= 2"));
            }
            gen_tadpole(2 * d - 1)
        }
        SmallCase::SymmetryOne => {
            if d < 2 || lambda != 1 {
                return Err(range("case 2 needs λ = 1 and D >= 2"));
            }
            let base = q2();
            ring_of_cliques(d, &base, &base, &qtilde2())
        }
        SmallCase::DiameterOne => {
            if d != 1 || lambda < 1 {
                return Err(range("case 3 needs D = 1 and λ >= 1"));
            }
            let k = lambda + 1;
            let q = clique_q(k);
            let qt = clique_qtilde(k);
            let m = q.len();
            let mut list = EdgeList::new(2 * m);
            clique_edges(&mut list, &q, 0, Some(0));
            clique_edges(&mut list, &qt, m, Some(1));
            for x in 0..m {
                for y in 0..m {
                    let (i, _, _) = cross_edge(&q, x, y, true);
                    list.push(x, i, m + y, i);
                }
            }
            Ok(PortGraph::try_from(list)?)
        }
    }
}

/// A cycle of length `cycle` (>= 3) plus one pendant node on node 0.
pub fn gen_tadpole(cycle: usize) -> Result<PortGraph, ConstructionError> {
    if cycle < 3 {
        return Err(range("tadpole cycle needs length >= 3"));
    }
    let mut list = EdgeList::new(cycle + 1);
    for i in 0..cycle {
        list.push(i, 0, (i + 1) % cycle, 1);
    }
    list.push(0, 2, cycle, 0);
    Ok(PortGraph::try_from(list)?)
}

/// Cycle in which every node has port 0 towards its successor and port 1
/// towards its predecessor; all views are equal.
pub fn gen_uniform_cycle(n: usize) -> Result<PortGraph, ConstructionError> {
    if n < 3 {
        return Err(range("cycle needs n >= 3"));
    }
    let mut list = EdgeList::new(n);
    for i in 0..n {
        list.push(i, 0, (i + 1) % n, 1);
    }
    Ok(PortGraph::try_from(list)?)
}

/// Path `0 - 1 - … - (n-1)`; port 0 of an inner node points backwards.
pub fn gen_path(n: usize) -> Result<PortGraph, ConstructionError> {
    if n == 0 {
        return Err(range("path needs n >= 1"));
    }
    let mut list = EdgeList::new(n);
    for i in 0..n.saturating_sub(1) {
        list.push(i, if i == 0 { 0 } else { 1 }, i + 1, 0);
    }
    Ok(PortGraph::try_from(list)?)
}

fn push_t(list: &mut EdgeList, k: usize, offset: usize) {
    let ring = 2 * k;
    let r = |i: usize| offset + i % ring;
    let s = |i: usize| offset + ring + i % ring;
    for i in 0..ring {
        list.push(r(i), 0, r(i + 1), 1);
        list.push(s(i), 0, s(i + 1), 1);
        list.push(r(i), 2, s(i), 2);
    }
    let z = offset + 2 * ring;
    list.push(z, 0, r(0), 5);
    list.push(z, 1, s(0), 5);
}

fn t_diagonals(k: usize) -> Vec<(usize, Port, usize, Port)> {
    let ring = 2 * k;
    (0..ring).flat_map(|i| [(i, 3, ring + (i + 1) % ring, 4), (i, 4, ring + (i + ring - 1) % ring, 3)]).collect()
}

fn t_labels(list: &mut EdgeList, k: usize, offset: usize, suffix: &str) {
    let ring = 2 * k;
    for i in 0..ring {
        list.label(offset + i, format!("r{i}{suffix}"));
        list.label(offset + ring + i, format!("s{i}{suffix}"));
    }
    list.label(offset + 2 * ring, format!("z{suffix}"));
}

/// `T_k`: a `2 × 2k` torus (rings `r`, `s`, rungs `r_i - s_i`) with
/// diagonals `r_i - s_{i±1}` and a degree-2 node `z` on `r_0`, `s_0`.
///
/// Ports: ring edges 0 (forward) / 1 (backward), rungs 2, diagonal
/// `r_i → s_{i+1}` is 3 at `r_i` and 4 at `s_{i+1}`, `r_i → s_{i-1}` is 4
/// at `r_i` and 3 at `s_{i-1}`; `z` has ports 0, 1 and port 5 at its
/// neighbors. Node ids: `r_i = i`, `s_i = 2k + i`, `z = 4k`.
pub fn gen_t(k: usize) -> Result<PortGraph, ConstructionError> {
    if k < 3 {
        return Err(range("T_k needs k >= 3"));
    }
    let mut list = EdgeList::new(4 * k + 1);
    push_t(&mut list, k, 0);
    for (u, p, v, q) in t_diagonals(k) {
        list.push(u, p, v, q);
    }
    t_labels(&mut list, k, 0, "");
    Ok(PortGraph::try_from(list)?)
}

/// `M_k`: two copies of `T_k` whose diagonals are rewired across copies,
/// `r_i - s̄_{i±1}` and `r̄_i - s_{i±1}`, keeping all ports. The second copy
/// sits at offset `4k + 1`.
pub fn gen_m(k: usize) -> Result<PortGraph, ConstructionError> {
    if k < 3 {
        return Err(range("M_k needs k >= 3"));
    }
    let half = 4 * k + 1;
    let mut list = EdgeList::new(2 * half);
    push_t(&mut list, k, 0);
    push_t(&mut list, k, half);
    for (u, p, v, q) in t_diagonals(k) {
        list.push(u, p, half + v, q);
        list.push(half + u, p, v, q);
    }
    t_labels(&mut list, k, 0, "");
    t_labels(&mut list, k, half, "~");
    Ok(PortGraph::try_from(list)?)
}

/// Ring size of `G_k`: `5·2^k - 4`.
pub fn g_size(k: u32) -> usize {
    5 * (1usize << k) - 4
}

fn ring_edges(list: &mut EdgeList, len: usize) {
    for i in 0..len {
        list.push(i, 0, (i + 1) % len, 1);
    }
}

/// Chords of the segment spanning ring positions `s..=e` (an edge count of
/// `e - s`, odd and at least 7, or exactly 2 at the leaves).
fn segment_chords(s: usize, e: usize, ring: usize, chords: &mut Vec<(usize, usize)>) {
    let len = e - s;
    debug_assert!(len % 2 == 1 && len >= 7);
    let x = (s + e - 1) / 2;
    let y = x + 1;
    chords.push(((s + 1) % ring, x % ring));
    chords.push(((e - 1) % ring, y % ring));
    let (left, right) = ((s + 1, x), (y, e - 1));
    if left.1 - left.0 == 2 {
        chords.push(((left.0 + 1) % ring, (right.0 + 1) % ring));
    } else {
        segment_chords(left.0, left.1, ring, chords);
        segment_chords(right.0, right.1, ring, chords);
    }
}

/// `G_k`: a 3-regular graph on `5·2^k - 4` nodes, ring ports 0/1 and
/// chords with port 2 at both ends, placed by recursive halving of the
/// ring viewed as a segment of `5·2^k - 3` edges. All views coincide.
pub fn gen_gk(k: u32) -> Result<PortGraph, ConstructionError> {
    if !(2..=20).contains(&k) {
        return Err(range("G_k needs 2 <= k <= 20"));
    }
    let ring = g_size(k);
    let mut list = EdgeList::new(ring);
    ring_edges(&mut list, ring);
    let mut chords = Vec::new();
    segment_chords(0, ring + 1, ring, &mut chords);
    for (a, b) in chords {
        list.push(a, 2, b, 2);
    }
    Ok(PortGraph::try_from(list)?)
}

/// `G'_k`: a ring of `5·2^k - 5` nodes (ports 0/1) with a pendant node on
/// ring node 0, groups of four consecutive nodes `1..` joined first-third
/// and second-fourth (port 2), and the last two ring nodes left at degree 2.
/// The pendant is node `5·2^k - 5`.
pub fn gen_gk_prime(k: u32) -> Result<PortGraph, ConstructionError> {
    if !(2..=20).contains(&k) {
        return Err(range("G'_k needs 2 <= k <= 20"));
    }
    let n = g_size(k);
    let ring = n - 1;
    let mut list = EdgeList::new(n);
    ring_edges(&mut list, ring);
    list.push(0, 2, ring, 0);
    let groups = (ring - 1) / 4;
    for g in 0..groups {
        let first = 1 + 4 * g;
        list.push(first, 2, first + 2, 2);
        list.push(first + 1, 2, first + 3, 2);
    }
    Ok(PortGraph::try_from(list)?)
}

/// Node id of the degree-1 node of `G'_k`.
pub fn gk_prime_pendant(k: u32) -> usize {
    g_size(k) - 1
}

/// Random connected simple graph with a uniformly random port assignment.
/// Each pair is an edge with probability `density`; draws are repeated
/// until the graph is connected.
pub fn gen_random(n: usize, density: f64, seed: u64) -> Result<PortGraph, ConstructionError> {
    const ATTEMPTS: usize = 1000;
    if n == 0 {
        return Err(range("random graph needs n >= 1"));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(range("density must lie in [0, 1]"));
    }
    if n == 1 {
        return Ok(PortGraph::single_node());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(density) {
                    incident[u].push(pairs.len());
                    incident[v].push(pairs.len());
                    pairs.push((u, v));
                }
            }
        }
        if !connected(n, &pairs) {
            continue;
        }
        let mut port_of = vec![[0 as Port; 2]; pairs.len()];
        for (u, edges) in incident.iter_mut().enumerate() {
            edges.shuffle(&mut rng);
            for (p, &e) in edges.iter().enumerate() {
                let side = usize::from(pairs[e].0 != u);
                port_of[e][side] = p as Port;
            }
        }
        let mut list = EdgeList::new(n);
        for (e, &(u, v)) in pairs.iter().enumerate() {
            list.push(u, port_of[e][0], v, port_of[e][1]);
        }
        return Ok(PortGraph::try_from(list)?);
    }
    Err(ConstructionError::Disconnected { n, density, attempts: ATTEMPTS })
}

fn connected(n: usize, pairs: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in pairs {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{diameter, validate_graph};

    #[test]
    fn node_counts() {
        assert_eq!(gen_q(1).unwrap().node_count(), 1);
        assert_eq!(gen_q(3).unwrap().node_count(), 8);
        assert_eq!(gen_qtilde(1).unwrap().node_count(), 2);
        assert_eq!(gen_r(3, 2).unwrap().node_count(), 48);
        assert_eq!(gen_r(2, 2).unwrap().node_count(), 32);
        assert_eq!(gen_t(3).unwrap().node_count(), 13);
        assert_eq!(gen_m(3).unwrap().node_count(), 26);
        for k in 2..=5 {
            assert_eq!(gen_gk(k).unwrap().node_count(), g_size(k));
            assert_eq!(gen_gk_prime(k).unwrap().node_count(), g_size(k));
        }
    }

    #[test]
    fn q3_labels() {
        let g = gen_q(3).unwrap();
        let mut alphas: Vec<String> =
            g.nodes().map(|u| g.label(u).unwrap().parse::<TypeLabel>().unwrap().alpha).collect();
        alphas.sort();
        assert_eq!(alphas, ["aa", "ab", "ba", "bb", "cc", "cd", "dc", "dd"]);
    }

    #[test]
    fn qtilde1_single_edge() {
        let g = gen_qtilde(1).unwrap();
        assert_eq!(g.edges(), vec![crate::graph::Edge::new(0, 0, 1, 0)]);
    }

    #[test]
    fn gk_is_cubic() {
        for k in 2..=6 {
            let g = gen_gk(k).unwrap();
            assert!(g.nodes().all(|u| g.degree(u) == 3));
        }
    }

    #[test]
    fn gk_prime_degrees() {
        let g = gen_gk_prime(2).unwrap();
        let mut degrees: Vec<usize> = g.nodes().map(|u| g.degree(u)).collect();
        degrees.sort();
        assert_eq!(degrees[0], 1);
        assert_eq!(&degrees[1..3], &[2, 2]);
        assert!(degrees[3..].iter().all(|&d| d == 3));
        assert_eq!(g.degree(gk_prime_pendant(2)), 1);
    }

    #[test]
    fn tadpole_diameter() {
        for d in 2..=5 {
            assert_eq!(diameter(&gen_small_case(SmallCase::SymmetryZero, d, 0).unwrap()), d);
        }
    }

    #[test]
    fn random_is_deterministic_and_valid() {
        let a = gen_random(10, 0.4, 7).unwrap();
        let b = gen_random(10, 0.4, 7).unwrap();
        assert_eq!(a, b);
        assert!(validate_graph(&a.to_edge_list()).is_valid());
        assert_eq!(gen_random(1, 0.9, 3).unwrap().node_count(), 1);
    }

    #[test]
    fn random_reports_failure() {
        assert!(matches!(gen_random(5, 0.0, 1), Err(ConstructionError::Disconnected { .. })));
    }

    #[test]
    fn parameter_ranges() {
        assert!(gen_r(1, 2).is_err());
        assert!(gen_r(2, 1).is_err());
        assert!(gen_t(2).is_err());
        assert!(gen_small_case(SmallCase::DiameterOne, 2, 1).is_err());
        assert!(gen_small_case(SmallCase::SymmetryOne, 2, 2).is_err());
    }

    #[test]
    fn type_label_round_trip() {
        let t: TypeLabel = "abca~@3".parse().unwrap();
        assert_eq!(t, TypeLabel { alpha: "abca".into(), overlined: true, clique: Some(3) });
        assert_eq!(t.to_string(), "abca~@3");
        assert_eq!(t.node_type(), 'a');
        assert!("z".parse::<TypeLabel>().is_err());
    }
}
