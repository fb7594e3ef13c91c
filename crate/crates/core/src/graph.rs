//! Port-labeled graphs.
//!
//! A [`PortGraph`] is an undirected, connected, simple graph in which every
//! node of degree `d` numbers its incident edges `0..d`. Node ids are dense
//! `0..n` and exist only for the harness: node programs never see them.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// A port number at some node.
pub type Port = u32;

/// One undirected edge: port `p` at `u` is joined to port `q` at `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: usize,
    pub p: Port,
    pub v: usize,
    pub q: Port,
}

impl Edge {
    pub fn new(u: usize, p: Port, v: usize, q: Port) -> Self {
        Edge { u, p, v, q }
    }

    /// Same edge with the smaller endpoint first.
    pub fn normalized(self) -> Self {
        if self.v < self.u {
            Edge { u: self.v, p: self.q, v: self.u, q: self.p }
        } else {
            self
        }
    }
}

/// Unchecked graph data: what a parser or a generator produces before
/// validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<Edge>,
    pub labels: BTreeMap<usize, String>,
}

impl EdgeList {
    pub fn new(n: usize) -> Self {
        EdgeList { n, edges: Vec::new(), labels: BTreeMap::new() }
    }

    pub fn push(&mut self, u: usize, p: Port, v: usize, q: Port) {
        self.edges.push(Edge::new(u, p, v, q));
    }

    pub fn label(&mut self, u: usize, tag: impl Into<String>) {
        self.labels.insert(u, tag.into());
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NodeOutOfRange {
        edge: Edge,
    },
    SelfLoop {
        node: usize,
    },
    DuplicateEdge {
        u: usize,
        v: usize,
    },
    /// Port numbers at `node` are not exactly `0..degree`.
    PortSet {
        node: usize,
        degree: usize,
        ports: Vec<Port>,
    },
    Disconnected {
        components: usize,
    },
    LabelOutOfRange {
        node: usize,
    },
    BadLabel {
        node: usize,
    },
    Empty,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NodeOutOfRange { edge } => {
                write!(f, "edge ({} {} {} {}) references a node outside 0..n", edge.u, edge.p, edge.v, edge.q)
            }
            Violation::SelfLoop { node } => write!(f, "self-loop at node {node}"),
            Violation::DuplicateEdge { u, v } => write!(f, "duplicate edge between {u} and {v}"),
            Violation::PortSet { node, degree, ports } => {
                write!(f, "node {node} has degree {degree} but ports {ports:?} (expected 0..{degree})")
            }
            Violation::Disconnected { components } => {
                write!(f, "graph is disconnected ({components} components)")
            }
            Violation::LabelOutOfRange { node } => write!(f, "label for nonexistent node {node}"),
            Violation::BadLabel { node } => write!(f, "label of node {node} is empty or has whitespace"),
            Violation::Empty => write!(f, "graph has no nodes"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every graph invariant and reports all violations found.
pub fn validate_graph(list: &EdgeList) -> ValidationReport {
    let mut violations = Vec::new();
    let n = list.n;
    if n == 0 {
        violations.push(Violation::Empty);
    }

    let mut ports: Vec<Vec<Port>> = vec![Vec::new(); n];
    let mut seen_pairs = BTreeMap::new();
    for &edge in &list.edges {
        if edge.u >= n || edge.v >= n {
            violations.push(Violation::NodeOutOfRange { edge });
            continue;
        }
        if edge.u == edge.v {
            violations.push(Violation::SelfLoop { node: edge.u });
            continue;
        }
        let e = edge.normalized();
        let count = seen_pairs.entry((e.u, e.v)).or_insert(0usize);
        *count += 1;
        if *count == 2 {
            violations.push(Violation::DuplicateEdge { u: e.u, v: e.v });
        }
        ports[edge.u].push(edge.p);
        ports[edge.v].push(edge.q);
    }

    for (node, ps) in ports.iter_mut().enumerate() {
        ps.sort_unstable();
        let degree = ps.len();
        let exact = ps.iter().enumerate().all(|(i, &p)| p as usize == i);
        if !exact {
            violations.push(Violation::PortSet { node, degree, ports: ps.clone() });
        }
    }

    if n > 0 {
        let components = count_components(n, list.edges.iter().filter(|e| e.u < n && e.v < n));
        if components > 1 {
            violations.push(Violation::Disconnected { components });
        }
    }

    for (&node, tag) in &list.labels {
        if node >= n {
            violations.push(Violation::LabelOutOfRange { node });
        } else if tag.is_empty() || tag.chars().any(char::is_whitespace) {
            violations.push(Violation::BadLabel { node });
        }
    }

    ValidationReport { violations }
}

fn count_components<'a>(n: usize, edges: impl Iterator<Item = &'a Edge>) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for e in edges {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph: {0}")]
    Invalid(ValidationReport),
    #[error("line {line}: {cause}")]
    Parse { line: usize, cause: String },
}

/// A validated port-labeled graph. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortGraph {
    /// `adj[u][p] = (v, q)`: port `p` at `u` leads to port `q` at `v`.
    adj: Vec<Vec<(usize, Port)>>,
    labels: BTreeMap<usize, String>,
}

impl TryFrom<EdgeList> for PortGraph {
    type Error = GraphError;

    fn try_from(list: EdgeList) -> Result<Self, GraphError> {
        let report = validate_graph(&list);
        if !report.is_valid() {
            return Err(GraphError::Invalid(report));
        }
        let mut adj: Vec<Vec<(usize, Port)>> = vec![Vec::new(); list.n];
        let mut degree = vec![0usize; list.n];
        for e in &list.edges {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        for (u, row) in adj.iter_mut().enumerate() {
            *row = vec![(usize::MAX, 0); degree[u]];
        }
        for e in &list.edges {
            adj[e.u][e.p as usize] = (e.v, e.q);
            adj[e.v][e.q as usize] = (e.u, e.p);
        }
        Ok(PortGraph { adj, labels: list.labels })
    }
}

impl PortGraph {
    pub fn single_node() -> Self {
        PortGraph { adj: vec![Vec::new()], labels: BTreeMap::new() }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Follows port `p` out of `u`.
    pub fn neighbor(&self, u: usize, p: Port) -> (usize, Port) {
        self.adj[u][p as usize]
    }

    /// Incident edges of `u` ordered by local port.
    pub fn ports(&self, u: usize) -> &[(usize, Port)] {
        &self.adj[u]
    }

    pub fn nodes(&self) -> std::ops::Range<usize> {
        0..self.adj.len()
    }

    pub fn label(&self, u: usize) -> Option<&str> {
        self.labels.get(&u).map(String::as_str)
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    /// Every edge once, smaller endpoint first, sorted by `(u, p)`.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, row) in self.adj.iter().enumerate() {
            for (p, &(v, q)) in row.iter().enumerate() {
                if u < v {
                    out.push(Edge::new(u, p as Port, v, q));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn to_edge_list(&self) -> EdgeList {
        EdgeList { n: self.node_count(), edges: self.edges(), labels: self.labels.clone() }
    }

    /// Walks a port sequence from `start`. `None` if some port is out of range.
    pub fn walk(&self, start: usize, path: &[Port]) -> Option<usize> {
        path.iter().try_fold(start, |u, &p| self.adj[u].get(p as usize).map(|&(v, _)| v))
    }

    /// Hop distances from `src`.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::from([src]);
        dist[src] = 0;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Same graph with node `u` renamed to `perm[u]`. Ports and labels move
    /// with their nodes.
    pub fn relabeled(&self, perm: &[usize]) -> PortGraph {
        assert_eq!(perm.len(), self.node_count());
        let mut adj = vec![Vec::new(); self.node_count()];
        for (u, row) in self.adj.iter().enumerate() {
            adj[perm[u]] = row.iter().map(|&(v, q)| (perm[v], q)).collect();
        }
        let labels = self.labels.iter().map(|(&u, t)| (perm[u], t.clone())).collect();
        PortGraph { adj, labels }
    }
}

/// Maximum shortest-path distance over all node pairs.
pub fn diameter(g: &PortGraph) -> usize {
    g.nodes().map(|u| g.bfs_distances(u).into_iter().max().unwrap_or(0)).max().unwrap_or(0)
}

const HEADER: &str = "anongraph v1";

/// Serializes to the `anongraph v1` text format.
pub fn serialize_graph(g: &PortGraph) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("n {}\n", g.node_count()));
    for e in g.edges() {
        out.push_str(&format!("edge {} {} {} {}\n", e.u, e.p, e.v, e.q));
    }
    for (u, tag) in g.labels() {
        out.push_str(&format!("label {u} {tag}\n"));
    }
    out
}

/// Parses the `anongraph v1` text format and validates the result.
pub fn parse_graph(text: &str) -> Result<PortGraph, GraphError> {
    let err = |line: usize, cause: String| GraphError::Parse { line, cause };
    let mut lines = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.starts_with('#') && !l.is_empty());

    match lines.next() {
        Some((_, l)) if l == HEADER => {}
        Some((line, l)) => return Err(err(line, format!("expected header {HEADER:?}, found {l:?}"))),
        None => return Err(err(1, "empty input".into())),
    }
    let n = match lines.next() {
        Some((line, l)) => {
            let rest = l.strip_prefix("n ").ok_or_else(|| err(line, format!("expected \"n <count>\", found {l:?}")))?;
            rest.parse::<usize>().map_err(|e| err(line, format!("bad node count {rest:?}: {e}")))?
        }
        None => return Err(err(2, "missing node count line".into())),
    };

    let mut list = EdgeList::new(n);
    let mut seen = BTreeMap::new();
    for (line, l) in lines {
        let tokens: Vec<&str> = l.split(' ').collect();
        match tokens.as_slice() {
            ["edge", rest @ ..] if rest.len() == 4 => {
                let mut nums = [0usize; 4];
                for (slot, tok) in nums.iter_mut().zip(rest) {
                    *slot = tok.parse().map_err(|e| err(line, format!("bad number {tok:?}: {e}")))?;
                }
                let [u, p, v, q] = nums;
                if u >= n || v >= n {
                    return Err(err(line, format!("node out of range (n = {n})")));
                }
                if u == v {
                    return Err(err(line, format!("self-loop at node {u}")));
                }
                let e = Edge::new(u, p as Port, v, q as Port).normalized();
                if let Some(first) = seen.insert((e.u, e.v), line) {
                    return Err(err(line, format!("duplicate edge {}-{} (first on line {first})", e.u, e.v)));
                }
                list.edges.push(e);
            }
            ["label", node, tag] => {
                let u: usize = node.parse().map_err(|e| err(line, format!("bad node {node:?}: {e}")))?;
                if u >= n {
                    return Err(err(line, format!("label for node {u} out of range")));
                }
                list.label(u, *tag);
            }
            _ => return Err(err(line, format!("unrecognized line {l:?}"))),
        }
    }
    PortGraph::try_from(list)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn p3() -> PortGraph {
        let mut l = EdgeList::new(3);
        l.push(0, 0, 1, 0);
        l.push(1, 1, 2, 0);
        PortGraph::try_from(l).unwrap()
    }

    #[test]
    fn p3_is_valid() {
        let mut l = EdgeList::new(3);
        l.push(0, 0, 1, 0);
        l.push(1, 1, 2, 0);
        assert!(validate_graph(&l).is_valid());
    }

    #[test]
    fn port_gap_is_reported() {
        let mut l = EdgeList::new(3);
        l.push(0, 0, 1, 0);
        l.push(1, 5, 2, 0);
        let report = validate_graph(&l);
        assert_eq!(report.violations, vec![Violation::PortSet { node: 1, degree: 2, ports: vec![0, 5] }]);
    }

    #[test]
    fn disconnected_is_reported() {
        let mut l = EdgeList::new(4);
        l.push(0, 0, 1, 0);
        l.push(2, 0, 3, 0);
        let report = validate_graph(&l);
        assert_eq!(report.violations, vec![Violation::Disconnected { components: 2 }]);
    }

    #[test]
    fn self_loop_and_duplicate() {
        let mut l = EdgeList::new(2);
        l.push(0, 0, 1, 0);
        l.push(1, 1, 0, 1);
        l.push(1, 2, 1, 3);
        let report = validate_graph(&l);
        assert!(report.violations.contains(&Violation::SelfLoop { node: 1 }));
        assert!(report.violations.contains(&Violation::DuplicateEdge { u: 0, v: 1 }));
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(&p3()), 2);
        assert_eq!(diameter(&PortGraph::single_node()), 0);
    }

    #[test]
    fn serialize_p3() {
        assert_eq!(serialize_graph(&p3()), "anongraph v1\nn 3\nedge 0 0 1 0\nedge 1 1 2 0\n");
    }

    #[test]
    fn parse_p3_round_trip() {
        let text = "anongraph v1\n# a comment\nn 3\nedge 0 0 1 0\nedge 1 1 2 0\nlabel 1 mid\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.edges(), p3().edges());
        assert_eq!(g.label(1), Some("mid"));
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn parse_rejects_duplicate_edge() {
        let text = "anongraph v1\nn 2\nedge 0 0 1 0\nedge 0 0 1 0\n";
        match parse_graph(text) {
            Err(GraphError::Parse { line: 4, cause }) => assert!(cause.contains("duplicate")),
            other => panic!("expected duplicate-edge error, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_port_violation() {
        let text = "anongraph v1\nn 3\nedge 0 0 1 0\nedge 1 5 2 0\n";
        assert!(matches!(parse_graph(text), Err(GraphError::Invalid(_))));
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "anongraph v1\nn 2\nedge 0 x 1 0\n";
        assert!(matches!(parse_graph(text), Err(GraphError::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("anongraph v2\n"), Err(GraphError::Parse { line: 1, .. })));
    }

    #[test]
    fn walk_follows_ports() {
        let g = p3();
        assert_eq!(g.walk(0, &[0, 1]), Some(2));
        assert_eq!(g.walk(0, &[1]), None);
    }
}
