//! Partitions of nodes by view equality, computed by interned refinement.

use std::collections::HashMap;

use super::table::{ViewClassId, ViewTable};
use crate::graph::{diameter, PortGraph};

/// Depth-0 colors: each node's degree.
pub fn initial_colors(table: &mut ViewTable, g: &PortGraph) -> Vec<ViewClassId> {
    g.nodes().map(|u| table.leaf(g.degree(u) as u32)).collect()
}

/// One refinement round: depth-`t` colors in, depth-`t+1` colors out.
///
/// The new key of `u` is its degree and, per port `p`, the remote port and
/// the color of the neighbor behind `p`.
pub fn refine_step(table: &mut ViewTable, g: &PortGraph, colors: &[ViewClassId]) -> Vec<ViewClassId> {
    assert_eq!(colors.len(), g.node_count());
    g.nodes()
        .map(|u| {
            if g.degree(u) == 0 {
                let depth = table.depth(colors[u]) + 1;
                return table.isolated(depth);
            }
            let children = g.ports(u).iter().map(|&(v, q)| (q, colors[v])).collect();
            table.inner(g.degree(u) as u32, children)
        })
        .collect()
}

/// Nodes grouped by view class at one depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub depth: u32,
    /// Ordered by smallest member; members ascending.
    pub classes: Vec<Vec<usize>>,
    pub class_view: Vec<ViewClassId>,
    /// Common class size, set when the partition is known to be stable.
    pub sigma: Option<usize>,
}

impl Partition {
    pub fn from_colors(depth: u32, colors: &[ViewClassId]) -> Self {
        let mut slot: HashMap<ViewClassId, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_view = Vec::new();
        for (u, &c) in colors.iter().enumerate() {
            let i = *slot.entry(c).or_insert_with(|| {
                classes.push(Vec::new());
                class_view.push(c);
                classes.len() - 1
            });
            classes[i].push(u);
        }
        Partition { depth, classes, class_view, sigma: None }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, u: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&u))
    }
}

/// The sequence of colorings Π_0, Π_1, … of one graph.
#[derive(Clone, Debug)]
pub struct Refinement {
    levels: Vec<Vec<ViewClassId>>,
    counts: Vec<usize>,
}

impl Refinement {
    pub fn new(table: &mut ViewTable, g: &PortGraph) -> Self {
        let first = initial_colors(table, g);
        let count = distinct(&first);
        Refinement { levels: vec![first], counts: vec![count] }
    }

    /// Makes colors available up to depth `t`.
    pub fn extend_to(&mut self, table: &mut ViewTable, g: &PortGraph, t: usize) {
        while self.levels.len() <= t {
            let next = refine_step(table, g, self.levels.last().expect("level 0 exists"));
            self.counts.push(distinct(&next));
            self.levels.push(next);
        }
    }

    pub fn colors(&self, t: usize) -> &[ViewClassId] {
        &self.levels[t]
    }

    pub fn class_count(&self, t: usize) -> usize {
        self.counts[t]
    }

    pub fn computed_depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Smallest `t` with |Π_t| = |Π_{t+1}|; refines as far as needed.
    pub fn stabilization_depth(&mut self, table: &mut ViewTable, g: &PortGraph) -> usize {
        let mut t = 0;
        loop {
            self.extend_to(table, g, t + 1);
            if self.counts[t] == self.counts[t + 1] {
                return t;
            }
            t += 1;
        }
    }

    pub fn partition(&self, t: usize) -> Partition {
        Partition::from_colors(t as u32, &self.levels[t])
    }
}

fn distinct(colors: &[ViewClassId]) -> usize {
    let mut sorted = colors.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len()
}

/// Everything the view engine knows about one graph's symmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryProfile {
    pub n: usize,
    pub diameter: usize,
    /// λ: smallest depth at which some class is already a class of Π.
    pub level_of_symmetry: usize,
    /// Λ: smallest depth with Π_t = Π_{t+1}.
    pub stabilization_depth: usize,
    /// Common size of the classes of Π.
    pub sigma: usize,
    /// |Π|.
    pub classes: usize,
    pub solvable: bool,
}

/// Owns an intern table and answers view questions about graphs.
#[derive(Debug, Default)]
pub struct ViewEngine {
    table: ViewTable,
}

impl ViewEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn table(&mut self) -> &mut ViewTable {
        &mut self.table
    }

    pub fn refinement(&mut self, g: &PortGraph) -> Refinement {
        Refinement::new(&mut self.table, g)
    }

    pub fn refine_step(&mut self, g: &PortGraph, colors: &[ViewClassId]) -> Vec<ViewClassId> {
        refine_step(&mut self.table, g, colors)
    }

    /// Colors encoding ∼_t.
    pub fn colors_at_depth(&mut self, g: &PortGraph, t: usize) -> Vec<ViewClassId> {
        let mut r = self.refinement(g);
        r.extend_to(&mut self.table, g, t);
        r.colors(t).to_vec()
    }

    /// Interned depth-`t` view of `u`.
    pub fn view_id(&mut self, g: &PortGraph, u: usize, t: usize) -> ViewClassId {
        self.colors_at_depth(g, t)[u]
    }

    pub fn partition_at_depth(&mut self, g: &PortGraph, t: usize) -> Partition {
        let mut r = self.refinement(g);
        r.extend_to(&mut self.table, g, t);
        let mut p = r.partition(t);
        let big_lambda = r.stabilization_depth(&mut self.table, g);
        if t >= big_lambda {
            p.sigma = Some(g.node_count() / p.len());
        }
        p
    }

    /// Π, the partition by full views.
    pub fn stable_partition(&mut self, g: &PortGraph) -> Partition {
        let mut r = self.refinement(g);
        let t = r.stabilization_depth(&mut self.table, g);
        let mut p = r.partition(t);
        p.sigma = Some(g.node_count() / p.len());
        p
    }

    pub fn stabilization_depth(&mut self, g: &PortGraph) -> usize {
        let mut r = self.refinement(g);
        r.stabilization_depth(&mut self.table, g)
    }

    pub fn level_of_symmetry(&mut self, g: &PortGraph) -> usize {
        self.profile_without_diameter(g).level_of_symmetry
    }

    /// All depth-(n-1) views distinct, decided at the stabilization depth.
    pub fn is_solvable(&mut self, g: &PortGraph) -> bool {
        let mut r = self.refinement(g);
        let t = r.stabilization_depth(&mut self.table, g);
        r.class_count(t) == g.node_count()
    }

    pub fn profile(&mut self, g: &PortGraph) -> SymmetryProfile {
        let mut p = self.profile_without_diameter(g);
        p.diameter = diameter(g);
        p
    }

    fn profile_without_diameter(&mut self, g: &PortGraph) -> SymmetryProfile {
        let n = g.node_count();
        let mut r = self.refinement(g);
        let big_lambda = r.stabilization_depth(&mut self.table, g);
        let classes = r.class_count(big_lambda);
        let sigma = n / classes;
        let level = (0..=big_lambda)
            .find(|&t| r.partition(t).classes.iter().any(|c| c.len() == sigma))
            .expect("Π itself has classes of size σ");
        SymmetryProfile {
            n,
            diameter: 0,
            level_of_symmetry: level,
            stabilization_depth: big_lambda,
            sigma,
            classes,
            solvable: classes == n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeList;

    fn p3() -> PortGraph {
        let mut l = EdgeList::new(3);
        l.push(0, 0, 1, 0);
        l.push(1, 1, 2, 0);
        PortGraph::try_from(l).unwrap()
    }

    fn c4() -> PortGraph {
        let mut l = EdgeList::new(4);
        for i in 0..4 {
            l.push(i, 0, (i + 1) % 4, 1);
        }
        PortGraph::try_from(l).unwrap()
    }

    #[test]
    fn p3_partitions() {
        let mut e = ViewEngine::new();
        let g = p3();
        assert_eq!(e.partition_at_depth(&g, 0).classes, vec![vec![0, 2], vec![1]]);
        assert_eq!(e.partition_at_depth(&g, 1).classes, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(e.stabilization_depth(&g), 1);
        assert_eq!(e.level_of_symmetry(&g), 0);
        assert!(e.is_solvable(&g));
    }

    #[test]
    fn uniform_cycle_never_splits() {
        let mut e = ViewEngine::new();
        let g = c4();
        let mut colors = initial_colors(e.table(), &g);
        for _ in 0..4 {
            colors = e.refine_step(&g, &colors);
            assert!(colors.iter().all(|&c| c == colors[0]));
        }
        assert_eq!(e.stabilization_depth(&g), 0);
        assert_eq!(e.level_of_symmetry(&g), 0);
        assert!(!e.is_solvable(&g));
        assert_eq!(e.stable_partition(&g).sigma, Some(4));
    }

    #[test]
    fn single_node() {
        let mut e = ViewEngine::new();
        let g = PortGraph::single_node();
        let p = e.profile(&g);
        assert_eq!((p.n, p.diameter, p.level_of_symmetry, p.stabilization_depth), (1, 0, 0, 0));
        assert!(p.solvable);
        assert_eq!(e.view_id(&g, 0, 3), e.table().isolated(3));
    }
}
