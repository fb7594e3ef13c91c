//! The port-labeled cliques `Q_k` and their symmetric twins `Q̃_k`.
//!
//! Node numbering: `Q_2` has `a, b, c, d = 0, 1, 2, 3`; `Q_{k+1}` keeps the
//! nodes of its first copy of `Q_k` at `0..2^k` and puts the overlined copy
//! at `2^k..2^{k+1}`. The type of node `u` is therefore `u % 4`.
//!
//! Cross edges between the two copies of `Q_k` inside `Q_{k+1}` lift the
//! edge classes of `Q_k`: an edge `{u, v}` of `Q_k` yields the cross edges
//! `{u, v̄}` and `{ū, v}` with one common color. Identity pairs `{u, ū}` and
//! lifts of the newest skew edges `{x, x̄}` of `Q_k` become the two skew
//! classes of `Q_{k+1}`.

/// How an edge of a clique is lifted one level up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    /// Same port at both ends (the three colors of `Q_2` are included even
    /// though their ports differ).
    Mono(u32),
    /// Level-`j` skew edge `{x, x̄}`, port `2^j-2` at `x`.
    SkewTwin(u32),
    /// Level-`j` skew edge `{x̄, partner(x)}`, port `2^j-2` at `x̄`.
    SkewPartner(u32),
}

#[derive(Clone, Debug)]
pub struct Clique {
    pub level: u32,
    /// `port[u][v]`: port at `u` of the edge to `v` (diagonal unused).
    pub port: Vec<Vec<u32>>,
    pub class: Vec<Vec<EdgeClass>>,
    /// The node sharing the first half of the label.
    pub partner: Vec<usize>,
    pub labels: Vec<String>,
    /// Whether each node lies in the overlined copy of the last doubling.
    pub overlined: Vec<bool>,
}

impl Clique {
    pub fn len(&self) -> usize {
        self.port.len()
    }

    pub fn is_empty(&self) -> bool {
        self.port.is_empty()
    }

    fn with_size(level: u32, n: usize) -> Self {
        Clique {
            level,
            port: vec![vec![u32::MAX; n]; n],
            class: vec![vec![EdgeClass::Mono(u32::MAX); n]; n],
            partner: vec![usize::MAX; n],
            labels: vec![String::new(); n],
            overlined: vec![false; n],
        }
    }

    fn set(&mut self, u: usize, pu: u32, v: usize, pv: u32, class: EdgeClass) {
        self.port[u][v] = pu;
        self.port[v][u] = pv;
        self.class[u][v] = class;
        self.class[v][u] = class;
    }
}

/// `Q_2`, with the incident-edge sets
/// a: {(0,0),(1,1),(2,2)}, b: {(0,0),(1,1),(2,0)}, c: {(0,2),(1,1),(2,0)},
/// d: {(0,2),(1,1),(2,2)}.
pub fn q2() -> Clique {
    let (a, b, c, d) = (0, 1, 2, 3);
    let mut q = Clique::with_size(2, 4);
    q.set(a, 0, b, 0, EdgeClass::Mono(0));
    q.set(c, 2, d, 0, EdgeClass::Mono(0));
    q.set(a, 1, c, 1, EdgeClass::Mono(1));
    q.set(b, 1, d, 1, EdgeClass::Mono(1));
    q.set(a, 2, d, 2, EdgeClass::Mono(2));
    q.set(b, 2, c, 0, EdgeClass::Mono(2));
    q.partner = vec![b, a, d, c];
    q.labels = ["a", "b", "c", "d"].map(String::from).to_vec();
    q
}

/// `Q̃_2`: every node has incident edges {(0,0),(1,1),(2,2)}.
pub fn qtilde2() -> Clique {
    let mut q = q2();
    for u in 0..4 {
        for v in 0..4 {
            if u != v {
                if let EdgeClass::Mono(c) = q.class[u][v] {
                    q.port[u][v] = c;
                }
            }
        }
    }
    q
}

/// Ports of the cross edge `{u, v̄}` when doubling `base` (level `k`):
/// `(port at u, port at v̄, class)`.
pub fn cross_edge(base: &Clique, u: usize, v: usize, tilde: bool) -> (u32, u32, EdgeClass) {
    let k = base.level;
    let top = 1u32 << (k + 1);
    let twin_port = top - 2;
    let partner_port = top - 3;
    if u == v {
        return if tilde {
            (twin_port, twin_port, EdgeClass::Mono(twin_port))
        } else {
            (twin_port, partner_port, EdgeClass::SkewTwin(k + 1))
        };
    }
    let class = base.class[u][v];
    let becomes_skew = match class {
        EdgeClass::SkewTwin(j) => j == k,
        EdgeClass::Mono(0) => k == 2,
        _ => false,
    };
    if becomes_skew {
        // v̄ takes port 2^{k+1}-2 towards its partner u
        return if tilde {
            (partner_port, partner_port, EdgeClass::Mono(partner_port))
        } else {
            (partner_port, twin_port, EdgeClass::SkewPartner(k + 1))
        };
    }
    let low = 1u32 << k;
    let color = match (k, class) {
        (2, EdgeClass::Mono(i)) => i + 2,
        (_, EdgeClass::Mono(i)) => low + i - 1,
        (_, EdgeClass::SkewTwin(j)) => low + (1 << j) - 4,
        (_, EdgeClass::SkewPartner(j)) if j == k => top - 4,
        (_, EdgeClass::SkewPartner(j)) => low + (1 << j) - 3,
    };
    (color, color, EdgeClass::Mono(color))
}

/// Doubles `base` into `Q_{k+1}`, or `Q̃_{k+1}` when `tilde` is set.
pub fn double(base: &Clique, tilde: bool) -> Clique {
    assert!(base.level >= 2, "doubling starts from Q_2");
    let n = base.len();
    let mut q = Clique::with_size(base.level + 1, 2 * n);
    for u in 0..n {
        for v in (u + 1)..n {
            let (pu, pv, class) = (base.port[u][v], base.port[v][u], base.class[u][v]);
            q.set(u, pu, v, pv, class);
            q.set(u + n, pu, v + n, pv, class);
        }
    }
    for u in 0..n {
        for v in 0..n {
            let (pu, pv, class) = cross_edge(base, u, v, tilde);
            q.set(u, pu, v + n, pv, class);
        }
    }
    for u in 0..n {
        q.partner[u] = u + n;
        q.partner[u + n] = u;
        q.labels[u] = format!("{0}{0}", base.labels[u]);
        q.labels[u + n] = format!("{}{}", base.labels[u], base.labels[base.partner[u]]);
        q.overlined[u + n] = true;
    }
    q
}

/// `Q_k` as a clique structure, `k >= 2`.
pub fn clique_q(k: u32) -> Clique {
    assert!(k >= 2);
    let mut q = q2();
    while q.level < k {
        q = double(&q, false);
    }
    q
}

/// `Q̃_k` as a clique structure, `k >= 2`.
pub fn clique_qtilde(k: u32) -> Clique {
    assert!(k >= 2);
    if k == 2 {
        qtilde2()
    } else {
        double(&clique_q(k - 1), true)
    }
}
