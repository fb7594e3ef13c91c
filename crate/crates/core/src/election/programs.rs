//! The four election algorithms as node programs over [`ComState`].
//!
//! Tree nodes within distance `D` of the root of `V^{D+j}(u)` represent
//! every graph node, and their depth-`j` subviews are exactly the classes of
//! `Π_j`; this is how a node counts `|Π_j|` on its own.

use crate::graph::{diameter, Port};
use crate::sim::{ComState, Decision, Inbox, NodeProgram, Outbox, ProgramError, Shared, Status};
use crate::view::{
    distinct_subviews, elect_smallest, least_graph_path, max_distinct_views, reconstruct_quotient, Reconstruction,
    Refinement,
};

fn decide(path: Vec<Port>) -> Decision {
    if path.is_empty() {
        Decision::Leader
    } else {
        Decision::NonLeader(path)
    }
}

/// Algorithms 2 and 5: known diameter, optionally known size.
pub(crate) struct KnownDiameter {
    degree: usize,
    d: u32,
    /// Size bound for the impossibility test; `None` for weak election.
    n: Option<usize>,
    com: Option<ComState>,
    counts: Vec<usize>,
    decision: Option<Decision>,
}

impl KnownDiameter {
    pub(crate) fn new(degree: usize, d: usize, n: Option<usize>) -> Self {
        KnownDiameter { degree, d: d as u32, n, com: None, counts: Vec::new(), decision: None }
    }

    fn step(&mut self, shared: &mut Shared) -> Status {
        let com = self.com.as_ref().expect("started");
        let depth = com.depth(shared);
        if depth < self.d {
            return Status::Running;
        }
        let j = depth - self.d;
        let root = com.view();
        self.counts.push(distinct_subviews(&mut shared.table, root, self.d, j).len());
        let k = self.counts.len();
        if k < 2 || self.counts[k - 1] != self.counts[k - 2] {
            return Status::Running;
        }
        let stable = self.counts[k - 1];
        self.decision = Some(match self.n {
            Some(n) if stable < n => Decision::Impossible,
            _ => {
                let (_, path) = elect_smallest(&mut shared.table, root, self.d, j - 1);
                decide(path)
            }
        });
        Status::Halted
    }
}

impl NodeProgram for KnownDiameter {
    fn start(&mut self, shared: &mut Shared) -> Status {
        self.com = Some(ComState::new(self.degree, shared));
        if self.degree == 0 {
            self.decision = Some(Decision::Leader);
            return Status::Halted;
        }
        self.step(shared)
    }

    fn send(&mut self, shared: &mut Shared) -> Outbox {
        self.com.as_ref().expect("started").com_round(shared)
    }

    fn receive(&mut self, shared: &mut Shared, inbox: Inbox) -> Result<Status, ProgramError> {
        self.com.as_mut().expect("started").absorb(shared, inbox)?;
        Ok(self.step(shared))
    }

    fn decision(&self) -> Option<&Decision> {
        self.decision.as_ref()
    }
}

/// Algorithm 4: `2n-2` COM calls, then count depth-`(n-1)` views within
/// distance `n-1`.
pub(crate) struct KnownSize {
    degree: usize,
    n: usize,
    com: Option<ComState>,
    decision: Option<Decision>,
}

impl KnownSize {
    pub(crate) fn new(degree: usize, n: usize) -> Self {
        KnownSize { degree, n, com: None, decision: None }
    }

    fn step(&mut self, shared: &mut Shared) -> Status {
        let com = self.com.as_ref().expect("started");
        let horizon = self.n as u32 - 1;
        if com.depth(shared) < 2 * horizon {
            return Status::Running;
        }
        let root = com.view();
        let num = distinct_subviews(&mut shared.table, root, horizon, horizon).len();
        self.decision = Some(if num < self.n {
            Decision::Impossible
        } else {
            decide(elect_smallest(&mut shared.table, root, horizon, horizon).1)
        });
        Status::Halted
    }
}

impl NodeProgram for KnownSize {
    fn start(&mut self, shared: &mut Shared) -> Status {
        self.com = Some(ComState::new(self.degree, shared));
        if self.degree == 0 {
            self.decision = Some(Decision::Leader);
            return Status::Halted;
        }
        self.step(shared)
    }

    fn send(&mut self, shared: &mut Shared) -> Outbox {
        self.com.as_ref().expect("started").com_round(shared)
    }

    fn receive(&mut self, shared: &mut Shared, inbox: Inbox) -> Result<Status, ProgramError> {
        self.com.as_mut().expect("started").absorb(shared, inbox)?;
        Ok(self.step(shared))
    }

    fn decision(&self) -> Option<&Decision> {
        self.decision.as_ref()
    }
}

/// Algorithm 3: grow the view until `n` distinct views show up, rebuild the
/// graph from it, and keep relaying until COM call `D + Λ + 1`.
pub(crate) struct KnownSizeWeak {
    degree: usize,
    n: usize,
    com: Option<ComState>,
    seen_all: bool,
    finish: Option<u32>,
    decision: Option<Decision>,
}

impl KnownSizeWeak {
    pub(crate) fn new(degree: usize, n: usize) -> Self {
        KnownSizeWeak { degree, n, com: None, seen_all: false, finish: None, decision: None }
    }

    fn step(&mut self, shared: &mut Shared) -> Result<Status, ProgramError> {
        let com = self.com.as_ref().expect("started");
        let depth = com.depth(shared);
        let root = com.view();
        if let Some(finish) = self.finish {
            return Ok(if depth >= finish { Status::Halted } else { Status::Running });
        }
        if !self.seen_all {
            self.seen_all = max_distinct_views(&mut shared.table, root) >= self.n;
            if !self.seen_all {
                return Ok(Status::Running);
            }
        }
        let (graph, gr) = match reconstruct_quotient(&mut shared.table, root, self.n) {
            Ok(Reconstruction::Graph { graph, root, .. }) => (graph, root),
            // the first depth with n views may lack one level of slack
            Ok(Reconstruction::NotYet) => return Ok(Status::Running),
            Err(e) => return Err(ProgramError(format!("reconstruction failed: {e}"))),
        };
        let d = diameter(&graph) as u32;
        let mut refinement = Refinement::new(&mut shared.table, &graph);
        let lambda = refinement.stabilization_depth(&mut shared.table, &graph);
        if refinement.class_count(lambda) != self.n {
            return Err(ProgramError("reconstructed graph is not solvable".into()));
        }
        let colors = refinement.colors(lambda).to_vec();
        let smallest = shared.table.min_view(colors.iter().copied()).expect("graph is nonempty");
        let target = colors.iter().position(|&c| c == smallest).expect("minimum is one of the colors");
        self.decision = Some(decide(least_graph_path(&graph, gr, target)));
        let finish = d + lambda as u32 + 1;
        self.finish = Some(finish);
        Ok(if depth >= finish { Status::Halted } else { Status::Running })
    }
}

impl NodeProgram for KnownSizeWeak {
    fn start(&mut self, shared: &mut Shared) -> Status {
        self.com = Some(ComState::new(self.degree, shared));
        if self.degree == 0 {
            self.decision = Some(Decision::Leader);
            return Status::Halted;
        }
        Status::Running
    }

    fn send(&mut self, shared: &mut Shared) -> Outbox {
        self.com.as_ref().expect("started").com_round(shared)
    }

    fn receive(&mut self, shared: &mut Shared, inbox: Inbox) -> Result<Status, ProgramError> {
        self.com.as_mut().expect("started").absorb(shared, inbox)?;
        self.step(shared)
    }

    fn decision(&self) -> Option<&Decision> {
        self.decision.as_ref()
    }
}
