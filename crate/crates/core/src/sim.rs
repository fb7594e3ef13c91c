//! Synchronous LOCAL-model rounds for anonymous node programs.
//!
//! A program is created from its degree and the global knowledge only. In
//! each round every running program fills an outbox, the simulator delivers
//! each message through the port pairing (stamping the sender's port), and
//! every running program absorbs its inbox. Views travel as references into
//! a simulation-owned [`ViewTable`], or as canonical byte encodings when
//! [`MessageMode::Explicit`] is selected.
//!
//! The `r`-th round carries `COM(r-1)`; the transcript counts rounds, so its
//! round numbers are COM-call counts.

use std::fmt;
use std::io;

use thiserror::Error;

use crate::graph::{diameter, Port, PortGraph};
use crate::view::{canonical_decode, ViewClassId, ViewTable};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Knowledge {
    pub n: Option<usize>,
    pub d: Option<usize>,
}

impl Knowledge {
    pub fn none() -> Self {
        Self::default()
    }

    /// Checks that every known parameter matches `g`.
    pub fn check(&self, g: &PortGraph) -> Result<(), SimError> {
        if let Some(n) = self.n {
            if n != g.node_count() {
                return Err(SimError::Knowledge { param: "n", given: n, actual: g.node_count() });
            }
        }
        if let Some(d) = self.d {
            let actual = diameter(g);
            if d != actual {
                return Err(SimError::Knowledge { param: "D", given: d, actual });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Message {
    View(ViewClassId),
    Encoded(Vec<u8>),
}

/// A message as received: the port it left the sender through, and its body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delivery {
    pub remote_port: Port,
    pub message: Message,
}

/// `(port, message)` pairs to send this round.
pub type Outbox = Vec<(Port, Message)>;

/// One slot per local port.
pub type Inbox = Vec<Option<Delivery>>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MessageMode {
    #[default]
    Interned,
    Explicit,
}

/// State shared by all programs of one run. Holds only view content.
#[derive(Debug, Default)]
pub struct Shared {
    pub table: ViewTable,
    pub mode: MessageMode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Leader,
    NonLeader(Vec<Port>),
    Impossible,
}

impl Decision {
    pub fn tag(&self) -> &'static str {
        match self {
            Decision::Leader => "leader",
            Decision::NonLeader(_) => "non-leader",
            Decision::Impossible => "impossible",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Running,
    Halted,
}

#[derive(Debug, Error)]
#[error("{0}")]
pub struct ProgramError(pub String);

pub trait NodeProgram {
    /// Called once before round 1.
    fn start(&mut self, shared: &mut Shared) -> Status;
    fn send(&mut self, shared: &mut Shared) -> Outbox;
    fn receive(&mut self, shared: &mut Shared, inbox: Inbox) -> Result<Status, ProgramError>;
    fn decision(&self) -> Option<&Decision>;
}

/// Builds a node's program from what an anonymous node may know.
pub type ProgramFactory<'a> = dyn Fn(usize, &Knowledge) -> Box<dyn NodeProgram> + 'a;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("knowledge mismatch: given {param} = {given}, graph has {actual}")]
    Knowledge { param: &'static str, given: usize, actual: usize },
    #[error("round cap must be at least 1")]
    RoundCap,
    #[error("round {round}: node {node} sent on port {port} but has degree {degree}")]
    BadPort { round: usize, node: usize, port: Port, degree: usize },
    #[error("round {round}: node {node} sent twice on port {port}")]
    DoubleSend { round: usize, node: usize, port: Port },
    #[error("round {round}: node {node} aborted: {cause}")]
    Program { round: usize, node: usize, cause: ProgramError },
    #[error("round {round}: node {node} changed its decision")]
    DecisionChanged { round: usize, node: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    Timeout,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Completed => "completed",
            RunStatus::Timeout => "timeout",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeRecord {
    pub decision: Option<Decision>,
    pub decided_round: Option<usize>,
    /// Round after which the node stopped communicating.
    pub halted_round: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElectionTranscript {
    pub algorithm: String,
    pub knowledge: Knowledge,
    pub nodes: Vec<NodeRecord>,
    pub rounds: usize,
    /// Size of the canonical encodings sent in each round, whether they
    /// traveled as references or as bytes.
    pub bytes_per_round: Vec<u128>,
    pub status: RunStatus,
}

impl ElectionTranscript {
    pub fn total_bytes(&self) -> u128 {
        self.bytes_per_round.iter().fold(0u128, |acc, &b| acc.saturating_add(b))
    }

    /// Writes `node,decision,path,round` rows, then
    /// `summary,<status>,<total bytes>,<rounds>`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["node", "decision", "path", "round"])?;
        for (u, rec) in self.nodes.iter().enumerate() {
            let (tag, path) = match &rec.decision {
                None => ("undecided", String::new()),
                Some(d @ Decision::NonLeader(p)) => {
                    (d.tag(), p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("."))
                }
                Some(d) => (d.tag(), String::new()),
            };
            let round = rec.halted_round.map(|r| r.to_string()).unwrap_or_default();
            w.write_record([u.to_string(), tag.to_string(), path, round])?;
        }
        w.write_record([
            "summary".to_string(),
            self.status.to_string(),
            self.total_bytes().to_string(),
            self.rounds.to_string(),
        ])?;
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Defaults to `4n + 4`.
    pub round_cap: Option<usize>,
    pub mode: MessageMode,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { round_cap: None, mode: MessageMode::Interned }
    }
}

pub fn default_round_cap(n: usize) -> usize {
    4 * n + 4
}

fn message_len(shared: &mut Shared, m: &Message) -> u128 {
    match m {
        Message::View(id) => shared.table.encoded_len(*id),
        Message::Encoded(bytes) => bytes.len() as u128,
    }
}

/// Runs one program per node until all halt or the round cap is reached.
pub fn run_sync(
    g: &PortGraph,
    algorithm: &str,
    factory: &ProgramFactory<'_>,
    knowledge: Knowledge,
    options: RunOptions,
) -> Result<ElectionTranscript, SimError> {
    knowledge.check(g)?;
    let cap = options.round_cap.unwrap_or_else(|| default_round_cap(g.node_count()));
    if cap == 0 {
        return Err(SimError::RoundCap);
    }
    let n = g.node_count();
    let mut shared = Shared { table: ViewTable::new(), mode: options.mode };
    let mut programs: Vec<Box<dyn NodeProgram>> = g.nodes().map(|u| factory(g.degree(u), &knowledge)).collect();
    let mut records = vec![NodeRecord { decision: None, decided_round: None, halted_round: None }; n];
    let mut running = vec![true; n];

    let observe = |records: &mut [NodeRecord], program: &dyn NodeProgram, u: usize, round: usize| {
        let current = program.decision().cloned();
        match (&records[u].decision, current) {
            (None, Some(d)) => {
                records[u].decision = Some(d);
                records[u].decided_round = Some(round);
                Ok(())
            }
            (Some(old), Some(new)) if *old == new => Ok(()),
            (None, None) => Ok(()),
            _ => Err(SimError::DecisionChanged { round, node: u }),
        }
    };

    for u in 0..n {
        if programs[u].start(&mut shared) == Status::Halted {
            running[u] = false;
            records[u].halted_round = Some(0);
        }
        observe(&mut records, programs[u].as_ref(), u, 0)?;
    }

    let mut round = 0;
    let mut bytes_per_round = Vec::new();
    while running.iter().any(|&r| r) && round < cap {
        round += 1;
        let mut inboxes: Vec<Inbox> = g.nodes().map(|u| vec![None; g.degree(u)]).collect();
        let mut bytes: u128 = 0;
        for u in 0..n {
            if !running[u] {
                continue;
            }
            let mut used = vec![false; g.degree(u)];
            for (port, message) in programs[u].send(&mut shared) {
                let degree = g.degree(u);
                if port as usize >= degree {
                    return Err(SimError::BadPort { round, node: u, port, degree });
                }
                if std::mem::replace(&mut used[port as usize], true) {
                    return Err(SimError::DoubleSend { round, node: u, port });
                }
                bytes = bytes.saturating_add(message_len(&mut shared, &message));
                let (v, q) = g.neighbor(u, port);
                if running[v] {
                    inboxes[v][q as usize] = Some(Delivery { remote_port: port, message });
                }
            }
        }
        bytes_per_round.push(bytes);
        for (u, inbox) in inboxes.into_iter().enumerate() {
            if !running[u] {
                continue;
            }
            let status =
                programs[u].receive(&mut shared, inbox).map_err(|cause| SimError::Program { round, node: u, cause })?;
            observe(&mut records, programs[u].as_ref(), u, round)?;
            if status == Status::Halted {
                running[u] = false;
                records[u].halted_round = Some(round);
            }
        }
    }

    let status = if running.iter().any(|&r| r) { RunStatus::Timeout } else { RunStatus::Completed };
    Ok(ElectionTranscript {
        algorithm: algorithm.to_string(),
        knowledge,
        nodes: records,
        rounds: round,
        bytes_per_round,
        status,
    })
}

/// The COM state of one node: its current view `V^i(u)`.
#[derive(Clone, Debug)]
pub struct ComState {
    degree: usize,
    view: ViewClassId,
}

impl ComState {
    /// `V^0(u)`: the degree alone.
    pub fn new(degree: usize, shared: &mut Shared) -> Self {
        ComState { degree, view: shared.table.leaf(degree as u32) }
    }

    pub fn view(&self) -> ViewClassId {
        self.view
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of COM calls completed so far.
    pub fn depth(&self, shared: &Shared) -> u32 {
        shared.table.depth(self.view)
    }

    /// Sends `V^i(u)` on every port.
    pub fn com_round(&self, shared: &mut Shared) -> Outbox {
        let message = match shared.mode {
            MessageMode::Interned => Message::View(self.view),
            MessageMode::Explicit => Message::Encoded(shared.table.encode(self.view)),
        };
        (0..self.degree as Port).map(|p| (p, message.clone())).collect()
    }

    /// Combines the neighbors' `V^i` into `V^{i+1}(u)`.
    pub fn absorb(&mut self, shared: &mut Shared, inbox: Inbox) -> Result<ViewClassId, ProgramError> {
        let depth = shared.table.depth(self.view);
        if inbox.len() != self.degree {
            return Err(ProgramError(format!("inbox has {} slots, degree is {}", inbox.len(), self.degree)));
        }
        if self.degree == 0 {
            self.view = shared.table.isolated(depth + 1);
            return Ok(self.view);
        }
        let mut children = Vec::with_capacity(self.degree);
        for (port, slot) in inbox.into_iter().enumerate() {
            let delivery = slot.ok_or_else(|| ProgramError(format!("no message on port {port}")))?;
            let child = match delivery.message {
                Message::View(id) => {
                    if id.index() >= shared.table.len() || shared.table.depth(id) != depth {
                        return Err(ProgramError(format!("port {port}: not a depth-{depth} view reference")));
                    }
                    id
                }
                Message::Encoded(bytes) => {
                    let tree = canonical_decode(&bytes, depth)
                        .map_err(|e| ProgramError(format!("port {port}: malformed view: {e}")))?;
                    shared.table.intern_tree(&tree)
                }
            };
            children.push((delivery.remote_port, child));
        }
        self.view = shared.table.inner(self.degree as u32, children);
        Ok(self.view)
    }
}
