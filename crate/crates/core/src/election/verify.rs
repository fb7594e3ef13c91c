//! Checks an election transcript against the graph it ran on.

use std::fmt;

use super::Algorithm;
use crate::graph::{diameter, PortGraph};
use crate::sim::{Decision, ElectionTranscript, RunStatus};
use crate::view::ViewEngine;

/// Limit on COM calls for an algorithm on a given graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    AtMost(usize),
    Exactly(usize),
}

impl Bound {
    pub fn admits(self, calls: usize) -> bool {
        match self {
            Bound::AtMost(b) => calls <= b,
            Bound::Exactly(b) => calls == b,
        }
    }

    pub fn value(self) -> usize {
        match self {
            Bound::AtMost(b) | Bound::Exactly(b) => b,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::AtMost(b) => write!(f, "<= {b}"),
            Bound::Exactly(b) => write!(f, "= {b}"),
        }
    }
}

/// COM-call bound of `algorithm` on a graph with `n` nodes, diameter `d`
/// and stabilization depth `big_lambda`. A single node needs no calls.
pub fn com_bound(algorithm: Algorithm, n: usize, d: usize, big_lambda: usize) -> Bound {
    if n == 1 {
        return Bound::Exactly(0);
    }
    match algorithm {
        Algorithm::WleDiam | Algorithm::SleSizeDiam => Bound::AtMost(d + big_lambda + 1),
        Algorithm::WleSize => Bound::AtMost(d + big_lambda + 2),
        Algorithm::SleSize => Bound::Exactly(2 * n - 2),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name, passed, detail: detail.into() });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Checks termination, a unique leader (or unanimous impossibility),
/// path validity, the verdict against solvability and the round bound.
pub fn verify_outcome(g: &PortGraph, t: &ElectionTranscript) -> VerificationReport {
    let mut report = VerificationReport::default();
    let n = g.node_count();

    report.push("completed", t.status == RunStatus::Completed, format!("status {}", t.status));
    if t.nodes.len() != n {
        report.push("node count", false, format!("transcript has {} nodes, graph {n}", t.nodes.len()));
        return report;
    }

    let decisions: Vec<Option<&Decision>> = t.nodes.iter().map(|r| r.decision.as_ref()).collect();
    let undecided = decisions.iter().filter(|d| d.is_none()).count();
    let leaders: Vec<usize> = (0..n).filter(|&u| decisions[u] == Some(&Decision::Leader)).collect();
    let impossible = decisions.iter().filter(|d| **d == Some(&Decision::Impossible)).count();

    let mut engine = ViewEngine::new();
    let solvable = engine.is_solvable(g);

    if impossible > 0 {
        report.push("unanimous impossibility", impossible == n, format!("{impossible} of {n} nodes report impossible"));
        report.push("verdict", !solvable, format!("impossible reported, graph solvable = {solvable}"));
    } else {
        report.push(
            "unique leader",
            leaders.len() == 1 && undecided == 0,
            format!("{} leaders, {undecided} undecided", leaders.len()),
        );
        report.push("verdict", solvable, format!("leader elected, graph solvable = {solvable}"));
        if let [leader] = leaders[..] {
            let bad: Vec<usize> = (0..n)
                .filter(|&u| match decisions[u] {
                    Some(Decision::NonLeader(path)) => path.is_empty() || g.walk(u, path) != Some(leader),
                    _ => false,
                })
                .collect();
            report.push(
                "paths reach leader",
                bad.is_empty(),
                if bad.is_empty() { "all paths valid".to_string() } else { format!("invalid paths at nodes {bad:?}") },
            );
        }
    }

    match t.algorithm.parse::<Algorithm>() {
        Ok(algorithm) => {
            let d = diameter(g);
            let big_lambda = engine.stabilization_depth(g);
            let bound = com_bound(algorithm, n, d, big_lambda);
            let late: Vec<usize> =
                (0..n).filter(|&u| t.nodes[u].halted_round.is_some_and(|r| r > bound.value())).collect();
            report.push(
                "round bound",
                bound.admits(t.rounds) && late.is_empty(),
                format!("{} COM calls, bound {bound} (D = {d}, Λ = {big_lambda})", t.rounds),
            );
        }
        Err(e) => report.push("round bound", false, e.to_string()),
    }
    report
}
