//! Leader election programs and an outcome verifier.
//!
//! Every algorithm elects, among the nodes with the smallest view at a
//! common depth, the one reached by the least port path, paths being
//! ordered by length first and then lexicographically.

mod programs;
mod verify;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::PortGraph;
use crate::sim::{run_sync, ElectionTranscript, Knowledge, NodeProgram, RunOptions, SimError};

pub use verify::{com_bound, verify_outcome, Bound, Check, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Weak election knowing the diameter.
    WleDiam,
    /// Weak election knowing the size.
    WleSize,
    /// Strong election knowing the size.
    SleSize,
    /// Strong election knowing size and diameter.
    SleSizeDiam,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] =
        [Algorithm::WleDiam, Algorithm::WleSize, Algorithm::SleSize, Algorithm::SleSizeDiam];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::WleDiam => "wle-diam",
            Algorithm::WleSize => "wle-size",
            Algorithm::SleSize => "sle-size",
            Algorithm::SleSizeDiam => "sle-size-diam",
        }
    }

    pub fn is_strong(self) -> bool {
        matches!(self, Algorithm::SleSize | Algorithm::SleSizeDiam)
    }

    pub fn needs_n(self) -> bool {
        !matches!(self, Algorithm::WleDiam)
    }

    pub fn needs_d(self) -> bool {
        matches!(self, Algorithm::WleDiam | Algorithm::SleSizeDiam)
    }

    /// The knowledge this algorithm runs with on `g`.
    pub fn knowledge_for(self, g: &PortGraph) -> Knowledge {
        Knowledge { n: self.needs_n().then(|| g.node_count()), d: self.needs_d().then(|| crate::graph::diameter(g)) }
    }

    /// Program for one node; fails when required knowledge is missing.
    pub fn program(self, degree: usize, k: &Knowledge) -> Result<Box<dyn NodeProgram>, ElectionError> {
        let n = k.n.ok_or(ElectionError::MissingKnowledge { algorithm: self, param: "n" });
        let d = k.d.ok_or(ElectionError::MissingKnowledge { algorithm: self, param: "D" });
        Ok(match self {
            Algorithm::WleDiam => Box::new(programs::KnownDiameter::new(degree, d?, None)),
            Algorithm::SleSizeDiam => Box::new(programs::KnownDiameter::new(degree, d?, Some(n?))),
            Algorithm::SleSize => Box::new(programs::KnownSize::new(degree, n?)),
            Algorithm::WleSize => Box::new(programs::KnownSizeWeak::new(degree, n?)),
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = ElectionError;

    fn from_str(s: &str) -> Result<Self, ElectionError> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| ElectionError::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum ElectionError {
    #[error("unknown algorithm {0:?} (expected wle-diam, wle-size, sle-size or sle-size-diam)")]
    UnknownAlgorithm(String),
    #[error("{algorithm} needs {param}")]
    MissingKnowledge { algorithm: Algorithm, param: &'static str },
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Runs `algorithm` on `g` with the given knowledge.
pub fn run_election(
    g: &PortGraph,
    algorithm: Algorithm,
    knowledge: Knowledge,
    options: RunOptions,
) -> Result<ElectionTranscript, ElectionError> {
    // surface missing knowledge before any program is built
    algorithm.program(0, &knowledge)?;
    let factory = |degree: usize, k: &Knowledge| algorithm.program(degree, k).expect("knowledge checked above");
    Ok(run_sync(g, algorithm.name(), &factory, knowledge, options)?)
}

/// Runs `algorithm` with exactly the knowledge it requires, taken from `g`.
pub fn run_with_true_knowledge(g: &PortGraph, algorithm: Algorithm) -> Result<ElectionTranscript, ElectionError> {
    run_election(g, algorithm, algorithm.knowledge_for(g), RunOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gen_gk, gen_m, gen_q, gen_t, gen_uniform_cycle};
    use crate::graph::EdgeList;
    use crate::sim::{Decision, RunStatus};

    fn p3() -> PortGraph {
        let mut l = EdgeList::new(3);
        l.push(0, 0, 1, 0);
        l.push(1, 1, 2, 0);
        PortGraph::try_from(l).unwrap()
    }

    fn leader(t: &ElectionTranscript) -> Option<usize> {
        let leaders: Vec<usize> =
            t.nodes.iter().enumerate().filter(|(_, r)| r.decision == Some(Decision::Leader)).map(|(u, _)| u).collect();
        (leaders.len() == 1).then(|| leaders[0])
    }

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("wle".parse::<Algorithm>().is_err());
    }

    #[test]
    fn p3_known_diameter_takes_four_calls() {
        let g = p3();
        let t = run_election(&g, Algorithm::WleDiam, Knowledge { n: None, d: Some(2) }, RunOptions::default()).unwrap();
        assert_eq!(t.rounds, 4);
        assert!(verify_outcome(&g, &t).passed());
    }

    #[test]
    fn p3_known_size_within_bound() {
        let g = p3();
        let t = run_with_true_knowledge(&g, Algorithm::WleSize).unwrap();
        assert!(t.rounds <= 5, "{} calls", t.rounds);
        assert!(verify_outcome(&g, &t).passed());
    }

    #[test]
    fn t3_and_m3_known_size() {
        let g = gen_t(3).unwrap();
        let t = run_with_true_knowledge(&g, Algorithm::SleSize).unwrap();
        assert_eq!(t.rounds, 24);
        assert!(leader(&t).is_some());
        assert!(verify_outcome(&g, &t).passed());

        let g = gen_m(3).unwrap();
        let t = run_with_true_knowledge(&g, Algorithm::SleSize).unwrap();
        assert_eq!(t.rounds, 50);
        assert!(t.nodes.iter().all(|r| r.decision == Some(Decision::Impossible) && r.halted_round == Some(50)));
        assert!(verify_outcome(&g, &t).passed());
    }

    #[test]
    fn uniform_cycle_is_impossible() {
        let g = gen_uniform_cycle(4).unwrap();
        for a in [Algorithm::SleSize, Algorithm::SleSizeDiam] {
            let t = run_with_true_knowledge(&g, a).unwrap();
            assert!(t.nodes.iter().all(|r| r.decision == Some(Decision::Impossible)));
        }
    }

    #[test]
    fn gk_is_impossible_quickly() {
        let g = gen_gk(2).unwrap();
        let t = run_with_true_knowledge(&g, Algorithm::SleSizeDiam).unwrap();
        assert!(t.nodes.iter().all(|r| r.decision == Some(Decision::Impossible)));
        assert!(t.rounds < 2 * 16 - 2);
    }

    #[test]
    fn algorithms_two_and_five_agree_on_t3() {
        let g = gen_t(3).unwrap();
        let a = run_with_true_knowledge(&g, Algorithm::WleDiam).unwrap();
        let b = run_with_true_knowledge(&g, Algorithm::SleSizeDiam).unwrap();
        assert_eq!(leader(&a), leader(&b));
        assert!(leader(&a).is_some());
    }

    #[test]
    fn single_node_elects_itself_without_rounds() {
        let g = PortGraph::single_node();
        for a in Algorithm::ALL {
            let t = run_with_true_knowledge(&g, a).unwrap();
            assert_eq!(t.rounds, 0);
            assert_eq!(t.nodes[0].decision, Some(Decision::Leader));
        }
    }

    #[test]
    fn q2_known_size() {
        let g = gen_q(2).unwrap();
        let t = run_with_true_knowledge(&g, Algorithm::WleSize).unwrap();
        assert_eq!(t.status, RunStatus::Completed);
        assert!(verify_outcome(&g, &t).passed());
    }

    #[test]
    fn missing_knowledge_is_rejected() {
        let g = p3();
        let err = run_election(&g, Algorithm::SleSizeDiam, Knowledge { n: Some(3), d: None }, RunOptions::default());
        assert!(matches!(err, Err(ElectionError::MissingKnowledge { param: "D", .. })));
    }
}
