//! Leader election in anonymous port-labeled networks.
//!
//! [`graph`] holds the port-labeled graph type and its file format, [`view`]
//! the view calculus (interned views, refinement, symmetry parameters),
//! [`constructions`] the graph families, [`sim`] the synchronous round
//! engine and [`election`] the election programs with their verifier.

pub mod constructions;
pub mod election;
pub mod graph;
pub mod sim;
pub mod view;

pub use election::{run_election, run_with_true_knowledge, verify_outcome, Algorithm, VerificationReport};
pub use graph::{diameter, parse_graph, serialize_graph, validate_graph, Edge, EdgeList, Port, PortGraph};
pub use sim::{Decision, ElectionTranscript, Knowledge, RunOptions};
pub use view::{Partition, SymmetryProfile, ViewClassId, ViewEngine, ViewTree};
