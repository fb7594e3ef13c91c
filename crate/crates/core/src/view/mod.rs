//! Views, their canonical order, and the partitions they induce.

mod distinguish;
mod local;
mod refine;
mod table;
mod tree;

pub use distinguish::{node_type, shortest_distinguishing_path, PathError};
pub use local::{
    distinct_subviews, elect_smallest, least_graph_path, least_path_to, levels, max_distinct_views,
    reconstruct_quotient, ReconstructError, Reconstruction,
};
pub use refine::{initial_colors, refine_step, Partition, Refinement, SymmetryProfile, ViewEngine};
pub use table::{ViewClassId, ViewNode, ViewTable};
pub use tree::{
    canonical_decode, canonical_encode, view_at_depth, view_at_depth_capped, DecodeError, ViewChild, ViewError,
    ViewTree, DEFAULT_EXPANSION_CAP,
};
