//! Structure of balls: lobes, cut vertices, the block-cut-vertex tree, end
//! certificates, quasi-isometry constants and tree automorphism types.

mod blocks;
mod ends;
mod qi;
mod tree;

pub use blocks::{
    biconnected_components, block_cut_tree, cut_vertices, lobes, BlockCutTree, Lobe, LobeSet,
};
pub(crate) use blocks::analyze;
pub use ends::{classify_ends, classify_ends_with, EndClassification, EndReport, EndSource};
pub use qi::{quasi_isometry_check, QiReport, QiViolation};
pub use tree::{
    act_on_tree_vertex, classify_tree_automorphism, tree_ball, tree_vertex_distance,
    TreeIsometryClass, TreeVertex,
};
