//! Canonical orbital digraphs: construction, enumeration, refinement,
//! equivalence, centroids, and the checks of the amalgam decomposition.

mod centroid;
mod descriptor;
mod domain;
mod refine;

pub use centroid::{centroid, CentroidNode, CentroidResult};
pub use descriptor::{
    check_equivalence, construct_canonical, enumerate_canonical, lobe_group, CanonicalDescriptor,
};
pub use domain::{
    amalgam_decomposition_report, block_search, verify_segment_fundamental_domain, BlockSearchReport,
    BlockWitness, DecompositionReport, FundamentalDomainReport, MAX_MAXIMALITY_ORDER,
};
pub(crate) use descriptor::induced_digraph;
pub use refine::{refine_to_canonical, Connectivity, Refinement, RefinementOutcome, RefinementStage};
