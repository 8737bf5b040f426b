//! Canonical connectivity-one orbital digraphs of infinite primitive groups,
//! realized from an amalgamated free product `G = A *_H P` of finite groups.

pub mod amalgam;
pub mod canonical;
pub mod decomposition;
pub mod digraph;
pub mod error;
pub mod graph;
pub mod group;
pub mod limits;
pub mod permutation;
pub mod suite;

pub use error::{Error, Result};
