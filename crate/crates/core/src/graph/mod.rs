//! Lazy realization of `Γ(m, Λ)` and of orbital digraphs `(Ω, (α, β)^G)`.

pub mod address;
mod ball;
mod canonical;
mod orbital;
mod suborbits;

use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;

use crate::amalgam::ValidatedAmalgam;
use crate::digraph::FiniteDigraph;
use crate::error::Result;

pub use address::{shared_lobe, tree_distance, LobeId, Step, VertexId};
pub use ball::{Ball, BallArc, BallVertex};
pub use canonical::{expand_ball, CanonicalGraph};
pub use orbital::{orbital_ball, OrbitalHandle};
pub use suborbits::{suborbits, Suborbit, SuborbitReport};

/// Arc orientation relative to the vertex whose neighbors are listed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Direction {
    Out,
    In,
    Both,
}

impl Direction {
    pub fn has_out(self) -> bool {
        matches!(self, Direction::Out | Direction::Both)
    }

    pub fn has_in(self) -> bool {
        matches!(self, Direction::In | Direction::Both)
    }

    pub(crate) fn from_flags(out: bool, inn: bool) -> Option<Direction> {
        match (out, inn) {
            (true, true) => Some(Direction::Both),
            (true, false) => Some(Direction::Out),
            (false, true) => Some(Direction::In),
            (false, false) => None,
        }
    }
}

/// A locally finite digraph explored one vertex at a time.
pub trait Neighborhood {
    type Vertex: Clone + Eq + Hash + Ord + Debug;

    /// Adjacent vertices, sorted, with the arc direction seen from `v`.
    fn neighbors(&self, v: &Self::Vertex) -> Result<Vec<(Self::Vertex, Direction)>>;
}

/// A digraph on the vertex set of `Γ(m, Λ)`, the cosets of the vertex group.
pub trait AddressedGraph: Neighborhood<Vertex = VertexId> {
    fn amalgam(&self) -> &ValidatedAmalgam;

    /// The lobe an arc `u -> w` belongs to, when the digraph is lobe-structured.
    fn lobe_tag(&self, u: &VertexId, w: &VertexId) -> Option<LobeId>;

    /// Vertex count of each lobe when arcs are lobe-tagged.
    fn lobe_order(&self) -> Option<usize>;

    /// An upper bound on the radius-`r` ball size used for the cap check.
    fn projected_ball_size(&self, r: usize) -> u128;
}

impl Neighborhood for FiniteDigraph {
    type Vertex = usize;

    fn neighbors(&self, v: &usize) -> Result<Vec<(usize, Direction)>> {
        let out = self.out_neighbors(*v);
        let inn = self.in_neighbors(*v);
        Ok(self
            .adjacent(*v)
            .into_iter()
            .filter_map(|w| {
                Direction::from_flags(out.contains(&w), inn.contains(&w)).map(|d| (w, d))
            })
            .collect())
    }
}
