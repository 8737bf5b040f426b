use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::address::{shared_lobe, tree_distance, LobeId, VertexId};
use super::ball::Ball;
use super::canonical::CanonicalGraph;
use super::{AddressedGraph, Direction, Neighborhood};
use crate::amalgam::ValidatedAmalgam;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// The orbital digraph `(Ω, (α, β)^G)` over an amalgam, explored lazily.
///
/// Since `G` is vertex-transitive the seed is moved so that `α` is the root.
/// The out-neighbors of the root are then the vertex-group orbit of the moved
/// `β`, and every other vertex's neighbors are translates of the root's.
#[derive(Debug, Clone)]
pub struct OrbitalHandle<'a> {
    am: &'a ValidatedAmalgam,
    alpha: VertexId,
    beta: VertexId,
    seed: VertexId,
    span: usize,
    out_orbit: Vec<VertexId>,
    in_orbit: Vec<VertexId>,
}

impl<'a> OrbitalHandle<'a> {
    pub fn new(am: &'a ValidatedAmalgam, alpha: VertexId, beta: VertexId) -> Result<Self> {
        am.check_address(&alpha)?;
        am.check_address(&beta)?;
        if alpha == beta {
            return Err(Error::input("diagonal orbital digraphs are not represented"));
        }
        let w_alpha = am.vertex_word(&alpha)?;
        let seed = am.act_unchecked(&am.invert(&w_alpha)?, &beta);
        let gamma = am.act_unchecked(&am.invert(&am.vertex_word(&seed)?)?, &VertexId::root());
        let span = tree_distance(&VertexId::root(), &seed);
        Ok(OrbitalHandle {
            am,
            out_orbit: vertex_group_orbit(am, &seed),
            in_orbit: vertex_group_orbit(am, &gamma),
            alpha,
            beta,
            seed,
            span,
        })
    }

    /// The handle whose orbital digraph is `Γ(m, Λ)` itself.
    pub fn lambda_arc(am: &'a ValidatedAmalgam) -> Self {
        let (_, y) = am.spec().lambda_arc;
        OrbitalHandle::new(am, VertexId::root(), VertexId::from_pairs(&[(0, y)]))
            .expect("lambda arc handle is valid")
    }

    pub fn amalgam(&self) -> &'a ValidatedAmalgam {
        self.am
    }

    pub fn alpha(&self) -> &VertexId {
        &self.alpha
    }

    pub fn beta(&self) -> &VertexId {
        &self.beta
    }

    /// The image of `β` after moving `α` to the root.
    pub fn seed(&self) -> &VertexId {
        &self.seed
    }

    /// Distance between the seed vertices in the block-cut-vertex tree.
    pub fn span(&self) -> usize {
        self.span
    }

    pub fn out_degree(&self) -> usize {
        self.out_orbit.len()
    }

    pub fn in_degree(&self) -> usize {
        self.in_orbit.len()
    }

    /// Whether the arc orbit is closed under reversal.
    pub fn is_symmetric(&self) -> bool {
        self.out_orbit == self.in_orbit
    }

    /// For a span-2 seed the orbital digraph is `Γ(m, Λ')` with `Λ'` the
    /// lobe-group orbital digraph through the seed's in-lobe label.
    pub fn as_canonical(&self) -> Option<CanonicalGraph<'a>> {
        if self.span != 2 {
            return None;
        }
        let label = self.seed.last()?.point;
        let lobe = self.am.lobe_group().orbital_digraph(self.am.delta(), label).ok()?;
        CanonicalGraph::with_lobe(self.am, lobe).ok()
    }

    /// Undirected distance, searching no further than `limit`.
    pub fn distance(&self, u: &VertexId, w: &VertexId, limit: usize) -> Result<Option<usize>> {
        if let Some(g) = self.as_canonical() {
            let d = g.distance(u, w);
            return Ok((d <= limit).then_some(d));
        }
        bounded_distance(self, u, w, limit)
    }

    pub fn ball(&self, r: usize, limits: &Limits) -> Result<Ball> {
        Ball::build(self, &self.alpha, r, limits)
    }
}

fn vertex_group_orbit(am: &ValidatedAmalgam, v: &VertexId) -> Vec<VertexId> {
    let orbit: BTreeSet<VertexId> = am
        .vertex_group_elements()
        .iter()
        .map(|a| {
            let g = am
                .element(crate::amalgam::Factor::A, a)
                .expect("vertex group element");
            am.act_unchecked(&g, v)
        })
        .collect();
    orbit.into_iter().collect()
}

/// Breadth-first undirected distance in any neighborhood, capped at `limit`.
pub(crate) fn bounded_distance<N: Neighborhood>(
    g: &N,
    u: &N::Vertex,
    w: &N::Vertex,
    limit: usize,
) -> Result<Option<usize>> {
    if u == w {
        return Ok(Some(0));
    }
    let mut dist = HashMap::from([(u.clone(), 0usize)]);
    let mut queue = VecDeque::from([u.clone()]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == limit {
            continue;
        }
        for (y, _) in g.neighbors(&x)? {
            if &y == w {
                return Ok(Some(d + 1));
            }
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    Ok(None)
}

impl Neighborhood for OrbitalHandle<'_> {
    type Vertex = VertexId;

    fn neighbors(&self, v: &VertexId) -> Result<Vec<(VertexId, Direction)>> {
        self.am.check_address(v)?;
        let w = self.am.vertex_word(v)?;
        let mut flags: BTreeMap<VertexId, (bool, bool)> = BTreeMap::new();
        for x in &self.out_orbit {
            flags.entry(self.am.act_unchecked(&w, x)).or_default().0 = true;
        }
        for x in &self.in_orbit {
            flags.entry(self.am.act_unchecked(&w, x)).or_default().1 = true;
        }
        Ok(flags
            .into_iter()
            .map(|(x, (o, i))| (x, Direction::from_flags(o, i).expect("flagged")))
            .collect())
    }
}

impl AddressedGraph for OrbitalHandle<'_> {
    fn amalgam(&self) -> &ValidatedAmalgam {
        self.am
    }

    fn lobe_tag(&self, u: &VertexId, w: &VertexId) -> Option<LobeId> {
        if self.span == 2 {
            shared_lobe(u, w)
        } else {
            None
        }
    }

    fn lobe_order(&self) -> Option<usize> {
        (self.span == 2).then(|| self.am.lobe_degree())
    }

    fn projected_ball_size(&self, r: usize) -> u128 {
        if let Some(g) = self.as_canonical() {
            return g.ball_size(r);
        }
        let d = (self.out_orbit.len() + self.in_orbit.len()) as u128;
        let mut total: u128 = 1;
        let mut layer: u128 = d;
        for _ in 0..r {
            total = total.saturating_add(layer);
            layer = layer.saturating_mul(d.saturating_sub(1).max(1));
        }
        total
    }
}

/// Radius-`r` ball of the orbital digraph around `α`.
pub fn orbital_ball(handle: &OrbitalHandle, r: usize, limits: &Limits) -> Result<Ball> {
    handle.ball(r, limits)
}
