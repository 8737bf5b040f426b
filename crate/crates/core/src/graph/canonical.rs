use std::collections::BTreeMap;

use super::address::{shared_lobe, LobeId, VertexId};
use super::ball::Ball;
use super::{AddressedGraph, Direction, Neighborhood};
use crate::amalgam::ValidatedAmalgam;
use crate::digraph::FiniteDigraph;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// `Γ(m, Λ')`: `m` copies of the lobe `Λ'` at every vertex, glued tree-like.
/// `Λ'` is any orbital digraph of the lobe group on `Δ`.
#[derive(Debug, Clone)]
pub struct CanonicalGraph<'a> {
    am: &'a ValidatedAmalgam,
    lobe: FiniteDigraph,
    dist: Vec<Vec<usize>>,
}

impl<'a> CanonicalGraph<'a> {
    /// `Γ(m, Λ)` for the amalgam's own lobe digraph.
    pub fn new(am: &'a ValidatedAmalgam) -> Self {
        Self::with_lobe(am, am.lambda().clone()).expect("validated lobe digraph is connected")
    }

    pub fn with_lobe(am: &'a ValidatedAmalgam, lobe: FiniteDigraph) -> Result<Self> {
        if lobe.vertex_count() != am.lobe_degree() {
            return Err(Error::input("lobe digraph has the wrong number of vertices"));
        }
        let dist = lobe
            .undirected_distances()
            .into_iter()
            .map(|row| row.into_iter().collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::input("lobe digraph is disconnected"))?;
        Ok(CanonicalGraph { am, lobe, dist })
    }

    pub fn lobe(&self) -> &FiniteDigraph {
        &self.lobe
    }

    /// Undirected distance between two lobe labels.
    pub fn lobe_distance(&self, x: usize, y: usize) -> usize {
        self.dist[x][y]
    }

    pub fn degree(&self) -> usize {
        self.am.m() * self.lobe.adjacent(self.am.delta()).len()
    }

    /// Exact undirected distance in `Γ(m, Λ')`. Every shortest path follows
    /// the block-cut-vertex tree and crosses each lobe on the way once.
    pub fn distance(&self, u: &VertexId, w: &VertexId) -> usize {
        let delta = self.am.delta();
        let c = u.common_prefix_len(w);
        let (a, b) = (&u.steps()[c..], &w.steps()[c..]);
        let climb = |steps: &[super::Step]| -> usize {
            steps.iter().map(|s| self.dist[s.point][delta]).sum()
        };
        let mut total = climb(a) + climb(b);
        if let (Some(x), Some(y)) = (a.first(), b.first()) {
            if x.lobe == y.lobe {
                total = total - self.dist[x.point][delta] - self.dist[y.point][delta]
                    + self.dist[x.point][y.point];
            }
        }
        total
    }

    /// Exact vertex count of a radius-`r` ball, saturating.
    pub fn ball_size(&self, r: usize) -> u128 {
        let delta = self.am.delta();
        let m = self.am.m() as u128;
        let mut counts = vec![0u128; r + 1];
        for &d in &self.dist[delta] {
            if d >= 1 && d <= r {
                counts[d] += 1;
            }
        }
        // through[k]: vertices within distance k reached through one lobe at a vertex
        let mut through = vec![0u128; r + 1];
        for k in 1..=r {
            let mut acc: u128 = 0;
            for d in 1..=k {
                let below = 1u128.saturating_add((m - 1).saturating_mul(through[k - d]));
                acc = acc.saturating_add(counts[d].saturating_mul(below));
            }
            through[k] = acc;
        }
        1u128.saturating_add(m.saturating_mul(through[r]))
    }

    /// Lobes through `v` as `(lobe, label of v inside it)`.
    pub fn lobes_through(&self, v: &VertexId) -> Vec<(LobeId, usize)> {
        let delta = self.am.delta();
        let mut out = Vec::with_capacity(self.am.m());
        if let (Some(parent), Some(last)) = (v.parent(), v.last()) {
            out.push((LobeId::new(parent, last.lobe), last.point));
        }
        let first = if v.is_root() { 0 } else { 1 };
        for c in first..self.am.m() {
            out.push((LobeId::new(v.clone(), c), delta));
        }
        out
    }

    pub fn ball(&self, center: &VertexId, r: usize, limits: &Limits) -> Result<Ball> {
        Ball::build(self, center, r, limits)
    }
}

impl Neighborhood for CanonicalGraph<'_> {
    type Vertex = VertexId;

    fn neighbors(&self, v: &VertexId) -> Result<Vec<(VertexId, Direction)>> {
        self.am.check_address(v)?;
        let delta = self.am.delta();
        let mut out = BTreeMap::new();
        for (lobe, label) in self.lobes_through(v) {
            for y in self.lobe.adjacent(label) {
                let dir = Direction::from_flags(self.lobe.has_arc(label, y), self.lobe.has_arc(y, label))
                    .expect("adjacent labels share an arc");
                out.insert(lobe.member(y, delta), dir);
            }
        }
        Ok(out.into_iter().collect())
    }
}

impl AddressedGraph for CanonicalGraph<'_> {
    fn amalgam(&self) -> &ValidatedAmalgam {
        self.am
    }

    fn lobe_tag(&self, u: &VertexId, w: &VertexId) -> Option<LobeId> {
        shared_lobe(u, w)
    }

    fn lobe_order(&self) -> Option<usize> {
        Some(self.am.lobe_degree())
    }

    fn projected_ball_size(&self, r: usize) -> u128 {
        self.ball_size(r)
    }
}

/// The radius-`r` ball of `Γ(m, Λ)` around the root.
pub fn expand_ball(am: &ValidatedAmalgam, r: usize, limits: &Limits) -> Result<Ball> {
    CanonicalGraph::new(am).ball(&VertexId::root(), r, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::fixtures;
    use std::collections::{HashMap, VecDeque};

    fn bfs(g: &CanonicalGraph, from: &VertexId, r: usize) -> HashMap<VertexId, usize> {
        let mut dist = HashMap::from([(from.clone(), 0)]);
        let mut queue = VecDeque::from([from.clone()]);
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            if d == r {
                continue;
            }
            for (w, _) in g.neighbors(&u).unwrap() {
                dist.entry(w.clone()).or_insert_with(|| {
                    queue.push_back(w);
                    d + 1
                });
            }
        }
        dist
    }

    #[test]
    fn root_neighbors() {
        let am1 = fixtures::ex1();
        let g1 = CanonicalGraph::new(&am1);
        let n1 = g1.neighbors(&VertexId::root()).unwrap();
        assert_eq!(n1.len(), 4);
        assert!(n1.iter().all(|(_, d)| *d == Direction::Both));

        let am2 = fixtures::ex2();
        let g2 = CanonicalGraph::new(&am2);
        let labels: Vec<String> = g2
            .neighbors(&VertexId::root())
            .unwrap()
            .iter()
            .map(|(v, _)| v.to_string())
            .collect();
        assert_eq!(labels, ["0.1", "0.4", "1.1", "1.4"]);
    }

    #[test]
    fn distance_formula_matches_bfs() {
        for am in [fixtures::ex1(), fixtures::ex2()] {
            let g = CanonicalGraph::new(&am);
            let centers: Vec<VertexId> = bfs(&g, &VertexId::root(), 2).into_keys().collect();
            for c in centers {
                for (v, d) in bfs(&g, &c, 4) {
                    assert_eq!(g.distance(&c, &v), d, "{c} -> {v}");
                }
            }
        }
    }

    #[test]
    fn ball_size_recurrence_matches_bfs() {
        for am in [fixtures::ex1(), fixtures::ex2()] {
            let g = CanonicalGraph::new(&am);
            for r in 0..=5 {
                assert_eq!(g.ball_size(r), bfs(&g, &VertexId::root(), r).len() as u128);
            }
        }
        let am = fixtures::ex2();
        let g = CanonicalGraph::new(&am);
        assert_eq!(g.ball_size(2), 17);
        assert_eq!(g.ball_size(6), 1033);
        assert!(g.ball_size(10_000) > 1_000_000);
    }

    #[test]
    fn neighbors_are_equivariant() {
        use rand::SeedableRng;
        let am = fixtures::ex2();
        let g = CanonicalGraph::new(&am);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let v: VertexId = "1.2/1.1".parse().unwrap();
        for _ in 0..50 {
            let x = am.random_element(&mut rng, 5);
            let mut moved: Vec<(VertexId, Direction)> = g
                .neighbors(&v)
                .unwrap()
                .into_iter()
                .map(|(w, d)| (am.act_on_vertex(&x, &w).unwrap(), d))
                .collect();
            moved.sort();
            let vx = am.act_on_vertex(&x, &v).unwrap();
            assert_eq!(moved, g.neighbors(&vx).unwrap());
        }
    }
}
