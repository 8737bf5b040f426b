use std::collections::HashMap;
use std::collections::VecDeque;

use serde::Serialize;

use crate::digraph::FiniteDigraph;
use crate::error::{Error, Result};
use crate::graph::{CanonicalGraph, Neighborhood, OrbitalHandle, VertexId};
use crate::group::UnionFind;
use crate::limits::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EndClassification {
    Zero,
    One,
    Two,
    /// Some complement of a ball has at least three infinite components;
    /// with vertex-transitivity this forces `2^ℵ0` ends.
    Uncountable,
    /// The radius examined does not separate the cases.
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndReport {
    pub classification: EndClassification,
    /// `c_r` for `r = 0..=R`: components of the graph minus the closed ball
    /// `B_r` that reach beyond `B_{r+lookahead}`.
    pub certificate: Vec<usize>,
    pub monotone: bool,
    pub lookahead: usize,
    /// False when the lookahead is only known to give lower bounds.
    pub exact: bool,
}

/// What to classify.
pub enum EndSource<'g, 'a> {
    Canonical(&'g CanonicalGraph<'a>),
    Handle(&'g OrbitalHandle<'a>),
    Finite(&'g FiniteDigraph),
}

pub fn classify_ends(source: EndSource<'_, '_>, radius: usize, limits: &Limits) -> Result<EndReport> {
    match source {
        EndSource::Canonical(g) => {
            let k = g.lobe().diameter().unwrap_or(1).max(1);
            classify_ends_with(g, &VertexId::root(), radius, k, true, limits)
        }
        EndSource::Handle(h) => match h.as_canonical() {
            Some(g) => classify_ends(EndSource::Canonical(&g), radius, limits),
            None => classify_ends_with(h, h.alpha(), radius, h.span(), false, limits),
        },
        EndSource::Finite(d) => {
            let k = d.vertex_count().max(1);
            classify_ends_with(d, &0, radius, k, true, limits)
        }
    }
}

/// Component counts around `root`. A component of `Γ ∖ B_r` is counted when it
/// has a vertex at distance `r + k` with a neighbor at distance `r + k + 1`;
/// vertices of one component are joined within `B_{r+k}` when every arc has
/// bounded reach `k` across the tree structure.
pub fn classify_ends_with<N: Neighborhood>(
    g: &N,
    root: &N::Vertex,
    radius: usize,
    lookahead: usize,
    exact: bool,
    limits: &Limits,
) -> Result<EndReport> {
    let reach = radius + lookahead + 1;
    let mut index: HashMap<N::Vertex, usize> = HashMap::from([(root.clone(), 0)]);
    let mut dist = vec![0usize];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    let mut order = vec![root.clone()];
    while let Some(u) = queue.pop_front() {
        if dist[u] == reach {
            continue;
        }
        for (w, _) in g.neighbors(&order[u])? {
            let j = match index.get(&w) {
                Some(&j) => j,
                None => {
                    let j = order.len();
                    if j >= limits.max_vertices {
                        return Err(Error::capacity("end certificate ball", (j + 1) as u128, limits.max_vertices));
                    }
                    index.insert(w.clone(), j);
                    order.push(w);
                    dist.push(dist[u] + 1);
                    adj.push(Vec::new());
                    queue.push_back(j);
                    j
                }
            };
            adj[u].push(j);
            adj[j].push(u);
        }
    }
    let exhausted = !dist.iter().any(|&d| d == reach);

    let mut certificate = Vec::with_capacity(radius + 1);
    for r in 0..=radius {
        let outer = r + lookahead;
        let mut uf = UnionFind::new(order.len());
        for u in 0..order.len() {
            if dist[u] <= r || dist[u] > outer {
                continue;
            }
            for &w in &adj[u] {
                if dist[w] > r && dist[w] <= outer {
                    uf.union(u, w);
                }
            }
        }
        let mut roots: Vec<usize> = (0..order.len())
            .filter(|&u| dist[u] == outer && adj[u].iter().any(|&w| dist[w] == outer + 1))
            .map(|u| uf.find(u))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        certificate.push(roots.len());
    }

    let monotone = certificate.windows(2).all(|w| w[0] <= w[1]);
    let classification = if certificate.iter().any(|&c| c >= 3) {
        EndClassification::Uncountable
    } else if exhausted && certificate.iter().all(|&c| c == 0) {
        EndClassification::Zero
    } else if radius >= 1 && certificate[radius - 1] == certificate[radius] {
        match certificate[radius] {
            1 => EndClassification::One,
            2 => EndClassification::Two,
            _ => EndClassification::Unresolved,
        }
    } else {
        EndClassification::Unresolved
    };
    Ok(EndReport {
        classification,
        certificate,
        monotone,
        lookahead,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::fixtures;
    use crate::graph::Direction;

    #[test]
    fn ex1_doubles() {
        let am = fixtures::ex1();
        let g = CanonicalGraph::new(&am);
        let rep = classify_ends(EndSource::Canonical(&g), 3, &Limits::default()).unwrap();
        assert_eq!(rep.certificate, vec![2, 4, 8, 16]);
        assert_eq!(rep.classification, EndClassification::Uncountable);
        assert!(rep.monotone && rep.exact);
    }

    #[test]
    fn ex2_pentagons() {
        let am = fixtures::ex2();
        let g = CanonicalGraph::new(&am);
        let rep = classify_ends(EndSource::Canonical(&g), 2, &Limits::default()).unwrap();
        assert_eq!(rep.certificate[..2], [2, 6]);
        assert_eq!(rep.classification, EndClassification::Uncountable);
    }

    #[test]
    fn finite_lobe_has_no_ends() {
        let am = fixtures::ex2();
        let rep = classify_ends(EndSource::Finite(am.lambda()), 3, &Limits::default()).unwrap();
        assert_eq!(rep.classification, EndClassification::Zero);
    }

    struct Line;
    impl Neighborhood for Line {
        type Vertex = i64;
        fn neighbors(&self, v: &i64) -> Result<Vec<(i64, Direction)>> {
            Ok(vec![(v - 1, Direction::Both), (v + 1, Direction::Both)])
        }
    }

    struct Ray;
    impl Neighborhood for Ray {
        type Vertex = u64;
        fn neighbors(&self, v: &u64) -> Result<Vec<(u64, Direction)>> {
            let mut out = vec![(v + 1, Direction::Both)];
            if *v > 0 {
                out.insert(0, (v - 1, Direction::Both));
            }
            Ok(out)
        }
    }

    #[test]
    fn line_and_ray() {
        let l = Limits::default();
        let two = classify_ends_with(&Line, &0, 3, 1, true, &l).unwrap();
        assert_eq!(two.classification, EndClassification::Two);
        let one = classify_ends_with(&Ray, &0, 3, 1, true, &l).unwrap();
        assert_eq!(one.classification, EndClassification::One);
        let short = classify_ends_with(&Ray, &0, 0, 1, true, &l).unwrap();
        assert_eq!(short.classification, EndClassification::Unresolved);
    }
}
