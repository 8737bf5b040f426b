use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// A finite digraph on `0..vertex_count` without loops or repeated arcs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteDigraph {
    vertex_count: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl FiniteDigraph {
    pub fn new(vertex_count: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in arcs {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::input(format!("arc ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::input(format!("loop at {u}")));
            }
            set.insert((u, v));
        }
        Ok(FiniteDigraph {
            vertex_count,
            arcs: set,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &BTreeSet<(usize, usize)> {
        &self.arcs
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains(&(u, v))
    }

    pub fn out_neighbors(&self, u: usize) -> Vec<usize> {
        self.arcs.range((u, 0)..(u + 1, 0)).map(|&(_, v)| v).collect()
    }

    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        self.arcs.iter().filter(|&&(_, w)| w == v).map(|&(u, _)| u).collect()
    }

    /// Neighbors in the underlying undirected graph, sorted.
    pub fn adjacent(&self, u: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .arcs
            .iter()
            .filter_map(|&(a, b)| {
                if a == u {
                    Some(b)
                } else if b == u {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Undirected distance matrix; `None` marks unreachable pairs.
    pub fn undirected_distances(&self) -> Vec<Vec<Option<usize>>> {
        let adj: Vec<Vec<usize>> = (0..self.vertex_count).map(|u| self.adjacent(u)).collect();
        (0..self.vertex_count)
            .map(|s| {
                let mut dist = vec![None; self.vertex_count];
                dist[s] = Some(0);
                let mut queue = VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    let du = dist[u].unwrap();
                    for &v in &adj[u] {
                        if dist[v].is_none() {
                            dist[v] = Some(du + 1);
                            queue.push_back(v);
                        }
                    }
                }
                dist
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count == 0 || self.undirected_distances()[0].iter().all(Option::is_some)
    }

    /// Undirected diameter, or `None` if disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let d = self.undirected_distances();
        let mut best = 0;
        for row in d {
            for x in row {
                best = best.max(x?);
            }
        }
        Some(best)
    }

    /// Exact isomorphism test by backtracking; returns a vertex map `self -> other`.
    pub fn isomorphism(&self, other: &FiniteDigraph) -> Option<Vec<usize>> {
        let n = self.vertex_count;
        if n != other.vertex_count || self.arc_count() != other.arc_count() {
            return None;
        }
        let sig = |g: &FiniteDigraph, u: usize| (g.out_neighbors(u).len(), g.in_neighbors(u).len());
        let left: Vec<_> = (0..n).map(|u| sig(self, u)).collect();
        let right: Vec<_> = (0..n).map(|u| sig(other, u)).collect();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];

        fn extend(
            a: &FiniteDigraph,
            b: &FiniteDigraph,
            left: &[(usize, usize)],
            right: &[(usize, usize)],
            k: usize,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            let n = map.len();
            if k == n {
                return true;
            }
            for cand in 0..n {
                if used[cand] || left[k] != right[cand] {
                    continue;
                }
                let consistent = (0..k).all(|j| {
                    a.has_arc(k, j) == b.has_arc(cand, map[j])
                        && a.has_arc(j, k) == b.has_arc(map[j], cand)
                });
                if !consistent {
                    continue;
                }
                map[k] = cand;
                used[cand] = true;
                if extend(a, b, left, right, k + 1, map, used) {
                    return true;
                }
                used[cand] = false;
            }
            map[k] = usize::MAX;
            false
        }

        extend(self, other, &left, &right, 0, &mut map, &mut used).then_some(map)
    }

    pub fn is_isomorphic(&self, other: &FiniteDigraph) -> bool {
        self.isomorphism(other).is_some()
    }

    /// Relabels the vertices through `map` (old index -> new index).
    pub fn relabel(&self, map: &[usize]) -> Result<FiniteDigraph> {
        FiniteDigraph::new(
            self.vertex_count,
            self.arcs.iter().map(|&(u, v)| (map[u], map[v])),
        )
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n");
        for v in 0..self.vertex_count {
            let _ = writeln!(out, "  {v};");
        }
        for &(u, v) in &self.arcs {
            let _ = writeln!(out, "  {u} -> {v};");
        }
        out.push_str("}\n");
        out
    }
}
