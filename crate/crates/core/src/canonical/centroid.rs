use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::decomposition::{BlockCutTree, Lobe};
use crate::error::{Error, Result};
use crate::graph::VertexId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CentroidNode {
    CutVertex(VertexId),
    Lobe(Lobe),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentroidResult {
    pub node: CentroidNode,
    pub distance: usize,
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(dist[u].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// The node of `tree` minimizing the largest distance to the given vertices,
/// which must all be certified cut vertices of `tree` and end up equidistant.
pub fn centroid(vertices: &[VertexId], tree: &BlockCutTree) -> Result<CentroidResult> {
    if vertices.is_empty() {
        return Err(Error::input("centroid of an empty vertex set"));
    }
    let index: HashMap<&VertexId, usize> = tree
        .cut_vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let sources = vertices
        .iter()
        .map(|v| {
            index.get(v).copied().ok_or_else(|| {
                Error::Unresolved(format!("vertex {v:?} is not certified in the tree"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let adj = tree.adjacency();
    let dists: Vec<Vec<Option<usize>>> = sources.iter().map(|&s| bfs(&adj, s)).collect();

    let mut best: Option<(usize, usize)> = None;
    for x in 0..adj.len() {
        let Some(worst) = dists.iter().map(|d| d[x]).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let worst = worst.into_iter().max().unwrap();
        if best.is_none_or(|(b, _)| worst < b) {
            best = Some((worst, x));
        }
    }
    let (distance, x) = best.ok_or_else(|| Error::Unresolved("vertices lie in different tree components".into()))?;
    if dists.iter().any(|d| d[x] != Some(distance)) {
        return Err(Error::Consistency(
            "centroid is not equidistant from the vertex set".into(),
        ));
    }
    let c = tree.cut_vertices.len();
    let node = if x < c {
        CentroidNode::CutVertex(tree.cut_vertices[x].clone())
    } else {
        CentroidNode::Lobe(tree.lobes[x - c].clone())
    };
    Ok(CentroidResult { node, distance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::fixtures;
    use crate::canonical::enumerate_canonical;
    use crate::decomposition::block_cut_tree;
    use crate::limits::Limits;

    #[test]
    fn pentagon_lobe_in_pentagram_tree() {
        let am = fixtures::ex2();
        let all = enumerate_canonical(&am).unwrap();
        let gram = all[1].graph(&am).unwrap();
        let ball = gram.ball(&VertexId::root(), 3, &Limits::default()).unwrap();
        let tree = block_cut_tree(&ball).unwrap();
        let res = centroid(&all[0].root_lobe, &tree).unwrap();
        assert_eq!(res.distance, 1);
        match res.node {
            CentroidNode::Lobe(mut l) => {
                l.vertices.sort();
                assert_eq!(l.vertices, all[0].root_lobe)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn singleton_is_its_own_centroid() {
        let am = fixtures::ex1();
        let d = crate::canonical::construct_canonical(&am).unwrap();
        let ball = d.graph(&am).unwrap().ball(&VertexId::root(), 2, &Limits::default()).unwrap();
        let tree = block_cut_tree(&ball).unwrap();
        let res = centroid(&[VertexId::root()], &tree).unwrap();
        assert_eq!(res, CentroidResult { node: CentroidNode::CutVertex(VertexId::root()), distance: 0 });
        let own = centroid(&d.root_lobe, &tree).unwrap();
        assert_eq!(own.distance, 1);
    }

    #[test]
    fn boundary_lobe_is_unresolved() {
        let am = fixtures::ex2();
        let all = enumerate_canonical(&am).unwrap();
        let ball = all[1].graph(&am).unwrap().ball(&VertexId::root(), 2, &Limits::default()).unwrap();
        let tree = block_cut_tree(&ball).unwrap();
        assert!(matches!(centroid(&all[0].root_lobe, &tree), Err(Error::Unresolved(_))));
    }
}
