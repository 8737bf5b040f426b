use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Ball, LobeId, VertexId};

/// Biconnected components and articulation points of an undirected graph
/// given by adjacency lists (Hopcroft–Tarjan, iterative).
pub fn biconnected_components(adj: &[Vec<usize>]) -> (Vec<Vec<usize>>, Vec<bool>) {
    let n = adj.len();
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut articulation = vec![false; n];
    let mut blocks = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut time = 0;

    for s in 0..n {
        if disc[s] != UNSEEN {
            continue;
        }
        disc[s] = time;
        low[s] = time;
        time += 1;
        if adj[s].is_empty() {
            blocks.push(vec![s]);
            continue;
        }
        let mut root_children = 0;
        let mut stack: Vec<(usize, usize, usize)> = vec![(s, UNSEEN, 0)];
        while let Some(&(u, parent, i)) = stack.last() {
            if i < adj[u].len() {
                stack.last_mut().unwrap().2 += 1;
                let w = adj[u][i];
                if disc[w] == UNSEEN {
                    edges.push((u, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if u == s {
                        root_children += 1;
                    }
                    stack.push((w, u, 0));
                } else if w != parent && disc[w] < disc[u] {
                    edges.push((u, w));
                    low[u] = low[u].min(disc[w]);
                }
                continue;
            }
            stack.pop();
            let Some(&(p, _, _)) = stack.last() else {
                continue;
            };
            low[p] = low[p].min(low[u]);
            if low[u] >= disc[p] {
                if p != s {
                    articulation[p] = true;
                }
                let mut block = Vec::new();
                while let Some(e) = edges.pop() {
                    block.push(e.0);
                    block.push(e.1);
                    if e == (p, u) {
                        break;
                    }
                }
                block.sort_unstable();
                block.dedup();
                blocks.push(block);
            }
        }
        if root_children > 1 {
            articulation[s] = true;
        }
    }
    blocks.sort();
    (blocks, articulation)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lobe {
    pub vertices: Vec<VertexId>,
    /// The lobe tag shared by all arcs of the block, if there is exactly one.
    pub tag: Option<LobeId>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LobeSet {
    pub certified: Vec<Lobe>,
    pub boundary_blocks: Vec<Lobe>,
    pub cut_vertices: Vec<VertexId>,
}

impl LobeSet {
    pub fn certified_count(&self) -> usize {
        self.certified.len()
    }
}

pub(crate) struct BlockAnalysis {
    pub(crate) blocks: Vec<Vec<usize>>,
    pub(crate) tags: Vec<Option<LobeId>>,
    pub(crate) certified: Vec<bool>,
    pub(crate) cut: Vec<bool>,
}

fn is_connected(adj: &[Vec<usize>]) -> bool {
    if adj.is_empty() {
        return true;
    }
    let mut seen = vec![false; adj.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == adj.len()
}

/// A block is certified when it is provably a whole lobe of the infinite
/// digraph. With lobe tags this means it has the lobe order and one tag;
/// without, every vertex must lie strictly inside the ball.
pub(crate) fn analyze(ball: &Ball) -> Result<BlockAnalysis> {
    let adj = ball.undirected_adjacency();
    if !is_connected(&adj) {
        return Err(Error::input("ball is disconnected"));
    }
    let (blocks, articulation) = biconnected_components(&adj);
    let interior = |i: usize| ball.depth(i) < ball.radius();

    let mut arc_tags: HashMap<(usize, usize), Option<&LobeId>> = HashMap::new();
    for a in ball.arcs() {
        let key = (a.from.min(a.to), a.from.max(a.to));
        arc_tags.insert(key, a.lobe.as_ref());
    }

    let mut tags = Vec::with_capacity(blocks.len());
    let mut certified = Vec::with_capacity(blocks.len());
    for block in &blocks {
        let members: BTreeSet<usize> = block.iter().copied().collect();
        let mut seen_tags: BTreeSet<Option<&LobeId>> = BTreeSet::new();
        for &u in block {
            for &w in adj[u].iter().filter(|&&w| w > u && members.contains(&w)) {
                seen_tags.insert(arc_tags[&(u, w)]);
            }
        }
        let tag = match (seen_tags.len(), seen_tags.iter().next()) {
            (1, Some(Some(t))) => Some((*t).clone()),
            _ => None,
        };
        let ok = match ball.lobe_order() {
            Some(k) => tag.is_some() && block.len() == k,
            None => block.len() >= 2 && block.iter().all(|&i| interior(i)),
        };
        tags.push(tag);
        certified.push(ok);
    }
    let cut = (0..ball.len())
        .map(|i| articulation[i] && interior(i))
        .collect();
    Ok(BlockAnalysis {
        blocks,
        tags,
        certified,
        cut,
    })
}

pub fn lobes(ball: &Ball) -> Result<LobeSet> {
    let an = analyze(ball)?;
    let to_lobe = |k: usize| Lobe {
        vertices: an.blocks[k].iter().map(|&i| ball.address(i).clone()).collect(),
        tag: an.tags[k].clone(),
    };
    let mut certified = Vec::new();
    let mut boundary_blocks = Vec::new();
    for k in 0..an.blocks.len() {
        if an.certified[k] {
            certified.push(to_lobe(k));
        } else {
            boundary_blocks.push(to_lobe(k));
        }
    }
    let cut_vertices = (0..ball.len())
        .filter(|&i| an.cut[i])
        .map(|i| ball.address(i).clone())
        .collect();
    Ok(LobeSet {
        certified,
        boundary_blocks,
        cut_vertices,
    })
}

pub fn cut_vertices(ball: &Ball) -> Result<Vec<VertexId>> {
    Ok(lobes(ball)?.cut_vertices)
}

/// Bipartite incidence between certified cut vertices and certified lobes.
#[derive(Clone, Debug, Serialize)]
pub struct BlockCutTree {
    pub cut_vertices: Vec<VertexId>,
    pub lobes: Vec<Lobe>,
    /// `(cut vertex index, lobe index)` incidences; each stands for an arc in both directions.
    pub incidences: Vec<(usize, usize)>,
    pub root: Option<usize>,
}

impl BlockCutTree {
    pub fn cut_degree(&self, i: usize) -> usize {
        self.incidences.iter().filter(|e| e.0 == i).count()
    }

    pub fn lobe_degree(&self, j: usize) -> usize {
        self.incidences.iter().filter(|e| e.1 == j).count()
    }

    pub fn node_count(&self) -> usize {
        self.cut_vertices.len() + self.lobes.len()
    }

    /// Cut vertices are nodes `0..c`, lobes follow.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let c = self.cut_vertices.len();
        let mut adj = vec![Vec::new(); self.node_count()];
        for &(i, j) in &self.incidences {
            adj[i].push(c + j);
            adj[c + j].push(i);
        }
        adj
    }

    /// No cycles: every component has one fewer incidence than nodes.
    pub fn is_forest(&self) -> bool {
        let mut uf = crate::group::UnionFind::new(self.node_count());
        let c = self.cut_vertices.len();
        self.incidences.iter().all(|&(i, j)| uf.union(i, c + j))
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph block_cut_tree {\n");
        for (i, v) in self.cut_vertices.iter().enumerate() {
            let label = if v.is_root() { "root".to_string() } else { v.to_string() };
            let _ = writeln!(out, "  c{i} [shape=ellipse, label=\"{label}\"];");
        }
        for (j, l) in self.lobes.iter().enumerate() {
            let label = l
                .tag
                .as_ref()
                .map(|t| t.to_string())
                .unwrap_or_else(|| format!("block {j}"));
            let _ = writeln!(out, "  l{j} [shape=box, label=\"{label}\"];");
        }
        for &(i, j) in &self.incidences {
            let _ = writeln!(out, "  c{i} -> l{j};");
            let _ = writeln!(out, "  l{j} -> c{i};");
        }
        out.push_str("}\n");
        out
    }
}

pub fn block_cut_tree(ball: &Ball) -> Result<BlockCutTree> {
    let set = lobes(ball)?;
    let index: HashMap<&VertexId, usize> = set
        .cut_vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let mut incidences = Vec::new();
    for (j, lobe) in set.certified.iter().enumerate() {
        for v in &lobe.vertices {
            if let Some(&i) = index.get(v) {
                incidences.push((i, j));
            }
        }
    }
    incidences.sort_unstable();
    let root = index.get(ball.root()).copied();
    Ok(BlockCutTree {
        cut_vertices: set.cut_vertices,
        lobes: set.certified,
        incidences,
        root,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::fixtures;
    use crate::graph::expand_ball;
    use crate::limits::Limits;

    #[test]
    fn two_triangles_sharing_a_vertex() {
        let adj = vec![vec![1, 2], vec![0, 2], vec![0, 1, 3, 4], vec![2, 4], vec![2, 3]];
        let (blocks, art) = biconnected_components(&adj);
        assert_eq!(blocks, vec![vec![0, 1, 2], vec![2, 3, 4]]);
        assert_eq!(art, vec![false, false, true, false, false]);
    }

    #[test]
    fn path_blocks_are_edges() {
        let adj = vec![vec![1], vec![0, 2], vec![1]];
        let (blocks, art) = biconnected_components(&adj);
        assert_eq!(blocks, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(art, vec![false, true, false]);
    }

    #[test]
    fn ex1_radius_two() {
        let am = fixtures::ex1();
        let ball = expand_ball(&am, 2, &Limits::default()).unwrap();
        let set = lobes(&ball).unwrap();
        assert_eq!(set.certified_count(), 6);
        assert_eq!(set.cut_vertices.len(), 5);
        let bct = block_cut_tree(&ball).unwrap();
        assert_eq!(bct.cut_degree(bct.root.unwrap()), 2);
        assert!(bct.is_forest());
    }

    #[test]
    fn ex2_root_pentagons_fill_in_at_radius_three() {
        let am = fixtures::ex2();
        let b1 = expand_ball(&am, 1, &Limits::default()).unwrap();
        let s1 = lobes(&b1).unwrap();
        assert_eq!(s1.certified_count(), 0);
        assert_eq!(s1.cut_vertices, vec![VertexId::root()]);

        let b3 = expand_ball(&am, 3, &Limits::default()).unwrap();
        let bct = block_cut_tree(&b3).unwrap();
        assert_eq!(bct.cut_degree(bct.root.unwrap()), 2);
        for (j, lobe) in bct.lobes.iter().enumerate() {
            if lobe.tag.as_ref().unwrap().attach.is_root() {
                assert_eq!(bct.lobe_degree(j), 5);
            }
        }
    }

    #[test]
    fn empty_tree_at_radius_zero() {
        let am = fixtures::ex1();
        let ball = expand_ball(&am, 0, &Limits::default()).unwrap();
        let bct = block_cut_tree(&ball).unwrap();
        assert_eq!(bct.node_count(), 0);
    }
}
