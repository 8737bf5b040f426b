use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use super::address::{LobeId, VertexId};
use super::AddressedGraph;
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallVertex {
    pub address: VertexId,
    pub depth: usize,
}

/// An arc between two ball vertices, by index into [`Ball::vertices`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BallArc {
    pub from: usize,
    pub to: usize,
    pub lobe: Option<LobeId>,
}

/// The induced subdigraph on all vertices within undirected distance `radius`
/// of `root`, sorted by `(depth, address)`.
#[derive(Clone, Debug)]
pub struct Ball {
    root: VertexId,
    radius: usize,
    vertices: Vec<BallVertex>,
    index: HashMap<VertexId, usize>,
    arcs: Vec<BallArc>,
    lobe_order: Option<usize>,
}

impl Ball {
    pub(crate) fn build<G: AddressedGraph + ?Sized>(
        g: &G,
        root: &VertexId,
        radius: usize,
        limits: &Limits,
    ) -> Result<Ball> {
        let projected = g.projected_ball_size(radius);
        let cap = limits.max_vertices;
        if projected > cap as u128 && g.lobe_order().is_some() {
            return Err(Error::capacity("ball vertices", projected, cap));
        }
        g.amalgam().check_address(root)?;

        let mut depth: HashMap<VertexId, usize> = HashMap::from([(root.clone(), 0)]);
        let mut adjacency: HashMap<VertexId, Vec<(VertexId, super::Direction)>> = HashMap::new();
        let mut queue = VecDeque::from([root.clone()]);
        while let Some(u) = queue.pop_front() {
            let du = depth[&u];
            let nbrs = g.neighbors(&u)?;
            if du < radius {
                for (w, _) in &nbrs {
                    if !depth.contains_key(w) {
                        depth.insert(w.clone(), du + 1);
                        if depth.len() > cap {
                            return Err(Error::capacity("ball vertices", projected, cap));
                        }
                        queue.push_back(w.clone());
                    }
                }
            }
            adjacency.insert(u, nbrs);
        }

        let mut vertices: Vec<BallVertex> = depth
            .into_iter()
            .map(|(address, depth)| BallVertex { address, depth })
            .collect();
        vertices.sort_by(|a, b| (a.depth, &a.address).cmp(&(b.depth, &b.address)));
        let index: HashMap<VertexId, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.address.clone(), i))
            .collect();

        let mut arcs = Vec::new();
        for (i, v) in vertices.iter().enumerate() {
            for (w, dir) in &adjacency[&v.address] {
                if !dir.has_out() {
                    continue;
                }
                if let Some(&j) = index.get(w) {
                    arcs.push(BallArc {
                        from: i,
                        to: j,
                        lobe: g.lobe_tag(&v.address, w),
                    });
                }
            }
        }
        arcs.sort();

        Ok(Ball {
            root: root.clone(),
            radius,
            vertices,
            index,
            arcs,
            lobe_order: g.lobe_order(),
        })
    }

    pub fn root(&self) -> &VertexId {
        &self.root
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn vertices(&self) -> &[BallVertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn arcs(&self) -> &[BallArc] {
        &self.arcs
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.index.contains_key(v)
    }

    pub fn address(&self, i: usize) -> &VertexId {
        &self.vertices[i].address
    }

    pub fn depth(&self, i: usize) -> usize {
        self.vertices[i].depth
    }

    /// Size of each lobe when arcs carry lobe tags.
    pub fn lobe_order(&self) -> Option<usize> {
        self.lobe_order
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.radius + 1];
        for v in &self.vertices {
            sizes[v.depth] += 1;
        }
        sizes
    }

    /// Undirected adjacency lists, sorted and deduplicated.
    pub fn undirected_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for a in &self.arcs {
            adj[a.from].push(a.to);
            adj[a.to].push(a.from);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    pub fn has_arc(&self, u: &VertexId, w: &VertexId) -> bool {
        match (self.index_of(u), self.index_of(w)) {
            (Some(i), Some(j)) => self
                .arcs
                .binary_search_by(|a| (a.from, a.to).cmp(&(i, j)))
                .is_ok(),
            _ => false,
        }
    }

    /// Vertex sets of the tagged lobes met by the ball, by lobe.
    pub fn tagged_lobes(&self) -> BTreeMap<LobeId, Vec<usize>> {
        let mut out: BTreeMap<LobeId, Vec<usize>> = BTreeMap::new();
        for a in &self.arcs {
            if let Some(l) = &a.lobe {
                let e = out.entry(l.clone()).or_default();
                e.push(a.from);
                e.push(a.to);
            }
        }
        for v in out.values_mut() {
            v.sort_unstable();
            v.dedup();
        }
        out
    }

    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 8] = [
            "black", "red", "blue", "darkgreen", "orange", "purple", "brown", "magenta",
        ];
        let mut out = String::from("digraph ball {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let label = if v.address.is_root() {
                "root".to_string()
            } else {
                v.address.to_string()
            };
            let _ = writeln!(out, "  n{i} [label=\"{label}\"];");
        }
        let lobes: BTreeMap<&LobeId, usize> = self
            .arcs
            .iter()
            .filter_map(|a| a.lobe.as_ref())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(k, l)| (l, k))
            .collect();
        for a in &self.arcs {
            match &a.lobe {
                Some(l) => {
                    let color = PALETTE[lobes[l] % PALETTE.len()];
                    let _ = writeln!(
                        out,
                        "  n{} -> n{} [label=\"{l}\", color={color}];",
                        a.from, a.to
                    );
                }
                None => {
                    let _ = writeln!(out, "  n{} -> n{};", a.from, a.to);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize)]
struct ArcView<'a> {
    from: &'a VertexId,
    to: &'a VertexId,
    lobe: Option<&'a LobeId>,
}

impl Serialize for Ball {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let arcs: Vec<ArcView> = self
            .arcs
            .iter()
            .map(|a| ArcView {
                from: &self.vertices[a.from].address,
                to: &self.vertices[a.to].address,
                lobe: a.lobe.as_ref(),
            })
            .collect();
        let mut s = serializer.serialize_struct("Ball", 4)?;
        s.serialize_field("root", &self.root)?;
        s.serialize_field("radius", &self.radius)?;
        s.serialize_field("vertices", &self.vertices)?;
        s.serialize_field("arcs", &arcs)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::super::expand_ball;
    use super::*;
    use crate::amalgam::fixtures;
    use crate::digraph::FiniteDigraph;

    #[test]
    fn ex1_small_balls() {
        let am = fixtures::ex1();
        let limits = Limits::default();
        let b0 = expand_ball(&am, 0, &limits).unwrap();
        assert_eq!((b0.len(), b0.arcs().len()), (1, 0));
        let b1 = expand_ball(&am, 1, &limits).unwrap();
        assert_eq!((b1.len(), b1.arcs().len()), (5, 12));
        assert_eq!(b1.tagged_lobes().len(), 2);
        let b2 = expand_ball(&am, 2, &limits).unwrap();
        assert_eq!(b2.sphere_sizes(), vec![1, 4, 8]);
        let b4 = expand_ball(&am, 4, &limits).unwrap();
        for r in 1..=4 {
            assert_eq!(b4.sphere_sizes()[r], 4 << (r - 1));
        }
    }

    #[test]
    fn every_arc_is_tagged_with_a_lambda_copy() {
        let am = fixtures::ex2();
        let ball = expand_ball(&am, 3, &Limits::default()).unwrap();
        assert!(ball.arcs().iter().all(|a| a.lobe.is_some()));
        for (lobe, members) in ball.tagged_lobes() {
            if members.len() < 5 {
                continue;
            }
            let pos: HashMap<usize, usize> = members
                .iter()
                .map(|&i| {
                    let label = if ball.address(i) == &lobe.attach {
                        am.delta()
                    } else {
                        ball.address(i).last().unwrap().point
                    };
                    (i, label)
                })
                .collect();
            let arcs = ball
                .arcs()
                .iter()
                .filter(|a| a.lobe.as_ref() == Some(&lobe))
                .map(|a| (pos[&a.from], pos[&a.to]));
            assert_eq!(&FiniteDigraph::new(5, arcs).unwrap(), am.lambda());
        }
    }

    #[test]
    fn cap_is_enforced_with_projection() {
        let am = fixtures::ex2();
        let err = expand_ball(&am, 6, &Limits::default().with_max_vertices(1000)).unwrap_err();
        match err {
            Error::Capacity { projected, cap, .. } => {
                assert_eq!(projected, 1033);
                assert_eq!(cap, 1000);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn json_shape() {
        let am = fixtures::ex1();
        let ball = expand_ball(&am, 1, &Limits::default()).unwrap();
        let v = serde_json::to_value(&ball).unwrap();
        assert_eq!(v["root"], "");
        assert_eq!(v["vertices"][1]["address"], "0.1");
        assert_eq!(v["vertices"][1]["depth"], 1);
        assert_eq!(v["arcs"][0]["lobe"], "#0");
        assert!(ball.to_dot().contains("n0 -> n1 [label=\"#0\""));
    }
}
