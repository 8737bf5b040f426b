//! The bipartite block-cut-vertex tree `T` of `Γ(m, Λ)` and the Tits
//! classification of the automorphisms of `T` induced by group elements.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::amalgam::{NormalForm, ValidatedAmalgam};
use crate::error::{Error, Result};
use crate::graph::{shared_lobe, tree_distance, LobeId, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeVertex {
    Point(VertexId),
    Lobe(LobeId),
}

impl TreeVertex {
    pub fn depth(&self) -> usize {
        match self {
            TreeVertex::Point(v) => 2 * v.tree_depth(),
            TreeVertex::Lobe(l) => l.tree_depth(),
        }
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeVertex::Point(v) => write!(f, "vertex:{v}"),
            TreeVertex::Lobe(l) => write!(f, "lobe:{l}"),
        }
    }
}

impl Serialize for TreeVertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The member of `lobe` nearest to `v` in `T`.
fn nearest_member(lobe: &LobeId, v: &VertexId) -> VertexId {
    let k = lobe.attach.tree_depth();
    if v.starts_with(&lobe.attach) && v.tree_depth() > k {
        let s = v.steps()[k];
        if s.lobe == lobe.choice {
            return lobe.attach.child(s.lobe, s.point);
        }
    }
    lobe.attach.clone()
}

pub fn tree_vertex_distance(x: &TreeVertex, y: &TreeVertex) -> usize {
    match (x, y) {
        (TreeVertex::Point(u), TreeVertex::Point(w)) => tree_distance(u, w),
        (TreeVertex::Lobe(l), TreeVertex::Point(v)) | (TreeVertex::Point(v), TreeVertex::Lobe(l)) => {
            tree_distance(&nearest_member(l, v), v) + 1
        }
        (TreeVertex::Lobe(l1), TreeVertex::Lobe(l2)) => {
            if l1 == l2 {
                return 0;
            }
            let u2 = nearest_member(l2, &l1.attach);
            let u1 = nearest_member(l1, &u2);
            tree_distance(&u1, &u2) + 2
        }
    }
}

pub fn act_on_tree_vertex(am: &ValidatedAmalgam, g: &NormalForm, x: &TreeVertex) -> Result<TreeVertex> {
    match x {
        TreeVertex::Point(v) => Ok(TreeVertex::Point(am.act_on_vertex(g, v)?)),
        TreeVertex::Lobe(l) => {
            let label = (0..am.lobe_degree())
                .find(|&y| y != am.delta())
                .expect("lobes have at least two points");
            let a = am.act_on_vertex(g, &l.attach)?;
            let b = am.act_on_vertex(g, &l.attach.child(l.choice, label))?;
            shared_lobe(&a, &b)
                .map(TreeVertex::Lobe)
                .ok_or_else(|| Error::Consistency("lobe members moved apart".into()))
        }
    }
}

/// All tree vertices within `T`-distance `radius` of the root, sorted.
pub fn tree_ball(am: &ValidatedAmalgam, radius: usize) -> Vec<TreeVertex> {
    let mut out = Vec::new();
    let mut layer = vec![VertexId::root()];
    let mut depth = 0;
    while !layer.is_empty() && 2 * depth <= radius {
        let mut next = Vec::new();
        for v in &layer {
            out.push(TreeVertex::Point(v.clone()));
            if 2 * depth + 1 > radius {
                continue;
            }
            let first = if v.is_root() { 0 } else { 1 };
            for c in first..am.m() {
                out.push(TreeVertex::Lobe(LobeId::new(v.clone(), c)));
                for y in (0..am.lobe_degree()).filter(|&y| y != am.delta()) {
                    next.push(v.child(c, y));
                }
            }
        }
        layer = next;
        depth += 1;
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TreeIsometryClass {
    Elliptic {
        fixed: TreeVertex,
    },
    Hyperbolic {
        translation_length: usize,
        axis_sample: TreeVertex,
    },
}

/// Minimizes the displacement `d_T(x, x^g)` over the tree ball of radius `radius`.
/// A positive minimum found only on the boundary sphere is not conclusive.
pub fn classify_tree_automorphism(
    am: &ValidatedAmalgam,
    g: &NormalForm,
    radius: usize,
) -> Result<TreeIsometryClass> {
    let ball = tree_ball(am, radius);
    let mut best = usize::MAX;
    let mut minimizers: Vec<&TreeVertex> = Vec::new();
    for x in &ball {
        let d = tree_vertex_distance(x, &act_on_tree_vertex(am, g, x)?);
        if d < best {
            best = d;
            minimizers.clear();
        }
        if d == best {
            minimizers.push(x);
        }
    }
    if best == 0 {
        let root = TreeVertex::Point(VertexId::root());
        let fixed = if minimizers.contains(&&root) {
            root
        } else {
            minimizers[0].clone()
        };
        return Ok(TreeIsometryClass::Elliptic { fixed });
    }
    match minimizers.iter().find(|x| x.depth() < radius) {
        Some(x) => Ok(TreeIsometryClass::Hyperbolic {
            translation_length: best,
            axis_sample: (*x).clone(),
        }),
        None => Err(Error::Unresolved(format!(
            "minimum displacement {best} only attained on the boundary of the radius-{radius} tree ball"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::{fixtures, Factor};
    use crate::permutation::Permutation;

    #[test]
    fn lobe_distances() {
        let root = TreeVertex::Point(VertexId::root());
        let l0 = TreeVertex::Lobe(LobeId::new(VertexId::root(), 0));
        let l1 = TreeVertex::Lobe(LobeId::new(VertexId::root(), 1));
        let deep = TreeVertex::Lobe(LobeId::new("0.1".parse().unwrap(), 1));
        assert_eq!(tree_vertex_distance(&root, &l0), 1);
        assert_eq!(tree_vertex_distance(&l0, &l1), 2);
        assert_eq!(tree_vertex_distance(&l0, &deep), 2);
        assert_eq!(tree_vertex_distance(&l1, &deep), 4);
        let p = TreeVertex::Point("0.2/1.1".parse().unwrap());
        assert_eq!(tree_vertex_distance(&deep, &p), 5);
    }

    #[test]
    fn tree_ball_sizes() {
        let am = fixtures::ex1();
        assert_eq!(tree_ball(&am, 0).len(), 1);
        assert_eq!(tree_ball(&am, 1).len(), 3);
        assert_eq!(tree_ball(&am, 2).len(), 7);
        assert_eq!(tree_ball(&am, 3).len(), 11);
    }

    #[test]
    fn classification_examples() {
        let am = fixtures::ex1();
        assert_eq!(
            classify_tree_automorphism(&am, &am.identity(), 4).unwrap(),
            TreeIsometryClass::Elliptic {
                fixed: TreeVertex::Point(VertexId::root())
            }
        );
        let a = am
            .element(Factor::A, &Permutation::parse(4, "(2 3)").unwrap())
            .unwrap();
        let p = am
            .element(Factor::P, &Permutation::parse(3, "(0 1 2)").unwrap())
            .unwrap();
        assert!(matches!(
            classify_tree_automorphism(&am, &a, 4).unwrap(),
            TreeIsometryClass::Elliptic { .. }
        ));
        let ap = am.multiply(&a, &p).unwrap();
        match classify_tree_automorphism(&am, &ap, 4).unwrap() {
            TreeIsometryClass::Hyperbolic {
                translation_length, ..
            } => assert_eq!(translation_length, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            classify_tree_automorphism(&am, &ap, 0),
            Err(Error::Unresolved(_))
        ));
    }
}
