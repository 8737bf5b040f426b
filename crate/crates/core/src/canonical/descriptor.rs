use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::amalgam::{Factor, ValidatedAmalgam};
use crate::decomposition::{analyze, lobes, Lobe};
use crate::digraph::FiniteDigraph;
use crate::error::{Error, Result};
use crate::graph::{Ball, CanonicalGraph, LobeId, VertexId};
use crate::group::FiniteGroup;
use crate::limits::Limits;

/// `Γ(m, Λ')` over a fixed amalgam, with a seed arc realizing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalDescriptor {
    pub amalgam_id: u64,
    pub m: usize,
    pub lobe: FiniteDigraph,
    pub seed: (VertexId, VertexId),
    /// Vertices of the lobe through the root that contains the seed arc.
    pub root_lobe: Vec<VertexId>,
}

impl CanonicalDescriptor {
    pub(crate) fn from_lobe(am: &ValidatedAmalgam, lobe: FiniteDigraph) -> Self {
        let delta = am.delta();
        let target = lobe
            .out_neighbors(delta)
            .first()
            .copied()
            .expect("orbital digraphs of a transitive group have out-arcs everywhere");
        let root_lobe = LobeId::new(VertexId::root(), 0);
        let mut members: Vec<VertexId> = (0..am.lobe_degree())
            .map(|y| root_lobe.member(y, delta))
            .collect();
        members.sort();
        CanonicalDescriptor {
            amalgam_id: am.id(),
            m: am.m(),
            lobe,
            seed: (VertexId::root(), VertexId::from_pairs(&[(0, target)])),
            root_lobe: members,
        }
    }

    pub fn graph<'a>(&self, am: &'a ValidatedAmalgam) -> Result<CanonicalGraph<'a>> {
        if am.id() != self.amalgam_id {
            return Err(Error::input("descriptor belongs to a different amalgam"));
        }
        CanonicalGraph::with_lobe(am, self.lobe.clone())
    }

    pub fn lobe_dot(&self) -> String {
        self.lobe.to_dot("lobe")
    }
}

/// Restates the defining conditions on a finite ball: every certified lobe is
/// a copy of `Λ'` and the induced lobe group is primitive and not regular.
pub(crate) fn verify_canonical(am: &ValidatedAmalgam, d: &CanonicalDescriptor, r: usize) -> Result<()> {
    let g = d.graph(am)?;
    let ball = g.ball(&VertexId::root(), r, &Limits::default())?;
    let set = lobes(&ball)?;
    if d.lobe.vertex_count() < 3 {
        return Err(Error::Consistency("lobe has fewer than 3 vertices".into()));
    }
    for lobe in &set.certified {
        let induced = induced_digraph(&ball, &lobe.vertices);
        if !induced.is_isomorphic(&d.lobe) {
            return Err(Error::Consistency(format!(
                "lobe {} is not a copy of the lobe digraph",
                lobe.tag.as_ref().map(|t| t.to_string()).unwrap_or_default()
            )));
        }
    }
    let root_lobe = LobeId::new(VertexId::root(), 0);
    if set.certified.iter().any(|l| l.tag.as_ref() == Some(&root_lobe)) {
        let group = lobe_group(am, &ball, &root_lobe)?;
        if !group.is_primitive()? {
            return Err(Error::Consistency("root lobe group is imprimitive".into()));
        }
        if group.is_regular()? {
            return Err(Error::Consistency("root lobe group is regular".into()));
        }
    }
    Ok(())
}

pub(crate) fn induced_digraph(ball: &Ball, vertices: &[VertexId]) -> FiniteDigraph {
    let pos: HashMap<usize, usize> = vertices
        .iter()
        .enumerate()
        .filter_map(|(k, v)| ball.index_of(v).map(|i| (i, k)))
        .collect();
    let arcs = ball
        .arcs()
        .iter()
        .filter_map(|a| Some((*pos.get(&a.from)?, *pos.get(&a.to)?)));
    FiniteDigraph::new(vertices.len(), arcs).expect("ball arcs have no loops")
}

/// The descriptor for `Γ(m, Λ)` with the amalgam's own lobe digraph.
pub fn construct_canonical(am: &ValidatedAmalgam) -> Result<CanonicalDescriptor> {
    let d = CanonicalDescriptor::from_lobe(am, am.lambda().clone());
    verify_canonical(am, &d, 3)?;
    Ok(d)
}

/// One descriptor per orbital digraph of the lobe group.
pub fn enumerate_canonical(am: &ValidatedAmalgam) -> Result<Vec<CanonicalDescriptor>> {
    am.lobe_group()
        .orbital_digraphs()
        .into_iter()
        .map(|lobe| {
            let d = CanonicalDescriptor::from_lobe(am, lobe);
            verify_canonical(am, &d, 2)?;
            Ok(d)
        })
        .collect()
}

/// The group induced on a certified lobe by its setwise stabilizer, a conjugate
/// of the lobe group by the word reaching the lobe. Points are the lobe's
/// vertices in sorted order.
pub fn lobe_group(am: &ValidatedAmalgam, ball: &Ball, lobe: &LobeId) -> Result<FiniteGroup> {
    let set = lobes(ball)?;
    let certified = set
        .certified
        .iter()
        .find(|l| l.tag.as_ref() == Some(lobe))
        .ok_or_else(|| Error::input(format!("lobe {lobe} is not certified in this ball")))?;
    let members = &certified.vertices;
    let index: HashMap<&VertexId, usize> = members.iter().enumerate().map(|(i, v)| (v, i)).collect();

    let a = am.element(Factor::A, am.coset_reps_a()[lobe.choice])?;
    let kappa = am.multiply(&a, &am.vertex_word(&lobe.attach)?)?;
    let kappa_inv = am.invert(&kappa)?;
    let mut gens = Vec::new();
    for s in am.lobe_group().generators() {
        let s = am.element(Factor::P, s)?;
        let conj = am.multiply(&am.multiply(&kappa_inv, &s)?, &kappa)?;
        let images = members
            .iter()
            .map(|v| {
                let w = am.act_on_vertex(&conj, v)?;
                index
                    .get(&w)
                    .copied()
                    .ok_or_else(|| Error::Consistency(format!("lobe stabilizer moved {v} off the lobe")))
            })
            .collect::<Result<Vec<_>>>()?;
        gens.push(crate::permutation::Permutation::from_images(images)?);
    }
    FiniteGroup::new(members.len(), gens)
}

/// Compares lobe vertex sets of two balls over the same vertex set. `None`
/// when no certified lobe of either ball can be compared in the other.
pub(crate) fn compare_lobe_sets(b1: &Ball, b2: &Ball) -> Result<Option<bool>> {
    let mut compared = 0;
    for (x, y) in [(b1, b2), (b2, b1)] {
        let sx = lobes(x)?;
        let ay = analyze(y)?;
        let certified_y: BTreeSet<BTreeSet<&VertexId>> = (0..ay.blocks.len())
            .filter(|&k| ay.certified[k])
            .map(|k| ay.blocks[k].iter().map(|&i| y.address(i)).collect())
            .collect();
        for Lobe { vertices, .. } in &sx.certified {
            let Some(idx) = vertices
                .iter()
                .map(|v| y.index_of(v).filter(|&i| y.depth(i) < y.radius()))
                .collect::<Option<BTreeSet<usize>>>()
            else {
                continue;
            };
            let meeting: Vec<usize> = (0..ay.blocks.len())
                .filter(|&k| ay.blocks[k].iter().filter(|i| idx.contains(i)).count() >= 2)
                .collect();
            if meeting.iter().any(|&k| !ay.certified[k]) {
                continue;
            }
            compared += 1;
            let set: BTreeSet<&VertexId> = vertices.iter().collect();
            if !certified_y.contains(&set) {
                return Ok(Some(false));
            }
        }
    }
    Ok((compared > 0).then_some(true))
}

/// Same `m` and the same lobe vertex sets wherever both balls certify them.
pub fn check_equivalence(
    am: &ValidatedAmalgam,
    d1: &CanonicalDescriptor,
    d2: &CanonicalDescriptor,
    r: usize,
    limits: &Limits,
) -> Result<bool> {
    if d1.amalgam_id != d2.amalgam_id {
        return Err(Error::input("descriptors belong to different amalgams"));
    }
    if d1.m != d2.m {
        return Ok(false);
    }
    let b1 = d1.graph(am)?.ball(&VertexId::root(), r, limits)?;
    let b2 = d2.graph(am)?.ball(&VertexId::root(), r, limits)?;
    compare_lobe_sets(&b1, &b2)?.ok_or_else(|| {
        Error::Unresolved(format!("no certified lobe is comparable at radius {r}"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::{fixtures, validate};
    use crate::graph::{expand_ball, OrbitalHandle};

    #[test]
    fn constructs_and_enumerates() {
        let am1 = fixtures::ex1();
        let d1 = construct_canonical(&am1).unwrap();
        assert_eq!(d1.lobe.arc_count(), 6);
        assert_eq!(enumerate_canonical(&am1).unwrap().len(), 1);

        let am2 = fixtures::ex2();
        let all = enumerate_canonical(&am2).unwrap();
        assert_eq!(all.len(), 2);
        let gram = validate(fixtures::ex2_pentagram_spec()).unwrap();
        let dg = construct_canonical(&gram).unwrap();
        assert!(dg.lobe.has_arc(0, 2));
    }

    #[test]
    fn lobe_groups() {
        let am = fixtures::ex1();
        let ball = expand_ball(&am, 2, &Limits::default()).unwrap();
        let root = lobe_group(&am, &ball, &LobeId::new(VertexId::root(), 0)).unwrap();
        assert_eq!(root.order().unwrap(), 6);
        let deep = lobe_group(&am, &ball, &LobeId::new("0.1".parse().unwrap(), 1)).unwrap();
        assert_eq!(deep.order().unwrap(), 6);
        assert!(deep.is_primitive().unwrap() && !deep.is_regular().unwrap());

        let am2 = fixtures::ex2();
        let ball2 = expand_ball(&am2, 2, &Limits::default()).unwrap();
        let g = lobe_group(&am2, &ball2, &LobeId::new(VertexId::root(), 1)).unwrap();
        assert_eq!(g.order().unwrap(), 10);
        assert!(lobe_group(&am2, &expand_ball(&am2, 1, &Limits::default()).unwrap(), &LobeId::new(VertexId::root(), 0)).is_err());
    }

    #[test]
    fn pentagon_and_pentagram_equivalent() {
        let am = fixtures::ex2();
        let all = enumerate_canonical(&am).unwrap();
        let l = Limits::default();
        assert!(check_equivalence(&am, &all[0], &all[1], 3, &l).unwrap());
        assert!(check_equivalence(&am, &all[0], &all[0], 3, &l).unwrap());
        let other = fixtures::ex1();
        let d = construct_canonical(&other).unwrap();
        assert!(check_equivalence(&am, &all[0], &d, 3, &l).is_err());
    }

    #[test]
    fn different_block_structure_detected() {
        let am = fixtures::ex1();
        let canon = expand_ball(&am, 3, &Limits::default()).unwrap();
        let far = OrbitalHandle::new(&am, VertexId::root(), "0.1/1.1".parse().unwrap()).unwrap();
        let ball = far.ball(2, &Limits::default()).unwrap();
        assert_eq!(compare_lobe_sets(&canon, &ball).unwrap(), Some(false));
    }
}
