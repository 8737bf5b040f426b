use std::collections::VecDeque;

use serde::Serialize;

use crate::amalgam::{Factor, NormalForm, ValidatedAmalgam};
use crate::decomposition::{act_on_tree_vertex, tree_ball, TreeVertex};
use crate::error::{Error, Result};
use crate::graph::{expand_ball, LobeId, VertexId};
use crate::group::{FiniteGroup, UnionFind};
use crate::limits::Limits;
use crate::permutation::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FundamentalDomainReport {
    pub radius: usize,
    pub tree_vertices: usize,
    pub tree_arcs: usize,
    pub vertex_orbits: usize,
    /// Arc orbits with arcs oriented from vertex to lobe.
    pub arc_orbits: usize,
    pub inversions: Vec<String>,
    pub segment: (TreeVertex, TreeVertex),
}

impl FundamentalDomainReport {
    pub fn is_segment(&self) -> bool {
        self.vertex_orbits == 2 && self.arc_orbits == 1 && self.inversions.is_empty()
    }
}

fn generators(am: &ValidatedAmalgam) -> Result<Vec<NormalForm>> {
    let mut out = Vec::new();
    for s in am.vertex_group().generators() {
        out.push(am.element(Factor::A, s)?);
    }
    for s in am.lobe_group().generators() {
        out.push(am.element(Factor::P, s)?);
    }
    Ok(out)
}

/// Covers the radius-`radius` ball of the tree by images of the segment
/// (root, root lobe), using explicit words, and checks that the generators
/// preserve the vertex/lobe bipartition.
pub fn verify_segment_fundamental_domain(am: &ValidatedAmalgam, radius: usize) -> Result<FundamentalDomainReport> {
    if radius < 2 {
        return Err(Error::Precondition(format!("radius must be at least 2, got {radius}")));
    }
    let alpha = TreeVertex::Point(VertexId::root());
    let x = TreeVertex::Lobe(LobeId::new(VertexId::root(), 0));
    let ball = tree_ball(am, radius);

    let word_to = |t: &TreeVertex| -> Result<NormalForm> {
        match t {
            TreeVertex::Point(v) => am.vertex_word(v),
            TreeVertex::Lobe(l) => {
                let a = am.element(Factor::A, am.coset_reps_a()[l.choice])?;
                am.multiply(&a, &am.vertex_word(&l.attach)?)
            }
        }
    };

    let mut point_orbit = false;
    let mut lobe_orbit = false;
    for t in &ball {
        let (base, flag) = match t {
            TreeVertex::Point(_) => (&alpha, &mut point_orbit),
            TreeVertex::Lobe(_) => (&x, &mut lobe_orbit),
        };
        if act_on_tree_vertex(am, &word_to(t)?, base)? != *t {
            return Err(Error::Unresolved(format!("no covering word found for {t}")));
        }
        *flag = true;
    }

    let stabilizer = am
        .vertex_group_elements()
        .iter()
        .map(|a| am.element(Factor::A, a))
        .collect::<Result<Vec<_>>>()?;
    let mut arcs = 0;
    for t in &ball {
        let TreeVertex::Lobe(l) = t else { continue };
        let members = (0..am.lobe_degree()).map(|y| l.member(y, am.delta()));
        for v in members {
            let p = TreeVertex::Point(v.clone());
            if p.depth() > radius {
                continue;
            }
            arcs += 1;
            let w = am.vertex_word(&v)?;
            let mut found = false;
            for a in &stabilizer {
                let g = am.multiply(a, &w)?;
                if act_on_tree_vertex(am, &g, &x)? == *t {
                    debug_assert_eq!(act_on_tree_vertex(am, &g, &alpha)?, p);
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(Error::Unresolved(format!("arc ({p}, {t}) not covered")));
            }
        }
    }

    let mut inversions = Vec::new();
    for g in generators(am)? {
        for t in &ball {
            let image = act_on_tree_vertex(am, &g, t)?;
            if std::mem::discriminant(&image) != std::mem::discriminant(t) {
                inversions.push(format!("{} maps {t} to {image}", am.format_normal_form(&g)));
            }
        }
    }

    Ok(FundamentalDomainReport {
        radius,
        tree_vertices: ball.len(),
        tree_arcs: arcs,
        vertex_orbits: point_orbit as usize + lobe_orbit as usize,
        arc_orbits: usize::from(arcs > 0),
        inversions,
        segment: (alpha, x),
    })
}

/// Largest lobe group for the exhaustive maximality check.
pub const MAX_MAXIMALITY_ORDER: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub vertex_group_order: usize,
    pub stabilizer_order: usize,
    pub lobe_group_order: usize,
    pub m: usize,
    pub stabilizer_generators: Vec<String>,
    pub nontrivial: bool,
    pub maximal: bool,
    pub fixes_no_other_point: bool,
    pub failures: Vec<String>,
}

impl DecompositionReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `H` is a nontrivial maximal subgroup of `P` fixing only the base point.
pub fn amalgam_decomposition_report(am: &ValidatedAmalgam) -> Result<DecompositionReport> {
    let p_order = am.lobe_group_elements().len();
    if p_order > MAX_MAXIMALITY_ORDER {
        return Err(Error::Precondition(format!(
            "lobe group order {p_order} exceeds {MAX_MAXIMALITY_ORDER}"
        )));
    }
    let h: Vec<Permutation> = am.stabilizer_elements().into_iter().cloned().collect();
    let h_gens: Vec<Permutation> = am.spec().embedding.iter().map(|(x, _)| x.clone()).collect();
    let degree = am.lobe_degree();
    let nontrivial = h.len() > 1;

    let mut maximal = true;
    let mut failures = Vec::new();
    if !nontrivial {
        failures.push("point stabilizer is trivial".to_string());
    }
    for g in am.lobe_group_elements() {
        if h.binary_search(g).is_ok() {
            continue;
        }
        let mut gens = h_gens.clone();
        gens.push(g.clone());
        let order = FiniteGroup::new(degree, gens)?.order()?;
        if order != p_order {
            maximal = false;
            failures.push(format!(
                "H and {g} generate a proper subgroup of order {order}"
            ));
            break;
        }
    }
    let fixed: Vec<usize> = (0..degree)
        .filter(|&y| y != am.delta() && h.iter().all(|x| x.apply(y) == y))
        .collect();
    if !fixed.is_empty() {
        failures.push(format!("H fixes the points {fixed:?}"));
    }
    Ok(DecompositionReport {
        vertex_group_order: am.vertex_group_elements().len(),
        stabilizer_order: h.len(),
        lobe_group_order: p_order,
        m: am.m(),
        stabilizer_generators: h_gens.iter().map(|g| g.to_string()).collect(),
        nontrivial,
        maximal,
        fixes_no_other_point: fixed.is_empty(),
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockWitness {
    pub seed: VertexId,
    /// The class of the root, restricted to the ball.
    pub block: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSearchReport {
    pub radius: usize,
    pub seeds_tried: usize,
    pub witness: Option<BlockWitness>,
}

/// For every vertex `β` within half the radius, closes `{root, β}` under the
/// generators and their inverses as far as the ball allows. A root class
/// that misses a vertex at distance below `radius - d(β)` is reported as a
/// candidate block.
pub fn block_search(am: &ValidatedAmalgam, radius: usize, limits: &Limits) -> Result<BlockSearchReport> {
    let ball = expand_ball(am, radius, limits)?;
    let mut gens = generators(am)?;
    let inverses = gens.iter().map(|g| am.invert(g)).collect::<Result<Vec<_>>>()?;
    gens.extend(inverses);

    let n = ball.len();
    let images: Vec<Vec<Option<usize>>> = gens
        .iter()
        .map(|g| {
            (0..n)
                .map(|i| Ok(ball.index_of(&am.act_on_vertex(g, ball.address(i))?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut seeds_tried = 0;
    for beta in (1..n).filter(|&i| ball.depth(i) <= radius / 2) {
        seeds_tried += 1;
        let mut uf = UnionFind::new(n);
        let mut pending = VecDeque::from([(0usize, beta)]);
        while let Some((x, y)) = pending.pop_front() {
            if !uf.union(x, y) {
                continue;
            }
            for img in &images {
                if let (Some(gx), Some(gy)) = (img[x], img[y]) {
                    pending.push_back((gx, gy));
                }
            }
        }
        let root = uf.find(0);
        let reach = radius - ball.depth(beta);
        if (0..n).any(|i| ball.depth(i) < reach && uf.find(i) != root) {
            let block = (0..n)
                .filter(|&i| uf.find(i) == root)
                .map(|i| ball.address(i).clone())
                .collect();
            return Ok(BlockSearchReport {
                radius,
                seeds_tried,
                witness: Some(BlockWitness {
                    seed: ball.address(beta).clone(),
                    block,
                }),
            });
        }
    }
    Ok(BlockSearchReport {
        radius,
        seeds_tried,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::fixtures;

    #[test]
    fn segment_is_a_fundamental_domain() {
        for am in [fixtures::ex1(), fixtures::ex2()] {
            let rep = verify_segment_fundamental_domain(&am, 3).unwrap();
            assert_eq!((rep.vertex_orbits, rep.arc_orbits), (2, 1));
            assert!(rep.inversions.is_empty());
        }
        assert!(verify_segment_fundamental_domain(&fixtures::ex1(), 0).is_err());
    }

    #[test]
    fn decomposition_reports() {
        let r1 = amalgam_decomposition_report(&fixtures::ex1()).unwrap();
        assert!(r1.holds() && r1.maximal && r1.fixes_no_other_point);
        let r2 = amalgam_decomposition_report(&fixtures::ex2()).unwrap();
        assert!(r2.holds());
        let sq = amalgam_decomposition_report(&fixtures::square()).unwrap();
        assert!(!sq.maximal);
        assert!(!sq.fixes_no_other_point);
    }

    #[test]
    fn block_search_examples() {
        let l = Limits::default();
        assert_eq!(block_search(&fixtures::ex1(), 3, &l).unwrap().witness, None);
        assert_eq!(block_search(&fixtures::ex2(), 2, &l).unwrap().witness, None);
        assert!(block_search(&fixtures::square(), 4, &l).unwrap().witness.is_some());
    }

    #[test]
    fn deeper_seeds_expose_a_block_of_the_amalgam() {
        let l = Limits::default();
        let w = block_search(&fixtures::ex1(), 4, &l).unwrap().witness.unwrap();
        assert_eq!(w.seed.to_string(), "0.1/1.1");
        assert!(w.block.iter().all(|v| v.tree_depth() != 1));
    }
}
