use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use super::descriptor::{check_equivalence, enumerate_canonical, CanonicalDescriptor};
use crate::amalgam::ValidatedAmalgam;
use crate::decomposition::{classify_ends, EndClassification, EndSource};
use crate::error::{Error, Result};
use crate::graph::{shared_lobe, CanonicalGraph, Neighborhood, OrbitalHandle, VertexId};
use crate::limits::Limits;

/// Radius of the balls used to certify each stage.
const STAGE_RADIUS: usize = 2;
/// Largest base-graph distance searched for the next seed.
const SEED_SEARCH_RADIUS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Connectivity {
    /// Connectivity one, with finite lobes of known order.
    One,
    /// The root has a path between all its neighbors avoiding itself.
    AtLeastTwo,
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementStage {
    pub seed: (VertexId, VertexId),
    pub span: usize,
    pub connectivity: Connectivity,
    /// Vertex set of the lobe at the first seed vertex, when certified.
    pub lobe: Option<Vec<VertexId>>,
    /// Order of the group induced on that lobe by its setwise stabilizer.
    pub lobe_group_order: Option<usize>,
    pub lobe_ends: Option<EndClassification>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RefinementOutcome {
    Terminal {
        descriptor: CanonicalDescriptor,
        /// Index into `enumerate_canonical` of the descriptor with the same lobe digraph.
        matched: usize,
    },
    Unresolved(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refinement {
    pub trace: Vec<RefinementStage>,
    pub outcome: RefinementOutcome,
}

impl Refinement {
    /// Number of stages when terminal.
    pub fn terminal_index(&self) -> Option<usize> {
        matches!(self.outcome, RefinementOutcome::Terminal { .. }).then_some(self.trace.len())
    }
}

/// Whether the neighbors of `α` stay connected once `α` is removed, inside
/// the radius-`r` ball. A positive answer is exact; a negative one is not.
fn root_is_not_cut<N: Neighborhood<Vertex = VertexId>>(g: &N, root: &VertexId, r: usize) -> Result<bool> {
    let nbrs: Vec<VertexId> = g.neighbors(root)?.into_iter().map(|(v, _)| v).collect();
    let Some(start) = nbrs.first() else {
        return Ok(true);
    };
    let mut depth = std::collections::HashMap::from([(root.clone(), 0usize)]);
    let mut frontier = VecDeque::from([root.clone()]);
    while let Some(u) = frontier.pop_front() {
        let d = depth[&u];
        if d == r {
            continue;
        }
        for (w, _) in g.neighbors(&u)? {
            if !depth.contains_key(&w) {
                depth.insert(w.clone(), d + 1);
                frontier.push_back(w);
            }
        }
    }
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(u) = queue.pop_front() {
        for (w, _) in g.neighbors(&u)? {
            if &w != root && depth.contains_key(&w) && seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    Ok(nbrs.iter().all(|v| seen.contains(v)))
}

fn stage(am: &ValidatedAmalgam, handle: &OrbitalHandle, limits: &Limits) -> Result<(RefinementStage, Option<CanonicalDescriptor>)> {
    let seed = (handle.alpha().clone(), handle.beta().clone());
    if let Some(g) = handle.as_canonical() {
        // Span two: the arc lies inside one lobe of the base tree, so the
        // orbital digraph is Γ(m, Λ') with finite lobes on the same vertex sets.
        let lobe_id = shared_lobe(handle.alpha(), handle.beta())
            .ok_or_else(|| Error::Consistency("span-two seed outside a common lobe".into()))?;
        let mut members: Vec<VertexId> = (0..am.lobe_degree())
            .map(|y| lobe_id.member(y, am.delta()))
            .collect();
        members.sort();
        let ends = classify_ends(EndSource::Finite(g.lobe()), 1, limits)?.classification;
        let descriptor = CanonicalDescriptor::from_lobe(am, g.lobe().clone());
        return Ok((
            RefinementStage {
                seed,
                span: handle.span(),
                connectivity: Connectivity::One,
                lobe: Some(members),
                lobe_group_order: Some(am.lobe_group().order()?),
                lobe_ends: Some(ends),
            },
            Some(descriptor),
        ));
    }
    let connectivity = if root_is_not_cut(handle, handle.alpha(), STAGE_RADIUS)? {
        Connectivity::AtLeastTwo
    } else {
        Connectivity::Unresolved
    };
    Ok((
        RefinementStage {
            seed,
            span: handle.span(),
            connectivity,
            lobe: None,
            lobe_group_order: None,
            lobe_ends: None,
        },
        None,
    ))
}

fn finish(
    am: &ValidatedAmalgam,
    trace: Vec<RefinementStage>,
    descriptor: CanonicalDescriptor,
    limits: &Limits,
) -> Result<Refinement> {
    let family = enumerate_canonical(am)?;
    let same_lobe: Vec<usize> = (0..family.len())
        .filter(|&k| family[k].lobe == descriptor.lobe)
        .collect();
    let [matched] = same_lobe[..] else {
        return Err(Error::Consistency(format!(
            "terminal lobe digraph matches {} enumerated descriptors",
            same_lobe.len()
        )));
    };
    for e in &family {
        if !check_equivalence(am, &descriptor, e, 3, limits)? {
            return Err(Error::Consistency("terminal descriptor not equivalent to the family".into()));
        }
    }
    Ok(Refinement {
        trace,
        outcome: RefinementOutcome::Terminal { descriptor, matched },
    })
}

/// Refines an orbital digraph to a canonical one: the seed itself is tried
/// first, then suborbit representatives of the base graph in order of
/// distance and address, until a seed certifies connectivity one with finite lobes.
pub fn refine_to_canonical(handle: &OrbitalHandle, limits: &Limits) -> Result<Refinement> {
    let am = handle.amalgam();
    let base = CanonicalGraph::new(am);
    let ends = classify_ends(EndSource::Canonical(&base), 2, limits)?;
    if !matches!(
        ends.classification,
        EndClassification::Two | EndClassification::Uncountable
    ) {
        return Err(Error::Precondition(format!(
            "source must have more than one end, found {:?}",
            ends.classification
        )));
    }

    let mut trace = Vec::new();
    let (first, done) = stage(am, handle, limits)?;
    trace.push(first);
    if let Some(d) = done {
        return finish(am, trace, d, limits);
    }

    let report = crate::graph::suborbits(&base, SEED_SEARCH_RADIUS, limits)?;
    let mut candidates: Vec<(usize, VertexId)> = report
        .suborbits
        .iter()
        .filter(|s| s.radius > 0)
        .map(|s| (s.radius, s.representative.clone()))
        .collect();
    candidates.sort();
    for (_, beta) in candidates {
        let next = OrbitalHandle::new(am, VertexId::root(), beta)?;
        let (st, done) = stage(am, &next, limits)?;
        trace.push(st);
        if let Some(d) = done {
            return finish(am, trace, d, limits);
        }
    }
    Ok(Refinement {
        trace,
        outcome: RefinementOutcome::Unresolved(format!(
            "no seed within distance {SEED_SEARCH_RADIUS} certified connectivity one"
        )),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::fixtures;

    fn v(s: &str) -> VertexId {
        s.parse().unwrap()
    }

    #[test]
    fn lambda_seed_terminates_immediately() {
        let am = fixtures::ex1();
        let r = refine_to_canonical(&OrbitalHandle::lambda_arc(&am), &Limits::default()).unwrap();
        assert_eq!(r.terminal_index(), Some(1));
        assert_eq!(r.trace[0].lobe_ends, Some(EndClassification::Zero));
    }

    #[test]
    fn pentagram_seed() {
        let am = fixtures::ex2();
        let h = OrbitalHandle::new(&am, VertexId::root(), v("0.2")).unwrap();
        let r = refine_to_canonical(&h, &Limits::default()).unwrap();
        assert_eq!(r.terminal_index(), Some(1));
        match r.outcome {
            RefinementOutcome::Terminal { descriptor, matched } => {
                assert!(descriptor.lobe.has_arc(0, 2));
                assert_eq!(matched, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn distance_two_seed_refines_in_two_stages() {
        let am = fixtures::ex1();
        let h = OrbitalHandle::new(&am, v("0.1"), v("1.1")).unwrap();
        let r = refine_to_canonical(&h, &Limits::default()).unwrap();
        assert_eq!(r.terminal_index(), Some(2));
        assert_eq!(r.trace[0].span, 4);
    }
}
