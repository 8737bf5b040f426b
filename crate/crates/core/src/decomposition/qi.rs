use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{OrbitalHandle, VertexId};
use crate::limits::Limits;

/// Search depth for the seed cross-distances.
const SEED_SEARCH_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QiViolation {
    pub u: VertexId,
    pub w: VertexId,
    pub d1: Option<usize>,
    pub d2: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QiReport {
    pub m1: usize,
    pub m2: usize,
    pub a: usize,
    pub verified_pairs: usize,
    pub violations: Vec<QiViolation>,
}

impl QiReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `d1 ≤ a·d2` and `d2 ≤ a·d1` for every pair of vertices in the union
/// of the radius-`r` balls of both digraphs, with `a` from the seed cross-distances.
pub fn quasi_isometry_check(
    h1: &OrbitalHandle,
    h2: &OrbitalHandle,
    r: usize,
    limits: &Limits,
) -> Result<QiReport> {
    if h1.amalgam().id() != h2.amalgam().id() {
        return Err(Error::input("handles belong to different amalgams"));
    }
    let unreachable = || {
        Error::capacity(
            "seed cross-distance search depth",
            SEED_SEARCH_LIMIT as u128 + 1,
            SEED_SEARCH_LIMIT,
        )
    };
    let m1 = h1
        .distance(h2.alpha(), h2.beta(), SEED_SEARCH_LIMIT)?
        .ok_or_else(unreachable)?;
    let m2 = h2
        .distance(h1.alpha(), h1.beta(), SEED_SEARCH_LIMIT)?
        .ok_or_else(unreachable)?;
    let a = m1.max(m2).max(1);

    let b1 = h1.ball(r, limits)?;
    let b2 = h2.ball(r, limits)?;
    let vertices: BTreeSet<&VertexId> = b1
        .vertices()
        .iter()
        .chain(b2.vertices())
        .map(|v| &v.address)
        .collect();
    let vertices: Vec<&VertexId> = vertices.into_iter().collect();

    let mut verified_pairs = 0;
    let mut violations = Vec::new();
    for (i, u) in vertices.iter().enumerate() {
        for w in &vertices[i + 1..] {
            // Under the inequality every pair is within 2ar in the first
            // digraph, and the second distance is searched only as far as a·d1.
            let d1 = h1.distance(u, w, 2 * a * r)?;
            let d2 = match d1 {
                Some(d1) => h2.distance(u, w, a * d1)?,
                None => None,
            };
            let ok = match (d1, d2) {
                (Some(d1), Some(d2)) => d1 <= a * d2 && d2 <= a * d1,
                _ => false,
            };
            verified_pairs += 1;
            if !ok {
                violations.push(QiViolation {
                    u: (*u).clone(),
                    w: (*w).clone(),
                    d1,
                    d2,
                });
            }
        }
    }
    Ok(QiReport {
        m1,
        m2,
        a,
        verified_pairs,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::fixtures;

    #[test]
    fn identical_handles() {
        let am = fixtures::ex1();
        let h = OrbitalHandle::lambda_arc(&am);
        let rep = quasi_isometry_check(&h, &h, 2, &Limits::default()).unwrap();
        assert_eq!((rep.m1, rep.m2, rep.a), (1, 1, 1));
        assert!(rep.is_valid());
    }

    #[test]
    fn pentagon_and_pentagram() {
        let am = fixtures::ex2();
        let gon = OrbitalHandle::lambda_arc(&am);
        let gram = OrbitalHandle::new(&am, VertexId::root(), "0.2".parse().unwrap()).unwrap();
        let rep = quasi_isometry_check(&gon, &gram, 3, &Limits::default()).unwrap();
        assert_eq!((rep.m1, rep.m2, rep.a), (2, 2, 2));
        assert!(rep.is_valid(), "{:?}", &rep.violations[..rep.violations.len().min(5)]);
        assert!(rep.verified_pairs > 0);
    }
}
