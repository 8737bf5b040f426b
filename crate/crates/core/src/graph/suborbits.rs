use std::collections::HashSet;

use serde::Serialize;

use super::address::VertexId;
use super::ball::Ball;
use super::AddressedGraph;
use crate::amalgam::Factor;
use crate::error::Result;
use crate::limits::Limits;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Suborbit {
    pub radius: usize,
    /// Least address in the orbit.
    pub representative: VertexId,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuborbitReport {
    pub rmax: usize,
    pub suborbits: Vec<Suborbit>,
    pub sphere_sizes: Vec<usize>,
}

impl SuborbitReport {
    /// Subdegrees ordered by radius, then by least address.
    pub fn subdegrees(&self) -> Vec<usize> {
        self.suborbits.iter().map(|s| s.size).collect()
    }

    pub fn at_radius(&self, r: usize) -> impl Iterator<Item = &Suborbit> {
        self.suborbits.iter().filter(move |s| s.radius == r)
    }
}

/// Orbits of the root stabilizer (the vertex group) on each sphere around the root.
pub fn suborbits<G: AddressedGraph + ?Sized>(g: &G, rmax: usize, limits: &Limits) -> Result<SuborbitReport> {
    let am = g.amalgam();
    let ball = Ball::build(g, &VertexId::root(), rmax, limits)?;
    let stabilizer = am
        .vertex_group_elements()
        .iter()
        .map(|a| am.element(Factor::A, a))
        .collect::<Result<Vec<_>>>()?;
    let mut seen: HashSet<VertexId> = HashSet::new();
    let mut out = Vec::new();
    // Ball vertices are already sorted by (depth, address).
    for v in ball.vertices() {
        if seen.contains(&v.address) {
            continue;
        }
        let mut size = 0;
        for a in &stabilizer {
            let image = am.act_unchecked(a, &v.address);
            if seen.insert(image) {
                size += 1;
            }
        }
        out.push(Suborbit {
            radius: v.depth,
            representative: v.address.clone(),
            size,
        });
    }
    Ok(SuborbitReport {
        rmax,
        suborbits: out,
        sphere_sizes: ball.sphere_sizes(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::CanonicalGraph;
    use super::*;
    use crate::amalgam::fixtures;

    #[test]
    fn ex1_subdegrees() {
        let am = fixtures::ex1();
        let g = CanonicalGraph::new(&am);
        let r0 = suborbits(&g, 0, &Limits::default()).unwrap();
        assert_eq!(r0.subdegrees(), vec![1]);
        let r1 = suborbits(&g, 1, &Limits::default()).unwrap();
        assert_eq!(r1.subdegrees(), vec![1, 4]);
        let r2 = suborbits(&g, 2, &Limits::default()).unwrap();
        assert_eq!(r2.at_radius(2).map(|s| s.size).collect::<Vec<_>>(), vec![4, 4]);
    }

    #[test]
    fn orbit_sizes_fill_spheres() {
        let am = fixtures::ex2();
        let g = CanonicalGraph::new(&am);
        let rep = suborbits(&g, 4, &Limits::default()).unwrap();
        for r in 0..=4 {
            let total: usize = rep.at_radius(r).map(|s| s.size).sum();
            assert_eq!(total, rep.sphere_sizes[r]);
        }
    }
}
