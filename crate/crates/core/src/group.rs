//! Finite permutation groups given by generators: orbits, stabilizers,
//! transitivity, regularity, primitivity and orbital digraphs.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use serde::Serialize;

use crate::digraph::FiniteDigraph;
use crate::error::{Error, Result};
use crate::limits::DEFAULT_MAX_ELEMENTS;
use crate::permutation::Permutation;

#[derive(Clone, Debug, Serialize)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Permutation>,
    #[serde(skip)]
    elements: OnceLock<Vec<Permutation>>,
}

/// Outcome of a primitivity test on a transitive group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Primitivity {
    Primitive,
    /// A nontrivial block containing point 0, found as the minimal block of `{0, i}`
    /// for the least `i` that gives a proper one.
    Imprimitive { block: Vec<usize> },
}

impl Primitivity {
    pub fn is_primitive(&self) -> bool {
        matches!(self, Primitivity::Primitive)
    }
}

impl FiniteGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::input(format!(
                "generator {g} has degree {}, group degree is {degree}",
                g.degree()
            )));
        }
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(FiniteGroup {
            degree,
            generators,
            elements: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        FiniteGroup {
            degree,
            generators: Vec::new(),
            elements: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// All elements, sorted by image vector. Fails when the order exceeds the default cap.
    pub fn elements(&self) -> Result<&[Permutation]> {
        self.elements_capped(DEFAULT_MAX_ELEMENTS)
    }

    pub fn elements_capped(&self, cap: usize) -> Result<&[Permutation]> {
        if let Some(elements) = self.elements.get() {
            return Ok(elements);
        }
        let elements = self.enumerate(cap)?;
        Ok(self.elements.get_or_init(|| elements))
    }

    fn enumerate(&self, cap: usize) -> Result<Vec<Permutation>> {
        let id = self.identity();
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = x.then(g);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(Error::capacity("group elements", seen.len() as u128, cap));
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<Permutation> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Ok(false);
        }
        Ok(self.elements()?.binary_search(p).is_ok())
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    fn check_point(&self, point: usize) -> Result<()> {
        if point >= self.degree {
            return Err(Error::input(format!(
                "point {point} out of range for degree {}",
                self.degree
            )));
        }
        Ok(())
    }

    /// The orbit `point^G`, sorted.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>> {
        self.check_point(point)?;
        let mut orbit: Vec<usize> = self.orbit_transversal(point).into_keys().collect();
        orbit.sort_unstable();
        Ok(orbit)
    }

    /// Maps each orbit point `x` to an element carrying `point` to `x`.
    fn orbit_transversal(&self, point: usize) -> HashMap<usize, Permutation> {
        let mut reps = HashMap::from([(point, self.identity())]);
        let mut queue = VecDeque::from([point]);
        while let Some(x) = queue.pop_front() {
            let ux = reps[&x].clone();
            for g in &self.generators {
                let y = g.apply(x);
                if let std::collections::hash_map::Entry::Vacant(e) = reps.entry(y) {
                    e.insert(ux.then(g));
                    queue.push_back(y);
                }
            }
        }
        reps
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit_transversal(0).len() == self.degree
    }

    /// The stabilizer of `point`, generated by reduced Schreier generators.
    pub fn point_stabilizer(&self, point: usize) -> Result<FiniteGroup> {
        self.check_point(point)?;
        let reps = self.orbit_transversal(point);
        let mut schreier: Vec<Permutation> = Vec::new();
        let mut seen = HashSet::new();
        for (&x, ux) in &reps {
            for g in &self.generators {
                let uy_inv = reps[&g.apply(x)].inverse();
                let s = ux.then(g).then(&uy_inv);
                if !s.is_identity() && seen.insert(s.clone()) {
                    schreier.push(s);
                }
            }
        }
        schreier.sort();
        Ok(reduce_generators(self.degree, schreier))
    }

    fn stabilizer_by_filter(&self, keep: impl Fn(&Permutation) -> bool) -> Result<FiniteGroup> {
        let elements = self.elements()?;
        let kept: Vec<Permutation> = elements.iter().filter(|g| keep(g)).cloned().collect();
        Ok(reduce_generators(self.degree, kept))
    }

    /// `G_{Σ}`: elements mapping the subset onto itself.
    pub fn setwise_stabilizer(&self, subset: &[usize]) -> Result<FiniteGroup> {
        for &x in subset {
            self.check_point(x)?;
        }
        let set: HashSet<usize> = subset.iter().copied().collect();
        self.stabilizer_by_filter(|g| set.iter().all(|&x| set.contains(&g.apply(x))))
    }

    /// `G_(Σ)`: elements fixing every point of the subset.
    pub fn pointwise_stabilizer(&self, subset: &[usize]) -> Result<FiniteGroup> {
        for &x in subset {
            self.check_point(x)?;
        }
        self.stabilizer_by_filter(|g| subset.iter().all(|&x| g.apply(x) == x))
    }

    fn require_transitive(&self, what: &str) -> Result<()> {
        if !self.is_transitive() {
            return Err(Error::Precondition(format!("{what} requires a transitive group")));
        }
        Ok(())
    }

    /// Primitivity by minimal block closure of `{0, i}` for each `i`.
    pub fn primitivity(&self) -> Result<Primitivity> {
        self.require_transitive("primitivity")?;
        for i in 1..self.degree {
            let block = self.minimal_block(0, i);
            if block.len() < self.degree {
                return Ok(Primitivity::Imprimitive { block });
            }
        }
        Ok(Primitivity::Primitive)
    }

    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self.primitivity()?.is_primitive())
    }

    /// The smallest block containing `a` and `b`, via union-find closure.
    pub fn minimal_block(&self, a: usize, b: usize) -> Vec<usize> {
        let mut uf = UnionFind::new(self.degree);
        let mut pending = vec![(a, b)];
        uf.union(a, b);
        while let Some((x, y)) = pending.pop() {
            for g in &self.generators {
                let (gx, gy) = (g.apply(x), g.apply(y));
                if uf.union(gx, gy) {
                    pending.push((gx, gy));
                }
            }
        }
        let root = uf.find(a);
        (0..self.degree).filter(|&x| uf.find(x) == root).collect()
    }

    pub fn is_regular(&self) -> Result<bool> {
        self.require_transitive("regularity")?;
        Ok(self.degree == 0 || self.point_stabilizer(0)?.is_trivial())
    }

    /// One digraph per orbit of the group on ordered pairs of distinct points,
    /// ordered by least seed pair.
    pub fn orbital_digraphs(&self) -> Vec<FiniteDigraph> {
        let n = self.degree;
        let mut seen = vec![false; n * n];
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x == y || seen[x * n + y] {
                    continue;
                }
                out.push(self.arc_orbit(x, y, &mut seen));
            }
        }
        out
    }

    /// The orbital digraph `(points, (x, y)^G)`.
    pub fn orbital_digraph(&self, x: usize, y: usize) -> Result<FiniteDigraph> {
        self.check_point(x)?;
        self.check_point(y)?;
        if x == y {
            return Err(Error::input("diagonal orbital digraphs are not represented"));
        }
        let mut seen = vec![false; self.degree * self.degree];
        Ok(self.arc_orbit(x, y, &mut seen))
    }

    fn arc_orbit(&self, x: usize, y: usize, seen: &mut [bool]) -> FiniteDigraph {
        let n = self.degree;
        let mut arcs = Vec::new();
        let mut queue = VecDeque::from([(x, y)]);
        seen[x * n + y] = true;
        while let Some((u, v)) = queue.pop_front() {
            arcs.push((u, v));
            for g in &self.generators {
                let (gu, gv) = (g.apply(u), g.apply(v));
                if !seen[gu * n + gv] {
                    seen[gu * n + gv] = true;
                    queue.push_back((gu, gv));
                }
            }
        }
        FiniteDigraph::new(n, arcs).expect("arc orbits contain no loops")
    }
}

/// Drops generators already in the span of the earlier ones.
fn reduce_generators(degree: usize, candidates: Vec<Permutation>) -> FiniteGroup {
    let mut kept: Vec<Permutation> = Vec::new();
    let mut span: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
    for c in candidates {
        if span.contains(&c) {
            continue;
        }
        kept.push(c);
        span = FiniteGroup::new(degree, kept.clone())
            .expect("same degree")
            .enumerate(usize::MAX)
            .expect("uncapped")
            .into_iter()
            .collect();
    }
    FiniteGroup::new(degree, kept).expect("same degree")
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if two distinct classes were merged.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(degree: usize, gens: &[&str]) -> FiniteGroup {
        FiniteGroup::new(
            degree,
            gens.iter()
                .map(|g| Permutation::parse(degree, g).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn sym3() -> FiniteGroup {
        group(3, &["(0 1 2)", "(1 2)"])
    }

    fn d5() -> FiniteGroup {
        group(5, &["(0 1 2 3 4)", "(1 4)(2 3)"])
    }

    /// Every partition of `0..n` (restricted growth strings).
    fn partitions(n: usize) -> Vec<Vec<usize>> {
        fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == n {
                out.push(prefix.clone());
                return;
            }
            let next = prefix.iter().max().map_or(0, |m| m + 1);
            for c in 0..=next {
                prefix.push(c);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), n, &mut out);
        out
    }

    /// Nontrivial invariant partitions by exhaustive search.
    fn invariant_partitions(g: &FiniteGroup) -> Vec<Vec<usize>> {
        let n = g.degree();
        partitions(n)
            .into_iter()
            .filter(|labels| {
                let classes = labels.iter().max().unwrap() + 1;
                classes > 1 && classes < n
            })
            .filter(|labels| {
                g.generators().iter().all(|s| {
                    (0..n).all(|x| {
                        (0..n).all(|y| {
                            (labels[x] == labels[y]) == (labels[s.apply(x)] == labels[s.apply(y)])
                        })
                    })
                })
            })
            .collect()
    }

    #[test]
    fn orbits() {
        assert_eq!(sym3().orbit(0).unwrap(), vec![0, 1, 2]);
        assert_eq!(FiniteGroup::trivial(3).orbit(2).unwrap(), vec![2]);
        assert_eq!(group(4, &["(0 1)(2 3)"]).orbit(0).unwrap(), vec![0, 1]);
        assert!(sym3().orbit(3).is_err());
    }

    #[test]
    fn point_stabilizers() {
        let s = sym3().point_stabilizer(0).unwrap();
        assert_eq!(s.order().unwrap(), 2);
        assert_eq!(s.generators(), &[Permutation::parse(3, "(1 2)").unwrap()]);

        let c3 = group(3, &["(0 1 2)"]);
        assert!(c3.point_stabilizer(0).unwrap().is_trivial());

        let s = d5().point_stabilizer(0).unwrap();
        assert_eq!(s.order().unwrap(), 2);
        assert_eq!(s.generators(), &[Permutation::parse(5, "(1 4)(2 3)").unwrap()]);
    }

    #[test]
    fn orbit_stabilizer_counts() {
        let groups = [
            sym3(),
            d5(),
            group(6, &["(0 1 2 3 4 5)", "(0 1)"]),
            group(4, &["(0 1 2 3)", "(0 2)"]),
            group(7, &["(0 1 2 3 4 5 6)", "(1 2 4)(3 6 5)"]),
        ];
        for g in &groups {
            for p in 0..g.degree() {
                let orbit = g.orbit(p).unwrap().len();
                let stab = g.point_stabilizer(p).unwrap().order().unwrap();
                assert_eq!(orbit * stab, g.order().unwrap(), "group {:?} point {p}", g.generators());
            }
        }
    }

    #[test]
    fn setwise_and_pointwise() {
        let g = sym3();
        let s = g.setwise_stabilizer(&[1, 2]).unwrap();
        assert_eq!(s.order().unwrap(), 2);
        assert!(s.contains(&Permutation::parse(3, "(1 2)").unwrap()).unwrap());
        assert_eq!(g.setwise_stabilizer(&[0, 1, 2]).unwrap().order().unwrap(), 6);
        assert_eq!(g.pointwise_stabilizer(&[1, 2]).unwrap().order().unwrap(), 1);
    }

    #[test]
    fn primitivity_examples() {
        assert!(sym3().is_primitive().unwrap());
        assert_eq!(
            group(4, &["(0 1 2 3)"]).primitivity().unwrap(),
            Primitivity::Imprimitive { block: vec![0, 2] }
        );
        assert!(d5().is_primitive().unwrap());
        assert!(group(4, &["(0 1)"]).primitivity().is_err());
    }

    #[test]
    fn minimal_blocks_agree_with_partition_search() {
        let groups = [
            sym3(),
            d5(),
            group(4, &["(0 1 2 3)"]),
            group(4, &["(0 1 2 3)", "(0 2)"]),
            group(6, &["(0 1 2 3 4 5)"]),
            group(6, &["(0 1 2 3 4 5)", "(1 5)(2 4)"]),
            group(6, &["(0 1 2)(3 4 5)", "(0 3)(1 4)(2 5)"]),
            group(8, &["(0 1 2 3 4 5 6 7)", "(1 7)(2 6)(3 5)"]),
            group(7, &["(0 1 2 3 4 5 6)"]),
            group(8, &["(0 1 2 3)(4 5 6 7)", "(0 4)(1 5)(2 6)(3 7)", "(1 3)(5 7)"]),
        ];
        for g in &groups {
            let exhaustive = invariant_partitions(g);
            let prim = g.primitivity().unwrap();
            assert_eq!(prim.is_primitive(), exhaustive.is_empty(), "{:?}", g.generators());
            if let Primitivity::Imprimitive { block } = prim {
                // The witness is a class of some invariant partition.
                assert!(exhaustive.iter().any(|labels| {
                    let class: Vec<usize> =
                        (0..g.degree()).filter(|&x| labels[x] == labels[0]).collect();
                    class == block
                }));
            }
        }
    }

    #[test]
    fn regularity() {
        assert!(group(3, &["(0 1 2)"]).is_regular().unwrap());
        assert!(!sym3().is_regular().unwrap());
        assert!(!d5().is_regular().unwrap());
    }

    #[test]
    fn orbital_digraph_examples() {
        let o = sym3().orbital_digraphs();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].arc_count(), 6);

        let o = d5().orbital_digraphs();
        assert_eq!(o.len(), 2);
        assert!(o[0].has_arc(0, 1) && o[0].arc_count() == 10);
        assert!(o[1].has_arc(0, 2) && o[1].arc_count() == 10);

        let o = FiniteGroup::trivial(2).orbital_digraphs();
        assert_eq!(o.len(), 2);
        assert!(o.iter().all(|d| d.arc_count() == 1));
    }

    #[test]
    fn arc_orbits_partition_pairs() {
        let g = group(6, &["(0 1 2 3 4 5)", "(1 5)(2 4)"]);
        let digraphs = g.orbital_digraphs();
        let total: usize = digraphs.iter().map(|d| d.arc_count()).sum();
        assert_eq!(total, 30);
        for d in &digraphs {
            // Arc-transitive: the orbit of any arc is the whole arc set.
            for &(x, y) in d.arcs() {
                assert_eq!(&g.orbital_digraph(x, y).unwrap(), d);
            }
        }
    }
}
