//! The amalgamated free product `G = A *_H P` with exact normal forms and its
//! action on the vertices of `Γ(m, Λ)`.
//!
//! `P` acts on the lobe domain `Δ`, `H` is the stabilizer of the base point
//! `δ`, and `A` is a finite vertex group containing a copy of `H`.

mod action;
pub mod fixtures;
mod normal_form;

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use serde::Serialize;
use thiserror::Error;

use crate::digraph::FiniteDigraph;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::limits::MAX_FACTOR_ORDER;
use crate::permutation::Permutation;

pub use normal_form::{Factor, GroupWord, Letter, NormalForm, Syllable};

/// Raw amalgam data as supplied by the user.
#[derive(Clone, Debug, Serialize)]
pub struct AmalgamSpec {
    pub lobe_group: FiniteGroup,
    pub delta: usize,
    pub vertex_group: FiniteGroup,
    /// Pairs `(h, φ(h))`; the `h` generate `H` inside the lobe group.
    pub embedding: Vec<(Permutation, Permutation)>,
    pub lambda_arc: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("base point {delta} out of range for degree {degree}")]
    BasePointOutOfRange { delta: usize, degree: usize },
    #[error("lobe arc ({0}, {1}) must start at the base point and stay in range")]
    BadLobeArc(usize, usize),
    #[error("lobe arc is a loop at the base point")]
    DegenerateArc,
    #[error("lobe domain has {0} points, need at least 3")]
    DomainTooSmall(usize),
    #[error("lobe group intransitive")]
    Intransitive,
    #[error("lobe group imprimitive (block {0:?})")]
    Imprimitive(Vec<usize>),
    #[error("lobe group regular")]
    Regular,
    #[error("{which} group has order {order}, more than {cap}")]
    FactorTooLarge {
        which: &'static str,
        order: usize,
        cap: usize,
    },
    #[error("embedded subgroup is not the base point stabilizer: {0}")]
    StabilizerMismatch(String),
    #[error("embedding is not an injective homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("vertex group index [A:H] = {0}, need at least 2")]
    IndexTooSmall(usize),
}

impl ValidationError {
    pub fn code(&self) -> &'static str {
        match self {
            ValidationError::BasePointOutOfRange { .. } => "base-point-range",
            ValidationError::BadLobeArc(..) => "bad-lobe-arc",
            ValidationError::DegenerateArc => "degenerate-arc",
            ValidationError::DomainTooSmall(_) => "domain-too-small",
            ValidationError::Intransitive => "lobe-group-intransitive",
            ValidationError::Imprimitive(_) => "lobe-group-imprimitive",
            ValidationError::Regular => "lobe-group-regular",
            ValidationError::FactorTooLarge { .. } => "factor-too-large",
            ValidationError::StabilizerMismatch(_) => "stabilizer-mismatch",
            ValidationError::NotHomomorphism(_) => "embedding-not-homomorphism",
            ValidationError::IndexTooSmall(_) => "index-too-small",
        }
    }
}

/// Dense arithmetic for one finite factor, elements indexed in sorted order.
#[derive(Debug)]
pub(crate) struct FactorTable {
    pub(crate) elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl FactorTable {
    fn build(group: &FiniteGroup, which: &'static str) -> std::result::Result<Self, ValidationError> {
        let too_large = |order| ValidationError::FactorTooLarge {
            which,
            order,
            cap: MAX_FACTOR_ORDER,
        };
        let elements = group
            .elements_capped(MAX_FACTOR_ORDER)
            .map_err(|_| too_large(MAX_FACTOR_ORDER + 1))?
            .to_vec();
        let n = elements.len();
        let index: HashMap<Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let mut mul = vec![0u32; n * n];
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                mul[i * n + j] = index[&x.then(y)];
            }
        }
        let inv = elements.iter().map(|x| index[&x.inverse()]).collect();
        Ok(FactorTable {
            elements,
            index,
            mul,
            inv,
        })
    }

    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.elements.len() + b as usize]
    }

    #[inline]
    pub(crate) fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub(crate) fn index_of(&self, p: &Permutation) -> Option<u32> {
        self.index.get(p).copied()
    }

    pub(crate) fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Right transversal of `H` in a factor: per element, its coset representative
/// index and the `H`-part (as a lobe-group index) with `element = h * rep`.
#[derive(Debug)]
pub(crate) struct Transversal {
    pub(crate) reps: Vec<u32>,
    pub(crate) decomposition: Vec<(u32, u32)>,
}

/// A validated amalgam with precomputed tables. Immutable once built.
#[derive(Debug)]
pub struct ValidatedAmalgam {
    spec: AmalgamSpec,
    id: u64,
    pub(crate) p: FactorTable,
    pub(crate) a: FactorTable,
    /// `H` as sorted lobe-group indices.
    pub(crate) h: Vec<u32>,
    /// Lobe-group index to vertex-group index on `H`; `u32::MAX` elsewhere.
    pub(crate) phi: Vec<u32>,
    pub(crate) trans_a: Transversal,
    pub(crate) trans_p: Transversal,
    /// For each lobe-group transversal index, the image of the base point.
    pub(crate) rep_point: Vec<usize>,
    /// For each point of `Δ`, the lobe-group transversal index reaching it.
    pub(crate) point_rep: Vec<u32>,
    lambda: FiniteDigraph,
}

impl ValidatedAmalgam {
    /// Skips the primitivity, regularity and size-of-domain checks.
    /// Only for building deliberately degenerate fixtures in tests.
    #[doc(hidden)]
    pub fn assume_valid(spec: AmalgamSpec) -> Result<ValidatedAmalgam> {
        Ok(build(spec, false)?)
    }

    pub fn spec(&self) -> &AmalgamSpec {
        &self.spec
    }

    /// Stable identifier derived from the defining data.
    pub fn id(&self) -> u64 {
        self.id
    }

    /// Number of lobes through each vertex, `[A : H]`.
    pub fn m(&self) -> usize {
        self.trans_a.reps.len()
    }

    pub fn delta(&self) -> usize {
        self.spec.delta
    }

    pub fn lobe_degree(&self) -> usize {
        self.spec.lobe_group.degree()
    }

    pub fn lambda(&self) -> &FiniteDigraph {
        &self.lambda
    }

    pub fn lobe_group(&self) -> &FiniteGroup {
        &self.spec.lobe_group
    }

    pub fn vertex_group(&self) -> &FiniteGroup {
        &self.spec.vertex_group
    }

    pub fn stabilizer_order(&self) -> usize {
        self.h.len()
    }

    pub fn coset_reps_a(&self) -> Vec<&Permutation> {
        self.trans_a
            .reps
            .iter()
            .map(|&i| &self.a.elements[i as usize])
            .collect()
    }

    pub fn coset_reps_p(&self) -> Vec<&Permutation> {
        self.trans_p
            .reps
            .iter()
            .map(|&i| &self.p.elements[i as usize])
            .collect()
    }

    /// The vertex-group elements, sorted.
    pub fn vertex_group_elements(&self) -> &[Permutation] {
        &self.a.elements
    }

    pub fn lobe_group_elements(&self) -> &[Permutation] {
        &self.p.elements
    }

    /// `H` as elements of the lobe group.
    pub fn stabilizer_elements(&self) -> Vec<&Permutation> {
        self.h.iter().map(|&i| &self.p.elements[i as usize]).collect()
    }

    /// `φ(h)` for `h` in `H`.
    pub fn embed(&self, h: &Permutation) -> Option<&Permutation> {
        let i = self.p.index_of(h)?;
        let j = self.phi[i as usize];
        (j != u32::MAX).then(|| &self.a.elements[j as usize])
    }
}

pub fn validate(spec: AmalgamSpec) -> std::result::Result<ValidatedAmalgam, ValidationError> {
    build(spec, true)
}

fn build(spec: AmalgamSpec, strict: bool) -> std::result::Result<ValidatedAmalgam, ValidationError> {
    let pg = &spec.lobe_group;
    let degree = pg.degree();
    let delta = spec.delta;
    if delta >= degree {
        return Err(ValidationError::BasePointOutOfRange { delta, degree });
    }
    let (x, y) = spec.lambda_arc;
    if x != delta || y >= degree {
        return Err(ValidationError::BadLobeArc(x, y));
    }
    if y == delta {
        return Err(ValidationError::DegenerateArc);
    }
    if strict && degree < 3 {
        return Err(ValidationError::DomainTooSmall(degree));
    }
    if !pg.is_transitive() {
        return Err(ValidationError::Intransitive);
    }

    let p = FactorTable::build(pg, "lobe")?;
    let a = FactorTable::build(&spec.vertex_group, "vertex")?;

    if strict {
        match pg.primitivity().map_err(|_| ValidationError::Intransitive)? {
            crate::group::Primitivity::Imprimitive { block } => {
                return Err(ValidationError::Imprimitive(block))
            }
            crate::group::Primitivity::Primitive => {}
        }
        if p.order() == degree {
            return Err(ValidationError::Regular);
        }
    }

    // H must be exactly the stabilizer of δ, generated by the embedding keys.
    let stab: Vec<u32> = p
        .elements
        .iter()
        .enumerate()
        .filter(|(_, g)| g.apply(delta) == delta)
        .map(|(i, _)| i as u32)
        .collect();
    let mut gens = Vec::with_capacity(spec.embedding.len());
    for (h, img) in &spec.embedding {
        let hi = p.index_of(h).ok_or_else(|| {
            ValidationError::StabilizerMismatch(format!("{h} is not in the lobe group"))
        })?;
        if h.apply(delta) != delta {
            return Err(ValidationError::StabilizerMismatch(format!(
                "{h} moves the base point"
            )));
        }
        let ai = a.index_of(img).ok_or_else(|| {
            ValidationError::NotHomomorphism(format!("{img} is not in the vertex group"))
        })?;
        gens.push((hi, ai));
    }

    // Extend the generator map along the Cayley graph of ⟨gens⟩; any clash
    // means the assignment is not a homomorphism.
    let mut phi = vec![u32::MAX; p.order()];
    let identity_p = 0u32;
    let identity_a = 0u32;
    phi[identity_p as usize] = identity_a;
    let mut queue = vec![identity_p];
    while let Some(x) = queue.pop() {
        for &(g, ga) in &gens {
            let xy = p.mul(x, g);
            let image = a.mul(phi[x as usize], ga);
            match phi[xy as usize] {
                u32::MAX => {
                    phi[xy as usize] = image;
                    queue.push(xy);
                }
                existing if existing != image => {
                    return Err(ValidationError::NotHomomorphism(format!(
                        "{} has two images",
                        p.elements[xy as usize]
                    )));
                }
                _ => {}
            }
        }
    }
    let h: Vec<u32> = (0..p.order() as u32)
        .filter(|&i| phi[i as usize] != u32::MAX)
        .collect();
    if h != stab {
        return Err(ValidationError::StabilizerMismatch(format!(
            "generated subgroup has order {}, stabilizer has order {}",
            h.len(),
            stab.len()
        )));
    }
    let mut image_seen = vec![false; a.order()];
    for &hi in &h {
        let ai = phi[hi as usize];
        if std::mem::replace(&mut image_seen[ai as usize], true) {
            return Err(ValidationError::NotHomomorphism(
                "embedding is not injective".into(),
            ));
        }
    }

    let trans_a = transversal(&a, &h, |hi| phi[hi as usize]);
    let trans_p = transversal(&p, &h, |hi| hi);
    let m = trans_a.reps.len();
    if m < 2 {
        return Err(ValidationError::IndexTooSmall(m));
    }

    let rep_point: Vec<usize> = trans_p
        .reps
        .iter()
        .map(|&r| p.elements[r as usize].apply(delta))
        .collect();
    let mut point_rep = vec![u32::MAX; degree];
    for (k, &pt) in rep_point.iter().enumerate() {
        point_rep[pt] = k as u32;
    }

    let lambda = pg
        .orbital_digraph(x, y)
        .map_err(|_| ValidationError::DegenerateArc)?;

    let id = amalgam_id(&spec);
    Ok(ValidatedAmalgam {
        spec,
        id,
        p,
        a,
        h,
        phi,
        trans_a,
        trans_p,
        rep_point,
        point_rep,
        lambda,
    })
}

/// Lexicographically least element of each right coset `H·g`; since elements
/// are indexed in sorted order, the first unseen element of a coset is its
/// representative, and the identity gets index 0.
fn transversal(table: &FactorTable, h: &[u32], embed: impl Fn(u32) -> u32) -> Transversal {
    let n = table.order();
    let mut decomposition = vec![(u32::MAX, u32::MAX); n];
    let mut reps = Vec::new();
    for g in 0..n as u32 {
        if decomposition[g as usize].0 != u32::MAX {
            continue;
        }
        let t = reps.len() as u32;
        reps.push(g);
        for &hi in h {
            let e = table.mul(embed(hi), g);
            decomposition[e as usize] = (t, hi);
        }
    }
    Transversal {
        reps,
        decomposition,
    }
}

fn amalgam_id(spec: &AmalgamSpec) -> u64 {
    let mut hasher = DefaultHasher::new();
    spec.lobe_group.degree().hash(&mut hasher);
    spec.lobe_group.generators().hash(&mut hasher);
    spec.delta.hash(&mut hasher);
    spec.vertex_group.degree().hash(&mut hasher);
    spec.vertex_group.generators().hash(&mut hasher);
    spec.embedding.hash(&mut hasher);
    spec.lambda_arc.hash(&mut hasher);
    hasher.finish()
}

impl From<ValidationError> for Error {
    fn from(e: ValidationError) -> Self {
        Error::Validation(e)
    }
}

pub(crate) fn check_same(x: u64, y: u64) -> Result<()> {
    if x != y {
        return Err(Error::input("elements belong to different amalgams"));
    }
    Ok(())
}
