//! Canonical addresses of vertices of `Γ(m, Λ)` and of its lobes.
//!
//! A vertex address is the path from the root in the block-cut-vertex tree,
//! written as steps `(lobe choice, in-lobe label)`. The first step may use any
//! lobe choice `0..m`; later steps never use choice 0, which is the lobe the
//! vertex was entered through. Labels are points of the lobe group's domain
//! other than the base point.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub lobe: usize,
    pub point: usize,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexId {
    steps: Vec<Step>,
}

impl VertexId {
    pub fn root() -> Self {
        VertexId { steps: Vec::new() }
    }

    pub fn from_steps(steps: Vec<Step>) -> Self {
        VertexId { steps }
    }

    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        VertexId {
            steps: pairs
                .iter()
                .map(|&(lobe, point)| Step { lobe, point })
                .collect(),
        }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn is_root(&self) -> bool {
        self.steps.is_empty()
    }

    /// Number of lobes crossed from the root; half the tree distance.
    pub fn tree_depth(&self) -> usize {
        self.steps.len()
    }

    pub fn parent(&self) -> Option<VertexId> {
        if self.steps.is_empty() {
            return None;
        }
        Some(VertexId {
            steps: self.steps[..self.steps.len() - 1].to_vec(),
        })
    }

    pub fn last(&self) -> Option<Step> {
        self.steps.last().copied()
    }

    pub fn child(&self, lobe: usize, point: usize) -> VertexId {
        let mut steps = self.steps.clone();
        steps.push(Step { lobe, point });
        VertexId { steps }
    }

    pub fn common_prefix_len(&self, other: &VertexId) -> usize {
        self.steps
            .iter()
            .zip(&other.steps)
            .take_while(|(a, b)| a == b)
            .count()
    }

    pub fn starts_with(&self, prefix: &VertexId) -> bool {
        self.steps.starts_with(&prefix.steps)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            if k > 0 {
                f.write_str("/")?;
            }
            write!(f, "{}.{}", s.lobe, s.point)?;
        }
        Ok(())
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            f.write_str("<root>")
        } else {
            write!(f, "{self}")
        }
    }
}

impl FromStr for VertexId {
    type Err = Error;

    /// Parses `"l0.v1/l1.v2"`; the empty string is the root.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(VertexId::root());
        }
        let steps = s
            .split('/')
            .map(|part| {
                let (l, v) = part
                    .split_once('.')
                    .ok_or_else(|| Error::input(format!("bad address step {part:?}")))?;
                let lobe = l
                    .parse()
                    .map_err(|_| Error::input(format!("bad lobe choice in {part:?}")))?;
                let point = v
                    .parse()
                    .map_err(|_| Error::input(format!("bad in-lobe label in {part:?}")))?;
                Ok(Step { lobe, point })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VertexId { steps })
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A lobe, named by its vertex nearest the root and the lobe choice taken there.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LobeId {
    pub attach: VertexId,
    pub choice: usize,
}

impl LobeId {
    pub fn new(attach: VertexId, choice: usize) -> Self {
        LobeId { attach, choice }
    }

    /// The lobe member with the given label; the base label maps to the attach vertex.
    pub fn member(&self, label: usize, base: usize) -> VertexId {
        if label == base {
            self.attach.clone()
        } else {
            self.attach.child(self.choice, label)
        }
    }

    /// Distance from the root in the block-cut-vertex tree.
    pub fn tree_depth(&self) -> usize {
        2 * self.attach.tree_depth() + 1
    }
}

impl fmt::Display for LobeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.attach, self.choice)
    }
}

impl Serialize for LobeId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The unique lobe containing both vertices, if they share one.
pub fn shared_lobe(u: &VertexId, w: &VertexId) -> Option<LobeId> {
    let (a, b) = (u.steps(), w.steps());
    if a.len() == b.len() + 1 && u.starts_with(w) {
        return Some(LobeId::new(w.clone(), a[b.len()].lobe));
    }
    if b.len() == a.len() + 1 && w.starts_with(u) {
        return Some(LobeId::new(u.clone(), b[a.len()].lobe));
    }
    if a.len() == b.len() && !a.is_empty() {
        let k = a.len() - 1;
        if a[..k] == b[..k] && a[k].lobe == b[k].lobe && a[k].point != b[k].point {
            return Some(LobeId::new(u.parent().unwrap(), a[k].lobe));
        }
    }
    None
}

/// Distance between two vertices in the block-cut-vertex tree.
pub fn tree_distance(u: &VertexId, w: &VertexId) -> usize {
    let c = u.common_prefix_len(w);
    let (a, b) = (&u.steps()[c..], &w.steps()[c..]);
    let lobes = a.len() + b.len();
    if !a.is_empty() && !b.is_empty() && a[0].lobe == b[0].lobe {
        2 * (lobes - 1)
    } else {
        2 * lobes
    }
}
