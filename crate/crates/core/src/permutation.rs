//! Permutations of a finite point set `{0, .., degree-1}` acting on the right.
//!
//! `p.apply(x)` is the image `x^p`, and `p.then(q)` is the product `pq`, so
//! `x^(pq) = (x^p)^q`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its image list, rejecting anything that is not a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::input(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of the given degree from disjoint-or-not cycles.
    /// Cycles are composed left to right.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut acc = Permutation::identity(degree);
        for cycle in cycles {
            let mut images: Vec<usize> = (0..degree).collect();
            let mut seen = std::collections::HashSet::new();
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::input(format!(
                        "point {x} out of range for degree {degree}"
                    )));
                }
                if !seen.insert(x) {
                    return Err(Error::input(format!("point {x} repeated in a cycle")));
                }
                images[x] = cycle[(k + 1) % cycle.len()];
            }
            acc = acc.then(&Permutation { images });
        }
        Ok(acc)
    }

    /// Parses `"(0 1 2)(3 4)"`, `"()"` or `"[1,2,0]"`.
    pub fn parse(degree: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(body) = text.strip_prefix('[') {
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| Error::input(format!("unterminated image list {text:?}")))?;
            let images = body
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::input(format!("bad point {s:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if images.len() != degree {
                return Err(Error::input(format!(
                    "image list {text:?} has length {}, expected degree {degree}",
                    images.len()
                )));
            }
            return Permutation::from_images(images);
        }

        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::input(format!("expected '(' in {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::input(format!("unterminated cycle in {text:?}")))?;
            let cycle = open[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::input(format!("bad point {s:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = open[close + 1..].trim_start();
        }
        Permutation::from_cycles(degree, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// The product `self * other`: apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Image-list form, e.g. `[1,2,0]`.
    pub fn image_list(&self) -> String {
        let parts: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let parts: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Permutation::from_images(images).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn right_action_composition() {
        let p = Permutation::parse(3, "(0 1 2)").unwrap();
        let q = Permutation::parse(3, "(1 2)").unwrap();
        // 0 -> 1 under p, then 1 -> 2 under q.
        assert_eq!(p.then(&q).apply(0), 2);
        assert_eq!(p.apply(0), 1);
    }

    #[test]
    fn parses_both_notations() {
        let a = Permutation::parse(5, "(0 1)(2 3 4)").unwrap();
        let b = Permutation::parse(5, "[1,0,3,4,2]").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "(0 1)(2 3 4)");
        assert_eq!(a.image_list(), "[1,0,3,4,2]");
        assert!(Permutation::parse(4, "()").unwrap().is_identity());
    }

    #[test]
    fn rejects_malformed() {
        assert!(Permutation::parse(3, "(0 1").is_err());
        assert!(Permutation::parse(3, "(0 3)").is_err());
        assert!(Permutation::parse(3, "(0 0)").is_err());
        assert!(Permutation::parse(3, "[0,0,1]").is_err());
        assert!(Permutation::parse(3, "[0,1]").is_err());
        assert!(Permutation::parse(3, "0 1").is_err());
    }

    fn perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn group_laws(p in perm(7), q in perm(7), r in perm(7)) {
            prop_assert_eq!(p.then(&q).then(&r), p.then(&q.then(&r)));
            prop_assert!(p.then(&p.inverse()).is_identity());
            prop_assert_eq!(Permutation::parse(7, &p.to_string()).unwrap(), p.clone());
            prop_assert_eq!(Permutation::parse(7, &p.image_list()).unwrap(), p);
        }
    }
}
