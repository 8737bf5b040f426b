//! Vertices of `Γ(m, Λ)` are right cosets `A·g`. An address names the coset
//! of the word `p_{jk} a_{ik} ... p_{j1} a_{i1}`, where `a_i` and `p_j` are
//! transversal representatives and `p_j` sends the base point to `j`.

use super::{Factor, NormalForm, Syllable, ValidatedAmalgam};
use crate::error::{Error, Result};
use crate::graph::address::{Step, VertexId};

impl ValidatedAmalgam {
    pub fn check_address(&self, v: &VertexId) -> Result<()> {
        for (k, s) in v.steps().iter().enumerate() {
            if s.lobe >= self.m() {
                return Err(Error::input(format!(
                    "address {v}: lobe choice {} out of range (m = {})",
                    s.lobe,
                    self.m()
                )));
            }
            if k > 0 && s.lobe == 0 {
                return Err(Error::input(format!(
                    "address {v}: lobe choice 0 only allowed in the first step"
                )));
            }
            if s.point >= self.lobe_degree() || s.point == self.delta() {
                return Err(Error::input(format!(
                    "address {v}: bad in-lobe label {}",
                    s.point
                )));
            }
        }
        Ok(())
    }

    /// The element of `G` carrying the root to `v`, in normal form.
    pub fn vertex_word(&self, v: &VertexId) -> Result<NormalForm> {
        self.check_address(v)?;
        Ok(self.vertex_word_unchecked(v))
    }

    pub(crate) fn vertex_word_unchecked(&self, v: &VertexId) -> NormalForm {
        let mut nf = self.identity();
        // Built right to left, so the root-side step is prepended first.
        for s in v.steps() {
            if s.lobe != 0 {
                let a = self.trans_a.reps[s.lobe];
                self.prepend(&mut nf, Factor::A, a);
            }
            let p = self.trans_p.reps[self.point_rep[s.point] as usize];
            self.prepend(&mut nf, Factor::P, p);
        }
        nf
    }

    /// The address of the coset `A·g`.
    pub fn address_of(&self, g: &NormalForm) -> VertexId {
        let mut syl: &[Syllable] = g.syllables();
        if let Some(first) = syl.first() {
            if first.factor == Factor::A {
                syl = &syl[1..];
            }
        }
        let mut steps = Vec::with_capacity(syl.len() / 2 + 1);
        let mut end = syl.len();
        while end > 0 {
            let last = syl[end - 1];
            let (lobe, p) = if last.factor == Factor::A {
                (last.rep, syl[end - 2])
            } else {
                (0, last)
            };
            debug_assert_eq!(p.factor, Factor::P);
            steps.push(Step {
                lobe,
                point: self.rep_point[p.rep],
            });
            end -= if last.factor == Factor::A { 2 } else { 1 };
        }
        VertexId::from_steps(steps)
    }

    /// The image `v^g` under the right action.
    pub fn act_on_vertex(&self, g: &NormalForm, v: &VertexId) -> Result<VertexId> {
        self.check_address(v)?;
        let w = self.multiply(&self.vertex_word_unchecked(v), g)?;
        Ok(self.address_of(&w))
    }

    pub(crate) fn act_unchecked(&self, g: &NormalForm, v: &VertexId) -> VertexId {
        let mut w = g.clone();
        let x = self.vertex_word_unchecked(v);
        for &s in x.syllables().iter().rev() {
            self.prepend(&mut w, s.factor, self.rep_index(s));
        }
        self.address_of(&w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::fixtures;
    use crate::permutation::Permutation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn addresses_round_trip_through_words() {
        let am = fixtures::ex2();
        for s in ["", "0.1", "1.4", "0.2/1.3", "1.1/1.1/1.4"] {
            let v: VertexId = s.parse().unwrap();
            let w = am.vertex_word(&v).unwrap();
            assert_eq!(am.address_of(&w), v);
        }
    }

    #[test]
    fn invalid_addresses_rejected() {
        let am = fixtures::ex1();
        for s in ["2.1", "0.0", "0.3", "0.1/0.2"] {
            let v: VertexId = s.parse().unwrap();
            assert!(am.act_on_vertex(&am.identity(), &v).is_err(), "{s}");
        }
    }

    #[test]
    fn rotation_moves_root_into_lobe_zero() {
        let am = fixtures::ex1();
        let p = am
            .element(Factor::P, &Permutation::parse(3, "(0 1 2)").unwrap())
            .unwrap();
        let img = am.act_on_vertex(&p, &VertexId::root()).unwrap();
        assert_eq!(img.to_string(), "0.1");
    }

    #[test]
    fn vertex_group_fixes_root() {
        let am = fixtures::ex2();
        for a in am.vertex_group_elements() {
            let g = am.element(Factor::A, a).unwrap();
            assert!(am.act_on_vertex(&g, &VertexId::root()).unwrap().is_root());
        }
    }

    #[test]
    fn right_action_law() {
        let am = fixtures::ex2();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v: VertexId = "1.2/1.4".parse().unwrap();
        for _ in 0..200 {
            let g = am.random_element(&mut rng, 4);
            let h = am.random_element(&mut rng, 3);
            let gh = am.multiply(&g, &h).unwrap();
            let lhs = am.act_on_vertex(&gh, &v).unwrap();
            let rhs = am
                .act_on_vertex(&h, &am.act_on_vertex(&g, &v).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
