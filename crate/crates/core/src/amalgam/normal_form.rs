use std::fmt;

use rand::Rng;
use serde::Serialize;

use super::{check_same, FactorTable, Transversal, ValidatedAmalgam};
use crate::error::{Error, Result};
use crate::permutation::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Factor {
    A,
    P,
}

impl Factor {
    pub fn other(self) -> Factor {
        match self {
            Factor::A => Factor::P,
            Factor::P => Factor::A,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Factor::A => "A",
            Factor::P => "P",
        })
    }
}

/// A non-identity coset representative, by transversal index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Syllable {
    pub factor: Factor,
    pub rep: usize,
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.factor, self.rep)
    }
}

/// `head * t1 * ... * tk` with `head` in `H` and alternating representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    amalgam: u64,
    head: u32,
    syllables: Vec<Syllable>,
}

impl NormalForm {
    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn amalgam_id(&self) -> u64 {
        self.amalgam
    }

    /// Syllables alternate factors and none is the identity representative.
    pub fn is_reduced(&self) -> bool {
        self.syllables.iter().all(|s| s.rep != 0)
            && self
                .syllables
                .windows(2)
                .all(|w| w[0].factor != w[1].factor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub factor: Factor,
    pub element: Permutation,
}

/// A free word in the two factors, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupWord {
    pub letters: Vec<Letter>,
}

impl GroupWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        GroupWord { letters }
    }

    /// Parses space-separated letters such as `A:(0 1) P:(0 1 2)` or `P:[1,2,0]`.
    pub fn parse(text: &str, lobe_degree: usize, vertex_degree: usize) -> Result<Self> {
        let mut letters = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let (factor, degree, body) = if let Some(b) = rest.strip_prefix("A:") {
                (Factor::A, vertex_degree, b)
            } else if let Some(b) = rest.strip_prefix("P:") {
                (Factor::P, lobe_degree, b)
            } else {
                return Err(Error::input(format!("expected A: or P: at {rest:?}")));
            };
            // cycle notation may contain spaces, so split only before the next tag
            let end = [" A:", " P:"]
                .iter()
                .filter_map(|tag| body.find(tag))
                .min()
                .unwrap_or(body.len());
            let element = Permutation::parse(degree, &body[..end])?;
            letters.push(Letter { factor, element });
            rest = body[end..].trim_start();
        }
        Ok(GroupWord { letters })
    }
}

impl ValidatedAmalgam {
    fn table(&self, f: Factor) -> &FactorTable {
        match f {
            Factor::A => &self.a,
            Factor::P => &self.p,
        }
    }

    fn transversal_of(&self, f: Factor) -> &Transversal {
        match f {
            Factor::A => &self.trans_a,
            Factor::P => &self.trans_p,
        }
    }

    fn embed_head(&self, f: Factor, h: u32) -> u32 {
        match f {
            Factor::A => self.phi[h as usize],
            Factor::P => h,
        }
    }

    pub(crate) fn rep_index(&self, s: Syllable) -> u32 {
        self.transversal_of(s.factor).reps[s.rep]
    }

    pub fn identity(&self) -> NormalForm {
        NormalForm {
            amalgam: self.id(),
            head: 0,
            syllables: Vec::new(),
        }
    }

    /// Left-multiplies `nf` by the factor element with table index `e`.
    pub(crate) fn prepend(&self, nf: &mut NormalForm, f: Factor, e: u32) {
        let table = self.table(f);
        let mut z = table.mul(e, self.embed_head(f, nf.head));
        if let Some(&first) = nf.syllables.first() {
            if first.factor == f {
                z = table.mul(z, self.rep_index(first));
                nf.syllables.remove(0);
            }
        }
        let (t, h) = self.transversal_of(f).decomposition[z as usize];
        if t != 0 {
            nf.syllables.insert(
                0,
                Syllable {
                    factor: f,
                    rep: t as usize,
                },
            );
        }
        nf.head = h;
    }

    fn letter_index(&self, letter: &Letter) -> Result<u32> {
        self.table(letter.factor)
            .index_of(&letter.element)
            .ok_or_else(|| {
                Error::input(format!(
                    "{} is not an element of factor {}",
                    letter.element, letter.factor
                ))
            })
    }

    pub fn element(&self, factor: Factor, element: &Permutation) -> Result<NormalForm> {
        self.normal_form(&GroupWord::new(vec![Letter {
            factor,
            element: element.clone(),
        }]))
    }

    pub fn normal_form(&self, word: &GroupWord) -> Result<NormalForm> {
        let indices = word
            .letters
            .iter()
            .map(|l| Ok((l.factor, self.letter_index(l)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut nf = self.identity();
        for &(f, e) in indices.iter().rev() {
            self.prepend(&mut nf, f, e);
        }
        Ok(nf)
    }

    pub fn multiply(&self, x: &NormalForm, y: &NormalForm) -> Result<NormalForm> {
        check_same(x.amalgam, self.id())?;
        check_same(y.amalgam, self.id())?;
        let mut out = y.clone();
        for &s in x.syllables.iter().rev() {
            self.prepend(&mut out, s.factor, self.rep_index(s));
        }
        self.prepend(&mut out, Factor::P, x.head);
        Ok(out)
    }

    pub fn invert(&self, x: &NormalForm) -> Result<NormalForm> {
        check_same(x.amalgam, self.id())?;
        let mut out = self.identity();
        self.prepend(&mut out, Factor::P, self.p.inv(x.head));
        for &s in &x.syllables {
            let t = self.table(s.factor);
            self.prepend(&mut out, s.factor, t.inv(self.rep_index(s)));
        }
        Ok(out)
    }

    pub fn equal(&self, x: &NormalForm, y: &NormalForm) -> Result<bool> {
        check_same(x.amalgam, self.id())?;
        check_same(y.amalgam, self.id())?;
        Ok(x == y)
    }

    pub fn head(&self, nf: &NormalForm) -> &Permutation {
        &self.p.elements[nf.head as usize]
    }

    /// A word whose product is `nf`: the head as a lobe-group letter, then the representatives.
    pub fn to_word(&self, nf: &NormalForm) -> GroupWord {
        let mut letters = vec![Letter {
            factor: Factor::P,
            element: self.head(nf).clone(),
        }];
        letters.extend(nf.syllables.iter().map(|&s| Letter {
            factor: s.factor,
            element: self.table(s.factor).elements[self.rep_index(s) as usize].clone(),
        }));
        GroupWord::new(letters)
    }

    /// `"h | s1 s2 ... sk"` with `h` as an image list.
    pub fn format_normal_form(&self, nf: &NormalForm) -> String {
        let mut out = format!("{} |", self.head(nf).image_list());
        for s in &nf.syllables {
            out.push(' ');
            out.push_str(&s.to_string());
        }
        out
    }

    pub fn parse_normal_form(&self, text: &str) -> Result<NormalForm> {
        let (head, rest) = text
            .split_once('|')
            .ok_or_else(|| Error::input(format!("missing '|' in {text:?}")))?;
        let head_perm = Permutation::parse(self.lobe_degree(), head)?;
        let head = self
            .p
            .index_of(&head_perm)
            .filter(|&i| self.phi[i as usize] != u32::MAX)
            .ok_or_else(|| Error::input(format!("head {head_perm} is not in H")))?;
        let syllables = rest
            .split_whitespace()
            .map(|tok| {
                let (f, i) = tok
                    .split_once(':')
                    .ok_or_else(|| Error::input(format!("bad syllable {tok:?}")))?;
                let factor = match f {
                    "A" => Factor::A,
                    "P" => Factor::P,
                    _ => return Err(Error::input(format!("bad factor in {tok:?}"))),
                };
                let rep: usize = i
                    .parse()
                    .map_err(|_| Error::input(format!("bad index in {tok:?}")))?;
                if rep >= self.transversal_of(factor).reps.len() {
                    return Err(Error::input(format!("index out of range in {tok:?}")));
                }
                Ok(Syllable { factor, rep })
            })
            .collect::<Result<Vec<_>>>()?;
        let nf = NormalForm {
            amalgam: self.id(),
            head,
            syllables,
        };
        if !nf.is_reduced() {
            return Err(Error::input(format!("{text:?} is not reduced")));
        }
        Ok(nf)
    }

    /// A uniformly random `H`-head followed by `syllables` alternating random
    /// non-identity representatives.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, syllables: usize) -> NormalForm {
        let head = self.h[rng.gen_range(0..self.h.len())];
        let mut factor = if rng.gen_bool(0.5) { Factor::A } else { Factor::P };
        let mut out = Vec::with_capacity(syllables);
        for _ in 0..syllables {
            let n = self.transversal_of(factor).reps.len();
            out.push(Syllable {
                factor,
                rep: rng.gen_range(1..n),
            });
            factor = factor.other();
        }
        NormalForm {
            amalgam: self.id(),
            head,
            syllables: out,
        }
    }

    /// A random free word with `len` letters drawn from both factors.
    pub fn random_word<R: Rng + ?Sized>(&self, rng: &mut R, len: usize) -> GroupWord {
        GroupWord::new(
            (0..len)
                .map(|_| {
                    let factor = if rng.gen_bool(0.5) { Factor::A } else { Factor::P };
                    let t = self.table(factor);
                    Letter {
                        factor,
                        element: t.elements[rng.gen_range(0..t.order())].clone(),
                    }
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::{fixtures, validate};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn perm(d: usize, s: &str) -> Permutation {
        Permutation::parse(d, s).unwrap()
    }

    #[test]
    fn empty_word_is_identity() {
        let am = fixtures::ex1();
        let nf = am.normal_form(&GroupWord::default()).unwrap();
        assert_eq!(nf, am.identity());
        assert_eq!(am.format_normal_form(&nf), "[0,1,2] |");
    }

    #[test]
    fn stabilizer_enters_through_either_factor() {
        let am = fixtures::ex1();
        let via_p = am.element(Factor::P, &perm(3, "(1 2)")).unwrap();
        let via_a = am.element(Factor::A, &perm(4, "(0 1)")).unwrap();
        assert_eq!(via_p, via_a);
        assert!(via_p.is_empty());
        assert_eq!(am.head(&via_p), &perm(3, "(1 2)"));
    }

    #[test]
    fn three_syllable_word() {
        let am = fixtures::ex1();
        let word = GroupWord::parse("A:(2 3) P:(0 1 2) A:(2 3)", 3, 4).unwrap();
        let nf = am.normal_form(&word).unwrap();
        assert_eq!(nf.len(), 3);
        assert!(nf.is_reduced());
        assert_eq!(nf.syllables()[0].factor, Factor::A);
    }

    #[test]
    fn format_round_trips() {
        let am = fixtures::ex2();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = am.random_element(&mut rng, 5);
            let text = am.format_normal_form(&x);
            assert_eq!(am.parse_normal_form(&text).unwrap(), x);
        }
        assert!(am.parse_normal_form("[0,1,2,3,4] | A:1 A:1").is_err());
        assert!(am.parse_normal_form("[1,2,3,4,0] |").is_err());
    }

    #[test]
    fn mixed_amalgams_rejected() {
        let a = fixtures::ex1();
        let b = fixtures::ex2();
        assert!(a.multiply(&a.identity(), &b.identity()).is_err());
        assert!(a.invert(&b.identity()).is_err());
    }

    #[test]
    fn cycle_notation_with_spaces_in_words() {
        let w = GroupWord::parse("P:(1 4)(2 3) A:[1,0,2,3]", 5, 4).unwrap();
        assert_eq!(w.letters.len(), 2);
        assert_eq!(w.letters[0].element, perm(5, "(1 4)(2 3)"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn group_axioms(seed in any::<u64>(), lx in 0usize..6, ly in 0usize..6, lz in 0usize..6) {
            let am = validate(fixtures::ex2_spec()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = am.random_element(&mut rng, lx);
            let y = am.random_element(&mut rng, ly);
            let z = am.random_element(&mut rng, lz);
            let e = am.identity();
            let xy = am.multiply(&x, &y).unwrap();
            prop_assert!(xy.is_reduced());
            prop_assert_eq!(am.multiply(&xy, &z).unwrap(), am.multiply(&x, &am.multiply(&y, &z).unwrap()).unwrap());
            prop_assert_eq!(am.multiply(&e, &y).unwrap(), y.clone());
            prop_assert_eq!(am.multiply(&x, &am.invert(&x).unwrap()).unwrap(), e.clone());
            let inv = am.invert(&x).unwrap();
            prop_assert!(inv.is_reduced());
            prop_assert_eq!(am.normal_form(&am.to_word(&x)).unwrap(), x);
        }

        #[test]
        fn normal_form_of_free_words(seed in any::<u64>(), len in 0usize..12) {
            let am = validate(fixtures::ex1_spec()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = am.random_word(&mut rng, len);
            let nf = am.normal_form(&w).unwrap();
            prop_assert!(nf.is_reduced());
            prop_assert_eq!(am.normal_form(&am.to_word(&nf)).unwrap(), nf.clone());
            // letter by letter agrees with the folded form
            let mut acc = am.identity();
            for l in &w.letters {
                acc = am.multiply(&acc, &am.element(l.factor, &l.element).unwrap()).unwrap();
            }
            prop_assert_eq!(acc, nf);
        }
    }
}
