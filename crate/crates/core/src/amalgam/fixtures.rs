//! Small amalgams used in tests, examples and the built-in verify suite.

use super::{validate, AmalgamSpec, ValidatedAmalgam};
use crate::group::FiniteGroup;
use crate::permutation::Permutation;

fn perm(degree: usize, text: &str) -> Permutation {
    Permutation::parse(degree, text).expect("fixture permutation")
}

fn group(degree: usize, gens: &[&str]) -> FiniteGroup {
    FiniteGroup::new(degree, gens.iter().map(|g| perm(degree, g)).collect()).expect("fixture group")
}

fn klein_four() -> FiniteGroup {
    group(4, &["(0 1)", "(2 3)"])
}

/// `Sym(3)` lobes (complete digraph on 3 points), two lobes per vertex.
pub fn ex1_spec() -> AmalgamSpec {
    AmalgamSpec {
        lobe_group: group(3, &["(0 1 2)", "(1 2)"]),
        delta: 0,
        vertex_group: klein_four(),
        embedding: vec![(perm(3, "(1 2)"), perm(4, "(0 1)"))],
        lambda_arc: (0, 1),
    }
}

/// `D5` lobes (pentagon), two lobes per vertex.
pub fn ex2_spec() -> AmalgamSpec {
    AmalgamSpec {
        lobe_group: group(5, &["(0 1 2 3 4)", "(1 4)(2 3)"]),
        delta: 0,
        vertex_group: klein_four(),
        embedding: vec![(perm(5, "(1 4)(2 3)"), perm(4, "(0 1)"))],
        lambda_arc: (0, 1),
    }
}

/// As [`ex2_spec`] with the pentagram as lobe.
pub fn ex2_pentagram_spec() -> AmalgamSpec {
    AmalgamSpec {
        lambda_arc: (0, 2),
        ..ex2_spec()
    }
}

/// `D4` on the square: imprimitive, and the point stabilizer is not maximal.
/// Only usable through [`ValidatedAmalgam::assume_valid`].
pub fn square_spec() -> AmalgamSpec {
    AmalgamSpec {
        lobe_group: group(4, &["(0 1 2 3)", "(1 3)"]),
        delta: 0,
        vertex_group: klein_four(),
        embedding: vec![(perm(4, "(1 3)"), perm(4, "(0 1)"))],
        lambda_arc: (0, 1),
    }
}

pub fn ex1() -> ValidatedAmalgam {
    validate(ex1_spec()).expect("ex1 is valid")
}

pub fn ex2() -> ValidatedAmalgam {
    validate(ex2_spec()).expect("ex2 is valid")
}

pub fn square() -> ValidatedAmalgam {
    ValidatedAmalgam::assume_valid(square_spec()).expect("square tables build")
}
