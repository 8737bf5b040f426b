//! Property checks over a single validated amalgam, used by `verify`.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::amalgam::{Factor, GroupWord, Letter, NormalForm, ValidatedAmalgam};
use crate::canonical::{
    amalgam_decomposition_report, check_equivalence, enumerate_canonical, lobe_group, refine_to_canonical,
    verify_segment_fundamental_domain, RefinementOutcome,
};
use crate::decomposition::{
    classify_ends, classify_tree_automorphism, cut_vertices, lobes, quasi_isometry_check, EndClassification,
    EndSource, TreeIsometryClass,
};
use crate::error::Result;
use crate::graph::{expand_ball, suborbits, CanonicalGraph, OrbitalHandle, VertexId};
use crate::group::UnionFind;
use crate::limits::Limits;
use crate::permutation::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub word_pairs: usize,
    pub word_radius: usize,
    pub qi_radius: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            word_pairs: 1000,
            word_radius: 6,
            qi_radius: 4,
        }
    }
}

type Check = fn(&ValidatedAmalgam, &SuiteConfig, &Limits) -> Result<std::result::Result<String, String>>;

const CHECKS: [(&str, Check); 10] = [
    ("ends", check_ends),
    ("canonical_structure", check_canonical_structure),
    ("equivalence", check_equivalences),
    ("refinement", check_refinement),
    ("quasi_isometry", check_qi),
    ("amalgam_decomposition", check_decomposition),
    ("fundamental_domain", check_domain),
    ("word_problem", check_words),
    ("subdegrees", check_subdegrees),
    ("tree_classification", check_tree),
];

/// Runs every check; errors are reported as failures rather than propagated.
pub fn run_suite(am: &ValidatedAmalgam, config: &SuiteConfig, limits: &Limits) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|&(name, check)| {
            let (passed, detail) = match check(am, config, limits) {
                Ok(Ok(d)) => (true, d),
                Ok(Err(d)) => (false, d),
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult { name, passed, detail }
        })
        .collect()
}

fn check_ends(am: &ValidatedAmalgam, _: &SuiteConfig, limits: &Limits) -> Result<std::result::Result<String, String>> {
    let base = CanonicalGraph::new(am);
    let rep = classify_ends(EndSource::Canonical(&base), 3, limits)?;
    let growing = rep.certificate.windows(2).all(|w| w[0] < w[1]);
    if rep.classification != EndClassification::Uncountable || !growing {
        return Ok(Err(format!("{:?} with certificate {:?}", rep.classification, rep.certificate)));
    }
    for d in enumerate_canonical(am)? {
        let g = d.graph(am)?;
        let c = classify_ends(EndSource::Canonical(&g), 3, limits)?.classification;
        if c == EndClassification::Two {
            return Ok(Err("an arc-transitive source has two ends".into()));
        }
    }
    Ok(Ok(format!("uncountable, certificate {:?}", rep.certificate)))
}

fn check_canonical_structure(am: &ValidatedAmalgam, _: &SuiteConfig, limits: &Limits) -> Result<std::result::Result<String, String>> {
    let mut lobes_checked = 0;
    for d in enumerate_canonical(am)? {
        if d.lobe.vertex_count() < 3 {
            return Ok(Err("lobe with fewer than 3 vertices".into()));
        }
        let ball = d.graph(am)?.ball(&VertexId::root(), 3, limits)?;
        for lobe in lobes(&ball)?.certified {
            let induced = crate::canonical::induced_digraph(&ball, &lobe.vertices);
            if !induced.is_isomorphic(&d.lobe) {
                return Ok(Err(format!("lobe {:?} is not a copy of the lobe digraph", lobe.tag)));
            }
            if let Some(tag) = &lobe.tag {
                let g = lobe_group(am, &ball, tag)?;
                if !g.is_primitive()? || g.is_regular()? {
                    return Ok(Err(format!("lobe group of {tag} is imprimitive or regular")));
                }
            }
            lobes_checked += 1;
        }
    }
    Ok(Ok(format!("{lobes_checked} certified lobes")))
}

fn check_equivalences(am: &ValidatedAmalgam, _: &SuiteConfig, limits: &Limits) -> Result<std::result::Result<String, String>> {
    let all = enumerate_canonical(am)?;
    let mut cuts = Vec::new();
    let mut interiors = Vec::new();
    for d in &all {
        let ball = d.graph(am)?.ball(&VertexId::root(), 3, limits)?;
        cuts.push(cut_vertices(&ball)?.into_iter().collect::<BTreeSet<_>>());
        interiors.push(
            (0..ball.len())
                .filter(|&i| ball.depth(i) < ball.radius())
                .map(|i| ball.address(i).clone())
                .collect::<BTreeSet<_>>(),
        );
    }
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if !check_equivalence(am, &all[i], &all[j], 3, limits)? {
                return Ok(Err(format!("descriptors {i} and {j} are not equivalent")));
            }
            // Cut vertices are certified only strictly inside a ball, so the
            // sets are compared where both balls certify.
            let common: BTreeSet<_> = interiors[i].intersection(&interiors[j]).collect();
            let restrict = |c: &BTreeSet<VertexId>| c.iter().filter(|v| common.contains(v)).cloned().collect::<Vec<_>>();
            if restrict(&cuts[i]) != restrict(&cuts[j]) {
                return Ok(Err(format!("descriptors {i} and {j} have different cut vertices")));
            }
        }
    }
    Ok(Ok(format!("{} descriptors pairwise equivalent", all.len())))
}

/// Seeds at distance 2 and 3 of the base graph, which never share a lobe with the root.
fn non_canonical_seeds(am: &ValidatedAmalgam, limits: &Limits) -> Result<Vec<VertexId>> {
    let report = suborbits(&CanonicalGraph::new(am), 3, limits)?;
    Ok(report
        .suborbits
        .iter()
        .filter(|s| s.radius >= 2)
        .map(|s| s.representative.clone())
        .collect())
}

fn check_refinement(am: &ValidatedAmalgam, _: &SuiteConfig, limits: &Limits) -> Result<std::result::Result<String, String>> {
    let seeds = non_canonical_seeds(am, limits)?;
    if seeds.len() < 3 {
        return Ok(Err(format!("only {} non-canonical seeds", seeds.len())));
    }
    let mut stages = Vec::new();
    for beta in seeds.iter().take(3) {
        let h = OrbitalHandle::new(am, VertexId::root(), beta.clone())?;
        let r = refine_to_canonical(&h, limits)?;
        match (&r.outcome, r.terminal_index()) {
            (RefinementOutcome::Terminal { .. }, Some(n)) if n <= 3 => stages.push(n),
            _ => return Ok(Err(format!("seed {beta} did not terminate within 3 stages"))),
        }
    }
    Ok(Ok(format!("stages {stages:?}")))
}

fn check_qi(am: &ValidatedAmalgam, config: &SuiteConfig, limits: &Limits) -> Result<std::result::Result<String, String>> {
    let all = enumerate_canonical(am)?;
    let handles = all
        .iter()
        .map(|d| OrbitalHandle::new(am, d.seed.0.clone(), d.seed.1.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut summary = Vec::new();
    for i in 0..handles.len() {
        for j in i..handles.len() {
            if i == j && handles.len() > 1 {
                continue;
            }
            let rep = quasi_isometry_check(&handles[i], &handles[j], config.qi_radius, limits)?;
            if !rep.is_valid() {
                return Ok(Err(format!("{} violations for ({i}, {j})", rep.violations.len())));
            }
            summary.push(format!("({i},{j}): a={} over {} pairs", rep.a, rep.verified_pairs));
        }
    }
    Ok(Ok(summary.join("; ")))
}

fn check_decomposition(am: &ValidatedAmalgam, _: &SuiteConfig, _: &Limits) -> Result<std::result::Result<String, String>> {
    let rep = amalgam_decomposition_report(am)?;
    let mut failed = Vec::new();
    if !rep.nontrivial {
        failed.push("nontriviality");
    }
    if !rep.maximal {
        failed.push("maximality");
    }
    if !rep.fixes_no_other_point {
        failed.push("fixed points");
    }
    if failed.is_empty() {
        Ok(Ok(format!("|A|={} |H|={} |P|={}", rep.vertex_group_order, rep.stabilizer_order, rep.lobe_group_order)))
    } else {
        Ok(Err(failed.join(", ")))
    }
}

fn check_domain(am: &ValidatedAmalgam, _: &SuiteConfig, _: &Limits) -> Result<std::result::Result<String, String>> {
    let rep = verify_segment_fundamental_domain(am, 3)?;
    let line = format!(
        "{} vertex orbits, {} arc orbits, {} inversions",
        rep.vertex_orbits,
        rep.arc_orbits,
        rep.inversions.len()
    );
    Ok(if rep.is_segment() { Ok(line) } else { Err(line) })
}

/// Applies a free word to a vertex one letter at a time.
struct LetterAction<'a> {
    am: &'a ValidatedAmalgam,
    letters: HashMap<(Factor, Permutation), NormalForm>,
    images: HashMap<(Factor, Permutation, VertexId), VertexId>,
}

impl<'a> LetterAction<'a> {
    fn new(am: &'a ValidatedAmalgam) -> Self {
        LetterAction {
            am,
            letters: HashMap::new(),
            images: HashMap::new(),
        }
    }

    fn apply(&mut self, word: &GroupWord, v: &VertexId) -> Result<VertexId> {
        let mut v = v.clone();
        for Letter { factor, element } in &word.letters {
            let key = (*factor, element.clone(), v);
            if let Some(w) = self.images.get(&key) {
                v = w.clone();
                continue;
            }
            let g = match self.letters.get(&(*factor, element.clone())) {
                Some(g) => g.clone(),
                None => {
                    let g = self.am.element(*factor, element)?;
                    self.letters.insert((*factor, element.clone()), g.clone());
                    g
                }
            };
            let w = self.am.act_on_vertex(&g, &key.2)?;
            self.images.insert(key, w.clone());
            v = w;
        }
        Ok(v)
    }
}

/// A word equal to `w` in the group: an inserted cancelling pair, a letter
/// split in two, and stabilizer letters moved across the amalgamation.
fn rewrite<R: Rng>(am: &ValidatedAmalgam, w: &GroupWord, rng: &mut R) -> GroupWord {
    let mut letters = w.letters.clone();
    let x = am.random_word(rng, 1).letters.remove(0);
    let at = rng.gen_range(0..=letters.len());
    let inv = Letter {
        factor: x.factor,
        element: x.element.inverse(),
    };
    letters.splice(at..at, [x, inv]);
    if !letters.is_empty() {
        let k = rng.gen_range(0..letters.len());
        let l = letters[k].clone();
        let y = am.random_word(rng, 8).letters.into_iter().find(|y| y.factor == l.factor);
        if let Some(y) = y {
            let rest = y.element.inverse().then(&l.element);
            letters.splice(
                k..=k,
                [y, Letter { factor: l.factor, element: rest }],
            );
        }
    }
    for l in letters.iter_mut() {
        if l.factor == Factor::P && l.element.apply(am.delta()) == am.delta() {
            if let Some(a) = am.embed(&l.element) {
                *l = Letter { factor: Factor::A, element: a.clone() };
            }
        }
    }
    GroupWord::new(letters)
}

fn check_words(am: &ValidatedAmalgam, config: &SuiteConfig, limits: &Limits) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let ball = expand_ball(am, config.word_radius, limits)?;
    let mut action = LetterAction::new(am);
    let mut equal_pairs = 0;
    for k in 0..config.word_pairs {
        let len = rng.gen_range(0..=6);
        let w1 = am.random_word(&mut rng, len);
        let w2 = if rng.gen_bool(0.5) {
            rewrite(am, &w1, &mut rng)
        } else {
            let len = rng.gen_range(0..=6);
            am.random_word(&mut rng, len)
        };
        let nf_equal = am.equal(&am.normal_form(&w1)?, &am.normal_form(&w2)?)?;
        let mut action_equal = true;
        for bv in ball.vertices() {
            if action.apply(&w1, &bv.address)? != action.apply(&w2, &bv.address)? {
                action_equal = false;
                break;
            }
        }
        if nf_equal != action_equal {
            return Ok(Err(format!("pair {k}: normal forms equal {nf_equal}, actions equal {action_equal}")));
        }
        equal_pairs += usize::from(nf_equal);
    }

    for _ in 0..100 {
        let [x, y, z] = [0; 3].map(|_| am.random_element(&mut rng, 4));
        let left = am.multiply(&am.multiply(&x, &y)?, &z)?;
        let right = am.multiply(&x, &am.multiply(&y, &z)?)?;
        if left != right {
            return Ok(Err("associativity fails".into()));
        }
        let id = am.identity();
        if am.multiply(&x, &am.invert(&x)?)? != id || am.multiply(&am.invert(&x)?, &x)? != id {
            return Ok(Err("inverse law fails".into()));
        }
    }
    Ok(Ok(format!(
        "{} pairs ({equal_pairs} equal) on a radius-{} ball of {} vertices",
        config.word_pairs,
        config.word_radius,
        ball.len()
    )))
}

/// Sorted orbit sizes of the vertex group on each sphere, by brute force over the explicit ball.
pub(crate) fn brute_force_subdegrees(am: &ValidatedAmalgam, rmax: usize, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let ball = expand_ball(am, rmax, limits)?;
    let mut uf = UnionFind::new(ball.len());
    for a in am.vertex_group_elements() {
        let g = am.element(Factor::A, a)?;
        for i in 0..ball.len() {
            let w = am.act_on_vertex(&g, ball.address(i))?;
            let j = ball.index_of(&w).expect("the vertex group preserves spheres");
            uf.union(i, j);
        }
    }
    let mut sizes: Vec<HashMap<usize, usize>> = vec![HashMap::new(); rmax + 1];
    for i in 0..ball.len() {
        *sizes[ball.depth(i)].entry(uf.find(i)).or_default() += 1;
    }
    Ok(sizes
        .into_iter()
        .map(|m| {
            let mut v: Vec<usize> = m.into_values().collect();
            v.sort_unstable();
            v
        })
        .collect())
}

fn check_subdegrees(am: &ValidatedAmalgam, _: &SuiteConfig, limits: &Limits) -> Result<std::result::Result<String, String>> {
    let rep = suborbits(&CanonicalGraph::new(am), 3, limits)?;
    let mut computed: Vec<Vec<usize>> = vec![Vec::new(); 4];
    for s in &rep.suborbits {
        computed[s.radius].push(s.size);
    }
    computed.iter_mut().for_each(|v| v.sort_unstable());
    let oracle = brute_force_subdegrees(am, 3, limits)?;
    if computed == oracle {
        Ok(Ok(format!("{computed:?}")))
    } else {
        Ok(Err(format!("suborbits {computed:?}, brute force {oracle:?}")))
    }
}

fn check_tree(am: &ValidatedAmalgam, _: &SuiteConfig, _: &Limits) -> Result<std::result::Result<String, String>> {
    let mut elliptic = 0;
    for a in am.vertex_group_elements() {
        let g = am.element(Factor::A, a)?;
        if !matches!(classify_tree_automorphism(am, &g, 4)?, TreeIsometryClass::Elliptic { .. }) {
            return Ok(Err(format!("A element {a} is not elliptic")));
        }
        elliptic += 1;
    }
    let image: Vec<&Permutation> = am.stabilizer_elements().iter().filter_map(|h| am.embed(h)).collect();
    let mut hyperbolic = 0;
    for a in am.vertex_group_elements().iter().filter(|a| !image.contains(a)) {
        for p in am.lobe_group_elements().iter().filter(|p| p.apply(am.delta()) != am.delta()) {
            let g = am.multiply(&am.element(Factor::A, a)?, &am.element(Factor::P, p)?)?;
            match classify_tree_automorphism(am, &g, 4)? {
                TreeIsometryClass::Hyperbolic { translation_length: 2, .. } => hyperbolic += 1,
                other => return Ok(Err(format!("{a}·{p} classified {other:?}"))),
            }
        }
    }
    Ok(Ok(format!("{elliptic} elliptic, {hyperbolic} hyperbolic of length 2")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::fixtures;

    #[test]
    fn square_fails_maximality_only_where_expected() {
        let am = fixtures::square();
        let out = run_suite(&am, &SuiteConfig { word_pairs: 20, word_radius: 3, ..Default::default() }, &Limits::default());
        let dec = out.iter().find(|c| c.name == "amalgam_decomposition").unwrap();
        assert!(!dec.passed);
        assert!(dec.detail.contains("maximality"));
        assert!(out.iter().find(|c| c.name == "word_problem").unwrap().passed);
    }
}
