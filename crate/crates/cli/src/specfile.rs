use std::collections::BTreeMap;
use std::ops::Range;

use orbital_forge::amalgam::AmalgamSpec;
use orbital_forge::group::FiniteGroup;
use orbital_forge::permutation::Permutation;
use serde::Deserialize;
use toml::Spanned;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    groups: BTreeMap<String, RawGroup>,
    amalgam: RawAmalgam,
    #[serde(default)]
    limits: RawLimits,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    degree: usize,
    generators: Vec<Spanned<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAmalgam {
    lobe_group: Spanned<String>,
    vertex_group: Spanned<String>,
    delta: usize,
    /// `[h, φ(h)]` pairs.
    embedding: Vec<[Spanned<String>; 2]>,
    lambda_arc: [usize; 2],
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLimits {
    pub max_radius: Option<usize>,
    pub max_vertices: Option<usize>,
}

pub struct SpecFile {
    pub spec: AmalgamSpec,
    pub limits: RawLimits,
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())].matches('\n').count() + 1
}

fn parse_perm(text: &str, degree: usize, value: &Spanned<String>) -> Result<Permutation, CliError> {
    Permutation::parse(degree, value.get_ref()).map_err(|e| CliError::Parse {
        line: line_of(text, value.span()),
        message: e.to_string(),
    })
}

fn group<'r>(
    text: &str,
    groups: &'r BTreeMap<String, RawGroup>,
    name: &Spanned<String>,
) -> Result<(&'r RawGroup, FiniteGroup), CliError> {
    let raw = groups.get(name.get_ref()).ok_or_else(|| CliError::Parse {
        line: line_of(text, name.span()),
        message: format!("unknown group {:?}", name.get_ref()),
    })?;
    let gens = raw
        .generators
        .iter()
        .map(|g| parse_perm(text, raw.degree, g))
        .collect::<Result<Vec<_>, _>>()?;
    let g = FiniteGroup::new(raw.degree, gens).map_err(|e| CliError::Parse {
        line: line_of(text, name.span()),
        message: e.to_string(),
    })?;
    Ok((raw, g))
}

pub fn parse(text: &str) -> Result<SpecFile, CliError> {
    let raw: RawFile = toml::from_str(text).map_err(|e| CliError::Parse {
        line: e.span().map(|s| line_of(text, s)).unwrap_or(0),
        message: e.message().to_string(),
    })?;
    let (p_raw, lobe_group) = group(text, &raw.groups, &raw.amalgam.lobe_group)?;
    let (a_raw, vertex_group) = group(text, &raw.groups, &raw.amalgam.vertex_group)?;
    let embedding = raw
        .amalgam
        .embedding
        .iter()
        .map(|[h, a]| Ok((parse_perm(text, p_raw.degree, h)?, parse_perm(text, a_raw.degree, a)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let [x, y] = raw.amalgam.lambda_arc;
    Ok(SpecFile {
        spec: AmalgamSpec {
            lobe_group,
            delta: raw.amalgam.delta,
            vertex_group,
            embedding,
            lambda_arc: (x, y),
        },
        limits: raw.limits,
    })
}
