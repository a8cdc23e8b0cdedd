//! Algebra and subcategory files. JSON is canonical; TOML is read through
//! the same types, which also accept a few shorthands.

use std::collections::BTreeMap;
use std::sync::Arc;

use relgor::homcalc::Atlas;
use relgor::quiver::{
    validate_algebra, Algebra, AlgebraDescription, ArrowDescription, FieldDescription, QuiverError, RelationDescription,
    TermDescription,
};
use relgor::rep::{Rep, RepData};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

pub const BUILTIN: &str = "builtin:";

fn builtin_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "A2" => include_str!("../data/a2.json"),
        "A3" => include_str!("../data/a3.json"),
        "A3/rad2" => include_str!("../data/a3_rad2.json"),
        "D4" => include_str!("../data/d4.json"),
        "Kronecker" => include_str!("../data/kronecker.json"),
        "A3/C1" => include_str!("../data/a3_c1.json"),
        "A3/C2" => include_str!("../data/a3_c2.json"),
        _ => return None,
    })
}

/// File contents with the label used in messages.
pub struct Source {
    pub label: String,
    pub text: String,
}

impl Source {
    pub fn read(arg: &str) -> Result<Source, CliError> {
        if let Some(name) = arg.strip_prefix(BUILTIN) {
            let text = builtin_text(name).ok_or_else(|| CliError::Input(format!("no bundled file `{name}`")))?;
            return Ok(Source {
                label: arg.to_string(),
                text: text.to_string(),
            });
        }
        let text = std::fs::read_to_string(arg).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
        Ok(Source {
            label: arg.to_string(),
            text,
        })
    }

    fn is_toml(&self) -> bool {
        self.label.ends_with(".toml") || !self.text.trim_start().starts_with('{')
    }

    pub fn parse<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        if self.is_toml() {
            toml::from_str(&self.text).map_err(|e| {
                let (line, col) = e.span().map_or((1, 1), |s| line_col(&self.text, s.start));
                CliError::Input(format!("{}:{line}:{col}: {}", self.label, e.message().trim()))
            })
        } else {
            serde_json::from_str(&self.text)
                .map_err(|e| CliError::Input(format!("{}:{}:{}: {e}", self.label, e.line(), e.column())))
        }
    }

    /// `label:line:col: msg` at the `nth` occurrence of `needle` (quoted
    /// first, then bare), or `label: msg` when it cannot be found.
    fn error_at(&self, needles: &[&str], nth: usize, msg: impl std::fmt::Display) -> CliError {
        for needle in needles {
            for pat in [format!("\"{needle}\""), needle.to_string()] {
                if let Some((off, _)) = self.text.match_indices(&pat).nth(nth) {
                    let (line, col) = line_col(&self.text, off);
                    return CliError::Input(format!("{}:{line}:{col}: {msg}", self.label));
                }
            }
        }
        CliError::Input(format!("{}: {msg}", self.label))
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub field: FieldSpec,
    pub vertices: Vec<Label>,
    pub arrows: Vec<ArrowSpec>,
    #[serde(default)]
    pub relations: Vec<RelationSpec>,
}

#[derive(Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Char(u32),
    Table(FieldTable),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldTable {
    #[serde(rename = "char", alias = "characteristic", alias = "p")]
    pub characteristic: u32,
}

#[derive(Deserialize)]
#[serde(untagged)]
pub enum Label {
    Text(String),
    Number(i64),
}

impl Label {
    fn text(&self) -> String {
        match self {
            Label::Text(s) => s.clone(),
            Label::Number(n) => n.to_string(),
        }
    }
}

/// `{name, from, to}`, or the string `"name: from -> to"`.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum ArrowSpec {
    Table(ArrowTable),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowTable {
    pub name: String,
    pub from: Label,
    pub to: Label,
}

/// A list of terms, a single term, or a bare path (a zero relation).
#[derive(Deserialize)]
#[serde(untagged)]
pub enum RelationSpec {
    Terms(RelationTerms),
    Term(TermSpec),
    Path(Vec<String>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationTerms {
    pub terms: Vec<TermSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    #[serde(default = "one")]
    pub coeff: i64,
    pub path: Vec<String>,
}

fn one() -> i64 {
    1
}

impl AlgebraFile {
    fn into_description(self, src: &Source) -> Result<AlgebraDescription, CliError> {
        let characteristic = match self.field {
            FieldSpec::Char(c) => c,
            FieldSpec::Table(t) => t.characteristic,
        };
        let mut arrows = Vec::new();
        for a in self.arrows {
            arrows.push(match a {
                ArrowSpec::Table(t) => ArrowDescription {
                    name: t.name,
                    from: t.from.text(),
                    to: t.to.text(),
                },
                ArrowSpec::Text(s) => parse_arrow(&s).ok_or_else(|| src.error_at(&[&s], 0, format!("arrow `{s}` is not of the form `name: from -> to`")))?,
            });
        }
        let term = |t: TermSpec| TermDescription {
            coeff: t.coeff,
            path: t.path,
        };
        let relations = self
            .relations
            .into_iter()
            .map(|r| RelationDescription {
                terms: match r {
                    RelationSpec::Terms(ts) => ts.terms.into_iter().map(term).collect(),
                    RelationSpec::Term(t) => vec![term(t)],
                    RelationSpec::Path(path) => vec![TermDescription { coeff: 1, path }],
                },
            })
            .collect();
        Ok(AlgebraDescription {
            field: FieldDescription { characteristic },
            vertices: self.vertices.iter().map(Label::text).collect(),
            arrows,
            relations,
        })
    }
}

fn parse_arrow(s: &str) -> Option<ArrowDescription> {
    let (name, rest) = s.split_once(':')?;
    let (from, to) = rest.split_once("->")?;
    let [name, from, to] = [name, from, to].map(|x| x.trim().to_string());
    if name.is_empty() || from.is_empty() || to.is_empty() {
        return None;
    }
    Some(ArrowDescription { name, from, to })
}

pub struct LoadedAlgebra {
    pub label: String,
    pub algebra: Arc<Algebra>,
}

impl LoadedAlgebra {
    pub fn hash(&self) -> &str {
        self.algebra.fingerprint()
    }
}

/// Reads and validates an algebra; `p` replaces the characteristic in the
/// file.
pub fn load_algebra(arg: &str, p: Option<u32>) -> Result<LoadedAlgebra, CliError> {
    let src = Source::read(arg)?;
    let mut desc = src.parse::<AlgebraFile>()?.into_description(&src)?;
    if let Some(p) = p {
        desc.field.characteristic = p;
    }
    let algebra = validate_algebra(&desc).map_err(|e| quiver_error(&src, e))?;
    Ok(LoadedAlgebra {
        label: src.label,
        algebra,
    })
}

fn quiver_error(src: &Source, e: QuiverError) -> CliError {
    match &e {
        QuiverError::Field(_) => src.error_at(&["char", "characteristic", "field"], 0, &e),
        QuiverError::DuplicateVertex(v) => src.error_at(&[v], 1, &e),
        QuiverError::DuplicateArrow(a) => src.error_at(&[a], 1, &e),
        QuiverError::UnknownVertex { arrow, .. } => src.error_at(&[arrow], 0, &e),
        QuiverError::UnknownArrow { arrow, .. } => src.error_at(&[arrow], 0, &e),
        QuiverError::Cycle(_) => src.error_at(&["arrows"], 0, &e),
        _ => src.error_at(&["relations"], 0, &e),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubcatFile {
    #[serde(alias = "members")]
    pub objects: Vec<ObjectSpec>,
}

/// One subcategory entry or command-line object.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ObjectSpec {
    /// A member name such as `S(1)`, `P(2)`, `I(3)` or `M(1,1,1,1)`.
    Name(String),
    Explicit(ExplicitSpec),
    Dims(DimsSpec),
    /// A bare dimension vector.
    Vector(Vec<usize>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSpec {
    pub dims: Vec<usize>,
    /// Row-major matrices keyed by arrow name.
    pub maps: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimsSpec {
    pub dims: Vec<usize>,
    /// 1-based, among the members sharing the dimension vector in atlas
    /// order (the `#k` suffix of their names).
    #[serde(default)]
    pub index: Option<usize>,
}

impl ObjectSpec {
    /// A command-line object: JSON when it starts with `{` or `[`, a name
    /// otherwise.
    pub fn from_arg(s: &str) -> Result<ObjectSpec, CliError> {
        let t = s.trim();
        if t.starts_with('{') || t.starts_with('[') {
            serde_json::from_str(t).map_err(|e| CliError::Input(format!("object `{s}`: column {}: {e}", e.column())))
        } else {
            Ok(ObjectSpec::Name(t.to_string()))
        }
    }

    /// Atlas members, with multiplicity for explicit decomposable entries.
    pub fn resolve(&self, atlas: &Atlas, warnings: &mut Vec<String>) -> Result<Vec<usize>, String> {
        match self {
            ObjectSpec::Name(n) => atlas.index_of_name(n).map(|i| vec![i]).ok_or_else(|| {
                let names: Vec<&str> = (0..atlas.len()).map(|i| atlas.name(i)).collect();
                format!("unknown object `{n}` (members: {})", names.join(", "))
            }),
            ObjectSpec::Vector(dims) => by_dims(atlas, dims, None),
            ObjectSpec::Dims(d) => by_dims(atlas, &d.dims, d.index),
            ObjectSpec::Explicit(e) => {
                let data = RepData {
                    dims: e.dims.clone(),
                    maps: e.maps.clone(),
                };
                let rep = Rep::from_data(atlas.algebra().clone(), &data).map_err(|e| e.to_string())?;
                if rep.is_zero() {
                    return Err("explicit object is zero".into());
                }
                let found = atlas.locate(&rep).map_err(|e| e.to_string())?;
                if found.len() > 1 {
                    let names: Vec<&str> = found.iter().map(|&i| atlas.name(i)).collect();
                    warnings.push(format!(
                        "explicit object with dimension vector {:?} is decomposable; expanded to {}",
                        e.dims,
                        names.join(" ⊕ ")
                    ));
                }
                Ok(found)
            }
        }
    }

    /// Exactly one atlas member.
    pub fn resolve_one(&self, atlas: &Atlas, warnings: &mut Vec<String>) -> Result<usize, String> {
        match self.resolve(atlas, warnings)?[..] {
            [i] => Ok(i),
            _ => Err("object is not indecomposable".into()),
        }
    }
}

fn by_dims(atlas: &Atlas, dims: &[usize], index: Option<usize>) -> Result<Vec<usize>, String> {
    let matching: Vec<usize> = (0..atlas.len()).filter(|&i| atlas.rep(i).dims() == dims).collect();
    match (matching.len(), index) {
        (0, _) => Err(format!("no indecomposable with dimension vector {dims:?}")),
        (1, None) | (1, Some(1)) => Ok(matching),
        (k, None) => Err(format!("{k} indecomposables have dimension vector {dims:?}; give an index 1..{k}")),
        (k, Some(i)) if i == 0 || i > k => Err(format!("index {i} out of range 1..{k} for dimension vector {dims:?}")),
        (_, Some(i)) => Ok(vec![matching[i - 1]]),
    }
}

/// Sorted, deduplicated member indices of a subcategory file.
pub fn load_subcat(arg: &str, atlas: &Atlas, warnings: &mut Vec<String>) -> Result<Vec<usize>, CliError> {
    let src = Source::read(arg)?;
    let file: SubcatFile = src.parse()?;
    let mut out = Vec::new();
    for (i, spec) in file.objects.iter().enumerate() {
        let found = spec.resolve(atlas, warnings).map_err(|e| match spec {
            ObjectSpec::Name(n) => src.error_at(&[n], 0, format!("objects[{i}]: {e}")),
            _ => CliError::Input(format!("{}: objects[{i}]: {e}", src.label)),
        })?;
        out.extend(found);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
