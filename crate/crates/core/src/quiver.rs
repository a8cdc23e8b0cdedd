//! Bound quiver algebras: a finite acyclic quiver modulo admissible
//! relations, validated into an immutable [`Algebra`] handle with a
//! canonical path basis.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, Weak};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exactla::{Field, LinalgError, Matrix, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error(transparent)]
    Field(#[from] LinalgError),
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow name `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` refers to unknown vertex `{vertex}`")]
    UnknownVertex { arrow: String, vertex: String },
    #[error("relation {relation} uses unknown arrow `{arrow}`")]
    UnknownArrow { relation: usize, arrow: String },
    #[error("oriented cycle through vertex `{0}`")]
    Cycle(String),
    #[error("relation {relation}: path {path:?} is not composable")]
    NotComposable { relation: usize, path: Vec<String> },
    #[error("relation {relation}: path {path:?} has length < 2 (relations must lie in rad^2)")]
    NotAdmissible { relation: usize, path: Vec<String> },
    #[error("relation {0}: terms do not share source and target")]
    MixedEndpoints(usize),
    #[error("relation {0} has no terms")]
    EmptyRelation(usize),
}

/// External description of an algebra (the on-disk file schema).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDescription {
    pub field: FieldDescription,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDescription>,
    #[serde(default)]
    pub relations: Vec<RelationDescription>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescription {
    #[serde(rename = "char")]
    pub characteristic: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDescription {
    pub name: String,
    pub from: String,
    pub to: String,
}

/// A linear combination of parallel paths. Paths list arrow names in the
/// order they are traversed, from source to target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDescription {
    pub terms: Vec<TermDescription>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDescription {
    pub coeff: i64,
    pub path: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A path: a start vertex and the arrows traversed in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            start: v,
            arrows: vec![],
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub source: usize,
    pub target: usize,
    pub terms: Vec<(u32, Path)>,
}

/// Paths between a fixed pair of vertices with the relation ideal reduced
/// against them.
#[derive(Debug, Clone)]
struct PairData {
    /// All paths, ordered longest first so that elimination prefers to
    /// express long paths through short ones.
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    ideal: Subspace,
    /// Positions (into `paths`) of the normal-form basis.
    basis: Vec<usize>,
}

/// Validated bound quiver algebra.
#[derive(Debug)]
pub struct Algebra {
    field: Field,
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    relations: Vec<Relation>,
    pairs: BTreeMap<(usize, usize), PairData>,
    dim: usize,
    fingerprint: String,
    opposite: OnceLock<Arc<Algebra>>,
    // Set on algebras built by `opposite`, so that the opposite of the
    // opposite is the original handle.
    origin: OnceLock<Weak<Algebra>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint
    }
}

impl Eq for Algebra {}

/// Validates a description into a shareable algebra handle.
pub fn validate_algebra(desc: &AlgebraDescription) -> Result<Arc<Algebra>, QuiverError> {
    Algebra::from_description(desc).map(Arc::new)
}

impl Algebra {
    pub fn from_description(desc: &AlgebraDescription) -> Result<Self, QuiverError> {
        let field = Field::new(desc.field.characteristic)?;
        let mut vindex = HashMap::new();
        for (i, v) in desc.vertices.iter().enumerate() {
            if vindex.insert(v.clone(), i).is_some() {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let mut arrows = Vec::new();
        let mut aindex = HashMap::new();
        for a in &desc.arrows {
            let lookup = |v: &String| {
                vindex.get(v).copied().ok_or_else(|| QuiverError::UnknownVertex {
                    arrow: a.name.clone(),
                    vertex: v.clone(),
                })
            };
            let (s, t) = (lookup(&a.from)?, lookup(&a.to)?);
            if aindex.insert(a.name.clone(), arrows.len()).is_some() {
                return Err(QuiverError::DuplicateArrow(a.name.clone()));
            }
            arrows.push(Arrow {
                name: a.name.clone(),
                source: s,
                target: t,
            });
        }
        check_acyclic(&desc.vertices, &arrows)?;

        let mut relations = Vec::new();
        for (ri, r) in desc.relations.iter().enumerate() {
            let mut terms: BTreeMap<Path, u32> = BTreeMap::new();
            let mut ends = None;
            if r.terms.is_empty() {
                return Err(QuiverError::EmptyRelation(ri));
            }
            for t in &r.terms {
                let idx: Vec<usize> = t
                    .path
                    .iter()
                    .map(|n| {
                        aindex.get(n).copied().ok_or_else(|| QuiverError::UnknownArrow {
                            relation: ri,
                            arrow: n.clone(),
                        })
                    })
                    .collect::<Result<_, _>>()?;
                if idx.len() < 2 {
                    return Err(QuiverError::NotAdmissible {
                        relation: ri,
                        path: t.path.clone(),
                    });
                }
                if idx.windows(2).any(|w| arrows[w[0]].target != arrows[w[1]].source) {
                    return Err(QuiverError::NotComposable {
                        relation: ri,
                        path: t.path.clone(),
                    });
                }
                let st = (arrows[idx[0]].source, arrows[*idx.last().unwrap()].target);
                if *ends.get_or_insert(st) != st {
                    return Err(QuiverError::MixedEndpoints(ri));
                }
                let path = Path {
                    start: st.0,
                    arrows: idx,
                };
                let c = terms.entry(path).or_insert(0);
                *c = field.add(*c, field.elem(t.coeff));
            }
            let (source, target) = ends.unwrap();
            let terms: Vec<(u32, Path)> = terms
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(p, c)| (c, p))
                .collect();
            if !terms.is_empty() {
                relations.push(Relation {
                    source,
                    target,
                    terms,
                });
            }
        }

        let mut alg = Algebra {
            field,
            vertices: desc.vertices.clone(),
            arrows,
            relations,
            pairs: BTreeMap::new(),
            dim: 0,
            fingerprint: String::new(),
            opposite: OnceLock::new(),
            origin: OnceLock::new(),
        };
        alg.build_pairs();
        alg.fingerprint = fingerprint(&alg.description());
        Ok(alg)
    }

    fn build_pairs(&mut self) {
        let n = self.vertices.len();
        let mut all: BTreeMap<(usize, usize), Vec<Path>> = BTreeMap::new();
        for s in 0..n {
            let mut stack = vec![Path::trivial(s)];
            while let Some(p) = stack.pop() {
                let end = self.path_target(&p);
                for (ai, a) in self.arrows.iter().enumerate() {
                    if a.source == end {
                        let mut q = p.clone();
                        q.arrows.push(ai);
                        stack.push(q);
                    }
                }
                all.entry((s, end)).or_default().push(p);
            }
        }
        let mut dim = 0;
        for ((s, t), mut paths) in all {
            paths.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.arrows.cmp(&b.arrows)));
            let index: HashMap<Path, usize> =
                paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
            let mut gens = Vec::new();
            for r in &self.relations {
                // w: s -> r.source, u: r.target -> t
                for w in self.raw_paths_between(s, r.source) {
                    for u in self.raw_paths_between(r.target, t) {
                        let mut v = vec![0u32; paths.len()];
                        for (c, rp) in &r.terms {
                            let mut arrows = w.arrows.clone();
                            arrows.extend(&rp.arrows);
                            arrows.extend(&u.arrows);
                            let full = Path { start: s, arrows };
                            let k = index[&full];
                            v[k] = self.field.add(v[k], *c);
                        }
                        gens.push(v);
                    }
                }
            }
            let gm = Matrix::from_vec(self.field, gens.len(), paths.len(), gens.concat());
            let ideal = Subspace::from_rows(&gm);
            let basis: Vec<usize> = (0..paths.len())
                .filter(|c| !ideal.pivots().contains(c))
                .collect();
            dim += basis.len();
            self.pairs.insert(
                (s, t),
                PairData {
                    paths,
                    index,
                    ideal,
                    basis,
                },
            );
        }
        self.dim = dim;
    }

    /// Every path from `s` to `t` in the free path category.
    fn raw_paths_between(&self, s: usize, t: usize) -> Vec<Path> {
        let mut out = Vec::new();
        let mut stack = vec![Path::trivial(s)];
        while let Some(p) = stack.pop() {
            let end = self.path_target(&p);
            if end == t {
                out.push(p.clone());
            }
            for (ai, a) in self.arrows.iter().enumerate() {
                if a.source == end {
                    let mut q = p.clone();
                    q.arrows.push(ai);
                    stack.push(q);
                }
            }
        }
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Dimension of the algebra over the field.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Content hash of the canonical description.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn path_target(&self, p: &Path) -> usize {
        p.arrows.last().map_or(p.start, |&a| self.arrows[a].target)
    }

    pub fn has_relations(&self) -> bool {
        !self.relations.is_empty()
    }

    /// Normal-form basis of `e_t Λ e_s`: paths from `s` to `t` surviving
    /// modulo the relations.
    pub fn basis_paths(&self, s: usize, t: usize) -> Vec<Path> {
        self.pairs
            .get(&(s, t))
            .map(|pd| pd.basis.iter().map(|&i| pd.paths[i].clone()).collect())
            .unwrap_or_default()
    }

    pub fn basis_dim(&self, s: usize, t: usize) -> usize {
        self.pairs.get(&(s, t)).map_or(0, |pd| pd.basis.len())
    }

    /// Coordinates, in [`Algebra::basis_paths`]`(s, t)`, of a linear
    /// combination of paths from `s` to `t`.
    pub fn reduce(&self, s: usize, t: usize, combo: &[(u32, Path)]) -> Vec<u32> {
        let Some(pd) = self.pairs.get(&(s, t)) else {
            return vec![];
        };
        let mut v = vec![0u32; pd.paths.len()];
        for (c, p) in combo {
            let k = pd.index[p];
            v[k] = self.field.add(v[k], *c);
        }
        let r = pd.ideal.reduce(&v);
        pd.basis.iter().map(|&i| r[i]).collect()
    }

    /// Path basis grouped by `(source, target)`, omitting empty pairs.
    pub fn path_basis(&self) -> BTreeMap<(usize, usize), Vec<Path>> {
        self.pairs
            .iter()
            .filter(|(_, pd)| !pd.basis.is_empty())
            .map(|(&k, pd)| (k, pd.basis.iter().map(|&i| pd.paths[i].clone()).collect()))
            .collect()
    }

    pub fn path_names(&self, p: &Path) -> Vec<String> {
        p.arrows.iter().map(|&a| self.arrows[a].name.clone()).collect()
    }

    /// Canonical description: relation terms sorted, zero terms dropped,
    /// coefficients reduced.
    pub fn description(&self) -> AlgebraDescription {
        AlgebraDescription {
            field: FieldDescription {
                characteristic: self.field.characteristic(),
            },
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowDescription {
                    name: a.name.clone(),
                    from: self.vertices[a.source].clone(),
                    to: self.vertices[a.target].clone(),
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| RelationDescription {
                    terms: r
                        .terms
                        .iter()
                        .map(|(c, p)| TermDescription {
                            coeff: *c as i64,
                            path: self.path_names(p),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// The opposite algebra: every arrow reversed, relation paths reversed.
    /// Vertex and arrow names are kept.
    pub fn opposite(self: &Arc<Self>) -> Arc<Algebra> {
        if let Some(orig) = self.origin.get().and_then(Weak::upgrade) {
            return orig;
        }
        self.opposite
            .get_or_init(|| {
                let d = self.description();
                let op = AlgebraDescription {
                    field: d.field.clone(),
                    vertices: d.vertices.clone(),
                    arrows: d
                        .arrows
                        .iter()
                        .map(|a| ArrowDescription {
                            name: a.name.clone(),
                            from: a.to.clone(),
                            to: a.from.clone(),
                        })
                        .collect(),
                    relations: d
                        .relations
                        .iter()
                        .map(|r| RelationDescription {
                            terms: r
                                .terms
                                .iter()
                                .map(|t| TermDescription {
                                    coeff: t.coeff,
                                    path: t.path.iter().rev().cloned().collect(),
                                })
                                .collect(),
                        })
                        .collect(),
                };
                let alg = Algebra::from_description(&op).expect("opposite of a valid algebra");
                alg.origin.set(Arc::downgrade(self)).expect("fresh algebra");
                Arc::new(alg)
            })
            .clone()
    }

    /// The same path read in the opposite quiver.
    pub fn reverse_path(&self, p: &Path) -> Path {
        Path {
            start: self.path_target(p),
            arrows: p.arrows.iter().rev().copied().collect(),
        }
    }
}

fn check_acyclic(vertices: &[String], arrows: &[Arrow]) -> Result<(), QuiverError> {
    let n = vertices.len();
    let mut indeg = vec![0usize; n];
    for a in arrows {
        indeg[a.target] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = ready.pop() {
        seen += 1;
        for a in arrows.iter().filter(|a| a.source == v) {
            indeg[a.target] -= 1;
            if indeg[a.target] == 0 {
                ready.push(a.target);
            }
        }
    }
    if seen < n {
        let v = (0..n).find(|&v| indeg[v] > 0).unwrap();
        return Err(QuiverError::Cycle(vertices[v].clone()));
    }
    Ok(())
}

fn fingerprint(desc: &AlgebraDescription) -> String {
    let json = serde_json::to_vec(desc).expect("description serializes");
    hex::encode(Sha256::digest(&json))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn a3_has_dimension_six() {
        let a = corpus::a3(2);
        assert_eq!(a.dim(), 6);
        let basis = a.path_basis();
        // pair (3,1) as labels -> indices (2,0)
        let p31 = &basis[&(2, 0)];
        assert_eq!(p31.len(), 1);
        assert_eq!(a.path_names(&p31[0]), vec!["b", "a"]);
    }

    #[test]
    fn a3_with_zero_relation_has_dimension_five() {
        let a = corpus::a3_rad2(2);
        assert_eq!(a.dim(), 5);
        assert!(a.basis_paths(2, 0).is_empty());
    }

    #[test]
    fn d4_dimension_seven() {
        assert_eq!(corpus::d4(2).dim(), 7);
    }

    #[test]
    fn loop_is_rejected() {
        let desc = AlgebraDescription {
            field: FieldDescription { characteristic: 2 },
            vertices: vec!["1".into()],
            arrows: vec![ArrowDescription {
                name: "x".into(),
                from: "1".into(),
                to: "1".into(),
            }],
            relations: vec![],
        };
        assert!(matches!(validate_algebra(&desc), Err(QuiverError::Cycle(_))));
    }

    #[test]
    fn validation_errors() {
        let mut d = corpus::a3(2).description();
        d.field.characteristic = 4;
        assert!(matches!(validate_algebra(&d), Err(QuiverError::Field(_))));

        let mut d = corpus::a3(2).description();
        d.relations.push(RelationDescription {
            terms: vec![TermDescription {
                coeff: 1,
                path: vec!["a".into()],
            }],
        });
        assert!(matches!(
            validate_algebra(&d),
            Err(QuiverError::NotAdmissible { .. })
        ));

        let mut d = corpus::a3(2).description();
        d.relations.push(RelationDescription {
            terms: vec![TermDescription {
                coeff: 1,
                path: vec!["a".into(), "b".into()],
            }],
        });
        assert!(matches!(
            validate_algebra(&d),
            Err(QuiverError::NotComposable { .. })
        ));

        let mut d = corpus::a3(2).description();
        d.arrows[0].to = "9".into();
        assert!(matches!(
            validate_algebra(&d),
            Err(QuiverError::UnknownVertex { .. })
        ));
    }

    #[test]
    fn commutativity_relation_identifies_paths() {
        // square 1 -> 2 -> 4, 1 -> 3 -> 4 with ab = cd
        let desc = AlgebraDescription {
            field: FieldDescription { characteristic: 3 },
            vertices: ["1", "2", "3", "4"].map(String::from).to_vec(),
            arrows: vec![
                ArrowDescription { name: "a".into(), from: "1".into(), to: "2".into() },
                ArrowDescription { name: "b".into(), from: "2".into(), to: "4".into() },
                ArrowDescription { name: "c".into(), from: "1".into(), to: "3".into() },
                ArrowDescription { name: "d".into(), from: "3".into(), to: "4".into() },
            ],
            relations: vec![RelationDescription {
                terms: vec![
                    TermDescription { coeff: 1, path: vec!["a".into(), "b".into()] },
                    TermDescription { coeff: -1, path: vec!["c".into(), "d".into()] },
                ],
            }],
        };
        let alg = validate_algebra(&desc).unwrap();
        assert_eq!(alg.basis_dim(0, 3), 1);
        assert_eq!(alg.dim(), 4 + 4 + 1);
        let ab = Path { start: 0, arrows: vec![0, 1] };
        let cd = Path { start: 0, arrows: vec![2, 3] };
        assert_eq!(alg.reduce(0, 3, &[(1, ab)]), alg.reduce(0, 3, &[(1, cd)]));
    }

    #[test]
    fn round_trip_is_stable() {
        for alg in [corpus::a3(2), corpus::a3_rad2(3), corpus::d4(2)] {
            let again = validate_algebra(&alg.description()).unwrap();
            assert_eq!(again.description(), alg.description());
            assert_eq!(again.fingerprint(), alg.fingerprint());
            let op_op = alg.opposite().opposite();
            assert!(Arc::ptr_eq(&op_op, &alg));
        }
    }
}
