//! Machine-checkable certificates: a table of objects and a flat list of
//! claims about maps between them. Rechecking uses only exact linear
//! algebra and representations; no homological machinery is trusted.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::Matrix;
use crate::quiver::Algebra;
use crate::rep::{hom_space, injective, projective, simple, DirectSum, Morphism, Rep, RepData, RepError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapData {
    pub source: usize,
    pub target: usize,
    /// One row-major matrix per vertex.
    pub maps: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HomFunctor {
    /// `Hom(T, -)`
    Covariant,
    /// `Hom(-, T)`
    Contravariant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardKind {
    Simple,
    Projective,
    Injective,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproxSide {
    /// Every map from the source to a test object factors through the map.
    Left,
    /// Every map from a test object to the target factors through the map.
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "snake_case")]
pub enum Claim {
    /// `0 -> A -f-> B -g-> C -> 0` is exact.
    ShortExact { f: MapData, g: MapData },
    /// `im f = ker g`.
    ExactAt { f: MapData, g: MapData },
    Mono { map: MapData },
    Epi { map: MapData },
    NotMono { map: MapData },
    NotEpi { map: MapData },
    Iso { map: MapData },
    /// The functor keeps (or, with `holds` false, breaks) the exactness of
    /// the short exact sequence `(f, g)`.
    HomExact {
        f: MapData,
        g: MapData,
        test: usize,
        functor: HomFunctor,
        holds: bool,
    },
    /// `object` is literally the direct sum of `parts`.
    DirectSum { object: usize, parts: Vec<usize> },
    /// `object` is literally the standard module at `vertex`.
    Standard {
        object: usize,
        kind: StandardKind,
        vertex: usize,
    },
    Approximation {
        map: MapData,
        side: ApproxSide,
        tests: Vec<usize>,
    },
    Zero { object: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub objects: Vec<RepData>,
    pub claims: Vec<Claim>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecheckError {
    #[error("object {index}: {source}")]
    BadObject { index: usize, source: RepError },
    #[error("claim {index}: malformed map: {detail}")]
    BadMap { index: usize, detail: String },
    #[error("claim {index} is false")]
    False { index: usize },
}

/// Collects objects (deduplicated by content) and claims.
#[derive(Clone, Debug, Default)]
pub struct CertBuilder {
    objects: Vec<Rep>,
    claims: Vec<Claim>,
}

impl CertBuilder {
    pub fn new() -> CertBuilder {
        CertBuilder::default()
    }

    pub fn object(&mut self, m: &Rep) -> usize {
        if let Some(i) = self.objects.iter().position(|o| o == m) {
            return i;
        }
        self.objects.push(m.clone());
        self.objects.len() - 1
    }

    pub fn map(&mut self, f: &Morphism) -> MapData {
        MapData {
            source: self.object(f.source()),
            target: self.object(f.target()),
            maps: f
                .maps()
                .iter()
                .map(|m| m.to_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect())
                .collect(),
        }
    }

    pub fn claim(&mut self, c: Claim) {
        if !self.claims.contains(&c) {
            self.claims.push(c);
        }
    }

    pub fn short_exact(&mut self, f: &Morphism, g: &Morphism) {
        let c = Claim::ShortExact {
            f: self.map(f),
            g: self.map(g),
        };
        self.claim(c);
    }

    pub fn hom_exact(&mut self, f: &Morphism, g: &Morphism, test: &Rep, functor: HomFunctor, holds: bool) {
        let c = Claim::HomExact {
            f: self.map(f),
            g: self.map(g),
            test: self.object(test),
            functor,
            holds,
        };
        self.claim(c);
    }

    pub fn approximation(&mut self, map: &Morphism, side: ApproxSide, tests: &[Rep]) {
        let tests = tests.iter().map(|t| self.object(t)).collect();
        let c = Claim::Approximation {
            map: self.map(map),
            side,
            tests,
        };
        self.claim(c);
    }

    pub fn direct_sum(&mut self, sum: &Rep, parts: &[Rep]) {
        let c = Claim::DirectSum {
            object: self.object(sum),
            parts: parts.iter().map(|p| self.object(p)).collect(),
        };
        self.claim(c);
    }

    pub fn len(&self) -> usize {
        self.claims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.claims.is_empty()
    }

    pub fn merge(&mut self, other: &CertBuilder) {
        let remap: Vec<usize> = other.objects.iter().map(|o| self.object(o)).collect();
        for c in &other.claims {
            let c = remap_claim(c, &remap);
            self.claim(c);
        }
    }

    pub fn finish(&self) -> Certificate {
        Certificate {
            objects: self.objects.iter().map(Rep::to_data).collect(),
            claims: self.claims.clone(),
        }
    }
}

fn remap_map(m: &MapData, r: &[usize]) -> MapData {
    MapData {
        source: r[m.source],
        target: r[m.target],
        maps: m.maps.clone(),
    }
}

fn remap_claim(c: &Claim, r: &[usize]) -> Claim {
    match c {
        Claim::ShortExact { f, g } => Claim::ShortExact {
            f: remap_map(f, r),
            g: remap_map(g, r),
        },
        Claim::ExactAt { f, g } => Claim::ExactAt {
            f: remap_map(f, r),
            g: remap_map(g, r),
        },
        Claim::Mono { map } => Claim::Mono { map: remap_map(map, r) },
        Claim::Epi { map } => Claim::Epi { map: remap_map(map, r) },
        Claim::NotMono { map } => Claim::NotMono { map: remap_map(map, r) },
        Claim::NotEpi { map } => Claim::NotEpi { map: remap_map(map, r) },
        Claim::Iso { map } => Claim::Iso { map: remap_map(map, r) },
        Claim::HomExact {
            f,
            g,
            test,
            functor,
            holds,
        } => Claim::HomExact {
            f: remap_map(f, r),
            g: remap_map(g, r),
            test: r[*test],
            functor: *functor,
            holds: *holds,
        },
        Claim::DirectSum { object, parts } => Claim::DirectSum {
            object: r[*object],
            parts: parts.iter().map(|p| r[*p]).collect(),
        },
        Claim::Standard { object, kind, vertex } => Claim::Standard {
            object: r[*object],
            kind: *kind,
            vertex: *vertex,
        },
        Claim::Approximation { map, side, tests } => Claim::Approximation {
            map: remap_map(map, r),
            side: *side,
            tests: tests.iter().map(|t| r[*t]).collect(),
        },
        Claim::Zero { object } => Claim::Zero { object: r[*object] },
    }
}

struct Checker<'a> {
    objects: Vec<Rep>,
    algebra: &'a Arc<Algebra>,
}

impl Checker<'_> {
    fn morphism(&self, index: usize, m: &MapData) -> Result<Morphism, RecheckError> {
        let bad = |detail: String| RecheckError::BadMap { index, detail };
        let source = self.objects.get(m.source).ok_or_else(|| bad("unknown source".into()))?;
        let target = self.objects.get(m.target).ok_or_else(|| bad("unknown target".into()))?;
        if m.maps.len() != self.algebra.num_vertices() {
            return Err(bad("wrong number of vertices".into()));
        }
        let f = self.algebra.field();
        let mut maps = Vec::new();
        for (v, rows) in m.maps.iter().enumerate() {
            let mat = Matrix::from_rows_shaped(f, target.dim_at(v), source.dim_at(v), rows)
                .map_err(|e| bad(e.to_string()))?;
            maps.push(mat);
        }
        Morphism::new(source.clone(), target.clone(), maps).map_err(|e| bad(e.to_string()))
    }

    fn check(&self, index: usize, c: &Claim) -> Result<bool, RecheckError> {
        Ok(match c {
            Claim::ShortExact { f, g } => {
                let (f, g) = (self.morphism(index, f)?, self.morphism(index, g)?);
                f.target() == g.source() && f.is_mono() && g.is_epi() && exact_at(&f, &g)
            }
            Claim::ExactAt { f, g } => {
                let (f, g) = (self.morphism(index, f)?, self.morphism(index, g)?);
                f.target() == g.source() && exact_at(&f, &g)
            }
            Claim::Mono { map } => self.morphism(index, map)?.is_mono(),
            Claim::Epi { map } => self.morphism(index, map)?.is_epi(),
            Claim::NotMono { map } => !self.morphism(index, map)?.is_mono(),
            Claim::NotEpi { map } => !self.morphism(index, map)?.is_epi(),
            Claim::Iso { map } => self.morphism(index, map)?.is_iso(),
            Claim::HomExact {
                f,
                g,
                test,
                functor,
                holds,
            } => {
                let (f, g) = (self.morphism(index, f)?, self.morphism(index, g)?);
                let t = self.object(index, *test)?;
                if !(f.target() == g.source() && f.is_mono() && g.is_epi() && exact_at(&f, &g)) {
                    return Ok(false);
                }
                let (a, b, c) = (f.source(), f.target(), g.target());
                let d = |x: &Rep, y: &Rep| hom_space(x, y).map(|h| h.dim()).map_err(|e| RecheckError::BadMap {
                    index,
                    detail: e.to_string(),
                });
                // Left exactness is automatic; exactness is a dimension count.
                let exact = match functor {
                    HomFunctor::Covariant => d(t, b)? == d(t, a)? + d(t, c)?,
                    HomFunctor::Contravariant => d(b, t)? == d(a, t)? + d(c, t)?,
                };
                exact == *holds
            }
            Claim::DirectSum { object, parts } => {
                let parts: Vec<Rep> = parts
                    .iter()
                    .map(|&p| self.object(index, p).cloned())
                    .collect::<Result<_, _>>()?;
                DirectSum::new(self.algebra, &parts).object == *self.object(index, *object)?
            }
            Claim::Standard { object, kind, vertex } => {
                if *vertex >= self.algebra.num_vertices() {
                    return Ok(false);
                }
                let s = match kind {
                    StandardKind::Simple => simple(self.algebra, *vertex),
                    StandardKind::Projective => projective(self.algebra, *vertex),
                    StandardKind::Injective => injective(self.algebra, *vertex),
                };
                s == *self.object(index, *object)?
            }
            Claim::Approximation { map, side, tests } => {
                let u = self.morphism(index, map)?;
                for &t in tests {
                    let t = self.object(index, t)?;
                    if !factors(&u, t, *side).map_err(|e| RecheckError::BadMap {
                        index,
                        detail: e.to_string(),
                    })? {
                        return Ok(false);
                    }
                }
                true
            }
            Claim::Zero { object } => self.object(index, *object)?.is_zero(),
        })
    }

    fn object(&self, index: usize, i: usize) -> Result<&Rep, RecheckError> {
        self.objects.get(i).ok_or(RecheckError::BadMap {
            index,
            detail: format!("unknown object {i}"),
        })
    }
}

fn exact_at(f: &Morphism, g: &Morphism) -> bool {
    f.then(g).is_zero()
        && f.maps()
            .iter()
            .zip(g.maps())
            .all(|(fv, gv)| fv.rank() + gv.rank() == gv.cols())
}

/// The restriction `Hom(target, T) -> Hom(source, T)` (left) or the
/// composition `Hom(T, source) -> Hom(T, target)` (right) is onto.
fn factors(u: &Morphism, t: &Rep, side: ApproxSide) -> Result<bool, RepError> {
    let f = u.source().field();
    let (through, want) = match side {
        ApproxSide::Left => (hom_space(u.target(), t)?, hom_space(u.source(), t)?.dim()),
        ApproxSide::Right => (hom_space(t, u.source())?, hom_space(t, u.target())?.dim()),
    };
    if want == 0 {
        return Ok(true);
    }
    let vectors: Vec<Vec<u32>> = through
        .basis()
        .iter()
        .map(|b| match side {
            ApproxSide::Left => u.then(b).to_vector(),
            ApproxSide::Right => b.then(u).to_vector(),
        })
        .collect();
    if vectors.len() < want {
        return Ok(false);
    }
    let cols = vectors[0].len();
    let m = Matrix::from_vec(f, vectors.len(), cols, vectors.into_iter().flatten().collect());
    Ok(m.rank() == want)
}

/// Re-verifies every claim; the first false or malformed one is reported.
pub fn recheck(algebra: &Arc<Algebra>, cert: &Certificate) -> Result<(), RecheckError> {
    let mut objects = Vec::new();
    for (index, d) in cert.objects.iter().enumerate() {
        objects.push(Rep::from_data(algebra.clone(), d).map_err(|source| RecheckError::BadObject { index, source })?);
    }
    let checker = Checker { objects, algebra };
    for (index, c) in cert.claims.iter().enumerate() {
        if !checker.check(index, c)? {
            return Err(RecheckError::False { index });
        }
    }
    Ok(())
}
