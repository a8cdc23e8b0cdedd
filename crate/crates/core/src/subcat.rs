//! Finite additive subcategories `add(C₁ ⊕ … ⊕ Cₙ)`, perpendicular
//! categories and minimal approximations.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::Matrix;
use crate::homcalc::{Atlas, ExtVanishing, HomcalcError};
use crate::quiver::Algebra;
use crate::rep::{
    decompose, hom_space, indecomposables_iso, Cokernel, DirectSum, HomSpace, Kernel, Morphism, Rep, RepError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubcatError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Homcalc(#[from] HomcalcError),
    #[error("objects live over different algebras")]
    HandleMismatch,
    #[error("{0} is not a member of the ambient subcategory")]
    NotSubset(String),
}

fn over(m: &Rep, algebra: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(m.algebra(), algebra) || **m.algebra() == **algebra
}

/// `add` of finitely many pairwise non-isomorphic indecomposables.
#[derive(Clone, Debug)]
pub struct Subcategory {
    algebra: Arc<Algebra>,
    members: Vec<Rep>,
    homs: OnceLock<Vec<Vec<HomSpace>>>,
}

impl Subcategory {
    /// The indecomposable summands of the given objects, deduplicated up to
    /// isomorphism in order of first appearance.
    pub fn new(algebra: &Arc<Algebra>, objects: &[Rep]) -> Result<Subcategory, SubcatError> {
        let mut members: Vec<Rep> = Vec::new();
        for m in objects {
            if !over(m, algebra) {
                return Err(SubcatError::HandleMismatch);
            }
            for s in decompose(m)?.summands {
                let mut seen = false;
                for t in &members {
                    if t.dims() == s.dims() && indecomposables_iso(t, &s)?.is_some() {
                        seen = true;
                        break;
                    }
                }
                if !seen {
                    members.push(s);
                }
            }
        }
        Ok(Subcategory::from_members(algebra, members))
    }

    fn from_members(algebra: &Arc<Algebra>, members: Vec<Rep>) -> Subcategory {
        Subcategory {
            algebra: algebra.clone(),
            members,
            homs: OnceLock::new(),
        }
    }

    /// The members with the given atlas indices.
    pub fn from_atlas(atlas: &Atlas, indices: &[usize]) -> Subcategory {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        Subcategory::from_members(atlas.algebra(), idx.iter().map(|&i| atlas.rep(i).clone()).collect())
    }

    pub fn empty(algebra: &Arc<Algebra>) -> Subcategory {
        Subcategory::from_members(algebra, vec![])
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn members(&self) -> &[Rep] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Direct sum of the members.
    pub fn sum(&self) -> Rep {
        DirectSum::new(&self.algebra, &self.members).object
    }

    /// Position of an indecomposable among the members.
    pub fn position(&self, s: &Rep) -> Result<Option<usize>, SubcatError> {
        for (i, t) in self.members.iter().enumerate() {
            if t.dims() == s.dims() && indecomposables_iso(t, s)?.is_some() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Every indecomposable summand of `m` is isomorphic to a member.
    pub fn contains(&self, m: &Rep) -> Result<bool, SubcatError> {
        for s in decompose(m)?.summands {
            if self.position(&s)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Atlas indices of the members.
    pub fn indices_in(&self, atlas: &Atlas) -> Result<Vec<usize>, SubcatError> {
        let mut out = Vec::new();
        for m in &self.members {
            match atlas.index_of(m)? {
                Some(i) => out.push(i),
                None => return Err(HomcalcError::NotInAtlas(m.dim_vector_string()).into()),
            }
        }
        Ok(out)
    }

    /// The dual subcategory over the opposite algebra.
    pub fn dual(&self) -> Subcategory {
        let op = self.algebra.opposite();
        Subcategory::from_members(&op, self.members.iter().map(|m| m.dualize().rebind(&op)).collect())
    }

    /// `homs[i][j] = Hom(C_i, C_j)`
    fn member_homs(&self) -> Result<&Vec<Vec<HomSpace>>, SubcatError> {
        if let Some(h) = self.homs.get() {
            return Ok(h);
        }
        let mut table = Vec::new();
        for a in &self.members {
            let mut row = Vec::new();
            for b in &self.members {
                row.push(hom_space(a, b)?);
            }
            table.push(row);
        }
        Ok(self.homs.get_or_init(|| table))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A left approximation `M -> C⁰` or a right approximation `C₀ -> M`.
#[derive(Clone, Debug)]
pub struct Approximation {
    pub side: Side,
    pub map: Morphism,
    /// Member positions of the summands of the `add(C)` object, in order.
    pub summands: Vec<usize>,
    /// Components `M -> C_j` (left) or `C_j -> M` (right).
    pub components: Vec<Morphism>,
    pub mono: bool,
    pub epi: bool,
    pub kernel: Kernel,
    pub cokernel: Cokernel,
}

impl Approximation {
    /// The `add(C)` end of the map.
    pub fn object(&self) -> &Rep {
        match self.side {
            Side::Left => self.map.target(),
            Side::Right => self.map.source(),
        }
    }

    /// A summand whose deletion keeps the approximation property, if any.
    pub fn removable(&self, c: &Subcategory) -> Result<Option<usize>, SubcatError> {
        let comps: Vec<(usize, Morphism)> = self.summands.iter().copied().zip(self.components.iter().cloned()).collect();
        let m = match self.side {
            Side::Left => self.map.source(),
            Side::Right => self.map.target(),
        };
        let tests = test_homs(m, c, self.side)?;
        for k in 0..comps.len() {
            let mut trial = comps.clone();
            trial.remove(k);
            if approximates(&trial, &tests, c, self.side)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// Re-verifies the factorization property map by map: every `M -> C`
    /// (resp. `C -> M`) with `C` a member factors through the approximation.
    pub fn verify(&self, c: &Subcategory) -> Result<bool, SubcatError> {
        for member in c.members() {
            match self.side {
                Side::Left => {
                    for b in hom_space(self.map.source(), member)?.basis() {
                        if crate::rep::extend(b, &self.map)?.is_none() {
                            return Ok(false);
                        }
                    }
                }
                Side::Right => {
                    for b in hom_space(member, self.map.target())?.basis() {
                        if crate::rep::lift(b, &self.map)?.is_none() {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

fn test_homs(m: &Rep, c: &Subcategory, side: Side) -> Result<Vec<HomSpace>, SubcatError> {
    let mut out = Vec::new();
    for member in c.members() {
        out.push(match side {
            Side::Left => hom_space(m, member)?,
            Side::Right => hom_space(member, m)?,
        });
    }
    Ok(out)
}

/// Whether the components form an approximation: the restriction
/// `Hom(C⁰, C_i) -> Hom(M, C_i)` is onto for every member (dually for the
/// right side).
fn approximates(
    comps: &[(usize, Morphism)],
    tests: &[HomSpace],
    c: &Subcategory,
    side: Side,
) -> Result<bool, SubcatError> {
    let homs = c.member_homs()?;
    let f = c.algebra().field();
    for (i, test) in tests.iter().enumerate() {
        if test.dim() == 0 {
            continue;
        }
        let mut vectors: Vec<Vec<u32>> = Vec::new();
        for (j, u) in comps {
            match side {
                Side::Left => {
                    for b in homs[*j][i].basis() {
                        vectors.push(u.then(b).to_vector());
                    }
                }
                Side::Right => {
                    for b in homs[i][*j].basis() {
                        vectors.push(b.then(u).to_vector());
                    }
                }
            }
        }
        if vectors.len() < test.dim() {
            return Ok(false);
        }
        let cols = vectors[0].len();
        let mat = Matrix::from_vec(f, vectors.len(), cols, vectors.into_iter().flatten().collect());
        if mat.rank() < test.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimal left or right `add(C)`-approximation of `m`: the universal map
/// from Hom bases, then greedy deletion of summands in member order.
pub fn minimal_approximation(m: &Rep, c: &Subcategory, side: Side) -> Result<Approximation, SubcatError> {
    if !over(m, c.algebra()) {
        return Err(SubcatError::HandleMismatch);
    }
    let tests = test_homs(m, c, side)?;
    let mut comps: Vec<(usize, Morphism)> = Vec::new();
    for (i, h) in tests.iter().enumerate() {
        for b in h.basis() {
            comps.push((i, b.clone()));
        }
    }
    let mut k = 0;
    while k < comps.len() {
        let mut trial = comps.clone();
        trial.remove(k);
        if approximates(&trial, &tests, c, side)? {
            comps = trial;
        } else {
            k += 1;
        }
    }
    let summands: Vec<usize> = comps.iter().map(|(i, _)| *i).collect();
    let components: Vec<Morphism> = comps.into_iter().map(|(_, u)| u).collect();
    let parts: Vec<Rep> = summands.iter().map(|&i| c.members()[i].clone()).collect();
    let sum = DirectSum::new(c.algebra(), &parts).object;
    let map = match side {
        Side::Left => Morphism::column(m, &sum, &components),
        Side::Right => Morphism::row(&sum, m, &components),
    };
    Ok(Approximation {
        side,
        mono: map.is_mono(),
        epi: map.is_epi(),
        kernel: map.kernel(),
        cokernel: map.cokernel(),
        map,
        summands,
        components,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerpSide {
    /// `^⊥C = {X | Ext^{≥1}(X, C) = 0}`
    Left,
    /// `C^⊥ = {X | Ext^{≥1}(C, X) = 0}`
    Right,
}

/// The perpendicular category inside a complete atlas.
pub fn perp(c: &Subcategory, atlas: &Atlas, side: PerpSide, all_degrees: bool) -> Result<Subcategory, SubcatError> {
    if !atlas.is_complete() {
        return Err(HomcalcError::IncompleteAtlas.into());
    }
    let idx = c.indices_in(atlas)?;
    let members = match side {
        PerpSide::Left => atlas.left_perp(&idx, all_degrees)?,
        PerpSide::Right => atlas.right_perp(&idx, all_degrees)?,
    };
    Ok(Subcategory::from_atlas(atlas, &members))
}

/// Outcome of a check, with a failing witness. Objects are atlas indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Check {
    Holds,
    Fails { witness: Witness },
    Inconclusive { reason: String },
}

impl Check {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `Ext^degree(source, test) ≠ 0`
    Ext { source: usize, test: usize, degree: usize },
    NotMono { object: usize },
    NotEpi { object: usize },
    /// A (co)kernel summand of the approximation of `object` lies outside.
    Outside { object: usize, summand: usize },
}

/// `Ext^{≥1}(X, Y) = 0` for all members. With an incomplete atlas the
/// degrees `1..=bound` are checked directly.
pub fn is_self_orthogonal(c: &Subcategory, atlas: &Atlas, bound: Option<usize>) -> Result<Check, SubcatError> {
    if atlas.is_complete() {
        let idx = c.indices_in(atlas)?;
        for &x in &idx {
            for &y in &idx {
                if let ExtVanishing::Fails { degree, .. } = atlas.ext_vanishes(&[x], &[y])? {
                    return Ok(Check::Fails {
                        witness: Witness::Ext {
                            source: x,
                            test: y,
                            degree,
                        },
                    });
                }
            }
        }
        return Ok(Check::Holds);
    }
    let Some(bound) = bound else {
        return Err(HomcalcError::IncompleteAtlas.into());
    };
    let idx = c.indices_in(atlas)?;
    let mut conclusive = true;
    for (a, x) in c.members().iter().enumerate() {
        match crate::homcalc::ext_vanishes_bounded(x, c.members(), bound)? {
            ExtVanishing::Fails { degree, test, .. } => {
                return Ok(Check::Fails {
                    witness: Witness::Ext {
                        source: idx[a],
                        test: idx[test],
                        degree,
                    },
                })
            }
            ExtVanishing::Inconclusive => conclusive = false,
            ExtVanishing::Vanishes => {}
        }
    }
    Ok(if conclusive {
        Check::Holds
    } else {
        Check::Inconclusive {
            reason: format!("no failure up to degree {bound}"),
        }
    })
}

/// Generator/cogenerator properties of `C` inside `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenCogenReport {
    pub generator: Check,
    pub cogenerator: Check,
    pub projective_generator: Check,
    pub injective_cogenerator: Check,
}

pub fn gen_cogen_check(c: &Subcategory, x: &Subcategory, atlas: &Atlas) -> Result<GenCogenReport, SubcatError> {
    for m in c.members() {
        if x.position(m)?.is_none() {
            return Err(SubcatError::NotSubset(m.dim_vector_string()));
        }
    }
    let xi = x.indices_in(atlas)?;
    let ci = c.indices_in(atlas)?;
    let cogenerator = sequence_check(c, x, atlas, &xi, Side::Left)?;
    let generator = sequence_check(c, x, atlas, &xi, Side::Right)?;
    let injective_cogenerator = combine(&cogenerator, orthogonality(atlas, &xi, &ci)?);
    let projective_generator = combine(&generator, orthogonality(atlas, &ci, &xi)?);
    Ok(GenCogenReport {
        generator,
        cogenerator,
        projective_generator,
        injective_cogenerator,
    })
}

fn combine(first: &Check, second: Check) -> Check {
    match first {
        Check::Holds => second,
        other => other.clone(),
    }
}

fn orthogonality(atlas: &Atlas, sources: &[usize], tests: &[usize]) -> Result<Check, SubcatError> {
    if !atlas.is_complete() {
        return Ok(Check::Inconclusive {
            reason: "incomplete atlas".into(),
        });
    }
    for &s in sources {
        if let ExtVanishing::Fails { degree, test, .. } = atlas.ext_vanishes(&[s], tests)? {
            return Ok(Check::Fails {
                witness: Witness::Ext {
                    source: s,
                    test: tests[test],
                    degree,
                },
            });
        }
    }
    Ok(Check::Holds)
}

/// Every X-member has a mono left (epi right) C-approximation whose
/// cokernel (kernel) lies in add(X).
fn sequence_check(c: &Subcategory, x: &Subcategory, atlas: &Atlas, xi: &[usize], side: Side) -> Result<Check, SubcatError> {
    for (k, m) in x.members().iter().enumerate() {
        let ap = minimal_approximation(m, c, side)?;
        let (ok, rest) = match side {
            Side::Left => (ap.mono, ap.cokernel.object.clone()),
            Side::Right => (ap.epi, ap.kernel.object.clone()),
        };
        if !ok {
            let witness = match side {
                Side::Left => Witness::NotMono { object: xi[k] },
                Side::Right => Witness::NotEpi { object: xi[k] },
            };
            return Ok(Check::Fails { witness });
        }
        let summands = match atlas.locate(&rest) {
            Ok(s) => s,
            Err(HomcalcError::NotInAtlas(d)) => {
                return Ok(Check::Inconclusive {
                    reason: format!("summand {d} is outside the atlas"),
                })
            }
            Err(e) => return Err(e.into()),
        };
        if let Some(&s) = summands.iter().find(|s| !xi.contains(s)) {
            return Ok(Check::Fails {
                witness: Witness::Outside { object: xi[k], summand: s },
            });
        }
    }
    Ok(Check::Holds)
}
