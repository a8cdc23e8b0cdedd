//! Homological calculus on representations: exact sequences and their
//! Hom-exactness, pushouts and pullbacks, minimal projective resolutions,
//! Ext groups, realization of extensions, the Auslander–Reiten translate
//! and the atlas of indecomposables.

mod ar;
mod atlas;
mod knit;
mod resolution;

use thiserror::Error;

use crate::exactla::{solve, Matrix};
use crate::rep::{hom_space, DirectSum, Morphism, Rep, RepError};

pub use ar::{ar_sequence, ar_translate, Direction};
pub use atlas::{Atlas, AtlasData, AtlasMember, MemberData};
pub use knit::{enumerate_indecomposables, Method, DEFAULT_KNIT_MAX_DIM, DEFAULT_KNIT_MAX_MEMBERS};
pub use resolution::{
    classify_ses, ext_dim, ext_space, ext_vanishes_bounded, proj_resolution, realize_ext1,
    ExtSpace, Resolution,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomcalcError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("not exact at vertex {vertex}: {detail}")]
    NotExact { vertex: usize, detail: String },
    #[error("morphisms are not composable")]
    NotComposable,
    #[error("the atlas is incomplete; supply a degree bound")]
    IncompleteAtlas,
    #[error("object is not in the atlas: {0}")]
    NotInAtlas(String),
    #[error("extension degree must be at least 1")]
    BadDegree,
}

/// Outcome of an `Ext^{≥1}` vanishing test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtVanishing {
    Vanishes,
    /// `Ext^degree(source, tests[test]) ≠ 0`; `source` is an atlas index of
    /// the summand of a syzygy responsible, when known.
    Fails {
        degree: usize,
        source: Option<usize>,
        test: usize,
    },
    Inconclusive,
}

impl ExtVanishing {
    pub fn vanishes(&self) -> bool {
        matches!(self, ExtVanishing::Vanishes)
    }
}

/// `0 -> A -f-> B -g-> C -> 0`, checked exact.
#[derive(Clone, Debug)]
pub struct ShortExactSeq {
    pub f: Morphism,
    pub g: Morphism,
}

/// Which Hom functor is applied to a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HomSide {
    /// `Hom(T, -)`
    From,
    /// `Hom(-, T)`
    Into,
}

/// Checks `g ∘ f = 0` and `rank f_v + rank g_v = dim B_v` at every vertex.
pub fn exact_at(f: &Morphism, g: &Morphism) -> Result<(), HomcalcError> {
    if f.target().dims() != g.source().dims() {
        return Err(HomcalcError::NotComposable);
    }
    for v in 0..f.maps().len() {
        let comp = g.at(v).mul(f.at(v));
        let (rf, rg) = (f.at(v).rank(), g.at(v).rank());
        let ok = comp.is_zero() && rf + rg == f.target().dim_at(v);
        if !ok {
            return Err(HomcalcError::NotExact {
                vertex: v,
                detail: format!(
                    "rank {rf} + rank {rg} vs dimension {}, composite zero: {}",
                    f.target().dim_at(v),
                    comp.is_zero()
                ),
            });
        }
    }
    Ok(())
}

pub fn ses_check(f: &Morphism, g: &Morphism) -> Result<ShortExactSeq, HomcalcError> {
    exact_at(f, g)?;
    for v in 0..f.maps().len() {
        if f.at(v).rank() != f.source().dim_at(v) {
            return Err(HomcalcError::NotExact {
                vertex: v,
                detail: "first map is not injective".into(),
            });
        }
        if g.at(v).rank() != g.target().dim_at(v) {
            return Err(HomcalcError::NotExact {
                vertex: v,
                detail: "second map is not surjective".into(),
            });
        }
    }
    Ok(ShortExactSeq {
        f: f.clone(),
        g: g.clone(),
    })
}

impl ShortExactSeq {
    pub fn left(&self) -> &Rep {
        self.f.source()
    }

    pub fn middle(&self) -> &Rep {
        self.f.target()
    }

    pub fn right(&self) -> &Rep {
        self.g.target()
    }

    /// The sequence splits iff `Hom(C, -)` keeps it exact.
    pub fn is_split(&self) -> Result<bool, HomcalcError> {
        hom_exactness(self, self.right(), HomSide::From)
    }

    /// The split sequence `0 -> A -> A ⊕ C -> C -> 0`.
    pub fn split(a: &Rep, c: &Rep) -> ShortExactSeq {
        let sum = DirectSum::new(a.algebra(), &[a.clone(), c.clone()]);
        ShortExactSeq {
            f: sum.injections[0].clone(),
            g: sum.projections[1].clone(),
        }
    }
}

/// Whether applying `Hom(T, -)` (or `Hom(-, T)`) keeps the sequence exact.
/// Both functors are left exact, so a dimension count decides.
pub fn hom_exactness(ses: &ShortExactSeq, t: &Rep, side: HomSide) -> Result<bool, HomcalcError> {
    let d = |x: &Rep, y: &Rep| hom_space(x, y).map(|h| h.dim());
    Ok(match side {
        HomSide::From => d(t, ses.middle())? == d(t, ses.left())? + d(t, ses.right())?,
        HomSide::Into => d(ses.middle(), t)? == d(ses.left(), t)? + d(ses.right(), t)?,
    })
}

/// `D` with `B -> D <- C`, the pushout of `B <-f- A -h-> C`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub object: Rep,
    pub from_b: Morphism,
    pub from_c: Morphism,
    projection: Morphism,
    section: Vec<Matrix>,
    sum: DirectSum,
}

/// `P` with `B <- P -> C`, the pullback of `B -f-> A <-h- C`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub object: Rep,
    pub to_b: Morphism,
    pub to_c: Morphism,
    inclusion: Morphism,
    sum: DirectSum,
}

/// Cokernel of `(f, -h)^T: A -> B ⊕ C`.
pub fn pushout(f: &Morphism, h: &Morphism) -> Pushout {
    let alg = f.source().algebra();
    let sum = DirectSum::new(alg, &[f.target().clone(), h.target().clone()]);
    let neg = h.scale(alg.field().neg(1));
    let col = Morphism::column(f.source(), &sum.object, &[f.clone(), neg]);
    let cok = col.cokernel();
    Pushout {
        object: cok.object.clone(),
        from_b: sum.injections[0].then(&cok.projection),
        from_c: sum.injections[1].then(&cok.projection),
        projection: cok.projection,
        section: cok.section,
        sum,
    }
}

/// Kernel of `(f, -h): B ⊕ C -> A`.
pub fn pullback(f: &Morphism, h: &Morphism) -> Pullback {
    let alg = f.target().algebra();
    let sum = DirectSum::new(alg, &[f.source().clone(), h.source().clone()]);
    let neg = h.scale(alg.field().neg(1));
    let row = Morphism::row(&sum.object, f.target(), &[f.clone(), neg]);
    let ker = row.kernel();
    Pullback {
        object: ker.object.clone(),
        to_b: ker.inclusion.then(&sum.projections[0]),
        to_c: ker.inclusion.then(&sum.projections[1]),
        inclusion: ker.inclusion,
        sum,
    }
}

impl Pushout {
    /// The unique `φ: D -> X` with `φ ∘ from_b = u` and `φ ∘ from_c = v`,
    /// when `u ∘ f = v ∘ h`.
    pub fn factor(&self, u: &Morphism, v: &Morphism) -> Option<Morphism> {
        let x = u.target();
        let joint = Morphism::row(&self.sum.object, x, &[u.clone(), v.clone()]);
        let maps: Vec<Matrix> = joint.maps().iter().zip(&self.section).map(|(j, s)| j.mul(s)).collect();
        let phi = Morphism::new(self.object.clone(), x.clone(), maps).ok()?;
        (self.projection.then(&phi) == joint).then_some(phi)
    }
}

impl Pullback {
    /// The unique `φ: X -> P` with `to_b ∘ φ = u` and `to_c ∘ φ = v`, when
    /// `f ∘ u = h ∘ v`.
    pub fn factor(&self, u: &Morphism, v: &Morphism) -> Option<Morphism> {
        let x = u.source();
        let joint = Morphism::column(x, &self.sum.object, &[u.clone(), v.clone()]);
        let mut maps = Vec::new();
        for (inc, j) in self.inclusion.maps().iter().zip(joint.maps()) {
            if inc.cols() == 0 {
                if !j.is_zero() {
                    return None;
                }
                maps.push(Matrix::zeros(j.field(), 0, j.cols()));
            } else {
                maps.push(solve(inc, j)?);
            }
        }
        Morphism::new(x.clone(), self.object.clone(), maps).ok()
    }
}
