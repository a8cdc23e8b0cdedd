use serde::{Deserialize, Serialize};

use crate::gorenstein::{relative_pd, RelativeDimension};
use crate::homcalc::{ses_check, Atlas, ExtVanishing, HomcalcError, ShortExactSeq};
use crate::rep::{Morphism, Rep};
use crate::subcat::{minimal_approximation, Side, Subcategory};

use super::enumerate::{closure_idx, extensions, objects, outside, ClosureProperty};
use super::{set_equality, ContextBounds, ContextError, Counterexample, Finding, SeqWitness};

/// The three equivalent forms of heredity, each checked on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hereditary {
    /// `Ext^{≥1}(U, V) = 0`
    pub orthogonal: Finding,
    /// `U` contains the projectives and is closed under extensions and
    /// kernels of epimorphisms.
    pub u_resolving: Finding,
    /// `V` contains the injectives and is closed under extensions and
    /// cokernels of monomorphisms.
    pub v_coresolving: Finding,
}

impl Hereditary {
    pub fn holds(&self) -> bool {
        self.orthogonal.holds() && self.u_resolving.holds() && self.v_coresolving.holds()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerObject {
    pub object: usize,
    pub finding: Finding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CotorsionReport {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    /// `U = ^⊥₁V` and `V = U^⊥₁`.
    pub pair: Finding,
    pub hereditary: Hereditary,
    /// Per indecomposable `A`, a sequence `0 -> A -> V -> U -> 0`.
    pub enough_injectives: Vec<PerObject>,
    /// Per indecomposable `A`, a sequence `0 -> V -> U -> A -> 0`.
    pub enough_projectives: Vec<PerObject>,
    pub kernel: Vec<usize>,
    pub bounds: ContextBounds,
}

impl CotorsionReport {
    pub fn is_pair(&self) -> bool {
        self.pair.holds()
    }

    pub fn is_hereditary(&self) -> bool {
        self.hereditary.holds()
    }

    pub fn has_enough_injectives(&self) -> bool {
        self.enough_injectives.iter().all(|p| p.finding.holds())
    }

    pub fn has_enough_projectives(&self) -> bool {
        self.enough_projectives.iter().all(|p| p.finding.holds())
    }
}

fn contains_all(class: &[usize], required: &[usize], what: &str) -> Finding {
    match required.iter().find(|r| !class.contains(r)) {
        Some(&r) => Finding::object(r, format!("{what} missing from the class")),
        None => Finding::holds_after(required.len()),
    }
}

fn trivial(a: &Rep, injective_side: bool) -> ShortExactSeq {
    let zero = Rep::zero(a.algebra().clone());
    let id = Morphism::identity(a);
    if injective_side {
        ShortExactSeq {
            f: id,
            g: Morphism::zero(a, &zero),
        }
    } else {
        ShortExactSeq {
            f: Morphism::zero(&zero, a),
            g: id,
        }
    }
}

/// Searches for `0 -> A -> V -> U -> 0` (`injective_side`) or
/// `0 -> V -> U -> A -> 0` by realizing Ext classes against objects of the
/// other class with at most `mult` summands.
fn enough(
    atlas: &Atlas,
    a: usize,
    u: &[usize],
    v: &[usize],
    injective_side: bool,
    bounds: &ContextBounds,
) -> Result<Finding, ContextError> {
    let (home, far) = if injective_side { (v, u) } else { (u, v) };
    let rep = atlas.rep(a);
    if home.contains(&a) {
        return Ok(Finding::Holds {
            checked: 1,
            witnesses: vec![SeqWitness::new(atlas, &trivial(rep, injective_side))?],
        });
    }
    // The minimal approximation by the home class is the natural candidate.
    let side = if injective_side { Side::Left } else { Side::Right };
    let ap = minimal_approximation(rep, &Subcategory::from_atlas(atlas, home), side)?;
    if (injective_side && ap.mono) || (!injective_side && ap.epi) {
        let ses = if injective_side {
            ses_check(&ap.map, &ap.cokernel.projection)?
        } else {
            ses_check(&ap.kernel.inclusion, &ap.map)?
        };
        let other = if injective_side { ses.right() } else { ses.left() };
        if outside(&atlas.locate(other)?, far).is_empty() {
            return Ok(Finding::Holds {
                checked: 1,
                witnesses: vec![SeqWitness::new(atlas, &ses)?],
            });
        }
    }
    let me = objects(atlas, &[a], 1);
    let others = objects(atlas, far, bounds.mult);
    let mut found = None;
    let check = |ses: &ShortExactSeq, found: &mut Option<SeqWitness>| -> Result<bool, ContextError> {
        if outside(&atlas.locate(ses.middle())?, home).is_empty() {
            *found = Some(SeqWitness::new(atlas, ses)?);
        }
        Ok(found.is_some())
    };
    let sweep = if injective_side {
        extensions(&me, &others, bounds.hom_budget, |s| check(s, &mut found))?
    } else {
        extensions(&others, &me, bounds.hom_budget, |s| check(s, &mut found))?
    };
    Ok(match found {
        Some(w) => Finding::Holds {
            checked: sweep.visited,
            witnesses: vec![w],
        },
        None => Finding::Inconclusive {
            reason: format!(
                "no sequence among {} extensions by objects with at most {} summands",
                sweep.visited, bounds.mult
            ),
        },
    })
}

pub(crate) fn cotorsion_idx(atlas: &Atlas, u: &[usize], v: &[usize], bounds: &ContextBounds) -> Result<CotorsionReport, ContextError> {
    if !atlas.is_complete() {
        return Err(HomcalcError::IncompleteAtlas.into());
    }
    let n = atlas.len();
    let perp_v = atlas.left_perp(v, false)?;
    let u_perp = atlas.right_perp(u, false)?;
    let pair = set_equality(u, &perp_v, n, "U", "^⊥₁V").and(set_equality(v, &u_perp, n, "V", "U^⊥₁"));

    let orthogonal = match atlas.ext_vanishes(u, v)? {
        ExtVanishing::Fails { degree, source, test } => Finding::fails(Counterexample::Ext {
            source: source.unwrap_or(usize::MAX),
            test: v[test],
            degree,
        }),
        ExtVanishing::Vanishes => Finding::holds_after(u.len() * v.len()),
        ExtVanishing::Inconclusive => Finding::Inconclusive {
            reason: "Ext vanishing undecided".into(),
        },
    };
    let u_resolving = contains_all(u, &atlas.projectives(), "a projective")
        .and(closure_idx(atlas, u, ClosureProperty::Extensions, bounds)?)
        .and(closure_idx(atlas, u, ClosureProperty::KerEpi, bounds)?);
    let v_coresolving = contains_all(v, &atlas.injectives(), "an injective")
        .and(closure_idx(atlas, v, ClosureProperty::Extensions, bounds)?)
        .and(closure_idx(atlas, v, ClosureProperty::CokerMono, bounds)?);

    let mut enough_injectives = Vec::new();
    let mut enough_projectives = Vec::new();
    for a in 0..n {
        enough_injectives.push(PerObject {
            object: a,
            finding: enough(atlas, a, u, v, true, bounds)?,
        });
        enough_projectives.push(PerObject {
            object: a,
            finding: enough(atlas, a, u, v, false, bounds)?,
        });
    }
    let kernel = u.iter().copied().filter(|x| v.contains(x)).collect();
    Ok(CotorsionReport {
        u: u.to_vec(),
        v: v.to_vec(),
        pair,
        hereditary: Hereditary {
            orthogonal,
            u_resolving,
            v_coresolving,
        },
        enough_injectives,
        enough_projectives,
        kernel,
        bounds: *bounds,
    })
}

pub fn cotorsion_check(u: &Subcategory, v: &Subcategory, atlas: &Atlas, bounds: &ContextBounds) -> Result<CotorsionReport, ContextError> {
    cotorsion_idx(atlas, &u.indices_in(atlas)?, &v.indices_in(atlas)?, bounds)
}

/// Summands of `Ω^{degree-1}` of the sources, so that
/// `Ext^degree(A, T) = Ext^1(Ω^{degree-1}A, T)`.
pub(crate) fn syzygy_support(atlas: &Atlas, sources: &[usize], degree: usize) -> Vec<usize> {
    let mut cur: Vec<usize> = sources.to_vec();
    for _ in 1..degree {
        let mut next: Vec<usize> = cur.iter().flat_map(|&y| atlas.syzygy(y).iter().copied()).collect();
        next.sort_unstable();
        next.dedup();
        cur = next;
    }
    cur
}

/// `Ext^degree(⊕ sources, ⊕ tests) = 0`, for `degree ≥ 1`.
pub(crate) fn ext_vanishes_at(atlas: &Atlas, sources: &[usize], degree: usize, tests: &[usize]) -> bool {
    syzygy_support(atlas, sources, degree)
        .iter()
        .all(|&y| tests.iter().all(|&t| atlas.ext1_dim(y, t) == 0))
}

/// `Ext^{≥degree}(⊕ sources, ⊕ tests) = 0`, for `degree ≥ 1`.
pub(crate) fn ext_vanishes_from(atlas: &Atlas, sources: &[usize], degree: usize, tests: &[usize]) -> bool {
    let mut cur = syzygy_support(atlas, sources, degree);
    let mut seen = Vec::new();
    while !cur.is_empty() && !seen.contains(&cur) {
        if cur.iter().any(|&y| tests.iter().any(|&t| atlas.ext1_dim(y, t) > 0)) {
            return false;
        }
        seen.push(cur.clone());
        cur = syzygy_support(atlas, &cur, 2);
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma43Row {
    pub object: usize,
    pub n: usize,
    pub pd: RelativeDimension,
    pub ext_vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma43Report {
    pub rows: Vec<Lemma43Row>,
    pub finding: Finding,
}

/// `U-pd A ≤ n` against `Ext^{n+1}(A, V) = 0` for every indecomposable and
/// every `n ≤ n_max`.
pub fn lemma43_check(u: &Subcategory, v: &Subcategory, atlas: &Atlas, n_max: usize) -> Result<Lemma43Report, ContextError> {
    let (ui, vi) = (u.indices_in(atlas)?, v.indices_in(atlas)?);
    if !atlas.is_complete() {
        return Err(HomcalcError::IncompleteAtlas.into());
    }
    if !atlas.ext_vanishes(&ui, &vi)?.vanishes() {
        return Ok(Lemma43Report {
            rows: Vec::new(),
            finding: Finding::HypothesisNotMet {
                reason: "Ext^{≥1}(U, V) ≠ 0".into(),
            },
        });
    }
    let mut rows = Vec::new();
    let mut finding = Finding::holds_after(0);
    for a in 0..atlas.len() {
        let (pd, _) = relative_pd(atlas.rep(a), u, atlas)?;
        for n in 0..=n_max {
            let ext_vanishes = ext_vanishes_at(atlas, &[a], n + 1, &vi);
            let row = Lemma43Row {
                object: a,
                n,
                pd,
                ext_vanishes,
            };
            let current = match pd.at_most(n) {
                None => Finding::Inconclusive {
                    reason: format!("relative dimension of member {a} undecided"),
                },
                Some(b) if b == ext_vanishes => Finding::holds_after(1),
                Some(b) => Finding::object(
                    a,
                    format!("n = {n}: dimension bound {b}, Ext^{} vanishing {ext_vanishes}", n + 1),
                ),
            };
            finding = finding.and(current);
            rows.push(row);
        }
    }
    Ok(Lemma43Report { rows, finding })
}
