use serde::{Deserialize, Serialize};

use crate::homcalc::{ext_space, realize_ext1, ses_check, Atlas, ShortExactSeq};
use crate::rep::{hom_space, morphism_parts, HomSpace, Rep};
use crate::subcat::Subcategory;

use super::{ContextBounds, ContextError, Counterexample, Finding, SeqWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureProperty {
    Extensions,
    KerEpi,
    CokerMono,
    Summands,
}

/// A direct sum of atlas members, with its summands (sorted).
#[derive(Clone, Debug)]
pub(crate) struct Obj {
    pub summands: Vec<usize>,
    pub rep: Rep,
}

pub(crate) fn sum_of(atlas: &Atlas, summands: &[usize]) -> Rep {
    let parts: Vec<Rep> = summands.iter().map(|&i| atlas.rep(i).clone()).collect();
    Rep::direct_sum(atlas.algebra(), &parts).object
}

/// All nonzero objects with at most `mult` summands from `members`.
pub(crate) fn objects(atlas: &Atlas, members: &[usize], mult: usize) -> Vec<Obj> {
    let mut members = members.to_vec();
    members.sort_unstable();
    members.dedup();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = members.iter().map(|&m| vec![m]).collect();
    stack.reverse();
    while let Some(s) = stack.pop() {
        out.push(Obj {
            rep: sum_of(atlas, &s),
            summands: s.clone(),
        });
        if s.len() < mult {
            let last = *s.last().unwrap();
            for &m in members.iter().rev().filter(|&&m| m >= last) {
                let mut t = s.clone();
                t.push(m);
                stack.push(t);
            }
        }
    }
    out.sort_by(|a, b| (a.summands.len(), &a.summands).cmp(&(b.summands.len(), &b.summands)));
    out
}

/// How an enumeration ended.
#[derive(Clone, Debug, Default)]
pub(crate) struct Sweep {
    pub visited: usize,
    /// A Hom or Ext space was too large to list.
    pub truncated: Option<String>,
}

/// Realizes every class of `Ext^1(N, L)` for `L` in `lefts`, `N` in
/// `rights`, including the split class. `visit` returns true to stop.
pub(crate) fn extensions<F>(lefts: &[Obj], rights: &[Obj], budget: u128, mut visit: F) -> Result<Sweep, ContextError>
where
    F: FnMut(&ShortExactSeq) -> Result<bool, ContextError>,
{
    let mut sweep = Sweep::default();
    for n in rights {
        for l in lefts {
            let ext = ext_space(&n.rep, &l.rep, 1)?;
            let Some(classes) = ext.classes(budget) else {
                sweep.truncated = Some(format!("Ext^1 of dimension {} exceeds the budget", ext.dim()));
                continue;
            };
            for c in classes {
                let ses = realize_ext1(&ext, &ext.element(&c))?;
                sweep.visited += 1;
                if visit(&ses)? {
                    return Ok(sweep);
                }
            }
        }
    }
    Ok(sweep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum MapKind {
    Any,
    Epi,
    Mono,
}

fn dims_allow(kind: MapKind, s: &Rep, t: &Rep) -> bool {
    let (a, b) = (s.dims(), t.dims());
    match kind {
        MapKind::Any => true,
        MapKind::Epi => a.iter().zip(b).all(|(x, y)| x >= y) && !t.is_zero(),
        MapKind::Mono => a.iter().zip(b).all(|(x, y)| x <= y) && !s.is_zero(),
    }
}

/// Every nonzero map of the given kind between the listed objects, handed
/// over as the sequence `0 -> ker -> source -> target -> coker -> 0` split
/// into its short exact pieces where they exist: for epis the sequence
/// `ker -> source -> target`, for monos `source -> target -> coker`; for
/// arbitrary maps the visitor gets the map itself.
pub(crate) fn maps<F>(sources: &[Obj], targets: &[Obj], kind: MapKind, budget: u128, mut visit: F) -> Result<Sweep, ContextError>
where
    F: FnMut(&Obj, &Obj, &crate::rep::Morphism) -> Result<bool, ContextError>,
{
    let mut sweep = Sweep::default();
    for s in sources {
        for t in targets {
            if !dims_allow(kind, &s.rep, &t.rep) {
                continue;
            }
            let hs = hom_space(&s.rep, &t.rep)?;
            if hs.dim() == 0 {
                continue;
            }
            let Some(elements) = projective_points(&hs, budget) else {
                sweep.truncated = Some(format!(
                    "Hom({:?}, {:?}) of dimension {} exceeds the budget",
                    s.summands,
                    t.summands,
                    hs.dim()
                ));
                continue;
            };
            for f in elements {
                let ok = match kind {
                    MapKind::Any => !f.is_zero(),
                    MapKind::Epi => f.is_epi(),
                    MapKind::Mono => f.is_mono(),
                };
                if !ok {
                    continue;
                }
                sweep.visited += 1;
                if visit(s, t, &f)? {
                    return Ok(sweep);
                }
            }
        }
    }
    Ok(sweep)
}

/// One nonzero element per line of the Hom space (leading coefficient 1):
/// kernels, images and cokernels do not change under scaling.
fn projective_points(hs: &HomSpace, budget: u128) -> Option<Vec<crate::rep::Morphism>> {
    let p = hs.source().field().characteristic();
    let d = hs.dim();
    let count = (0..d).try_fold(1u128, |acc, _| acc.checked_mul(p as u128))?.saturating_sub(1) / (p as u128 - 1);
    if count > budget {
        return None;
    }
    let mut out = Vec::new();
    for lead in 0..d {
        let free = d - lead - 1;
        let mut tail = vec![0u32; free];
        loop {
            let mut c = vec![0u32; d];
            c[lead] = 1;
            c[lead + 1..].copy_from_slice(&tail);
            out.push(hs.element(&c));
            let mut i = 0;
            loop {
                if i == free {
                    break;
                }
                tail[i] += 1;
                if tail[i] < p {
                    break;
                }
                tail[i] = 0;
                i += 1;
            }
            if i == free {
                break;
            }
        }
    }
    Some(out)
}

/// `0 -> ker f -> S -> T -> 0` for an epi `f`.
pub(crate) fn kernel_sequence(f: &crate::rep::Morphism) -> Result<ShortExactSeq, ContextError> {
    let parts = morphism_parts(f);
    Ok(ses_check(&parts.kernel.inclusion, f)?)
}

/// `0 -> S -> T -> coker f -> 0` for a mono `f`.
pub(crate) fn cokernel_sequence(f: &crate::rep::Morphism) -> Result<ShortExactSeq, ContextError> {
    let parts = morphism_parts(f);
    Ok(ses_check(f, &parts.cokernel.projection)?)
}

pub(crate) fn outside(summands: &[usize], class: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = summands.iter().copied().filter(|s| !class.contains(s)).collect();
    out.dedup();
    out
}

/// Turns a sweep that found no violation into a finding.
pub(crate) fn sweep_finding(sweep: &Sweep, failure: Option<Counterexample>) -> Finding {
    match (failure, &sweep.truncated) {
        (Some(c), _) => Finding::fails(c),
        (None, Some(reason)) => Finding::Inconclusive { reason: reason.clone() },
        (None, None) => Finding::holds_after(sweep.visited),
    }
}

/// Checks that the term `which` of every sequence produced by `sweep` has
/// all summands in `class`.
pub(crate) fn term_check(
    atlas: &Atlas,
    class: &[usize],
    which: &str,
    ses: &ShortExactSeq,
) -> Result<Option<Counterexample>, ContextError> {
    let term = match which {
        "left" => ses.left(),
        "middle" => ses.middle(),
        _ => ses.right(),
    };
    let bad = outside(&atlas.locate(term)?, class);
    if bad.is_empty() {
        return Ok(None);
    }
    Ok(Some(Counterexample::Sequence {
        seq: SeqWitness::new(atlas, ses)?,
        term: which.to_string(),
        outside: bad,
    }))
}

/// Closure of `add X` under one operation, on atlas indices. Extensions run
/// over all classes between members; kernels and cokernels over every epi
/// or mono between objects with at most `bounds.mult` summands.
pub(crate) fn closure_idx(
    atlas: &Atlas,
    x: &[usize],
    property: ClosureProperty,
    bounds: &ContextBounds,
) -> Result<Finding, ContextError> {
    let mut failure = None;
    let sweep = match property {
        ClosureProperty::Summands => {
            return Ok(Finding::Vacuous {
                reason: "classes are additive closures of atlas members".into(),
            })
        }
        _ if (0..atlas.len()).all(|i| x.contains(&i)) => {
            return Ok(Finding::Vacuous {
                reason: "the class contains every indecomposable".into(),
            })
        }
        ClosureProperty::Extensions => {
            let ends = objects(atlas, x, 1);
            extensions(&ends, &ends, bounds.hom_budget, |ses| {
                failure = term_check(atlas, x, "middle", ses)?;
                Ok(failure.is_some())
            })?
        }
        ClosureProperty::KerEpi | ClosureProperty::CokerMono => {
            let objs = objects(atlas, x, bounds.mult);
            let epi = property == ClosureProperty::KerEpi;
            let kind = if epi { MapKind::Epi } else { MapKind::Mono };
            maps(&objs, &objs, kind, bounds.hom_budget, |_, _, f| {
                failure = if epi {
                    term_check(atlas, x, "left", &kernel_sequence(f)?)?
                } else {
                    term_check(atlas, x, "right", &cokernel_sequence(f)?)?
                };
                Ok(failure.is_some())
            })?
        }
    };
    Ok(sweep_finding(&sweep, failure))
}

pub fn closure_check(
    x: &Subcategory,
    atlas: &Atlas,
    property: ClosureProperty,
    bounds: &ContextBounds,
) -> Result<Finding, ContextError> {
    if !atlas.is_complete() {
        return Err(crate::homcalc::HomcalcError::IncompleteAtlas.into());
    }
    closure_idx(atlas, &x.indices_in(atlas)?, property, bounds)
}
