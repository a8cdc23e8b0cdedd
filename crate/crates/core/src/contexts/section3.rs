use std::cell::RefCell;
use std::collections::HashMap;

use crate::cert::recheck;
use crate::gorenstein::{Decider, Mode, Which};
use crate::homcalc::{hom_exactness, Atlas, HomSide, ShortExactSeq};
use crate::rep::{morphism_parts, Rep};
use crate::subcat::{is_self_orthogonal, minimal_approximation, Side, Subcategory};

use super::enumerate::{closure_idx, cokernel_sequence, kernel_sequence, maps, objects, outside, sweep_finding, ClosureProperty, MapKind};
use super::{set_equality, ContextBounds, ContextError, Counterexample, Finding, SeqWitness, SuiteReport};

struct Ctx<'a> {
    atlas: &'a Atlas,
    c: Vec<usize>,
    c_reps: Vec<Rep>,
    rg: Vec<usize>,
    rg_sub: Subcategory,
    bounds: ContextBounds,
    /// `left_half` verdicts by summands.
    halves: RefCell<HashMap<Vec<usize>, bool>>,
}

impl Ctx<'_> {
    fn hom_exact(&self, ses: &ShortExactSeq) -> Result<bool, ContextError> {
        for t in &self.c_reps {
            if !hom_exactness(ses, t, HomSide::Into)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn in_rg(&self, m: &Rep) -> Result<bool, ContextError> {
        if self.rg.len() == self.atlas.len() {
            return Ok(true);
        }
        Ok(outside(&self.atlas.locate(m)?, &self.rg).is_empty())
    }

    fn ext1_into_c_vanishes(&self, m: &Rep) -> Result<bool, ContextError> {
        let s = self.atlas.locate(m)?;
        Ok(s.iter().all(|&y| self.c.iter().all(|&t| self.atlas.ext1_dim(y, t) == 0)))
    }

    /// A `Hom(-, C)`-exact resolution of `m` by `rG(C)`-objects, built from
    /// minimal right approximations until the kernels vanish or repeat.
    fn left_half(&self, m: &Rep) -> Result<bool, ContextError> {
        let key = self.atlas.locate(m)?;
        if let Some(&known) = self.halves.borrow().get(&key) {
            return Ok(known);
        }
        let out = self.left_half_uncached(m)?;
        self.halves.borrow_mut().insert(key, out);
        Ok(out)
    }

    fn left_half_uncached(&self, m: &Rep) -> Result<bool, ContextError> {
        let mut cur = m.clone();
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for _ in 0..=self.atlas.len() + 1 {
            if cur.is_zero() {
                return Ok(true);
            }
            let support = self.atlas.locate(&cur)?;
            if seen.contains(&support) {
                return Ok(true);
            }
            seen.push(support);
            let ap = minimal_approximation(&cur, &self.rg_sub, Side::Right)?;
            if !ap.epi {
                return Ok(false);
            }
            let ses = ShortExactSeq {
                f: ap.kernel.inclusion.clone(),
                g: ap.map.clone(),
            };
            if !self.hom_exact(&ses)? {
                return Ok(false);
            }
            cur = ap.kernel.object.clone();
        }
        Ok(false)
    }

    fn seq_failure(&self, ses: &ShortExactSeq, term: &str) -> Result<Counterexample, ContextError> {
        let m = match term {
            "left" => ses.left(),
            "middle" => ses.middle(),
            _ => ses.right(),
        };
        Ok(Counterexample::Sequence {
            seq: SeqWitness::new(self.atlas, ses)?,
            term: term.into(),
            outside: outside(&self.atlas.locate(m)?, &self.rg),
        })
    }
}

/// The closure properties of `rG(C)` and, when `C` is self-orthogonal, the
/// characterizations through cogenerator sequences and `Hom(-, C)`-exact
/// complexes, each checked by enumeration.
pub fn section3_suite(c: &Subcategory, atlas: &Atlas, bounds: &ContextBounds) -> Result<SuiteReport, ContextError> {
    let dec = Decider::new(atlas, c)?;
    let rgm = dec.membership(Which::RG, Mode::Gfp)?;
    if !rgm.is_conclusive() {
        return Err(ContextError::Precondition("rG(C) membership is inconclusive".into()));
    }
    let rg = rgm.members();
    let mut out = SuiteReport::default();
    out.push(
        "rG(C) closed under extensions",
        closure_idx(atlas, &rg, ClosureProperty::Extensions, bounds)?,
    );
    out.push(
        "rG(C) closed under kernels of epimorphisms",
        closure_idx(atlas, &rg, ClosureProperty::KerEpi, bounds)?,
    );
    out.push(
        "rG(C) closed under direct summands and finite sums",
        closure_idx(atlas, &rg, ClosureProperty::Summands, bounds)?,
    );

    let names = [
        "cogenerator sequence for every rG(C) member",
        "cogenerator sequences have rG(C) kernels",
        "cokernel in rG(C) iff Ext^1(-, C) = 0",
        "rG(C) members are images of Hom(-,C)-exact complexes",
        "images of Hom(-,C)-exact complexes lie in rG(C)",
        "Hom(-,C)-exact coresolutions by C and by rG(C)",
        "images of two-sided complexes lie in rG(C)",
    ];
    if !is_self_orthogonal(c, atlas, None)?.holds() {
        for n in names {
            out.push(
                n,
                Finding::HypothesisNotMet {
                    reason: "C is not self-orthogonal".into(),
                },
            );
        }
        return Ok(out);
    }

    let ctx = Ctx {
        atlas,
        c: dec.c_indices().to_vec(),
        c_reps: c.members().to_vec(),
        rg_sub: Subcategory::from_atlas(atlas, &rg),
        rg,
        bounds: *bounds,
        halves: RefCell::new(HashMap::new()),
    };
    out.push(names[0], cogenerator_sequences(&ctx, c)?);
    out.push(names[1], cogenerator_converse(&ctx)?);
    out.push(names[2], cokernels(&ctx)?);

    let mut certs = Finding::holds_after(0);
    for &x in &ctx.rg {
        let cert = dec.certificate(&rgm, x)?;
        certs = certs.and(match recheck(atlas.algebra(), &cert) {
            Ok(()) => Finding::holds_after(1),
            Err(e) => Finding::object(x, format!("certificate fails: {e}")),
        });
    }
    out.push(names[3], certs);
    out.push(names[4], complex_images(&ctx)?);
    out.push(names[5], coresolutions(&ctx, &dec)?);
    out.push(names[6], two_sided(&ctx)?);
    Ok(out)
}

/// Every member has `0 -> X -> C⁰ -> N -> 0` from its minimal left
/// approximation, exact, `Hom(-, C)`-exact, with `N` in `rG(C)`.
fn cogenerator_sequences(ctx: &Ctx, c: &Subcategory) -> Result<Finding, ContextError> {
    let mut f = Finding::holds_after(0);
    for &x in &ctx.rg {
        let ap = minimal_approximation(ctx.atlas.rep(x), c, Side::Left)?;
        let step = if !ap.mono {
            Finding::object(x, "left approximation is not mono")
        } else {
            let ses = cokernel_sequence(&ap.map)?;
            if !ctx.hom_exact(&ses)? {
                Finding::object(x, "sequence is not Hom(-, C)-exact")
            } else if !ctx.in_rg(ses.right())? {
                Finding::fails(ctx.seq_failure(&ses, "right")?)
            } else {
                Finding::holds_after(1)
            }
        };
        f = f.and(step);
    }
    Ok(f)
}

/// Epis from `C`-objects onto `rG(C)`-objects whose sequence is
/// `Hom(-, C)`-exact have their kernel in `rG(C)`.
fn cogenerator_converse(ctx: &Ctx) -> Result<Finding, ContextError> {
    let cs = objects(ctx.atlas, &ctx.c, ctx.bounds.mult);
    let gs = objects(ctx.atlas, &ctx.rg, ctx.bounds.mult);
    let mut failure = None;
    let sweep = maps(&cs, &gs, MapKind::Epi, ctx.bounds.hom_budget, |_, _, f| {
        let ses = kernel_sequence(f)?;
        if ctx.hom_exact(&ses)? && !ctx.in_rg(ses.left())? {
            failure = Some(ctx.seq_failure(&ses, "left")?);
        }
        Ok(failure.is_some())
    })?;
    Ok(sweep_finding(&sweep, failure))
}

/// For monos between `rG(C)`-objects, the cokernel lies in `rG(C)` exactly
/// when `Ext^1(-, C)` vanishes on it.
fn cokernels(ctx: &Ctx) -> Result<Finding, ContextError> {
    let gs = objects(ctx.atlas, &ctx.rg, ctx.bounds.mult);
    let mut failure = None;
    let sweep = maps(&gs, &gs, MapKind::Mono, ctx.bounds.hom_budget, |_, _, f| {
        let ses = cokernel_sequence(f)?;
        if ctx.in_rg(ses.right())? != ctx.ext1_into_c_vanishes(ses.right())? {
            failure = Some(ctx.seq_failure(&ses, "right")?);
        }
        Ok(failure.is_some())
    })?;
    Ok(sweep_finding(&sweep, failure))
}

/// `0 -> M -> G -> N -> 0` with `G, N` in `rG(C)` and `Hom(-, C)`-exact,
/// continued to the left by approximations and to the right by the
/// coresolution of `N`: the image `M` lies in `rG(C)`.
fn complex_images(ctx: &Ctx) -> Result<Finding, ContextError> {
    let gs = objects(ctx.atlas, &ctx.rg, ctx.bounds.mult);
    let mut failure = None;
    let sweep = maps(&gs, &gs, MapKind::Epi, ctx.bounds.hom_budget, |_, _, f| {
        let ses = kernel_sequence(f)?;
        if !ctx.in_rg(ses.left())? && ctx.hom_exact(&ses)? && ctx.left_half(ses.left())? {
            failure = Some(ctx.seq_failure(&ses, "left")?);
        }
        Ok(failure.is_some())
    })?;
    Ok(sweep_finding(&sweep, failure))
}

/// `^⊥C` members with a `Hom(-, C)`-exact coresolution by `D` are exactly
/// `rG(C)`, for `D = C` (via `cores`) and `D = rG(C)` (greatest fixed point
/// over minimal left `rG(C)`-approximations).
fn coresolutions(ctx: &Ctx, dec: &Decider) -> Result<Finding, ContextError> {
    let n = ctx.atlas.len();
    let perp = ctx.atlas.left_perp(&ctx.c, true)?;
    let cores = dec.membership(Which::Cores, Mode::Gfp)?;
    let by_c: Vec<usize> = cores.members().into_iter().filter(|x| perp.contains(x)).collect();
    let first = set_equality(&by_c, &ctx.rg, n, "^⊥C ∩ cores", "rG(C)");

    let mut steps = Vec::new();
    for x in 0..n {
        let ap = minimal_approximation(ctx.atlas.rep(x), &ctx.rg_sub, Side::Left)?;
        let step = if ap.mono {
            let ses = cokernel_sequence(&ap.map)?;
            if ctx.hom_exact(&ses)? {
                Some(ctx.atlas.locate(ses.right())?)
            } else {
                None
            }
        } else {
            None
        };
        steps.push(step);
    }
    let mut alive: Vec<usize> = perp.iter().copied().filter(|&x| steps[x].is_some()).collect();
    loop {
        let next: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&x| steps[x].as_ref().unwrap().iter().all(|s| alive.contains(s)))
            .collect();
        if next == alive {
            break;
        }
        alive = next;
    }
    Ok(first.and(set_equality(&alive, &ctx.rg, n, "^⊥C with an rG(C)-coresolution", "rG(C)")))
}

/// Images of maps `G₀ -> G⁰` between `rG(C)`-objects whose two halves are
/// `Hom(-, C)`-exact, with the cokernel in `rG(C)` and a left half for the
/// kernel, lie in `rG(C)`; every member is the image of its identity.
fn two_sided(ctx: &Ctx) -> Result<Finding, ContextError> {
    let gs = objects(ctx.atlas, &ctx.rg, ctx.bounds.mult);
    let mut failure = None;
    let sweep = maps(&gs, &gs, MapKind::Any, ctx.bounds.hom_budget, |_, _, f| {
        let parts = morphism_parts(f);
        if ctx.in_rg(&parts.image)? {
            return Ok(false);
        }
        let left = kernel_sequence(&parts.coimage)?;
        let right = cokernel_sequence(&parts.image_inclusion)?;
        if ctx.in_rg(right.right())? && ctx.hom_exact(&left)? && ctx.hom_exact(&right)? && ctx.left_half(left.left())? {
            failure = Some(ctx.seq_failure(&right, "left")?);
        }
        Ok(failure.is_some())
    })?;
    let f = sweep_finding(&sweep, failure);
    Ok(f.and(Finding::holds_after(ctx.rg.len())))
}
