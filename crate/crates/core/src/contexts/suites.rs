use crate::gorenstein::{relative_id, relative_pd, RelativeDimension, Which};
use crate::homcalc::Atlas;
use crate::subcat::{gen_cogen_check, Subcategory};

use super::ab::{context_idx, from_check, gorenstein_members, require, ContextKind};
use super::cotorsion::{cotorsion_idx, ext_vanishes_at, ext_vanishes_from};
use super::enumerate::{closure_idx, extensions, objects, sum_of, ClosureProperty};
use super::{set_equality, ContextBounds, ContextError, Finding, SuiteReport};

fn dims(atlas: &Atlas, x: &[usize], pd: bool) -> Result<Vec<RelativeDimension>, ContextError> {
    let xs = Subcategory::from_atlas(atlas, x);
    (0..atlas.len())
        .map(|a| {
            let (d, _) = if pd {
                relative_pd(atlas.rep(a), &xs, atlas)?
            } else {
                relative_id(atlas.rep(a), &xs, atlas)?
            };
            Ok(d)
        })
        .collect()
}

fn finite(d: &[RelativeDimension]) -> Vec<usize> {
    (0..d.len()).filter(|&a| matches!(d[a], RelativeDimension::Finite(_))).collect()
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.contains(x)).collect()
}

fn max_dim(a: RelativeDimension, b: RelativeDimension) -> RelativeDimension {
    use RelativeDimension::*;
    match (a, b) {
        (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
        (Infinite, _) | (_, Infinite) => Infinite,
        (Finite(x), Finite(y)) => Finite(x.max(y)),
    }
}

/// Dimension of a sum of two members equals the larger dimension.
fn additivity(atlas: &Atlas, x: &[usize], single: &[RelativeDimension]) -> Result<Finding, ContextError> {
    let xs = Subcategory::from_atlas(atlas, x);
    let mut checked = 0;
    for a in 0..atlas.len() {
        for b in a + 1..atlas.len() {
            let (d, _) = relative_pd(&sum_of(atlas, &[a, b]), &xs, atlas)?;
            let expected = max_dim(single[a], single[b]);
            if d != expected {
                return Ok(Finding::object(a, format!("sum with member {b} has dimension {d:?}, expected {expected:?}")));
            }
            checked += 1;
        }
    }
    Ok(Finding::holds_after(checked))
}

/// Least `n` with `Ext^{≥n+1}(A, T) = 0` for every test object, or with
/// only `Ext^{n+1}` vanishing when `single` is set.
fn vanishing_index(atlas: &Atlas, a: usize, tests: &[usize], single: bool) -> Option<usize> {
    (0..=atlas.len() + 1).find(|&n| {
        if single {
            ext_vanishes_at(atlas, &[a], n + 1, tests)
        } else {
            ext_vanishes_from(atlas, &[a], n + 1, tests)
        }
    })
}

/// Every equivalence in `rows` (one row of truth values per object) agrees.
fn all_equal(objects: &[usize], rows: impl Fn(usize) -> Vec<(&'static str, bool)>) -> Finding {
    for &a in objects {
        let r = rows(a);
        if r.iter().any(|(_, v)| *v != r[0].1) {
            let detail = r.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ");
            return Finding::object(a, detail);
        }
    }
    Finding::holds_after(objects.len())
}

/// The identities relating a hereditary cotorsion pair with enough
/// injectives, its kernel `C`, `rG(C)` and the relative dimensions, each
/// checked extensionally over the atlas.
pub fn prop45_46_suite(u: &Subcategory, v: &Subcategory, atlas: &Atlas, bounds: &ContextBounds) -> Result<SuiteReport, ContextError> {
    let (ui, vi) = (u.indices_in(atlas)?, v.indices_in(atlas)?);
    let report = cotorsion_idx(atlas, &ui, &vi, bounds)?;
    require(&report, true)?;
    let n = atlas.len();
    let mut c = report.kernel.clone();
    c.sort_unstable();
    let rg = gorenstein_members(atlas, &c, Which::RG)?;
    let upd = dims(atlas, &ui, true)?;
    let cpd = dims(atlas, &c, true)?;
    let rgpd = dims(atlas, &rg, true)?;
    let mut out = SuiteReport::default();

    if [&upd, &cpd, &rgpd].iter().any(|d| d.contains(&RelativeDimension::Inconclusive)) {
        out.push(
            "relative dimensions decided",
            Finding::Inconclusive {
                reason: "a relative dimension is undecided".into(),
            },
        );
        return Ok(out);
    }
    let (upd_fin, cpd_fin, rgpd_fin) = (finite(&upd), finite(&cpd), finite(&rgpd));

    out.push("U-pd is additive", additivity(atlas, &ui, &upd)?);
    out.push("C-pd is additive", additivity(atlas, &c, &cpd)?);
    out.push("rG(C)-pd is additive", additivity(atlas, &rg, &rgpd)?);

    let cs = Subcategory::from_atlas(atlas, &c);
    let cog = |x: &[usize]| -> Result<Finding, ContextError> {
        let r = gen_cogen_check(&cs, &Subcategory::from_atlas(atlas, x), atlas)?;
        Ok(from_check(&r.injective_cogenerator, x.len()))
    };
    out.push("C is an injective cogenerator for U", cog(&ui)?);
    out.push(
        "rG(C) ∩ U-pd<∞ = U",
        set_equality(&intersect(&rg, &upd_fin), &ui, n, "rG(C) ∩ U-pd<∞", "U"),
    );
    out.push(
        "C-pd<∞ = U-pd<∞ ∩ V",
        set_equality(&cpd_fin, &intersect(&upd_fin, &vi), n, "C-pd<∞", "U-pd<∞ ∩ V"),
    );
    out.push(
        "C-pd<∞ closed under extensions",
        closure_idx(atlas, &cpd_fin, ClosureProperty::Extensions, bounds)?,
    );
    out.push(
        "C-pd<∞ closed under cokernels of monomorphisms",
        closure_idx(atlas, &cpd_fin, ClosureProperty::CokerMono, bounds)?,
    );
    out.push(
        "C-pd<∞ closed under direct summands",
        closure_idx(atlas, &cpd_fin, ClosureProperty::Summands, bounds)?,
    );

    // The full context needs every object to have finite rG(C)-pd.
    let context = context_idx(ContextKind::WeakAB, atlas, &rg, &cpd_fin, &c, bounds)?;
    let pair_claim = if rgpd_fin.len() < n {
        let missing = (0..n).find(|a| !rgpd_fin.contains(a)).unwrap();
        Finding::HypothesisNotMet {
            reason: format!("member {missing} has infinite rG(C)-pd"),
        }
    } else if !context.holds() {
        Finding::HypothesisNotMet {
            reason: format!("weak context fails: {:?}", context.failing()),
        }
    } else {
        set_equality(&rg, &atlas.left_perp(&cpd_fin, false)?, n, "rG(C)", "^⊥₁(C-pd<∞)")
            .and(set_equality(&cpd_fin, &atlas.right_perp(&rg, false)?, n, "C-pd<∞", "rG(C)^⊥₁"))
    };
    out.push("(rG(C), C-pd<∞) is a cotorsion pair", pair_claim);

    out.push("C is an injective cogenerator for rG(C)", cog(&rg)?);
    out.push(
        "rG(C) ∩ C-pd<∞ = C",
        set_equality(&intersect(&rg, &cpd_fin), &c, n, "rG(C) ∩ C-pd<∞", "C"),
    );

    // Uniqueness: an injective cogenerator must lie in rG(C)^⊥.
    let mut candidates = intersect(&rg, &atlas.right_perp(&rg, true)?);
    candidates.sort_unstable();
    let uniqueness = if candidates.len() > 12 {
        Finding::Inconclusive {
            reason: format!("{} candidate members", candidates.len()),
        }
    } else {
        let rgs = Subcategory::from_atlas(atlas, &rg);
        let mut f = Finding::holds_after(0);
        for mask in 1u32..(1 << candidates.len()) {
            let e: Vec<usize> = (0..candidates.len())
                .filter(|k| mask & (1 << k) != 0)
                .map(|k| candidates[k])
                .collect();
            let r = gen_cogen_check(&Subcategory::from_atlas(atlas, &e), &rgs, atlas)?;
            let step = if r.injective_cogenerator.holds() && e != c {
                let odd = e.iter().chain(&c).copied().find(|x| !(e.contains(x) && c.contains(x))).unwrap();
                Finding::object(odd, format!("{e:?} is an injective cogenerator other than C"))
            } else {
                Finding::holds_after(1)
            };
            f = f.and(step);
        }
        f
    };
    out.push("C is the unique injective cogenerator for rG(C)", uniqueness);

    let perp_cpd = atlas.left_perp(&cpd_fin, true)?;
    let perp1_cpd = atlas.left_perp(&cpd_fin, false)?;
    let perp_c = atlas.left_perp(&c, true)?;
    out.push(
        "on rG(C)-pd<∞: rG(C) = ^⊥(C-pd<∞) = ^⊥₁(C-pd<∞) = ^⊥C",
        all_equal(&rgpd_fin, |a| {
            vec![
                ("rG", rg.contains(&a)),
                ("perp", perp_cpd.contains(&a)),
                ("perp1", perp1_cpd.contains(&a)),
                ("perpC", perp_c.contains(&a)),
            ]
        }),
    );

    let rg_perp = atlas.right_perp(&rg, true)?;
    let rg_perp1 = atlas.right_perp(&rg, false)?;
    let c_perp = atlas.right_perp(&c, true)?;
    let rgid = dims(atlas, &rg, false)?;
    let rows = |a: usize, last: (&'static str, bool)| {
        vec![
            ("Cpd", cpd_fin.contains(&a)),
            ("perp", rg_perp.contains(&a)),
            ("perp1", rg_perp1.contains(&a)),
            last,
        ]
    };
    out.push(
        "on rG(C)-pd<∞: C-pd<∞ = rG(C)^⊥ = rG(C)^⊥₁ = C^⊥",
        all_equal(&rgpd_fin, |a| rows(a, ("perpC", c_perp.contains(&a)))),
    );
    out.observe(
        "on rG(C)-pd<∞: C-pd<∞ = rG(C)-id<∞ ∩ C^⊥",
        if rgid.contains(&RelativeDimension::Inconclusive) {
            Finding::Inconclusive {
                reason: "an rG(C)-injective dimension is undecided".into(),
            }
        } else {
            all_equal(&rgpd_fin, |a| {
                rows(a, ("id", matches!(rgid[a], RelativeDimension::Finite(_)) && c_perp.contains(&a)))
            })
        },
    );

    let mut index = Finding::holds_after(0);
    let mut single = Finding::holds_after(0);
    for &a in &rgpd_fin {
        let d = Some(rgpd[a]);
        let by_c = vanishing_index(atlas, a, &c, false).map(RelativeDimension::Finite);
        let by_w = vanishing_index(atlas, a, &cpd_fin, false).map(RelativeDimension::Finite);
        index = index.and(if by_c == d && by_w == d {
            Finding::holds_after(1)
        } else {
            Finding::object(a, format!("rG(C)-pd {d:?}, index over C {by_c:?}, over C-pd<∞ {by_w:?}"))
        });
        let one_c = vanishing_index(atlas, a, &c, true).map(RelativeDimension::Finite);
        let one_w = vanishing_index(atlas, a, &cpd_fin, true).map(RelativeDimension::Finite);
        single = single.and(if one_c == d && one_w == d {
            Finding::holds_after(1)
        } else {
            Finding::object(a, format!("rG(C)-pd {d:?}, single-degree index over C {one_c:?}, over C-pd<∞ {one_w:?}"))
        });
    }
    out.push("rG(C)-pd is the Ext vanishing index", index);
    out.observe("rG(C)-pd is the single-degree Ext vanishing index", single);

    let mut same = Finding::holds_after(0);
    for &a in &cpd_fin {
        same = same.and(if rgpd[a] == cpd[a] {
            Finding::holds_after(1)
        } else {
            Finding::object(a, format!("rG(C)-pd {:?}, C-pd {:?}", rgpd[a], cpd[a]))
        });
    }
    out.push("rG(C)-pd = C-pd on C-pd<∞", same);

    out.push("two out of three for finite rG(C)-pd", two_of_three(atlas, &rgpd_fin, bounds)?);
    Ok(out)
}

/// Over every extension between indecomposables, never exactly two of the
/// three terms lie in the class.
fn two_of_three(atlas: &Atlas, class: &[usize], bounds: &ContextBounds) -> Result<Finding, ContextError> {
    let all: Vec<usize> = (0..atlas.len()).collect();
    let ends = objects(atlas, &all, 1);
    let mut failure = None;
    let inside = |m: &crate::rep::Rep| -> Result<bool, ContextError> { Ok(atlas.locate(m)?.iter().all(|s| class.contains(s))) };
    let sweep = extensions(&ends, &ends, bounds.hom_budget, |ses| {
        let t = [inside(ses.left())?, inside(ses.middle())?, inside(ses.right())?];
        if t.iter().filter(|b| **b).count() == 2 {
            let term = ["left", "middle", "right"][t.iter().position(|b| !b).unwrap()];
            let summands = atlas.locate(match term {
                "left" => ses.left(),
                "middle" => ses.middle(),
                _ => ses.right(),
            })?;
            failure = Some(super::Counterexample::Sequence {
                seq: super::SeqWitness::new(atlas, ses)?,
                term: term.into(),
                outside: summands.into_iter().filter(|s| !class.contains(s)).collect(),
            });
        }
        Ok(failure.is_some())
    })?;
    Ok(super::enumerate::sweep_finding(&sweep, failure))
}
