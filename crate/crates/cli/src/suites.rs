//! Built-in regression suites. They read only bundled files and never touch
//! the cache.

use std::time::Instant;

use relgor::cert::CertBuilder;
use relgor::contexts::{
    cotorsion_check, lemma43_check, prop45_46_suite, section3_suite, thm412_verify, thm48_verify, ContextBounds, ContextError,
    SuiteReport,
};
use relgor::gorenstein::{Decider, ExhaustiveBounds, Membership, Mode, Status as Gs, Which};
use relgor::homcalc::{ar_translate, enumerate_indecomposables, ext_dim, ext_space, realize_ext1, Atlas, Direction, Method};
use relgor::rep::{hom_space, morphism_parts, Morphism, Rep};
use relgor::subcat::{is_self_orthogonal, Subcategory};
use serde_json::json;

use crate::args::{Global, SuiteArg};
use crate::commands::{class_name, names};
use crate::input::{load_algebra, load_subcat};
use crate::report::{Report, Status};
use crate::{millis, CliError};

struct Bundled {
    name: &'static str,
    atlas: Atlas,
    hash: String,
}

fn bundled(name: &'static str, p: u32, report: &mut Report) -> Result<Bundled, CliError> {
    let loaded = load_algebra(&format!("builtin:{name}"), Some(p))?;
    let atlas = enumerate_indecomposables(&loaded.algebra, &Method::default())?;
    let hash = report.algebra(&loaded.algebra);
    Ok(Bundled { name, atlas, hash })
}

const HEREDITARY: [&str; 3] = ["A2", "A3", "D4"];
const FINITE: [&str; 4] = ["A2", "A3", "D4", "A3/rad2"];

pub(crate) fn run(suite: SuiteArg, global: &Global, report: &mut Report) -> Result<(), CliError> {
    let primes = global.p.map_or(vec![2, 3], |p| vec![p]);
    let bounds = ContextBounds {
        mult: global.mult_bound,
        ..ContextBounds::default()
    };
    let ex = ExhaustiveBounds {
        mult: global.mult_bound,
        depth: global.depth_bound,
    };
    let t = Instant::now();
    for p in primes {
        match suite {
            SuiteArg::Example35 => example35(p, &ex, report)?,
            SuiteArg::Example32 => example32(p, &ex, report)?,
            SuiteArg::Section3 => section3(p, &bounds, report)?,
            SuiteArg::Section4 => section4(p, &bounds, report)?,
        }
    }
    report.timings.insert("suite".into(), millis(t));
    Ok(())
}

fn idx(atlas: &Atlas, name: &str) -> Result<usize, CliError> {
    atlas
        .index_of_name(name)
        .ok_or_else(|| CliError::Engine(format!("the atlas has no member {name}")))
}

fn gfp_with_check(dec: &Decider, which: Which, ex: &ExhaustiveBounds) -> Result<(Membership, Membership), CliError> {
    Ok((dec.membership(which, Mode::Gfp)?, dec.membership_with(which, Mode::Exhaustive, ex)?))
}

/// Verdicts agree wherever both are conclusive.
fn agree(a: &Membership, b: &Membership) -> bool {
    a.verdicts
        .iter()
        .zip(&b.verdicts)
        .all(|(x, y)| x.status == y.status || x.status == Gs::Inconclusive || y.status == Gs::Inconclusive)
}

fn ses_certificate(f: &Morphism, g: &Morphism) -> relgor::cert::Certificate {
    let mut b = CertBuilder::new();
    b.short_exact(f, g);
    b.finish()
}

fn first_map(s: &Rep, t: &Rep, pick: impl Fn(&Morphism) -> bool) -> Result<Option<Morphism>, CliError> {
    let elements = hom_space(s, t)?
        .elements(1 << 12)
        .ok_or_else(|| CliError::Engine("Hom space too large to list".into()))?;
    Ok(elements.into_iter().find(|f| pick(f)))
}

fn example35(p: u32, ex: &ExhaustiveBounds, report: &mut Report) -> Result<(), CliError> {
    let b = bundled("A3", p, report)?;
    let (atlas, h) = (&b.atlas, b.hash.as_str());
    let tag = format!("A3 over F{p}");
    let mut warnings = Vec::new();
    let c1 = load_subcat("builtin:A3/C1", atlas, &mut warnings)?;
    let c2 = load_subcat("builtin:A3/C2", atlas, &mut warnings)?;
    report.warnings.extend(warnings);

    let expected: [(&str, [usize; 3]); 6] = [
        ("S(1)", [1, 0, 0]),
        ("S(2)", [0, 1, 0]),
        ("S(3)", [0, 0, 1]),
        ("P(2)", [1, 1, 0]),
        ("I(2)", [0, 1, 1]),
        ("P(3)", [1, 1, 1]),
    ];
    let listed = atlas.len() == 6
        && atlas.is_complete()
        && expected
            .iter()
            .all(|(n, d)| atlas.index_of_name(n).is_some_and(|i| atlas.rep(i).dims() == d));
    let members: Vec<_> = atlas.members().iter().map(|m| json!({ "name": m.name, "dims": m.rep.dims() })).collect();
    report.push(
        h,
        format!("{tag}: exactly 6 indecomposables S(1), S(2), S(3), P(2), I(2), P(3)"),
        Status::of_bool(listed),
        json!({ "members": members }),
        vec![],
    );

    let mut meshes = Vec::new();
    let mut ok = true;
    for (end, start) in [("S(2)", "S(1)"), ("I(2)", "P(2)"), ("S(3)", "S(2)")] {
        let got = atlas.tau(idx(atlas, end)?);
        ok &= got == Some(idx(atlas, start)?);
        meshes.push(json!({ "end": end, "tau": got.map(|i| atlas.name(i)) }));
    }
    ok &= atlas.projectives().iter().all(|&i| atlas.tau(i).is_none());
    report.push(
        h,
        format!("{tag}: AR translates τS(2) = S(1), τI(2) = P(2), τS(3) = S(2); projectives have none"),
        Status::of_bool(ok),
        json!({ "translates": meshes }),
        vec![],
    );

    let (s1, s2, s3) = (atlas.rep(idx(atlas, "S(1)")?), atlas.rep(idx(atlas, "S(2)")?), atlas.rep(idx(atlas, "S(3)")?));
    let direct = ext_dim(s3, s1, 1)?;
    report.push(
        h,
        format!("{tag}: dim Ext^1(S(3), S(1)) = 0 from a projective resolution"),
        Status::of_bool(direct == 0),
        json!({ "dimension": direct }),
        vec![],
    );
    let tau_s3 = ar_translate(s3, Direction::Tau)?;
    let tau_is_s2 = match &tau_s3 {
        Some(t) => atlas.index_of(t)? == Some(idx(atlas, "S(2)")?),
        None => false,
    };
    let via_tau = match &tau_s3 {
        Some(t) => hom_space(s1, t)?.dim(),
        None => 0,
    };
    report.push(
        h,
        format!("{tag}: τS(3) ≅ S(2) and dim Hom(S(1), τS(3)) = 0"),
        Status::of_bool(tau_is_s2 && via_tau == 0),
        json!({ "tau_is_S(2)": tau_is_s2, "dimension": via_tau }),
        vec![],
    );

    let c2s = Subcategory::from_atlas(atlas, &c2);
    let orth = is_self_orthogonal(&c2s, atlas, None)?;
    report.push(
        h,
        format!("{tag}: {} ⊥ itself", class_name(atlas, &c2)),
        Status::of_bool(orth.holds()),
        json!({ "holds": orth.holds() }),
        vec![],
    );

    let mut gs = Vec::new();
    for c in [&c1, &c2] {
        let dec = Decider::new(atlas, &Subcategory::from_atlas(atlas, c))?;
        let (g, e) = gfp_with_check(&dec, Which::G, ex)?;
        let mut certs = Vec::new();
        for x in atlas.all() {
            if g.status(x) != Gs::Inconclusive {
                certs.push(report.certificate(h, dec.certificate(&g, x)?));
            }
        }
        let ok = g.is_conclusive() && g.members() == *c && agree(&g, &e);
        let cname = class_name(atlas, c);
        report.push(
            h,
            format!("{tag}: G({cname}) = {cname}"),
            Status::of_bool(ok),
            json!({
                "gfp": names(atlas, &g.members()),
                "exhaustive": names(atlas, &e.members()),
                "exhaustive_inconclusive": names(atlas, &e.with_status(Gs::Inconclusive)),
                "verdicts": g.verdicts,
            }),
            certs,
        );
        report.mode("gfp, cross-checked by exhaustive");
        gs.push((c.clone(), g.members()));
    }

    let (p2, p3, i2) = (idx(atlas, "P(2)")?, idx(atlas, "P(3)")?, idx(atlas, "I(2)")?);
    let (s1i, s2i, s3i) = (idx(atlas, "S(1)")?, idx(atlas, "S(2)")?, idx(atlas, "S(3)")?);

    // 0 → S(1) → P(2) → S(2) → 0, realized from a nonzero Ext class.
    let ext = ext_space(s2, s1, 1)?;
    let class = ext
        .classes(1 << 8)
        .unwrap_or_default()
        .into_iter()
        .find(|c| c.iter().any(|&x| x != 0));
    let (g1, c1name) = (&gs[0].1, class_name(atlas, &gs[0].0));
    match class {
        Some(class) => {
            let ses = realize_ext1(&ext, &ext.element(&class))?;
            let middle = atlas.locate(ses.middle())?;
            let ok = middle == [p2] && g1.contains(&s1i) && g1.contains(&s2i) && !g1.contains(&p2);
            let id = report.certificate(h, ses_certificate(&ses.f, &ses.g));
            report.push(
                h,
                format!("{tag}: 0 → S(1) → P(2) → S(2) → 0 has end terms in G({c1name}) and middle term P(2) outside, so G(C) is not closed under extensions"),
                Status::of_bool(ok),
                json!({ "middle": names(atlas, &middle) }),
                vec![id],
            );
        }
        None => report.push(
            h,
            format!("{tag}: Ext^1(S(2), S(1)) ≠ 0"),
            Status::Negative,
            json!(null),
            vec![],
        ),
    }

    let (p3r, s3r, s1r) = (atlas.rep(p3), s3, s1);
    let epi = first_map(p3r, s3r, Morphism::is_epi)?;
    let mono = first_map(s1r, p3r, Morphism::is_mono)?;
    for (c, g) in &gs {
        let cname = class_name(atlas, c);
        match &epi {
            Some(epi) => {
                let parts = morphism_parts(epi);
                let kernel = atlas.locate(&parts.kernel.object)?;
                let ok = kernel == [p2] && g.contains(&p3) && g.contains(&s3i) && !g.contains(&p2);
                let id = report.certificate(h, ses_certificate(&parts.kernel.inclusion, epi));
                report.push(
                    h,
                    format!("{tag}: the kernel of P(3) ↠ S(3) is P(2) ∉ G({cname}), so G(C) is not closed under kernels of epimorphisms"),
                    Status::of_bool(ok),
                    json!({ "kernel": names(atlas, &kernel) }),
                    vec![id],
                );
            }
            None => report.push(h, format!("{tag}: an epimorphism P(3) ↠ S(3) exists"), Status::Negative, json!(null), vec![]),
        }
        match &mono {
            Some(mono) => {
                let parts = morphism_parts(mono);
                let cokernel = atlas.locate(&parts.cokernel.object)?;
                let ok = cokernel == [i2] && g.contains(&s1i) && g.contains(&p3) && !g.contains(&i2);
                let id = report.certificate(h, ses_certificate(mono, &parts.cokernel.projection));
                report.push(
                    h,
                    format!("{tag}: the cokernel of S(1) ↪ P(3) is I(2) ∉ G({cname}), so G(C) is not closed under cokernels of monomorphisms"),
                    Status::of_bool(ok),
                    json!({ "cokernel": names(atlas, &cokernel) }),
                    vec![id],
                );
            }
            None => report.push(h, format!("{tag}: a monomorphism S(1) ↪ P(3) exists"), Status::Negative, json!(null), vec![]),
        }
    }
    Ok(())
}

fn example32(p: u32, ex: &ExhaustiveBounds, report: &mut Report) -> Result<(), CliError> {
    for name in HEREDITARY {
        let b = bundled(name, p, report)?;
        let atlas = &b.atlas;
        let tag = format!("{} over F{p}", b.name);
        let (proj, inj, all) = (atlas.projectives(), atlas.injectives(), atlas.all());
        let cases = [
            ("rG(proj) = proj", &proj, Which::RG, &proj),
            ("lG(proj) = all", &proj, Which::LG, &all),
            ("rG(inj) = all", &inj, Which::RG, &all),
            ("lG(inj) = inj", &inj, Which::LG, &inj),
        ];
        for (label, c, which, expected) in cases {
            let dec = Decider::new(atlas, &Subcategory::from_atlas(atlas, c))?;
            let (g, e) = gfp_with_check(&dec, which, ex)?;
            let ok = g.is_conclusive() && e.is_conclusive() && g.members() == *expected && e.members() == *expected;
            report.push(
                &b.hash,
                format!("{tag}: {label}"),
                Status::of_bool(ok),
                json!({
                    "subcategory": names(atlas, c),
                    "gfp": names(atlas, &g.members()),
                    "exhaustive": names(atlas, &e.members()),
                    "expected": names(atlas, expected),
                }),
                vec![],
            );
            report.mode("gfp and exhaustive");
        }
    }
    Ok(())
}

fn push_suite(report: &mut Report, hash: &str, tag: &str, suite: &SuiteReport) {
    for e in &suite.entries {
        report.push_finding(hash, format!("{tag}: {}", e.name), &e.finding);
    }
    for e in &suite.observations {
        report.push_finding(hash, format!("{tag}: literal reading: {}", e.name), &e.finding);
        if let Some(v) = report.verdicts.last_mut() {
            v.status = Status::Observation;
        }
    }
}

/// A suite that could not run because a precondition stayed undecided.
fn undecided(report: &mut Report, hash: &str, tag: &str, e: ContextError) -> Result<(), CliError> {
    match e {
        ContextError::Precondition(why) => {
            report.push(hash, format!("{tag}: preconditions decided"), Status::Inconclusive, json!({ "reason": why }), vec![]);
            Ok(())
        }
        e => Err(e.into()),
    }
}

fn section3(p: u32, bounds: &ContextBounds, report: &mut Report) -> Result<(), CliError> {
    for name in FINITE {
        let b = bundled(name, p, report)?;
        let atlas = &b.atlas;
        let mut classes = vec![atlas.projectives(), atlas.injectives()];
        if name == "A3" {
            let mut w = Vec::new();
            classes.insert(0, load_subcat("builtin:A3/C2", atlas, &mut w)?);
            classes.insert(0, load_subcat("builtin:A3/C1", atlas, &mut w)?);
            report.warnings.extend(w);
        }
        for c in classes {
            let tag = format!("{} over F{p}, C = {}", b.name, class_name(atlas, &c));
            match section3_suite(&Subcategory::from_atlas(atlas, &c), atlas, bounds) {
                Ok(s) => push_suite(report, &b.hash, &tag, &s),
                Err(e) => undecided(report, &b.hash, &tag, e)?,
            }
        }
    }
    Ok(())
}

fn section4(p: u32, bounds: &ContextBounds, report: &mut Report) -> Result<(), CliError> {
    for name in FINITE {
        let b = bundled(name, p, report)?;
        let atlas = &b.atlas;
        let h = b.hash.as_str();
        let dual = atlas.dual()?;
        for (u, v) in [(atlas.projectives(), atlas.all()), (atlas.all(), atlas.injectives())] {
            let tag = format!("{} over F{p}, (U, V) = ({}, {})", b.name, class_name(atlas, &u), class_name(atlas, &v));
            let (us, vs) = (Subcategory::from_atlas(atlas, &u), Subcategory::from_atlas(atlas, &v));
            let r = cotorsion_check(&us, &vs, atlas, bounds)?;
            report.push_finding(h, format!("{tag}: cotorsion pair"), &r.pair);
            report.push_finding(h, format!("{tag}: Ext^{{≥1}}(U, V) = 0"), &r.hereditary.orthogonal);
            report.push_finding(h, format!("{tag}: U resolving"), &r.hereditary.u_resolving);
            report.push_finding(h, format!("{tag}: V coresolving"), &r.hereditary.v_coresolving);
            report.push(
                h,
                format!("{tag}: enough injectives"),
                Status::of_bool(r.has_enough_injectives()),
                json!(r.enough_injectives),
                vec![],
            );
            match thm48_verify(&us, &vs, atlas, bounds) {
                Ok(ab) => {
                    report.push(
                        h,
                        format!(
                            "{tag}: (rG(C), C-pd<∞, C) is a weak AB context for C = {}",
                            class_name(atlas, &r.kernel)
                        ),
                        Status::of_bool(ab.holds()),
                        json!(ab),
                        vec![],
                    );
                    let co = thm412_verify(&us, &vs, atlas, bounds)?;
                    let via_dual = thm48_verify(
                        &Subcategory::from_atlas(&dual, &v),
                        &Subcategory::from_atlas(&dual, &u),
                        &dual,
                        bounds,
                    )?;
                    report.push(
                        h,
                        format!("{tag}: the co-AB context agrees with the AB context of the opposite algebra"),
                        Status::of_bool(co.summary() == via_dual.summary().dualize()),
                        json!({ "direct": co.summary(), "via_opposite": via_dual.summary().dualize() }),
                        vec![],
                    );
                }
                Err(e) => undecided(report, h, &tag, e)?,
            }
            let l = lemma43_check(&us, &vs, atlas, 3)?;
            report.push_finding(h, format!("{tag}: U-pd A ≤ n ⇔ Ext^{{n+1}}(A, V) = 0 for n ≤ 3"), &l.finding);
            match prop45_46_suite(&us, &vs, atlas, bounds) {
                Ok(s) => push_suite(report, h, &tag, &s),
                Err(e) => undecided(report, h, &tag, e)?,
            }
        }
    }
    Ok(())
}
