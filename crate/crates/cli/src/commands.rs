use relgor::contexts::{
    closure_check, cotorsion_check, thm412_verify, thm48_verify, weak_ab_check, weak_coab_check, ABContextReport, ClosureProperty,
    ContextError, CotorsionReport, Finding, PerObject,
};
use relgor::gorenstein::{relative_id, relative_pd, CycleNote, Decider, Mode, Refutation, RelativeDimension, Which};
use relgor::homcalc::{ext_dim, Atlas, ExtVanishing};
use relgor::rep::{hom_space, Rep};
use relgor::subcat::Subcategory;
use serde_json::{json, Value};

use crate::args::{Command, ModeArg, PropertyArg, WhichArg};
use crate::input::{load_subcat, ObjectSpec};
use crate::report::{Report, Status};
use crate::{CliError, Session};

pub(crate) fn run(command: &Command, s: &Session, report: &mut Report) -> Result<(), CliError> {
    match command {
        Command::Indecs => indecs(s, report),
        Command::Hom { from, to } => {
            let (a, an) = object_rep(s, from, report)?;
            let (b, bn) = object_rep(s, to, report)?;
            let d = hom_space(&a, &b)?.dim();
            report.push(&s.hash, format!("dim Hom({an}, {bn}) = {d}"), Status::Positive, json!({ "dimension": d }), vec![]);
            Ok(())
        }
        Command::Ext { from, to, degree } => {
            let (a, an) = object_rep(s, from, report)?;
            let (b, bn) = object_rep(s, to, report)?;
            let d = ext_dim(&a, &b, *degree)?;
            report.push(
                &s.hash,
                format!("dim Ext^{degree}({an}, {bn}) = {d}"),
                Status::Positive,
                json!({ "degree": degree, "dimension": d }),
                vec![],
            );
            Ok(())
        }
        Command::Member { which, object } => member(s, *which, object.as_deref(), report),
        Command::Pd {
            object,
            relative_to,
            injective,
            at_most,
        } => pd(s, object.as_deref(), relative_to.as_deref(), *injective, *at_most, report),
        Command::Closure { property } => {
            let c = subcat(s, None, report)?;
            let prop = match property {
                PropertyArg::Extensions => ClosureProperty::Extensions,
                PropertyArg::KerEpi => ClosureProperty::KerEpi,
                PropertyArg::CokerMono => ClosureProperty::CokerMono,
                PropertyArg::Summands => ClosureProperty::Summands,
            };
            let f = closure_check(&Subcategory::from_atlas(&s.atlas, &c), &s.atlas, prop, &s.context_bounds())?;
            let name = serde_json::to_value(prop).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
            report.push_finding(&s.hash, format!("{} is closed under {name}", class_name(&s.atlas, &c)), &f);
            Ok(())
        }
        Command::Cotorsion { u, v } => {
            let (u, v) = (subcat(s, Some(u), report)?, subcat(s, Some(v), report)?);
            let r = cotorsion_check(&sub(s, &u), &sub(s, &v), &s.atlas, &s.context_bounds())?;
            cotorsion_verdicts(s, &r, report);
            Ok(())
        }
        Command::Abcontext { x, y, omega, u, v, co } => abcontext(s, [x, y, omega], [u, v], *co, report),
        Command::VerifyPaper { .. } | Command::Recheck { .. } => unreachable!("handled before a session is opened"),
    }
}

fn sub(s: &Session, idx: &[usize]) -> Subcategory {
    Subcategory::from_atlas(&s.atlas, idx)
}

pub(crate) fn names(atlas: &Atlas, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| atlas.name(i).to_string()).collect()
}

pub(crate) fn class_name(atlas: &Atlas, idx: &[usize]) -> String {
    format!("add({})", names(atlas, idx).join("⊕"))
}

fn subcat(s: &Session, arg: Option<&str>, report: &mut Report) -> Result<Vec<usize>, CliError> {
    let arg = arg
        .or(s.global.subcat.as_deref())
        .ok_or_else(|| CliError::Input("this command needs a subcategory (--subcat FILE)".into()))?;
    load_subcat(arg, &s.atlas, &mut report.warnings)
}

fn object(s: &Session, arg: &str, report: &mut Report) -> Result<usize, CliError> {
    ObjectSpec::from_arg(arg)?
        .resolve_one(&s.atlas, &mut report.warnings)
        .map_err(|e| CliError::Input(format!("object `{arg}`: {e}")))
}

/// Any object; decomposable ones are rebuilt as sums of atlas members.
fn object_rep(s: &Session, arg: &str, report: &mut Report) -> Result<(Rep, String), CliError> {
    let idx = ObjectSpec::from_arg(arg)?
        .resolve(&s.atlas, &mut report.warnings)
        .map_err(|e| CliError::Input(format!("object `{arg}`: {e}")))?;
    let parts: Vec<Rep> = idx.iter().map(|&i| s.atlas.rep(i).clone()).collect();
    Ok((Rep::direct_sum(&s.algebra, &parts).object, names(&s.atlas, &idx).join("⊕")))
}

fn targets(s: &Session, arg: Option<&str>, report: &mut Report) -> Result<Vec<usize>, CliError> {
    match arg {
        Some(a) => Ok(vec![object(s, a, report)?]),
        None => Ok(s.atlas.all()),
    }
}

fn indecs(s: &Session, report: &mut Report) -> Result<(), CliError> {
    let atlas = &s.atlas;
    let opt = |i: Option<usize>| i.map(|i| atlas.name(i).to_string());
    for (i, m) in atlas.members().iter().enumerate() {
        report.push(
            &s.hash,
            format!("{} is indecomposable", m.name),
            Status::Positive,
            json!({
                "index": i,
                "name": m.name,
                "dims": m.rep.dims(),
                "projective": m.projective,
                "injective": m.injective,
                "tau": opt(atlas.tau(i)),
                "tau_inverse": opt(atlas.tau_inv(i)),
                "syzygy": names(atlas, atlas.syzygy(i)),
                "rep": m.rep.to_data(),
            }),
            vec![],
        );
    }
    let n = atlas.len();
    let table = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> { (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect() };
    report.push(
        &s.hash,
        format!("the atlas lists every indecomposable ({n} found)"),
        if atlas.is_complete() { Status::Positive } else { Status::Inconclusive },
        json!({
            "names": names(atlas, &atlas.all()),
            "hom": table(&|i, j| atlas.hom_dim(i, j)),
            "ext1": table(&|i, j| atlas.ext1_dim(i, j)),
        }),
        vec![],
    );
    Ok(())
}

fn which_name(w: WhichArg) -> &'static str {
    match w {
        WhichArg::RG => "rG",
        WhichArg::LG => "lG",
        WhichArg::G => "G",
        WhichArg::Cores => "cores",
        WhichArg::Res => "res",
        WhichArg::Perp => "perp",
    }
}

/// `what` names the terms, e.g. "cosyzygies".
fn describe_cycle(atlas: &Atlas, what: &str, note: &CycleNote) -> String {
    let steps: Vec<String> = note
        .prefix
        .iter()
        .map(|set| if set.is_empty() { "0".to_string() } else { names(atlas, set).join("⊕") })
        .collect();
    let tail = match note.repeats {
        Some(k) => format!("; the last repeats step {k}, so the unfolding is periodic"),
        None => "; the unfolding reaches zero".to_string(),
    };
    format!("successive {what}: {}{tail}", steps.join(", "))
}

fn describe_refutation(atlas: &Atlas, r: &Refutation) -> String {
    let n = |i: usize| atlas.name(i).to_string();
    match r {
        Refutation::Ext { degree, from, into } => format!("Ext^{degree} ≠ 0, seen as Ext^1({}, {}) ≠ 0", n(*from), n(*into)),
        Refutation::NotMono { object } => format!("the left approximation of {} is not mono", n(*object)),
        Refutation::NotEpi { object } => format!("the right approximation of {} is not epi", n(*object)),
        Refutation::NotHomExact { object, test, side } => {
            format!("the approximation sequence of {} is not exact under Hom at {} ({side:?})", n(*object), n(*test))
        }
        Refutation::Excluded { object, summand } => format!("{} has the excluded summand {} in its unfolding", n(*object), n(*summand)),
        Refutation::Exhausted { object } => format!("no sequence for {} within the search bounds", n(*object)),
    }
}

fn member(s: &Session, which: WhichArg, obj: Option<&str>, report: &mut Report) -> Result<(), CliError> {
    let c = subcat(s, None, report)?;
    let xs = targets(s, obj, report)?;
    let atlas = &s.atlas;
    let cname = class_name(atlas, &c);
    let w = which_name(which);
    let which = match which {
        WhichArg::RG => Which::RG,
        WhichArg::LG => Which::LG,
        WhichArg::G => Which::G,
        WhichArg::Cores => Which::Cores,
        WhichArg::Res => Which::Res,
        WhichArg::Perp => {
            for x in xs {
                let claim = format!("{} ∈ ^⊥{cname}", atlas.name(x));
                let (status, detail) = match atlas.ext_vanishes(&[x], &c)? {
                    ExtVanishing::Vanishes => (Status::Positive, json!(null)),
                    ExtVanishing::Fails { degree, test, .. } => (
                        Status::Negative,
                        json!({ "degree": degree, "into": atlas.name(c[test]) }),
                    ),
                    ExtVanishing::Inconclusive => (Status::Inconclusive, json!(null)),
                };
                report.push(
                    &s.hash,
                    claim,
                    status,
                    json!({ "object": x, "name": atlas.name(x), "which": w, "subcategory": names(atlas, &c), "ext_nonvanishing": detail }),
                    vec![],
                );
            }
            return Ok(());
        }
    };
    let dec = Decider::new(atlas, &sub(s, &c))?;
    let (m, mode) = match s.global.mode {
        ModeArg::Gfp => (dec.membership(which, Mode::Gfp)?, "gfp"),
        ModeArg::Exhaustive => (dec.membership_with(which, Mode::Exhaustive, &s.exhaustive_bounds())?, "exhaustive"),
    };
    for x in xs {
        let v = &m.verdicts[x];
        let status = match v.status {
            relgor::gorenstein::Status::Member => Status::Positive,
            relgor::gorenstein::Status::NonMember => Status::Negative,
            relgor::gorenstein::Status::Inconclusive => Status::Inconclusive,
        };
        let mut certs = Vec::new();
        if mode == "gfp" && status != Status::Inconclusive {
            certs.push(report.certificate(&s.hash, dec.certificate(&m, x)?));
        }
        let mut notes = Vec::new();
        if let Some(r) = &v.refutation {
            notes.push(describe_refutation(atlas, r));
        }
        if let Some(c) = &v.cycle {
            notes.push(describe_cycle(atlas, "cosyzygies", c));
        }
        if let Some(c) = &v.cycle_left {
            notes.push(describe_cycle(atlas, "syzygies", c));
        }
        report.push(
            &s.hash,
            format!("{} ∈ {w}({cname})", atlas.name(x)),
            status,
            json!({
                "object": x,
                "name": atlas.name(x),
                "which": w,
                "subcategory": names(atlas, &c),
                "verdict": v,
                "notes": notes,
            }),
            certs,
        );
        report.mode(mode);
    }
    Ok(())
}

fn pd(
    s: &Session,
    obj: Option<&str>,
    relative_to: Option<&str>,
    injective: bool,
    at_most: Option<usize>,
    report: &mut Report,
) -> Result<(), CliError> {
    let c = subcat(s, relative_to, report)?;
    let xs = targets(s, obj, report)?;
    let cname = class_name(&s.atlas, &c);
    let kind = if injective { "id" } else { "pd" };
    for x in xs {
        let rep = s.atlas.rep(x);
        let (d, trace) = if injective {
            relative_id(rep, &sub(s, &c), &s.atlas)?
        } else {
            relative_pd(rep, &sub(s, &c), &s.atlas)?
        };
        let name = s.atlas.name(x);
        let (claim, status) = match at_most {
            Some(n) => (
                format!("{cname}-{kind}({name}) ≤ {n}"),
                d.at_most(n).map_or(Status::Inconclusive, Status::of_bool),
            ),
            None => (
                format!("{cname}-{kind}({name}) < ∞"),
                match d {
                    RelativeDimension::Finite(_) => Status::Positive,
                    RelativeDimension::Infinite => Status::Negative,
                    RelativeDimension::Inconclusive => Status::Inconclusive,
                },
            ),
        };
        let trace_names: Vec<Vec<String>> = trace.supports.iter().map(|t| names(&s.atlas, t)).collect();
        report.push(
            &s.hash,
            claim,
            status,
            json!({ "object": x, "name": name, "dimension": d, "trace": trace, "support_names": trace_names }),
            vec![],
        );
    }
    Ok(())
}

/// The worst status among several findings, with all of them as the value.
fn per_object(s: &Session, claim: String, rows: &[PerObject], report: &mut Report) {
    let statuses: Vec<Status> = rows.iter().map(|r| Status::of_finding(&r.finding)).collect();
    let status = [Status::Negative, Status::Inconclusive, Status::NotApplicable]
        .into_iter()
        .find(|w| statuses.contains(w))
        .unwrap_or(Status::Positive);
    let value: Vec<Value> = rows
        .iter()
        .map(|r| json!({ "object": r.object, "name": s.atlas.name(r.object), "finding": r.finding }))
        .collect();
    report.push(&s.hash, claim, status, Value::Array(value), vec![]);
}

fn cotorsion_verdicts(s: &Session, r: &CotorsionReport, report: &mut Report) {
    let (u, v) = (class_name(&s.atlas, &r.u), class_name(&s.atlas, &r.v));
    report.push_finding(&s.hash, format!("({u}, {v}) is a cotorsion pair"), &r.pair);
    report.push(
        &s.hash,
        format!("kernel U ∩ V = {}", class_name(&s.atlas, &r.kernel)),
        Status::Positive,
        json!({ "kernel": r.kernel, "names": names(&s.atlas, &r.kernel) }),
        vec![],
    );
    report.push_finding(&s.hash, "Ext^{≥1}(U, V) = 0", &r.hereditary.orthogonal);
    report.push_finding(&s.hash, "U is resolving", &r.hereditary.u_resolving);
    report.push_finding(&s.hash, "V is coresolving", &r.hereditary.v_coresolving);
    per_object(s, "enough injectives: 0 → A → V → U → 0 for every A".into(), &r.enough_injectives, report);
    per_object(s, "enough projectives: 0 → V → U → A → 0 for every A".into(), &r.enough_projectives, report);
}

fn context_verdicts(s: &Session, r: &ABContextReport, report: &mut Report) {
    let kind = match r.kind {
        relgor::contexts::ContextKind::WeakAB => "weak AB context",
        relgor::contexts::ContextKind::WeakCoAB => "weak co-AB context",
    };
    let failing = r.failing();
    let inconclusive = [&r.x_closure.extensions, &r.x_closure.maps, &r.x_closure.summands, &r.y_dimension]
        .into_iter()
        .chain([&r.y_closure.extensions, &r.y_closure.maps, &r.y_closure.summands, &r.intersection, &r.generator])
        .any(Finding::is_inconclusive);
    let status = match (failing.is_empty(), inconclusive) {
        (true, _) => Status::Positive,
        (false, true) => Status::Inconclusive,
        (false, false) => Status::Negative,
    };
    let (x, y, o) = (class_name(&s.atlas, &r.x), class_name(&s.atlas, &r.y), class_name(&s.atlas, &r.omega));
    report.push(
        &s.hash,
        format!("({x}, {y}, {o}) is a {kind}"),
        status,
        json!({ "kind": r.kind, "x": r.x, "y": r.y, "omega": r.omega, "failing": failing }),
        vec![],
    );
    for (name, f) in [
        ("X closed under extensions", &r.x_closure.extensions),
        ("X closed under the required (co)kernels", &r.x_closure.maps),
        ("X closed under direct summands", &r.x_closure.summands),
        ("every object of Y has finite relative dimension over X", &r.y_dimension),
        ("Y closed under extensions", &r.y_closure.extensions),
        ("Y closed under the required (co)kernels", &r.y_closure.maps),
        ("Y closed under direct summands", &r.y_closure.summands),
        ("ω = X ∩ Y", &r.intersection),
        ("ω generates X as required", &r.generator),
    ] {
        report.push_finding(&s.hash, name, f);
    }
}

fn abcontext(
    s: &Session,
    triple: [&Option<String>; 3],
    pair: [&Option<String>; 2],
    co: bool,
    report: &mut Report,
) -> Result<(), CliError> {
    let bounds = s.context_bounds();
    match (triple, pair) {
        ([Some(x), Some(y), Some(o)], [None, None]) => {
            let (x, y, o) = (subcat(s, Some(x), report)?, subcat(s, Some(y), report)?, subcat(s, Some(o), report)?);
            let check = if co { weak_coab_check } else { weak_ab_check };
            let r = check(&sub(s, &x), &sub(s, &y), &sub(s, &o), &s.atlas, &bounds)?;
            context_verdicts(s, &r, report);
        }
        ([None, None, None], [Some(u), Some(v)]) => {
            let (u, v) = (subcat(s, Some(u), report)?, subcat(s, Some(v), report)?);
            let (us, vs) = (sub(s, &u), sub(s, &v));
            let pair = cotorsion_check(&us, &vs, &s.atlas, &bounds)?;
            cotorsion_verdicts(s, &pair, report);
            let enough = if co { pair.has_enough_projectives() } else { pair.has_enough_injectives() };
            if !(pair.is_pair() && pair.is_hereditary() && enough) {
                return Ok(());
            }
            let built = if co { thm412_verify(&us, &vs, &s.atlas, &bounds) } else { thm48_verify(&us, &vs, &s.atlas, &bounds) };
            match built {
                Ok(r) => context_verdicts(s, &r, report),
                Err(ContextError::Precondition(why)) => report.push(
                    &s.hash,
                    "the context built from the pair is decided",
                    Status::Inconclusive,
                    json!({ "reason": why }),
                    vec![],
                ),
                Err(e) => return Err(e.into()),
            }
        }
        _ => {
            return Err(CliError::Input(
                "abcontext needs either --x, --y and --omega, or --u and --v".into(),
            ))
        }
    }
    Ok(())
}
