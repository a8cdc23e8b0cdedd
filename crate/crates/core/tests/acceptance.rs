//! The acceptance criteria, run in order in one process so that the audit
//! counters of the last-but-one criterion cover every earlier computation.
//! Each criterion prints one line.

mod oracle;

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relgor::audit;
use relgor::cert::recheck;
use relgor::contexts::{
    cotorsion_check, lemma43_check, prop45_46_suite, section3_suite, thm412_verify, thm48_verify, ContextBounds, Finding,
};
use relgor::corpus;
use relgor::exactla::Matrix;
use relgor::gorenstein::{
    lemma39_construct, relative_pd, thm310_certificates, Decider, ExhaustiveBounds, FourTerm, Mode, RelativeDimension, Status, Which,
};
use relgor::homcalc::{ar_sequence, ar_translate, enumerate_indecomposables, ext_dim, ext_space, realize_ext1, Atlas, Direction, Method};
use relgor::quiver::Algebra;
use relgor::rep::{decompose, hom_space, is_isomorphic, morphism_parts, Morphism, Rep};
use relgor::subcat::{is_self_orthogonal, Subcategory};

type Outcome = Result<String, String>;

const LIMIT: Duration = Duration::from_secs(10);

fn atlas_of(alg: &Arc<Algebra>) -> Atlas {
    enumerate_indecomposables(alg, &Method::default()).unwrap()
}

fn idx(atlas: &Atlas, names: &[&str]) -> Vec<usize> {
    let mut v: Vec<usize> = names.iter().map(|n| atlas.index_of_name(n).expect(n)).collect();
    v.sort_unstable();
    v
}

fn sub(atlas: &Atlas, names: &[&str]) -> Subcategory {
    Subcategory::from_atlas(atlas, &idx(atlas, names))
}

fn rep(atlas: &Atlas, name: &str) -> Rep {
    atlas.rep(atlas.index_of_name(name).expect(name)).clone()
}

fn iso(a: &Rep, b: &Rep) -> bool {
    is_isomorphic(a, b).unwrap().is_iso()
}

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn members(atlas: &Atlas, c: &Subcategory, which: Which) -> Vec<usize> {
    let m = Decider::new(atlas, c).unwrap().membership(which, Mode::Gfp).unwrap();
    assert!(m.is_conclusive());
    m.members()
}

/// Some nonzero map between the two objects with the given property.
fn some_map(s: &Rep, t: &Rep, pick: impl Fn(&Morphism) -> bool) -> Option<Morphism> {
    hom_space(s, t).unwrap().elements(1 << 12).unwrap().into_iter().find(|f| pick(f))
}

fn bundled_a3_regression() -> Outcome {
    for p in [2, 3] {
        let atlas = atlas_of(&corpus::a3(p));
        ensure(atlas.len() == 6 && atlas.is_complete(), "A3 atlas does not have 6 members")?;
        let dims = [
            ("S(1)", [1, 0, 0]),
            ("S(2)", [0, 1, 0]),
            ("S(3)", [0, 0, 1]),
            ("P(2)", [1, 1, 0]),
            ("I(2)", [0, 1, 1]),
            ("P(3)", [1, 1, 1]),
        ];
        for (n, d) in dims {
            ensure(rep(&atlas, n).dims() == d, format!("{n} has the wrong dimension vector"))?;
        }
        // AR quiver: the meshes ending at S(2), I(2) and S(3).
        let mesh = |end: &str, start: &str, middle: &[&str]| -> Result<(), String> {
            let ses = ar_sequence(&rep(&atlas, end)).unwrap().ok_or(format!("no AR sequence ending at {end}"))?;
            ensure(iso(ses.left(), &rep(&atlas, start)), format!("τ{end} ≠ {start}"))?;
            ensure(atlas.locate(ses.middle()).unwrap() == idx(&atlas, middle), format!("wrong middle term at {end}"))
        };
        mesh("S(2)", "S(1)", &["P(2)"])?;
        mesh("I(2)", "P(2)", &["S(2)", "P(3)"])?;
        mesh("S(3)", "S(2)", &["I(2)"])?;
        for n in ["S(1)", "P(2)", "P(3)"] {
            ensure(ar_sequence(&rep(&atlas, n)).unwrap().is_none(), format!("{n} is projective"))?;
        }

        let (s1, s3) = (rep(&atlas, "S(1)"), rep(&atlas, "S(3)"));
        let direct = ext_dim(&s3, &s1, 1).unwrap();
        let tau_s3 = ar_translate(&s3, Direction::Tau).unwrap().unwrap();
        ensure(iso(&tau_s3, &rep(&atlas, "S(2)")), "τS3 ≇ S2")?;
        let via_tau = hom_space(&s1, &tau_s3).unwrap().dim();
        ensure(direct == 0 && via_tau == 0, "Ext^1(S3, S1) ≠ 0")?;

        let c1 = ["S(1)", "S(2)", "P(3)", "S(3)"];
        let c2 = ["S(1)", "P(3)", "S(3)"];
        for c in [&c1[..], &c2[..]] {
            let g = members(&atlas, &sub(&atlas, c), Which::G);
            ensure(g == idx(&atlas, c), format!("G(add {c:?}) = {g:?}"))?;
        }
        let g1 = idx(&atlas, &c1);
        let (p2, p3, s2, i2) = (rep(&atlas, "P(2)"), rep(&atlas, "P(3)"), rep(&atlas, "S(2)"), rep(&atlas, "I(2)"));
        // 0 -> S1 -> P2 -> S2 -> 0 from the nonsplit class.
        let ext = ext_space(&s2, &s1, 1).unwrap();
        let class = ext.classes(16).unwrap().into_iter().find(|c| c.iter().any(|&x| x != 0)).unwrap();
        let ses = realize_ext1(&ext, &ext.element(&class)).unwrap();
        ensure(iso(ses.middle(), &p2) && !g1.contains(&atlas.index_of(&p2).unwrap().unwrap()), "extension witness")?;
        // P3 ↠ S3 has kernel P2; S1 ↪ P3 has cokernel I2.
        let epi = some_map(&p3, &s3, |f| f.is_epi()).unwrap();
        ensure(iso(&morphism_parts(&epi).kernel.object, &p2), "kernel of P3 -> S3")?;
        let mono = some_map(&s1, &p3, |f| f.is_mono()).unwrap();
        ensure(iso(&morphism_parts(&mono).cokernel.object, &i2), "cokernel of S1 -> P3")?;
        for c in [&c1[..], &c2[..]] {
            let g = idx(&atlas, c);
            for outsider in ["P(2)", "I(2)"] {
                ensure(!g.contains(&atlas.index_of_name(outsider).unwrap()), format!("{outsider} in G(C)"))?;
            }
        }
        let c2s = sub(&atlas, &c2);
        ensure(is_self_orthogonal(&c2s, &atlas, None).unwrap().holds(), "C ⊥ C fails")?;
    }
    Ok("6 indecomposables, AR meshes, Ext^1(S3,S1) = 0 = Hom(S1,τS3), both G(C), three witnesses".into())
}

fn example_three_two() -> Outcome {
    let mut count = 0;
    for p in [2, 3] {
        for (name, alg) in corpus::hereditary(p) {
            let atlas = atlas_of(&alg);
            let proj = Subcategory::from_atlas(&atlas, &atlas.projectives());
            let inj = Subcategory::from_atlas(&atlas, &atlas.injectives());
            let cases = [
                (&proj, Which::RG, atlas.projectives()),
                (&proj, Which::LG, atlas.all()),
                (&inj, Which::RG, atlas.all()),
                (&inj, Which::LG, atlas.injectives()),
            ];
            for (c, which, expected) in cases {
                let d = Decider::new(&atlas, c).unwrap();
                let g = d.membership(which, Mode::Gfp).unwrap();
                let e = d.membership_with(which, Mode::Exhaustive, &ExhaustiveBounds::default()).unwrap();
                ensure(g.is_conclusive() && g.members() == expected, format!("{name} p={p} {which:?}: gfp {:?}", g.members()))?;
                ensure(
                    e.is_conclusive() && e.members() == expected,
                    format!("{name} p={p} {which:?}: exhaustive {:?}", e.members()),
                )?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} identities on the hereditary corpus, gfp and exhaustive agree"))
}

fn oracle_equivalence() -> Outcome {
    let atlas = atlas_of(&corpus::a3(2));
    let bounds = ExhaustiveBounds { mult: 2, depth: 4 };
    let (mut subcats, mut compared, mut skipped) = (0, 0, 0);
    for mask in 1u32..64 {
        if mask.count_ones() > 4 {
            continue;
        }
        subcats += 1;
        let chosen: Vec<usize> = (0..6).filter(|i| mask & (1 << i) != 0).collect();
        let d = Decider::new(&atlas, &Subcategory::from_atlas(&atlas, &chosen)).unwrap();
        for which in [Which::Cores, Which::Res, Which::RG, Which::LG, Which::G] {
            let g = d.membership(which, Mode::Gfp).unwrap();
            let e = d.membership_with(which, Mode::Exhaustive, &bounds).unwrap();
            for x in atlas.all() {
                if g.status(x) == Status::Inconclusive || e.status(x) == Status::Inconclusive {
                    skipped += 1;
                    continue;
                }
                compared += 1;
                ensure(
                    g.status(x) == e.status(x),
                    format!("{chosen:?} {which:?} {}: gfp {:?}, exhaustive {:?}", atlas.name(x), g.status(x), e.status(x)),
                )?;
            }
        }
    }
    ensure(subcats >= 50, "fewer than 50 subcategories")?;
    Ok(format!("{subcats} subcategories, {compared} verdicts compared, 0 disagreements, {skipped} inconclusive"))
}

fn closure_suites() -> Outcome {
    let bounds = ContextBounds::default();
    let mut runs = 0;
    for p in [2, 3] {
        for (name, alg) in corpus::all_finite(p) {
            let atlas = atlas_of(&alg);
            let mut cs = vec![
                Subcategory::from_atlas(&atlas, &atlas.projectives()),
                Subcategory::from_atlas(&atlas, &atlas.injectives()),
            ];
            if name == "A3" {
                cs.push(sub(&atlas, &["S(1)", "S(2)", "P(3)", "S(3)"]));
                cs.push(sub(&atlas, &["S(1)", "P(3)", "S(3)"]));
            }
            for c in &cs {
                let r = section3_suite(c, &atlas, &bounds).unwrap();
                if let Some(e) = r.entries.iter().find(|e| !e.finding.holds() && !matches!(e.finding, Finding::HypothesisNotMet { .. })) {
                    return Err(format!("{name} p={p}: {} is {}", e.name, e.finding.tag()));
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} suite runs over the corpus, every applicable statement holds"))
}

/// Every map between `rG(C)`-objects with at most one summand each, as the
/// exact sequence `0 -> ker -> G1 -> G0 -> coker -> 0`.
fn lemma39_inputs(atlas: &Atlas, rg: &[usize]) -> Vec<FourTerm> {
    let mut out = Vec::new();
    for &s in rg {
        for &t in rg {
            for d in hom_space(atlas.rep(s), atlas.rep(t)).unwrap().elements(1 << 10).unwrap() {
                let parts = morphism_parts(&d);
                out.push(FourTerm {
                    k: parts.kernel.inclusion,
                    d,
                    e: parts.cokernel.projection,
                });
            }
        }
    }
    out
}

fn constructions() -> Outcome {
    let (mut l39, mut t310) = (0, 0);
    for p in [2, 3] {
        for (name, alg) in corpus::all_finite(p) {
            let atlas = atlas_of(&alg);
            let mut cs = vec![
                Subcategory::from_atlas(&atlas, &atlas.projectives()),
                Subcategory::from_atlas(&atlas, &atlas.injectives()),
            ];
            if name == "A3" {
                cs.push(sub(&atlas, &["S(1)", "P(3)", "S(3)"]));
            }
            for c in &cs {
                let d = Decider::new(&atlas, c).unwrap();
                let rg = d.membership(Which::RG, Mode::Gfp).unwrap().members();
                let in_rg = |m: &Rep| atlas.locate(m).unwrap().iter().all(|i| rg.contains(i));
                let in_c = |m: &Rep| atlas.locate(m).unwrap().iter().all(|i| d.c_indices().contains(i));
                for input in lemma39_inputs(&atlas, &rg) {
                    let (out, cert) = lemma39_construct(&input, &d).map_err(|e| format!("{name}: lemma39: {e}"))?;
                    recheck(atlas.algebra(), &cert).map_err(|e| format!("{name}: lemma39 recheck: {e}"))?;
                    ensure(out.is_exact() && in_c(out.d.source()) && in_rg(out.d.target()), "lemma39 output terms")?;
                    l39 += 1;
                }
                for a in atlas.all() {
                    for n in 0..=2 {
                        let t = thm310_certificates(atlas.rep(a), n, &d).map_err(|e| format!("{name}: thm310: {e}"))?;
                        ensure(t.rg_pd.at_most(n) == Some(t.holds), format!("{name}: thm310 verdict for {}", atlas.name(a)))?;
                        if !t.holds {
                            continue;
                        }
                        recheck(atlas.algebra(), t.certificate.as_ref().unwrap()).map_err(|e| format!("thm310 recheck: {e}"))?;
                        let w2 = t.witness2.as_ref().unwrap();
                        let w3 = t.witness3.as_ref().unwrap();
                        ensure(in_rg(w2.g.source()) && in_rg(w3.q.target()), "thm310 witness outside rG(C)")?;
                        let h = relative_pd(w2.h.source(), c, &atlas).unwrap().0;
                        let h2 = relative_pd(w3.q.source(), c, &atlas).unwrap().0;
                        let bound2 = if n == 0 { w2.h.source().is_zero() } else { h.at_most(n - 1) == Some(true) };
                        ensure(bound2 && h2.at_most(n) == Some(true), "thm310 C-pd bound")?;
                        t310 += 1;
                    }
                }
            }
        }
    }
    ensure(l39 >= 100 && t310 >= 100, format!("only {l39} lemma and {t310} theorem instances"))?;
    Ok(format!("{l39} four-term reductions and {t310} dimension witnesses rechecked"))
}

fn section_four() -> Outcome {
    let bounds = ContextBounds::default();
    let mut pairs = 0;
    for p in [2, 3] {
        for (name, alg) in corpus::all_finite(p) {
            let atlas = atlas_of(&alg);
            let dual = atlas.dual().unwrap();
            for (u, v) in [(atlas.projectives(), atlas.all()), (atlas.all(), atlas.injectives())] {
                let (us, vs) = (Subcategory::from_atlas(&atlas, &u), Subcategory::from_atlas(&atlas, &v));
                let tag = format!("{name} p={p} U={u:?}");
                let r = cotorsion_check(&us, &vs, &atlas, &bounds).unwrap();
                ensure(r.is_pair() && r.is_hereditary() && r.has_enough_injectives(), format!("{tag}: cotorsion"))?;
                let ab = thm48_verify(&us, &vs, &atlas, &bounds).unwrap();
                ensure(ab.holds(), format!("{tag}: weak AB context fails {:?}", ab.failing()))?;
                let l = lemma43_check(&us, &vs, &atlas, 3).unwrap();
                ensure(matches!(l.finding, Finding::Holds { .. }), format!("{tag}: lemma43 {}", l.finding.tag()))?;
                let s = prop45_46_suite(&us, &vs, &atlas, &bounds).unwrap();
                ensure(s.passed(), format!("{tag}: suite"))?;
                let p46 = s.get("(rG(C), C-pd<∞) is a cotorsion pair").unwrap();
                ensure(!matches!(p46, Finding::Vacuous { .. }), format!("{tag}: vacuous success"))?;
                let co = thm412_verify(&us, &vs, &atlas, &bounds).unwrap();
                let via_dual = thm48_verify(&Subcategory::from_atlas(&dual, &v), &Subcategory::from_atlas(&dual, &u), &dual, &bounds).unwrap();
                ensure(co.summary() == via_dual.summary().dualize(), format!("{tag}: duality"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs: cotorsion, context, n ≤ 3 dimension test, suite and duality all confirmed"))
}

fn random_invertible(rng: &mut ChaCha8Rng, field: relgor::exactla::Field, n: usize) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..field.characteristic())).collect();
        let m = Matrix::from_vec(field, n, n, data);
        if m.is_invertible() {
            return m;
        }
    }
}

fn decomposition_and_audit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let atlases: Vec<Atlas> = [2, 3]
        .into_iter()
        .flat_map(|p| corpus::all_finite(p).into_iter().map(|(_, a)| atlas_of(&a)))
        .collect();
    for _ in 0..500 {
        let atlas = &atlases[rng.gen_range(0..atlases.len())];
        let mut chosen = Vec::new();
        let mut total = 0;
        loop {
            let i = rng.gen_range(0..atlas.len());
            let d = atlas.rep(i).total_dim();
            if total + d > 12 || (chosen.len() >= 2 && rng.gen_bool(0.3)) {
                break;
            }
            chosen.push(i);
            total += d;
        }
        chosen.sort_unstable();
        let parts: Vec<Rep> = chosen.iter().map(|&i| atlas.rep(i).clone()).collect();
        let sum = Rep::direct_sum(atlas.algebra(), &parts).object;
        // Hide the block structure behind a random change of basis.
        let field = sum.field();
        let g: Vec<Matrix> = sum.dims().iter().map(|&n| random_invertible(&mut rng, field, n)).collect();
        let maps: Vec<Matrix> = atlas
            .algebra()
            .arrows()
            .iter()
            .zip(sum.maps())
            .map(|(a, m)| g[a.target].mul(m).mul(&g[a.source].inverse().unwrap()))
            .collect();
        let mixed = Rep::new(atlas.algebra().clone(), sum.dims().to_vec(), maps).unwrap();
        let d = decompose(&mixed).unwrap();
        let mut found: Vec<usize> = d.summands.iter().map(|s| atlas.index_of(s).unwrap().unwrap()).collect();
        found.sort_unstable();
        ensure(found == chosen, format!("{chosen:?} came back as {found:?}"))?;
    }
    let counts = audit::counts();
    ensure(counts.checks > 0 && counts.failures == 0, format!("audit {counts:?}"))?;
    Ok(format!(
        "500 random sums re-decompose exactly; {} internal identity checks, 0 failures",
        counts.checks
    ))
}

fn frozen_fixtures() -> Outcome {
    let frozen = oracle::frozen();
    ensure(!frozen.is_empty(), "no fixtures")?;
    for f in &frozen {
        let atlas = atlas_of(&corpus::by_name(&f.algebra, f.p).unwrap());
        let names: Vec<&str> = f.c.iter().map(String::as_str).collect();
        let c = sub(&atlas, &names);
        let mut rg: Vec<String> = members(&atlas, &c, Which::RG).iter().map(|&i| atlas.name(i).to_string()).collect();
        let mut expected = f.rg.clone();
        rg.sort();
        expected.sort();
        ensure(rg == expected, format!("rG(C) = {rg:?}, frozen {expected:?}"))?;
        for (name, value) in &f.c_pd {
            let (d, _) = relative_pd(&rep(&atlas, name), &c, &atlas).unwrap();
            let matches = match value {
                Some(n) => d == RelativeDimension::Finite(*n),
                None => d == RelativeDimension::Infinite,
            };
            ensure(matches, format!("C-pd({name}) = {d:?}, frozen {value:?}"))?;
        }
    }
    Ok(format!("{} frozen fixture sets match (rG(C) and C-pd, including C-pd(P2) = ∞)", frozen.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 bundled A3 regression", bundled_a3_regression),
        ("2 projectives and injectives on hereditary algebras", example_three_two),
        ("3 gfp vs exhaustive oracle", oracle_equivalence),
        ("4 closure property suites", closure_suites),
        ("5 constructions recheck", constructions),
        ("6 cotorsion pairs and contexts", section_four),
        ("7 decomposition and audit", decomposition_and_audit),
        ("8 frozen derived fixtures", frozen_fixtures),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took >= LIMIT => Err(format!("{msg}; took {took:.1?}, over the limit")),
            o => o,
        };
        match &outcome {
            Ok(msg) => println!("PASS criterion {name} ({took:.2?}): {msg}"),
            Err(msg) => {
                println!("FAIL criterion {name} ({took:.2?}): {msg}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
