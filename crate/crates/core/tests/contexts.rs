use std::sync::Arc;

use proptest::prelude::*;
use relgor::cert::recheck;
use relgor::contexts::{
    closure_check, cotorsion_check, lemma43_check, prop45_46_suite, section3_suite, thm412_verify, thm48_verify, weak_ab_check,
    ClosureProperty, ContextBounds, CotorsionReport, Counterexample, Finding, SuiteReport,
};
use relgor::corpus;
use relgor::gorenstein::{Decider, Mode, RelativeDimension, Which};
use relgor::homcalc::{enumerate_indecomposables, ext_dim, proj_resolution, Atlas, Method};
use relgor::quiver::Algebra;
use relgor::subcat::Subcategory;

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

fn proj(atlas: &Atlas) -> Subcategory {
    Subcategory::from_atlas(atlas, &atlas.projectives())
}

fn inj(atlas: &Atlas) -> Subcategory {
    Subcategory::from_atlas(atlas, &atlas.injectives())
}

fn all(atlas: &Atlas) -> Subcategory {
    Subcategory::from_atlas(atlas, &atlas.all())
}

fn bounds() -> ContextBounds {
    ContextBounds::default()
}

/// Projective dimension straight from a minimal resolution.
fn pd_oracle(atlas: &Atlas, i: usize) -> usize {
    proj_resolution(atlas.rep(i), 16).length().expect("finite global dimension")
}

/// `Ext^d(A, ⊕ tests) = 0` computed from scratch.
fn ext_zero(atlas: &Atlas, a: usize, d: usize, tests: &[usize]) -> bool {
    tests.iter().all(|&t| ext_dim(atlas.rep(a), atlas.rep(t), d).unwrap() == 0)
}

fn witnesses_recheck(atlas: &Atlas, f: &Finding) {
    match f {
        Finding::Holds { witnesses, .. } => {
            for w in witnesses {
                recheck(atlas.algebra(), &w.certificate).unwrap();
            }
        }
        Finding::Fails { counterexample } => {
            if let Counterexample::Sequence { seq, .. } = counterexample.as_ref() {
                recheck(atlas.algebra(), &seq.certificate).unwrap();
            }
        }
        _ => {}
    }
}

fn report_rechecks(atlas: &Atlas, r: &CotorsionReport) {
    for p in r.enough_injectives.iter().chain(&r.enough_projectives) {
        witnesses_recheck(atlas, &p.finding);
    }
    witnesses_recheck(atlas, &r.hereditary.u_resolving);
    witnesses_recheck(atlas, &r.hereditary.v_coresolving);
}

fn assert_passed(r: &SuiteReport, what: &str) {
    assert!(r.passed(), "{what}: {:#?}", r.entries.iter().filter(|e| !e.finding.holds()).collect::<Vec<_>>());
}

#[test]
fn all_inj_is_hereditary_with_enough_injectives() {
    for p in [2, 3] {
        let atlas = atlas_of(&corpus::a3(p));
        let r = cotorsion_check(&all(&atlas), &inj(&atlas), &atlas, &bounds()).unwrap();
        assert!(r.is_pair() && r.is_hereditary() && r.has_enough_injectives() && r.has_enough_projectives());
        assert_eq!(r.kernel, idx(&atlas, &["S(3)", "I(2)", "P(3)"]));
        report_rechecks(&atlas, &r);
    }
}

#[test]
fn proj_all_is_hereditary_with_enough_injectives() {
    let atlas = atlas_of(&corpus::a3(2));
    let r = cotorsion_check(&proj(&atlas), &all(&atlas), &atlas, &bounds()).unwrap();
    assert!(r.is_pair() && r.is_hereditary() && r.has_enough_injectives() && r.has_enough_projectives());
    assert_eq!(r.kernel, idx(&atlas, &["S(1)", "P(2)", "P(3)"]));
    // V is everything, so each injective-side sequence is the trivial one.
    for p in &r.enough_injectives {
        let Finding::Holds { witnesses, .. } = &p.finding else { panic!() };
        assert_eq!(witnesses[0].middle, vec![p.object]);
        assert!(witnesses[0].right.is_empty());
    }
    report_rechecks(&atlas, &r);
}

#[test]
fn add_p3_with_everything_is_not_a_pair() {
    let atlas = atlas_of(&corpus::a3(2));
    let u = sub(&atlas, &["P(3)"]);
    let r = cotorsion_check(&u, &all(&atlas), &atlas, &bounds()).unwrap();
    assert!(!r.is_pair());
    let Finding::Fails { counterexample } = &r.pair else { panic!("{:?}", r.pair) };
    let Counterexample::Object { object, .. } = counterexample.as_ref() else { panic!() };
    // The witness is Ext^1-orthogonal to every module but lies outside add P3.
    let everything = atlas.all();
    assert!((1..=1).all(|d| ext_zero(&atlas, *object, d, &everything)));
    assert_ne!(*object, idx(&atlas, &["P(3)"])[0]);
}

#[test]
fn tilting_pair_of_s1_p3_s3() {
    let atlas = atlas_of(&corpus::a3(2));
    let u = sub(&atlas, &["S(1)", "P(2)", "P(3)", "S(3)"]);
    let v = sub(&atlas, &["S(1)", "S(3)", "P(3)", "I(2)"]);
    let r = cotorsion_check(&u, &v, &atlas, &bounds()).unwrap();
    assert!(r.is_pair() && r.is_hereditary() && r.has_enough_injectives() && r.has_enough_projectives());
    assert_eq!(r.kernel, idx(&atlas, &["S(1)", "P(3)", "S(3)"]));
    report_rechecks(&atlas, &r);
}

#[test]
fn lemma43_over_projectives_matches_resolutions() {
    for p in [2, 3] {
        let atlas = atlas_of(&corpus::a3(p));
        let r = lemma43_check(&proj(&atlas), &all(&atlas), &atlas, 2).unwrap();
        assert!(r.finding.holds(), "{:?}", r.finding);
        let everything = atlas.all();
        assert_eq!(r.rows.len(), 6 * 3);
        for row in &r.rows {
            let pd = pd_oracle(&atlas, row.object);
            assert_eq!(row.pd, RelativeDimension::Finite(pd));
            assert_eq!(row.ext_vanishes, ext_zero(&atlas, row.object, row.n + 1, &everything));
            assert_eq!(pd <= row.n, row.ext_vanishes);
        }
    }
}

#[test]
fn lemma43_on_a3_rad2() {
    let atlas = atlas_of(&corpus::a3_rad2(2));
    let v = atlas.injectives();
    let u = atlas.left_perp(&v, false).unwrap();
    let r = lemma43_check(
        &Subcategory::from_atlas(&atlas, &u),
        &Subcategory::from_atlas(&atlas, &v),
        &atlas,
        3,
    )
    .unwrap();
    assert!(r.finding.holds(), "{:?}", r.finding);
    for row in &r.rows {
        assert_eq!(row.ext_vanishes, ext_zero(&atlas, row.object, row.n + 1, &v));
    }
}

#[test]
fn lemma43_needs_orthogonality() {
    let atlas = atlas_of(&corpus::a3(2));
    let r = lemma43_check(&all(&atlas), &all(&atlas), &atlas, 1).unwrap();
    assert!(matches!(r.finding, Finding::HypothesisNotMet { .. }));
}

#[test]
fn projectives_thrice_fail_only_on_cokernels() {
    let atlas = atlas_of(&corpus::a3(2));
    let p = proj(&atlas);
    let r = weak_ab_check(&p, &p, &p, &atlas, &bounds()).unwrap();
    // Every other condition degenerates, but Y = proj is not closed under
    // cokernels of monos, e.g. P(2) ⊂ P(3) has cokernel S(3).
    assert_eq!(r.failing(), vec!["y_closure.maps".to_string()]);
    let Finding::Fails { counterexample } = &r.y_closure.maps else { panic!() };
    let Counterexample::Sequence { seq, outside, .. } = counterexample.as_ref() else { panic!() };
    let projectives = atlas.projectives();
    assert!(seq.left.iter().chain(&seq.middle).all(|i| projectives.contains(i)));
    assert_eq!(&seq.right, outside);
    assert!(outside.iter().all(|i| !projectives.contains(i)));
    recheck(atlas.algebra(), &seq.certificate).unwrap();
}

#[test]
fn gorenstein_projectives_with_finite_pd() {
    let atlas = atlas_of(&corpus::a3(2));
    let p = proj(&atlas);
    let d = Decider::new(&atlas, &p).unwrap();
    let rg = d.membership(Which::RG, Mode::Gfp).unwrap().members();
    // Hereditary algebra: every module has finite projective dimension.
    let r = weak_ab_check(&Subcategory::from_atlas(&atlas, &rg), &all(&atlas), &p, &atlas, &bounds()).unwrap();
    assert!(r.holds(), "{:?}", r.failing());
}

#[test]
fn example_subcategory_is_not_closed_under_extensions() {
    let atlas = atlas_of(&corpus::a3(2));
    let c = sub(&atlas, &["S(1)", "S(2)", "P(3)", "S(3)"]);
    let r = weak_ab_check(&c, &c, &c, &atlas, &bounds()).unwrap();
    assert!(!r.holds());
    assert!(r.failing().contains(&"x_closure.extensions".to_string()));
    let Finding::Fails { counterexample } = &r.x_closure.extensions else { panic!() };
    let Counterexample::Sequence { seq, term, outside } = counterexample.as_ref() else { panic!() };
    assert_eq!(term, "middle");
    assert_eq!(seq.left, idx(&atlas, &["S(1)"]));
    assert_eq!(seq.middle, idx(&atlas, &["P(2)"]));
    assert_eq!(seq.right, idx(&atlas, &["S(2)"]));
    assert_eq!(outside, &idx(&atlas, &["P(2)"]));
    recheck(atlas.algebra(), &seq.certificate).unwrap();
}

#[test]
fn closure_of_projectives() {
    let atlas = atlas_of(&corpus::a3(2));
    let p = proj(&atlas);
    assert!(closure_check(&p, &atlas, ClosureProperty::Extensions, &bounds()).unwrap().holds());
    assert!(closure_check(&p, &atlas, ClosureProperty::KerEpi, &bounds()).unwrap().holds());
    // P(2) ⊂ P(3) has cokernel S(3).
    assert!(closure_check(&p, &atlas, ClosureProperty::CokerMono, &bounds()).unwrap().fails_definitely());
}

#[test]
fn theorem_contexts_on_a3() {
    let atlas = atlas_of(&corpus::a3(2));
    let r = thm48_verify(&proj(&atlas), &all(&atlas), &atlas, &bounds()).unwrap();
    assert!(r.holds(), "{:?}", r.failing());
    assert_eq!(r.omega, atlas.projectives());
    assert_eq!(r.x, atlas.projectives());
    assert_eq!(r.y, atlas.all());

    let r = thm48_verify(&all(&atlas), &inj(&atlas), &atlas, &bounds()).unwrap();
    assert!(r.holds(), "{:?}", r.failing());
    assert_eq!(r.x, atlas.all());
    assert_eq!(r.omega, atlas.injectives());

    let r = thm412_verify(&proj(&atlas), &all(&atlas), &atlas, &bounds()).unwrap();
    assert!(r.holds(), "{:?}", r.failing());
    assert_eq!(r.x, atlas.all());
}

#[test]
fn thm48_refuses_a_non_pair() {
    let atlas = atlas_of(&corpus::a3(2));
    let u = sub(&atlas, &["P(3)"]);
    assert!(thm48_verify(&u, &all(&atlas), &atlas, &bounds()).is_err());
}

#[test]
fn coab_context_agrees_with_the_dual_algebra() {
    for p in [2, 3] {
        for (name, alg) in corpus::all_finite(p) {
            let atlas = atlas_of(&alg);
            let dual = atlas.dual().unwrap();
            let pairs = [(atlas.projectives(), atlas.all()), (atlas.all(), atlas.injectives())];
            for (u, v) in pairs {
                let direct = thm412_verify(
                    &Subcategory::from_atlas(&atlas, &u),
                    &Subcategory::from_atlas(&atlas, &v),
                    &atlas,
                    &bounds(),
                )
                .unwrap();
                let via_dual = thm48_verify(
                    &Subcategory::from_atlas(&dual, &v),
                    &Subcategory::from_atlas(&dual, &u),
                    &dual,
                    &bounds(),
                )
                .unwrap();
                assert!(direct.holds(), "{name}: {:?}", direct.failing());
                assert_eq!(direct.summary(), via_dual.summary().dualize(), "{name} p={p}");
            }
        }
    }
}

#[test]
fn gorenstein_meets_finite_c_pd_in_c() {
    let atlas = atlas_of(&corpus::a3(2));
    let u = sub(&atlas, &["S(1)", "P(2)", "P(3)", "S(3)"]);
    let v = sub(&atlas, &["S(1)", "S(3)", "P(3)", "I(2)"]);
    let r = prop45_46_suite(&u, &v, &atlas, &bounds()).unwrap();
    assert_passed(&r, "tilting pair");
    assert!(r.get("rG(C) ∩ C-pd<∞ = C").unwrap().holds());
    assert!(r.get("C is the unique injective cogenerator for rG(C)").unwrap().holds());
}

#[test]
fn relative_pd_over_projectives_is_pd() {
    let atlas = atlas_of(&corpus::a3(2));
    let r = prop45_46_suite(&proj(&atlas), &all(&atlas), &atlas, &bounds()).unwrap();
    assert_passed(&r, "(proj, all)");
    assert!(r.get("rG(C)-pd = C-pd on C-pd<∞").unwrap().holds());
    let d = Decider::new(&atlas, &proj(&atlas)).unwrap();
    let rg = Subcategory::from_atlas(&atlas, &d.membership(Which::RG, Mode::Gfp).unwrap().members());
    for i in 0..atlas.len() {
        let (dim, _) = relgor::gorenstein::relative_pd(atlas.rep(i), &rg, &atlas).unwrap();
        assert_eq!(dim, RelativeDimension::Finite(pd_oracle(&atlas, i)));
    }
}

#[test]
fn everything_is_gorenstein_over_injectives() {
    let atlas = atlas_of(&corpus::a3(2));
    let r = prop45_46_suite(&all(&atlas), &inj(&atlas), &atlas, &bounds()).unwrap();
    assert_passed(&r, "(all, inj)");
    assert!(r.get("rG(C) ∩ U-pd<∞ = U").unwrap().holds());
}

#[test]
fn misprinted_readings_fail_as_observations() {
    let atlas = atlas_of(&corpus::a2(2));
    let r = prop45_46_suite(&proj(&atlas), &all(&atlas), &atlas, &bounds()).unwrap();
    assert_passed(&r, "A2");
    let obs = r.observations.iter().find(|e| e.name.contains("rG(C)-id<∞")).unwrap();
    assert!(obs.finding.fails_definitely());

    let atlas = atlas_of(&corpus::a3_rad2(2));
    let r = prop45_46_suite(&proj(&atlas), &all(&atlas), &atlas, &bounds()).unwrap();
    assert_passed(&r, "A3/rad2");
    let obs = r.observations.iter().find(|e| e.name.contains("single-degree")).unwrap();
    assert!(obs.finding.fails_definitely());
}

#[test]
fn suites_pass_across_the_corpus() {
    for p in [2, 3] {
        for (name, alg) in corpus::all_finite(p) {
            let atlas = atlas_of(&alg);
            for (u, v) in [(proj(&atlas), all(&atlas)), (all(&atlas), inj(&atlas))] {
                let r = prop45_46_suite(&u, &v, &atlas, &bounds()).unwrap();
                assert_passed(&r, name);
            }
        }
    }
}

#[test]
fn section3_on_a3() {
    for p in [2, 3] {
        let atlas = atlas_of(&corpus::a3(p));
        let cs = [
            sub(&atlas, &["S(1)", "S(2)", "P(3)", "S(3)"]),
            sub(&atlas, &["S(1)", "P(3)", "S(3)"]),
            proj(&atlas),
            inj(&atlas),
        ];
        for (k, c) in cs.iter().enumerate() {
            let r = section3_suite(c, &atlas, &bounds()).unwrap();
            assert_passed(&r, &format!("C number {k}"));
            let unmet = r.entries.iter().filter(|e| matches!(e.finding, Finding::HypothesisNotMet { .. })).count();
            // Only the first class fails to be self-orthogonal.
            assert_eq!(unmet, if k == 0 { 7 } else { 0 });
        }
    }
}

#[test]
fn section3_across_the_corpus() {
    for (name, alg) in corpus::all_finite(2) {
        let atlas = atlas_of(&alg);
        for c in [proj(&atlas), inj(&atlas)] {
            let r = section3_suite(&c, &atlas, &bounds()).unwrap();
            assert_passed(&r, name);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// A reported pair agrees with the Ext^1 perpendiculars computed from
    /// scratch, and every witness sequence rechecks.
    #[test]
    fn cotorsion_verdicts_match_perpendiculars(umask in 1u32..64, vmask in 1u32..64) {
        let atlas = atlas_of(&corpus::a3(2));
        let u: Vec<usize> = (0..6).filter(|i| umask & (1 << i) != 0).collect();
        let v: Vec<usize> = (0..6).filter(|i| vmask & (1 << i) != 0).collect();
        let r = cotorsion_check(&Subcategory::from_atlas(&atlas, &u), &Subcategory::from_atlas(&atlas, &v), &atlas, &bounds()).unwrap();
        let perp_v: Vec<usize> = (0..6).filter(|&a| ext_zero(&atlas, a, 1, &v)).collect();
        let u_perp: Vec<usize> = (0..6).filter(|&b| u.iter().all(|&a| ext_dim(atlas.rep(a), atlas.rep(b), 1).unwrap() == 0)).collect();
        prop_assert_eq!(r.is_pair(), perp_v == u && u_perp == v);
        prop_assert!(!r.pair.is_inconclusive());
        report_rechecks(&atlas, &r);
    }
}
