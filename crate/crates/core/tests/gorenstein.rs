use relgor::cert::recheck;
use relgor::corpus;
use relgor::gorenstein::{relative_pd, Decider, ExhaustiveBounds, Mode, RelativeDimension, Status, Which};
use relgor::homcalc::{enumerate_indecomposables, Atlas, Method};
use relgor::subcat::Subcategory;

fn atlas_of(alg: &std::sync::Arc<relgor::quiver::Algebra>) -> Atlas {
    enumerate_indecomposables(alg, &Method::default()).unwrap()
}

fn a3_atlas(p: u32) -> Atlas {
    atlas_of(&corpus::a3(p))
}

fn sub(atlas: &Atlas, names: &[&str]) -> Subcategory {
    let idx: Vec<usize> = names.iter().map(|n| atlas.index_of_name(n).expect(n)).collect();
    Subcategory::from_atlas(atlas, &idx)
}

fn member_names(atlas: &Atlas, d: &Decider, which: Which, mode: Mode) -> Vec<String> {
    let m = d.membership(which, mode).unwrap();
    assert!(m.is_conclusive(), "{which:?} {mode:?}: {m:?}");
    let mut out: Vec<String> = m.members().iter().map(|&i| atlas.name(i).to_string()).collect();
    out.sort();
    out
}

fn sorted(v: &[&str]) -> Vec<String> {
    let mut out: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    out.sort();
    out
}

const ALL: [&str; 6] = ["S(1)", "S(2)", "S(3)", "P(2)", "I(2)", "P(3)"];

#[test]
fn cores_and_rg_of_example_subcategory() {
    for p in [2, 3] {
        let atlas = a3_atlas(p);
        let c = sub(&atlas, &["S(1)", "P(3)", "S(3)"]);
        let d = Decider::new(&atlas, &c).unwrap();
        let expected = sorted(&["S(1)", "P(2)", "P(3)", "S(3)"]);
        assert_eq!(member_names(&atlas, &d, Which::Cores, Mode::Gfp), expected);
        assert_eq!(member_names(&atlas, &d, Which::RG, Mode::Gfp), expected);
        let m = d.membership(Which::Cores, Mode::Gfp).unwrap();
        for name in ["S(2)", "I(2)"] {
            let x = atlas.index_of_name(name).unwrap();
            assert_eq!(m.status(x), Status::NonMember);
        }
    }
}

#[test]
fn members_of_c_are_in_cores() {
    let atlas = a3_atlas(2);
    for mask in 1u32..64 {
        let chosen: Vec<usize> = (0..6).filter(|i| mask & (1 << i) != 0).collect();
        let c = Subcategory::from_atlas(&atlas, &chosen);
        let d = Decider::new(&atlas, &c).unwrap();
        let cores = d.membership(Which::Cores, Mode::Gfp).unwrap().members();
        assert!(chosen.iter().all(|i| cores.contains(i)));
    }
}

#[test]
fn projectives_and_injectives_on_a3() {
    let atlas = a3_atlas(2);
    let proj = Subcategory::from_atlas(&atlas, &atlas.projectives());
    let d = Decider::new(&atlas, &proj).unwrap();
    assert_eq!(member_names(&atlas, &d, Which::RG, Mode::Gfp), sorted(&["S(1)", "P(2)", "P(3)"]));
    assert_eq!(member_names(&atlas, &d, Which::LG, Mode::Gfp), sorted(&ALL));
    let inj = Subcategory::from_atlas(&atlas, &atlas.injectives());
    let d = Decider::new(&atlas, &inj).unwrap();
    assert_eq!(member_names(&atlas, &d, Which::Cores, Mode::Gfp), sorted(&ALL));
    assert_eq!(member_names(&atlas, &d, Which::RG, Mode::Gfp), sorted(&ALL));
    assert_eq!(member_names(&atlas, &d, Which::LG, Mode::Gfp), sorted(&["P(3)", "I(2)", "S(3)"]));
}

#[test]
fn gorenstein_subcategories_of_the_two_examples() {
    for p in [2, 3] {
        let atlas = a3_atlas(p);
        let four = ["S(1)", "S(2)", "P(3)", "S(3)"];
        let d = Decider::new(&atlas, &sub(&atlas, &four)).unwrap();
        assert_eq!(member_names(&atlas, &d, Which::G, Mode::Gfp), sorted(&four));
        let three = ["S(1)", "P(3)", "S(3)"];
        let d = Decider::new(&atlas, &sub(&atlas, &three)).unwrap();
        assert_eq!(member_names(&atlas, &d, Which::G, Mode::Gfp), sorted(&three));
        // Self-orthogonal: G = rG ∩ lG.
        let rg = d.membership(Which::RG, Mode::Gfp).unwrap().members();
        let lg = d.membership(Which::LG, Mode::Gfp).unwrap().members();
        let both: Vec<usize> = rg.into_iter().filter(|i| lg.contains(i)).collect();
        assert_eq!(d.membership(Which::G, Mode::Gfp).unwrap().members(), both);
    }
}

#[test]
fn empty_subcategory_has_no_members() {
    let alg = corpus::a3(2);
    let atlas = a3_atlas(2);
    let d = Decider::new(&atlas, &Subcategory::empty(&alg)).unwrap();
    for which in [Which::Cores, Which::Res, Which::RG, Which::LG, Which::G] {
        assert!(d.membership(which, Mode::Gfp).unwrap().members().is_empty());
    }
}

#[test]
fn incomplete_atlas_is_rejected() {
    let alg = corpus::kronecker(2);
    let atlas = enumerate_indecomposables(&alg, &Method::Knitting { max_members: 6, max_dim: 4 }).unwrap();
    let proj = Subcategory::from_atlas(&atlas, &atlas.projectives());
    assert!(Decider::new(&atlas, &proj).is_err());
}

#[test]
fn relative_projective_dimensions() {
    let atlas = a3_atlas(2);
    let c = sub(&atlas, &["S(1)", "P(3)", "S(3)"]);
    let p2 = atlas.rep(atlas.index_of_name("P(2)").unwrap());
    let (dim, trace) = relative_pd(p2, &c, &atlas).unwrap();
    assert_eq!(dim, RelativeDimension::Infinite);
    assert_eq!(trace.failed_at, Some(0));
    for m in c.members() {
        assert_eq!(relative_pd(m, &c, &atlas).unwrap().0, RelativeDimension::Finite(0));
    }
    let proj = Subcategory::from_atlas(&atlas, &atlas.projectives());
    let s2 = atlas.rep(atlas.index_of_name("S(2)").unwrap());
    assert_eq!(relative_pd(s2, &proj, &atlas).unwrap().0, RelativeDimension::Finite(1));
    let alg = corpus::a3_rad2(2);
    let atlas = atlas_of(&alg);
    let proj = Subcategory::from_atlas(&atlas, &atlas.projectives());
    let s3 = relgor::rep::simple(&alg, 2);
    assert_eq!(relative_pd(&s3, &proj, &atlas).unwrap().0, RelativeDimension::Finite(2));
}

#[test]
fn certificates_recheck_on_the_corpus() {
    for (name, alg) in corpus::all_finite(2) {
        let atlas = atlas_of(&alg);
        let n = atlas.len().min(5);
        for mask in 1u32..(1 << n) {
            if mask.count_ones() > 3 {
                continue;
            }
            let chosen: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let c = Subcategory::from_atlas(&atlas, &chosen);
            let d = Decider::new(&atlas, &c).unwrap();
            for which in [Which::Cores, Which::Res, Which::RG, Which::LG, Which::G] {
                let m = d.membership(which, Mode::Gfp).unwrap();
                for x in atlas.all() {
                    let cert = d.certificate(&m, x).unwrap();
                    assert!(!cert.claims.is_empty(), "{name} {which:?} {x}");
                    if let Err(e) = recheck(&alg, &cert) {
                        panic!("{name} {chosen:?} {which:?} {x}: {e} {:?}", m.verdicts[x]);
                    }
                }
            }
        }
    }
}

#[test]
fn gfp_agrees_with_exhaustive_search() {
    let atlas = a3_atlas(2);
    let bounds = ExhaustiveBounds::default();
    for c in [
        sub(&atlas, &["S(1)", "P(3)", "S(3)"]),
        sub(&atlas, &["S(1)", "S(2)", "P(3)", "S(3)"]),
        Subcategory::from_atlas(&atlas, &atlas.projectives()),
        Subcategory::from_atlas(&atlas, &atlas.injectives()),
    ] {
        let d = Decider::new(&atlas, &c).unwrap();
        for which in [Which::Cores, Which::Res, Which::RG, Which::LG, Which::G] {
            let g = d.membership(which, Mode::Gfp).unwrap();
            let e = d.membership_with(which, Mode::Exhaustive, &bounds).unwrap();
            assert!(e.is_conclusive(), "{which:?}");
            for x in atlas.all() {
                if e.status(x) != Status::Inconclusive {
                    assert_eq!(g.status(x), e.status(x), "{which:?} {}", atlas.name(x));
                }
            }
        }
    }
}

mod constructions {
    use super::*;
    use relgor::gorenstein::{GorensteinError, horseshoe_merge, lemma39_construct, minimal_coresolution, thm310_certificates, FourTerm};
    use relgor::homcalc::{ses_check, ShortExactSeq};
    use relgor::rep::{hom_space, is_isomorphic, DirectSum, Morphism, Rep};

    fn rep(atlas: &Atlas, name: &str) -> Rep {
        atlas.rep(atlas.index_of_name(name).unwrap()).clone()
    }

    fn iso(a: &Rep, b: &Rep) -> bool {
        is_isomorphic(a, b).unwrap().is_iso()
    }

    #[test]
    fn lemma39_identity_case() {
        let atlas = a3_atlas(2);
        let c = sub(&atlas, &["S(1)", "P(3)", "S(3)"]);
        let d = Decider::new(&atlas, &c).unwrap();
        let a = rep(&atlas, "P(2)");
        let zero = Rep::zero(atlas.algebra().clone());
        let input = FourTerm {
            k: Morphism::zero(&zero, &zero),
            d: Morphism::zero(&zero, &a),
            e: Morphism::identity(&a),
        };
        let (out, cert) = lemma39_construct(&input, &d).unwrap();
        assert!(out.d.source().is_zero());
        assert!(iso(out.d.target(), &a));
        recheck(atlas.algebra(), &cert).unwrap();
    }

    #[test]
    fn lemma39_on_the_approximation_sequence() {
        let atlas = a3_atlas(2);
        let c = sub(&atlas, &["S(1)", "P(3)", "S(3)"]);
        let d = Decider::new(&atlas, &c).unwrap();
        let (p2, p3) = (rep(&atlas, "P(2)"), rep(&atlas, "P(3)"));
        let f = hom_space(&p2, &p3).unwrap().basis()[0].clone();
        let q = f.cokernel();
        let zero = Rep::zero(atlas.algebra().clone());
        let input = FourTerm {
            k: Morphism::zero(&zero, &p2),
            d: f,
            e: q.projection,
        };
        let (out, cert) = lemma39_construct(&input, &d).unwrap();
        assert!(out.is_exact());
        assert!(iso(out.d.source(), &p3));
        recheck(atlas.algebra(), &cert).unwrap();
    }

    #[test]
    fn lemma39_split_input_over_projectives() {
        let atlas = a3_atlas(2);
        let proj = Subcategory::from_atlas(&atlas, &atlas.projectives());
        let d = Decider::new(&atlas, &proj).unwrap();
        let (p1, p2) = (rep(&atlas, "S(1)"), rep(&atlas, "P(2)"));
        let sum = DirectSum::new(atlas.algebra(), &[p1.clone(), p2.clone()]);
        let zero = Rep::zero(atlas.algebra().clone());
        let input = FourTerm {
            k: sum.injections[0].clone(),
            d: sum.projections[1].clone(),
            e: Morphism::zero(&p2, &zero),
        };
        let (out, cert) = lemma39_construct(&input, &d).unwrap();
        assert!(out.is_exact());
        assert!(out.e.target().is_zero());
        recheck(atlas.algebra(), &cert).unwrap();
    }

    #[test]
    fn lemma39_rejects_bad_input() {
        let atlas = a3_atlas(2);
        let c = sub(&atlas, &["S(1)", "P(3)", "S(3)"]);
        let d = Decider::new(&atlas, &c).unwrap();
        let i2 = rep(&atlas, "I(2)");
        let zero = Rep::zero(atlas.algebra().clone());
        // I(2) is not in rG(C).
        let input = FourTerm {
            k: Morphism::zero(&zero, &zero),
            d: Morphism::zero(&zero, &i2),
            e: Morphism::identity(&i2),
        };
        assert!(lemma39_construct(&input, &d).is_err());
        // C = add(S1 ⊕ S2 ⊕ P3 ⊕ S3) is not self-orthogonal.
        let d = Decider::new(&atlas, &sub(&atlas, &["S(1)", "S(2)", "P(3)", "S(3)"])).unwrap();
        let p3 = rep(&atlas, "P(3)");
        let input = FourTerm {
            k: Morphism::zero(&zero, &zero),
            d: Morphism::zero(&zero, &p3),
            e: Morphism::identity(&p3),
        };
        assert!(lemma39_construct(&input, &d).is_err());
    }

    #[test]
    fn thm310_over_projectives() {
        let atlas = a3_atlas(2);
        let proj = Subcategory::from_atlas(&atlas, &atlas.projectives());
        let d = Decider::new(&atlas, &proj).unwrap();
        let s2 = rep(&atlas, "S(2)");
        let t = thm310_certificates(&s2, 0, &d).unwrap();
        assert!(!t.holds);
        assert_eq!(t.rg_pd, RelativeDimension::Finite(1));
        let t = thm310_certificates(&s2, 1, &d).unwrap();
        assert!(t.holds);
        let w2 = t.witness2.unwrap();
        assert!(iso(w2.h.source(), &rep(&atlas, "S(1)")));
        assert!(iso(w2.g.source(), &rep(&atlas, "P(2)")));
        assert_eq!(w2.c_pd.at_most(0), Some(true));
        assert_eq!(t.witness3.unwrap().c_pd.at_most(1), Some(true));
        recheck(atlas.algebra(), t.certificate.as_ref().unwrap()).unwrap();
    }

    #[test]
    fn thm310_members_and_example_subcategory() {
        let atlas = a3_atlas(2);
        let c = sub(&atlas, &["S(1)", "P(3)", "S(3)"]);
        let d = Decider::new(&atlas, &c).unwrap();
        let p2 = rep(&atlas, "P(2)");
        let t = thm310_certificates(&p2, 0, &d).unwrap();
        assert!(t.holds);
        let w2 = t.witness2.unwrap();
        assert!(w2.h.source().is_zero());
        assert!(iso(w2.g.source(), &p2));
        let w3 = t.witness3.unwrap();
        assert!(iso(w3.q.target(), &rep(&atlas, "S(3)")));
        recheck(atlas.algebra(), t.certificate.as_ref().unwrap()).unwrap();

        // S(2) has rG(C)-pd 1 through 0 -> S(1) -> P(2) -> S(2) -> 0.
        let s2 = rep(&atlas, "S(2)");
        assert!(!thm310_certificates(&s2, 0, &d).unwrap().holds);
        let t = thm310_certificates(&s2, 1, &d).unwrap();
        assert!(t.holds);
        assert_eq!(t.rg_pd, RelativeDimension::Finite(1));
        let w3 = t.witness3.unwrap();
        assert!(iso(w3.q.source(), &rep(&atlas, "I(2)")));
        assert_eq!(w3.c_pd, RelativeDimension::Finite(1));
        recheck(atlas.algebra(), t.certificate.as_ref().unwrap()).unwrap();
    }

    #[test]
    fn thm310_rad2_needs_two_steps() {
        let alg = corpus::a3_rad2(2);
        let atlas = atlas_of(&alg);
        let proj = Subcategory::from_atlas(&atlas, &atlas.projectives());
        let d = Decider::new(&atlas, &proj).unwrap();
        let s3 = relgor::rep::simple(&alg, 2);
        assert!(!thm310_certificates(&s3, 1, &d).unwrap().holds);
        let t = thm310_certificates(&s3, 2, &d).unwrap();
        assert!(t.holds);
        assert_eq!(t.witness2.as_ref().unwrap().resolution.len(), 2);
        assert_eq!(t.witness2.unwrap().c_pd.at_most(1), Some(true));
        recheck(&alg, t.certificate.as_ref().unwrap()).unwrap();
    }

    #[test]
    fn horseshoe_merges_along_the_approximation_sequence() {
        let atlas = a3_atlas(2);
        let c = sub(&atlas, &["S(1)", "P(3)", "S(3)"]);
        let (p2, p3) = (rep(&atlas, "P(2)"), rep(&atlas, "P(3)"));
        let f = hom_space(&p2, &p3).unwrap().basis()[0].clone();
        let q = f.cokernel();
        let ses = ses_check(&f, &q.projection).unwrap();
        let left = minimal_coresolution(&p2, &c, 4).unwrap().unwrap();
        let right = minimal_coresolution(&q.object, &c, 4).unwrap().unwrap();
        let depth = left.depth().max(right.depth());
        let out = horseshoe_merge(&ses, &left, &right, &c, depth).unwrap();
        assert_eq!(out.depth(), depth);
        assert!(out.verify(&c).unwrap());
        assert!(iso(out.object(), &p3));
    }

    #[test]
    fn horseshoe_on_split_and_rejected_sequences() {
        let atlas = a3_atlas(2);
        let c = sub(&atlas, &["S(1)", "P(3)", "S(3)"]);
        let (s1, s3) = (rep(&atlas, "S(1)"), rep(&atlas, "S(3)"));
        let ses = ShortExactSeq::split(&s1, &s3);
        let l = minimal_coresolution(&s1, &c, 1).unwrap().unwrap();
        let r = minimal_coresolution(&s3, &c, 1).unwrap().unwrap();
        let out = horseshoe_merge(&ses, &l, &r, &c, 1).unwrap();
        let expected = DirectSum::new(atlas.algebra(), &[s1.clone(), s3.clone()]).object;
        assert!(iso(out.terms()[0], &expected));

        // 0 -> S1 -> P3 -> I2 -> 0 is Hom(-, C)-exact, but I2 has no
        // C-coresolution, so nothing can be merged.
        let p3 = rep(&atlas, "P(3)");
        let f = hom_space(&s1, &p3).unwrap().basis()[0].clone();
        let q = f.cokernel();
        assert!(minimal_coresolution(&q.object, &c, 3).unwrap().is_none());
        // A non-Hom(-, C)-exact sequence is rejected: 0 -> S1 -> P2 -> S2 -> 0
        // with C = add(S1).
        let only_s1 = sub(&atlas, &["S(1)"]);
        let p2 = rep(&atlas, "P(2)");
        let f = hom_space(&s1, &p2).unwrap().basis()[0].clone();
        let q = f.cokernel();
        let ses = ses_check(&f, &q.projection).unwrap();
        let l = minimal_coresolution(&s1, &only_s1, 1).unwrap().unwrap();
        let err = horseshoe_merge(&ses, &l, &l, &only_s1, 1).unwrap_err();
        assert!(matches!(&err, GorensteinError::Rejected(s) if s.contains("Hom")), "{err}");
    }
}

mod random_instances {
    use super::*;
    use proptest::prelude::*;
    use relgor::gorenstein::{lemma39_construct, FourTerm};
    use relgor::rep::{hom_space, Rep};
    use relgor::subcat::is_self_orthogonal;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn lemma39_outputs_recheck(mask in 1u32..64, picks in proptest::collection::vec(0usize..6, 4), coeffs in proptest::collection::vec(0u32..2, 16)) {
            let atlas = a3_atlas(2);
            let chosen: Vec<usize> = (0..6).filter(|i| mask & (1 << i) != 0).collect();
            let c = Subcategory::from_atlas(&atlas, &chosen);
            prop_assume!(is_self_orthogonal(&c, &atlas, None).unwrap().holds());
            let d = Decider::new(&atlas, &c).unwrap();
            let rg = d.membership(Which::RG, Mode::Gfp).unwrap().members();
            let pick = |i: usize| atlas.rep(rg[picks[i] % rg.len()]).clone();
            let g1 = Rep::direct_sum(atlas.algebra(), &[pick(0), pick(1)]).object;
            let g0 = Rep::direct_sum(atlas.algebra(), &[pick(2), pick(3)]).object;
            let h = hom_space(&g1, &g0).unwrap();
            let f = h.element(&coeffs[..h.dim()]);
            let input = FourTerm { k: f.kernel().inclusion, e: f.cokernel().projection, d: f };
            let (out, cert) = lemma39_construct(&input, &d).unwrap();
            prop_assert!(out.is_exact());
            prop_assert!(recheck(atlas.algebra(), &cert).is_ok());
        }
    }
}

#[test]
fn left_side_matches_right_side_over_the_opposite_algebra() {
    for (name, alg) in corpus::all_finite(2) {
        let atlas = atlas_of(&alg);
        let dual = atlas.dual().unwrap();
        let n = atlas.len().min(6);
        for mask in 1u32..(1 << n) {
            let chosen: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let c = Subcategory::from_atlas(&atlas, &chosen);
            let d = Decider::new(&atlas, &c).unwrap();
            let dd = Decider::new(&dual, &Subcategory::from_atlas(&dual, &chosen)).unwrap();
            for (here, there) in [(Which::LG, Which::RG), (Which::Res, Which::Cores), (Which::G, Which::G)] {
                assert_eq!(
                    d.membership(here, Mode::Gfp).unwrap().members(),
                    dd.membership(there, Mode::Gfp).unwrap().members(),
                    "{name} {chosen:?} {here:?}"
                );
            }
        }
    }
}
