use proptest::prelude::*;
use relgor::corpus;
use relgor::homcalc::{enumerate_indecomposables, Atlas, Method};
use relgor::rep::{is_isomorphic, DirectSum, Rep};
use relgor::subcat::{
    gen_cogen_check, is_self_orthogonal, minimal_approximation, perp, Check, PerpSide, Side, Subcategory, Witness,
};

fn a3_atlas(p: u32) -> Atlas {
    enumerate_indecomposables(&corpus::a3(p), &Method::default()).unwrap()
}

fn idx(atlas: &Atlas, names: &[&str]) -> Vec<usize> {
    names.iter().map(|n| atlas.index_of_name(n).expect(n)).collect()
}

fn sub(atlas: &Atlas, names: &[&str]) -> Subcategory {
    Subcategory::from_atlas(atlas, &idx(atlas, names))
}

fn names(atlas: &Atlas, c: &Subcategory) -> Vec<String> {
    let mut out: Vec<String> = c.indices_in(atlas).unwrap().iter().map(|&i| atlas.name(i).to_string()).collect();
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
fn self_orthogonality() {
    for p in [2, 3] {
        let atlas = a3_atlas(p);
        let c = sub(&atlas, &["S(1)", "P(3)", "S(3)"]);
        assert_eq!(is_self_orthogonal(&c, &atlas, None).unwrap(), Check::Holds);
        let c = sub(&atlas, &["S(1)", "S(2)", "P(3)", "S(3)"]);
        let expected = Witness::Ext {
            source: atlas.index_of_name("S(2)").unwrap(),
            test: atlas.index_of_name("S(1)").unwrap(),
            degree: 1,
        };
        assert_eq!(is_self_orthogonal(&c, &atlas, None).unwrap(), Check::Fails { witness: expected });
        let proj = Subcategory::from_atlas(&atlas, &atlas.projectives());
        assert!(is_self_orthogonal(&proj, &atlas, None).unwrap().holds());
    }
}

#[test]
fn bounded_self_orthogonality_on_incomplete_atlas() {
    let alg = corpus::kronecker(2);
    let atlas = enumerate_indecomposables(&alg, &Method::Knitting { max_members: 6, max_dim: 4 }).unwrap();
    assert!(!atlas.is_complete());
    let proj = Subcategory::from_atlas(&atlas, &atlas.projectives());
    assert!(is_self_orthogonal(&proj, &atlas, None).is_err());
    assert!(is_self_orthogonal(&proj, &atlas, Some(3)).unwrap().holds());
}

#[test]
fn perpendicular_categories() {
    let atlas = a3_atlas(2);
    let inj = Subcategory::from_atlas(&atlas, &atlas.injectives());
    assert_eq!(names(&atlas, &perp(&inj, &atlas, PerpSide::Left, true).unwrap()), sorted(&ALL));
    let c = sub(&atlas, &["S(1)", "P(3)", "S(3)"]);
    assert_eq!(
        names(&atlas, &perp(&c, &atlas, PerpSide::Left, true).unwrap()),
        sorted(&["S(1)", "P(2)", "P(3)", "S(3)"])
    );
    let proj = Subcategory::from_atlas(&atlas, &atlas.projectives());
    assert_eq!(names(&atlas, &perp(&proj, &atlas, PerpSide::Right, true).unwrap()), sorted(&ALL));
}

#[test]
fn perp_needs_complete_atlas() {
    let alg = corpus::kronecker(2);
    let atlas = enumerate_indecomposables(&alg, &Method::Knitting { max_members: 6, max_dim: 4 }).unwrap();
    let proj = Subcategory::from_atlas(&atlas, &atlas.projectives());
    assert!(perp(&proj, &atlas, PerpSide::Left, false).is_err());
}

#[test]
fn approximation_examples() {
    let atlas = a3_atlas(3);
    let c = sub(&atlas, &["S(1)", "P(3)", "S(3)"]);
    for m in c.members() {
        let ap = minimal_approximation(m, &c, Side::Left).unwrap();
        assert!(ap.mono && ap.epi);
        assert!(ap.cokernel.object.is_zero());
    }
    let p2 = atlas.rep(atlas.index_of_name("P(2)").unwrap());
    let ap = minimal_approximation(p2, &c, Side::Left).unwrap();
    assert!(ap.mono);
    assert_eq!(ap.object().dims(), &[1, 1, 1]);
    assert_eq!(atlas.locate(&ap.cokernel.object).unwrap(), idx(&atlas, &["S(3)"]));

    let i2 = atlas.rep(atlas.index_of_name("I(2)").unwrap());
    let ap = minimal_approximation(i2, &c, Side::Left).unwrap();
    assert!(!ap.mono && ap.epi);
    assert_eq!(ap.object().dims(), &[0, 0, 1]);

    // Right approximation of P(2) is S(1) -> P(2), not epi.
    let ap = minimal_approximation(p2, &c, Side::Right).unwrap();
    assert!(!ap.epi);
    assert_eq!(ap.object().dims(), &[1, 0, 0]);
}

#[test]
fn empty_subcategory_gives_zero_maps() {
    let alg = corpus::a3(2);
    let atlas = a3_atlas(2);
    let empty = Subcategory::empty(&alg);
    let ap = minimal_approximation(atlas.rep(0), &empty, Side::Left).unwrap();
    assert!(ap.object().is_zero());
    assert_eq!(names(&atlas, &perp(&empty, &atlas, PerpSide::Left, true).unwrap()), sorted(&ALL));
}

#[test]
fn generator_cogenerator_examples() {
    let atlas = a3_atlas(2);
    let c = sub(&atlas, &["S(1)", "P(3)", "S(3)"]);
    let r = gen_cogen_check(&c, &c, &atlas).unwrap();
    assert!(r.generator.holds() && r.cogenerator.holds());

    let inj = Subcategory::from_atlas(&atlas, &atlas.injectives());
    let all = Subcategory::from_atlas(&atlas, &atlas.all());
    assert!(gen_cogen_check(&inj, &all, &atlas).unwrap().injective_cogenerator.holds());
    let proj = Subcategory::from_atlas(&atlas, &atlas.projectives());
    assert!(gen_cogen_check(&proj, &all, &atlas).unwrap().projective_generator.holds());

    let x = sub(&atlas, &["S(1)", "P(2)", "P(3)", "S(3)"]);
    let r = gen_cogen_check(&c, &x, &atlas).unwrap();
    assert!(r.injective_cogenerator.holds(), "{r:?}");
    assert!(!r.generator.holds());

    assert!(gen_cogen_check(&all, &c, &atlas).is_err());
}

#[test]
fn subcategory_membership_and_dedup() {
    let alg = corpus::a3(2);
    let atlas = a3_atlas(2);
    let s1 = atlas.rep(atlas.index_of_name("S(1)").unwrap()).clone();
    let p3 = atlas.rep(atlas.index_of_name("P(3)").unwrap()).clone();
    let both = Rep::direct_sum(&alg, &[s1.clone(), p3.clone(), s1]).object;
    let c = Subcategory::new(&alg, &[both.clone(), p3.clone()]).unwrap();
    assert_eq!(c.len(), 2);
    assert!(c.contains(&both).unwrap());
    assert!(!c.contains(atlas.rep(atlas.index_of_name("S(2)").unwrap())).unwrap());
    let dual = c.dual();
    assert_eq!(dual.len(), 2);
    assert!(c.contains(&Rep::zero(alg)).unwrap());
}

#[test]
fn perp_degree_one_contains_all_degrees() {
    for (name, alg) in corpus::all_finite(2) {
        let atlas = enumerate_indecomposables(&alg, &Method::default()).unwrap();
        let hereditary = corpus::hereditary(2).iter().any(|(n, _)| *n == name);
        for x in atlas.all() {
            let c = Subcategory::from_atlas(&atlas, &[x]);
            for side in [PerpSide::Left, PerpSide::Right] {
                let one = perp(&c, &atlas, side, false).unwrap().indices_in(&atlas).unwrap();
                let all = perp(&c, &atlas, side, true).unwrap().indices_in(&atlas).unwrap();
                assert!(all.iter().all(|i| one.contains(i)), "{name}");
                if hereditary {
                    assert_eq!(one, all, "{name}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn approximations_are_verified_and_minimal(mask in 1u32..64, a in 0usize..6, b in 0usize..6, left in any::<bool>()) {
        let atlas = a3_atlas(2);
        let chosen: Vec<usize> = (0..6).filter(|i| mask & (1 << i) != 0).collect();
        let c = Subcategory::from_atlas(&atlas, &chosen);
        let side = if left { Side::Left } else { Side::Right };
        let (ma, mb) = (atlas.rep(a), atlas.rep(b));
        let ap_a = minimal_approximation(ma, &c, side).unwrap();
        prop_assert!(ap_a.verify(&c).unwrap());
        prop_assert!(ap_a.removable(&c).unwrap().is_none());
        let ap_b = minimal_approximation(mb, &c, side).unwrap();
        let sum = Rep::direct_sum(atlas.algebra(), &[ma.clone(), mb.clone()]).object;
        let ap = minimal_approximation(&sum, &c, side).unwrap();
        prop_assert!(ap.verify(&c).unwrap());
        let expected = DirectSum::new(atlas.algebra(), &[ap_a.object().clone(), ap_b.object().clone()]).object;
        prop_assert!(is_isomorphic(ap.object(), &expected).unwrap().is_iso());
    }
}
