use proptest::prelude::*;
use relgor::corpus;
use relgor::exactla::Matrix;
use relgor::rep::{
    decompose, endomorphism_radical, hom_space, injective, injective_envelope, is_isomorphic,
    morphism_parts, projective, projective_cover, simple, IsoVerdict, Morphism, Rep, RepData,
    RepError,
};
use std::sync::Arc;

fn rep(alg: &Arc<relgor::quiver::Algebra>, dims: &[usize], maps: &[&[&[i64]]]) -> Rep {
    let f = alg.field();
    let ms = alg
        .arrows()
        .iter()
        .zip(maps)
        .map(|(a, rows)| {
            let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
            Matrix::from_rows_shaped(f, dims[a.target], dims[a.source], &rows).unwrap()
        })
        .collect();
    Rep::new(alg.clone(), dims.to_vec(), ms).unwrap()
}

#[test]
fn a3_projective_and_injective_dimension_vectors() {
    let alg = corpus::a3(2);
    let dims = |m: Rep| m.dims().to_vec();
    assert_eq!(dims(projective(&alg, 0)), vec![1, 0, 0]);
    assert_eq!(dims(projective(&alg, 1)), vec![1, 1, 0]);
    assert_eq!(dims(projective(&alg, 2)), vec![1, 1, 1]);
    assert_eq!(dims(injective(&alg, 0)), vec![1, 1, 1]);
    assert_eq!(dims(injective(&alg, 1)), vec![0, 1, 1]);
    assert_eq!(dims(injective(&alg, 2)), vec![0, 0, 1]);
    assert!(Arc::ptr_eq(injective(&alg, 0).algebra(), &alg));
}

#[test]
fn truncated_a3_projective_loses_long_path() {
    let alg = corpus::a3_rad2(3);
    assert_eq!(projective(&alg, 2).dims(), &[0, 1, 1]);
    assert_eq!(injective(&alg, 0).dims(), &[1, 1, 0]);
}

#[test]
fn hom_from_projective_is_the_vertex_space() {
    for (_, alg) in corpus::all_finite(3) {
        let n = alg.num_vertices();
        let m = projective(&alg, n - 1);
        for v in 0..n {
            let h = hom_space(&projective(&alg, v), &m).unwrap();
            assert_eq!(h.dim(), m.dims()[v]);
            let h = hom_space(&m, &injective(&alg, v)).unwrap();
            assert_eq!(h.dim(), m.dims()[v]);
        }
    }
}

#[test]
fn relation_violation_is_rejected() {
    let alg = corpus::a3_rad2(2);
    let f = alg.field();
    let one = Matrix::identity(f, 1);
    let err = Rep::new(alg.clone(), vec![1, 1, 1], vec![one.clone(), one]).unwrap_err();
    assert_eq!(err, RepError::RelationViolated(0));
}

#[test]
fn handle_mismatch_is_an_error() {
    let a = corpus::a3(2);
    let b = corpus::d4(2);
    assert_eq!(
        hom_space(&simple(&a, 0), &simple(&b, 0)).unwrap_err(),
        RepError::HandleMismatch
    );
}

#[test]
fn kernel_cokernel_of_cover_of_simple() {
    let alg = corpus::a3(2);
    let s3 = simple(&alg, 2);
    let cover = projective_cover(&s3);
    assert_eq!(cover.vertices, vec![2]);
    let parts = morphism_parts(&cover.map);
    assert_eq!(parts.kernel.object.dims(), &[1, 1, 0]);
    assert!(parts.cokernel.object.is_zero());
    assert!(matches!(
        is_isomorphic(&parts.kernel.object, &projective(&alg, 1)).unwrap(),
        IsoVerdict::Isomorphic(_)
    ));
}

#[test]
fn envelope_of_simple_is_injective() {
    let alg = corpus::a3(3);
    let env = injective_envelope(&simple(&alg, 0));
    assert_eq!(env.vertices, vec![0]);
    assert!(env.map.is_mono());
    assert_eq!(env.object().dims(), &[1, 1, 1]);
}

#[test]
fn decomposition_of_direct_sum() {
    let alg = corpus::a3(2);
    let parts = vec![
        projective(&alg, 1),
        simple(&alg, 1),
        projective(&alg, 1),
        injective(&alg, 1),
    ];
    let sum = Rep::direct_sum(&alg, &parts).object;
    let d = decompose(&sum).unwrap();
    assert_eq!(d.summands.len(), 4);
    assert_eq!(d.num_classes(), 3);
    let mults: Vec<usize> = d.classes().iter().map(|(_, m)| *m).collect();
    assert_eq!(mults.iter().sum::<usize>(), 4);
    assert!(mults.contains(&2));
    assert!(d.iso.is_iso());
}

#[test]
fn kronecker_regular_modules() {
    let alg = corpus::kronecker(5);
    let m = |l: i64| rep(&alg, &[1, 1], &[&[&[1]], &[&[l]]]);
    assert!(m(2).is_indecomposable().unwrap());
    assert!(matches!(is_isomorphic(&m(2), &m(3)).unwrap(), IsoVerdict::NotIsomorphic));
    assert!(is_isomorphic(&m(2), &m(2)).unwrap().is_iso());
    assert_eq!(endomorphism_radical(&m(1)).unwrap().len(), 0);
}

#[test]
fn d4_subspace_module_is_indecomposable() {
    let alg = corpus::d4(3);
    let m = rep(
        &alg,
        &[2, 1, 1, 1],
        &[&[&[1], &[0]], &[&[0], &[1]], &[&[1], &[1]]],
    );
    let d = decompose(&m).unwrap();
    assert!(d.is_indecomposable());
    assert_eq!(hom_space(&m, &m).unwrap().dim(), 1);
}

#[test]
fn local_endomorphism_ring_has_radical_certificate() {
    let alg = corpus::a2(2);
    let p = projective(&alg, 1);
    assert_eq!(endomorphism_radical(&p).unwrap().len(), 0);
    let sum = Rep::direct_sum(&alg, &[p.clone(), p]).object;
    assert!(endomorphism_radical(&sum).is_none());
}

#[test]
fn dual_round_trip() {
    let alg = corpus::a3_rad2(3);
    let m = projective(&alg, 1);
    let dd = m.dualize().dualize();
    assert_eq!(dd, m);
    assert!(Arc::ptr_eq(dd.algebra(), &alg));
}

#[test]
fn serialization_round_trip() {
    let alg = corpus::d4(5);
    let m = injective(&alg, 0);
    let json = serde_json::to_string(&m.to_data()).unwrap();
    let data: RepData = serde_json::from_str(&json).unwrap();
    assert_eq!(Rep::from_data(alg, &data).unwrap(), m);
}

fn random_rep(alg: &Arc<relgor::quiver::Algebra>, dims: Vec<usize>, seed: Vec<u32>) -> Option<Rep> {
    let f = alg.field();
    let mut it = seed.into_iter().cycle();
    let maps = alg
        .arrows()
        .iter()
        .map(|a| {
            let (r, c) = (dims[a.target], dims[a.source]);
            Matrix::from_vec(f, r, c, (0..r * c).map(|_| it.next().unwrap_or(0)).collect())
        })
        .collect();
    Rep::new(alg.clone(), dims, maps).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_reassembles(dims in proptest::collection::vec(0usize..3, 4),
                                 seed in proptest::collection::vec(0u32..3, 1..12)) {
        let alg = corpus::d4(3);
        let m = random_rep(&alg, dims, seed).unwrap();
        let d = decompose(&m).unwrap();
        prop_assert!(d.iso.is_iso());
        let total: usize = d.summands.iter().map(Rep::total_dim).sum();
        prop_assert_eq!(total, m.total_dim());
        for s in &d.summands {
            prop_assert!(s.is_indecomposable().unwrap());
        }
    }

    #[test]
    fn hom_dimension_is_additive(d1 in proptest::collection::vec(0usize..3, 3),
                                 d2 in proptest::collection::vec(0usize..3, 3),
                                 seed in proptest::collection::vec(0u32..2, 1..8)) {
        let alg = corpus::a3(2);
        let m = random_rep(&alg, d1, seed.clone()).unwrap();
        let n = random_rep(&alg, d2, seed).unwrap();
        let s = Rep::direct_sum(&alg, &[m.clone(), n.clone()]).object;
        let lhs = hom_space(&s, &m).unwrap().dim();
        let rhs = hom_space(&m, &m).unwrap().dim() + hom_space(&n, &m).unwrap().dim();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn parts_satisfy_rank_identities(dims in proptest::collection::vec(0usize..3, 3),
                                     seed in proptest::collection::vec(0u32..3, 1..8)) {
        let alg = corpus::a3(3);
        let m = random_rep(&alg, dims, seed).unwrap();
        let cover = projective_cover(&m);
        let parts = morphism_parts(&cover.map);
        prop_assert!(cover.map.is_epi());
        prop_assert_eq!(parts.kernel.object.total_dim() + m.total_dim(), cover.object().total_dim());
        prop_assert!(parts.kernel.inclusion.then(&cover.map).is_zero());
        let id = Morphism::identity(&m);
        prop_assert!(hom_space(&m, &m).unwrap().contains(&id));
    }
}
