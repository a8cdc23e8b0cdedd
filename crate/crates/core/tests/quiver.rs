use proptest::prelude::*;
use relgor::corpus;
use relgor::quiver::{validate_algebra, AlgebraDescription, ArrowDescription, FieldDescription, QuiverError};

/// Random acyclic quivers: arrows only go from a higher to a lower vertex
/// (or the reverse, per arrow, after relabelling the vertices).
fn acyclic() -> impl Strategy<Value = AlgebraDescription> {
    (1usize..6, prop::collection::vec((0usize..6, 0usize..6), 0..8), any::<bool>()).prop_map(|(n, pairs, flip)| {
        let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arrows = pairs
            .into_iter()
            .filter_map(|(a, b)| {
                let (a, b) = (a % n, b % n);
                (a != b).then(|| if (a > b) ^ flip { (a, b) } else { (b, a) })
            })
            .enumerate()
            .map(|(i, (s, t))| ArrowDescription {
                name: format!("x{i}"),
                from: vertices[s].clone(),
                to: vertices[t].clone(),
            })
            .collect();
        AlgebraDescription {
            field: FieldDescription { characteristic: 2 },
            vertices,
            arrows,
            relations: vec![],
        }
    })
}

/// Paths in a DAG counted by dynamic programming over sources.
fn path_count(d: &AlgebraDescription) -> usize {
    let n = d.vertices.len();
    let idx = |l: &str| d.vertices.iter().position(|v| v == l).unwrap();
    // paths starting at v = 1 + Σ over arrows v -> w of paths starting at w
    let mut memo = vec![None; n];
    fn from(v: usize, d: &AlgebraDescription, idx: &dyn Fn(&str) -> usize, memo: &mut Vec<Option<usize>>) -> usize {
        if let Some(c) = memo[v] {
            return c;
        }
        let mut c = 1;
        for a in d.arrows.iter().filter(|a| idx(&a.from) == v) {
            c += from(idx(&a.to), d, idx, memo);
        }
        memo[v] = Some(c);
        c
    }
    (0..n).map(|v| from(v, d, &idx, &mut memo)).sum()
}

proptest! {
    #[test]
    fn path_algebra_dimension_counts_paths(d in acyclic()) {
        let alg = validate_algebra(&d).unwrap();
        prop_assert_eq!(alg.dim(), path_count(&d));
        let total: usize = alg.path_basis().values().map(Vec::len).sum();
        prop_assert_eq!(total, alg.dim());
    }

    #[test]
    fn revalidation_is_stable(d in acyclic()) {
        let alg = validate_algebra(&d).unwrap();
        let json = serde_json::to_string(&alg.description()).unwrap();
        let back: AlgebraDescription = serde_json::from_str(&json).unwrap();
        let again = validate_algebra(&back).unwrap();
        prop_assert_eq!(again.description(), alg.description());
        prop_assert_eq!(again.fingerprint(), alg.fingerprint());
    }

    /// A back arrow closes a cycle whenever there is a path the other way.
    #[test]
    fn cycles_are_rejected(d in acyclic()) {
        if let Some(a) = d.arrows.first().cloned() {
            let mut bad = d.clone();
            bad.arrows.push(ArrowDescription { name: "back".into(), from: a.to, to: a.from });
            prop_assert!(matches!(validate_algebra(&bad), Err(QuiverError::Cycle(_))));
        }
    }
}

#[test]
fn corpus_round_trips() {
    for p in [2, 3] {
        for (_, alg) in corpus::all_finite(p) {
            let again = validate_algebra(&alg.description()).unwrap();
            assert_eq!(again.fingerprint(), alg.fingerprint());
            assert_eq!(again.dim(), alg.dim());
        }
    }
}
