use std::sync::Arc;

use crate::exactla::Matrix;
use crate::quiver::{Algebra, Path};

use super::{DirectSum, Morphism, Rep, RepError};

/// The simple module at `v`.
pub fn simple(alg: &Arc<Algebra>, v: usize) -> Rep {
    let f = alg.field();
    let mut dims = vec![0; alg.num_vertices()];
    dims[v] = 1;
    let maps = alg
        .arrows()
        .iter()
        .map(|a| Matrix::zeros(f, dims[a.target], dims[a.source]))
        .collect();
    Rep::from_parts(alg.clone(), dims, maps)
}

/// `P(v)`: at `w`, the span of basis paths `v -> w`; arrows act by
/// extending paths.
pub fn projective(alg: &Arc<Algebra>, v: usize) -> Rep {
    let f = alg.field();
    let n = alg.num_vertices();
    let dims: Vec<usize> = (0..n).map(|w| alg.basis_dim(v, w)).collect();
    let maps = alg
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let mut m = Matrix::zeros(f, dims[a.target], dims[a.source]);
            for (j, p) in alg.basis_paths(v, a.source).iter().enumerate() {
                let mut q: Path = p.clone();
                q.arrows.push(ai);
                let coords = alg.reduce(v, a.target, &[(1, q)]);
                for (i, c) in coords.into_iter().enumerate() {
                    m.set(i, j, c);
                }
            }
            m
        })
        .collect();
    Rep::from_parts(alg.clone(), dims, maps)
}

/// `I(v) = D(P^op(v))`.
pub fn injective(alg: &Arc<Algebra>, v: usize) -> Rep {
    projective(&alg.opposite(), v).dualize().rebind(alg)
}

/// The morphism `P(v) -> M` sending the trivial path to `x ∈ M_v`.
pub fn proj_morphism(alg: &Arc<Algebra>, v: usize, target: &Rep, x: &[u32]) -> Morphism {
    let f = alg.field();
    let pv = projective(alg, v);
    let xv = Matrix::column(f, x);
    let maps = (0..alg.num_vertices())
        .map(|w| {
            let cols: Vec<Matrix> = alg
                .basis_paths(v, w)
                .iter()
                .map(|p| target.eval_path(p).mul(&xv))
                .collect();
            Matrix::hstack_all(f, target.dims()[w], &cols)
        })
        .collect();
    Morphism::from_parts(pv, target.clone(), maps)
}

/// A projective cover `P -> M`, with `P = ⊕ P(vertices[i])`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    pub vertices: Vec<usize>,
    pub sum: DirectSum,
    pub map: Morphism,
}

/// An injective envelope `M -> I`, with `I = ⊕ I(vertices[i])`.
#[derive(Clone, Debug)]
pub struct InjectiveEnvelope {
    pub vertices: Vec<usize>,
    pub sum: DirectSum,
    pub map: Morphism,
}

#[derive(Clone, Debug)]
pub struct CoverEnvelope {
    pub cover: ProjectiveCover,
    pub envelope: InjectiveEnvelope,
}

impl ProjectiveCover {
    pub fn object(&self) -> &Rep {
        &self.sum.object
    }
}

impl InjectiveEnvelope {
    pub fn object(&self) -> &Rep {
        &self.sum.object
    }
}

/// Lifts a basis of the top of `M` to generators.
pub fn projective_cover(m: &Rep) -> ProjectiveCover {
    let alg = m.algebra();
    let mut vertices = Vec::new();
    let mut parts = Vec::new();
    for (v, rad) in m.radical_spaces().iter().enumerate() {
        let q = rad.ambient_quotient();
        for r in 0..q.representatives.rows() {
            vertices.push(v);
            parts.push(proj_morphism(alg, v, m, q.representatives.row(r)));
        }
    }
    let objects: Vec<Rep> = vertices.iter().map(|&v| projective(alg, v)).collect();
    let sum = DirectSum::new(alg, &objects);
    let map = Morphism::row(&sum.object, m, &parts);
    debug_assert!(map.is_epi());
    ProjectiveCover { vertices, sum, map }
}

/// Dual of the projective cover of `DM`.
pub fn injective_envelope(m: &Rep) -> InjectiveEnvelope {
    let alg = m.algebra();
    let dm = m.dualize();
    let op = dm.algebra().clone();
    let mut vertices = Vec::new();
    let mut parts = Vec::new();
    for (v, rad) in dm.radical_spaces().iter().enumerate() {
        let q = rad.ambient_quotient();
        for r in 0..q.representatives.rows() {
            vertices.push(v);
            let g = proj_morphism(&op, v, &dm, q.representatives.row(r));
            let i = injective(alg, v);
            parts.push(g.dualize().with_ends(m, &i));
        }
    }
    let objects: Vec<Rep> = vertices.iter().map(|&v| injective(alg, v)).collect();
    let sum = DirectSum::new(alg, &objects);
    let map = Morphism::column(m, &sum.object, &parts);
    debug_assert!(map.is_mono());
    InjectiveEnvelope { vertices, sum, map }
}

pub fn cover_envelope(m: &Rep) -> CoverEnvelope {
    CoverEnvelope {
        cover: projective_cover(m),
        envelope: injective_envelope(m),
    }
}

impl Rep {
    pub fn simple(alg: &Arc<Algebra>, label: &str) -> Result<Rep, RepError> {
        let v = vertex(alg, label)?;
        Ok(simple(alg, v))
    }

    pub fn projective(alg: &Arc<Algebra>, label: &str) -> Result<Rep, RepError> {
        let v = vertex(alg, label)?;
        Ok(projective(alg, v))
    }

    pub fn injective(alg: &Arc<Algebra>, label: &str) -> Result<Rep, RepError> {
        let v = vertex(alg, label)?;
        Ok(injective(alg, v))
    }
}

fn vertex(alg: &Algebra, label: &str) -> Result<usize, RepError> {
    alg.vertex_index(label)
        .ok_or_else(|| RepError::UnknownVertex(label.to_string()))
}
