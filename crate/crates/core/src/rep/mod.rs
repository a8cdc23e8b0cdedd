//! Finite-dimensional representations of a bound quiver and their
//! morphisms.
//!
//! A representation assigns a space `k^{d_v}` to each vertex and, to each
//! arrow `a: s -> t`, a `d_t x d_s` matrix. Morphisms are families of
//! matrices `f_v: M_v -> N_v` commuting with the arrow maps.

mod decompose;
mod hom;
mod morphism;
mod standard;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{Field, LinalgError, Matrix};
use crate::quiver::{Algebra, Path};

pub use decompose::{
    decompose, endomorphism_radical, indecomposables_iso, is_isomorphic, Decomposition, IsoVerdict,
    ENUMERATION_BUDGET,
};
pub use hom::{extend, hom_space, lift, HomSpace};
pub use morphism::{morphism_parts, Cokernel, DirectSum, Kernel, Morphism, MorphismParts};
pub use standard::{
    cover_envelope, injective, injective_envelope, proj_morphism, projective, projective_cover,
    simple, CoverEnvelope, InjectiveEnvelope, ProjectiveCover,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("representation has {got} vertex spaces, algebra has {expected} vertices")]
    VertexCount { expected: usize, got: usize },
    #[error("arrow `{arrow}` needs a {rows}x{cols} matrix")]
    ArrowShape {
        arrow: String,
        rows: usize,
        cols: usize,
    },
    #[error("relation {0} does not vanish")]
    RelationViolated(usize),
    #[error("objects live over different algebras")]
    HandleMismatch,
    #[error("morphism component at vertex {0} has the wrong shape")]
    MorphismShape(usize),
    #[error("family of matrices does not commute with arrow `{0}`")]
    NotIntertwining(String),
    #[error("subspaces are not closed under the arrow maps")]
    NotSubrepresentation,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("could not confirm the decomposition: {0}")]
    DecompositionUnconfirmed(String),
}

/// A representation of a bound quiver.
#[derive(Clone, Debug)]
pub struct Rep {
    algebra: Arc<Algebra>,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl PartialEq for Rep {
    fn eq(&self, other: &Self) -> bool {
        *self.algebra == *other.algebra && self.dims == other.dims && self.maps == other.maps
    }
}

impl Eq for Rep {}

/// Serialized form: vertex dimensions and one matrix (list of rows) per
/// arrow, keyed by arrow name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepData {
    pub dims: Vec<usize>,
    pub maps: std::collections::BTreeMap<String, Vec<Vec<i64>>>,
}

impl Rep {
    /// Builds a representation, checking shapes and relations.
    pub fn new(algebra: Arc<Algebra>, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Rep, RepError> {
        if dims.len() != algebra.num_vertices() {
            return Err(RepError::VertexCount {
                expected: algebra.num_vertices(),
                got: dims.len(),
            });
        }
        if maps.len() != algebra.arrows().len() {
            return Err(RepError::Linalg(LinalgError::Shape(format!(
                "{} arrow matrices for {} arrows",
                maps.len(),
                algebra.arrows().len()
            ))));
        }
        for (a, m) in algebra.arrows().iter().zip(&maps) {
            if m.shape() != (dims[a.target], dims[a.source]) || m.field() != algebra.field() {
                return Err(RepError::ArrowShape {
                    arrow: a.name.clone(),
                    rows: dims[a.target],
                    cols: dims[a.source],
                });
            }
        }
        let rep = Rep { algebra, dims, maps };
        for (i, r) in rep.algebra.relations().iter().enumerate() {
            let mut acc = Matrix::zeros(rep.field(), rep.dims[r.target], rep.dims[r.source]);
            for (c, p) in &r.terms {
                acc = acc.add(&rep.eval_path(p).scale(*c));
            }
            if !acc.is_zero() {
                return Err(RepError::RelationViolated(i));
            }
        }
        Ok(rep)
    }

    /// Builds without relation checks; callers guarantee validity.
    pub(crate) fn from_parts(algebra: Arc<Algebra>, dims: Vec<usize>, maps: Vec<Matrix>) -> Rep {
        debug_assert!(algebra
            .arrows()
            .iter()
            .zip(&maps)
            .all(|(a, m)| m.shape() == (dims[a.target], dims[a.source])));
        Rep { algebra, dims, maps }
    }

    pub fn from_data(algebra: Arc<Algebra>, data: &RepData) -> Result<Rep, RepError> {
        let f = algebra.field();
        if data.dims.len() != algebra.num_vertices() {
            return Err(RepError::VertexCount {
                expected: algebra.num_vertices(),
                got: data.dims.len(),
            });
        }
        let mut maps = Vec::new();
        for a in algebra.arrows() {
            let (r, c) = (data.dims[a.target], data.dims[a.source]);
            let m = match data.maps.get(&a.name) {
                Some(rows) => Matrix::from_rows_shaped(f, r, c, rows).map_err(|_| RepError::ArrowShape {
                    arrow: a.name.clone(),
                    rows: r,
                    cols: c,
                })?,
                None if r == 0 || c == 0 => Matrix::zeros(f, r, c),
                None => {
                    return Err(RepError::ArrowShape {
                        arrow: a.name.clone(),
                        rows: r,
                        cols: c,
                    })
                }
            };
            maps.push(m);
        }
        Rep::new(algebra, data.dims.clone(), maps)
    }

    pub fn to_data(&self) -> RepData {
        RepData {
            dims: self.dims.clone(),
            maps: self
                .algebra
                .arrows()
                .iter()
                .zip(&self.maps)
                .map(|(a, m)| {
                    let rows = m.to_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect();
                    (a.name.clone(), rows)
                })
                .collect(),
        }
    }

    pub fn zero(algebra: Arc<Algebra>) -> Rep {
        let n = algebra.num_vertices();
        let f = algebra.field();
        let maps = algebra.arrows().iter().map(|_| Matrix::zeros(f, 0, 0)).collect();
        Rep {
            algebra,
            dims: vec![0; n],
            maps,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_at(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn arrow_map(&self, a: usize) -> &Matrix {
        &self.maps[a]
    }

    /// Same object over another handle of an equal algebra.
    pub fn rebind(&self, algebra: &Arc<Algebra>) -> Rep {
        debug_assert!(**algebra == *self.algebra);
        Rep {
            algebra: algebra.clone(),
            dims: self.dims.clone(),
            maps: self.maps.clone(),
        }
    }

    pub fn same_algebra(&self, other: &Rep) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra
    }

    /// The linear map of a path, `d_target x d_start`.
    pub fn eval_path(&self, p: &Path) -> Matrix {
        let mut acc = Matrix::identity(self.field(), self.dims[p.start]);
        for &a in &p.arrows {
            acc = self.maps[a].mul(&acc);
        }
        acc
    }

    /// Direct sum of a list of representations, with structure maps.
    pub fn direct_sum(algebra: &Arc<Algebra>, parts: &[Rep]) -> DirectSum {
        DirectSum::new(algebra, parts)
    }

    /// The dual representation over the opposite algebra.
    pub fn dualize(&self) -> Rep {
        Rep {
            algebra: self.algebra.opposite(),
            dims: self.dims.clone(),
            maps: self.maps.iter().map(Matrix::transpose).collect(),
        }
    }

    /// `rad M`: at each vertex, the sum of images of incoming arrows.
    pub fn radical_spaces(&self) -> Vec<crate::exactla::Subspace> {
        use crate::exactla::Subspace;
        (0..self.dims.len())
            .map(|v| {
                let mut s = Subspace::zero(self.field(), self.dims[v]);
                for (a, arr) in self.algebra.arrows().iter().enumerate() {
                    if arr.target == v {
                        s = s.sum(&Subspace::from_cols(&self.maps[a]));
                    }
                }
                s
            })
            .collect()
    }

    /// `soc M`: at each vertex, the common kernel of outgoing arrows.
    pub fn socle_spaces(&self) -> Vec<crate::exactla::Subspace> {
        use crate::exactla::Subspace;
        (0..self.dims.len())
            .map(|v| {
                let out: Vec<Matrix> = self
                    .algebra
                    .arrows()
                    .iter()
                    .enumerate()
                    .filter(|(_, arr)| arr.source == v)
                    .map(|(a, _)| self.maps[a].clone())
                    .collect();
                let stacked = Matrix::vstack_all(self.field(), self.dims[v], &out);
                Subspace::from_cols(&stacked.nullspace())
            })
            .collect()
    }

    /// Dimension vector of the top `M / rad M`.
    pub fn top_dims(&self) -> Vec<usize> {
        self.radical_spaces()
            .iter()
            .zip(&self.dims)
            .map(|(s, d)| d - s.dim())
            .collect()
    }

    /// Dimension vector of the socle.
    pub fn socle_dims(&self) -> Vec<usize> {
        self.socle_spaces().iter().map(|s| s.dim()).collect()
    }

    /// Subrepresentation spanned at each vertex by the given columns, which
    /// must be linearly independent and closed under the arrow maps.
    pub fn subrep(&self, bases: &[Matrix]) -> Result<Kernel, RepError> {
        morphism::subrep(self, bases)
    }

    /// `M / U` for subspaces `U_v` closed under the arrow maps.
    pub fn quotient_by(&self, subs: &[crate::exactla::Subspace]) -> Rep {
        morphism::quotient(self, subs).object
    }

    /// Short human-readable dimension vector, e.g. `(1,1,0)`.
    pub fn dim_vector_string(&self) -> String {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        format!("({})", parts.join(","))
    }
}
