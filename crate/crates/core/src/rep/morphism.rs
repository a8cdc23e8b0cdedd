use std::sync::Arc;

use crate::audit;
use crate::exactla::{solve, Matrix, Subspace};
use crate::quiver::Algebra;

use super::{Rep, RepError};

/// A morphism of representations, one matrix per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: Rep,
    target: Rep,
    maps: Vec<Matrix>,
}

impl Morphism {
    /// Checks shapes and commutativity with every arrow.
    pub fn new(source: Rep, target: Rep, maps: Vec<Matrix>) -> Result<Morphism, RepError> {
        if !source.same_algebra(&target) {
            return Err(RepError::HandleMismatch);
        }
        if maps.len() != source.dims.len() {
            return Err(RepError::MorphismShape(maps.len()));
        }
        for (v, m) in maps.iter().enumerate() {
            if m.shape() != (target.dims[v], source.dims[v]) {
                return Err(RepError::MorphismShape(v));
            }
        }
        for (a, arr) in source.algebra.arrows().iter().enumerate() {
            let lhs = target.maps[a].mul(&maps[arr.source]);
            let rhs = maps[arr.target].mul(&source.maps[a]);
            if lhs != rhs {
                return Err(RepError::NotIntertwining(arr.name.clone()));
            }
        }
        Ok(Morphism { source, target, maps })
    }

    /// Trusted constructor; commutativity is checked in debug builds only.
    pub(crate) fn from_parts(source: Rep, target: Rep, maps: Vec<Matrix>) -> Morphism {
        let m = Morphism { source, target, maps };
        debug_assert!(m.commutes(), "constructed family is not a morphism");
        m
    }

    fn commutes(&self) -> bool {
        self.source.algebra.arrows().iter().enumerate().all(|(a, arr)| {
            self.target.maps[a].mul(&self.maps[arr.source]) == self.maps[arr.target].mul(&self.source.maps[a])
        })
    }

    pub fn identity(m: &Rep) -> Morphism {
        let maps = m.dims.iter().map(|&d| Matrix::identity(m.field(), d)).collect();
        Morphism {
            source: m.clone(),
            target: m.clone(),
            maps,
        }
    }

    pub fn zero(source: &Rep, target: &Rep) -> Morphism {
        let maps = (0..source.dims.len())
            .map(|v| Matrix::zeros(source.field(), target.dims[v], source.dims[v]))
            .collect();
        Morphism {
            source: source.clone(),
            target: target.clone(),
            maps,
        }
    }

    pub fn source(&self) -> &Rep {
        &self.source
    }

    pub fn target(&self) -> &Rep {
        &self.target
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn at(&self, v: usize) -> &Matrix {
        &self.maps[v]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Morphism) -> Morphism {
        debug_assert_eq!(self.target.dims, next.source.dims);
        let maps = self.maps.iter().zip(&next.maps).map(|(f, g)| g.mul(f)).collect();
        Morphism {
            source: self.source.clone(),
            target: next.target.clone(),
            maps,
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Morphism) -> Morphism {
        first.then(self)
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        let maps = self.maps.iter().zip(&other.maps).map(|(f, g)| f.add(g)).collect();
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            maps,
        }
    }

    pub fn sub(&self, other: &Morphism) -> Morphism {
        self.add(&other.scale(self.source.field().neg(1)))
    }

    pub fn scale(&self, c: u32) -> Morphism {
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().map(|f| f.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Matrix::is_zero)
    }

    pub fn rank(&self) -> usize {
        self.maps.iter().map(Matrix::rank).sum()
    }

    pub fn is_mono(&self) -> bool {
        self.rank() == self.source.total_dim()
    }

    pub fn is_epi(&self) -> bool {
        self.rank() == self.target.total_dim()
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<Morphism> {
        let maps = self.maps.iter().map(Matrix::inverse).collect::<Option<Vec<_>>>()?;
        Some(Morphism {
            source: self.target.clone(),
            target: self.source.clone(),
            maps,
        })
    }

    /// Is this endomorphism nilpotent?
    pub fn is_nilpotent(&self) -> bool {
        let n = self.source.total_dim().max(1) as u64;
        self.maps.iter().all(|m| m.pow(n).is_zero())
    }

    /// Entries of all components, vertex by vertex, row-major.
    pub fn to_vector(&self) -> Vec<u32> {
        self.maps.iter().flat_map(|m| m.data().iter().copied()).collect()
    }

    /// Replaces source and target by equal objects (possibly over another
    /// handle of the same algebra).
    pub fn with_ends(&self, source: &Rep, target: &Rep) -> Morphism {
        debug_assert_eq!(source.dims, self.source.dims);
        debug_assert_eq!(target.dims, self.target.dims);
        Morphism {
            source: source.clone(),
            target: target.clone(),
            maps: self.maps.clone(),
        }
    }

    /// The dual morphism `DN -> DM` over the opposite algebra.
    pub fn dualize(&self) -> Morphism {
        Morphism {
            source: self.target.dualize(),
            target: self.source.dualize(),
            maps: self.maps.iter().map(Matrix::transpose).collect(),
        }
    }

    /// `(f_1, ..., f_n)^T: A -> ⊕ T_i` given `f_i: A -> T_i`; `target` must
    /// be the direct sum of the targets in order.
    pub fn column(source: &Rep, target: &Rep, parts: &[Morphism]) -> Morphism {
        let f = source.field();
        let maps = (0..source.dims.len())
            .map(|v| {
                let blocks: Vec<Matrix> = parts.iter().map(|p| p.maps[v].clone()).collect();
                Matrix::vstack_all(f, source.dims[v], &blocks)
            })
            .collect();
        Morphism::from_parts(source.clone(), target.clone(), maps)
    }

    /// `(f_1, ..., f_n): ⊕ S_i -> B` given `f_i: S_i -> B`; `source` must be
    /// the direct sum of the sources in order.
    pub fn row(source: &Rep, target: &Rep, parts: &[Morphism]) -> Morphism {
        let f = target.field();
        let maps = (0..target.dims.len())
            .map(|v| {
                let blocks: Vec<Matrix> = parts.iter().map(|p| p.maps[v].clone()).collect();
                Matrix::hstack_all(f, target.dims[v], &blocks)
            })
            .collect();
        Morphism::from_parts(source.clone(), target.clone(), maps)
    }

    /// `f ⊕ g ⊕ ...` between the given direct sums.
    pub fn diagonal(source: &Rep, target: &Rep, parts: &[Morphism]) -> Morphism {
        let f = source.field();
        let maps = (0..source.dims.len())
            .map(|v| {
                let blocks: Vec<Matrix> = parts.iter().map(|p| p.maps[v].clone()).collect();
                Matrix::block_diag(f, &blocks)
            })
            .collect();
        Morphism::from_parts(source.clone(), target.clone(), maps)
    }
}

/// A direct sum with its canonical injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub object: Rep,
    pub injections: Vec<Morphism>,
    pub projections: Vec<Morphism>,
}

impl DirectSum {
    pub fn new(algebra: &Arc<Algebra>, parts: &[Rep]) -> DirectSum {
        let f = algebra.field();
        let n = algebra.num_vertices();
        let dims: Vec<usize> = (0..n).map(|v| parts.iter().map(|p| p.dims[v]).sum()).collect();
        let maps = (0..algebra.arrows().len())
            .map(|a| {
                let blocks: Vec<Matrix> = parts.iter().map(|p| p.maps[a].clone()).collect();
                Matrix::block_diag(f, &blocks)
            })
            .collect();
        let object = Rep::from_parts(algebra.clone(), dims.clone(), maps);
        let mut offsets = vec![0usize; n];
        let mut injections = Vec::new();
        let mut projections = Vec::new();
        for p in parts {
            let mut inj = Vec::new();
            let mut proj = Vec::new();
            for v in 0..n {
                let mut i = Matrix::zeros(f, dims[v], p.dims[v]);
                let mut q = Matrix::zeros(f, p.dims[v], dims[v]);
                for k in 0..p.dims[v] {
                    i.set(offsets[v] + k, k, 1);
                    q.set(k, offsets[v] + k, 1);
                }
                offsets[v] += p.dims[v];
                inj.push(i);
                proj.push(q);
            }
            let p = p.rebind(algebra);
            injections.push(Morphism::from_parts(p.clone(), object.clone(), inj));
            projections.push(Morphism::from_parts(object.clone(), p, proj));
        }
        DirectSum {
            object,
            injections,
            projections,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Kernel {
    pub object: Rep,
    pub inclusion: Morphism,
}

#[derive(Clone, Debug)]
pub struct Cokernel {
    pub object: Rep,
    pub projection: Morphism,
    /// A linear section of the projection at each vertex (not a morphism).
    pub section: Vec<Matrix>,
}

/// Kernel, image and cokernel of a morphism.
#[derive(Clone, Debug)]
pub struct MorphismParts {
    pub kernel: Kernel,
    pub image: Rep,
    /// `source -> image`
    pub coimage: Morphism,
    /// `image -> target`
    pub image_inclusion: Morphism,
    pub cokernel: Cokernel,
}

pub(super) fn subrep(m: &Rep, bases: &[Matrix]) -> Result<Kernel, RepError> {
    let f = m.field();
    let alg = &m.algebra;
    let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
    let mut maps = Vec::new();
    for (a, arr) in alg.arrows().iter().enumerate() {
        let image = m.maps[a].mul(&bases[arr.source]);
        let x = if dims[arr.target] == 0 {
            if !image.is_zero() {
                return Err(RepError::NotSubrepresentation);
            }
            Matrix::zeros(f, 0, dims[arr.source])
        } else {
            solve(&bases[arr.target], &image).ok_or(RepError::NotSubrepresentation)?
        };
        maps.push(x);
    }
    let object = Rep::from_parts(alg.clone(), dims, maps);
    let inclusion = Morphism::from_parts(object.clone(), m.clone(), bases.to_vec());
    Ok(Kernel { object, inclusion })
}

/// Cokernel of the inclusion of the column spans `subs[v] ⊆ N_v`.
pub(crate) fn quotient(n: &Rep, subs: &[Subspace]) -> Cokernel {
    let alg = &n.algebra;
    let quots: Vec<_> = subs.iter().map(Subspace::ambient_quotient).collect();
    let section: Vec<Matrix> = quots.iter().map(|q| q.representatives.transpose()).collect();
    let dims: Vec<usize> = quots.iter().map(|q| q.projection.rows()).collect();
    let maps = alg
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arr)| quots[arr.target].projection.mul(&n.maps[a]).mul(&section[arr.source]))
        .collect();
    let object = Rep::from_parts(alg.clone(), dims, maps);
    let projection = Morphism::from_parts(
        n.clone(),
        object.clone(),
        quots.iter().map(|q| q.projection.clone()).collect(),
    );
    Cokernel {
        object,
        projection,
        section,
    }
}

/// Kernel, image and cokernel, with rank identities audited.
pub fn morphism_parts(f: &Morphism) -> MorphismParts {
    let m = &f.source;
    let n = &f.target;
    let kbases: Vec<Matrix> = f.maps.iter().map(Matrix::nullspace).collect();
    let kernel = subrep(m, &kbases).expect("kernel is a subrepresentation");
    let ibases: Vec<Matrix> = f.maps.iter().map(Matrix::column_space).collect();
    let im = subrep(n, &ibases).expect("image is a subrepresentation");
    let coimage_maps = f
        .maps
        .iter()
        .zip(&ibases)
        .map(|(fv, iv)| {
            if iv.cols() == 0 {
                Matrix::zeros(fv.field(), 0, fv.cols())
            } else {
                solve(iv, fv).expect("image contains the values")
            }
        })
        .collect();
    let coimage = Morphism::from_parts(m.clone(), im.object.clone(), coimage_maps);
    let subs: Vec<Subspace> = ibases.iter().map(Subspace::from_cols).collect();
    let cokernel = quotient(n, &subs);
    for v in 0..m.dims.len() {
        let r = f.maps[v].rank();
        audit::record(kbases[v].cols() + r == m.dims[v], "kernel dimension");
        audit::record(cokernel.object.dims[v] + r == n.dims[v], "cokernel dimension");
        audit::record(
            cokernel.projection.maps[v].mul(&f.maps[v]).is_zero(),
            "cokernel kills image",
        );
    }
    MorphismParts {
        kernel,
        image: im.object,
        coimage,
        image_inclusion: im.inclusion,
        cokernel,
    }
}

impl Morphism {
    pub fn kernel(&self) -> Kernel {
        let kbases: Vec<Matrix> = self.maps.iter().map(Matrix::nullspace).collect();
        subrep(&self.source, &kbases).expect("kernel is a subrepresentation")
    }

    pub fn cokernel(&self) -> Cokernel {
        let subs: Vec<Subspace> = self.maps.iter().map(Subspace::from_cols).collect();
        quotient(&self.target, &subs)
    }

    /// Image as a subrepresentation of the target.
    pub fn image(&self) -> Kernel {
        let ibases: Vec<Matrix> = self.maps.iter().map(Matrix::column_space).collect();
        subrep(&self.target, &ibases).expect("image is a subrepresentation")
    }
}
