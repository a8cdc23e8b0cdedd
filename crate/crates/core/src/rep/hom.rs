use crate::audit;
use crate::exactla::{Matrix, Subspace};

use super::{Morphism, Rep, RepError};

/// `Hom(M, N)` with an explicit basis.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Rep,
    target: Rep,
    basis: Vec<Morphism>,
    /// Columns are the flattened basis morphisms.
    basis_matrix: Matrix,
    /// Row-reduced span of the basis, for membership tests.
    span: Subspace,
}

/// Solves the intertwining equations `N_a f_s = f_t M_a` for every arrow.
pub fn hom_space(m: &Rep, n: &Rep) -> Result<HomSpace, RepError> {
    if !m.same_algebra(n) {
        return Err(RepError::HandleMismatch);
    }
    let f = m.field();
    let alg = m.algebra();
    let nv = m.dims.len();
    let mut offset = vec![0usize; nv + 1];
    for v in 0..nv {
        offset[v + 1] = offset[v] + n.dims[v] * m.dims[v];
    }
    let nvars = offset[nv];
    let var = |v: usize, i: usize, j: usize| offset[v] + i * m.dims[v] + j;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (a, arr) in alg.arrows().iter().enumerate() {
        let (s, t) = (arr.source, arr.target);
        let na = &n.maps[a];
        let ma = &m.maps[a];
        for i in 0..n.dims[t] {
            for j in 0..m.dims[s] {
                let mut row = vec![0u32; nvars];
                for k in 0..n.dims[s] {
                    let c = na.get(i, k);
                    if c != 0 {
                        let x = var(s, k, j);
                        row[x] = f.add(row[x], c);
                    }
                }
                for k in 0..m.dims[t] {
                    let c = ma.get(k, j);
                    if c != 0 {
                        let x = var(t, i, k);
                        row[x] = f.sub(row[x], c);
                    }
                }
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_vec(f, rows.len(), nvars, rows.into_iter().flatten().collect());
    let null = system.nullspace();
    audit::record(system.rank() + null.cols() == nvars, "hom-space rank-nullity");
    let basis: Vec<Morphism> = (0..null.cols())
        .map(|c| {
            let col = null.col(c);
            let maps = (0..nv)
                .map(|v| Matrix::from_vec(f, n.dims[v], m.dims[v], col[offset[v]..offset[v + 1]].to_vec()))
                .collect();
            Morphism::from_parts(m.clone(), n.clone(), maps)
        })
        .collect();
    let span = Subspace::from_cols(&null);
    Ok(HomSpace {
        source: m.clone(),
        target: n.clone(),
        basis,
        basis_matrix: null,
        span,
    })
}

impl HomSpace {
    pub fn source(&self) -> &Rep {
        &self.source
    }

    pub fn target(&self) -> &Rep {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Morphism] {
        &self.basis
    }

    /// Coordinates of `f` in the basis, or `None` if the family of matrices
    /// is not a morphism between these objects.
    pub fn coordinates(&self, f: &Morphism) -> Option<Vec<u32>> {
        let v = f.to_vector();
        if v.len() != self.basis_matrix.rows() {
            return None;
        }
        let x = crate::exactla::solve(&self.basis_matrix, &Matrix::column(self.source.field(), &v))?;
        Some(x.col(0))
    }

    pub fn contains(&self, f: &Morphism) -> bool {
        self.span.contains(&f.to_vector())
    }

    /// `Σ c_i b_i`
    pub fn element(&self, coeffs: &[u32]) -> Morphism {
        let mut acc = Morphism::zero(&self.source, &self.target);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c != 0 {
                acc = acc.add(&b.scale(*c));
            }
        }
        acc
    }

    /// Number of elements `p^dim`, saturating.
    pub fn cardinality(&self) -> u128 {
        let p = self.source.field().characteristic() as u128;
        (0..self.dim()).fold(1u128, |acc, _| acc.saturating_mul(p))
    }

    /// Every element, in lexicographic coefficient order, when there are at
    /// most `budget` of them.
    pub fn elements(&self, budget: u128) -> Option<Vec<Morphism>> {
        if self.cardinality() > budget {
            return None;
        }
        let p = self.source.field().characteristic();
        let d = self.dim();
        let mut out = Vec::new();
        let mut coeffs = vec![0u32; d];
        loop {
            out.push(self.element(&coeffs));
            let mut i = 0;
            loop {
                if i == d {
                    return Some(out);
                }
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }
}

/// Some `φ: X -> E` with `g ∘ φ = h`, for `h: X -> M` and `g: E -> M`.
pub fn lift(h: &Morphism, g: &Morphism) -> Result<Option<Morphism>, RepError> {
    let hs = hom_space(h.source(), g.source())?;
    let images: Vec<Morphism> = hs.basis().iter().map(|b| b.then(g)).collect();
    Ok(solve_combination(&images, h).map(|c| hs.element(&c)))
}

/// Some `ψ: Y -> M` with `ψ ∘ f = h`, for `h: X -> M` and `f: X -> Y`.
pub fn extend(h: &Morphism, f: &Morphism) -> Result<Option<Morphism>, RepError> {
    let hs = hom_space(f.target(), h.target())?;
    let images: Vec<Morphism> = hs.basis().iter().map(|b| f.then(b)).collect();
    Ok(solve_combination(&images, h).map(|c| hs.element(&c)))
}

/// Coefficients `c` with `Σ c_i gens_i = goal`.
fn solve_combination(gens: &[Morphism], goal: &Morphism) -> Option<Vec<u32>> {
    let f = goal.source().field();
    let rhs = goal.to_vector();
    let cols: Vec<Vec<u32>> = gens.iter().map(Morphism::to_vector).collect();
    let mut a = Matrix::zeros(f, rhs.len(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, &x) in c.iter().enumerate() {
            a.set(i, j, x);
        }
    }
    let x = crate::exactla::solve(&a, &Matrix::column(f, &rhs))?;
    Some(x.col(0))
}
