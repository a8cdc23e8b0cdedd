//! Krull–Schmidt decomposition by Fitting splitting, with a locality
//! certificate for each summand, and isomorphism tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactla::{Matrix, Subspace};

use super::{hom_space, DirectSum, HomSpace, Morphism, Rep, RepError};

/// Largest Hom space (number of elements) searched exhaustively.
pub const ENUMERATION_BUDGET: u128 = 4096;

const RANDOM_TRIALS: usize = 64;

/// `M ≅ ⊕ summands`, grouped into isomorphism classes.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<Rep>,
    /// Class index of each summand; classes are numbered in order of first
    /// appearance.
    pub class_of: Vec<usize>,
    pub sum: DirectSum,
    /// `⊕ summands -> M`, an isomorphism.
    pub iso: Morphism,
}

impl Decomposition {
    pub fn num_classes(&self) -> usize {
        self.class_of.iter().max().map_or(0, |c| c + 1)
    }

    /// One representative and its multiplicity per class.
    pub fn classes(&self) -> Vec<(&Rep, usize)> {
        (0..self.num_classes())
            .map(|c| {
                let first = self.class_of.iter().position(|&x| x == c).unwrap();
                let mult = self.class_of.iter().filter(|&&x| x == c).count();
                (&self.summands[first], mult)
            })
            .collect()
    }

    pub fn is_indecomposable(&self) -> bool {
        self.summands.len() == 1
    }
}

#[derive(Clone, Debug)]
pub enum IsoVerdict {
    Isomorphic(Morphism),
    NotIsomorphic,
    Inconclusive,
}

impl IsoVerdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }
}

fn nilpotent_part(b: &Morphism) -> Option<Morphism> {
    let f = b.source().field();
    let id = Morphism::identity(b.source());
    f.elements().find_map(|l| {
        let g = b.sub(&id.scale(l));
        g.is_nilpotent().then_some(g)
    })
}

/// A basis of the radical of `End(M)` when `End(M)` is local with residue
/// field `k`: every basis element is a scalar plus a nilpotent, and the
/// nilpotent parts span a nilpotent ideal. `None` when this certificate
/// does not exist (in particular when `M` decomposes or is zero).
pub fn endomorphism_radical(m: &Rep) -> Option<Vec<Morphism>> {
    if m.is_zero() {
        return None;
    }
    let end = hom_space(m, m).ok()?;
    radical_certificate(&end)
}

fn radical_certificate(end: &HomSpace) -> Option<Vec<Morphism>> {
    let f = end.source().field();
    let mut parts = Vec::new();
    for b in end.basis() {
        parts.push(nilpotent_part(b)?);
    }
    let to_rows = |ms: &[Morphism]| {
        let vecs: Vec<Vec<u32>> = ms.iter().map(Morphism::to_vector).collect();
        let n = vecs.first().map_or(0, Vec::len);
        Matrix::from_vec(f, vecs.len(), n, vecs.into_iter().flatten().collect())
    };
    let w = Subspace::from_rows(&to_rows(&parts));
    let basis: Vec<Morphism> = (0..w.dim())
        .map(|r| from_vector(end, w.basis().row(r)))
        .collect();
    // Powers W ⊇ W^2 ⊇ ... must reach zero, and W·W ⊆ W.
    let mut power = basis.clone();
    for _ in 0..=m_dim(end) {
        if power.is_empty() {
            return Some(basis);
        }
        let prods: Vec<Morphism> = power
            .iter()
            .flat_map(|x| basis.iter().map(move |y| x.then(y)))
            .collect();
        if prods.iter().any(|p| !w.contains(&p.to_vector())) {
            return None;
        }
        let span = Subspace::from_rows(&to_rows(&prods));
        if span.dim() == 0 {
            return Some(basis);
        }
        power = (0..span.dim())
            .map(|r| from_vector(end, span.basis().row(r)))
            .collect();
    }
    None
}

fn m_dim(end: &HomSpace) -> usize {
    end.source().total_dim()
}

fn from_vector(end: &HomSpace, v: &[u32]) -> Morphism {
    let m = end.source();
    let n = end.target();
    let f = m.field();
    let mut off = 0;
    let maps = (0..m.dims().len())
        .map(|i| {
            let (r, c) = (n.dims()[i], m.dims()[i]);
            let mat = Matrix::from_vec(f, r, c, v[off..off + r * c].to_vec());
            off += r * c;
            mat
        })
        .collect();
    Morphism::from_parts(m.clone(), n.clone(), maps)
}

/// Outcome of looking for a Fitting splitting of `M`.
enum Split {
    /// `h = g^N` with `0 ≠ h` not invertible.
    Found(Morphism),
    Indecomposable,
}

fn fitting_power(g: &Morphism) -> Morphism {
    let n = g.source().total_dim() as u64;
    let maps = g.maps().iter().map(|m| m.pow(n)).collect();
    Morphism::from_parts(g.source().clone(), g.target().clone(), maps)
}

fn splits(g: &Morphism) -> Option<Morphism> {
    let h = fitting_power(g);
    (!h.is_zero() && !h.is_iso()).then_some(h)
}

/// Eigenvalues of an endomorphism over the prime field.
fn eigenvalues(g: &Morphism) -> Vec<u32> {
    let f = g.source().field();
    f.elements()
        .filter(|&l| {
            g.maps().iter().any(|m| {
                let shifted = m.sub(&Matrix::identity(f, m.rows()).scale(l));
                m.rows() > 0 && !shifted.is_invertible()
            })
        })
        .collect()
}

fn try_candidate(g: &Morphism) -> Option<Morphism> {
    let id = Morphism::identity(g.source());
    eigenvalues(g)
        .into_iter()
        .find_map(|l| splits(&g.sub(&id.scale(l))))
}

fn find_split(m: &Rep) -> Result<Split, RepError> {
    let end = hom_space(m, m)?;
    if end.dim() <= 1 || radical_certificate(&end).is_some() {
        return Ok(Split::Indecomposable);
    }
    let basis = end.basis();
    for b in basis {
        if let Some(h) = try_candidate(b) {
            return Ok(Split::Found(h));
        }
    }
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let cands = [basis[i].add(&basis[j]), basis[i].then(&basis[j])];
            for c in &cands {
                if let Some(h) = try_candidate(c) {
                    return Ok(Split::Found(h));
                }
            }
        }
    }
    let p = m.field().characteristic();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_f1771);
    for _ in 0..RANDOM_TRIALS {
        let coeffs: Vec<u32> = (0..end.dim()).map(|_| rng.gen_range(0..p)).collect();
        if let Some(h) = try_candidate(&end.element(&coeffs)) {
            return Ok(Split::Found(h));
        }
    }
    match end.elements(ENUMERATION_BUDGET) {
        Some(all) => Ok(all
            .iter()
            .find_map(splits)
            .map_or(Split::Indecomposable, Split::Found)),
        None => Err(RepError::DecompositionUnconfirmed(format!(
            "End has dimension {} and no splitting endomorphism was found",
            end.dim()
        ))),
    }
}

/// Collects bases (inside the original object) of indecomposable summands.
fn split_rec(m: &Rep, incl: &[Matrix], out: &mut Vec<(Rep, Vec<Matrix>)>) -> Result<(), RepError> {
    if m.is_zero() {
        return Ok(());
    }
    match find_split(m)? {
        Split::Indecomposable => out.push((m.clone(), incl.to_vec())),
        Split::Found(h) => {
            for bases in [
                h.maps().iter().map(Matrix::nullspace).collect::<Vec<_>>(),
                h.maps().iter().map(Matrix::column_space).collect::<Vec<_>>(),
            ] {
                let sub = m.subrep(&bases)?;
                let inner: Vec<Matrix> = incl.iter().zip(&bases).map(|(i, b)| i.mul(b)).collect();
                split_rec(&sub.object, &inner, out)?;
            }
        }
    }
    Ok(())
}

/// For indecomposables `S` and `T` with `S` local: some `g ∘ f` over basis
/// pairs is invertible exactly when `S ≅ T`, and then `f` is an iso.
pub fn indecomposables_iso(s: &Rep, t: &Rep) -> Result<Option<Morphism>, RepError> {
    if s.dims() != t.dims() {
        return Ok(None);
    }
    let st = hom_space(s, t)?;
    let ts = hom_space(t, s)?;
    for f in st.basis() {
        for g in ts.basis() {
            if !f.then(g).is_nilpotent() {
                debug_assert!(f.is_iso());
                return Ok(Some(f.clone()));
            }
        }
    }
    Ok(None)
}

/// Decomposes `M` into indecomposables. Fails when neither a splitting
/// endomorphism nor a locality proof could be produced within budget.
pub fn decompose(m: &Rep) -> Result<Decomposition, RepError> {
    let f = m.field();
    let ids: Vec<Matrix> = m.dims().iter().map(|&d| Matrix::identity(f, d)).collect();
    let mut found = Vec::new();
    split_rec(m, &ids, &mut found)?;
    let mut class_reps: Vec<usize> = Vec::new();
    let mut class_of = Vec::new();
    for i in 0..found.len() {
        let mut cls = None;
        for (c, &r) in class_reps.iter().enumerate() {
            if indecomposables_iso(&found[r].0, &found[i].0)?.is_some() {
                cls = Some(c);
                break;
            }
        }
        class_of.push(cls.unwrap_or_else(|| {
            class_reps.push(i);
            class_reps.len() - 1
        }));
    }
    // Order summands by class for readability.
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by_key(|&i| (class_of[i], i));
    let summands: Vec<Rep> = order.iter().map(|&i| found[i].0.clone()).collect();
    let class_of: Vec<usize> = order.iter().map(|&i| class_of[i]).collect();
    let sum = DirectSum::new(m.algebra(), &summands);
    let maps = (0..m.dims().len())
        .map(|v| {
            let blocks: Vec<Matrix> = order.iter().map(|&i| found[i].1[v].clone()).collect();
            Matrix::hstack_all(f, m.dims()[v], &blocks)
        })
        .collect();
    let iso = Morphism::from_parts(sum.object.clone(), m.clone(), maps);
    crate::audit::record(iso.is_iso(), "decomposition is an isomorphism");
    Ok(Decomposition {
        summands,
        class_of,
        sum,
        iso,
    })
}

fn search_iso(h: &HomSpace) -> Option<Morphism> {
    let basis = h.basis();
    if let Some(f) = basis.iter().find(|f| f.is_iso()) {
        return Some(f.clone());
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let c = basis[i].add(&basis[j]);
            if c.is_iso() {
                return Some(c);
            }
        }
    }
    let p = h.source().field().characteristic();
    let mut rng = ChaCha8Rng::seed_from_u64(0x150_7e57);
    for _ in 0..RANDOM_TRIALS {
        let coeffs: Vec<u32> = (0..h.dim()).map(|_| rng.gen_range(0..p)).collect();
        let c = h.element(&coeffs);
        if c.is_iso() {
            return Some(c);
        }
    }
    None
}

/// Decides `M ≅ N`, returning an explicit isomorphism when one exists.
pub fn is_isomorphic(m: &Rep, n: &Rep) -> Result<IsoVerdict, RepError> {
    if !m.same_algebra(n) {
        return Err(RepError::HandleMismatch);
    }
    if m.dims() != n.dims() {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    let mn = hom_space(m, n)?;
    if m.is_zero() {
        return Ok(IsoVerdict::Isomorphic(Morphism::zero(m, n)));
    }
    let mm = hom_space(m, m)?;
    let nm = hom_space(n, m)?;
    if mm.dim() != nm.dim() || mm.dim() != mn.dim() {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    if let Some(f) = search_iso(&mn) {
        return Ok(IsoVerdict::Isomorphic(f));
    }
    if let Some(all) = mn.elements(ENUMERATION_BUDGET) {
        return Ok(match all.into_iter().find(Morphism::is_iso) {
            Some(f) => IsoVerdict::Isomorphic(f),
            None => IsoVerdict::NotIsomorphic,
        });
    }
    let (dm, dn) = match (decompose(m), decompose(n)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Ok(IsoVerdict::Inconclusive),
    };
    if dm.summands.len() != dn.summands.len() {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    // Match summands greedily; Krull–Schmidt makes greedy matching exact.
    let mut used = vec![false; dn.summands.len()];
    let mut parts = Vec::new();
    for s in &dm.summands {
        let mut hit = None;
        for (j, t) in dn.summands.iter().enumerate() {
            if used[j] {
                continue;
            }
            if let Some(phi) = indecomposables_iso(s, t)? {
                hit = Some((j, phi));
                break;
            }
        }
        let Some((j, phi)) = hit else {
            return Ok(IsoVerdict::NotIsomorphic);
        };
        used[j] = true;
        parts.push(phi.then(&dn.sum.injections[j]).then(&dn.iso));
    }
    let from_sum = Morphism::row(&dm.sum.object, n, &parts);
    let inv = dm.iso.inverse().expect("decomposition iso is invertible");
    let f = inv.then(&from_sum);
    debug_assert!(f.is_iso());
    Ok(IsoVerdict::Isomorphic(f))
}

impl Rep {
    pub fn is_indecomposable(&self) -> Result<bool, RepError> {
        if self.is_zero() {
            return Ok(false);
        }
        Ok(matches!(find_split(self)?, Split::Indecomposable))
    }
}
