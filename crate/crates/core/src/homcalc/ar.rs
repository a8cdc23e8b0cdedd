use crate::exactla::{solve, Matrix};
use crate::quiver::Path;
use crate::rep::{endomorphism_radical, lift, proj_morphism, projective, projective_cover, DirectSum, Morphism, Rep};

use super::{ext_space, realize_ext1, HomcalcError, ShortExactSeq};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `τ = D Tr`
    Tau,
    /// `τ⁻¹ = Tr D`
    TauInverse,
}

/// The Auslander–Reiten translate, or `None` when the input is projective
/// (for `τ`) or injective (for `τ⁻¹`).
pub fn ar_translate(m: &Rep, direction: Direction) -> Result<Option<Rep>, HomcalcError> {
    match direction {
        Direction::Tau => tau(m),
        Direction::TauInverse => {
            let Some(t) = tau(&m.dualize())? else {
                return Ok(None);
            };
            Ok(Some(t.dualize().rebind(m.algebra())))
        }
    }
}

/// `D Tr M` from a minimal presentation `P_1 -> P_0 -> M -> 0`.
fn tau(m: &Rep) -> Result<Option<Rep>, HomcalcError> {
    if m.is_zero() {
        return Ok(None);
    }
    let alg = m.algebra();
    let op = alg.opposite();
    let cover0 = projective_cover(m);
    let ker = cover0.map.kernel();
    if ker.object.is_zero() {
        return Ok(None);
    }
    let cover1 = projective_cover(&ker.object);
    let d1 = cover1.map.then(&ker.inclusion);
    let f = alg.field();

    let tops: Vec<Rep> = cover1.vertices.iter().map(|&i| projective(&op, i)).collect();
    let sources: Vec<Rep> = cover0.vertices.iter().map(|&j| projective(&op, j)).collect();
    let target_sum = DirectSum::new(&op, &tops);
    let source_sum = DirectSum::new(&op, &sources);

    let mut columns = Vec::new();
    for (l, &j) in cover0.vertices.iter().enumerate() {
        let mut comps = Vec::new();
        for (k, &i) in cover1.vertices.iter().enumerate() {
            // The component P(i) -> P(j) is right multiplication by an
            // element of P(j)_i, a combination of paths j -> i.
            let gen = cover1.sum.injections[k].at(i).col(0);
            let img = d1.at(i).mul(&Matrix::column(f, &gen));
            let x = cover0.sum.projections[l].at(i).mul(&img).col(0);
            let paths = alg.basis_paths(j, i);
            let combo: Vec<(u32, Path)> = paths
                .iter()
                .zip(&x)
                .filter(|(_, &c)| c != 0)
                .map(|(p, &c)| (c, alg.reverse_path(p)))
                .collect();
            let coords = op.reduce(i, j, &combo);
            comps.push(proj_morphism(&op, j, &tops[k], &coords));
        }
        let col = Morphism::column(&sources[l], &target_sum.object, &comps);
        columns.push(col);
    }
    let dual_map = Morphism::row(&source_sum.object, &target_sum.object, &columns);
    let transpose = dual_map.cokernel().object;
    Ok(Some(transpose.dualize().rebind(alg)))
}

/// The almost split sequence `0 -> τZ -> E -> Z -> 0` for an indecomposable
/// non-projective `Z` whose endomorphism ring is local with residue field
/// `k`. `None` for projective `Z` or when no locality certificate exists.
pub fn ar_sequence(z: &Rep) -> Result<Option<ShortExactSeq>, HomcalcError> {
    let Some(x) = tau(z)? else {
        return Ok(None);
    };
    let Some(radical) = endomorphism_radical(z) else {
        return Ok(None);
    };
    let ext = ext_space(z, &x, 1)?;
    let d = ext.dim();
    if d == 0 {
        return Ok(None);
    }
    let cover = &ext.resolution.covers[0];
    let inc = &ext.resolution.inclusions[0];
    let f = z.field();
    // The End(Z)-socle of Ext^1(Z, τZ): classes killed by every radical
    // endomorphism acting through Ω.
    let mut blocks = Vec::new();
    for h in &radical {
        let target = cover.map.then(h);
        let psi = lift(&target, &cover.map)?.expect("projective cover lifts");
        let moved = inc.then(&psi);
        let maps = moved
            .maps()
            .iter()
            .zip(inc.maps())
            .map(|(mv, iv)| {
                if iv.cols() == 0 {
                    Matrix::zeros(f, 0, mv.cols())
                } else {
                    solve(iv, mv).expect("lift preserves the syzygy")
                }
            })
            .collect();
        let omega_h = Morphism::new(inc.source().clone(), inc.source().clone(), maps)?;
        let mut block = Matrix::zeros(f, d, d);
        for (c, b) in ext.basis().iter().enumerate() {
            let img = ext.classify(&omega_h.then(b)).expect("cocycle");
            for (r, v) in img.into_iter().enumerate() {
                block.set(r, c, v);
            }
        }
        blocks.push(block);
    }
    let stacked = Matrix::vstack_all(f, d, &blocks);
    let socle = stacked.nullspace();
    if socle.cols() == 0 {
        return Ok(None);
    }
    let u = ext.element(&socle.col(0));
    Ok(Some(realize_ext1(&ext, &u)?))
}
