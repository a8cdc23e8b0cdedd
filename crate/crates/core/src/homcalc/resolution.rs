use crate::exactla::{solve, Matrix, Quotient, Subspace};
use crate::rep::{hom_space, proj_morphism, projective_cover, HomSpace, Morphism, ProjectiveCover, Rep};

use super::{pushout, ses_check, ExtVanishing, HomcalcError, ShortExactSeq};

/// A minimal projective resolution `... -> P_1 -> P_0 -> M -> 0`.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// `covers[i]: P_i -> Ω^i M`
    pub covers: Vec<ProjectiveCover>,
    /// `syzygies[i] = Ω^i M`, starting with `M`; one longer than `covers`.
    pub syzygies: Vec<Rep>,
    /// `inclusions[i]: Ω^{i+1} M -> P_i`
    pub inclusions: Vec<Morphism>,
    /// Reached a zero syzygy within the length bound.
    pub complete: bool,
}

impl Resolution {
    /// `P_i -> P_{i-1}` for `i ≥ 1`.
    pub fn differential(&self, i: usize) -> Morphism {
        self.covers[i].map.then(&self.inclusions[i - 1])
    }

    /// Projective dimension when the resolution is complete (`None` for the
    /// zero object or a truncated resolution).
    pub fn length(&self) -> Option<usize> {
        (self.complete && !self.covers.is_empty()).then(|| self.covers.len() - 1)
    }

    pub fn terms(&self) -> Vec<&Rep> {
        self.covers.iter().map(|c| c.object()).collect()
    }
}

/// Minimal projective resolution with at most `max_length + 1` projective
/// terms.
pub fn proj_resolution(m: &Rep, max_length: usize) -> Resolution {
    let mut covers = Vec::new();
    let mut syzygies = vec![m.clone()];
    let mut inclusions = Vec::new();
    let mut complete = m.is_zero();
    while !complete && covers.len() <= max_length {
        let current = syzygies.last().unwrap();
        let cover = projective_cover(current);
        let ker = cover.map.kernel();
        complete = ker.object.is_zero();
        syzygies.push(ker.object);
        inclusions.push(ker.inclusion);
        covers.push(cover);
    }
    Resolution {
        covers,
        syzygies,
        inclusions,
        complete,
    }
}

/// `Ext^n(M, N) = Hom(Ω^n M, N) / (maps factoring through Ω^n M -> P_{n-1})`.
#[derive(Clone, Debug)]
pub struct ExtSpace {
    pub degree: usize,
    pub resolution: Resolution,
    /// `Hom(Ω^n M, N)`
    pub cocycles: HomSpace,
    /// Coboundaries, in cocycle coordinates.
    pub coboundaries: Subspace,
    quotient: Quotient,
}

pub fn ext_space(m: &Rep, n: &Rep, degree: usize) -> Result<ExtSpace, HomcalcError> {
    if degree == 0 {
        return Err(HomcalcError::BadDegree);
    }
    let resolution = proj_resolution(m, degree);
    let zero = Rep::zero(m.algebra().clone());
    let omega = resolution.syzygies.get(degree).cloned().unwrap_or(zero);
    let cocycles = hom_space(&omega, n)?;
    let f = m.field();
    let mut rows = Vec::new();
    if let (Some(inc), Some(cover)) = (resolution.inclusions.get(degree - 1), resolution.covers.get(degree - 1)) {
        let from_p = hom_space(cover.object(), n)?;
        for b in from_p.basis() {
            let r = inc.then(b);
            rows.push(cocycles.coordinates(&r).expect("restriction is a morphism"));
        }
    }
    let d = cocycles.dim();
    let cob = Matrix::from_vec(f, rows.len(), d, rows.into_iter().flatten().collect());
    let coboundaries = Subspace::from_rows(&cob);
    let quotient = coboundaries.ambient_quotient();
    Ok(ExtSpace {
        degree,
        resolution,
        cocycles,
        coboundaries,
        quotient,
    })
}

impl ExtSpace {
    pub fn dim(&self) -> usize {
        self.quotient.representatives.rows()
    }

    /// Cocycle representatives of a basis of Ext.
    pub fn basis(&self) -> Vec<Morphism> {
        (0..self.dim())
            .map(|r| self.cocycles.element(self.quotient.representatives.row(r)))
            .collect()
    }

    /// The cocycle `Σ c_i basis_i`.
    pub fn element(&self, coeffs: &[u32]) -> Morphism {
        let f = self.cocycles.source().field();
        let mut acc = vec![0u32; self.cocycles.dim()];
        for (r, &c) in coeffs.iter().enumerate() {
            for (a, &x) in acc.iter_mut().zip(self.quotient.representatives.row(r)) {
                *a = f.add(*a, f.mul(c, x));
            }
        }
        self.cocycles.element(&acc)
    }

    /// Class of a cocycle in basis coordinates.
    pub fn classify(&self, u: &Morphism) -> Option<Vec<u32>> {
        let coords = self.cocycles.coordinates(u)?;
        let f = self.cocycles.source().field();
        Some(self.quotient.projection.mul(&Matrix::column(f, &coords)).col(0))
    }

    /// All classes (coefficient vectors) when there are at most `budget`.
    pub fn classes(&self, budget: u128) -> Option<Vec<Vec<u32>>> {
        let p = self.cocycles.source().field().characteristic();
        let d = self.dim();
        let count = (0..d).fold(1u128, |acc, _| acc.saturating_mul(p as u128));
        if count > budget {
            return None;
        }
        let mut out = Vec::new();
        let mut c = vec![0u32; d];
        loop {
            out.push(c.clone());
            let mut i = 0;
            loop {
                if i == d {
                    return Some(out);
                }
                c[i] += 1;
                if c[i] < p {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
        }
    }
}

/// `dim Ext^n(M, N)`.
pub fn ext_dim(m: &Rep, n: &Rep, degree: usize) -> Result<usize, HomcalcError> {
    Ok(ext_space(m, n, degree)?.dim())
}

/// Realizes the class of a degree-one cocycle `u: ΩM -> N` as
/// `0 -> N -> E -> M -> 0`, with `E` the pushout of `ΩM -> P_0` along `u`.
pub fn realize_ext1(ext: &ExtSpace, u: &Morphism) -> Result<ShortExactSeq, HomcalcError> {
    if ext.degree != 1 {
        return Err(HomcalcError::BadDegree);
    }
    let m = &ext.resolution.syzygies[0];
    let n = ext.cocycles.target();
    let Some(inc) = ext.resolution.inclusions.first() else {
        return Ok(ShortExactSeq::split(n, m));
    };
    let cover = &ext.resolution.covers[0];
    let po = pushout(inc, u);
    let zero = Morphism::zero(n, m);
    let g = po
        .factor(&cover.map, &zero)
        .expect("cover map vanishes on the syzygy");
    ses_check(&po.from_c, &g)
}

/// The class in `Ext^1(M, N)` of `0 -> N -f-> E -g-> M -> 0`, computed by
/// lifting the projective cover of `M` through `g`.
pub fn classify_ses(ext: &ExtSpace, ses: &ShortExactSeq) -> Result<Vec<u32>, HomcalcError> {
    if ext.degree != 1 {
        return Err(HomcalcError::BadDegree);
    }
    let Some(inc) = ext.resolution.inclusions.first() else {
        return Ok(vec![]);
    };
    let cover = &ext.resolution.covers[0];
    let e = ses.middle();
    let alg = e.algebra();
    // Lift each generator of P_0.
    let mut parts = Vec::new();
    for (i, &v) in cover.vertices.iter().enumerate() {
        let gen = cover.sum.injections[i].at(v).col(0);
        let x = cover.map.at(v).mul(&Matrix::column(alg.field(), &gen));
        let y = solve(ses.g.at(v), &x).ok_or(HomcalcError::NotExact {
            vertex: v,
            detail: "second map is not surjective".into(),
        })?;
        parts.push(proj_morphism(alg, v, e, &y.col(0)));
    }
    let phi = Morphism::row(cover.object(), e, &parts);
    let restricted = inc.then(&phi);
    let maps = restricted
        .maps()
        .iter()
        .zip(ses.f.maps())
        .map(|(r, fv)| {
            if fv.cols() == 0 {
                Matrix::zeros(r.field(), 0, r.cols())
            } else {
                solve(fv, r).expect("lift lands in the image of the first map")
            }
        })
        .collect();
    let u = Morphism::new(inc.source().clone(), ses.left().clone(), maps)?;
    Ok(ext.classify(&u).expect("cocycle"))
}

/// Checks `Ext^n(M, T) = 0` for `n = 1..=bound` and every test object.
/// Vanishing is definitive only when the resolution of `M` ends within the
/// bound.
pub fn ext_vanishes_bounded(m: &Rep, tests: &[Rep], bound: usize) -> Result<ExtVanishing, HomcalcError> {
    let res = proj_resolution(m, bound);
    for n in 1..=bound {
        let Some(omega) = res.syzygies.get(n) else { break };
        if omega.is_zero() {
            break;
        }
        let cover = &res.covers[n - 1];
        let inc = &res.inclusions[n - 1];
        for (t, c) in tests.iter().enumerate() {
            let cocycles = hom_space(omega, c)?.dim();
            let through = hom_space(cover.object(), c)?;
            let restricted: Vec<Vec<u32>> = through.basis().iter().map(|b| inc.then(b).to_vector()).collect();
            let cols = restricted.first().map_or(0, Vec::len);
            let rank = Matrix::from_vec(m.field(), restricted.len(), cols, restricted.into_iter().flatten().collect()).rank();
            if cocycles > rank {
                return Ok(ExtVanishing::Fails {
                    degree: n,
                    source: None,
                    test: t,
                });
            }
        }
    }
    Ok(if res.complete {
        ExtVanishing::Vanishes
    } else {
        ExtVanishing::Inconclusive
    })
}
