use std::collections::VecDeque;
use std::sync::Arc;

use crate::exactla::Matrix;
use crate::quiver::Algebra;
use crate::rep::{decompose, indecomposables_iso, injective, projective, Rep};

use super::{ar_sequence, ar_translate, Atlas, Direction, HomcalcError};

/// Knitting stops (and the atlas is flagged incomplete) beyond this many
/// indecomposables.
pub const DEFAULT_KNIT_MAX_MEMBERS: usize = 100;
/// Knitting ignores (and flags) indecomposables of larger total dimension.
pub const DEFAULT_KNIT_MAX_DIM: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Method {
    /// Close the indecomposable projectives and injectives under `τ`,
    /// `τ⁻¹` and irreducible maps.
    Knitting { max_members: usize, max_dim: usize },
    /// Every representation with dimension vector bounded componentwise,
    /// decomposed and deduplicated. Never flagged complete.
    BruteForce { dim_bound: Vec<usize>, max_tuples: u128 },
}

impl Default for Method {
    fn default() -> Self {
        Method::Knitting {
            max_members: DEFAULT_KNIT_MAX_MEMBERS,
            max_dim: DEFAULT_KNIT_MAX_DIM,
        }
    }
}

struct Collector {
    found: Vec<Rep>,
    queue: VecDeque<usize>,
    complete: bool,
    max_members: usize,
    max_dim: usize,
}

impl Collector {
    fn offer(&mut self, m: &Rep) -> Result<(), HomcalcError> {
        if m.is_zero() {
            return Ok(());
        }
        let d = match decompose(m) {
            Ok(d) => d,
            Err(_) => {
                self.complete = false;
                return Ok(());
            }
        };
        for s in d.summands {
            self.offer_indecomposable(s)?;
        }
        Ok(())
    }

    fn offer_indecomposable(&mut self, s: Rep) -> Result<(), HomcalcError> {
        for f in &self.found {
            if f.dims() == s.dims() && indecomposables_iso(f, &s)?.is_some() {
                return Ok(());
            }
        }
        if s.total_dim() > self.max_dim || self.found.len() >= self.max_members {
            self.complete = false;
            return Ok(());
        }
        self.found.push(s);
        self.queue.push_back(self.found.len() - 1);
        Ok(())
    }
}

fn knit(alg: &Arc<Algebra>, max_members: usize, max_dim: usize) -> Result<(Vec<Rep>, bool), HomcalcError> {
    let mut c = Collector {
        found: vec![],
        queue: VecDeque::new(),
        complete: true,
        max_members,
        max_dim,
    };
    for v in 0..alg.num_vertices() {
        c.offer_indecomposable(projective(alg, v))?;
        c.offer_indecomposable(injective(alg, v))?;
    }
    while let Some(i) = c.queue.pop_front() {
        let x = c.found[i].clone();
        for dir in [Direction::Tau, Direction::TauInverse] {
            if let Some(t) = ar_translate(&x, dir)? {
                c.offer(&t)?;
            }
        }
        let proj = crate::rep::projective_cover(&x).map.is_iso();
        if proj {
            // Irreducible maps into P end at the summands of rad P.
            let rad: Vec<Matrix> = x.radical_spaces().iter().map(|s| s.basis().transpose()).collect();
            let sub = x.subrep(&rad)?;
            c.offer(&sub.object)?;
        } else {
            match ar_sequence(&x)? {
                Some(seq) => c.offer(seq.middle())?,
                None => c.complete = false,
            }
        }
        let env = crate::rep::injective_envelope(&x);
        if env.map.is_iso() {
            // Irreducible maps out of I start at the summands of I / soc I.
            let soc = x.socle_spaces();
            let q = crate::rep::Rep::quotient_by(&x, &soc);
            c.offer(&q)?;
        }
    }
    Ok((c.found, c.complete))
}

fn brute_force(alg: &Arc<Algebra>, bound: &[usize], max_tuples: u128) -> Result<Vec<Rep>, HomcalcError> {
    let f = alg.field();
    let p = f.characteristic() as u128;
    let n = alg.num_vertices();
    let mut found: Vec<Rep> = Vec::new();
    let mut dims = vec![0usize; n];
    loop {
        let entries: usize = alg.arrows().iter().map(|a| dims[a.target] * dims[a.source]).sum();
        let count = (0..entries).fold(1u128, |acc, _| acc.saturating_mul(p));
        if dims.iter().any(|&d| d > 0) && count <= max_tuples {
            let mut vals = vec![0u32; entries];
            'tuples: loop {
                let mut off = 0;
                let maps: Vec<Matrix> = alg
                    .arrows()
                    .iter()
                    .map(|a| {
                        let (r, c) = (dims[a.target], dims[a.source]);
                        let m = Matrix::from_vec(f, r, c, vals[off..off + r * c].to_vec());
                        off += r * c;
                        m
                    })
                    .collect();
                if let Ok(m) = Rep::new(alg.clone(), dims.clone(), maps) {
                    if m.is_indecomposable()? {
                        let mut new = true;
                        for g in &found {
                            if g.dims() == m.dims() && indecomposables_iso(g, &m)?.is_some() {
                                new = false;
                                break;
                            }
                        }
                        if new {
                            found.push(m);
                        }
                    }
                }
                let mut k = 0;
                loop {
                    if k == entries {
                        break 'tuples;
                    }
                    vals[k] += 1;
                    if (vals[k] as u128) < p {
                        break;
                    }
                    vals[k] = 0;
                    k += 1;
                }
            }
        }
        let mut v = 0;
        loop {
            if v == n {
                return Ok(found);
            }
            dims[v] += 1;
            if dims[v] <= bound[v] {
                break;
            }
            dims[v] = 0;
            v += 1;
        }
    }
}

/// All indecomposables (up to isomorphism) found by the chosen method.
pub fn enumerate_indecomposables(alg: &Arc<Algebra>, method: &Method) -> Result<Atlas, HomcalcError> {
    match method {
        Method::Knitting { max_members, max_dim } => {
            let (found, complete) = knit(alg, *max_members, *max_dim)?;
            Atlas::from_members(alg, found, complete)
        }
        Method::BruteForce { dim_bound, max_tuples } => {
            let found = brute_force(alg, dim_bound, *max_tuples)?;
            Atlas::from_members(alg, found, false)
        }
    }
}
