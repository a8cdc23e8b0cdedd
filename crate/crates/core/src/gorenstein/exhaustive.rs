//! Bounded search over arbitrary (non-minimal) approximation sequences,
//! used as an oracle for the fixed-point deciders.
//!
//! Nodes are whole objects up to isomorphism (sorted atlas index multisets),
//! never split into summands, so the search does not rely on summand
//! closure. A node repeated on the current path closes a periodic
//! (co)resolution and counts as a member.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::exactla::Matrix;
use crate::rep::{hom_space, Morphism, Rep};

use super::decide::Decider;
use super::{GorensteinError, Membership, Mode, Refutation, Status, Verdict, Which};

pub const DEFAULT_MULT_BOUND: usize = 2;
pub const DEFAULT_DEPTH_BOUND: usize = 4;

/// Each member of `C` appears at most `mult` times in a term; paths are at
/// most `depth` steps long.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExhaustiveBounds {
    pub mult: usize,
    pub depth: usize,
}

impl Default for ExhaustiveBounds {
    fn default() -> Self {
        ExhaustiveBounds {
            mult: DEFAULT_MULT_BOUND,
            depth: DEFAULT_DEPTH_BOUND,
        }
    }
}

/// Search for more than this many component choices at one node gives up.
const BRANCH_BUDGET: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Half {
    /// `0 -> K -> C^0 -> K' -> 0`, continuing with `K'`.
    Co,
    /// `0 -> K' -> C_0 -> K -> 0`, continuing with `K'`.
    Res,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Member,
    NonMember,
    Inconclusive,
}

/// Settled node outcomes of one kind of search, kept by the decider so
/// that later queries with the same half, cross condition and bounds reuse
/// them.
pub(crate) type MemoKey = (Half, bool, ExhaustiveBounds);
pub(crate) type Memo = HashMap<Vec<usize>, Outcome>;

/// One admissible span of maps between `k` and a member of `C`, with the
/// per-vertex blocks already stacked.
struct Span {
    maps: Vec<Morphism>,
    stacked: Vec<Matrix>,
}

struct Search<'a, 'b> {
    dec: &'b Decider<'a>,
    half: Half,
    /// Also require exactness under the other Hom functor.
    cross: bool,
    bounds: ExhaustiveBounds,
    memo: HashMap<Vec<usize>, Outcome>,
    stack: Vec<Vec<usize>>,
    subspaces: HashMap<(usize, usize), Vec<Vec<Vec<u32>>>>,
}

impl<'a, 'b> Search<'a, 'b> {
    fn new(dec: &'b Decider<'a>, half: Half, cross: bool, bounds: ExhaustiveBounds) -> Self {
        Search {
            dec,
            half,
            cross,
            bounds,
            memo: dec.take_memo(&(half, cross, bounds)),
            stack: Vec::new(),
            subspaces: HashMap::new(),
        }
    }

    fn object(&self, key: &[usize]) -> Rep {
        let atlas = self.dec.atlas();
        let parts: Vec<Rep> = key.iter().map(|&i| atlas.rep(i).clone()).collect();
        Rep::direct_sum(atlas.algebra(), &parts).object
    }

    fn node(&mut self, key: Vec<usize>, depth: usize) -> Result<Outcome, GorensteinError> {
        if key.is_empty() || self.stack.contains(&key) {
            return Ok(Outcome::Member);
        }
        if let Some(&o) = self.memo.get(&key) {
            return Ok(o);
        }
        if depth >= self.bounds.depth {
            return Ok(Outcome::Inconclusive);
        }
        self.stack.push(key.clone());
        let out = self.explore(&key, depth);
        self.stack.pop();
        let out = out?;
        if out != Outcome::Inconclusive {
            self.memo.insert(key, out);
        }
        Ok(out)
    }

    fn explore(&mut self, key: &[usize], depth: usize) -> Result<Outcome, GorensteinError> {
        let k = self.object(key);
        let Some(options) = self.options(&k)? else {
            return Ok(Outcome::Inconclusive);
        };
        // Extra zero components add `c^e` to both the middle term and the
        // continuation, which changes no exactness condition. So only the
        // spans are tried here; extras are appended afterwards.
        let mut spans = Vec::new();
        for choice in tuples(&options.iter().map(|o| o.1.len()).collect::<Vec<_>>()) {
            if let Some(next) = self.step(key, &k, &options, &choice)? {
                let used: Vec<usize> = options.iter().zip(&choice).map(|(o, &i)| o.1[i].maps.len()).collect();
                spans.push((used, next));
            }
        }
        let m = self.bounds.mult;
        let mut extras = tuples(&vec![m + 1; options.len()]);
        extras.sort_by_key(|e| e.iter().sum::<usize>());
        let mut seen = HashSet::new();
        let mut inconclusive = false;
        for e in &extras {
            for (used, next) in &spans {
                if used.iter().zip(e).any(|(u, x)| u + x > m) {
                    continue;
                }
                let mut key = next.clone();
                for ((c, _), &x) in options.iter().zip(e) {
                    key.extend(std::iter::repeat_n(*c, x));
                }
                key.sort_unstable();
                if !seen.insert(key.clone()) {
                    continue;
                }
                match self.node(key, depth + 1)? {
                    Outcome::Member => return Ok(Outcome::Member),
                    Outcome::Inconclusive => inconclusive = true,
                    Outcome::NonMember => {}
                }
            }
        }
        Ok(if inconclusive { Outcome::Inconclusive } else { Outcome::NonMember })
    }

    /// Per member of `C`, the admissible component spans inside its Hom
    /// space with `k`, largest first. Maps into (or out of) `c^μ` are taken
    /// up to the scalar `GL_μ` action, which leaves the (co)kernel and all
    /// exactness conditions unchanged.
    #[allow(clippy::type_complexity)]
    fn options(&mut self, k: &Rep) -> Result<Option<Vec<(usize, Vec<Span>)>>, GorensteinError> {
        let p = k.field().characteristic() as usize;
        let mut out = Vec::new();
        let mut total = 1usize;
        for &c in self.dec.c_indices() {
            let cr = self.dec.atlas().rep(c);
            let h = match self.half {
                Half::Co => hom_space(k, cr)?,
                Half::Res => hom_space(cr, k)?,
            };
            let m = self.bounds.mult;
            if (p as f64).powi((h.dim() * m) as i32) > BRANCH_BUDGET as f64 {
                return Ok(None);
            }
            let subs = self.subspaces_of(h.dim(), m, k.field());
            let field = k.field();
            let half = self.half;
            let opts: Vec<Span> = subs
                .iter()
                .rev()
                .map(|basis| {
                    let maps: Vec<Morphism> = basis.iter().map(|v| h.element(v)).collect();
                    let stacked = k
                        .dims()
                        .iter()
                        .enumerate()
                        .map(|(v, &n)| {
                            let blocks: Vec<Matrix> = maps.iter().map(|f| f.at(v).clone()).collect();
                            match half {
                                Half::Co => Matrix::vstack_all(field, n, &blocks),
                                Half::Res => Matrix::hstack_all(field, n, &blocks),
                            }
                        })
                        .collect();
                    Span { maps, stacked }
                })
                .collect();
            total = total.saturating_mul(opts.len());
            if total > BRANCH_BUDGET {
                return Ok(None);
            }
            out.push((c, opts));
        }
        Ok(Some(out))
    }

    /// Bases in reduced echelon form of all subspaces of `F^h` of dimension
    /// at most `m`, by increasing dimension.
    fn subspaces_of(&mut self, h: usize, m: usize, field: crate::exactla::Field) -> Vec<Vec<Vec<u32>>> {
        self.subspaces
            .entry((h, m))
            .or_insert_with(|| {
                let mut seen = BTreeSet::new();
                seen.insert(Vec::<Vec<u32>>::new());
                let p = field.characteristic();
                let vectors: Vec<Vec<u32>> = (1..p.pow(h as u32))
                    .map(|mut n| {
                        (0..h)
                            .map(|_| {
                                let d = n % p;
                                n /= p;
                                d
                            })
                            .collect()
                    })
                    .collect();
                let mut frontier: Vec<Vec<Vec<u32>>> = vec![vec![]];
                for _ in 0..m.min(h) {
                    let mut next = Vec::new();
                    for basis in &frontier {
                        for v in &vectors {
                            let mut rows = basis.clone();
                            rows.push(v.clone());
                            let mat = Matrix::from_vec(field, rows.len(), h, rows.concat());
                            let (r, pivots) = mat.rref();
                            if pivots.len() == rows.len() {
                                let canon: Vec<Vec<u32>> = r.to_rows().into_iter().take(pivots.len()).collect();
                                if seen.insert(canon.clone()) {
                                    next.push(canon);
                                }
                            }
                        }
                    }
                    frontier = next;
                }
                let mut all: Vec<Vec<Vec<u32>>> = seen.into_iter().collect();
                all.sort_by_key(|b| b.len());
                all
            })
            .clone()
    }

    /// The continuation of one choice, if its sequence is exact and
    /// satisfies the Hom conditions.
    #[allow(clippy::type_complexity)]
    fn step(
        &self,
        key: &[usize],
        k: &Rep,
        options: &[(usize, Vec<Span>)],
        choice: &[usize],
    ) -> Result<Option<Vec<usize>>, GorensteinError> {
        let atlas = self.dec.atlas();
        // Mono (resp. epi) is a rank condition at each vertex; test it on the
        // stacked blocks before building any object.
        let field = k.field();
        let full = k.dims().iter().enumerate().all(|(v, &n)| {
            let blocks: Vec<Matrix> = options.iter().zip(choice).map(|((_, o), &i)| o[i].stacked[v].clone()).collect();
            let stacked = match self.half {
                Half::Co => Matrix::vstack_all(field, n, &blocks),
                Half::Res => Matrix::hstack_all(field, n, &blocks),
            };
            n == 0 || stacked.rank() == n
        });
        if !full {
            return Ok(None);
        }
        let mut terms = Vec::new();
        let mut parts = Vec::new();
        for ((c, opts), &i) in options.iter().zip(choice) {
            let cr = atlas.rep(*c);
            for f in &opts[i].maps {
                terms.push(cr.clone());
                parts.push(f.clone());
            }
        }
        let sum = Rep::direct_sum(atlas.algebra(), &terms).object;
        let rest = match self.half {
            Half::Co => {
                let f = Morphism::column(k, &sum, &parts);
                if !f.is_mono() {
                    return Ok(None);
                }
                f.cokernel().object
            }
            Half::Res => {
                let g = Morphism::row(&sum, k, &parts);
                if !g.is_epi() {
                    return Ok(None);
                }
                g.kernel().object
            }
        };
        // The sequence is exact by construction, and both Hom functors are
        // left exact, so Hom-exactness is a dimension count. Hom dimensions
        // are additive and read off the atlas tables.
        let next = atlas.locate(&rest)?;
        let term_idx: Vec<usize> = options
            .iter()
            .zip(choice)
            .flat_map(|((c, opts), &i)| std::iter::repeat_n(*c, opts[i].maps.len()))
            .collect();
        let into = |obj: &[usize], t: usize| obj.iter().map(|&i| atlas.hom_dim(i, t)).sum::<usize>();
        let from = |obj: &[usize], t: usize| obj.iter().map(|&i| atlas.hom_dim(t, i)).sum::<usize>();
        let (own, other): (&dyn Fn(&[usize], usize) -> usize, &dyn Fn(&[usize], usize) -> usize) = match self.half {
            Half::Co => (&into, &from),
            Half::Res => (&from, &into),
        };
        for &t in self.dec.c_indices() {
            let exact = |h: &dyn Fn(&[usize], usize) -> usize| h(&term_idx, t) == h(key, t) + h(&next, t);
            if !exact(own) || (self.cross && !exact(other)) {
                return Ok(None);
            }
        }
        Ok(Some(next))
    }
}

/// All tuples below `radix`, first coordinate fastest.
fn tuples(radix: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &r in radix.iter().rev() {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..r).map(move |i| {
                    let mut v = vec![i];
                    v.extend(&t);
                    v
                })
            })
            .collect();
    }
    out
}

fn combine(a: Outcome, b: Outcome) -> Outcome {
    match (a, b) {
        (Outcome::NonMember, _) | (_, Outcome::NonMember) => Outcome::NonMember,
        (Outcome::Member, Outcome::Member) => Outcome::Member,
        _ => Outcome::Inconclusive,
    }
}

pub(crate) fn search(dec: &Decider, which: Which, bounds: &ExhaustiveBounds) -> Result<Membership, GorensteinError> {
    let cross = which == Which::G;
    let mut co = Search::new(dec, Half::Co, cross, *bounds);
    let mut res = Search::new(dec, Half::Res, cross, *bounds);
    let mut verdicts = Vec::new();
    for x in dec.atlas().all() {
        let mut refutation = None;
        let outcome = match which {
            Which::Cores => co.node(vec![x], 0)?,
            Which::Res => res.node(vec![x], 0)?,
            Which::RG | Which::LG => {
                refutation = dec.ext_refutation(x, which)?;
                if refutation.is_some() {
                    Outcome::NonMember
                } else if which == Which::RG {
                    co.node(vec![x], 0)?
                } else {
                    res.node(vec![x], 0)?
                }
            }
            Which::G => {
                let r = co.node(vec![x], 0)?;
                if r == Outcome::NonMember {
                    r
                } else {
                    combine(r, res.node(vec![x], 0)?)
                }
            }
        };
        let status = match outcome {
            Outcome::Member => Status::Member,
            Outcome::NonMember => {
                refutation.get_or_insert(Refutation::Exhausted { object: x });
                Status::NonMember
            }
            Outcome::Inconclusive => Status::Inconclusive,
        };
        verdicts.push(Verdict {
            object: x,
            status,
            refutation,
            cycle: None,
            cycle_left: None,
        });
    }
    for s in [co, res] {
        dec.store_memo((s.half, s.cross, s.bounds), s.memo);
    }
    Ok(Membership {
        which,
        mode: Mode::Exhaustive,
        verdicts,
        trace: Vec::new(),
    })
}
