//! Brute-force recomputation of a few derived values, written against the
//! representation layer only: no approximations, no decider, no cached
//! tables beyond the list of indecomposables.

#![allow(dead_code)]

use std::sync::Arc;

use relgor::homcalc::{ext_dim, Atlas};
use relgor::rep::{hom_space, Morphism, Rep};
use serde::{Deserialize, Serialize};

/// Hom spaces larger than this are not listed.
const BUDGET: u128 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Summands per term.
    pub mult: usize,
    /// Ext degrees checked for `^⊥C`.
    pub ext_degrees: usize,
    /// Longest resolution tried.
    pub length: usize,
}

pub const BOUNDS: Bounds = Bounds {
    mult: 2,
    ext_degrees: 4,
    length: 3,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub algebra: String,
    pub p: u32,
    pub c: Vec<String>,
    pub rg: Vec<String>,
    /// `None`: no resolution of length at most `bounds.length`.
    pub c_pd: Vec<(String, Option<usize>)>,
    pub bounds: Bounds,
}

/// All sums of at most `mult` members, each listed once up to order.
fn sums(atlas: &Atlas, members: &[usize], mult: usize) -> Vec<Rep> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = members.iter().map(|&m| vec![m]).collect();
    while let Some(s) = stack.pop() {
        let parts: Vec<Rep> = s.iter().map(|&i| atlas.rep(i).clone()).collect();
        out.push(Rep::direct_sum(atlas.algebra(), &parts).object);
        if s.len() < mult {
            for &m in members.iter().filter(|&&m| m >= *s.last().unwrap()) {
                let mut t = s.clone();
                t.push(m);
                stack.push(t);
            }
        }
    }
    out
}

fn maps(s: &Rep, t: &Rep) -> Vec<Morphism> {
    hom_space(s, t).unwrap().elements(BUDGET).expect("Hom space within budget")
}

fn summands_in(atlas: &Atlas, m: &Rep, class: &[usize]) -> bool {
    atlas.locate(m).unwrap().iter().all(|i| class.contains(i))
}

/// Every map `X -> T` factors through `f: X -> E`, by comparing the span of
/// `{h ∘ f}` with `Hom(X, T)`.
fn factors_all(f: &Morphism, t: &Rep) -> bool {
    let target = hom_space(f.source(), t).unwrap().dim();
    let field = t.field();
    let rows: Vec<Vec<u32>> = hom_space(f.target(), t)
        .unwrap()
        .basis()
        .iter()
        .map(|h| f.then(h).to_vector())
        .collect();
    let width = rows.first().map_or(0, |r| r.len());
    let data: Vec<u32> = rows.concat();
    let rank = relgor::exactla::Matrix::from_vec(field, rows.len(), width, data).rank();
    rank == target
}

/// `rG(C)` as a greatest fixed point: members of `^⊥C` with a mono into a
/// `C`-object, through which every map to `C` factors, whose cokernel
/// again lies in the set. Every element of every Hom space is tried.
pub fn rg_members(atlas: &Atlas, c: &[usize], b: &Bounds) -> Vec<usize> {
    let c_reps: Vec<&Rep> = c.iter().map(|&i| atlas.rep(i)).collect();
    let perp: Vec<usize> = (0..atlas.len())
        .filter(|&x| {
            (1..=b.ext_degrees).all(|d| c_reps.iter().all(|t| ext_dim(atlas.rep(x), t, d).unwrap() == 0))
        })
        .collect();
    let targets = sums(atlas, c, b.mult);
    // For each candidate, the cokernel supports of its admissible monos.
    let mut options: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
    for &x in &perp {
        let mut found = Vec::new();
        for e in &targets {
            for f in maps(atlas.rep(x), e) {
                if f.is_mono() && c_reps.iter().all(|t| factors_all(&f, t)) {
                    found.push(atlas.locate(&f.cokernel().object).unwrap());
                }
            }
        }
        options.push((x, found));
    }
    let mut alive = perp.clone();
    loop {
        let next: Vec<usize> = options
            .iter()
            .filter(|(x, found)| alive.contains(x) && found.iter().any(|s| s.iter().all(|i| alive.contains(i))))
            .map(|(x, _)| *x)
            .collect();
        if next == alive {
            return alive;
        }
        alive = next;
    }
}

/// Shortest resolution `0 -> C_n -> ... -> C_0 -> M -> 0` by `C`-objects,
/// trying every epi from every `C`-object.
pub fn c_pd(atlas: &Atlas, m: &Rep, c: &[usize], b: &Bounds) -> Option<usize> {
    let sources = sums(atlas, c, b.mult);
    (0..=b.length).find(|&n| resolvable(atlas, m, c, &sources, n))
}

fn resolvable(atlas: &Atlas, m: &Rep, c: &[usize], sources: &[Rep], n: usize) -> bool {
    if m.is_zero() || summands_in(atlas, m, c) {
        return true;
    }
    if n == 0 {
        return false;
    }
    sources.iter().any(|e| {
        maps(e, m)
            .into_iter()
            .any(|f| f.is_epi() && resolvable(atlas, &f.kernel().object, c, sources, n - 1))
    })
}

pub fn compute(name: &str, alg: &Arc<relgor::quiver::Algebra>, p: u32, c_names: &[&str]) -> Fixture {
    let atlas = relgor::homcalc::enumerate_indecomposables(alg, &Default::default()).unwrap();
    let mut c: Vec<usize> = c_names.iter().map(|n| atlas.index_of_name(n).unwrap()).collect();
    c.sort_unstable();
    let rg = rg_members(&atlas, &c, &BOUNDS);
    Fixture {
        algebra: name.to_string(),
        p,
        c: c.iter().map(|&i| atlas.name(i).to_string()).collect(),
        rg: rg.iter().map(|&i| atlas.name(i).to_string()).collect(),
        c_pd: (0..atlas.len())
            .map(|i| (atlas.name(i).to_string(), c_pd(&atlas, atlas.rep(i), &c, &BOUNDS)))
            .collect(),
        bounds: BOUNDS,
    }
}

/// The frozen fixtures: the example subcategory add(S1 ⊕ P3 ⊕ S3) on A3.
pub fn compute_all() -> Vec<Fixture> {
    [2, 3]
        .into_iter()
        .map(|p| compute("A3", &relgor::corpus::a3(p), p, &["S(1)", "P(3)", "S(3)"]))
        .collect()
}

pub fn frozen() -> Vec<Fixture> {
    serde_json::from_str(include_str!("../fixtures/derived.json")).unwrap()
}
