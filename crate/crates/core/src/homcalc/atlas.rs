use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::quiver::Algebra;
use crate::rep::{
    decompose, hom_space, indecomposables_iso, injective, projective, projective_cover, simple, Rep,
    RepData,
};

use super::{ar_translate, Direction, ExtVanishing, HomcalcError};

#[derive(Clone, Debug)]
pub struct AtlasMember {
    pub rep: Rep,
    pub name: String,
    pub projective: bool,
    pub injective: bool,
}

/// Indecomposables up to isomorphism, with Hom and Ext tables, the
/// syzygy graph and the AR translate.
#[derive(Clone, Debug)]
pub struct Atlas {
    algebra: Arc<Algebra>,
    members: Vec<AtlasMember>,
    hom: Vec<Vec<usize>>,
    ext1: Vec<Vec<usize>>,
    /// Indecomposable summands of `ΩX`, with multiplicity.
    syzygy: Vec<Vec<usize>>,
    tau: Vec<Option<usize>>,
    tau_inv: Vec<Option<usize>>,
    complete: bool,
}

/// Serialized atlas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasData {
    pub fingerprint: String,
    pub members: Vec<MemberData>,
    pub hom: Vec<Vec<usize>>,
    pub ext1: Vec<Vec<usize>>,
    pub syzygy: Vec<Vec<usize>>,
    pub tau: Vec<Option<usize>>,
    pub tau_inv: Vec<Option<usize>>,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberData {
    pub name: String,
    pub rep: RepData,
}

fn sort_members(reps: &mut [Rep]) {
    reps.sort_by(|a, b| {
        (a.total_dim(), std::cmp::Reverse(a.dims().to_vec()))
            .cmp(&(b.total_dim(), std::cmp::Reverse(b.dims().to_vec())))
    });
}

fn standard_name(alg: &Arc<Algebra>, m: &Rep) -> Result<Option<String>, HomcalcError> {
    for (kind, build) in [
        ("S", simple as fn(&Arc<Algebra>, usize) -> Rep),
        ("P", projective),
        ("I", injective),
    ] {
        for v in 0..alg.num_vertices() {
            let s = build(alg, v);
            if s.dims() == m.dims() && indecomposables_iso(&s, m)?.is_some() {
                return Ok(Some(format!("{kind}({})", alg.vertices()[v])));
            }
        }
    }
    Ok(None)
}

impl Atlas {
    /// Builds all tables for a list of pairwise non-isomorphic
    /// indecomposables. Members are reordered by dimension.
    pub fn from_members(algebra: &Arc<Algebra>, mut reps: Vec<Rep>, complete: bool) -> Result<Atlas, HomcalcError> {
        sort_members(&mut reps);
        let n = reps.len();
        let mut members = Vec::new();
        let mut dim_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for r in &reps {
            *dim_count.entry(r.dims().to_vec()).or_default() += 1;
        }
        let mut dim_seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for r in reps {
            let r = r.rebind(algebra);
            let name = match standard_name(algebra, &r)? {
                Some(s) => s,
                None => {
                    let k = dim_seen.entry(r.dims().to_vec()).or_default();
                    *k += 1;
                    let base = format!("M{}", r.dim_vector_string());
                    if dim_count[r.dims()] > 1 {
                        format!("{base}#{k}")
                    } else {
                        base
                    }
                }
            };
            let cover = projective_cover(&r);
            let projective = cover.map.is_iso();
            let injective = crate::rep::injective_envelope(&r).map.is_iso();
            members.push(AtlasMember {
                rep: r,
                name,
                projective,
                injective,
            });
        }
        let mut atlas = Atlas {
            algebra: algebra.clone(),
            members,
            hom: vec![vec![0; n]; n],
            ext1: vec![vec![0; n]; n],
            syzygy: vec![vec![]; n],
            tau: vec![None; n],
            tau_inv: vec![None; n],
            complete,
        };
        for i in 0..n {
            for j in 0..n {
                atlas.hom[i][j] = hom_space(&atlas.members[i].rep, &atlas.members[j].rep)?.dim();
            }
        }
        for i in 0..n {
            let x = atlas.members[i].rep.clone();
            let cover = projective_cover(&x);
            let omega = cover.map.kernel().object;
            for j in 0..n {
                let y = &atlas.members[j].rep;
                // 0 -> Hom(X,Y) -> Hom(P0,Y) -> Hom(ΩX,Y) -> Ext^1(X,Y) -> 0
                let through: usize = cover.vertices.iter().map(|&v| y.dim_at(v)).sum();
                atlas.ext1[i][j] = hom_space(&omega, y)?.dim() + atlas.hom[i][j] - through;
            }
            match atlas.locate(&omega) {
                Ok(idx) => atlas.syzygy[i] = idx,
                Err(_) => atlas.complete = false,
            }
            for (dir, slot) in [(Direction::Tau, 0), (Direction::TauInverse, 1)] {
                if let Some(t) = ar_translate(&x, dir)? {
                    let found = atlas.locate(&t).ok().filter(|v| v.len() == 1).map(|v| v[0]);
                    if found.is_none() {
                        atlas.complete = false;
                    }
                    if slot == 0 {
                        atlas.tau[i] = found;
                    } else {
                        atlas.tau_inv[i] = found;
                    }
                }
            }
        }
        Ok(atlas)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[AtlasMember] {
        &self.members
    }

    pub fn rep(&self, i: usize) -> &Rep {
        &self.members[i].rep
    }

    pub fn name(&self, i: usize) -> &str {
        &self.members[i].name
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.members.iter().position(|m| m.name == name)
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn hom_dim(&self, i: usize, j: usize) -> usize {
        self.hom[i][j]
    }

    pub fn ext1_dim(&self, i: usize, j: usize) -> usize {
        self.ext1[i][j]
    }

    pub fn syzygy(&self, i: usize) -> &[usize] {
        &self.syzygy[i]
    }

    pub fn tau(&self, i: usize) -> Option<usize> {
        self.tau[i]
    }

    pub fn tau_inv(&self, i: usize) -> Option<usize> {
        self.tau_inv[i]
    }

    pub fn projectives(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.members[i].projective).collect()
    }

    pub fn injectives(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.members[i].injective).collect()
    }

    pub fn all(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    /// Atlas index of an indecomposable, if present.
    pub fn index_of(&self, m: &Rep) -> Result<Option<usize>, HomcalcError> {
        for (i, mem) in self.members.iter().enumerate() {
            if mem.rep.dims() == m.dims() && indecomposables_iso(&mem.rep, m)?.is_some() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Indecomposable summands of `M` as atlas indices, with multiplicity,
    /// sorted.
    pub fn locate(&self, m: &Rep) -> Result<Vec<usize>, HomcalcError> {
        let d = decompose(m)?;
        let mut out = Vec::new();
        for s in &d.summands {
            match self.index_of(s)? {
                Some(i) => out.push(i),
                None => return Err(HomcalcError::NotInAtlas(s.dim_vector_string())),
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Members reachable from `start` in the syzygy graph, with the least
    /// degree at which each is reached (start nodes have degree 1).
    pub fn syzygy_reach(&self, start: &[usize]) -> Vec<(usize, usize)> {
        let mut seen = vec![None; self.len()];
        let mut queue = VecDeque::new();
        for &s in start {
            if seen[s].is_none() {
                seen[s] = Some(1);
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            let d = seen[x].unwrap();
            for &y in &self.syzygy[x] {
                if seen[y].is_none() {
                    seen[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        (0..self.len()).filter_map(|i| seen[i].map(|d| (i, d))).collect()
    }

    /// `Ext^{≥1}(⊕ sources, ⊕ tests) = 0`, decided on the syzygy graph:
    /// `Ext^n(X, T) = Ext^1(Ω^{n-1}X, T)`.
    pub fn ext_vanishes(&self, sources: &[usize], tests: &[usize]) -> Result<ExtVanishing, HomcalcError> {
        if !self.complete {
            return Err(HomcalcError::IncompleteAtlas);
        }
        for (y, degree) in self.syzygy_reach(sources) {
            for (t, &c) in tests.iter().enumerate() {
                if self.ext1[y][c] > 0 {
                    return Ok(ExtVanishing::Fails {
                        degree,
                        source: Some(y),
                        test: t,
                    });
                }
            }
        }
        Ok(ExtVanishing::Vanishes)
    }

    /// `Ext^{≥1}(M, ⊕ tests) = 0` for an arbitrary object.
    pub fn ext_vanishes_rep(&self, m: &Rep, tests: &[usize]) -> Result<ExtVanishing, HomcalcError> {
        let idx = self.locate(m)?;
        self.ext_vanishes(&idx, tests)
    }

    /// `^⊥X`: members with `Ext^{≥1}(-, X) = 0`; with `all_degrees` false,
    /// only degree one is tested.
    pub fn left_perp(&self, x: &[usize], all_degrees: bool) -> Result<Vec<usize>, HomcalcError> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            let ok = if all_degrees {
                self.ext_vanishes(&[i], x)?.vanishes()
            } else {
                x.iter().all(|&c| self.ext1[i][c] == 0)
            };
            if ok {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// `X^⊥`: members `Y` with `Ext^{≥1}(X, Y) = 0`.
    pub fn right_perp(&self, x: &[usize], all_degrees: bool) -> Result<Vec<usize>, HomcalcError> {
        let reach: Vec<usize> = if all_degrees {
            if !self.complete {
                return Err(HomcalcError::IncompleteAtlas);
            }
            self.syzygy_reach(x).into_iter().map(|(y, _)| y).collect()
        } else {
            x.to_vec()
        };
        Ok((0..self.len())
            .filter(|&j| reach.iter().all(|&y| self.ext1[y][j] == 0))
            .collect())
    }

    /// The same atlas over the opposite algebra, member `i` replaced by its
    /// dual; indices are preserved.
    pub fn dual(&self) -> Result<Atlas, HomcalcError> {
        let op = self.algebra.opposite();
        let n = self.len();
        let reps: Vec<Rep> = self.members.iter().map(|m| m.rep.dualize().rebind(&op)).collect();
        let mut members = Vec::new();
        for (i, r) in reps.into_iter().enumerate() {
            let name = standard_name(&op, &r)?.unwrap_or_else(|| self.members[i].name.clone());
            members.push(AtlasMember {
                rep: r,
                name,
                projective: self.members[i].injective,
                injective: self.members[i].projective,
            });
        }
        let hom = (0..n).map(|i| (0..n).map(|j| self.hom[j][i]).collect()).collect();
        let ext1 = (0..n).map(|i| (0..n).map(|j| self.ext1[j][i]).collect()).collect();
        let mut dual = Atlas {
            algebra: op,
            members,
            hom,
            ext1,
            syzygy: vec![vec![]; n],
            tau: self.tau_inv.clone(),
            tau_inv: self.tau.clone(),
            complete: self.complete,
        };
        for i in 0..n {
            let omega = projective_cover(&dual.members[i].rep).map.kernel().object;
            match dual.locate(&omega) {
                Ok(idx) => dual.syzygy[i] = idx,
                Err(_) => dual.complete = false,
            }
        }
        Ok(dual)
    }

    pub fn to_data(&self) -> AtlasData {
        AtlasData {
            fingerprint: self.algebra.fingerprint().to_string(),
            members: self
                .members
                .iter()
                .map(|m| MemberData {
                    name: m.name.clone(),
                    rep: m.rep.to_data(),
                })
                .collect(),
            hom: self.hom.clone(),
            ext1: self.ext1.clone(),
            syzygy: self.syzygy.clone(),
            tau: self.tau.clone(),
            tau_inv: self.tau_inv.clone(),
            complete: self.complete,
        }
    }

    /// Rebuilds an atlas from serialized data, rejecting anything that does
    /// not match the algebra or fails spot checks.
    pub fn from_data(algebra: &Arc<Algebra>, data: &AtlasData) -> Result<Atlas, String> {
        if data.fingerprint != algebra.fingerprint() {
            return Err("fingerprint mismatch".into());
        }
        let n = data.members.len();
        let square = |t: &Vec<Vec<usize>>| t.len() == n && t.iter().all(|r| r.len() == n);
        if !square(&data.hom) || !square(&data.ext1) || data.syzygy.len() != n || data.tau.len() != n || data.tau_inv.len() != n {
            return Err("table shapes do not match the member list".into());
        }
        let in_range = |x: &Option<usize>| x.map_or(true, |i| i < n);
        if !data.syzygy.iter().flatten().all(|&i| i < n) || !data.tau.iter().all(in_range) || !data.tau_inv.iter().all(in_range) {
            return Err("index out of range".into());
        }
        let mut members = Vec::new();
        for m in &data.members {
            let rep = Rep::from_data(algebra.clone(), &m.rep).map_err(|e| e.to_string())?;
            let projective = projective_cover(&rep).map.is_iso();
            let injective = crate::rep::injective_envelope(&rep).map.is_iso();
            members.push(AtlasMember {
                rep,
                name: m.name.clone(),
                projective,
                injective,
            });
        }
        for (i, m) in members.iter().enumerate() {
            let d = hom_space(&m.rep, &m.rep).map_err(|e| e.to_string())?.dim();
            if d != data.hom[i][i] {
                return Err(format!("endomorphism dimension of member {i} does not match"));
            }
        }
        Ok(Atlas {
            algebra: algebra.clone(),
            members,
            hom: data.hom.clone(),
            ext1: data.ext1.clone(),
            syzygy: data.syzygy.clone(),
            tau: data.tau.clone(),
            tau_inv: data.tau_inv.clone(),
            complete: data.complete,
        })
    }
}
