use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Mutex, OnceLock};

use crate::cert::{ApproxSide, CertBuilder, Certificate, Claim, HomFunctor, StandardKind};
use crate::homcalc::{hom_exactness, ses_check, Atlas, ExtVanishing, HomSide, HomcalcError, ShortExactSeq};
use crate::rep::{
    decompose, indecomposables_iso, projective, projective_cover, DirectSum, Morphism, ProjectiveCover, Rep,
};
use crate::subcat::{minimal_approximation, Approximation, Side, Subcategory};

use super::exhaustive::{self, ExhaustiveBounds};
use super::{CycleNote, Elimination, GorensteinError, Membership, Mode, Refutation, Status, Verdict, Which};

/// Atlas indices of the indecomposable summands of `m`, with an isomorphism
/// from the direct sum of those atlas members onto `m`.
pub fn split_into_atlas(atlas: &Atlas, m: &Rep) -> Result<(Vec<usize>, Morphism), GorensteinError> {
    let d = decompose(m)?;
    let mut idx = Vec::new();
    let mut parts = Vec::new();
    for s in &d.summands {
        let i = atlas
            .index_of(s)?
            .ok_or_else(|| HomcalcError::NotInAtlas(s.dim_vector_string()))?;
        let phi = indecomposables_iso(atlas.rep(i), s)?.expect("same atlas class");
        idx.push(i);
        parts.push(phi);
    }
    let reps: Vec<Rep> = idx.iter().map(|&i| atlas.rep(i).clone()).collect();
    let sum = DirectSum::new(atlas.algebra(), &reps).object;
    let diag = Morphism::diagonal(&sum, &d.sum.object, &parts);
    Ok((idx, diag.then(&d.iso)))
}

/// One minimal approximation step for an atlas member.
#[derive(Clone, Debug)]
pub(crate) struct Unfold {
    pub approx: Approximation,
    /// The approximation sequence, when the map is mono (left) or epi
    /// (right).
    pub seq: Option<ShortExactSeq>,
    /// Atlas indices of the summands of the cokernel (left) or kernel
    /// (right).
    pub rest: Vec<usize>,
    pub rest_iso: Option<Morphism>,
    /// First member of `C` at which the other Hom functor breaks exactness.
    pub cross_fail: Option<usize>,
}

#[derive(Clone, Debug)]
pub(crate) struct SyzygyStep {
    pub cover: ProjectiveCover,
    pub inclusion: Morphism,
    pub rest: Vec<usize>,
    pub rest_iso: Morphism,
}

/// Membership decisions relative to a fixed `C` inside a complete atlas.
pub struct Decider<'a> {
    atlas: &'a Atlas,
    c: Subcategory,
    cidx: Vec<usize>,
    left: OnceLock<Vec<Unfold>>,
    right: OnceLock<Vec<Unfold>>,
    syzygies: OnceLock<Vec<SyzygyStep>>,
    exhaustive: Mutex<HashMap<exhaustive::MemoKey, exhaustive::Memo>>,
}

impl<'a> Decider<'a> {
    pub fn new(atlas: &'a Atlas, c: &Subcategory) -> Result<Decider<'a>, GorensteinError> {
        if !atlas.is_complete() {
            return Err(HomcalcError::IncompleteAtlas.into());
        }
        let mut cidx = c.indices_in(atlas)?;
        cidx.sort_unstable();
        cidx.dedup();
        Ok(Decider {
            atlas,
            c: Subcategory::from_atlas(atlas, &cidx),
            cidx,
            left: OnceLock::new(),
            right: OnceLock::new(),
            syzygies: OnceLock::new(),
            exhaustive: Mutex::new(HashMap::new()),
        })
    }

    /// `C` with atlas members as representatives, in atlas order.
    pub fn subcategory(&self) -> &Subcategory {
        &self.c
    }

    pub fn atlas(&self) -> &Atlas {
        self.atlas
    }

    pub fn c_indices(&self) -> &[usize] {
        &self.cidx
    }

    pub(crate) fn take_memo(&self, key: &exhaustive::MemoKey) -> exhaustive::Memo {
        self.exhaustive.lock().unwrap().remove(key).unwrap_or_default()
    }

    pub(crate) fn store_memo(&self, key: exhaustive::MemoKey, memo: exhaustive::Memo) {
        self.exhaustive.lock().unwrap().insert(key, memo);
    }

    pub(crate) fn unfolds(&self, side: Side) -> Result<&[Unfold], GorensteinError> {
        let cell = match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        };
        if let Some(u) = cell.get() {
            return Ok(u);
        }
        let mut out = Vec::new();
        for x in self.atlas.all() {
            out.push(self.unfold(self.atlas.rep(x), side)?);
        }
        Ok(cell.get_or_init(|| out))
    }

    /// The minimal approximation step of an arbitrary object.
    pub(crate) fn unfold(&self, m: &Rep, side: Side) -> Result<Unfold, GorensteinError> {
        let approx = minimal_approximation(m, &self.c, side)?;
        let seq = match side {
            Side::Left if approx.mono => Some(ses_check(&approx.map, &approx.cokernel.projection)?),
            Side::Right if approx.epi => Some(ses_check(&approx.kernel.inclusion, &approx.map)?),
            _ => None,
        };
        let (mut rest, mut rest_iso, mut cross_fail) = (vec![], None, None);
        if let Some(seq) = &seq {
            let other = match side {
                Side::Left => seq.right(),
                Side::Right => seq.left(),
            };
            let (idx, iso) = split_into_atlas(self.atlas, other)?;
            rest = idx;
            rest_iso = Some(iso);
            let functor = match side {
                Side::Left => HomSide::From,
                Side::Right => HomSide::Into,
            };
            for &t in &self.cidx {
                if !hom_exactness(seq, self.atlas.rep(t), functor)? {
                    cross_fail = Some(t);
                    break;
                }
            }
        }
        Ok(Unfold {
            approx,
            seq,
            rest,
            rest_iso,
            cross_fail,
        })
    }

    pub(crate) fn syzygy_steps(&self) -> Result<&[SyzygyStep], GorensteinError> {
        if let Some(s) = self.syzygies.get() {
            return Ok(s);
        }
        let mut out = Vec::new();
        for x in self.atlas.all() {
            let m = self.atlas.rep(x);
            let cover = projective_cover(m);
            let ker = cover.map.kernel();
            let (rest, rest_iso) = split_into_atlas(self.atlas, &ker.object)?;
            out.push(SyzygyStep {
                cover,
                inclusion: ker.inclusion,
                rest,
                rest_iso,
            });
        }
        Ok(self.syzygies.get_or_init(|| out))
    }

    fn condition(&self, x: usize, alive: &[bool], sides: &[Side], cross: bool) -> Result<Option<Refutation>, GorensteinError> {
        for &side in sides {
            let u = &self.unfolds(side)?[x];
            if u.seq.is_none() {
                return Ok(Some(match side {
                    Side::Left => Refutation::NotMono { object: x },
                    Side::Right => Refutation::NotEpi { object: x },
                }));
            }
            if cross {
                if let Some(t) = u.cross_fail {
                    let side = match side {
                        Side::Left => HomSide::From,
                        Side::Right => HomSide::Into,
                    };
                    return Ok(Some(Refutation::NotHomExact { object: x, test: t, side }));
                }
            }
            if let Some(&s) = u.rest.iter().find(|&&s| !alive[s]) {
                return Ok(Some(Refutation::Excluded { object: x, summand: s }));
            }
        }
        Ok(None)
    }

    /// Greatest fixed point: repeatedly drop every survivor whose
    /// approximation step fails or leaves a dropped summand.
    fn gfp(&self, sides: &[Side], cross: bool) -> Result<(Vec<bool>, Vec<Elimination>), GorensteinError> {
        let n = self.atlas.len();
        let mut alive = vec![true; n];
        let mut trace = Vec::new();
        let mut round = 0;
        loop {
            round += 1;
            let mut kill = Vec::new();
            for x in 0..n {
                if alive[x] {
                    if let Some(r) = self.condition(x, &alive, sides, cross)? {
                        kill.push((x, r));
                    }
                }
            }
            if kill.is_empty() {
                break;
            }
            for (x, reason) in kill {
                alive[x] = false;
                trace.push(Elimination {
                    round,
                    object: x,
                    reason,
                });
            }
        }
        // Idempotence: one more pass removes nothing.
        for x in 0..n {
            if alive[x] {
                crate::audit::record(self.condition(x, &alive, sides, cross)?.is_none(), "gfp idempotence");
            }
        }
        Ok((alive, trace))
    }

    /// Refutation of `Ext^{≥1}(from-side, into-side) = 0` for one object, if
    /// it fails. `x` is the source for `rG` and the target for `lG`.
    pub(crate) fn ext_refutation(&self, x: usize, which: Which) -> Result<Option<Refutation>, GorensteinError> {
        let v = match which {
            Which::LG => self.atlas.ext_vanishes(&self.cidx, &[x])?,
            _ => self.atlas.ext_vanishes(&[x], &self.cidx)?,
        };
        Ok(match v {
            ExtVanishing::Fails { degree, source, test } => Some(Refutation::Ext {
                degree,
                from: source.expect("atlas reports the syzygy summand"),
                into: match which {
                    Which::LG => x,
                    _ => self.cidx[test],
                },
            }),
            _ => None,
        })
    }

    pub fn membership(&self, which: Which, mode: Mode) -> Result<Membership, GorensteinError> {
        self.membership_with(which, mode, &ExhaustiveBounds::default())
    }

    pub fn membership_with(&self, which: Which, mode: Mode, bounds: &ExhaustiveBounds) -> Result<Membership, GorensteinError> {
        if mode == Mode::Exhaustive {
            return exhaustive::search(self, which, bounds);
        }
        let (sides, cross): (&[Side], bool) = match which {
            Which::Cores | Which::RG => (&[Side::Left], false),
            Which::Res | Which::LG => (&[Side::Right], false),
            Which::G => (&[Side::Left, Side::Right], true),
        };
        let (alive, trace) = self.gfp(sides, cross)?;
        let reasons: BTreeMap<usize, Refutation> = trace.iter().map(|e| (e.object, e.reason.clone())).collect();
        let mut verdicts = Vec::new();
        for x in self.atlas.all() {
            let mut refutation = reasons.get(&x).cloned();
            // rG and lG intersect the fixed point with the perpendicular
            // category.
            if matches!(which, Which::RG | Which::LG) {
                if let Some(r) = self.ext_refutation(x, which)? {
                    refutation = Some(r);
                }
            }
            let status = if alive[x] && refutation.is_none() {
                Status::Member
            } else {
                Status::NonMember
            };
            let member = status == Status::Member;
            let cycle = (member && sides.contains(&Side::Left)).then(|| self.cycle_note(x, Side::Left)).transpose()?;
            let cycle_left = (member && sides.contains(&Side::Right))
                .then(|| self.cycle_note(x, Side::Right))
                .transpose()?;
            verdicts.push(Verdict {
                object: x,
                status,
                refutation,
                cycle,
                cycle_left,
            });
        }
        Ok(Membership {
            which,
            mode,
            verdicts,
            trace,
        })
    }

    fn cycle_note(&self, x: usize, side: Side) -> Result<CycleNote, GorensteinError> {
        const STEPS: usize = 24;
        let unfolds = self.unfolds(side)?;
        let next = |cur: &[usize]| -> Vec<usize> {
            let mut out: Vec<usize> = cur.iter().flat_map(|&y| unfolds[y].rest.iter().copied()).collect();
            out.sort_unstable();
            out
        };
        let mut prefix = vec![vec![x]];
        for _ in 0..STEPS {
            let n = next(prefix.last().unwrap());
            if n.is_empty() {
                prefix.push(n);
                return Ok(CycleNote {
                    prefix,
                    repeats: None,
                    by_support: false,
                });
            }
            if let Some(j) = prefix.iter().position(|p| *p == n) {
                prefix.push(n);
                return Ok(CycleNote {
                    prefix,
                    repeats: Some(j),
                    by_support: false,
                });
            }
            prefix.push(n);
        }
        // Multiplicities keep growing; the summand sets must repeat.
        let support = |v: &[usize]| {
            let mut s = v.to_vec();
            s.dedup();
            s
        };
        let mut sets = vec![vec![x]];
        loop {
            let mut n = support(&next(sets.last().unwrap()));
            n.dedup();
            if let Some(j) = sets.iter().position(|p| *p == n) {
                sets.push(n);
                return Ok(CycleNote {
                    prefix: sets,
                    repeats: Some(j),
                    by_support: true,
                });
            }
            sets.push(n);
        }
    }

    /// A certificate for one verdict of `m`, which must come from this
    /// decider.
    pub fn certificate(&self, m: &Membership, x: usize) -> Result<Certificate, GorensteinError> {
        let mut b = CertBuilder::new();
        self.certify_into(&mut b, m, x)?;
        Ok(b.finish())
    }

    pub(crate) fn certify_into(&self, b: &mut CertBuilder, m: &Membership, x: usize) -> Result<(), GorensteinError> {
        if m.mode != Mode::Gfp {
            return Err(GorensteinError::Rejected("certificates come from gfp-mode verdicts".into()));
        }
        let v = &m.verdicts[x];
        match v.status {
            Status::Member => {
                if matches!(m.which, Which::Cores | Which::RG | Which::G) {
                    self.closure_cert(b, x, Side::Left, m.which == Which::G)?;
                }
                if matches!(m.which, Which::Res | Which::LG | Which::G) {
                    self.closure_cert(b, x, Side::Right, m.which == Which::G)?;
                }
                let tests: Vec<Rep> = self.c.members().to_vec();
                match m.which {
                    Which::RG => self.syzygy_closure_cert(b, &[x], &tests)?,
                    Which::LG => self.syzygy_closure_cert(b, &self.cidx, &[self.atlas.rep(x).clone()])?,
                    _ => {}
                }
            }
            Status::NonMember => {
                if let Some(r) = &v.refutation {
                    let reasons: BTreeMap<usize, Refutation> =
                        m.trace.iter().map(|e| (e.object, e.reason.clone())).collect();
                    self.refutation_cert(b, x, r, &reasons, m.which)?;
                }
            }
            Status::Inconclusive => {}
        }
        Ok(())
    }

    fn step_cert(&self, b: &mut CertBuilder, x: usize, side: Side, cross: bool) -> Result<(), GorensteinError> {
        let u = &self.unfolds(side)?[x];
        let tests = self.c.members();
        let aside = match side {
            Side::Left => ApproxSide::Left,
            Side::Right => ApproxSide::Right,
        };
        b.approximation(&u.approx.map, aside, tests);
        let parts: Vec<Rep> = u.approx.summands.iter().map(|&i| tests[i].clone()).collect();
        b.direct_sum(u.approx.object(), &parts);
        let Some(seq) = &u.seq else {
            let c = match side {
                Side::Left => Claim::NotMono { map: b.map(&u.approx.map) },
                Side::Right => Claim::NotEpi { map: b.map(&u.approx.map) },
            };
            b.claim(c);
            return Ok(());
        };
        b.short_exact(&seq.f, &seq.g);
        let (own, other) = match side {
            Side::Left => (HomFunctor::Contravariant, HomFunctor::Covariant),
            Side::Right => (HomFunctor::Covariant, HomFunctor::Contravariant),
        };
        for t in tests {
            b.hom_exact(&seq.f, &seq.g, t, own, true);
            if cross {
                let holds = hom_exactness(
                    seq,
                    t,
                    match other {
                        HomFunctor::Covariant => HomSide::From,
                        HomFunctor::Contravariant => HomSide::Into,
                    },
                )?;
                b.hom_exact(&seq.f, &seq.g, t, other, holds);
            }
        }
        let iso = u.rest_iso.as_ref().expect("set with the sequence");
        let reps: Vec<Rep> = u.rest.iter().map(|&i| self.atlas.rep(i).clone()).collect();
        b.direct_sum(iso.source(), &reps);
        let c = Claim::Iso { map: b.map(iso) };
        b.claim(c);
        Ok(())
    }

    fn closure_cert(&self, b: &mut CertBuilder, x: usize, side: Side, cross: bool) -> Result<(), GorensteinError> {
        let unfolds = self.unfolds(side)?;
        let mut seen = vec![false; self.atlas.len()];
        let mut queue = VecDeque::from([x]);
        seen[x] = true;
        while let Some(y) = queue.pop_front() {
            self.step_cert(b, y, side, cross)?;
            for &z in &unfolds[y].rest {
                if !seen[z] {
                    seen[z] = true;
                    queue.push_back(z);
                }
            }
        }
        Ok(())
    }

    fn syzygy_step_cert(&self, b: &mut CertBuilder, y: usize) -> Result<(), GorensteinError> {
        let s = &self.syzygy_steps()?[y];
        let alg = self.atlas.algebra();
        let mut parts = Vec::new();
        for &v in &s.cover.vertices {
            let p = projective(alg, v);
            let c = Claim::Standard {
                object: b.object(&p),
                kind: StandardKind::Projective,
                vertex: v,
            };
            b.claim(c);
            parts.push(p);
        }
        b.direct_sum(s.cover.object(), &parts);
        b.short_exact(&s.inclusion, &s.cover.map);
        let reps: Vec<Rep> = s.rest.iter().map(|&i| self.atlas.rep(i).clone()).collect();
        b.direct_sum(s.rest_iso.source(), &reps);
        let c = Claim::Iso { map: b.map(&s.rest_iso) };
        b.claim(c);
        Ok(())
    }

    /// `Ext^1(y, T) = 0` for every `y` reachable from `starts` by syzygy
    /// summands and every test object, hence `Ext^{≥1}(starts, T) = 0`.
    fn syzygy_closure_cert(&self, b: &mut CertBuilder, starts: &[usize], tests: &[Rep]) -> Result<(), GorensteinError> {
        let steps = self.syzygy_steps()?;
        let mut seen = vec![false; self.atlas.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in starts {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(y) = queue.pop_front() {
            self.syzygy_step_cert(b, y)?;
            let s = &steps[y];
            for t in tests {
                b.hom_exact(&s.inclusion, &s.cover.map, t, HomFunctor::Contravariant, true);
            }
            for &z in &s.rest {
                if !seen[z] {
                    seen[z] = true;
                    queue.push_back(z);
                }
            }
        }
        Ok(())
    }

    fn refutation_cert(
        &self,
        b: &mut CertBuilder,
        root: usize,
        r: &Refutation,
        reasons: &BTreeMap<usize, Refutation>,
        which: Which,
    ) -> Result<(), GorensteinError> {
        let cross = which == Which::G;
        match r {
            Refutation::NotMono { object } => self.step_cert(b, *object, Side::Left, false),
            Refutation::NotEpi { object } => self.step_cert(b, *object, Side::Right, false),
            Refutation::NotHomExact { object, side, .. } => {
                let s = match side {
                    HomSide::From => Side::Left,
                    HomSide::Into => Side::Right,
                };
                self.step_cert(b, *object, s, true)
            }
            Refutation::Excluded { object, summand } => {
                let u_left = &self.unfolds(Side::Left)?[*object];
                let on_left = matches!(which, Which::Cores | Which::RG)
                    || (which == Which::G && u_left.seq.is_some() && u_left.rest.contains(summand));
                let side = if on_left { Side::Left } else { Side::Right };
                self.step_cert(b, *object, side, cross)?;
                let next = reasons.get(summand).expect("summand eliminated earlier");
                self.refutation_cert(b, *summand, next, reasons, which)
            }
            Refutation::Ext { from, into, .. } => {
                let starts: Vec<usize> = match which {
                    Which::LG => self.cidx.clone(),
                    _ => vec![root],
                };
                self.ext_path_cert(b, &starts, *from, *into)
            }
            Refutation::Exhausted { .. } => Ok(()),
        }
    }

    /// The syzygy chain from one of `starts` down to `from`, and the failure
    /// of `Hom(-, into)` on the last step.
    fn ext_path_cert(&self, b: &mut CertBuilder, starts: &[usize], from: usize, into: usize) -> Result<(), GorensteinError> {
        let steps = self.syzygy_steps()?;
        let mut parent: Vec<Option<usize>> = vec![None; self.atlas.len()];
        let mut seen = vec![false; self.atlas.len()];
        let mut queue = VecDeque::new();
        for &s in starts {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(y) = queue.pop_front() {
            for &z in &steps[y].rest {
                if !seen[z] {
                    seen[z] = true;
                    parent[z] = Some(y);
                    queue.push_back(z);
                }
            }
        }
        let mut chain = vec![from];
        while let Some(p) = parent[*chain.last().unwrap()] {
            chain.push(p);
        }
        for &y in &chain {
            self.syzygy_step_cert(b, y)?;
        }
        let s = &steps[from];
        b.hom_exact(&s.inclusion, &s.cover.map, self.atlas.rep(into), HomFunctor::Contravariant, false);
        Ok(())
    }
}
