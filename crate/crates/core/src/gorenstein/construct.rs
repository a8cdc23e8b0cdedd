//! Constructions on exact sequences: the four-term reduction through a left
//! approximation, the two witnesses for relative dimension against `rG(C)`,
//! and the merge of coresolutions along a short exact sequence.

use crate::cert::{CertBuilder, Certificate, Claim, HomFunctor};
use crate::homcalc::{exact_at, hom_exactness, pushout, ses_check, HomSide, ShortExactSeq};
use crate::rep::{extend, lift, morphism_parts, DirectSum, Morphism, Rep};
use crate::subcat::{is_self_orthogonal, minimal_approximation, Side, Subcategory};

use super::decide::{split_into_atlas, Decider};
use super::reldim::{relative_pd, DimTrace, RelativeDimension};
use super::{GorensteinError, Membership, Mode, Which};

/// `0 -> K -k-> X1 -d-> X0 -e-> A -> 0`.
#[derive(Clone, Debug)]
pub struct FourTerm {
    pub k: Morphism,
    pub d: Morphism,
    pub e: Morphism,
}

impl FourTerm {
    pub fn is_exact(&self) -> bool {
        self.k.is_mono() && self.e.is_epi() && exact_at(&self.k, &self.d).is_ok() && exact_at(&self.d, &self.e).is_ok()
    }

    fn claims(&self, b: &mut CertBuilder) {
        chain_claims(b, &[self.k.clone(), self.d.clone(), self.e.clone()]);
    }
}

/// `0 -> X_0 -> X_1 -> ... -> X_k -> 0` exact, for `maps[i]: X_i -> X_{i+1}`.
fn chain_is_exact(maps: &[Morphism]) -> bool {
    match (maps.first(), maps.last()) {
        (Some(f), Some(l)) => f.is_mono() && l.is_epi() && maps.windows(2).all(|w| exact_at(&w[0], &w[1]).is_ok()),
        _ => true,
    }
}

fn chain_claims(b: &mut CertBuilder, maps: &[Morphism]) {
    let (Some(f), Some(l)) = (maps.first(), maps.last()) else {
        return;
    };
    let c = Claim::Mono { map: b.map(f) };
    b.claim(c);
    for w in maps.windows(2) {
        let c = Claim::ExactAt {
            f: b.map(&w[0]),
            g: b.map(&w[1]),
        };
        b.claim(c);
    }
    let c = Claim::Epi { map: b.map(l) };
    b.claim(c);
}

/// Decider plus the `rG(C)` verdicts, shared by the constructions.
struct Ctx<'d, 'a> {
    dec: &'d Decider<'a>,
    rg: Membership,
}

impl<'d, 'a> Ctx<'d, 'a> {
    fn new(dec: &'d Decider<'a>) -> Result<Self, GorensteinError> {
        let c = dec.subcategory();
        if !is_self_orthogonal(c, dec.atlas(), None)?.holds() {
            return Err(GorensteinError::Rejected("the subcategory is not self-orthogonal".into()));
        }
        Ok(Ctx {
            dec,
            rg: dec.membership(Which::RG, Mode::Gfp)?,
        })
    }

    fn rg_members(&self) -> Vec<usize> {
        self.rg.members()
    }

    fn in_rg(&self, m: &Rep) -> Result<bool, GorensteinError> {
        let members = self.rg_members();
        Ok(self.dec.atlas().locate(m)?.iter().all(|i| members.contains(i)))
    }

    fn in_c(&self, m: &Rep) -> Result<bool, GorensteinError> {
        let c = self.dec.c_indices();
        Ok(self.dec.atlas().locate(m)?.iter().all(|i| c.contains(i)))
    }

    /// `m` is isomorphic to a sum of atlas members; with `rg`, each of them
    /// carries its `rG(C)` member certificate.
    fn certify_object(&self, b: &mut CertBuilder, m: &Rep, rg: bool) -> Result<(), GorensteinError> {
        let atlas = self.dec.atlas();
        let (idx, iso) = split_into_atlas(atlas, m)?;
        let parts: Vec<Rep> = idx.iter().map(|&i| atlas.rep(i).clone()).collect();
        b.direct_sum(iso.source(), &parts);
        let c = Claim::Iso { map: b.map(&iso) };
        b.claim(c);
        if rg {
            for i in idx {
                self.dec.certify_into(b, &self.rg, i)?;
            }
        }
        Ok(())
    }

    fn lemma39(&self, input: &FourTerm) -> Result<FourTerm, GorensteinError> {
        if !input.is_exact() {
            return Err(GorensteinError::Rejected("input sequence is not exact".into()));
        }
        for x in [input.d.source(), input.d.target()] {
            if !self.in_rg(x)? {
                return Err(GorensteinError::Rejected(format!("{} is not in rG(C)", x.dim_vector_string())));
            }
        }
        // 0 -> G1 -> C -> G' -> 0 from the minimal left approximation.
        let ap = minimal_approximation(input.d.source(), self.dec.subcategory(), Side::Left)?;
        if !ap.mono {
            return Err(GorensteinError::Unverified("left approximation of an rG(C) object is not mono".into()));
        }
        let parts = morphism_parts(&input.d);
        // Push G1 -> C out along G1 -> Im f, then Im f -> L out along Im f -> G0.
        let first = pushout(&parts.coimage, &ap.map);
        let second = pushout(&parts.image_inclusion, &first.from_b);
        let to_a = second
            .factor(&input.e, &Morphism::zero(&first.object, input.e.target()))
            .ok_or_else(|| GorensteinError::Unverified("G -> A does not factor".into()))?;
        let out = FourTerm {
            k: input.k.then(&ap.map),
            d: first.from_c.then(&second.from_c),
            e: to_a,
        };
        if !out.is_exact() {
            return Err(GorensteinError::Unverified("output sequence is not exact".into()));
        }
        if !self.in_c(out.d.source())? || !self.in_rg(out.d.target())? {
            return Err(GorensteinError::Unverified("output terms outside C or rG(C)".into()));
        }
        Ok(out)
    }

    /// Minimal right `rG(C)`-approximations, `maps[0]: G_0 -> A`,
    /// `maps[i]: G_i -> G_{i-1}`, stopping once the kernel lies in `rG(C)`.
    fn rg_resolution(&self, a: &Rep, n: usize) -> Result<Option<Vec<Morphism>>, GorensteinError> {
        let rg = Subcategory::from_atlas(self.dec.atlas(), &self.rg_members());
        let mut maps: Vec<Morphism> = Vec::new();
        let mut obj = a.clone();
        let mut incl = Morphism::identity(a);
        for _ in 0..=n {
            if self.in_rg(&obj)? {
                maps.push(incl);
                return Ok(Some(maps));
            }
            let ap = minimal_approximation(&obj, &rg, Side::Right)?;
            if !ap.epi {
                return Ok(None);
            }
            maps.push(ap.map.then(&incl));
            let k = ap.map.kernel();
            obj = k.object;
            incl = k.inclusion;
        }
        Ok(None)
    }

    /// Induction from an `rG(C)`-resolution to
    /// `[G -> A, C_1 -> G, C_2 -> C_1, ..., C_n -> C_{n-1}]`.
    fn reduce(&self, res: &[Morphism]) -> Result<Vec<Morphism>, GorensteinError> {
        let e = &res[0];
        match res.len() {
            1 => Ok(vec![e.clone()]),
            2 => {
                let zero = Rep::zero(e.source().algebra().clone());
                let out = self.lemma39(&FourTerm {
                    k: Morphism::zero(&zero, res[1].source()),
                    d: res[1].clone(),
                    e: e.clone(),
                })?;
                Ok(vec![out.e, out.d])
            }
            _ => {
                let t = e.kernel();
                let onto_t = lift(&res[1], &t.inclusion)?.expect("image of G1 lies in the kernel");
                let mut tail = vec![onto_t];
                tail.extend(res[2..].iter().cloned());
                let inner = self.reduce(&tail)?;
                let b = morphism_parts(&inner[1]);
                let out = self.lemma39(&FourTerm {
                    k: b.image_inclusion.clone(),
                    d: inner[0].then(&t.inclusion),
                    e: e.clone(),
                })?;
                let mut maps = vec![out.e, out.d, b.coimage.then(&out.k)];
                maps.extend(inner[2..].iter().cloned());
                Ok(maps)
            }
        }
    }
}

/// Input and output both carry rG(C) membership for the middle terms; the
/// certificate covers exactness, the `C` term and `rG(C)` membership of `G`.
pub fn lemma39_construct(input: &FourTerm, dec: &Decider) -> Result<(FourTerm, Certificate), GorensteinError> {
    let ctx = Ctx::new(dec)?;
    let out = ctx.lemma39(input)?;
    let mut b = CertBuilder::new();
    out.claims(&mut b);
    ctx.certify_object(&mut b, out.d.source(), false)?;
    ctx.certify_object(&mut b, out.d.target(), true)?;
    Ok((out, b.finish()))
}

/// `0 -> H -> G -> A -> 0` with `G` in `rG(C)` and an explicit
/// `C`-resolution of `H`.
#[derive(Clone, Debug)]
pub struct Witness2 {
    pub h: Morphism,
    pub g: Morphism,
    /// `[C_1 -> H, C_2 -> C_1, ..., C_n -> C_{n-1}]`.
    pub resolution: Vec<Morphism>,
    pub c_pd: RelativeDimension,
}

/// `0 -> A -> H' -> G' -> 0`, Hom(-, C)-exact, with `G'` in `rG(C)` and an
/// explicit `C`-resolution of `H'`.
#[derive(Clone, Debug)]
pub struct Witness3 {
    pub a: Morphism,
    pub q: Morphism,
    pub resolution: Vec<Morphism>,
    pub c_pd: RelativeDimension,
}

#[derive(Clone, Debug)]
pub struct Thm310 {
    pub n: usize,
    pub holds: bool,
    pub rg_pd: RelativeDimension,
    pub trace: DimTrace,
    pub witness2: Option<Witness2>,
    pub witness3: Option<Witness3>,
    pub certificate: Option<Certificate>,
}

/// Decides `rG(C)-pd A ≤ n`; on success builds and re-verifies both
/// witnesses.
pub fn thm310_certificates(a: &Rep, n: usize, dec: &Decider) -> Result<Thm310, GorensteinError> {
    let ctx = Ctx::new(dec)?;
    let rg = Subcategory::from_atlas(dec.atlas(), &ctx.rg_members());
    let (rg_pd, trace) = relative_pd(a, &rg, dec.atlas())?;
    let Some(res) = ctx.rg_resolution(a, n)? else {
        return Ok(Thm310 {
            n,
            holds: false,
            rg_pd,
            trace,
            witness2: None,
            witness3: None,
            certificate: None,
        });
    };
    let c = dec.subcategory();
    let fail = |what: &str| GorensteinError::Unverified(what.to_string());

    let maps = ctx.reduce(&res)?;
    let g = maps[0].clone();
    let h = g.kernel();
    let mut resolution = Vec::new();
    if maps.len() > 1 {
        resolution.push(lift(&maps[1], &h.inclusion)?.ok_or_else(|| fail("C_1 -> G misses the kernel"))?);
        resolution.extend(maps[2..].iter().cloned());
    }
    let ascending: Vec<Morphism> = resolution.iter().rev().cloned().collect();
    if !ses_check(&h.inclusion, &g).is_ok() || !ctx.in_rg(g.source())? || !chain_is_exact(&ascending) {
        return Err(fail("witness (2)"));
    }
    for f in &resolution {
        if !ctx.in_c(f.source())? {
            return Err(fail("witness (2) resolution term outside C"));
        }
    }
    let w2 = Witness2 {
        h: h.inclusion.clone(),
        g: g.clone(),
        c_pd: relative_pd(&h.object, c, dec.atlas())?.0,
        resolution: resolution.clone(),
    };

    // Push the approximation sequence of G out along G -> A.
    let ap = minimal_approximation(g.source(), c, Side::Left)?;
    if !ap.mono {
        return Err(fail("left approximation of G is not mono"));
    }
    let po = pushout(&g, &ap.map);
    let q = po
        .factor(&Morphism::zero(a, &ap.cokernel.object), &ap.cokernel.projection)
        .ok_or_else(|| fail("H' -> G' does not factor"))?;
    let seq = ses_check(&po.from_b, &q).map_err(|_| fail("witness (3) is not exact"))?;
    for t in c.members() {
        if !hom_exactness(&seq, t, HomSide::Into)? {
            return Err(fail("witness (3) is not Hom(-, C)-exact"));
        }
    }
    if !ctx.in_rg(q.target())? {
        return Err(fail("G' outside rG(C)"));
    }
    let mut res3 = vec![po.from_c.clone()];
    if let Some(first) = resolution.first() {
        res3.push(first.then(&h.inclusion).then(&ap.map));
        res3.extend(resolution[1..].iter().cloned());
    } else if !h.object.is_zero() {
        return Err(fail("H nonzero without a resolution"));
    } else {
        res3.push(Morphism::zero(&h.object, ap.object()));
    }
    let res3_up: Vec<Morphism> = res3.iter().rev().cloned().collect();
    if !chain_is_exact(&res3_up) {
        return Err(fail("witness (3) resolution"));
    }
    let w3 = Witness3 {
        a: po.from_b.clone(),
        q: q.clone(),
        c_pd: relative_pd(&po.object, c, dec.atlas())?.0,
        resolution: res3.clone(),
    };

    let mut b = CertBuilder::new();
    b.short_exact(&w2.h, &w2.g);
    ctx.certify_object(&mut b, g.source(), true)?;
    chain_claims(&mut b, &ascending);
    for f in &resolution {
        ctx.certify_object(&mut b, f.source(), false)?;
    }
    b.short_exact(&w3.a, &w3.q);
    for t in c.members() {
        b.hom_exact(&w3.a, &w3.q, t, HomFunctor::Contravariant, true);
    }
    ctx.certify_object(&mut b, q.target(), true)?;
    chain_claims(&mut b, &res3_up);
    for f in &res3 {
        ctx.certify_object(&mut b, f.source(), false)?;
    }
    Ok(Thm310 {
        n,
        holds: true,
        rg_pd,
        trace,
        witness2: Some(w2),
        witness3: Some(w3),
        certificate: Some(b.finish()),
    })
}

/// `0 -> M -> C^0 -> C^1 -> ...`, truncated: `maps[0]: M -> C^0`,
/// `maps[i]: C^{i-1} -> C^i`.
#[derive(Clone, Debug)]
pub struct Coresolution {
    pub maps: Vec<Morphism>,
}

impl Coresolution {
    pub fn object(&self) -> &Rep {
        self.maps[0].source()
    }

    pub fn depth(&self) -> usize {
        self.maps.len()
    }

    pub fn terms(&self) -> Vec<&Rep> {
        self.maps.iter().map(Morphism::target).collect()
    }

    /// The short pieces `0 -> K_i -> C^i -> K_{i+1} -> 0`, if the complex is
    /// exact.
    pub fn pieces(&self) -> Option<Vec<ShortExactSeq>> {
        let mut out: Vec<ShortExactSeq> = Vec::new();
        for (i, d) in self.maps.iter().enumerate() {
            let f = match out.last() {
                None => d.clone(),
                Some(prev) => extend(d, &prev.g).ok()??,
            };
            if !f.is_mono() {
                return None;
            }
            let q = f.cokernel();
            out.push(ses_check(&f, &q.projection).ok()?);
            debug_assert_eq!(out.len(), i + 1);
        }
        Some(out)
    }

    /// Exact, every term in `add C`, every piece Hom(-, C)-exact.
    pub fn verify(&self, c: &Subcategory) -> Result<bool, GorensteinError> {
        let Some(pieces) = self.pieces() else {
            return Ok(false);
        };
        for p in &pieces {
            if !c.contains(p.middle())? {
                return Ok(false);
            }
            for t in c.members() {
                if !hom_exactness(p, t, HomSide::Into)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Pieces of `cor`, padded with zero pieces up to `depth` when the last
/// cokernel vanishes.
fn padded_pieces(cor: &Coresolution, depth: usize) -> Result<Vec<ShortExactSeq>, GorensteinError> {
    let mut p = cor
        .pieces()
        .ok_or_else(|| GorensteinError::Rejected("input coresolution is not exact".into()))?;
    while p.len() < depth {
        let last = p.last().expect("nonempty").right().clone();
        if !last.is_zero() {
            return Err(GorensteinError::Rejected("input coresolution is too short".into()));
        }
        let z = Morphism::zero(&last, &last);
        p.push(ShortExactSeq { f: z.clone(), g: z });
    }
    Ok(p)
}

/// Merges coresolutions of `L` and `N` into one of `M` along
/// `0 -> L -> M -> N -> 0`, to `depth` terms.
pub fn horseshoe_merge(
    ses: &ShortExactSeq,
    left: &Coresolution,
    right: &Coresolution,
    c: &Subcategory,
    depth: usize,
) -> Result<Coresolution, GorensteinError> {
    let reject = |s: &str| GorensteinError::Rejected(s.to_string());
    ses_check(&ses.f, &ses.g).map_err(|_| reject("sequence is not exact"))?;
    for t in c.members() {
        if !hom_exactness(ses, t, HomSide::Into)? {
            return Err(reject("sequence is not Hom(-, C)-exact"));
        }
    }
    if depth == 0 {
        return Err(reject("depth must be positive"));
    }
    for cor in [left, right] {
        if !cor.verify(c)? {
            return Err(reject("input is not a Hom(-, C)-exact C-coresolution"));
        }
    }
    if left.object() != ses.left() || right.object() != ses.right() {
        return Err(reject("coresolutions do not match the sequence ends"));
    }
    let lp = padded_pieces(left, depth)?;
    let rp = padded_pieces(right, depth)?;
    let alg = ses.middle().algebra().clone();
    let mut cur = ses.clone();
    let mut maps = Vec::new();
    let mut prev_q: Option<Morphism> = None;
    for i in 0..depth {
        let (a, b) = (&lp[i], &rp[i]);
        let alpha = extend(&a.f, &cur.f)?.ok_or_else(|| reject("no lift through the sequence"))?;
        let sum = DirectSum::new(&alg, &[a.middle().clone(), b.middle().clone()]);
        let d = Morphism::column(cur.middle(), &sum.object, &[alpha, cur.g.then(&b.f)]);
        maps.push(match &prev_q {
            None => d.clone(),
            Some(q) => q.then(&d),
        });
        let q = d.cokernel().projection;
        let f_next = extend(&sum.injections[0].then(&q), &a.g)?.ok_or_else(|| reject("cokernel map"))?;
        let g_next = extend(&sum.projections[1].then(&b.g), &q)?.ok_or_else(|| reject("cokernel map"))?;
        cur = ShortExactSeq { f: f_next, g: g_next };
        prev_q = Some(q);
    }
    let out = Coresolution { maps };
    if !out.verify(c)? {
        return Err(GorensteinError::Unverified("merged coresolution".into()));
    }
    Ok(out)
}

/// Iterated minimal left approximations of `m`, up to `depth` terms or
/// until the cokernel vanishes; `None` once an approximation is not mono.
pub fn minimal_coresolution(m: &Rep, c: &Subcategory, depth: usize) -> Result<Option<Coresolution>, GorensteinError> {
    let mut maps: Vec<Morphism> = Vec::new();
    let mut obj = m.clone();
    let mut q: Option<Morphism> = None;
    while maps.len() < depth.max(1) {
        let ap = minimal_approximation(&obj, c, Side::Left)?;
        if !ap.mono {
            return Ok(None);
        }
        maps.push(match &q {
            None => ap.map.clone(),
            Some(q) => q.then(&ap.map),
        });
        if ap.cokernel.object.is_zero() {
            break;
        }
        obj = ap.cokernel.object.clone();
        q = Some(ap.cokernel.projection.clone());
    }
    Ok(Some(Coresolution { maps }))
}
