use serde::{Deserialize, Serialize};

use crate::gorenstein::{relative_id, relative_pd, Decider, Mode, RelativeDimension, Which};
use crate::homcalc::{Atlas, HomcalcError};
use crate::subcat::{gen_cogen_check, Check, Subcategory, Witness};

use super::cotorsion::{cotorsion_idx, CotorsionReport};
use super::enumerate::{closure_idx, ClosureProperty};
use super::{set_equality, ContextBounds, ContextError, Counterexample, Finding};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextKind {
    /// `X` resolving-like, `Y ⊆ X-pd^{<∞}`, `ω` an injective cogenerator.
    WeakAB,
    /// The dual: `Y ⊆ X-id^{<∞}`, `ω` a projective generator.
    WeakCoAB,
}

impl ContextKind {
    pub fn dual(self) -> ContextKind {
        match self {
            ContextKind::WeakAB => ContextKind::WeakCoAB,
            ContextKind::WeakCoAB => ContextKind::WeakAB,
        }
    }
}

/// Closure of one class: `maps` is kernels of epis or cokernels of monos,
/// whichever the condition asks for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureFindings {
    pub extensions: Finding,
    pub maps: Finding,
    pub summands: Finding,
}

impl ClosureFindings {
    fn compute(atlas: &Atlas, x: &[usize], maps: ClosureProperty, bounds: &ContextBounds) -> Result<ClosureFindings, ContextError> {
        Ok(ClosureFindings {
            extensions: closure_idx(atlas, x, ClosureProperty::Extensions, bounds)?,
            maps: closure_idx(atlas, x, maps, bounds)?,
            summands: closure_idx(atlas, x, ClosureProperty::Summands, bounds)?,
        })
    }

    fn all(&self) -> [(&'static str, &Finding); 3] {
        [
            ("extensions", &self.extensions),
            ("maps", &self.maps),
            ("summands", &self.summands),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ABContextReport {
    pub kind: ContextKind,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub omega: Vec<usize>,
    /// Closure of `X`.
    pub x_closure: ClosureFindings,
    /// Every member of `Y` has finite relative dimension over `X`.
    pub y_dimension: Finding,
    pub y_closure: ClosureFindings,
    /// `ω = X ∩ Y`.
    pub intersection: Finding,
    /// `ω` is an injective cogenerator (resp. projective generator) for `X`.
    pub generator: Finding,
    pub bounds: ContextBounds,
}

/// Verdict tags only, for comparing a report with the dual computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextSummary {
    pub kind: ContextKind,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub omega: Vec<usize>,
    pub verdicts: Vec<(String, String)>,
}

impl ContextSummary {
    /// The same summary read over the opposite algebra, whose atlas keeps
    /// the indices.
    pub fn dualize(&self) -> ContextSummary {
        ContextSummary {
            kind: self.kind.dual(),
            ..self.clone()
        }
    }
}

impl ABContextReport {
    fn findings(&self) -> Vec<(String, &Finding)> {
        let mut out = Vec::new();
        for (k, f) in self.x_closure.all() {
            out.push((format!("x_closure.{k}"), f));
        }
        out.push(("y_dimension".into(), &self.y_dimension));
        for (k, f) in self.y_closure.all() {
            out.push((format!("y_closure.{k}"), f));
        }
        out.push(("intersection".into(), &self.intersection));
        out.push(("generator".into(), &self.generator));
        out
    }

    pub fn holds(&self) -> bool {
        self.findings().iter().all(|(_, f)| f.holds())
    }

    /// Names of the conditions that do not hold.
    pub fn failing(&self) -> Vec<String> {
        self.findings()
            .into_iter()
            .filter(|(_, f)| !f.holds())
            .map(|(k, _)| k)
            .collect()
    }

    pub fn summary(&self) -> ContextSummary {
        ContextSummary {
            kind: self.kind,
            x: self.x.clone(),
            y: self.y.clone(),
            omega: self.omega.clone(),
            verdicts: self.findings().into_iter().map(|(k, f)| (k, f.tag().to_string())).collect(),
        }
    }
}

pub(crate) fn from_check(c: &Check, n: usize) -> Finding {
    match c {
        Check::Holds => Finding::holds_after(n),
        Check::Inconclusive { reason } => Finding::Inconclusive { reason: reason.clone() },
        Check::Fails { witness } => match witness {
            Witness::Ext { source, test, degree } => Finding::fails(Counterexample::Ext {
                source: *source,
                test: *test,
                degree: *degree,
            }),
            Witness::NotMono { object } => Finding::object(*object, "approximation is not mono"),
            Witness::NotEpi { object } => Finding::object(*object, "approximation is not epi"),
            Witness::Outside { object, summand } => {
                Finding::object(*object, format!("approximation (co)kernel has summand {summand} outside"))
            }
        },
    }
}

pub(crate) fn context_idx(
    kind: ContextKind,
    atlas: &Atlas,
    x: &[usize],
    y: &[usize],
    omega: &[usize],
    bounds: &ContextBounds,
) -> Result<ABContextReport, ContextError> {
    if !atlas.is_complete() {
        return Err(HomcalcError::IncompleteAtlas.into());
    }
    let ab = kind == ContextKind::WeakAB;
    let (x_maps, y_maps) = if ab {
        (ClosureProperty::KerEpi, ClosureProperty::CokerMono)
    } else {
        (ClosureProperty::CokerMono, ClosureProperty::KerEpi)
    };
    let x_closure = ClosureFindings::compute(atlas, x, x_maps, bounds)?;
    let y_closure = ClosureFindings::compute(atlas, y, y_maps, bounds)?;

    let xs = Subcategory::from_atlas(atlas, x);
    let mut y_dimension = Finding::holds_after(0);
    for &t in y {
        let (d, _) = if ab {
            relative_pd(atlas.rep(t), &xs, atlas)?
        } else {
            relative_id(atlas.rep(t), &xs, atlas)?
        };
        let f = match d {
            RelativeDimension::Finite(_) => Finding::holds_after(1),
            RelativeDimension::Infinite => Finding::fails(Counterexample::Dimension {
                object: t,
                value: d,
                expected: "finite".into(),
            }),
            RelativeDimension::Inconclusive => Finding::Inconclusive {
                reason: format!("relative dimension of member {t} undecided"),
            },
        };
        y_dimension = y_dimension.and(f);
    }

    let meet: Vec<usize> = x.iter().copied().filter(|i| y.contains(i)).collect();
    let intersection = set_equality(omega, &meet, atlas.len(), "ω", "X ∩ Y");
    let generator = if omega.iter().all(|o| x.contains(o)) {
        let report = gen_cogen_check(&Subcategory::from_atlas(atlas, omega), &xs, atlas)?;
        let c = if ab {
            &report.injective_cogenerator
        } else {
            &report.projective_generator
        };
        from_check(c, x.len())
    } else {
        let o = omega.iter().copied().find(|o| !x.contains(o)).unwrap();
        Finding::object(o, "ω is not contained in X")
    };

    Ok(ABContextReport {
        kind,
        x: x.to_vec(),
        y: y.to_vec(),
        omega: omega.to_vec(),
        x_closure,
        y_dimension,
        y_closure,
        intersection,
        generator,
        bounds: *bounds,
    })
}

pub fn weak_ab_check(
    x: &Subcategory,
    y: &Subcategory,
    omega: &Subcategory,
    atlas: &Atlas,
    bounds: &ContextBounds,
) -> Result<ABContextReport, ContextError> {
    let (xi, yi, oi) = (x.indices_in(atlas)?, y.indices_in(atlas)?, omega.indices_in(atlas)?);
    context_idx(ContextKind::WeakAB, atlas, &xi, &yi, &oi, bounds)
}

pub fn weak_coab_check(
    x: &Subcategory,
    y: &Subcategory,
    omega: &Subcategory,
    atlas: &Atlas,
    bounds: &ContextBounds,
) -> Result<ABContextReport, ContextError> {
    let (xi, yi, oi) = (x.indices_in(atlas)?, y.indices_in(atlas)?, omega.indices_in(atlas)?);
    context_idx(ContextKind::WeakCoAB, atlas, &xi, &yi, &oi, bounds)
}

pub(crate) fn require(report: &CotorsionReport, injective_side: bool) -> Result<(), ContextError> {
    if !report.is_pair() {
        return Err(ContextError::Precondition("not a cotorsion pair".into()));
    }
    if !report.is_hereditary() {
        return Err(ContextError::Precondition("the pair is not hereditary".into()));
    }
    if injective_side && !report.has_enough_injectives() {
        return Err(ContextError::Precondition("enough injectives not established".into()));
    }
    if !injective_side && !report.has_enough_projectives() {
        return Err(ContextError::Precondition("enough projectives not established".into()));
    }
    Ok(())
}

/// Members of `which` over the kernel `C`, decided by the gfp decider.
pub(crate) fn gorenstein_members(atlas: &Atlas, c: &[usize], which: Which) -> Result<Vec<usize>, ContextError> {
    let dec = Decider::new(atlas, &Subcategory::from_atlas(atlas, c))?;
    let m = dec.membership(which, Mode::Gfp)?;
    if !m.is_conclusive() {
        return Err(ContextError::Precondition(format!("{which:?} membership is inconclusive")));
    }
    Ok(m.members())
}

/// Members of finite relative projective (`pd`) or injective dimension over
/// `x`; an undecided dimension is an error.
pub(crate) fn finite_dimension(atlas: &Atlas, x: &[usize], pd: bool) -> Result<Vec<usize>, ContextError> {
    let xs = Subcategory::from_atlas(atlas, x);
    let mut out = Vec::new();
    for a in 0..atlas.len() {
        let (d, _) = if pd {
            relative_pd(atlas.rep(a), &xs, atlas)?
        } else {
            relative_id(atlas.rep(a), &xs, atlas)?
        };
        match d {
            RelativeDimension::Finite(_) => out.push(a),
            RelativeDimension::Infinite => {}
            RelativeDimension::Inconclusive => {
                return Err(ContextError::Precondition(format!("relative dimension of member {a} undecided")))
            }
        }
    }
    Ok(out)
}

/// `(rG(C), C-pd^{<∞}, C)` for the kernel `C` of a hereditary cotorsion
/// pair with enough injectives.
pub fn thm48_verify(u: &Subcategory, v: &Subcategory, atlas: &Atlas, bounds: &ContextBounds) -> Result<ABContextReport, ContextError> {
    let report = cotorsion_idx(atlas, &u.indices_in(atlas)?, &v.indices_in(atlas)?, bounds)?;
    require(&report, true)?;
    let c = &report.kernel;
    let rg = gorenstein_members(atlas, c, Which::RG)?;
    let cpd = finite_dimension(atlas, c, true)?;
    context_idx(ContextKind::WeakAB, atlas, &rg, &cpd, c, bounds)
}

/// `(lG(C), C-id^{<∞}, C)` for the kernel `C` of a hereditary cotorsion
/// pair with enough projectives, computed directly on the algebra.
pub fn thm412_verify(u: &Subcategory, v: &Subcategory, atlas: &Atlas, bounds: &ContextBounds) -> Result<ABContextReport, ContextError> {
    let report = cotorsion_idx(atlas, &u.indices_in(atlas)?, &v.indices_in(atlas)?, bounds)?;
    require(&report, false)?;
    let c = &report.kernel;
    let lg = gorenstein_members(atlas, c, Which::LG)?;
    let cid = finite_dimension(atlas, c, false)?;
    context_idx(ContextKind::WeakCoAB, atlas, &lg, &cid, c, bounds)
}
