use serde::{Deserialize, Serialize};

use crate::homcalc::Atlas;
use crate::rep::Rep;
use crate::subcat::{minimal_approximation, Side, Subcategory};

use super::decide::split_into_atlas;
use super::GorensteinError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "value", content = "n", rename_all = "snake_case")]
pub enum RelativeDimension {
    Finite(usize),
    Infinite,
    Inconclusive,
}

impl RelativeDimension {
    pub fn at_most(self, n: usize) -> Option<bool> {
        match self {
            RelativeDimension::Finite(k) => Some(k <= n),
            RelativeDimension::Infinite => Some(false),
            RelativeDimension::Inconclusive => None,
        }
    }
}

/// The iterated minimal approximations behind a dimension, as atlas index
/// sets. Since approximations are additive, only the set of summands of
/// each (co)syzygy matters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimTrace {
    /// Summands of the object and of each successive (co)syzygy.
    pub supports: Vec<Vec<usize>>,
    /// Summands of the approximating term at each step.
    pub terms: Vec<Vec<usize>>,
    /// Step whose approximation was not epi (resp. mono).
    pub failed_at: Option<usize>,
    /// The last support repeats this earlier one.
    pub repeats: Option<usize>,
    pub note: Option<String>,
}

fn support(atlas: &Atlas, m: &Rep) -> Result<Vec<usize>, GorensteinError> {
    let (mut idx, _) = split_into_atlas(atlas, m)?;
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}

/// `X`-projective dimension (`side` Right) or `X`-injective dimension
/// (`side` Left) by iterated minimal approximations.
///
/// A failing first step is a proof of infinity. Later steps are exact for
/// classes where every `X`-resolution can be reduced to the minimal one,
/// which holds for the resolving classes used here.
pub fn relative_dimension(
    m: &Rep,
    x: &Subcategory,
    atlas: &Atlas,
    side: Side,
) -> Result<(RelativeDimension, DimTrace), GorensteinError> {
    let mut trace = DimTrace::default();
    let xidx = x.indices_in(atlas)?;
    let mut cur = match support(atlas, m) {
        Ok(s) => s,
        Err(e) => {
            trace.note = Some(e.to_string());
            return Ok((RelativeDimension::Inconclusive, trace));
        }
    };
    for step in 0.. {
        trace.supports.push(cur.clone());
        if cur.iter().all(|i| xidx.contains(i)) {
            return Ok((RelativeDimension::Finite(step), trace));
        }
        if let Some(j) = trace.supports[..step].iter().position(|s| *s == cur) {
            trace.repeats = Some(j);
            return Ok((RelativeDimension::Infinite, trace));
        }
        let parts: Vec<Rep> = cur.iter().map(|&i| atlas.rep(i).clone()).collect();
        let obj = Rep::direct_sum(atlas.algebra(), &parts).object;
        let ap = minimal_approximation(&obj, x, side)?;
        let (ok, next) = match side {
            Side::Right => (ap.epi, &ap.kernel.object),
            Side::Left => (ap.mono, &ap.cokernel.object),
        };
        trace.terms.push(support(atlas, ap.object())?);
        if !ok {
            trace.failed_at = Some(step);
            return Ok((RelativeDimension::Infinite, trace));
        }
        cur = support(atlas, next)?;
    }
    unreachable!()
}

pub fn relative_pd(m: &Rep, x: &Subcategory, atlas: &Atlas) -> Result<(RelativeDimension, DimTrace), GorensteinError> {
    relative_dimension(m, x, atlas, Side::Right)
}

pub fn relative_id(m: &Rep, x: &Subcategory, atlas: &Atlas) -> Result<(RelativeDimension, DimTrace), GorensteinError> {
    relative_dimension(m, x, atlas, Side::Left)
}
