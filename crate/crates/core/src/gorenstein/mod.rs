//! Membership in `cores C̃`, `res C̃`, `rG(C)`, `lG(C)` and `G(C)`,
//! relative dimensions, and the constructive operations built on left
//! approximations.

mod construct;
mod decide;
mod exhaustive;
mod reldim;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cert::RecheckError;
use crate::homcalc::{HomSide, HomcalcError};
use crate::rep::RepError;
use crate::subcat::SubcatError;

pub use construct::{
    horseshoe_merge, lemma39_construct, minimal_coresolution, thm310_certificates, Coresolution, FourTerm, Thm310, Witness2, Witness3,
};
pub use decide::{split_into_atlas, Decider};
pub use exhaustive::{ExhaustiveBounds, DEFAULT_DEPTH_BOUND, DEFAULT_MULT_BOUND};
pub use reldim::{relative_dimension, relative_id, relative_pd, DimTrace, RelativeDimension};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GorensteinError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Homcalc(#[from] HomcalcError),
    #[error(transparent)]
    Subcat(#[from] SubcatError),
    #[error("input rejected: {0}")]
    Rejected(String),
    #[error("constructed output failed re-verification: {0}")]
    Unverified(String),
    #[error("certificate failed: {0}")]
    Recheck(#[from] RecheckError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    Cores,
    Res,
    #[serde(rename = "rG")]
    RG,
    #[serde(rename = "lG")]
    LG,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Gfp,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Member,
    NonMember,
    Inconclusive,
}

/// Why an object was excluded. Objects are atlas indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    /// `Ext^degree ≠ 0`, detected as `Ext^1(from, into) ≠ 0` for a summand
    /// `from` of a syzygy.
    Ext { degree: usize, from: usize, into: usize },
    NotMono { object: usize },
    NotEpi { object: usize },
    /// The approximation sequence of `object` is not exact under the other
    /// Hom functor at `test`.
    NotHomExact { object: usize, test: usize, side: HomSide },
    /// A (co)kernel summand of the approximation sequence was excluded.
    Excluded { object: usize, summand: usize },
    /// Every sequence within the search bounds fails.
    Exhausted { object: usize },
}

/// The unfolded (co)resolution as summand multisets, until it repeats or
/// reaches zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleNote {
    pub prefix: Vec<Vec<usize>>,
    /// The last entry of `prefix` equals `prefix[repeats]`; `None` when the
    /// unfolding reaches zero.
    pub repeats: Option<usize>,
    /// The repeat was detected on summand sets rather than multisets.
    pub by_support: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub object: usize,
    pub status: Status,
    pub refutation: Option<Refutation>,
    /// Coresolution (`rG`, `cores`, `G`) unfolding.
    pub cycle: Option<CycleNote>,
    /// Resolution (`lG`, `res`, `G`) unfolding.
    pub cycle_left: Option<CycleNote>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    pub round: usize,
    pub object: usize,
    pub reason: Refutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub which: Which,
    pub mode: Mode,
    pub verdicts: Vec<Verdict>,
    /// Greatest-fixed-point eliminations in order (empty in exhaustive mode).
    pub trace: Vec<Elimination>,
}

impl Membership {
    pub fn members(&self) -> Vec<usize> {
        self.with_status(Status::Member)
    }

    pub fn with_status(&self, s: Status) -> Vec<usize> {
        self.verdicts.iter().filter(|v| v.status == s).map(|v| v.object).collect()
    }

    pub fn status(&self, x: usize) -> Status {
        self.verdicts[x].status
    }

    pub fn is_conclusive(&self) -> bool {
        self.verdicts.iter().all(|v| v.status != Status::Inconclusive)
    }
}
