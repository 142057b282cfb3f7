//! Weighted colimits, bar constructions and their homotopy invariance.

mod bar;
mod bk;
mod cell;
mod cofrep;
mod cube;
mod reedy;
mod wcolim;

use thiserror::Error;

use crate::chain::ChainError;
use crate::enriched::EnrichedError;
use crate::simplicial::SimplicialError;

pub use bar::{bar_compare, bar_resolution, observation_check, BarComparison, BarConstruction, BarLevel, Cofibrancy};
pub use bk::{arrow_map, bk_comparison, bk_hocolim, simplicial_replacement, ArrowString, BkHocolim, SimplicialReplacement};
pub use cell::{same_presheaf, CellAttachment, WeightCell};
pub use cofrep::{cofibrant_replacement, cofibrant_replacement_sound, CofibrantReplacement};
pub use cube::{cube_tensor, pcm_law, pushout_corner_map, CubeViolation, CubicalDiagram, PcmLawReport, PushoutCorner};
pub use reedy::{latching_map, reedy_report, LatchingMap, ReedyReport};
pub use wcolim::{same_host, weighted_colimit, yoneda_map, WeightedColimit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColimError {
    #[error("weight and diagram live over different dg-categories")]
    HostMismatch,
    #[error("the unit of {0} does not split, so levels cannot be normalized per tuple")]
    NonSplitUnit(String),
    #[error("cubes share the label {0}")]
    OverlappingLabels(String),
    #[error("malformed data: {0}")]
    Malformed(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Enriched(#[from] EnrichedError),
}
