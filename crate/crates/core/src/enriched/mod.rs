//! Small categories, simplicial sets, dg-categories and their modules.

pub mod category;
pub mod dg;
pub mod module;
pub mod sset;

use thiserror::Error;

use crate::chain::ChainError;

pub use category::{Arrow, ArrowData, CategoryViolation, FiniteCategory};
pub use dg::{
    ch_full_subcategory, free_dg_category, Composition, DgCategory, DgViolation, FlatnessReport, InternalHom,
    ObjectFlatness,
};
pub use module::{Action, Diagram, ModuleViolation, NaturalityViolation, Presheaf, PresheafMap};
pub use sset::{nerve, zk_chains, FaceViolation, Nerve, NerveSimplex, SimplicialSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnrichedError {
    #[error("malformed data: {0}")]
    Malformed(String),
    #[error("category has a nonidentity loop")]
    Cyclic,
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("modules live over different dg-categories")]
    HostMismatch,
    #[error(transparent)]
    Chain(#[from] ChainError),
}
