//! Exact homotopy weighted colimits of integer chain complexes.

pub mod chain;
pub mod colim;
pub mod corpus;
pub mod dwyerkan;
pub mod enriched;
pub mod simplicial;
