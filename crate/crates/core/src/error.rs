use thiserror::Error;

use crate::ground::GroundSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpeciesError {
    #[error("label {0} appears twice")]
    DuplicateLabel(u32),
    #[error("not a bijection: {0}")]
    NotABijection(String),
    #[error("cannot compose: {0} does not match {1}")]
    NotComposable(GroundSet, GroundSet),
    #[error("ground sets {0} and {1} overlap")]
    Overlap(GroundSet, GroundSet),
    #[error("parts {0} do not match the tensor parts")]
    PartMismatch(String),
    #[error("unknown species `{spec}`; expected one of: {valid}")]
    UnknownSpecies { spec: String, valid: String },
    #[error("species {0} has elements over the empty set")]
    NotPositive(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}
