//! Exact, exhaustive verification of connected Hopf monoids in species.
//!
//! Species are given by explicit bases (set species). Products and coproducts
//! come from multiplicative and comultiplicative systems and are evaluated with
//! exact rational arithmetic on ground sets {1..n} for small n.

pub mod catalog;
pub mod classify;
pub mod controls;
pub mod element;
pub mod error;
pub mod ground;
pub mod hopf;
pub mod linalg;
pub mod order;
pub mod report;
pub mod species;
pub mod vector;

pub use catalog::{parse_species, CatalogEntry};
pub use element::Element;
pub use error::SpeciesError;
pub use ground::{Bijection, GroundSet};
pub use report::{Verdict, Witness};
pub use species::{ComultSystem, MultSystem, SetSpecies, Species};
pub use vector::{TensorVector, Vector, Q};
