//! Generators, topology enumeration, documents and sweeps.

pub mod doc;
mod enumerate;
mod generate;
pub mod sweep;

pub use enumerate::{enumerate_by_closure_filter, enumerate_topologies, MAX_ENUMERATION_POINTS};
pub use generate::{generate, GenSpec, MAX_GENERATED_POINTS};
