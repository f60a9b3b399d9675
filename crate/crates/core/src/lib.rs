//! Finite residuated lattices and the filter theory built on them: filter
//! lattices, prime spectra, coannihilators, ω-filters, divisor filters and
//! n-normality.
//!
//! Structures are small (at most 64 elements) and every subset of the carrier
//! is a [`SubsetMask`]. All computations are exhaustive.

pub mod analysis;
pub mod coann;
pub mod error;
pub mod examples;
pub mod filters;
pub mod mask;
pub mod modelgen;
pub mod normality;
pub mod omega;
pub mod spectra;
pub mod structure;
pub mod verify;

pub use analysis::Analysis;
pub use error::{Error, Result};
pub use filters::{Filter, FilterLattice, Ideal};
pub use mask::SubsetMask;
pub use structure::{validate_structure, ElemId, OpTable, Structure, ValidationReport};
