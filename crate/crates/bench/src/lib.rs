//! Shared inputs for the benchmarks.

use reslat::modelgen::{enumerate_residuated, SearchSpec};
use reslat::Structure;

/// Every residuated lattice of the given size, up to isomorphism.
pub fn census(size: usize) -> Vec<Structure> {
    enumerate_residuated(&SearchSpec::new(size))
        .expect("size within range")
        .into_iter()
        .map(|r| r.structure)
        .collect()
}
