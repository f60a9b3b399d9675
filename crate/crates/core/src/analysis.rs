//! Per-structure data shared by the spectral, ω and normality computations.

use crate::filters::{all_filters, all_ideals, generated_filter, Filter, FilterLattice, Ideal};
use crate::mask::SubsetMask;
use crate::spectra::{minimal_primes_containing, primes};
use crate::structure::Structure;

/// A structure together with its filter lattice, prime spectrum and ideals.
#[derive(Clone, Debug)]
pub struct Analysis<'a> {
    pub s: &'a Structure,
    pub lat: FilterLattice,
    pub primes: Vec<Filter>,
    pub ideals: Vec<Ideal>,
}

impl<'a> Analysis<'a> {
    pub fn new(s: &'a Structure) -> Self {
        let lat = all_filters(s);
        let primes = primes(s, &lat);
        let ideals = all_ideals(s);
        Analysis {
            s,
            lat,
            primes,
            ideals,
        }
    }

    /// Primes containing `f`.
    pub fn primes_above(&self, f: &Filter) -> Vec<Filter> {
        self.primes
            .iter()
            .copied()
            .filter(|p| f.is_subset(p))
            .collect()
    }

    /// `F`-minimal primes.
    pub fn minimal_primes(&self, f: &Filter) -> Vec<Filter> {
        minimal_primes_containing(&self.primes, f.mask())
    }

    /// Join in the filter lattice of an arbitrary family.
    pub fn join_masks<I: IntoIterator<Item = SubsetMask>>(&self, it: I) -> Filter {
        let u = it.into_iter().fold(self.s.empty(), |acc, m| acc.union(m));
        generated_filter(self.s, u)
    }

    pub fn is_full(&self, f: &Filter) -> bool {
        !f.is_proper()
    }
}
