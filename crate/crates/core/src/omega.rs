//! The maps `ω_F`, dense elements, ω-filters, divisor filters and `σ`.

use std::collections::BTreeMap;

use crate::coann::{annulet, coannihilator, coannulet};
use crate::error::{Error, Result};
use crate::filters::{
    all_ideals, generated_filter, generated_ideal, ideal_join, is_filter, is_ideal, Filter, Ideal,
};
use crate::mask::SubsetMask;
use crate::structure::Structure;

/// `ω_F(X) = { a | x v a ∈ F for some x ∈ X }`, the union of the coannulets `(F : x)`, `x ∈ X`.
///
/// Undefined on the empty set.
pub fn omega(s: &Structure, f: &Filter, x: SubsetMask) -> Result<SubsetMask> {
    if x.is_empty() {
        return Err(Error::EmptyArgument);
    }
    Ok(x.iter()
        .fold(s.empty(), |acc, y| acc.union(coannulet(s, f, y).mask())))
}

/// The elements `x` with `(F : x) = F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DenseSet {
    pub base: Filter,
    pub mask: SubsetMask,
}

pub fn dense_set(s: &Structure, f: &Filter) -> DenseSet {
    let mask = s
        .elems()
        .filter(|&x| coannulet(s, f, x) == *f)
        .fold(s.empty(), |m, x| m.with(x));
    DenseSet { base: *f, mask }
}

/// All ω_F-filters with, for each, the largest ideal mapping onto it.
#[derive(Clone, Debug)]
pub struct OmegaFamily {
    pub base: Filter,
    /// Canonically sorted.
    pub members: Vec<Filter>,
    pub witness_ideals: Vec<Ideal>,
    /// For every member, the union of the ideals mapping onto it was itself an ideal.
    pub witnesses_directed: bool,
}

pub fn omega_family(s: &Structure, f: &Filter) -> OmegaFamily {
    omega_family_from_ideals(s, f, &all_ideals(s))
}

pub fn omega_family_from_ideals(s: &Structure, f: &Filter, ideals: &[Ideal]) -> OmegaFamily {
    let mut groups: BTreeMap<(u32, u64), SubsetMask> = BTreeMap::new();
    for i in ideals {
        // ideals are nonempty
        let w = omega(s, f, i.mask()).expect("ideal is nonempty");
        if !is_filter(s, w) {
            continue;
        }
        let e = groups.entry(w.canonical_key()).or_insert_with(|| s.empty());
        *e = e.union(i.mask());
    }
    let mut members = Vec::with_capacity(groups.len());
    let mut witness_ideals = Vec::with_capacity(groups.len());
    let mut directed = true;
    for (&(_, bits), &union) in &groups {
        members.push(Filter::new_unchecked(SubsetMask::from_bits(s.size(), bits)));
        directed &= is_ideal(s, union);
        witness_ideals.push(generated_ideal(s, union));
    }
    OmegaFamily {
        base: *f,
        members,
        witness_ideals,
        witnesses_directed: directed,
    }
}

impl OmegaFamily {
    pub fn index_of(&self, g: &Filter) -> Option<usize> {
        self.members.iter().position(|m| m == g)
    }

    pub fn contains(&self, g: &Filter) -> bool {
        self.index_of(g).is_some()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Least member containing both, by index. `None` if the members above both
    /// have no least element (which would contradict closure under intersection).
    pub fn join_idx(&self, i: usize, j: usize) -> Option<usize> {
        let both = self.members[i].mask().union(self.members[j].mask());
        let upper: Vec<usize> = (0..self.members.len())
            .filter(|&k| both.is_subset(&self.members[k].mask()))
            .collect();
        upper.iter().copied().find(|&k| {
            upper
                .iter()
                .all(|&l| self.members[k].is_subset(&self.members[l]))
        })
    }

    pub fn omega_join(&self, g: &Filter, h: &Filter) -> Result<Filter> {
        let i = self.index_of(g).ok_or(Error::UnknownMember)?;
        let j = self.index_of(h).ok_or(Error::UnknownMember)?;
        self.join_idx(i, j)
            .map(|k| self.members[k])
            .ok_or(Error::UnknownMember)
    }

    /// `ω_F(I_G ⋎ I_H)` for the stored witness ideals.
    pub fn join_by_witnesses(&self, s: &Structure, i: usize, j: usize) -> SubsetMask {
        let ideal = ideal_join(s, &self.witness_ideals[i], &self.witness_ideals[j]);
        omega(s, &self.base, ideal.mask()).expect("ideal is nonempty")
    }
}

pub fn omega_join(fam: &OmegaFamily, g: &Filter, h: &Filter) -> Result<Filter> {
    fam.omega_join(g, h)
}

/// `D_F(H) = ω_F(H^c)`; needs a proper `H`.
pub fn divisor(s: &Structure, f: &Filter, h: &Filter) -> Result<SubsetMask> {
    if !h.is_proper() {
        return Err(Error::ImproperFilter);
    }
    omega(s, f, h.mask().complement())
}

/// `σ(F) = { a | a^⊥ ⋁ F = A }`.
pub fn sigma(s: &Structure, f: &Filter) -> Filter {
    let m = s
        .elems()
        .filter(|&a| !generated_filter(s, annulet(s, a).mask().union(f.mask())).is_proper())
        .fold(s.empty(), |m, a| m.with(a));
    Filter::new_unchecked(m)
}

/// `{ a | a^⊥⊥ ⋁ F = A }`, the ideal whose image under `ω` is `σ(F)`.
pub fn sigma_ideal(s: &Structure, f: &Filter) -> SubsetMask {
    let one = Filter::trivial(s);
    s.elems()
        .filter(|&a| {
            let aa = coannihilator(s, &one, annulet(s, a).mask());
            !generated_filter(s, aa.mask().union(f.mask())).is_proper()
        })
        .fold(s.empty(), |m, a| m.with(a))
}

/// `{ x | (F : x) ⊆ H }`. Computed only as a diagnostic; whether it is always an
/// ideal is not assumed anywhere.
pub fn canonical_witness_set(s: &Structure, f: &Filter, h: &Filter) -> SubsetMask {
    s.elems()
        .filter(|&x| coannulet(s, f, x).is_subset(h))
        .fold(s.empty(), |m, x| m.with(x))
}
