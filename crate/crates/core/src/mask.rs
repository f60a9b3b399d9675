//! Characteristic bit vectors over a finite carrier.

use std::fmt;

use crate::structure::ElemId;

/// Largest carrier a [`SubsetMask`] can describe.
pub const MAX_CARRIER: usize = 64;

/// A subset of the carrier `{0, .., n-1}` stored as a 64-bit characteristic vector.
///
/// Bits at positions `>= n` are always clear.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    n: u8,
    bits: u64,
}

impl SubsetMask {
    pub fn empty(n: usize) -> Self {
        debug_assert!(n <= MAX_CARRIER);
        SubsetMask {
            n: n as u8,
            bits: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        SubsetMask::from_bits(n, u64::MAX)
    }

    /// Builds a mask from raw bits; bits beyond `n` are discarded.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        debug_assert!(n <= MAX_CARRIER);
        let keep = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        SubsetMask {
            n: n as u8,
            bits: bits & keep,
        }
    }

    pub fn singleton(n: usize, x: ElemId) -> Self {
        SubsetMask::empty(n).with(x)
    }

    pub fn from_elems<I: IntoIterator<Item = ElemId>>(n: usize, elems: I) -> Self {
        elems
            .into_iter()
            .fold(SubsetMask::empty(n), |m, x| m.with(x))
    }

    #[inline]
    pub fn carrier_size(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn contains(&self, x: ElemId) -> bool {
        self.bits >> x.index() & 1 == 1
    }

    #[inline]
    pub fn with(mut self, x: ElemId) -> Self {
        debug_assert!(x.index() < self.carrier_size());
        self.bits |= 1 << x.index();
        self
    }

    #[inline]
    pub fn without(mut self, x: ElemId) -> Self {
        self.bits &= !(1 << x.index());
        self
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        *self == SubsetMask::full(self.carrier_size())
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        SubsetMask {
            n: self.n,
            bits: self.bits | other.bits,
        }
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        SubsetMask {
            n: self.n,
            bits: self.bits & other.bits,
        }
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        SubsetMask {
            n: self.n,
            bits: self.bits & !other.bits,
        }
    }

    pub fn complement(self) -> Self {
        SubsetMask::from_bits(self.carrier_size(), !self.bits)
    }

    #[inline]
    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.bits & other.bits == 0
    }

    pub fn is_strict_subset(&self, other: &Self) -> bool {
        self.is_subset(other) && self.bits != other.bits
    }

    /// Members in ascending ElemId order.
    pub fn iter(&self) -> Elems {
        Elems { bits: self.bits }
    }

    /// Ordering used for canonical listings: ascending size, then ascending bit value.
    pub fn canonical_key(&self) -> (u32, u64) {
        (self.bits.count_ones(), self.bits)
    }

    /// All subsets of an `n`-element carrier, in ascending bit order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = SubsetMask> {
        assert!(n < 32, "subset scans are limited to small carriers");
        (0u64..1 << n).map(move |b| SubsetMask::from_bits(n, b))
    }
}

pub struct Elems {
    bits: u64,
}

impl Iterator for Elems {
    type Item = ElemId;

    fn next(&mut self) -> Option<ElemId> {
        if self.bits == 0 {
            return None;
        }
        let i = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(ElemId(i))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.bits.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elems {}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.0)).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_beyond_carrier_are_dropped() {
        let m = SubsetMask::from_bits(3, 0b1111_0101);
        assert_eq!(m.bits(), 0b101);
        assert_eq!(m.complement().bits(), 0b010);
        assert!(SubsetMask::full(3).is_full());
    }

    #[test]
    fn iterates_in_elem_order() {
        let m = SubsetMask::from_elems(6, [ElemId(4), ElemId(0), ElemId(2)]);
        let v: Vec<_> = m.iter().map(|e| e.0).collect();
        assert_eq!(v, vec![0, 2, 4]);
        assert_eq!(m.iter().len(), 3);
    }

    #[test]
    fn full_carrier_of_64() {
        let m = SubsetMask::full(64);
        assert_eq!(m.len(), 64);
        assert!(m.complement().is_empty());
    }
}
