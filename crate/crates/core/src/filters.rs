//! Filters and lattice ideals: membership, generation, enumeration and the filter lattice.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::mask::SubsetMask;
use crate::structure::{ElemId, Structure};

/// A nonempty, upward closed subset closed under `*`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Filter(SubsetMask);

/// A nonempty, downward closed subset closed under join (an ideal of the lattice reduct).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Ideal(SubsetMask);

impl Filter {
    /// Wraps a mask without checking the filter axioms. Callers vouch for them.
    pub fn new_unchecked(mask: SubsetMask) -> Self {
        Filter(mask)
    }

    /// Wraps `mask` if it is a filter of `s`.
    pub fn try_new(s: &Structure, mask: SubsetMask) -> Option<Self> {
        is_filter(s, mask).then_some(Filter(mask))
    }

    pub fn trivial(s: &Structure) -> Self {
        Filter(s.mask([s.top()]))
    }

    pub fn full(s: &Structure) -> Self {
        Filter(s.full())
    }

    #[inline]
    pub fn mask(&self) -> SubsetMask {
        self.0
    }

    #[inline]
    pub fn contains(&self, x: ElemId) -> bool {
        self.0.contains(x)
    }

    #[inline]
    pub fn is_proper(&self) -> bool {
        !self.0.is_full()
    }

    #[inline]
    pub fn is_subset(&self, other: &Filter) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Intersection of two filters is again a filter.
    pub fn meet(&self, other: &Filter) -> Filter {
        Filter(self.0.intersection(other.0))
    }
}

impl Ideal {
    pub fn new_unchecked(mask: SubsetMask) -> Self {
        Ideal(mask)
    }

    pub fn try_new(s: &Structure, mask: SubsetMask) -> Option<Self> {
        is_ideal(s, mask).then_some(Ideal(mask))
    }

    #[inline]
    pub fn mask(&self) -> SubsetMask {
        self.0
    }
}

pub fn is_upward_closed(s: &Structure, m: SubsetMask) -> bool {
    m.iter().all(|x| s.up(x).is_subset(&m))
}

pub fn is_downward_closed(s: &Structure, m: SubsetMask) -> bool {
    m.iter().all(|x| s.down(x).is_subset(&m))
}

pub fn is_times_closed(s: &Structure, m: SubsetMask) -> bool {
    m.iter()
        .all(|x| m.iter().all(|y| m.contains(s.times(x, y))))
}

/// Nonempty and closed under join.
pub fn is_join_closed(s: &Structure, m: SubsetMask) -> bool {
    !m.is_empty() && m.iter().all(|x| m.iter().all(|y| m.contains(s.join(x, y))))
}

pub fn is_filter(s: &Structure, m: SubsetMask) -> bool {
    !m.is_empty() && is_upward_closed(s, m) && is_times_closed(s, m)
}

pub fn is_ideal(s: &Structure, m: SubsetMask) -> bool {
    is_join_closed(s, m) && is_downward_closed(s, m)
}

pub fn upward_closure(s: &Structure, m: SubsetMask) -> SubsetMask {
    m.iter().fold(m, |acc, x| acc.union(s.up(x)))
}

pub fn downward_closure(s: &Structure, m: SubsetMask) -> SubsetMask {
    m.iter().fold(m, |acc, x| acc.union(s.down(x)))
}

fn binary_closure(m: SubsetMask, op: impl Fn(ElemId, ElemId) -> ElemId) -> SubsetMask {
    let mut cur = m;
    loop {
        let mut next = cur;
        for x in cur.iter() {
            for y in cur.iter() {
                next = next.with(op(x, y));
            }
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Smallest filter containing `x`; the trivial filter `{1}` for the empty set.
pub fn generated_filter(s: &Structure, x: SubsetMask) -> Filter {
    if x.is_empty() {
        return Filter::trivial(s);
    }
    let closed = binary_closure(x, |a, b| s.times(a, b));
    Filter(upward_closure(s, closed))
}

/// The filter generated by `f` together with the element `x`.
pub fn filter_with(s: &Structure, f: &Filter, x: ElemId) -> Filter {
    generated_filter(s, f.mask().with(x))
}

pub fn principal_filter(s: &Structure, x: ElemId) -> Filter {
    generated_filter(s, s.mask([x]))
}

/// Filter-lattice join of an arbitrary family; `{1}` for the empty family.
pub fn join_filters<'a, I: IntoIterator<Item = &'a Filter>>(s: &Structure, fs: I) -> Filter {
    let u = fs.into_iter().fold(s.empty(), |acc, f| acc.union(f.mask()));
    generated_filter(s, u)
}

/// Smallest ideal containing `x`; `{0}` for the empty set.
pub fn generated_ideal(s: &Structure, x: SubsetMask) -> Ideal {
    if x.is_empty() {
        return Ideal(s.mask([s.bot()]));
    }
    let closed = binary_closure(x, |a, b| s.join(a, b));
    Ideal(downward_closure(s, closed))
}

pub fn principal_ideal(s: &Structure, x: ElemId) -> Ideal {
    Ideal(s.down(x))
}

/// Join of two ideals in the ideal lattice.
pub fn ideal_join(s: &Structure, i: &Ideal, j: &Ideal) -> Ideal {
    generated_ideal(s, i.mask().union(j.mask()))
}

/// Elements sorted so that every element comes after all elements strictly above it.
fn top_down_order(s: &Structure) -> Vec<ElemId> {
    let mut v: Vec<ElemId> = s.elems().collect();
    v.sort_by_key(|&x| s.up(x).len());
    v
}

/// Every nonempty upward closed subset, by include/exclude search in top-down order.
fn upsets(s: &Structure) -> Vec<SubsetMask> {
    fn go(s: &Structure, order: &[ElemId], i: usize, cur: SubsetMask, out: &mut Vec<SubsetMask>) {
        if i == order.len() {
            if !cur.is_empty() {
                out.push(cur);
            }
            return;
        }
        let x = order[i];
        go(s, order, i + 1, cur, out);
        if s.up(x).without(x).is_subset(&cur) {
            go(s, order, i + 1, cur.with(x), out);
        }
    }
    let order = top_down_order(s);
    let mut out = Vec::new();
    go(s, &order, 0, s.empty(), &mut out);
    out
}

fn downsets(s: &Structure) -> Vec<SubsetMask> {
    fn go(s: &Structure, order: &[ElemId], i: usize, cur: SubsetMask, out: &mut Vec<SubsetMask>) {
        if i == order.len() {
            if !cur.is_empty() {
                out.push(cur);
            }
            return;
        }
        let x = order[i];
        go(s, order, i + 1, cur, out);
        if s.down(x).without(x).is_subset(&cur) {
            go(s, order, i + 1, cur.with(x), out);
        }
    }
    let mut order: Vec<ElemId> = s.elems().collect();
    order.sort_by_key(|&x| s.down(x).len());
    let mut out = Vec::new();
    go(s, &order, 0, s.empty(), &mut out);
    out
}

fn sort_canonical(v: &mut [SubsetMask]) {
    v.sort_by_key(|m| m.canonical_key());
}

/// Every filter of `s` in canonical order (ascending size, then bit value).
pub fn filter_list(s: &Structure) -> Vec<Filter> {
    let mut v: Vec<SubsetMask> = upsets(s)
        .into_iter()
        .filter(|&m| is_times_closed(s, m))
        .collect();
    sort_canonical(&mut v);
    v.into_iter().map(Filter).collect()
}

/// Every ideal of the lattice reduct in canonical order.
pub fn all_ideals(s: &Structure) -> Vec<Ideal> {
    let mut v: Vec<SubsetMask> = downsets(s)
        .into_iter()
        .filter(|&m| is_join_closed(s, m))
        .collect();
    sort_canonical(&mut v);
    v.into_iter().map(Ideal).collect()
}

/// The complete lattice of filters with precomputed join and meet tables.
#[derive(Clone, Debug)]
pub struct FilterLattice {
    filters: Vec<Filter>,
    index: HashMap<u64, usize>,
    leq: Vec<Vec<bool>>,
    join_table: Vec<Vec<usize>>,
    meet_table: Vec<Vec<usize>>,
}

pub fn all_filters(s: &Structure) -> FilterLattice {
    let filters = filter_list(s);
    let index: HashMap<u64, usize> = filters
        .iter()
        .enumerate()
        .map(|(i, f)| (f.mask().bits(), i))
        .collect();
    let k = filters.len();
    let mut leq = vec![vec![false; k]; k];
    let mut join_table = vec![vec![0; k]; k];
    let mut meet_table = vec![vec![0; k]; k];
    for i in 0..k {
        for j in 0..k {
            leq[i][j] = filters[i].is_subset(&filters[j]);
            if j < i {
                join_table[i][j] = join_table[j][i];
                meet_table[i][j] = meet_table[j][i];
                continue;
            }
            let meet = filters[i].mask().intersection(filters[j].mask());
            let join = generated_filter(s, filters[i].mask().union(filters[j].mask()));
            meet_table[i][j] = index[&meet.bits()];
            join_table[i][j] = index[&join.mask().bits()];
        }
    }
    FilterLattice {
        filters,
        index,
        leq,
        join_table,
        meet_table,
    }
}

impl FilterLattice {
    pub fn len(&self) -> usize {
        self.filters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }

    pub fn filters(&self) -> &[Filter] {
        &self.filters
    }

    pub fn get(&self, i: usize) -> Filter {
        self.filters[i]
    }

    pub fn index_of(&self, f: &Filter) -> Option<usize> {
        self.index.get(&f.mask().bits()).copied()
    }

    pub fn index_of_mask(&self, m: SubsetMask) -> Option<usize> {
        self.index.get(&m.bits()).copied()
    }

    pub fn contains_mask(&self, m: SubsetMask) -> bool {
        self.index.contains_key(&m.bits())
    }

    /// Containment `filters[i] ⊆ filters[j]`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join_table[i][j]
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet_table[i][j]
    }

    /// Index of `{1}`, always the first filter.
    pub fn bottom(&self) -> usize {
        0
    }

    /// Index of the whole carrier, always the last filter.
    pub fn top(&self) -> usize {
        self.filters.len() - 1
    }

    pub fn filter_join(&self, f: &Filter, g: &Filter) -> Result<Filter> {
        let i = self.index_of(f).ok_or(Error::UnknownFilter)?;
        let j = self.index_of(g).ok_or(Error::UnknownFilter)?;
        Ok(self.filters[self.join(i, j)])
    }

    pub fn filter_meet(&self, f: &Filter, g: &Filter) -> Result<Filter> {
        let i = self.index_of(f).ok_or(Error::UnknownFilter)?;
        let j = self.index_of(g).ok_or(Error::UnknownFilter)?;
        Ok(self.filters[self.meet(i, j)])
    }

    /// Join of every filter in a family of indices; `{1}` for the empty family.
    pub fn join_all<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter()
            .fold(self.bottom(), |acc, i| self.join(acc, i))
    }

    pub fn proper(&self) -> impl Iterator<Item = Filter> + '_ {
        self.filters.iter().copied().filter(|f| f.is_proper())
    }
}

pub fn filter_join(lat: &FilterLattice, f: &Filter, g: &Filter) -> Result<Filter> {
    lat.filter_join(f, g)
}

pub fn filter_meet(lat: &FilterLattice, f: &Filter, g: &Filter) -> Result<Filter> {
    lat.filter_meet(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn set(s: &Structure, names: &[&str]) -> SubsetMask {
        s.mask_of_names(names).unwrap()
    }

    /// Brute force: every subset tested against the filter definition.
    fn filters_by_subset_scan(s: &Structure) -> Vec<SubsetMask> {
        let mut v: Vec<SubsetMask> = SubsetMask::all_subsets(s.size())
            .filter(|&m| {
                !m.is_empty()
                    && m.iter().all(|x| {
                        m.iter().all(|y| m.contains(s.times(x, y)))
                            && s.elems().all(|y| !s.leq(x, y) || m.contains(y))
                    })
            })
            .collect();
        v.sort_by_key(|m| m.canonical_key());
        v
    }

    #[test]
    fn membership_in_a6() {
        let s = examples::a6();
        assert!(is_filter(&s, set(&s, &["c", "d", "1"])));
        assert!(is_filter(&s, set(&s, &["d", "1"])));
        assert!(is_filter(&s, set(&s, &["1"])));
        // b * b = a is missing
        assert!(!is_filter(&s, set(&s, &["b", "d", "1"])));
        assert!(!is_filter(&s, s.empty()));
    }

    #[test]
    fn a6_has_the_five_listed_filters() {
        let s = examples::a6();
        let lat = all_filters(&s);
        let got: Vec<String> = lat
            .filters()
            .iter()
            .map(|f| s.format_set(f.mask()))
            .collect();
        assert_eq!(
            got,
            vec!["{1}", "{d,1}", "{c,d,1}", "{a,b,d,1}", "{0,a,b,c,d,1}"]
        );
    }

    #[test]
    fn small_chains() {
        let s = examples::chain2();
        assert_eq!(all_filters(&s).len(), 2);
        let s = examples::chain3_godel();
        let got: Vec<String> = all_filters(&s)
            .filters()
            .iter()
            .map(|f| s.format_set(f.mask()))
            .collect();
        assert_eq!(got, vec!["{1}", "{m,1}", "{0,m,1}"]);
    }

    #[test]
    fn enumeration_matches_subset_scan() {
        for s in [
            examples::a6(),
            examples::chain2(),
            examples::chain3_godel(),
            examples::chain3_luk(),
        ] {
            let lat: Vec<SubsetMask> = all_filters(&s).filters().iter().map(|f| f.mask()).collect();
            assert_eq!(lat, filters_by_subset_scan(&s));
        }
    }

    #[test]
    fn generation() {
        let s = examples::a6();
        assert_eq!(
            generated_filter(&s, set(&s, &["c"])).mask(),
            set(&s, &["c", "d", "1"])
        );
        assert_eq!(
            generated_filter(&s, set(&s, &["1"])).mask(),
            set(&s, &["1"])
        );
        assert!(generated_filter(&s, set(&s, &["0"])).mask().is_full());
        assert_eq!(generated_filter(&s, s.empty()), Filter::trivial(&s));
    }

    #[test]
    fn joins_and_meets() {
        let s = examples::a6();
        let lat = all_filters(&s);
        let f3 = Filter::try_new(&s, set(&s, &["a", "b", "d", "1"])).unwrap();
        let f4 = Filter::try_new(&s, set(&s, &["c", "d", "1"])).unwrap();
        assert!(lat.filter_join(&f3, &f4).unwrap().mask().is_full());
        assert_eq!(
            lat.filter_meet(&f3, &f4).unwrap().mask(),
            set(&s, &["d", "1"])
        );
        assert_eq!(lat.filter_join(&f3, &f3).unwrap(), f3);
        let stray = Filter::new_unchecked(set(&s, &["b", "d", "1"]));
        assert_eq!(lat.filter_join(&f3, &stray), Err(Error::UnknownFilter));
    }

    #[test]
    fn ideals() {
        let s = examples::a6();
        assert_eq!(
            generated_ideal(&s, set(&s, &["b"])).mask(),
            set(&s, &["0", "a", "b"])
        );
        assert!(generated_ideal(&s, set(&s, &["1"])).mask().is_full());
        assert_eq!(
            generated_ideal(&s, set(&s, &["a", "c"])).mask(),
            set(&s, &["0", "a", "b", "c", "d"])
        );
        assert_eq!(generated_ideal(&s, s.empty()).mask(), set(&s, &["0"]));
        // ideals of a6 are exactly the principal ones (finite lattice)
        let ideals = all_ideals(&s);
        assert_eq!(ideals.len(), 6);
        for x in s.elems() {
            assert!(ideals.contains(&principal_ideal(&s, x)));
        }
    }

    #[test]
    fn ideal_enumeration_matches_subset_scan() {
        let s = examples::a6();
        let mut brute: Vec<SubsetMask> = SubsetMask::all_subsets(s.size())
            .filter(|&m| is_ideal(&s, m))
            .collect();
        brute.sort_by_key(|m| m.canonical_key());
        let got: Vec<SubsetMask> = all_ideals(&s).iter().map(|i| i.mask()).collect();
        assert_eq!(got, brute);
    }
}
