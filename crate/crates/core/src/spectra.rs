//! Prime, maximal and minimal prime filters; join-closed sets avoiding a filter.

use crate::error::{Error, Result};
use crate::filters::{all_filters, generated_filter, Filter, FilterLattice};
use crate::mask::SubsetMask;
use crate::structure::Structure;

pub use crate::filters::is_join_closed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumReport {
    pub base: Filter,
    pub primes: Vec<Filter>,
    pub maximals: Vec<Filter>,
    /// Minimal members of the primes containing `base`.
    pub minimal_primes: Vec<Filter>,
}

/// Minimal primes over a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPrimes {
    pub primes: Vec<Filter>,
    /// The generated filter is the whole carrier, so no prime lies above it.
    pub generates_everything: bool,
}

/// `F` is proper and `x v y ∈ F` forces `x ∈ F` or `y ∈ F`.
pub fn is_prime(s: &Structure, f: &Filter) -> bool {
    f.is_proper()
        && s.elems().all(|x| {
            f.contains(x)
                || s.elems()
                    .all(|y| f.contains(y) || !f.contains(s.join(x, y)))
        })
}

/// Prime filters in canonical order.
pub fn primes(s: &Structure, lat: &FilterLattice) -> Vec<Filter> {
    lat.filters()
        .iter()
        .copied()
        .filter(|f| is_prime(s, f))
        .collect()
}

/// Maximal proper filters in canonical order.
pub fn maximals(lat: &FilterLattice) -> Vec<Filter> {
    let proper: Vec<Filter> = lat.proper().collect();
    proper
        .iter()
        .copied()
        .filter(|f| !proper.iter().any(|g| f.mask().is_strict_subset(&g.mask())))
        .collect()
}

/// Members of `fs` not strictly containing another member.
pub fn minimal_members(fs: &[Filter]) -> Vec<Filter> {
    fs.iter()
        .copied()
        .filter(|f| !fs.iter().any(|g| g.mask().is_strict_subset(&f.mask())))
        .collect()
}

/// Minimal primes among `primes` that contain `x`.
pub fn minimal_primes_containing(primes: &[Filter], x: SubsetMask) -> Vec<Filter> {
    let above: Vec<Filter> = primes
        .iter()
        .copied()
        .filter(|p| x.is_subset(&p.mask()))
        .collect();
    minimal_members(&above)
}

pub fn spectrum_with(s: &Structure, lat: &FilterLattice, base: Filter) -> SpectrumReport {
    let primes = primes(s, lat);
    let maximals = maximals(lat);
    let minimal_primes = minimal_primes_containing(&primes, base.mask());
    SpectrumReport {
        base,
        primes,
        maximals,
        minimal_primes,
    }
}

/// Spectrum with base `{1}`, so `minimal_primes` are the minimal primes of `s`.
pub fn spectrum(s: &Structure) -> SpectrumReport {
    spectrum_with(s, &all_filters(s), Filter::trivial(s))
}

pub fn minimal_primes_over(s: &Structure, x: SubsetMask) -> MinimalPrimes {
    let lat = all_filters(s);
    minimal_primes_over_with(s, &lat, x)
}

pub fn minimal_primes_over_with(
    s: &Structure,
    lat: &FilterLattice,
    x: SubsetMask,
) -> MinimalPrimes {
    let generated = generated_filter(s, x);
    if !generated.is_proper() {
        return MinimalPrimes {
            primes: Vec::new(),
            generates_everything: true,
        };
    }
    MinimalPrimes {
        primes: minimal_primes_containing(&primes(s, lat), x),
        generates_everything: false,
    }
}

fn join_closure(s: &Structure, m: SubsetMask) -> SubsetMask {
    let mut cur = m;
    loop {
        let mut next = cur;
        for x in cur.iter() {
            for y in cur.iter() {
                next = next.with(s.join(x, y));
            }
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Grows `c` to a join-closed set disjoint from `f` that is maximal under inclusion.
///
/// Elements are tried in ElemId order; an element is kept when the join closure
/// of the extended set still misses `f`. Once an element is rejected it stays
/// rejected, since the closure only grows, so the greedy result is maximal.
pub fn maximal_join_closed_avoiding(
    s: &Structure,
    f: &Filter,
    c: SubsetMask,
) -> Result<SubsetMask> {
    let mut cur = join_closure(s, c);
    if !cur.is_disjoint(&f.mask()) {
        return Err(Error::Overlap);
    }
    for x in s.elems() {
        if cur.contains(x) {
            continue;
        }
        let grown = join_closure(s, cur.with(x));
        if grown.is_disjoint(&f.mask()) {
            cur = grown;
        }
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn fl(s: &Structure, names: &[&str]) -> Filter {
        Filter::try_new(s, s.mask_of_names(names).unwrap()).unwrap()
    }

    fn names(s: &Structure, fs: &[Filter]) -> Vec<String> {
        fs.iter().map(|f| s.format_set(f.mask())).collect()
    }

    #[test]
    fn primality_in_a6() {
        let s = examples::a6();
        assert!(is_prime(&s, &fl(&s, &["a", "b", "d", "1"])));
        assert!(!is_prime(&s, &fl(&s, &["d", "1"])));
        assert!(!is_prime(&s, &Filter::full(&s)));
    }

    #[test]
    fn spectrum_of_a6() {
        let s = examples::a6();
        let r = spectrum(&s);
        assert_eq!(names(&s, &r.primes), vec!["{1}", "{c,d,1}", "{a,b,d,1}"]);
        assert_eq!(names(&s, &r.maximals), vec!["{c,d,1}", "{a,b,d,1}"]);
        assert_eq!(names(&s, &r.minimal_primes), vec!["{1}"]);
    }

    #[test]
    fn spectrum_of_chains() {
        let s = examples::chain2();
        let r = spectrum(&s);
        assert_eq!(names(&s, &r.primes), vec!["{1}"]);
        assert_eq!(r.maximals, r.primes);
        assert_eq!(r.minimal_primes, r.primes);
        let s = examples::chain3_godel();
        let r = spectrum(&s);
        assert_eq!(names(&s, &r.primes), vec!["{1}", "{m,1}"]);
        assert_eq!(names(&s, &r.minimal_primes), vec!["{1}"]);
    }

    #[test]
    fn minimal_primes_in_a6() {
        let s = examples::a6();
        let r = minimal_primes_over(&s, s.mask_of_names(&["d", "1"]).unwrap());
        assert_eq!(names(&s, &r.primes), vec!["{c,d,1}", "{a,b,d,1}"]);
        let r = minimal_primes_over(&s, s.mask_of_names(&["1"]).unwrap());
        assert_eq!(names(&s, &r.primes), vec!["{1}"]);
        let r = minimal_primes_over(&s, s.mask_of_names(&["0"]).unwrap());
        assert!(r.primes.is_empty());
        assert!(r.generates_everything);
    }

    #[test]
    fn join_closed_sets() {
        let s = examples::a6();
        assert!(is_join_closed(&s, s.mask_of_names(&["0", "c"]).unwrap()));
        assert!(!is_join_closed(&s, s.mask_of_names(&["b", "c"]).unwrap()));
        for x in s.elems() {
            assert!(is_join_closed(&s, s.mask([x])));
        }
    }

    #[test]
    fn maximal_avoiding_sets() {
        let s = examples::a6();
        let m = |v: &[&str]| s.mask_of_names(v).unwrap();
        let f4 = fl(&s, &["c", "d", "1"]);
        assert_eq!(
            maximal_join_closed_avoiding(&s, &f4, m(&["0"])).unwrap(),
            m(&["0", "a", "b"])
        );
        let f1 = fl(&s, &["1"]);
        assert_eq!(
            maximal_join_closed_avoiding(&s, &f1, m(&["0", "c"])).unwrap(),
            m(&["0", "a", "b", "c", "d"])
        );
        assert_eq!(
            maximal_join_closed_avoiding(&s, &Filter::full(&s), m(&["a"])),
            Err(Error::Overlap)
        );
    }

    #[test]
    fn greedy_result_is_maximal_by_exhaustive_scan() {
        let s = examples::a6();
        let lat = all_filters(&s);
        for f in lat.proper() {
            for c in SubsetMask::all_subsets(6) {
                if !is_join_closed(&s, c) || !c.is_disjoint(&f.mask()) {
                    continue;
                }
                let got = maximal_join_closed_avoiding(&s, &f, c).unwrap();
                assert!(c.is_subset(&got));
                // no join-closed strict superset avoids f
                let beaten = SubsetMask::all_subsets(6).any(|d| {
                    got.is_strict_subset(&d) && is_join_closed(&s, d) && d.is_disjoint(&f.mask())
                });
                assert!(!beaten);
            }
        }
    }
}
