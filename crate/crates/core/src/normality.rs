//! n-prime filters, n-normality and the equivalent characterizations of both.
//!
//! Each characterization is evaluated condition by condition, independently of
//! the others, and reported as an [`EquivalenceVerdict`]. A disagreement is a
//! finding, not an error.

use crate::analysis::Analysis;
use crate::coann::{annulet, coannulet};
use crate::error::{Error, Result};
use crate::filters::{is_filter, Filter};
use crate::mask::SubsetMask;
use crate::omega::{divisor, omega_family, sigma};
use crate::spectra::is_prime;
use crate::structure::{ElemId, Structure};

/// Outcome of evaluating a family of conditions that should be equivalent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceVerdict {
    pub id: &'static str,
    pub conditions: Vec<(String, bool)>,
    pub agree: bool,
    /// Present when the conditions disagree.
    pub witness: Option<String>,
    /// Extra readings reported alongside, not part of the agreement check.
    pub diagnostics: Vec<(String, bool)>,
}

impl EquivalenceVerdict {
    fn new(id: &'static str, context: String, conditions: Vec<(String, bool)>) -> Self {
        let agree = conditions.windows(2).all(|w| w[0].1 == w[1].1);
        let witness = (!agree).then(|| {
            let vals: Vec<String> = conditions.iter().map(|(l, v)| format!("{l}={v}")).collect();
            format!("{context}: {}", vals.join(" "))
        });
        EquivalenceVerdict {
            id,
            conditions,
            agree,
            witness,
            diagnostics: Vec::new(),
        }
    }

    pub fn value(&self, label: &str) -> Option<bool> {
        self.conditions
            .iter()
            .find(|(l, _)| l == label)
            .map(|&(_, v)| v)
    }
}

fn label(i: usize) -> String {
    format!("({i})")
}

/// First `k`-clique (as ascending indices) of the graph on `0..len`, if any.
fn find_clique(len: usize, k: usize, adj: &dyn Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    fn go(
        len: usize,
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        adj: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if cur.len() == k {
            return true;
        }
        for v in start..len {
            if len - v < k - cur.len() {
                break;
            }
            if cur.iter().all(|&u| adj(u, v)) {
                cur.push(v);
                if go(len, k, v + 1, cur, adj) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    let mut cur = Vec::with_capacity(k);
    go(len, k, 0, &mut cur, adj).then_some(cur)
}

/// First non-decreasing sequence of length `k` over `0..n` satisfying `pred`.
fn find_multiset(
    n: usize,
    k: usize,
    pred: &mut dyn FnMut(&[ElemId]) -> bool,
) -> Option<Vec<ElemId>> {
    fn go(
        n: usize,
        k: usize,
        start: usize,
        cur: &mut Vec<ElemId>,
        pred: &mut dyn FnMut(&[ElemId]) -> bool,
    ) -> bool {
        if cur.len() == k {
            return pred(cur);
        }
        for v in start..n {
            cur.push(ElemId(v));
            if go(n, k, v, cur, pred) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::with_capacity(k);
    go(n, k, 0, &mut cur, pred).then_some(cur)
}

fn pairwise_in(s: &Structure, f: &Filter, xs: &[ElemId]) -> bool {
    xs.iter()
        .enumerate()
        .all(|(i, &x)| xs[i + 1..].iter().all(|&y| f.contains(s.join(x, y))))
}

/// Some `k` subsets of size `1..=max` of `primes` intersect to exactly `target`.
fn intersection_of_at_most(primes: &[Filter], target: SubsetMask, max: usize) -> bool {
    fn go(
        primes: &[Filter],
        target: SubsetMask,
        start: usize,
        left: usize,
        acc: Option<SubsetMask>,
    ) -> bool {
        if acc == Some(target) {
            return true;
        }
        if left == 0 {
            return false;
        }
        for i in start..primes.len() {
            let next = match acc {
                Some(a) => a.intersection(primes[i].mask()),
                None => primes[i].mask(),
            };
            // intersections only shrink, so they must keep containing the target
            if target.is_subset(&next) && go(primes, target, i + 1, left - 1, Some(next)) {
                return true;
            }
        }
        false
    }
    go(primes, target, 0, max, None)
}

/// The four characterizations of an n-prime filter. The overall answer is
/// "intersection of at most n-1 distinct primes".
pub fn is_n_prime(an: &Analysis, f: &Filter, n: usize) -> Result<EquivalenceVerdict> {
    if n < 2 {
        return Err(Error::BadN(n));
    }
    if !f.is_proper() {
        return Err(Error::ImproperFilter);
    }
    let s = an.s;
    let filters = an.lat.filters();

    // (1) n filters with pairwise intersection F, none equal to F
    let above: Vec<Filter> = filters
        .iter()
        .copied()
        .filter(|g| f.mask().is_strict_subset(&g.mask()))
        .collect();
    let c1 = find_clique(above.len(), n, &|i, j| above[i].meet(&above[j]) == *f).is_none();

    // (2) n filters with pairwise intersection inside F, none inside F
    let outside: Vec<Filter> = filters
        .iter()
        .copied()
        .filter(|g| !g.is_subset(f))
        .collect();
    let c2 = find_clique(outside.len(), n, &|i, j| {
        outside[i].meet(&outside[j]).is_subset(f)
    })
    .is_none();

    // (3) n elements pairwise in F, none in F
    let elems: Vec<ElemId> = s.elems().filter(|&x| !f.contains(x)).collect();
    let c3 = find_clique(elems.len(), n, &|i, j| {
        f.contains(s.join(elems[i], elems[j]))
    })
    .is_none();

    // (4) F is the intersection of at most n-1 distinct primes
    let c4 = intersection_of_at_most(&an.primes_above(f), f.mask(), n - 1);

    Ok(EquivalenceVerdict::new(
        "n-prime",
        format!("F={} n={n}", s.format_set(f.mask())),
        vec![
            (label(1), c1),
            (label(2), c2),
            (label(3), c3),
            (label(4), c4),
        ],
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityReport {
    pub base: Filter,
    /// Smallest n for which the structure is n-normal with respect to `base`.
    pub index: usize,
    /// Each prime above `base` with the number of `base`-minimal primes it contains.
    pub per_prime: Vec<(Filter, usize)>,
}

impl NormalityReport {
    pub fn is_normal(&self) -> bool {
        self.index <= 1
    }
}

pub fn normality_report(an: &Analysis, f: &Filter) -> Result<NormalityReport> {
    if !f.is_proper() {
        return Err(Error::ImproperFilter);
    }
    let mins = an.minimal_primes(f);
    let per_prime: Vec<(Filter, usize)> = an
        .primes_above(f)
        .into_iter()
        .map(|p| (p, mins.iter().filter(|m| m.is_subset(&p)).count()))
        .collect();
    let index = per_prime.iter().map(|&(_, c)| c).max().unwrap_or(0);
    Ok(NormalityReport {
        base: *f,
        index,
        per_prime,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatingWitness {
    /// `a[i] ∉ ms[i]`, pairwise joins in `F`.
    pub a: Vec<ElemId>,
    /// `b[i]` is the product of all `a[j]`, `j != i`.
    pub b: Vec<ElemId>,
    /// `b[i] ∈ ms[i]`; the join of all `b[i]` lies in `F`;
    /// `(F : join of b[j], j != i) ⊆ ms[i]`.
    pub postconditions: [bool; 3],
}

impl SeparatingWitness {
    pub fn holds(&self) -> bool {
        self.postconditions.iter().all(|&b| b)
    }
}

/// Elements separating distinct `F`-minimal primes, found by lexicographic search.
pub fn separating_elements(an: &Analysis, f: &Filter, ms: &[Filter]) -> Result<SeparatingWitness> {
    let n = ms.len();
    if n < 2 {
        return Err(Error::BadN(n));
    }
    let mins = an.minimal_primes(f);
    if ms.iter().any(|m| !mins.contains(m)) {
        return Err(Error::NotMinimalPrime);
    }
    for i in 0..n {
        if ms[i + 1..].contains(&ms[i]) {
            return Err(Error::DuplicatePrime);
        }
    }
    let s = an.s;
    fn go(s: &Structure, f: &Filter, ms: &[Filter], cur: &mut Vec<ElemId>) -> bool {
        let i = cur.len();
        if i == ms.len() {
            return true;
        }
        for x in s.elems() {
            if ms[i].contains(x) || cur.iter().any(|&y| !f.contains(s.join(x, y))) {
                continue;
            }
            cur.push(x);
            if go(s, f, ms, cur) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut a = Vec::with_capacity(n);
    if !go(s, f, ms, &mut a) {
        return Err(Error::SearchExhausted);
    }
    let b: Vec<ElemId> = (0..n)
        .map(|i| s.times_all((0..n).filter(|&j| j != i).map(|j| a[j])))
        .collect();
    let p1 = (0..n).all(|i| ms[i].contains(b[i]));
    let p2 = f.contains(s.join_all(b.iter().copied()));
    let p3 = (0..n).all(|i| {
        let others = s.join_all((0..n).filter(|&j| j != i).map(|j| b[j]));
        coannulet(s, f, others).is_subset(&ms[i])
    });
    Ok(SeparatingWitness {
        a,
        b,
        postconditions: [p1, p2, p3],
    })
}

/// Lexicographically first choice `a[i] ∈ sets[i]` whose product is the bottom.
fn product_reaching_bottom(s: &Structure, sets: &[SubsetMask]) -> Option<Vec<ElemId>> {
    fn go(
        s: &Structure,
        sets: &[SubsetMask],
        acc: ElemId,
        cur: &mut Vec<ElemId>,
        dead: &mut Vec<SubsetMask>,
    ) -> bool {
        let i = cur.len();
        if i == sets.len() {
            return acc == s.bot();
        }
        if dead[i].contains(acc) {
            return false;
        }
        for a in sets[i].iter() {
            cur.push(a);
            if go(s, sets, s.times(acc, a), cur, dead) {
                return true;
            }
            cur.pop();
        }
        dead[i] = dead[i].with(acc);
        false
    }
    let mut dead = vec![s.empty(); sets.len() + 1];
    let mut cur = Vec::with_capacity(sets.len());
    go(s, sets, s.top(), &mut cur, &mut dead).then_some(cur)
}

/// The seven characterizations of n-normality with respect to `F`, for `n+1`
/// objects indexed `0..=n`.
pub fn check_n_normality(an: &Analysis, f: &Filter, n: usize) -> Result<EquivalenceVerdict> {
    if n < 1 {
        return Err(Error::BadN(n));
    }
    if !f.is_proper() {
        return Err(Error::ImproperFilter);
    }
    let s = an.s;
    let k = n + 1;
    let mins = an.minimal_primes(f);

    // (1) any n+1 distinct F-minimal primes join to A
    let c1 = all_subsets_join_full(an, &mins, k);
    // the printed reading joins only n of the n+1 primes
    let printed = mins.len() < k || all_subsets_join_full(an, &mins, n);

    // (2)
    let c2 = normality_report(an, f)?.index <= n;

    // (3) every D_F(P), P prime above F, is an intersection of at most n primes
    let c3 = an.primes_above(f).iter().all(|p| {
        let d = divisor(s, f, p).expect("prime is proper");
        is_filter(s, d) && d != s.full() && intersection_of_at_most(&an.primes, d, n)
    });

    let coann = |x: ElemId| coannulet(s, f, x).mask();
    let size = s.size();

    // (4) pairwise in F ⇒ ⋁ (F : x_i) = A
    let c4 = find_multiset(size, k, &mut |xs| {
        pairwise_in(s, f, xs) && an.join_masks(xs.iter().map(|&x| coann(x))).is_proper()
    })
    .is_none();

    // (5) pairwise in F ⇒ a_i ∈ (F : x_i) with product 0
    let c5 = find_multiset(size, k, &mut |xs| {
        let sets: Vec<SubsetMask> = xs.iter().map(|&x| coann(x)).collect();
        pairwise_in(s, f, xs) && product_reaching_bottom(s, &sets).is_none()
    })
    .is_none();

    let leave_one_out = |xs: &[ElemId]| -> Filter {
        an.join_masks((0..xs.len()).map(|i| {
            coann(
                s.join_all(
                    xs.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &x)| x),
                ),
            )
        }))
    };

    // (6) (F : ⋁ x_i) = ⋁_i (F : ⋁_{j≠i} x_j)
    let c6 = find_multiset(size, k, &mut |xs| {
        coann(s.join_all(xs.iter().copied())) != leave_one_out(xs).mask()
    })
    .is_none();

    // (7) ⋁ x_i ∈ F ⇒ ⋁_i (F : ⋁_{j≠i} x_j) = A
    let c7 = find_multiset(size, k, &mut |xs| {
        f.contains(s.join_all(xs.iter().copied())) && leave_one_out(xs).is_proper()
    })
    .is_none();

    let mut v = EquivalenceVerdict::new(
        "n-normal",
        format!("F={} n={n}", s.format_set(f.mask())),
        vec![
            (label(1), c1),
            (label(2), c2),
            (label(3), c3),
            (label(4), c4),
            (label(5), c5),
            (label(6), c6),
            (label(7), c7),
        ],
    );
    v.diagnostics
        .push(("(1) joining n of the n+1 primes".into(), printed));
    Ok(v)
}

/// Every `k`-subset of `fs` has filter-lattice join equal to the carrier.
fn all_subsets_join_full(an: &Analysis, fs: &[Filter], k: usize) -> bool {
    fn go(an: &Analysis, fs: &[Filter], k: usize, start: usize, cur: &mut Vec<usize>) -> bool {
        if cur.len() == k {
            return !an.join_masks(cur.iter().map(|&i| fs[i].mask())).is_proper();
        }
        for i in start..fs.len() {
            cur.push(i);
            let ok = go(an, fs, k, i + 1, cur);
            cur.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    go(an, fs, k, 0, &mut Vec::new())
}

/// The seven characterizations of normality (base filter `{1}`, two objects).
pub fn check_normality(an: &Analysis) -> EquivalenceVerdict {
    let s = an.s;
    let one = Filter::trivial(s);
    let top = s.top();
    let perp = |x: ElemId| annulet(s, x).mask();
    let mins = an.minimal_primes(&one);

    let c1 = (0..mins.len()).all(|i| {
        (i + 1..mins.len()).all(|j| !an.join_masks([mins[i].mask(), mins[j].mask()]).is_proper())
    });
    let c2 = normality_report(an, &one)
        .map(|r| r.is_normal())
        .unwrap_or(false);
    let c3 = an.primes.iter().all(|p| {
        let d = divisor(s, &one, p).expect("prime is proper");
        is_filter(s, d) && is_prime(s, &Filter::new_unchecked(d))
    });
    let pairs = || s.elems().flat_map(move |x| s.elems().map(move |y| (x, y)));
    let c4 =
        pairs().all(|(x, y)| s.join(x, y) != top || !an.join_masks([perp(x), perp(y)]).is_proper());
    let c5 = pairs().all(|(x, y)| {
        s.join(x, y) != top || product_reaching_bottom(s, &[perp(x), perp(y)]).is_some()
    });
    let c6 = pairs().all(|(x, y)| perp(s.join(x, y)) == an.join_masks([perp(x), perp(y)]).mask());
    let c7 = pairs().all(|(x, y)| {
        !perp(s.join(x, y)).is_full() || !an.join_masks([perp(x), perp(y)]).is_proper()
    });
    EquivalenceVerdict::new(
        "normal",
        "F={1}".into(),
        vec![
            (label(1), c1),
            (label(2), c2),
            (label(3), c3),
            (label(4), c4),
            (label(5), c5),
            (label(6), c6),
            (label(7), c7),
        ],
    )
}

/// The five characterizations of "Ω(A) is a sublattice of the filter lattice".
pub fn check_omega_sublattice(an: &Analysis) -> EquivalenceVerdict {
    let s = an.s;
    let one = Filter::trivial(s);
    let fam = omega_family(s, &one);
    let k = fam.len();

    let c1 = (0..k).all(|i| {
        (0..k).all(|j| match fam.join_idx(i, j) {
            Some(w) if !fam.members[w].is_proper() => !an
                .join_masks([fam.members[i].mask(), fam.members[j].mask()])
                .is_proper(),
            Some(_) => true,
            None => false,
        })
    });
    let c2 = normality_report(an, &one)
        .map(|r| r.is_normal())
        .unwrap_or(false);
    let c3 = k < 64
        && (0u64..1 << k).all(|sel| {
            let j = an.join_masks(
                (0..k)
                    .filter(|&i| sel >> i & 1 == 1)
                    .map(|i| fam.members[i].mask()),
            );
            fam.contains(&j)
        });
    let c4 = (0..k).all(|i| {
        (0..k).all(|j| {
            let (g, h) = (fam.members[i], fam.members[j]);
            fam.contains(&an.join_masks([g.mask(), h.mask()])) && fam.contains(&g.meet(&h))
        })
    });
    let gamma: Vec<Filter> = s.elems().map(|x| annulet(s, x)).collect();
    let c5 = gamma.iter().all(|g| {
        gamma.iter().all(|h| {
            let j = an.join_masks([g.mask(), h.mask()]);
            gamma.contains(&j) && gamma.contains(&g.meet(h))
        })
    });
    EquivalenceVerdict::new(
        "omega-sublattice",
        "F={1}".into(),
        vec![
            (label(1), c1),
            (label(2), c2),
            (label(3), c3),
            (label(4), c4),
            (label(5), c5),
        ],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreatestOmegaOutcome {
    /// Structure is normal; the flag says whether `σ(F)` is the greatest
    /// ω-filter inside `F` (and that such a greatest one exists).
    Checked(bool),
    /// Structure is not normal; the flag records whether the identity happens to hold anyway.
    NotApplicable { identity_holds: bool },
}

/// Greatest member of `Ω(A)` contained in `f`, if one exists.
pub fn greatest_omega_filter_below(s: &Structure, f: &Filter) -> Option<Filter> {
    let fam = omega_family(s, &Filter::trivial(s));
    let below: Vec<Filter> = fam.members.into_iter().filter(|g| g.is_subset(f)).collect();
    below
        .iter()
        .copied()
        .find(|g| below.iter().all(|h| h.is_subset(g)))
}

/// In a normal structure, `σ(F)` is the greatest ω-filter inside `F`.
pub fn check_sigma_greatest(an: &Analysis, f: &Filter) -> GreatestOmegaOutcome {
    let s = an.s;
    let holds = greatest_omega_filter_below(s, f) == Some(sigma(s, f));
    let normal = check_normality(an).value("(2)").unwrap_or(false);
    if normal {
        GreatestOmegaOutcome::Checked(holds)
    } else {
        GreatestOmegaOutcome::NotApplicable {
            identity_holds: holds,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn fl(s: &Structure, names: &[&str]) -> Filter {
        Filter::try_new(s, s.mask_of_names(names).unwrap()).unwrap()
    }

    #[test]
    fn n_prime_in_a6() {
        let s = examples::a6();
        let an = Analysis::new(&s);
        let f2 = fl(&s, &["d", "1"]);
        let v = is_n_prime(&an, &f2, 3).unwrap();
        assert!(v.agree, "{v:?}");
        assert_eq!(v.value("(4)"), Some(true));
        let v = is_n_prime(&an, &f2, 2).unwrap();
        assert!(v.agree, "{v:?}");
        assert_eq!(v.value("(4)"), Some(false));
        for p in &an.primes {
            let v = is_n_prime(&an, p, 2).unwrap();
            assert!(v.agree && v.value("(4)") == Some(true));
        }
        assert_eq!(is_n_prime(&an, &f2, 1), Err(Error::BadN(1)));
        assert_eq!(
            is_n_prime(&an, &Filter::full(&s), 2),
            Err(Error::ImproperFilter)
        );
    }

    #[test]
    fn a6_normality_indices() {
        let s = examples::a6();
        let an = Analysis::new(&s);
        let r = normality_report(&an, &Filter::trivial(&s)).unwrap();
        assert_eq!(r.index, 1);
        assert_eq!(r.per_prime.len(), 3);
        assert!(r.per_prime.iter().all(|&(_, c)| c == 1));
        let r = normality_report(&an, &fl(&s, &["d", "1"])).unwrap();
        assert_eq!(r.index, 1);
        assert_eq!(r.per_prime.len(), 2);
        for f in an.lat.proper() {
            assert_eq!(normality_report(&an, &f).unwrap().index, 1);
        }
        assert_eq!(
            normality_report(&an, &Filter::full(&s)),
            Err(Error::ImproperFilter)
        );
        let c = examples::chain2();
        let an = Analysis::new(&c);
        assert_eq!(
            normality_report(&an, &Filter::trivial(&c)).unwrap().index,
            1
        );
    }

    #[test]
    fn separating_elements_in_a6() {
        let s = examples::a6();
        let an = Analysis::new(&s);
        let id = |n| s.find(n).unwrap();
        let f2 = fl(&s, &["d", "1"]);
        let f3 = fl(&s, &["a", "b", "d", "1"]);
        let f4 = fl(&s, &["c", "d", "1"]);
        let w = separating_elements(&an, &f2, &[f3, f4]).unwrap();
        // lexicographically first: a_1 ∈ {0, c}, a_2 ∈ {0, a, b}
        assert_eq!(w.a, vec![id("c"), id("a")]);
        assert_eq!(w.b, vec![id("a"), id("c")]);
        assert!(w.holds());
        assert_eq!(
            separating_elements(&an, &f2, &[f3, f3]),
            Err(Error::DuplicatePrime)
        );
        assert_eq!(
            separating_elements(&an, &f2, &[f3, Filter::trivial(&s)]),
            Err(Error::NotMinimalPrime)
        );

        let c = examples::chain3_godel();
        let an = Analysis::new(&c);
        let m1 = fl(&c, &["m", "1"]);
        assert_eq!(
            separating_elements(&an, &Filter::trivial(&c), &[m1]),
            Err(Error::BadN(1))
        );
    }

    #[test]
    fn n_normality_in_a6() {
        let s = examples::a6();
        let an = Analysis::new(&s);
        for f in [Filter::trivial(&s), fl(&s, &["d", "1"])] {
            for n in 1..=3 {
                let v = check_n_normality(&an, &f, n).unwrap();
                assert!(v.agree, "{v:?}");
                assert!(v.conditions.iter().all(|&(_, b)| b), "{v:?}");
            }
        }
        assert_eq!(
            check_n_normality(&an, &Filter::trivial(&s), 0),
            Err(Error::BadN(0))
        );
    }

    #[test]
    fn normality_characterizations() {
        for s in [examples::a6(), examples::chain2(), examples::chain3_godel()] {
            let an = Analysis::new(&s);
            let v = check_normality(&an);
            assert!(v.agree && v.value("(2)") == Some(true), "{v:?}");
            let v = check_omega_sublattice(&an);
            assert!(v.agree && v.value("(2)") == Some(true), "{v:?}");
        }
    }

    #[test]
    fn sigma_is_greatest_in_a6() {
        let s = examples::a6();
        let an = Analysis::new(&s);
        let f3 = fl(&s, &["a", "b", "d", "1"]);
        assert_eq!(
            check_sigma_greatest(&an, &f3),
            GreatestOmegaOutcome::Checked(true)
        );
        assert_eq!(
            check_sigma_greatest(&an, &Filter::full(&s)),
            GreatestOmegaOutcome::Checked(true)
        );
        assert_eq!(
            check_sigma_greatest(&an, &Filter::trivial(&s)),
            GreatestOmegaOutcome::Checked(true)
        );
    }
}
