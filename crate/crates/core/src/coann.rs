//! Coannihilators `(F : X)` and the Boolean algebra they form.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::filters::Filter;
use crate::mask::SubsetMask;
use crate::structure::{ElemId, Structure};

/// `(F : X) = { a | x v a ∈ F for every x ∈ X }`; the whole carrier when `X` is empty.
pub fn coannihilator(s: &Structure, f: &Filter, x: SubsetMask) -> Filter {
    let m = s
        .elems()
        .filter(|&a| x.iter().all(|y| f.contains(s.join(y, a))))
        .fold(s.empty(), |m, a| m.with(a));
    Filter::new_unchecked(m)
}

/// `(F : x)`
pub fn coannulet(s: &Structure, f: &Filter, x: ElemId) -> Filter {
    coannihilator(s, f, s.mask([x]))
}

/// `x^⊥ = ({1} : x)`
pub fn annulet(s: &Structure, x: ElemId) -> Filter {
    coannulet(s, &Filter::trivial(s), x)
}

/// All `F`-coannihilators, with the coannulets marked.
#[derive(Clone, Debug)]
pub struct CoannFamily {
    pub base: Filter,
    /// Canonically sorted: ascending size, then bit value. `base` is first, the carrier last.
    pub members: Vec<Filter>,
    /// Indices into `members` of the distinct coannulets, ascending.
    pub coannulets: Vec<usize>,
    /// `coannulet_of[x]` is the member index of `(F : x)`.
    pub coannulet_of: Vec<usize>,
    complement: Vec<usize>,
    join: Vec<Vec<usize>>,
    index: HashMap<u64, usize>,
}

/// Builds Γ_F by closing the coannulets under intersection, the empty
/// intersection being the carrier.
pub fn coann_family(s: &Structure, f: &Filter) -> CoannFamily {
    let annulets: Vec<SubsetMask> = s.elems().map(|x| coannulet(s, f, x).mask()).collect();
    let mut members: Vec<SubsetMask> = vec![s.full()];
    let mut frontier = members.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for a in &annulets {
                let i = m.intersection(*a);
                if !members.contains(&i) {
                    members.push(i);
                    next.push(i);
                }
            }
        }
        frontier = next;
    }
    members.sort_by_key(|m| m.canonical_key());
    let index: HashMap<u64, usize> = members
        .iter()
        .enumerate()
        .map(|(i, m)| (m.bits(), i))
        .collect();
    let coannulet_of: Vec<usize> = annulets.iter().map(|a| index[&a.bits()]).collect();
    let mut coannulets = coannulet_of.clone();
    coannulets.sort_unstable();
    coannulets.dedup();

    let complement: Vec<usize> = members
        .iter()
        .map(|&g| {
            let c = coannihilator(s, f, g).mask();
            index[&c.bits()]
        })
        .collect();
    let k = members.len();
    let mut join = vec![vec![0; k]; k];
    for i in 0..k {
        for j in i..k {
            // (F : (F : G ∪ H))
            let inner = coannihilator(s, f, members[i].union(members[j])).mask();
            let outer = coannihilator(s, f, inner).mask();
            join[i][j] = index[&outer.bits()];
            join[j][i] = join[i][j];
        }
    }
    CoannFamily {
        base: *f,
        members: members.into_iter().map(Filter::new_unchecked).collect(),
        coannulets,
        coannulet_of,
        complement,
        join,
        index,
    }
}

impl CoannFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, g: &Filter) -> Option<usize> {
        self.index.get(&g.mask().bits()).copied()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.members.len() - 1
    }

    /// Join by index.
    pub fn join_idx(&self, i: usize, j: usize) -> usize {
        self.join[i][j]
    }

    /// Complement by index.
    pub fn complement_idx(&self, i: usize) -> usize {
        self.complement[i]
    }

    /// Meet by index: plain intersection, which stays inside the family.
    pub fn meet_idx(&self, i: usize, j: usize) -> Option<usize> {
        self.index_of(&self.members[i].meet(&self.members[j]))
    }

    pub fn gamma_join(&self, g: &Filter, h: &Filter) -> Result<Filter> {
        let i = self.index_of(g).ok_or(Error::UnknownMember)?;
        let j = self.index_of(h).ok_or(Error::UnknownMember)?;
        Ok(self.members[self.join[i][j]])
    }

    pub fn gamma_complement(&self, g: &Filter) -> Result<Filter> {
        let i = self.index_of(g).ok_or(Error::UnknownMember)?;
        Ok(self.members[self.complement[i]])
    }
}

pub fn gamma_join(fam: &CoannFamily, g: &Filter, h: &Filter) -> Result<Filter> {
    fam.gamma_join(g, h)
}

pub fn gamma_complement(fam: &CoannFamily, g: &Filter) -> Result<Filter> {
    fam.gamma_complement(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::filters::{all_filters, is_filter};

    fn fl(s: &Structure, names: &[&str]) -> Filter {
        Filter::try_new(s, s.mask_of_names(names).unwrap()).unwrap()
    }

    #[test]
    fn listed_coannihilators_of_f4() {
        let s = examples::a6();
        let f4 = fl(&s, &["c", "d", "1"]);
        for x in ["0", "a", "b"] {
            assert_eq!(coannulet(&s, &f4, s.find(x).unwrap()), f4, "x = {x}");
        }
        for x in ["c", "d", "1"] {
            assert_eq!(
                coannulet(&s, &f4, s.find(x).unwrap()),
                Filter::full(&s),
                "x = {x}"
            );
        }
    }

    #[test]
    fn basic_values() {
        let s = examples::a6();
        let f1 = Filter::trivial(&s);
        assert_eq!(coannulet(&s, &f1, s.find("d").unwrap()), f1);
        assert_eq!(coannihilator(&s, &f1, s.empty()), Filter::full(&s));
        let f2 = fl(&s, &["d", "1"]);
        assert_eq!(coannihilator(&s, &f2, f2.mask()), Filter::full(&s));
    }

    #[test]
    fn families_in_a6() {
        let s = examples::a6();
        let f4 = fl(&s, &["c", "d", "1"]);
        let fam = coann_family(&s, &f4);
        assert_eq!(fam.members, vec![f4, Filter::full(&s)]);
        assert_eq!(fam.coannulets, vec![0, 1]);

        let f1 = Filter::trivial(&s);
        let fam = coann_family(&s, &f1);
        assert_eq!(fam.members, vec![f1, Filter::full(&s)]);

        let full = Filter::full(&s);
        let fam = coann_family(&s, &full);
        assert_eq!(fam.members, vec![full]);
    }

    #[test]
    fn join_and_complement_over_f2() {
        let s = examples::a6();
        let id = |n| s.find(n).unwrap();
        let f2 = fl(&s, &["d", "1"]);
        let fam = coann_family(&s, &f2);
        let cb = coannulet(&s, &f2, id("b"));
        let cc = coannulet(&s, &f2, id("c"));
        assert_eq!(cb, fl(&s, &["c", "d", "1"]));
        assert_eq!(cc, fl(&s, &["a", "b", "d", "1"]));
        assert_eq!(fam.gamma_join(&cb, &cc).unwrap(), Filter::full(&s));
        assert_eq!(fam.gamma_join(&cb, &cb).unwrap(), cb);
        assert_eq!(fam.gamma_join(&cb, &f2).unwrap(), cb);
        assert_eq!(fam.gamma_complement(&cb).unwrap(), cc);
        assert_eq!(fam.gamma_complement(&f2).unwrap(), Filter::full(&s));
        assert_eq!(fam.gamma_complement(&Filter::full(&s)).unwrap(), f2);
        for g in &fam.members {
            let c = fam.gamma_complement(g).unwrap();
            assert_eq!(fam.gamma_complement(&c).unwrap(), *g);
        }
        let stray = fl(&s, &["1"]);
        assert_eq!(fam.gamma_complement(&stray), Err(Error::UnknownMember));
    }

    #[test]
    fn intersection_closure_matches_all_subsets() {
        for s in [
            examples::a6(),
            examples::chain3_luk(),
            examples::chain3_godel(),
        ] {
            for f in all_filters(&s).filters() {
                let fam = coann_family(&s, f);
                let mut brute: Vec<SubsetMask> = SubsetMask::all_subsets(s.size())
                    .map(|x| coannihilator(&s, f, x).mask())
                    .collect();
                brute.sort_by_key(|m| m.canonical_key());
                brute.dedup();
                let got: Vec<SubsetMask> = fam.members.iter().map(|g| g.mask()).collect();
                assert_eq!(got, brute);
                for g in &fam.members {
                    assert!(is_filter(&s, g.mask()));
                }
            }
        }
    }
}
