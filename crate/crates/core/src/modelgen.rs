//! Exhaustive enumeration of small residuated lattices up to isomorphism.
//!
//! Lattices are enumerated as posets with a bottom and a top. On each lattice
//! the monoid operation is searched entry by entry; the residuum is never
//! searched but derived as `y -> z = max { x | x * y <= z }`.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::filters::Filter;
use crate::normality::normality_report;
use crate::structure::{
    is_mtl, lattice_ops_from_order, validate_structure, ElemId, OpTable, Structure,
};

pub const MIN_SIZE: usize = 2;
pub const MAX_SIZE: usize = 6;

/// A bounded lattice on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedLattice {
    pub names: Vec<String>,
    pub join: OpTable,
    pub meet: OpTable,
    pub bot: ElemId,
    pub top: ElemId,
}

impl BoundedLattice {
    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn leq(&self, x: ElemId, y: ElemId) -> bool {
        self.join.get(x, y) == y
    }

    /// The lattice reduct of a structure.
    pub fn of_structure(s: &Structure) -> Self {
        BoundedLattice {
            names: s.names().to_vec(),
            join: s.join_table().clone(),
            meet: s.meet_table().clone(),
            bot: s.bot(),
            top: s.top(),
        }
    }

    /// Checks that the tables form a bounded lattice with the given constants.
    pub fn check(&self) -> Result<()> {
        let n = self.size();
        let bad = |m: &str| Err(Error::InvalidBaseLattice(m.to_string()));
        if !(MIN_SIZE..=MAX_SIZE).contains(&n) {
            return Err(Error::SizeOutOfRange(n));
        }
        if self.join.size() != n || self.meet.size() != n || self.bot.0 >= n || self.top.0 >= n {
            return bad("table sizes disagree with the carrier");
        }
        let e = |i| ElemId(i);
        for x in 0..n {
            if !self.leq(self.bot, e(x)) || !self.leq(e(x), self.top) {
                return bad("constants are not the bounds");
            }
            for y in 0..n {
                let (j, m) = (self.join.get(e(x), e(y)), self.meet.get(e(x), e(y)));
                if j != self.join.get(e(y), e(x)) || m != self.meet.get(e(y), e(x)) {
                    return bad("operations are not commutative");
                }
                if self.join.get(e(x), m) != e(x) || self.meet.get(e(x), j) != e(x) {
                    return bad("absorption fails");
                }
                for z in 0..n {
                    if self.join.get(j, e(z)) != self.join.get(e(x), self.join.get(e(y), e(z)))
                        || self.meet.get(m, e(z)) != self.meet.get(e(x), self.meet.get(e(y), e(z)))
                    {
                        return bad("operations are not associative");
                    }
                }
            }
        }
        Ok(())
    }
}

fn default_names(n: usize) -> Vec<String> {
    let mut v = vec!["0".to_string()];
    v.extend((0..n - 2).map(|i| ((b'a' + i as u8) as char).to_string()));
    v.push("1".to_string());
    v
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// Every bounded lattice of the given size, one per isomorphism class.
///
/// Element 0 is the bottom, element `size - 1` the top. Middle elements are
/// labelled by a linear extension of the order.
pub fn enumerate_lattices(size: usize) -> Result<Vec<BoundedLattice>> {
    if !(MIN_SIZE..=MAX_SIZE).contains(&size) {
        return Err(Error::SizeOutOfRange(size));
    }
    let m = size - 2;
    // strict relations i < j between middle elements, only for i < j in index
    // order: every poset has such a natural labelling
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    let perms = permutations(&(0..m).collect::<Vec<_>>());
    let mut seen: Vec<(Vec<bool>, BoundedLattice)> = Vec::new();
    for rel in 0u32..1 << pairs.len() {
        let mut leq = vec![vec![false; size]; size];
        for (x, row) in leq.iter_mut().enumerate() {
            row[x] = true;
            row[size - 1] = true;
        }
        leq[0] = vec![true; size];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if rel >> b & 1 == 1 {
                leq[i + 1][j + 1] = true;
            }
        }
        let Ok((join, meet)) = lattice_ops_from_order(&leq) else {
            continue;
        };
        let key = perms
            .iter()
            .map(|p| {
                let map = |x: usize| {
                    if x == 0 || x == size - 1 {
                        x
                    } else {
                        p[x - 1] + 1
                    }
                };
                let mut k = vec![false; size * size];
                for x in 0..size {
                    for y in 0..size {
                        k[map(x) * size + map(y)] = leq[x][y];
                    }
                }
                k
            })
            .min()
            .expect("at least one permutation");
        if seen.iter().any(|(k, _)| *k == key) {
            continue;
        }
        seen.push((
            key,
            BoundedLattice {
                names: default_names(size),
                join,
                meet,
                bot: ElemId(0),
                top: ElemId(size - 1),
            },
        ));
    }
    seen.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(seen.into_iter().map(|(_, l)| l).collect())
}

/// Element invariants preserved by isomorphisms; used to restrict relabelings.
fn invariant(s: &Structure, x: ElemId) -> (usize, usize, usize, usize, bool) {
    let role = if x == s.bot() {
        0
    } else if x == s.top() {
        2
    } else {
        1
    };
    (
        role,
        s.height(x),
        s.down(x).len(),
        s.up(x).len(),
        s.times(x, x) != x,
    )
}

/// Canonical form of all four tables: the lexicographically least byte string
/// over all relabelings that respect element invariants. Isomorphic structures
/// and only those share a key.
pub fn canonical_key(s: &Structure) -> Vec<u8> {
    let n = s.size();
    let mut elems: Vec<ElemId> = s.elems().collect();
    elems.sort_by_key(|&x| invariant(s, x));
    // classes of equal invariant, in invariant order
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, &x) in elems.iter().enumerate() {
        if i > 0 && invariant(s, elems[i - 1]) == invariant(s, x) {
            classes.last_mut().unwrap().push(x.0);
        } else {
            classes.push(vec![x.0]);
        }
    }
    let class_perms: Vec<Vec<Vec<usize>>> = classes.iter().map(|c| permutations(c)).collect();
    let mut best: Option<Vec<u8>> = None;
    let mut choice = vec![0usize; classes.len()];
    loop {
        // position -> original element
        let order: Vec<usize> = choice
            .iter()
            .enumerate()
            .flat_map(|(c, &k)| class_perms[c][k].iter().copied())
            .collect();
        let mut pos = vec![0u8; n];
        for (p, &x) in order.iter().enumerate() {
            pos[x] = p as u8;
        }
        let mut key = Vec::with_capacity(1 + 4 * n * n);
        key.push(n as u8);
        for table in [
            s.join_table(),
            s.meet_table(),
            s.times_table(),
            s.residuum_table(),
        ] {
            for &x in &order {
                for &y in &order {
                    key.push(pos[table.get(ElemId(x), ElemId(y)).0]);
                }
            }
        }
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
        // odometer over the per-class permutations
        let mut c = classes.len();
        loop {
            if c == 0 {
                return best.expect("at least one relabeling");
            }
            c -= 1;
            choice[c] += 1;
            if choice[c] < class_perms[c].len() {
                break;
            }
            choice[c] = 0;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub size: usize,
    pub base_lattice: Option<BoundedLattice>,
    pub limit: Option<usize>,
    /// Keep one structure per isomorphism class.
    pub canonical_only: bool,
}

impl SearchSpec {
    pub fn new(size: usize) -> Self {
        SearchSpec {
            size,
            base_lattice: None,
            limit: None,
            canonical_only: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CensusStats {
    pub filters: usize,
    pub primes: usize,
    pub minimal_primes: usize,
    /// Normality index with respect to `{1}`.
    pub normality_index: usize,
    pub is_mtl: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub structure: Structure,
    pub canonical_key: Vec<u8>,
    pub stats: CensusStats,
}

pub fn census_stats(s: &Structure) -> CensusStats {
    let an = Analysis::new(s);
    let one = Filter::trivial(s);
    CensusStats {
        filters: an.lat.len(),
        primes: an.primes.len(),
        minimal_primes: an.minimal_primes(&one).len(),
        normality_index: normality_report(&an, &one).map(|r| r.index).unwrap_or(0),
        is_mtl: is_mtl(s),
    }
}

/// Partial times table over a fixed lattice.
struct Search<'a> {
    lat: &'a BoundedLattice,
    n: usize,
    table: Vec<Option<ElemId>>,
}

impl Search<'_> {
    fn get(&self, x: usize, y: usize) -> Option<ElemId> {
        self.table[x * self.n + y]
    }

    fn set(&mut self, x: usize, y: usize, v: Option<ElemId>) {
        self.table[x * self.n + y] = v;
        self.table[y * self.n + x] = v;
    }

    /// Every fully determined instance of monotonicity, join preservation and
    /// associativity holds.
    fn consistent(&self) -> bool {
        let n = self.n;
        let l = self.lat;
        let e = ElemId;
        for x in 0..n {
            for y in 0..n {
                let Some(xy) = self.get(x, y) else { continue };
                for z in 0..n {
                    // monotone in the second argument
                    if l.leq(e(y), e(z)) {
                        if let Some(xz) = self.get(x, z) {
                            if !l.leq(xy, xz) {
                                return false;
                            }
                        }
                    }
                    // x * (y v z) = (x * y) v (x * z)
                    if let (Some(xz), Some(xyz)) =
                        (self.get(x, z), self.get(x, l.join.get(e(y), e(z)).0))
                    {
                        if xyz != l.join.get(xy, xz) {
                            return false;
                        }
                    }
                    // (x * y) * z = x * (y * z)
                    if let (Some(yz), Some(l_)) = (self.get(y, z), self.get(xy.0, z)) {
                        if let Some(r) = self.get(x, yz.0) {
                            if l_ != r {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// All commutative, associative, join-preserving times tables on `lat` with
/// identity `top` and absorbing `bot`.
fn times_tables(lat: &BoundedLattice) -> Vec<OpTable> {
    let n = lat.size();
    let mut search = Search {
        lat,
        n,
        table: vec![None; n * n],
    };
    for x in 0..n {
        search.set(x, lat.top.0, Some(ElemId(x)));
        search.set(x, lat.bot.0, Some(lat.bot));
    }
    let middle: Vec<usize> = (0..n)
        .filter(|&x| x != lat.bot.0 && x != lat.top.0)
        .collect();
    let free: Vec<(usize, usize)> = middle
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| middle[i..].iter().map(move |&y| (x, y)))
        .collect();

    fn go(search: &mut Search, free: &[(usize, usize)], i: usize, out: &mut Vec<OpTable>) {
        if i == free.len() {
            let t = OpTable::from_fn(search.n, |x, y| search.get(x.0, y.0).expect("complete"));
            out.push(t);
            return;
        }
        let (x, y) = free[i];
        let bound = search.lat.meet.get(ElemId(x), ElemId(y));
        for v in 0..search.n {
            if !search.lat.leq(ElemId(v), bound) {
                continue;
            }
            search.set(x, y, Some(ElemId(v)));
            if search.consistent() {
                go(search, free, i + 1, out);
            }
        }
        search.set(x, y, None);
    }
    let mut out = Vec::new();
    if search.consistent() {
        go(&mut search, &free, 0, &mut out);
    }
    out
}

fn structures_on(lat: &BoundedLattice) -> Vec<Structure> {
    times_tables(lat)
        .into_iter()
        .filter_map(|times| {
            Structure::with_derived_residuum(
                lat.names.clone(),
                lat.join.clone(),
                lat.meet.clone(),
                times,
                lat.bot,
                lat.top,
            )
            .ok()
        })
        .filter(|s| validate_structure(s).valid)
        .collect()
}

/// Every residuated lattice on the requested lattice(s), sorted by canonical key.
pub fn enumerate_residuated(spec: &SearchSpec) -> Result<Vec<CensusRecord>> {
    if !(MIN_SIZE..=MAX_SIZE).contains(&spec.size) {
        return Err(Error::SizeOutOfRange(spec.size));
    }
    let lattices = match &spec.base_lattice {
        Some(l) => {
            if l.size() != spec.size {
                return Err(Error::InvalidBaseLattice(format!(
                    "lattice has {} elements, search size is {}",
                    l.size(),
                    spec.size
                )));
            }
            l.check()?;
            vec![l.clone()]
        }
        None => enumerate_lattices(spec.size)?,
    };
    let mut records: Vec<CensusRecord> = lattices
        .par_iter()
        .flat_map_iter(structures_on)
        .map(|s| CensusRecord {
            canonical_key: canonical_key(&s),
            stats: census_stats(&s),
            structure: s,
        })
        .collect();
    records.sort_by(|a, b| {
        a.canonical_key
            .cmp(&b.canonical_key)
            .then_with(|| table_bytes(&a.structure).cmp(&table_bytes(&b.structure)))
    });
    if spec.canonical_only {
        records.dedup_by(|a, b| a.canonical_key == b.canonical_key);
    }
    if let Some(limit) = spec.limit {
        records.truncate(limit);
    }
    Ok(records)
}

fn table_bytes(s: &Structure) -> Vec<usize> {
    s.times_table()
        .rows()
        .flat_map(|r| r.iter().map(|e| e.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn lattice_counts() {
        assert_eq!(enumerate_lattices(2).unwrap().len(), 1);
        assert_eq!(enumerate_lattices(3).unwrap().len(), 1);
        assert_eq!(enumerate_lattices(4).unwrap().len(), 2);
        assert_eq!(enumerate_lattices(7), Err(Error::SizeOutOfRange(7)));
        assert_eq!(enumerate_lattices(1), Err(Error::SizeOutOfRange(1)));
    }

    #[test]
    fn residuated_counts_small() {
        assert_eq!(enumerate_residuated(&SearchSpec::new(2)).unwrap().len(), 1);
        assert_eq!(enumerate_residuated(&SearchSpec::new(3)).unwrap().len(), 2);
    }

    #[test]
    fn canonical_key_is_label_invariant() {
        let s = examples::a6();
        // swap the labels of a and c
        let perm = [0usize, 3, 2, 1, 4, 5];
        let relabel = |t: &OpTable| {
            let mut out = OpTable::from_fn(6, |_, _| ElemId(0));
            for x in 0..6 {
                for y in 0..6 {
                    out.set(
                        ElemId(perm[x]),
                        ElemId(perm[y]),
                        ElemId(perm[t.get(ElemId(x), ElemId(y)).0]),
                    );
                }
            }
            out
        };
        let mut names = s.names().to_vec();
        names.swap(1, 3);
        let t = Structure::new(
            names,
            relabel(s.join_table()),
            relabel(s.meet_table()),
            relabel(s.times_table()),
            relabel(s.residuum_table()),
            s.bot(),
            s.top(),
        )
        .unwrap();
        assert!(validate_structure(&t).valid);
        assert_eq!(canonical_key(&s), canonical_key(&t));
        assert_ne!(canonical_key(&s), canonical_key(&examples::chain3_luk()));
    }

    #[test]
    fn a6_found_over_its_lattice() {
        let s = examples::a6();
        let spec = SearchSpec {
            size: 6,
            base_lattice: Some(BoundedLattice::of_structure(&s)),
            limit: None,
            canonical_only: true,
        };
        let recs = enumerate_residuated(&spec).unwrap();
        let key = canonical_key(&s);
        assert!(recs.iter().any(|r| r.canonical_key == key));
    }

    #[test]
    fn base_lattice_size_mismatch() {
        let s = examples::a6();
        let spec = SearchSpec {
            size: 5,
            base_lattice: Some(BoundedLattice::of_structure(&s)),
            limit: None,
            canonical_only: true,
        };
        assert!(matches!(
            enumerate_residuated(&spec),
            Err(Error::InvalidBaseLattice(_))
        ));
    }
}

#[cfg(test)]
mod oracle {
    use super::*;

    /// Every times table on the 3-chain, checked directly against the axioms.
    #[test]
    fn three_chain_unpruned() {
        let lat = &enumerate_lattices(3).unwrap()[0];
        let mut found = 0;
        for code in 0..3usize.pow(9) {
            let mut c = code;
            let times = OpTable::from_fn(3, |_, _| {
                let v = c % 3;
                c /= 3;
                ElemId(v)
            });
            let Ok(s) = Structure::with_derived_residuum(
                lat.names.clone(),
                lat.join.clone(),
                lat.meet.clone(),
                times,
                lat.bot,
                lat.top,
            ) else {
                continue;
            };
            if validate_structure(&s).valid {
                found += 1;
            }
        }
        assert_eq!(found, 2);
        let mut spec = SearchSpec::new(3);
        spec.canonical_only = false;
        assert_eq!(enumerate_residuated(&spec).unwrap().len(), 2);
    }

    #[test]
    fn all_labelings_reduce_to_canonical_stream() {
        for size in 2..=5 {
            let canon = enumerate_residuated(&SearchSpec::new(size)).unwrap();
            let mut spec = SearchSpec::new(size);
            spec.canonical_only = false;
            let mut all = enumerate_residuated(&spec).unwrap();
            assert!(all.len() >= canon.len());
            all.dedup_by(|a, b| a.canonical_key == b.canonical_key);
            let a: Vec<_> = all.iter().map(|r| &r.canonical_key).collect();
            let c: Vec<_> = canon.iter().map(|r| &r.canonical_key).collect();
            assert_eq!(a, c);
        }
    }
}
