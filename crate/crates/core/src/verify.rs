//! The invariant battery: every law the analysis modules are expected to
//! satisfy, checked exhaustively on one structure.
//!
//! Quantifiers over arbitrary subsets range over all subsets when the carrier
//! has at most [`FULL_SUBSET_LIMIT`] elements; above that they range over
//! singletons, pairs, filters and ideals.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::analysis::Analysis;
use crate::coann::{coann_family, coannihilator, coannulet};
use crate::filters::{
    all_ideals, filter_with, generated_filter, ideal_join, is_filter, is_ideal, is_join_closed,
    principal_filter, principal_ideal, Filter,
};
use crate::mask::SubsetMask;
use crate::normality::{
    check_n_normality, check_normality, check_omega_sublattice, check_sigma_greatest, is_n_prime,
    normality_report, separating_elements, EquivalenceVerdict, GreatestOmegaOutcome,
};
use crate::omega::{dense_set, divisor, omega, omega_family_from_ideals, sigma, OmegaFamily};
use crate::spectra::{is_prime, maximal_join_closed_avoiding, minimal_primes_containing};
use crate::structure::{validate_structure, Structure};

pub const FULL_SUBSET_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Battery {
    /// Filters, primes and coannihilators.
    Lattice,
    /// `ω_F`, ω-filters and divisors.
    Omega,
    /// n-prime filters and normality.
    Normality,
}

impl Battery {
    pub const ALL: [Battery; 3] = [Battery::Lattice, Battery::Omega, Battery::Normality];

    pub fn name(self) -> &'static str {
        match self {
            Battery::Lattice => "lattice",
            Battery::Omega => "omega",
            Battery::Normality => "normality",
        }
    }
}

impl fmt::Display for Battery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A battery selection: one group or all of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    All,
    Only(Battery),
}

impl Selection {
    pub fn includes(self, b: Battery) -> bool {
        match self {
            Selection::All => true,
            Selection::Only(x) => x == b,
        }
    }
}

impl FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Selection::All),
            "lattice" | "§2" => Ok(Selection::Only(Battery::Lattice)),
            "omega" | "§3" => Ok(Selection::Only(Battery::Omega)),
            "normality" | "§4" => Ok(Selection::Only(Battery::Normality)),
            _ => Err(format!(
                "unknown battery `{s}` (expected all, lattice, omega or normality)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub battery: Battery,
    pub passed: bool,
    /// Number of instances examined.
    pub cases: usize,
    /// First failing instance.
    pub witness: Option<String>,
}

/// Something worth a human look that is not a failed law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub id: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    pub findings: Vec<Finding>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Default)]
struct Rec {
    cases: usize,
    witness: Option<String>,
}

impl Rec {
    fn case(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn verdict(&mut self, v: &EquivalenceVerdict) {
        self.case(v.agree, || v.witness.clone().unwrap_or_default());
    }
}

struct Runner {
    sel: Selection,
    report: VerificationReport,
}

impl Runner {
    fn run(&mut self, battery: Battery, id: &'static str, body: impl FnOnce(&mut Rec)) {
        if !self.sel.includes(battery) {
            return;
        }
        let mut rec = Rec::default();
        body(&mut rec);
        self.report.checks.push(CheckResult {
            id,
            battery,
            passed: rec.witness.is_none(),
            cases: rec.cases,
            witness: rec.witness,
        });
    }
}

/// Smallest ∨-closed superset.
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

/// The subsets a "for all X" quantifier ranges over.
fn subject_sets(s: &Structure, filters: &[Filter]) -> Vec<SubsetMask> {
    let n = s.size();
    if n <= FULL_SUBSET_LIMIT {
        return SubsetMask::all_subsets(n).collect();
    }
    let mut out = vec![s.empty(), s.full()];
    for x in s.elems() {
        for y in s.elems().filter(|&y| y >= x) {
            out.push(s.mask([x, y]));
        }
    }
    out.extend(filters.iter().map(|f| f.mask()));
    out.extend(all_ideals(s).iter().map(|i| i.mask()));
    out.sort_by_key(|m| m.canonical_key());
    out.dedup();
    out
}

fn meet_of(s: &Structure, fs: impl IntoIterator<Item = Filter>) -> SubsetMask {
    fs.into_iter()
        .fold(s.full(), |acc, p| acc.intersection(p.mask()))
}

/// Runs the selected batteries on `s`.
pub fn verify(s: &Structure, sel: Selection) -> VerificationReport {
    let an = Analysis::new(s);
    let mut r = Runner {
        sel,
        report: VerificationReport::default(),
    };
    lattice_battery(&mut r, &an);
    omega_battery(&mut r, &an);
    normality_battery(&mut r, &an);
    r.report
}

fn lattice_battery(r: &mut Runner, an: &Analysis) {
    use Battery::Lattice as B;
    let s = an.s;
    let filters = an.lat.filters();
    let sets = subject_sets(s, filters);
    let pairs = || s.elems().flat_map(move |x| s.elems().map(move |y| (x, y)));
    let f_str = |f: &Filter| s.format_set(f.mask());

    r.run(B, "structure-laws", |rec| {
        let v = validate_structure(s);
        rec.case(v.valid, || format!("{:?}", v.violations.first()));
    });

    r.run(B, "filter-enumeration-exact", |rec| {
        if s.size() > 16 {
            return;
        }
        let brute: Vec<SubsetMask> = SubsetMask::all_subsets(s.size())
            .filter(|&m| is_filter(s, m))
            .collect();
        rec.case(brute.len() == filters.len(), || {
            format!(
                "{} filters by scan, {} enumerated",
                brute.len(),
                filters.len()
            )
        });
        for m in brute {
            rec.case(an.lat.contains_mask(m), || {
                format!("missing {}", s.format_set(m))
            });
        }
    });

    r.run(B, "generated-filter-idempotent", |rec| {
        for &x in &sets {
            let g = generated_filter(s, x);
            rec.case(
                x.is_subset(&g.mask()) && generated_filter(s, g.mask()) == g,
                || format!("X={}", s.format_set(x)),
            );
        }
    });

    r.run(B, "filter-extension-antitone", |rec| {
        for f in filters {
            for (x, y) in pairs() {
                if s.leq(x, y) {
                    rec.case(
                        filter_with(s, f, y).is_subset(&filter_with(s, f, x)),
                        || format!("F={} x={} y={}", f_str(f), s.name(x), s.name(y)),
                    );
                }
            }
        }
    });

    r.run(B, "filter-extension-meet", |rec| {
        for f in filters {
            for (x, y) in pairs() {
                let lhs = filter_with(s, f, x).meet(&filter_with(s, f, y));
                rec.case(lhs == filter_with(s, f, s.join(x, y)), || {
                    format!("F={} x={} y={}", f_str(f), s.name(x), s.name(y))
                });
            }
        }
    });

    r.run(B, "filter-extension-join", |rec| {
        for f in filters {
            for (x, y) in pairs() {
                let lhs = an.join_masks([filter_with(s, f, x).mask(), filter_with(s, f, y).mask()]);
                rec.case(lhs == filter_with(s, f, s.times(x, y)), || {
                    format!("F={} x={} y={}", f_str(f), s.name(x), s.name(y))
                });
            }
        }
    });

    r.run(B, "principal-filters-closed", |rec| {
        for (x, y) in pairs() {
            let (px, py) = (principal_filter(s, x), principal_filter(s, y));
            let j = an.join_masks([px.mask(), py.mask()]);
            let m = px.meet(&py);
            rec.case(
                j == principal_filter(s, s.times(x, y)) && m == principal_filter(s, s.join(x, y)),
                || format!("x={} y={}", s.name(x), s.name(y)),
            );
        }
    });

    r.run(B, "filter-lattice-distributive", |rec| {
        let n = an.lat.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = an.lat.meet(i, an.lat.join(j, k));
                    let rhs = an.lat.join(an.lat.meet(i, j), an.lat.meet(i, k));
                    rec.case(lhs == rhs, || {
                        format!(
                            "{} {} {}",
                            f_str(&an.lat.get(i)),
                            f_str(&an.lat.get(j)),
                            f_str(&an.lat.get(k))
                        )
                    });
                }
            }
        }
    });

    r.run(B, "ideals", |rec| {
        for i in &an.ideals {
            rec.case(is_ideal(s, i.mask()), || s.format_set(i.mask()));
        }
        for (x, y) in pairs() {
            let (ix, iy) = (principal_ideal(s, x), principal_ideal(s, y));
            rec.case(
                ix.mask().intersection(iy.mask()) == principal_ideal(s, s.meet(x, y)).mask()
                    && ideal_join(s, &ix, &iy) == principal_ideal(s, s.join(x, y)),
                || format!("x={} y={}", s.name(x), s.name(y)),
            );
        }
    });

    r.run(B, "prime-iff-complement-join-closed", |rec| {
        for f in filters.iter().filter(|f| f.is_proper()) {
            rec.case(
                is_prime(s, f) == is_join_closed(s, f.mask().complement()),
                || f_str(f),
            );
        }
    });

    let join_closed: Vec<SubsetMask> = sets
        .iter()
        .copied()
        .filter(|m| !m.is_empty() && is_join_closed(s, *m))
        .collect();

    r.run(B, "prime-separation", |rec| {
        for f in filters {
            for &c in join_closed.iter().filter(|c| c.is_disjoint(&f.mask())) {
                let ok = an
                    .primes
                    .iter()
                    .any(|p| f.is_subset(p) && p.mask().is_disjoint(&c));
                rec.case(ok, || format!("F={} C={}", f_str(f), s.format_set(c)));
            }
        }
    });

    r.run(B, "generated-filter-meet-of-primes", |rec| {
        for &x in &sets {
            let above = an.primes.iter().copied().filter(|p| x.is_subset(&p.mask()));
            rec.case(generated_filter(s, x).mask() == meet_of(s, above), || {
                format!("X={}", s.format_set(x))
            });
        }
    });

    r.run(B, "minimal-prime-iff-maximal-avoiding", |rec| {
        for f in filters.iter().filter(|f| f.is_proper()) {
            let mins = an.minimal_primes(f);
            for p in an.primes_above(f) {
                let comp = p.mask().complement();
                let maximal = is_join_closed(s, comp)
                    && p.mask()
                        .difference(f.mask())
                        .iter()
                        .all(|x| !join_closure(s, comp.with(x)).is_disjoint(&f.mask()));
                rec.case(mins.contains(&p) == maximal, || {
                    format!("F={} P={}", f_str(f), f_str(&p))
                });
            }
            for x in f.mask().complement().iter() {
                let ok = match maximal_join_closed_avoiding(s, f, s.mask([x])) {
                    Ok(c) => mins.iter().any(|m| m.mask() == c.complement()),
                    Err(_) => false,
                };
                rec.case(ok, || format!("F={} seed={}", f_str(f), s.name(x)));
            }
        }
    });

    r.run(B, "minimal-primes-below-primes", |rec| {
        for &x in &sets {
            let mins = minimal_primes_containing(&an.primes, x);
            for p in an.primes.iter().filter(|p| x.is_subset(&p.mask())) {
                rec.case(mins.iter().any(|m| m.is_subset(p)), || {
                    format!("X={} P={}", s.format_set(x), f_str(p))
                });
            }
        }
    });

    r.run(B, "generated-filter-meet-of-minimal-primes", |rec| {
        for &x in &sets {
            let mins = minimal_primes_containing(&an.primes, x);
            rec.case(generated_filter(s, x).mask() == meet_of(s, mins), || {
                format!("X={}", s.format_set(x))
            });
        }
    });

    r.run(B, "coannihilator-galois", |rec| {
        for f in filters {
            for &x in &sets {
                let cx = coannihilator(s, f, x).mask();
                for &y in &sets {
                    if x.is_subset(&coannihilator(s, f, y).mask()) {
                        rec.case(y.is_subset(&cx), || {
                            format!("F={} X={} Y={}", f_str(f), s.format_set(x), s.format_set(y))
                        });
                    }
                }
            }
        }
    });

    r.run(B, "coannihilator-full-iff-inside", |rec| {
        for f in filters {
            for &x in &sets {
                rec.case(
                    coannihilator(s, f, x).mask().is_full() == x.is_subset(&f.mask()),
                    || format!("F={} X={}", f_str(f), s.format_set(x)),
                );
            }
        }
    });

    r.run(B, "coannulet-laws", |rec| {
        for f in filters {
            let c = |x| coannulet(s, f, x);
            let fam = coann_family(s, f);
            for (x, y) in pairs() {
                let w = || format!("F={} x={} y={}", f_str(f), s.name(x), s.name(y));
                if s.leq(x, y) {
                    rec.case(c(x).is_subset(&c(y)), w);
                }
                rec.case(c(x).meet(&c(y)) == c(s.times(x, y)), w);
                let cc = |z| coannihilator(s, f, c(z).mask());
                rec.case(cc(x).meet(&cc(y)) == cc(s.join(x, y)), w);
                let fj = an.join_masks([c(x).mask(), c(y).mask()]);
                rec.case(fj.is_subset(&c(s.join(x, y))), w);
                rec.case(fam.gamma_join(&c(x), &c(y)) == Ok(c(s.join(x, y))), w);
            }
        }
    });

    r.run(B, "coannihilators-boolean", |rec| {
        for f in filters {
            let fam = coann_family(s, f);
            let k = fam.len();
            let w = |i: usize| format!("F={} G={}", f_str(f), f_str(&fam.members[i]));
            rec.case(fam.members[fam.bottom()] == *f, || w(fam.bottom()));
            rec.case(fam.members[fam.top()].mask().is_full(), || w(fam.top()));
            for i in 0..k {
                let c = fam.complement_idx(i);
                rec.case(
                    fam.meet_idx(i, c) == Some(fam.bottom()) && fam.join_idx(i, c) == fam.top(),
                    || w(i),
                );
                for j in 0..k {
                    let m = fam.meet_idx(i, j);
                    rec.case(m.is_some(), || w(i));
                    let upper = fam.members[fam.join_idx(i, j)];
                    let least = fam.members.iter().all(|g| {
                        !(fam.members[i].is_subset(g) && fam.members[j].is_subset(g))
                            || upper.is_subset(g)
                    });
                    rec.case(
                        fam.members[i].is_subset(&upper)
                            && fam.members[j].is_subset(&upper)
                            && least,
                        || w(i),
                    );
                    for l in 0..k {
                        let lhs = fam.meet_idx(i, fam.join_idx(j, l));
                        let rhs = match (fam.meet_idx(i, j), fam.meet_idx(i, l)) {
                            (Some(a), Some(b)) => Some(fam.join_idx(a, b)),
                            _ => None,
                        };
                        rec.case(lhs.is_some() && lhs == rhs, || w(i));
                    }
                }
            }
        }
    });

    r.run(B, "coannihilator-relative-pseudocomplement", |rec| {
        for f in filters {
            for &x in &sets {
                let gx = generated_filter(s, x);
                let best = filters
                    .iter()
                    .filter(|g| g.meet(&gx).is_subset(f))
                    .fold(s.empty(), |acc, g| acc.union(g.mask()));
                rec.case(coannihilator(s, f, x).mask() == best, || {
                    format!("F={} X={}", f_str(f), s.format_set(x))
                });
            }
        }
    });

    r.run(B, "coannihilator-family-exact", |rec| {
        if s.size() > FULL_SUBSET_LIMIT {
            return;
        }
        for f in filters {
            let fam = coann_family(s, f);
            let mut brute: Vec<SubsetMask> = SubsetMask::all_subsets(s.size())
                .map(|x| coannihilator(s, f, x).mask())
                .collect();
            brute.sort_by_key(|m| m.canonical_key());
            brute.dedup();
            let got: Vec<SubsetMask> = fam.members.iter().map(|g| g.mask()).collect();
            rec.case(got == brute, || format!("F={}", f_str(f)));
        }
    });
}

fn omega_battery(r: &mut Runner, an: &Analysis) {
    use Battery::Omega as B;
    let s = an.s;
    let filters = an.lat.filters();
    let sets: Vec<SubsetMask> = subject_sets(s, filters)
        .into_iter()
        .filter(|m| !m.is_empty())
        .collect();
    let join_closed: Vec<SubsetMask> = sets
        .iter()
        .copied()
        .filter(|&m| is_join_closed(s, m))
        .collect();
    let f_str = |f: &Filter| s.format_set(f.mask());
    let om = |f: &Filter, x: SubsetMask| omega(s, f, x).expect("nonempty");
    let families: Vec<OmegaFamily> = filters
        .iter()
        .map(|f| omega_family_from_ideals(s, f, &an.ideals))
        .collect();

    r.run(B, "omega-basic-laws", |rec| {
        for f in filters {
            let dense = dense_set(s, f).mask;
            for &x in &sets {
                let w = || format!("F={} X={}", f_str(f), s.format_set(x));
                let o = om(f, x);
                let direct = s
                    .elems()
                    .filter(|&a| x.iter().any(|y| f.contains(s.join(y, a))))
                    .fold(s.empty(), |m, a| m.with(a));
                rec.case(o == direct, w);
                rec.case(f.mask().is_subset(&o), w);
                rec.case(o.is_full() == !f.mask().is_disjoint(&x), w);
                rec.case((o == f.mask()) == x.is_subset(&dense), w);
                for g in filters.iter().filter(|g| f.is_subset(g)) {
                    rec.case(o.is_subset(&om(g, x)), w);
                }
                for &y in sets.iter().filter(|y| x.is_subset(y)) {
                    rec.case(o.is_subset(&om(f, y)), w);
                }
            }
        }
    });

    r.run(B, "dense-set-is-ideal", |rec| {
        for f in filters.iter().filter(|f| f.is_proper()) {
            let d = dense_set(s, f).mask;
            rec.case(is_ideal(s, d), || format!("F={}", f_str(f)));
        }
    });

    r.run(B, "omega-of-join-closed-is-filter", |rec| {
        for f in filters {
            for &c in &join_closed {
                rec.case(is_filter(s, om(f, c)), || {
                    format!("F={} C={}", f_str(f), s.format_set(c))
                });
            }
        }
    });

    r.run(B, "omega-properness", |rec| {
        for f in filters {
            for &c in &join_closed {
                let o = om(f, c);
                let a = f.mask().is_disjoint(&c);
                rec.case(a == !o.is_full() && a == o.is_disjoint(&c), || {
                    format!("F={} C={}", f_str(f), s.format_set(c))
                });
            }
        }
    });

    r.run(B, "omega-filters-distributive-lattice", |rec| {
        for (f, fam) in filters.iter().zip(&families) {
            let w = || format!("F={}", f_str(f));
            let k = fam.len();
            rec.case(fam.members.first() == Some(f), w);
            rec.case(
                fam.members.last().map(|m| m.mask().is_full()) == Some(true),
                w,
            );
            rec.case(fam.witnesses_directed, w);
            for i in 0..k {
                for j in 0..k {
                    let m = fam.members[i].meet(&fam.members[j]);
                    let mi = fam.index_of(&m);
                    rec.case(mi.is_some(), w);
                    let Some(jn) = fam.join_idx(i, j) else {
                        rec.case(false, w);
                        continue;
                    };
                    rec.case(fam.join_by_witnesses(s, i, j) == fam.members[jn].mask(), w);
                    for l in 0..k {
                        let Some(jl) = fam.join_idx(j, l) else {
                            continue;
                        };
                        let lhs = fam.members[i].meet(&fam.members[jl]);
                        let a = fam.index_of(&fam.members[i].meet(&fam.members[j]));
                        let b = fam.index_of(&fam.members[i].meet(&fam.members[l]));
                        let rhs = match (a, b) {
                            (Some(a), Some(b)) => fam.join_idx(a, b).map(|x| fam.members[x]),
                            _ => None,
                        };
                        rec.case(Some(lhs) == rhs, w);
                    }
                }
            }
        }
    });

    r.run(B, "omega-join-choice-independent", |rec| {
        for (f, fam) in filters.iter().zip(&families) {
            let by_member: Vec<Vec<usize>> = fam
                .members
                .iter()
                .map(|g| {
                    (0..an.ideals.len())
                        .filter(|&i| om(f, an.ideals[i].mask()) == g.mask())
                        .collect()
                })
                .collect();
            for i in 0..fam.len() {
                for j in 0..fam.len() {
                    let Some(k) = fam.join_idx(i, j) else {
                        continue;
                    };
                    for &a in &by_member[i] {
                        for &b in &by_member[j] {
                            let ij = ideal_join(s, &an.ideals[a], &an.ideals[b]);
                            rec.case(om(f, ij.mask()) == fam.members[k].mask(), || {
                                format!(
                                    "F={} I={} J={}",
                                    f_str(f),
                                    s.format_set(an.ideals[a].mask()),
                                    s.format_set(an.ideals[b].mask())
                                )
                            });
                        }
                    }
                }
            }
        }
    });

    r.run(B, "coannulets-bounded-sublattice", |rec| {
        for (f, fam) in filters.iter().zip(&families) {
            let c = |x| coannulet(s, f, x);
            rec.case(c(s.bot()) == *f && c(s.top()).mask().is_full(), || f_str(f));
            for x in s.elems() {
                rec.case(fam.contains(&c(x)), || {
                    format!("F={} x={}", f_str(f), s.name(x))
                });
                for y in s.elems() {
                    let j = fam.omega_join(&c(x), &c(y));
                    let w = || format!("F={} x={} y={}", f_str(f), s.name(x), s.name(y));
                    rec.case(j == Ok(c(s.join(x, y))), w);
                    if f.contains(s.join(x, y)) {
                        rec.case(j.map(|g| g.mask().is_full()) == Ok(true), w);
                    }
                }
            }
        }
    });

    r.run(B, "divisor-laws", |rec| {
        for f in filters {
            for h in filters.iter().filter(|h| h.is_proper()) {
                let d = divisor(s, f, h).expect("proper");
                let w = || format!("F={} H={}", f_str(f), f_str(h));
                let direct = s
                    .elems()
                    .filter(|&a| !coannulet(s, f, a).is_subset(h))
                    .fold(s.empty(), |m, a| m.with(a));
                rec.case(d == direct, w);
                rec.case(d.is_full() == !f.is_subset(h), w);
                if is_prime(s, h) {
                    rec.case(is_filter(s, d), w);
                }
            }
        }
    });

    r.run(B, "minimal-primes-fixed-by-divisor", |rec| {
        for f in filters.iter().filter(|f| f.is_proper()) {
            let df = divisor(s, f, f).expect("proper");
            for m in an.minimal_primes(f) {
                let d = divisor(s, f, &m).expect("prime");
                rec.case(d == m.mask() && m.mask().is_subset(&df), || {
                    format!("F={} m={}", f_str(f), f_str(&m))
                });
            }
        }
    });

    r.run(B, "minimal-prime-characterizations", |rec| {
        for f in filters.iter().filter(|f| f.is_proper()) {
            let mins = an.minimal_primes(f);
            for p in an.primes_above(f) {
                let a = mins.contains(&p);
                let b = divisor(s, f, &p).expect("prime") == p.mask();
                let c = s
                    .elems()
                    .all(|x| p.contains(x) != coannulet(s, f, x).is_subset(&p));
                rec.case(a == b && b == c, || {
                    format!(
                        "F={} P={} minimal={a} fixed={b} exactly-one={c}",
                        f_str(f),
                        f_str(&p)
                    )
                });
            }
        }
    });

    r.run(B, "minimal-primes-omega-comaximal", |rec| {
        for (f, fam) in filters.iter().zip(&families).filter(|(f, _)| f.is_proper()) {
            let mins = an.minimal_primes(f);
            for (i, a) in mins.iter().enumerate() {
                for b in &mins[i + 1..] {
                    let j = fam.omega_join(a, b);
                    rec.case(j.map(|g| g.mask().is_full()) == Ok(true), || {
                        format!("F={} m1={} m2={}", f_str(f), f_str(a), f_str(b))
                    });
                }
            }
        }
    });

    r.run(B, "minimal-primes-over-omega-and-divisor", |rec| {
        for f in filters.iter().filter(|f| f.is_proper()) {
            let mins = an.minimal_primes(f);
            for &c in &join_closed {
                let o = om(f, c);
                if o.is_full() {
                    continue;
                }
                let got = minimal_primes_containing(&an.primes, o);
                let want: Vec<Filter> = mins
                    .iter()
                    .copied()
                    .filter(|m| m.mask().is_disjoint(&c))
                    .collect();
                let w = || format!("F={} C={}", f_str(f), s.format_set(c));
                rec.case(got.iter().all(|m| m.mask().is_disjoint(&c)), w);
                rec.case(got == want, w);
                rec.case(o == meet_of(s, want.iter().copied()), w);
            }
            for p in an.primes_above(f) {
                let d = divisor(s, f, &p).expect("prime");
                let got = minimal_primes_containing(&an.primes, d);
                let want: Vec<Filter> = mins.iter().copied().filter(|m| m.is_subset(&p)).collect();
                let w = || format!("F={} P={}", f_str(f), f_str(&p));
                rec.case(got.iter().all(|m| m.is_subset(&p)), w);
                rec.case(got == want, w);
                rec.case(d == meet_of(s, want.iter().copied()), w);
            }
        }
    });
}

fn normality_battery(r: &mut Runner, an: &Analysis) {
    use Battery::Normality as B;
    let s = an.s;
    let proper: Vec<Filter> = an.lat.proper().collect();
    let f_str = |f: &Filter| s.format_set(f.mask());
    let mut printed_reading_differs = Vec::new();

    r.run(B, "n-prime-conditions", |rec| {
        for f in &proper {
            for n in 2..=an.primes.len() + 1 {
                match is_n_prime(an, f, n) {
                    Ok(v) => rec.verdict(&v),
                    Err(e) => rec.case(false, || format!("F={} n={n}: {e}", f_str(f))),
                }
            }
        }
    });

    r.run(B, "separating-elements", |rec| {
        for f in &proper {
            let mins = an.minimal_primes(f);
            let k = mins.len();
            if !(2..=12).contains(&k) {
                continue;
            }
            for bits in 0u32..1 << k {
                if bits.count_ones() < 2 {
                    continue;
                }
                let ms: Vec<Filter> = (0..k)
                    .filter(|i| bits >> i & 1 == 1)
                    .map(|i| mins[i])
                    .collect();
                let w = |e: &str| {
                    let names: Vec<String> = ms.iter().map(f_str).collect();
                    format!("F={} primes={}{e}", f_str(f), names.join(","))
                };
                match separating_elements(an, f, &ms) {
                    Ok(sw) => rec.case(sw.holds(), || w("")),
                    Err(e) => rec.case(false, || w(&format!(": {e}"))),
                }
            }
        }
    });

    r.run(B, "n-normality-conditions", |rec| {
        for f in &proper {
            let mins = an.minimal_primes(f);
            for n in 1..=mins.len() + 1 {
                match check_n_normality(an, f, n) {
                    Ok(v) => {
                        rec.verdict(&v);
                        let printed = v.diagnostics.first().map(|d| d.1);
                        if printed != v.value("(1)") {
                            printed_reading_differs.push(format!("F={} n={n}", f_str(f)));
                        }
                    }
                    Err(e) => rec.case(false, || format!("F={} n={n}: {e}", f_str(f))),
                }
            }
        }
    });

    r.run(B, "normality-index", |rec| {
        for f in &proper {
            match normality_report(an, f) {
                Ok(rep) => {
                    let ok = rep.index >= 1
                        && rep.per_prime.iter().all(|&(_, c)| c >= 1)
                        && rep.index == rep.per_prime.iter().map(|&(_, c)| c).max().unwrap_or(0);
                    rec.case(ok, || format!("F={} index={}", f_str(f), rep.index));
                }
                Err(e) => rec.case(false, || format!("F={}: {e}", f_str(f))),
            }
        }
    });

    r.run(B, "normality-conditions", |rec| {
        rec.verdict(&check_normality(an))
    });

    r.run(B, "omega-sublattice-conditions", |rec| {
        rec.verdict(&check_omega_sublattice(an))
    });

    r.run(B, "sigma-is-omega-filter-below", |rec| {
        let fam = omega_family_from_ideals(s, &Filter::trivial(s), &an.ideals);
        for f in an.lat.filters() {
            let sg = sigma(s, f);
            rec.case(fam.contains(&sg) && sg.is_subset(f), || {
                format!("F={} sigma={}", f_str(f), f_str(&sg))
            });
        }
    });

    r.run(B, "sigma-greatest-in-normal", |rec| {
        for f in an.lat.filters() {
            let out = check_sigma_greatest(an, f);
            rec.case(out != GreatestOmegaOutcome::Checked(false), || {
                format!("F={}", f_str(f))
            });
        }
    });

    if r.sel.includes(B) && !printed_reading_differs.is_empty() {
        r.report.findings.push(Finding {
            id: "n-normality-printed-reading",
            detail: format!(
                "joining n rather than n+1 minimal primes changes condition (1) at {}",
                printed_reading_differs.join("; ")
            ),
        });
    }
}
