//! Brute-force evidence for the classification at a fixed entry bound.
//!
//! Everything here is deliberately naive: elements are enumerated
//! lexicographically, orders come from repeated multiplication, and
//! conjugators from exhaustive search. The reports compare those results to
//! the classifier's output and to a table of canonical representatives that
//! can be swapped out to check the harness itself.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classify::{self, ElementClass};
use crate::matrix::{named, OrderResult, ProjectiveMatrix};
use crate::subgroups::{self, FiniteSubgroup, IsomorphismType, SubgroupClass};

/// Counterexamples kept per report; the full count is in `counts`.
const MAX_LISTED_COUNTEREXAMPLES: usize = 50;

/// Power-iteration horizon, enough to expose orders 4, 5 and 6.
pub const POWER_HORIZON: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("enumeration bound must be at least 1")]
pub struct ZeroBound;

/// Bound on `|a|, |b|, |c|, |d|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EnumerationBound(u32);

impl EnumerationBound {
    pub fn new(max_abs_entry: u32) -> Result<Self, ZeroBound> {
        if max_abs_entry == 0 {
            Err(ZeroBound)
        } else {
            Ok(EnumerationBound(max_abs_entry))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    fn min(self, cap: u32) -> Self {
        EnumerationBound(self.0.min(cap))
    }
}

impl fmt::Display for EnumerationBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Elements with leading entry `a` and all entries bounded, in lexicographic order.
pub fn elements_with_leading(
    bound: EnumerationBound,
    a: i64,
) -> impl Iterator<Item = ProjectiveMatrix> {
    let b_max = bound.0 as i64;
    (-b_max..=b_max).flat_map(move |b| {
        (-b_max..=b_max).flat_map(move |c| {
            (-b_max..=b_max).filter_map(move |d| {
                // Keep only quadruples that are already normalized, so each
                // projective class appears once.
                let m = ProjectiveMatrix::new(a, b, c, d).ok()?;
                (m.entries() == [a, b, c, d]).then_some(m)
            })
        })
    })
}

/// Every element with entries bounded by `bound`, each once, lexicographic in `(a, b, c, d)`.
pub fn enumerate_elements(bound: EnumerationBound) -> impl Iterator<Item = ProjectiveMatrix> {
    // Normalized elements never have a < 0.
    (0..=bound.0 as i64).flat_map(move |a| elements_with_leading(bound, a))
}

/// Torsion elements (identity included) with their closed-form order.
pub fn enumerate_torsion(
    bound: EnumerationBound,
) -> impl Iterator<Item = (ProjectiveMatrix, OrderResult)> {
    enumerate_elements(bound).filter_map(|m| {
        let order = m.order();
        order.is_finite().then_some((m, order))
    })
}

/// First `k` in `1..=horizon` with `m^k = 1`, by repeated multiplication only.
pub fn power_order(m: &ProjectiveMatrix, horizon: u32) -> Option<u32> {
    let mut acc = *m;
    for k in 1..=horizon {
        if acc.is_identity() {
            return Some(k);
        }
        acc = acc.mul(m).ok()?;
    }
    None
}

/// Conjugator candidates: the identity, then [`enumerate_elements`].
fn conjugator_candidates(bound: EnumerationBound) -> impl Iterator<Item = ProjectiveMatrix> {
    std::iter::once(named::IDENTITY).chain(enumerate_elements(bound).filter(|p| !p.is_identity()))
}

/// First `P` with `P·M·P⁻¹ = R`, trying the identity and then enumeration order.
///
/// `None` only means no conjugator has entries within `bound`.
pub fn brute_force_conjugator(
    m: &ProjectiveMatrix,
    r: &ProjectiveMatrix,
    bound: EnumerationBound,
) -> Option<ProjectiveMatrix> {
    conjugator_candidates(bound).find(|p| p.conjugate(m).as_ref() == Ok(r))
}

/// Image `P·M·P⁻¹` -> first conjugator `P` producing it, over all `P` within `bound`.
pub fn conjugation_map(
    m: &ProjectiveMatrix,
    bound: EnumerationBound,
) -> HashMap<ProjectiveMatrix, ProjectiveMatrix> {
    let mut out = HashMap::new();
    for p in conjugator_candidates(bound) {
        if let Ok(image) = p.conjugate(m) {
            out.entry(image).or_insert(p);
        }
    }
    out
}

/// Distinct finite subgroups generated by one or two nontrivial torsion
/// elements within `bound`, in ascending order.
pub fn enumerate_finite_subgroups(bound: EnumerationBound) -> Vec<FiniteSubgroup> {
    let gens: Vec<ProjectiveMatrix> = enumerate_torsion(bound)
        .map(|(m, _)| m)
        .filter(|m| !m.is_identity())
        .collect();
    let found: BTreeSet<FiniteSubgroup> = (0..gens.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let gens = &gens;
            std::iter::once(subgroups::closure(&[gens[i]]).ok())
                .chain(
                    (i + 1..gens.len()).map(move |j| subgroups::closure(&[gens[i], gens[j]]).ok()),
                )
                .flatten()
        })
        .collect();
    found.into_iter().collect()
}

/// Representatives the reports check against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalTables {
    pub element_reps: BTreeMap<ElementClass, ProjectiveMatrix>,
    pub groups: BTreeMap<SubgroupClass, BTreeSet<ProjectiveMatrix>>,
}

impl CanonicalTables {
    pub fn standard() -> Self {
        CanonicalTables {
            element_reps: ElementClass::ALL
                .into_iter()
                .map(|c| (c, c.canonical_rep()))
                .collect(),
            groups: SubgroupClass::ALL
                .into_iter()
                .map(|c| (c, c.canonical_group().elements().copied().collect()))
                .collect(),
        }
    }
}

impl Default for CanonicalTables {
    fn default() -> Self {
        Self::standard()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    /// Four classes of nontrivial torsion elements.
    ElementClasses,
    /// Finite subgroups are C2, C3, D2 or D3.
    IsomorphismTypes,
    /// Seven conjugacy classes of finite subgroups.
    SubgroupClasses,
    /// Uniqueness of the size-4 and size-6 groups through `-1/x` and `-1/(x+1)`.
    UniqueOverGroups,
}

impl TheoremId {
    pub fn title(self) -> &'static str {
        match self {
            TheoremId::ElementClasses => "torsion element classes",
            TheoremId::IsomorphismTypes => "finite subgroup isomorphism types",
            TheoremId::SubgroupClasses => "finite subgroup conjugacy classes",
            TheoremId::UniqueOverGroups => "size-4 and size-6 groups through canonical elements",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub counts: BTreeMap<String, u64>,
    pub pass: bool,
    pub counterexamples: Vec<String>,
    pub notes: Vec<String>,
    pub wall_time_secs: f64,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:?}: {} ({:.3}s)",
            self.theorem,
            self.theorem.title(),
            self.wall_time_secs
        )?;
        for (k, v) in &self.counts {
            write!(f, "\n  {k}: {v}")?;
        }
        for note in &self.notes {
            write!(f, "\n  note: {note}")?;
        }
        for ce in &self.counterexamples {
            write!(f, "\n  counterexample: {ce}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Default)]
struct Tally {
    counts: BTreeMap<String, u64>,
    counterexamples: Vec<String>,
}

impl Tally {
    fn bump(&mut self, key: impl Into<String>) {
        *self.counts.entry(key.into()).or_default() += 1;
    }

    fn fail(&mut self, msg: String) {
        self.counterexamples.push(msg);
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        self.counterexamples.extend(other.counterexamples);
        self
    }

    fn finish(
        mut self,
        theorem: TheoremId,
        notes: Vec<String>,
        start: Instant,
    ) -> VerificationReport {
        self.counterexamples.sort();
        let total = self.counterexamples.len() as u64;
        if total > 0 {
            self.counts.insert("counterexamples".into(), total);
        }
        self.counterexamples.truncate(MAX_LISTED_COUNTEREXAMPLES);
        VerificationReport {
            theorem,
            counts: self.counts,
            pass: total == 0,
            counterexamples: self.counterexamples,
            notes,
            wall_time_secs: start.elapsed().as_secs_f64(),
        }
    }
}

fn scan<T, F>(items: &[T], parallel: bool, check: F) -> Tally
where
    T: Sync,
    F: Fn(&T, &mut Tally) + Sync,
{
    if parallel {
        items
            .par_iter()
            .fold(Tally::default, |mut t, item| {
                check(item, &mut t);
                t
            })
            .reduce(Tally::default, Tally::merge)
    } else {
        let mut t = Tally::default();
        for item in items {
            check(item, &mut t);
        }
        t
    }
}

/// Bounds for one verification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Element scans (classification, orders).
    pub element_bound: EnumerationBound,
    /// Entries of subgroup generators.
    pub subgroup_bound: EnumerationBound,
    /// Elements paired up for the brute-force conjugator cross-check.
    pub pair_bound: EnumerationBound,
    /// Entries of brute-force conjugators.
    pub conjugator_bound: EnumerationBound,
    pub parallel: bool,
}

impl VerifyConfig {
    /// Element scans at `bound`; subgroup generators capped at 2, paired
    /// elements at 3, conjugators at 10.
    pub fn from_bound(bound: EnumerationBound) -> Self {
        VerifyConfig {
            element_bound: bound,
            subgroup_bound: bound.min(2),
            pair_bound: bound.min(3),
            conjugator_bound: EnumerationBound(10),
            parallel: true,
        }
    }
}

pub fn verify_all(bound: EnumerationBound) -> Vec<VerificationReport> {
    verify_all_with(
        &VerifyConfig::from_bound(bound),
        &CanonicalTables::standard(),
    )
}

pub fn verify_all_with(config: &VerifyConfig, tables: &CanonicalTables) -> Vec<VerificationReport> {
    let subgroups = enumerate_finite_subgroups(config.subgroup_bound);
    vec![
        verify_element_classes(config, tables),
        verify_isomorphism_types(config, &subgroups),
        verify_subgroup_classes(config, tables, &subgroups),
        verify_unique_over_groups(tables),
    ]
}

pub fn verify_element_classes(
    config: &VerifyConfig,
    tables: &CanonicalTables,
) -> VerificationReport {
    let start = Instant::now();
    let torsion: Vec<ProjectiveMatrix> = enumerate_torsion(config.element_bound)
        .map(|(m, _)| m)
        .collect();

    let mut tally = scan(&torsion, config.parallel, |m, t| {
        let class = match classify::classify_element(m) {
            Ok(c) => c,
            Err(e) => return t.fail(format!("{m}: {e}")),
        };
        t.bump(format!("class_{class}"));
        if class == ElementClass::Identity {
            return;
        }
        let Some(expected) = tables.element_reps.get(&class) else {
            return t.fail(format!("{m}: no table entry for {class}"));
        };
        match classify::conjugator_to_canonical(m) {
            Ok(w) if w.conjugator().conjugate(m).as_ref() == Ok(expected) => {
                t.bump("witnesses_verified")
            }
            Ok(w) => t.fail(format!(
                "{m}: witness {} does not reach table representative {expected}",
                w.conjugator()
            )),
            Err(e) => t.fail(format!("{m}: {e}")),
        }
    });

    for (class, rep) in &tables.element_reps {
        match classify::classify_element(rep) {
            Ok(c) if c == *class => {}
            Ok(c) => tally.fail(format!(
                "table representative {rep} of {class} classifies as {c}"
            )),
            Err(e) => tally.fail(format!("table representative {rep} of {class}: {e}")),
        }
    }

    // Brute-force cross-check on small pairs.
    let small: Vec<(ProjectiveMatrix, ElementClass)> = enumerate_torsion(config.pair_bound)
        .filter_map(|(m, _)| Some((m, classify::classify_element(&m).ok()?)))
        .collect();
    let pairs = scan(&small, config.parallel, |(m, class), t| {
        let images = conjugation_map(m, config.conjugator_bound);
        for (r, r_class) in &small {
            match images.get(r) {
                Some(p) if r_class == class => {
                    debug_assert_eq!(p.conjugate(m).as_ref(), Ok(r));
                    t.bump("pairs_conjugator_found");
                }
                Some(p) => t.fail(format!(
                    "{p} conjugates {m} ({class}) to {r} ({r_class}) across classes"
                )),
                None if r_class == class => t.bump("pairs_same_class_not_found_within_bound"),
                None => t.bump("pairs_cross_class_none"),
            }
        }
    });
    tally = tally.merge(pairs);
    tally
        .counts
        .insert("torsion_elements".into(), torsion.len() as u64);

    let notes = vec![format!(
        "element bound {}, pair bound {}, conjugator bound {}; a pair without a conjugator \
         within the bound is not evidence of non-conjugacy",
        config.element_bound, config.pair_bound, config.conjugator_bound
    )];
    tally.finish(TheoremId::ElementClasses, notes, start)
}

pub fn verify_isomorphism_types(
    config: &VerifyConfig,
    subgroups: &[FiniteSubgroup],
) -> VerificationReport {
    let start = Instant::now();
    let elements: Vec<ProjectiveMatrix> = enumerate_elements(config.element_bound).collect();
    let mut tally = scan(&elements, config.parallel, |m, t| {
        t.bump("elements");
        let iterated = power_order(m, POWER_HORIZON);
        match iterated {
            Some(k) => t.bump(format!("power_order_{k}")),
            None => t.bump("power_order_none_within_6"),
        }
        if let Some(k @ 4..=6) = iterated {
            t.fail(format!("{m} has order {k}"));
        }
        let closed = m.order();
        let agrees = match (iterated, closed) {
            (Some(k), OrderResult::Finite(n)) => k == n,
            (None, OrderResult::Infinite) => true,
            _ => false,
        };
        if !agrees {
            t.fail(format!(
                "{m}: power iteration {iterated:?} vs closed form {closed}"
            ));
        }
    });
    let groups = scan(
        subgroups,
        config.parallel,
        |g, t| match subgroups::isomorphism_type(g) {
            Ok(IsomorphismType::C1) => {
                t.fail(format!("{g}: trivial group from nontrivial generators"))
            }
            Ok(ty) => t.bump(format!("type_{ty}")),
            Err(e) => t.fail(format!("{g}: {e}")),
        },
    );
    tally = tally.merge(groups);
    let notes = vec![format!(
        "orders by repeated multiplication up to {POWER_HORIZON} over entries <= {}; subgroups \
         from generators with entries <= {}",
        config.element_bound, config.subgroup_bound
    )];
    tally.finish(TheoremId::IsomorphismTypes, notes, start)
}

pub fn verify_subgroup_classes(
    config: &VerifyConfig,
    tables: &CanonicalTables,
    subgroups: &[FiniteSubgroup],
) -> VerificationReport {
    let start = Instant::now();
    let mut tally = scan(subgroups, config.parallel, |g, t| {
        t.bump(format!("size_{}", g.len()));
        if !matches!(g.len(), 2 | 3 | 4 | 6) {
            t.fail(format!("{g}: size {}", g.len()));
        }
        let w = match subgroups::classify_subgroup(g) {
            Ok(w) => w,
            Err(e) => return t.fail(format!("{g}: {e}")),
        };
        t.bump(format!("class_{}", w.class()));
        let Some(expected) = tables.groups.get(&w.class()) else {
            return t.fail(format!("{g}: no table entry for {}", w.class()));
        };
        match g.conjugated_by(&w.conjugator()) {
            Ok(image) if image.elements().copied().collect::<BTreeSet<_>>() == *expected => {
                t.bump("witnesses_verified")
            }
            Ok(image) => t.fail(format!(
                "{g}: witness {} gives {image}, table has {:?}",
                w.conjugator(),
                expected
            )),
            Err(e) => t.fail(format!("{g}: {e}")),
        }
    });
    for (class, elements) in &tables.groups {
        match FiniteSubgroup::from_elements(elements.iter().copied()) {
            Ok(g) => match subgroups::classify_subgroup(&g) {
                Ok(w) if w.class() == *class => {}
                Ok(w) => tally.fail(format!("table group {class} classifies as {}", w.class())),
                Err(e) => tally.fail(format!("table group {class}: {e}")),
            },
            Err(e) => tally.fail(format!("table group {class}: {e}")),
        }
    }
    tally
        .counts
        .insert("subgroups".into(), subgroups.len() as u64);
    let notes = vec![format!(
        "subgroups generated by one or two torsion elements with entries <= {}",
        config.subgroup_bound
    )];
    tally.finish(TheoremId::SubgroupClasses, notes, start)
}

pub fn verify_unique_over_groups(tables: &CanonicalTables) -> VerificationReport {
    let start = Instant::now();
    let mut t = Tally::default();
    let mut notes = Vec::new();

    let empty = BTreeSet::new();
    let g4 = tables.groups.get(&SubgroupClass::G4).unwrap_or(&empty);
    let g6 = tables.groups.get(&SubgroupClass::G6).unwrap_or(&empty);

    let s4 = subgroups::uniqueness_scan_size4();
    let expected4: BTreeSet<_> = g4
        .iter()
        .copied()
        .filter(|m| !m.is_identity() && *m != named::NEG_INV)
        .collect();
    let found4: BTreeSet<_> = s4.solutions.iter().copied().collect();
    t.counts
        .insert("size4_solutions".into(), found4.len() as u64);
    if found4 != expected4 {
        t.fail(format!(
            "size-4 scan found {found4:?}, expected {expected4:?}"
        ));
    }
    for p in &s4.route_disagreements {
        t.fail(format!(
            "size-4 scan: product and entrywise tests disagree on {p}"
        ));
    }

    let s6 = subgroups::uniqueness_scan_size6();
    t.counts
        .insert("size6_solutions".into(), s6.plus_one.len() as u64);
    t.counts.insert(
        "size6_minus_one_solutions".into(),
        s6.minus_one.len() as u64,
    );
    if s6.plus_one.len() != 3 {
        t.fail(format!(
            "size-6 scan found {} involutions, expected 3",
            s6.plus_one.len()
        ));
    }
    for required in [named::NEG_X_MINUS_1, named::INV] {
        if !s6.plus_one.contains(&required) {
            t.fail(format!("size-6 scan is missing {required}"));
        }
    }
    for p in &s6.plus_one {
        if p.order() != OrderResult::Finite(2) {
            t.fail(format!("size-6 solution {p} is not an involution"));
        }
        if !g6.contains(p) {
            t.fail(format!("size-6 solution {p} is not in the G6 table"));
        }
    }
    if !s6.minus_one.is_empty() {
        t.fail(format!("a²+ac+c² = -1 has solutions {:?}", s6.minus_one));
    }
    if s6.plus_sign_solutions != [(0, 0, 0)] {
        t.fail(format!(
            "'+' sign branch has solutions {:?}",
            s6.plus_sign_solutions
        ));
    }
    if s6.direct_solutions != s6.plus_one {
        t.fail(format!(
            "direct involution scan {:?} disagrees with b = a + c scan {:?}",
            s6.direct_solutions, s6.plus_one
        ));
    }
    if let Some(d) = &s6.discrepancy {
        notes.push(format!("discrepancy: {d}"));
    }
    t.finish(TheoremId::UniqueOverGroups, notes, start)
}
