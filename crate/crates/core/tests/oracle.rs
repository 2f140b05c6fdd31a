mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{is_plus_minus_identity, raw_mul};
use pgl2z::classify::{classify_element, ElementClass};
use pgl2z::matrix::named;
use pgl2z::oracle::*;
use pgl2z::subgroups::SubgroupClass;
use pgl2z::ProjectiveMatrix;

fn b(n: u32) -> EnumerationBound {
    EnumerationBound::new(n).unwrap()
}

/// Projective classes `{q, -q}` with det ±1, found without the library.
/// Each class is keyed by the larger of `q` and `-q` in array order.
fn raw_classes(bound: i64) -> BTreeSet<[i64; 4]> {
    let r = -bound..=bound;
    let mut out = BTreeSet::new();
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    if (a * d - b * c).abs() == 1 {
                        let q = [a, b, c, d];
                        let n = q.map(|e| -e);
                        out.insert(q.max(n));
                    }
                }
            }
        }
    }
    out
}

/// First `k <= 6` with `q^k = ±I`, by raw multiplication.
fn raw_order(q: [i64; 4]) -> Option<u32> {
    let mut acc = q;
    for k in 1..=6 {
        if is_plus_minus_identity(acc) {
            return Some(k);
        }
        acc = raw_mul(acc, q);
    }
    None
}

#[test]
fn element_counts_match_raw_enumeration() {
    for n in 1..=4u32 {
        let raw = raw_classes(n as i64);
        let lib: Vec<ProjectiveMatrix> = enumerate_elements(b(n)).collect();
        assert_eq!(lib.len(), raw.len(), "bound {n}");
        let lib_set: BTreeSet<_> = lib.iter().collect();
        assert_eq!(lib_set.len(), lib.len(), "duplicates at bound {n}");
    }
}

#[test]
fn pinned_element_count_bound_one() {
    // Frozen from the raw enumeration above.
    assert_eq!(raw_classes(1).len(), 20);
    assert_eq!(enumerate_elements(b(1)).count(), 20);
}

#[test]
fn enumerated_elements_are_fixed_points_of_normalize() {
    for m in enumerate_elements(b(3)) {
        let [a, bb, c, d] = m.entries();
        assert_eq!(ProjectiveMatrix::new(a, bb, c, d).unwrap(), m);
        assert!(m.max_abs_entry() <= 3);
    }
}

#[test]
fn enumeration_closed_under_inverse() {
    let set: BTreeSet<_> = enumerate_elements(b(3)).collect();
    for m in &set {
        assert!(set.contains(&m.inverse().unwrap()), "{m}");
    }
}

#[test]
fn torsion_orders_match_raw_power_iteration() {
    let raw: BTreeMap<u32, usize> =
        raw_classes(10)
            .into_iter()
            .filter_map(raw_order)
            .fold(BTreeMap::new(), |mut acc, k| {
                *acc.entry(k).or_default() += 1;
                acc
            });
    assert!(raw.keys().all(|k| *k <= 3), "{raw:?}");
    let lib: BTreeMap<u32, usize> =
        enumerate_torsion(b(10)).fold(BTreeMap::new(), |mut acc, (_, o)| {
            let pgl2z::OrderResult::Finite(k) = o else {
                panic!()
            };
            *acc.entry(k).or_default() += 1;
            acc
        });
    assert_eq!(lib, raw);
    for m in enumerate_elements(b(10)) {
        let expect = match m.order() {
            pgl2z::OrderResult::Finite(k) => Some(k),
            pgl2z::OrderResult::Infinite => None,
        };
        assert_eq!(power_order(&m, POWER_HORIZON), expect, "{m}");
    }
}

#[test]
fn pinned_torsion_class_counts_bound_two() {
    let mut counts = BTreeMap::new();
    for (m, _) in enumerate_torsion(b(2)) {
        *counts.entry(classify_element(&m).unwrap()).or_insert(0) += 1;
    }
    let expected = BTreeMap::from([
        (ElementClass::Identity, 1),
        (ElementClass::RefNeg, 5),
        (ElementClass::RefInv, 5),
        (ElementClass::RotTwo, 5),
        (ElementClass::RotThree, 4),
    ]);
    assert_eq!(counts, expected);
    // Raw cross-check of the class split: det and mod-2 image by hand.
    let mut raw = BTreeMap::new();
    for q in raw_classes(2) {
        let Some(k) = raw_order(q) else { continue };
        let det = q[0] * q[3] - q[1] * q[2];
        let mod2_id = q.map(|e| e.rem_euclid(2)) == [1, 0, 0, 1];
        let key = match (k, det) {
            (1, _) => "identity",
            (3, _) => "order3",
            (2, 1) => "rot2",
            (2, _) if mod2_id => "ref_neg",
            _ => "ref_inv",
        };
        *raw.entry(key).or_insert(0) += 1;
    }
    assert_eq!(
        raw,
        BTreeMap::from([
            ("identity", 1),
            ("order3", 4),
            ("ref_inv", 5),
            ("ref_neg", 5),
            ("rot2", 5)
        ])
    );
}

#[test]
fn pinned_subgroup_counts() {
    assert_eq!(enumerate_finite_subgroups(b(1)).len(), 12);
    assert_eq!(enumerate_finite_subgroups(b(2)).len(), 24);
}

#[test]
fn bound_one_subgroups_include_canonical_ones() {
    let groups = enumerate_finite_subgroups(b(1));
    for class in &SubgroupClass::ALL[1..] {
        assert!(groups.contains(&class.canonical_group()), "{class}");
    }
    assert!(groups.iter().all(|g| matches!(g.len(), 2 | 3 | 4 | 6)));
}

#[test]
fn brute_force_conjugator_examples() {
    assert_eq!(
        brute_force_conjugator(&named::NEG_INV, &named::NEG_INV, b(1)),
        Some(named::IDENTITY)
    );
    let m = ProjectiveMatrix::new(1, -2, 1, -1).unwrap();
    let p = brute_force_conjugator(&m, &named::NEG_INV, b(3)).expect("small witness exists");
    assert_eq!(p.conjugate(&m).unwrap(), named::NEG_INV);
    assert_eq!(brute_force_conjugator(&named::INV, &named::NEG, b(5)), None);
}

#[test]
fn brute_force_agrees_with_classifier_both_ways() {
    let small: Vec<_> = enumerate_torsion(b(3)).map(|(m, _)| m).collect();
    for m in &small {
        let images = conjugation_map(m, b(10));
        for r in &small {
            let same = classify_element(m).unwrap() == classify_element(r).unwrap();
            assert_eq!(images.contains_key(r), same, "{m} -> {r}");
        }
    }
}

#[test]
fn verify_all_passes_at_bound_one() {
    let reports = verify_all(b(1));
    assert_eq!(reports.len(), 4);
    for r in &reports {
        assert!(r.pass, "{r}");
        assert!(r.counterexamples.is_empty());
    }
    let six = &reports[3];
    assert!(six.notes.iter().any(|n| n.contains("discrepancy")));
}

#[test]
fn coverage_is_monotone_in_bound() {
    let small = verify_all(b(1));
    let large = verify_all(b(2));
    for (s, l) in small.iter().zip(&large) {
        assert_eq!(s.theorem, l.theorem);
        assert!(l.pass || !s.pass);
        for (k, v) in &s.counts {
            assert!(
                l.counts.get(k).copied().unwrap_or(0) >= *v,
                "{:?} {k}",
                s.theorem
            );
        }
    }
}

#[test]
fn sequential_and_parallel_reports_agree() {
    let tables = CanonicalTables::standard();
    let mut cfg = VerifyConfig::from_bound(b(3));
    let par = verify_all_with(&cfg, &tables);
    cfg.parallel = false;
    let seq = verify_all_with(&cfg, &tables);
    for (p, s) in par.iter().zip(&seq) {
        assert_eq!(
            (p.theorem, &p.counts, p.pass),
            (s.theorem, &s.counts, s.pass)
        );
    }
}

fn run_tampered(tables: &CanonicalTables) -> Vec<VerificationReport> {
    verify_all_with(&VerifyConfig::from_bound(b(1)), tables)
}

#[test]
fn tampered_element_table_fails_element_report() {
    let mut tables = CanonicalTables::standard();
    // -1/(x+1) -> 1/(1-x): flip the sign of d.
    tables.element_reps.insert(
        ElementClass::RotThree,
        ProjectiveMatrix::new(0, 1, -1, 1).unwrap(),
    );
    let reports = run_tampered(&tables);
    assert!(!reports[0].pass);
    assert!(!reports[0].counterexamples.is_empty());
    assert!(reports[1].pass && reports[2].pass && reports[3].pass);
}

#[test]
fn tampered_group_table_fails_group_reports() {
    let mut tables = CanonicalTables::standard();
    // Flip b in -x, giving -x-1.
    let g4 = tables.groups.get_mut(&SubgroupClass::G4).unwrap();
    assert!(g4.remove(&named::NEG));
    g4.insert(ProjectiveMatrix::new(1, 1, 0, -1).unwrap());
    let reports = run_tampered(&tables);
    assert!(reports[0].pass && reports[1].pass);
    assert!(!reports[2].pass && !reports[2].counterexamples.is_empty());
    assert!(!reports[3].pass && !reports[3].counterexamples.is_empty());
}

#[test]
fn reports_serialize() {
    let reports = verify_all(b(1));
    let json = serde_json::to_value(&reports).unwrap();
    let first = &json[0];
    assert_eq!(first["theorem"], "element_classes");
    assert_eq!(first["pass"], true);
    assert!(first["counts"].is_object());
    assert!(first["wall_time_secs"].is_number());
}
