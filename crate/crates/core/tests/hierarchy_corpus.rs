//! Randomized mutual-oracle checks across the verifiers: the implication
//! hierarchy, monotonicity, witness replay, and agreement of the restricted
//! SSM enumeration with the unrestricted full-subset oracle.
//!
//! The full-scale run (2000 matrices) lives in the CLI acceptance suite;
//! this one covers the same ground at a quicker scale for development.

mod common;

use common::{corpus_matrix, rng, subsets_upto};
use gtcodes_core::bitmatrix::boolean_sum;
use gtcodes_core::properties::{
    check_hierarchy, is_disjunctive, is_disjunctive_upto, is_ssm, is_uffd, is_union_free,
};
use gtcodes_core::CodeMatrix;

/// Unrestricted SSM oracle: enumerates every subset of [n] as a candidate
/// consistent set, with no covered-column restriction.
fn naive_ssm(c: &CodeMatrix, d: usize) -> bool {
    let n = c.n();
    if d > n {
        return true;
    }
    let all_subsets: Vec<Vec<usize>> = (0u64..(1 << n))
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| i + 1).collect())
        .collect();
    for d0 in subsets_upto(n, d) {
        if d0.len() != d {
            continue;
        }
        let r = boolean_sum(d0.iter().map(|&i| c.column(i).unwrap()), c.t()).unwrap();
        let mut inter: Option<Vec<usize>> = None;
        for dp in &all_subsets {
            let sum = boolean_sum(dp.iter().map(|&i| c.column(i).unwrap()), c.t()).unwrap();
            if sum == r {
                inter = Some(match inter {
                    None => dp.clone(),
                    Some(prev) => prev.into_iter().filter(|i| dp.contains(i)).collect(),
                });
            }
        }
        if inter.expect("d0 is consistent with itself") != d0 {
            return false;
        }
    }
    true
}

#[test]
fn hierarchy_has_zero_violations_on_corpus() {
    let mut rng = rng(0x41AE);
    for _ in 0..300 {
        let c = corpus_matrix(&mut rng, 6..=12, 4..=10);
        for d in 1..=3 {
            let report = check_hierarchy(&c, d).unwrap();
            assert!(
                report.violations.is_empty(),
                "implication violated on {c:?} at d={d}: {}",
                report.violations[0]
            );
        }
    }
}

#[test]
fn restricted_ssm_agrees_with_full_subset_oracle() {
    let mut rng = rng(0x55A);
    for _ in 0..120 {
        let c = corpus_matrix(&mut rng, 6..=10, 4..=9);
        for d in 1..=2 {
            assert_eq!(is_ssm(&c, d).unwrap().holds, naive_ssm(&c, d));
        }
    }
}

#[test]
fn union_free_and_disjunctive_are_monotone_in_d() {
    let mut rng = rng(0x303);
    let mut nontrivial = 0;
    for _ in 0..200 {
        let c = corpus_matrix(&mut rng, 8..=12, 4..=7);
        if is_union_free(&c, 3).holds {
            nontrivial += 1;
            for d in 1..=2 {
                assert!(is_union_free(&c, d).holds);
            }
        }
        if is_disjunctive(&c, 3).holds && !is_disjunctive(&c, 3).vacuous {
            assert!(is_disjunctive_upto(&c, 3).holds);
        }
    }
    assert!(nontrivial >= 5, "too few union-free instances: {nontrivial}");
}

#[test]
fn every_failing_report_replays_its_witness() {
    let mut rng = rng(0x717);
    let mut failures = 0;
    for _ in 0..150 {
        let c = corpus_matrix(&mut rng, 6..=10, 4..=8);
        for d in 1..=2 {
            for report in [
                is_union_free(&c, d),
                is_disjunctive(&c, d),
                is_ssm(&c, d).unwrap(),
                is_uffd(&c, d),
            ] {
                if !report.holds {
                    failures += 1;
                    let witness = report.witness.expect("failing report carries a witness");
                    assert!(witness.reproduces(&c, d), "witness did not replay on {c:?} d={d}");
                }
            }
        }
    }
    assert!(failures >= 100, "corpus produced too few failures: {failures}");
}
