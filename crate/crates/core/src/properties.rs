//! Exhaustive verifiers for the four code families (union-free, disjunctive,
//! strongly separable, union-free with fast decoding) and for the hierarchy
//! of implications between them.
//!
//! These are oracle-grade reference checkers: they enumerate defective sets
//! directly, so they are exponential in `d` and meant for desk-scale
//! instances. Their job is to validate the fast decoders and the randomized
//! construction, not to run in production pipelines. Every failing report
//! carries a witness that can be replayed against the matrix to reproduce
//! the violation.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;

use crate::bitmatrix::{BitVector, CodeMatrix, DefectiveSet};
use crate::error::Error;

/// Cap on the per-set subset enumeration inside [`is_ssm`].
pub const DEFAULT_SSM_SUBSET_BUDGET: u64 = 1 << 24;

/// The four verifiable code families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeProperty {
    UnionFree,
    Disjunctive,
    Ssm,
    Uffd,
}

impl fmt::Display for CodeProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeProperty::UnionFree => "union-free",
            CodeProperty::Disjunctive => "disjunctive",
            CodeProperty::Ssm => "ssm",
            CodeProperty::Uffd => "uffd",
        })
    }
}

/// A replayable counterexample for a failed property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Two distinct sets of size <= d with identical outcome vectors.
    OutcomeCollision {
        first: DefectiveSet,
        second: DefectiveSet,
    },
    /// A size-d set whose outcome covers an outside column.
    CoveredColumn {
        defectives: DefectiveSet,
        column: usize,
    },
    /// A size-d set whose consistent-subset intersection is not the set itself.
    SsmIntersection {
        d0: DefectiveSet,
        intersection: DefectiveSet,
    },
    /// A set of size <= d whose outcome covers more than n^(1/d) columns.
    OversizedCover {
        defectives: DefectiveSet,
        covered: Vec<usize>,
    },
}

impl Witness {
    /// Replay the witness against a matrix: `true` iff it still exhibits the
    /// violation it was reported for.
    pub fn reproduces(&self, c: &CodeMatrix, d: usize) -> bool {
        match self {
            Witness::OutcomeCollision { first, second } => {
                first != second
                    && first.len() <= d
                    && second.len() <= d
                    && match (c.outcome(first), c.outcome(second)) {
                        (Ok(a), Ok(b)) => a == b,
                        _ => false,
                    }
            }
            Witness::CoveredColumn { defectives, column } => {
                if defectives.contains(*column) || defectives.len() > d {
                    return false;
                }
                match (c.outcome(defectives), c.column(*column)) {
                    (Ok(r), Ok(col)) => r.covers_fast(col),
                    _ => false,
                }
            }
            Witness::SsmIntersection { d0, intersection } => {
                if d0.len() != d {
                    return false;
                }
                match ssm_intersection(c, d0.indices(), DEFAULT_SSM_SUBSET_BUDGET) {
                    Ok(inter) => inter == intersection.indices() && inter != d0.indices(),
                    Err(_) => false,
                }
            }
            Witness::OversizedCover { defectives, covered } => {
                if defectives.len() > d {
                    return false;
                }
                match c.outcome(defectives).and_then(|r| c.covered_columns(&r)) {
                    Ok(actual) => actual == *covered && !count_within_root(covered.len(), d, c.n()),
                    Err(_) => false,
                }
            }
        }
    }
}

/// Result of verifying one code-family property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: CodeProperty,
    pub d: usize,
    pub holds: bool,
    /// Set when the property holds only because no qualifying set exists
    /// (e.g. disjunctive with d >= n has no outside column to cover).
    pub vacuous: bool,
    pub witness: Option<Witness>,
}

impl PropertyReport {
    fn holds(property: CodeProperty, d: usize) -> Self {
        Self { property, d, holds: true, vacuous: false, witness: None }
    }

    fn vacuous(property: CodeProperty, d: usize) -> Self {
        Self { property, d, holds: true, vacuous: true, witness: None }
    }

    fn fails(property: CodeProperty, d: usize, witness: Witness) -> Self {
        Self { property, d, holds: false, vacuous: false, witness: Some(witness) }
    }
}

/// Exact integer form of `count <= n^(1/d)`: compares `count^d <= n` to
/// avoid floating-point boundary errors on the irrational threshold.
fn count_within_root(count: usize, d: usize, n: usize) -> bool {
    if count <= 1 {
        return true;
    }
    match (count as u128).checked_pow(d as u32) {
        Some(p) => p <= n as u128,
        None => false,
    }
}

/// Is `C` a d-union-free code: do all Boolean sums of at most `d` columns
/// differ pairwise? The enumeration includes the empty set (its outcome is
/// the all-zero vector), so a code with an achievable all-zero outcome from
/// a non-empty set is not union-free.
pub fn is_union_free(c: &CodeMatrix, d: usize) -> PropertyReport {
    assert!(d >= 1, "d must be at least 1");
    match find_outcome_collision(c, d) {
        Some((first, second)) => PropertyReport::fails(
            CodeProperty::UnionFree,
            d,
            Witness::OutcomeCollision { first, second },
        ),
        None => PropertyReport::holds(CodeProperty::UnionFree, d),
    }
}

/// First pair of distinct sets of size <= d with equal outcomes, in
/// (cardinality, lexicographic) enumeration order.
fn find_outcome_collision(c: &CodeMatrix, d: usize) -> Option<(DefectiveSet, DefectiveSet)> {
    let n = c.n();
    let mut seen: HashMap<BitVector, DefectiveSet> = HashMap::new();
    for k in 0..=d.min(n) {
        for combo in (1..=n).combinations(k) {
            let r = c.outcome_of(&combo);
            let set = DefectiveSet::new(combo);
            if let Some(prev) = seen.get(&r) {
                return Some((prev.clone(), set));
            }
            seen.insert(r, set);
        }
    }
    None
}

/// Is `C` a d-disjunctive (cover-free) code: no Boolean sum of exactly `d`
/// columns covers a column outside the set.
///
/// For d >= n there is no outside column, so the property holds vacuously;
/// the report is flagged rather than silently accepted.
pub fn is_disjunctive(c: &CodeMatrix, d: usize) -> PropertyReport {
    assert!(d >= 1, "d must be at least 1");
    let n = c.n();
    if d >= n {
        return PropertyReport::vacuous(CodeProperty::Disjunctive, d);
    }
    for combo in (1..=n).combinations(d) {
        let r = c.outcome_of(&combo);
        for j in 1..=n {
            if combo.binary_search(&j).is_ok() {
                continue;
            }
            if r.covers_fast(c.col(j)) {
                return PropertyReport::fails(
                    CodeProperty::Disjunctive,
                    d,
                    Witness::CoveredColumn {
                        defectives: DefectiveSet::new(combo),
                        column: j,
                    },
                );
            }
        }
    }
    PropertyReport::holds(CodeProperty::Disjunctive, d)
}

/// Monotone convenience variant: d'-disjunctive for every d' in 1..=d.
pub fn is_disjunctive_upto(c: &CodeMatrix, d: usize) -> PropertyReport {
    assert!(d >= 1, "d must be at least 1");
    let mut vacuous = false;
    for k in 1..=d {
        let report = is_disjunctive(c, k);
        if !report.holds {
            return PropertyReport { d, ..report };
        }
        vacuous |= report.vacuous;
    }
    PropertyReport { vacuous, ..PropertyReport::holds(CodeProperty::Disjunctive, d) }
}

/// Is `C` a strongly d-separable matrix: for every set `D0` of size exactly
/// `d`, the intersection of all column subsets producing the same outcome
/// equals `D0`.
///
/// Any consistent subset can only contain columns covered by the outcome,
/// so the enumeration is restricted to subsets of the covered set; this is
/// exact, not a heuristic. The per-set enumeration is capped by
/// [`DEFAULT_SSM_SUBSET_BUDGET`].
pub fn is_ssm(c: &CodeMatrix, d: usize) -> Result<PropertyReport, Error> {
    is_ssm_with_budget(c, d, DEFAULT_SSM_SUBSET_BUDGET)
}

/// [`is_ssm`] with an explicit subset budget.
pub fn is_ssm_with_budget(c: &CodeMatrix, d: usize, budget: u64) -> Result<PropertyReport, Error> {
    assert!(d >= 1, "d must be at least 1");
    let n = c.n();
    if d > n {
        return Ok(PropertyReport::vacuous(CodeProperty::Ssm, d));
    }
    for combo in (1..=n).combinations(d) {
        let inter = ssm_intersection(c, &combo, budget)?;
        if inter != combo {
            return Ok(PropertyReport::fails(
                CodeProperty::Ssm,
                d,
                Witness::SsmIntersection {
                    d0: DefectiveSet::new(combo),
                    intersection: DefectiveSet::new(inter),
                },
            ));
        }
    }
    Ok(PropertyReport::holds(CodeProperty::Ssm, d))
}

/// Intersection of all subsets of `[n]` whose outcome equals the outcome of
/// `d0` (1-based, sorted). Enumerates subsets of the covered set of the
/// outcome; every consistent subset lies inside it, and the covered set
/// itself is consistent, so the intersection is exact.
fn ssm_intersection(c: &CodeMatrix, d0: &[usize], budget: u64) -> Result<Vec<usize>, Error> {
    let r = c.outcome_of(d0);
    let candidates = c.covered_columns(&r).expect("outcome has matrix height");
    let m = candidates.len();
    if m >= 63 || (1u64 << m) > budget {
        let required = if m >= 127 { u128::MAX } else { 1u128 << m };
        return Err(Error::BudgetExceeded { required, budget });
    }

    let words = r.words().len();
    // Split-table subset outcomes: OR(low half mask) | OR(high half mask),
    // so each of the 2^m masks costs O(words) instead of O(m * words).
    let m_lo = m / 2;
    let m_hi = m - m_lo;
    let build = |offset: usize, bits: usize| -> Vec<u64> {
        let mut table = vec![0u64; (1usize << bits) * words];
        for mask in 1usize..(1 << bits) {
            let lsb = mask.trailing_zeros() as usize;
            let prev = mask & (mask - 1);
            let col = c.col(candidates[offset + lsb]).words();
            for w in 0..words {
                table[mask * words + w] = table[prev * words + w] | col[w];
            }
        }
        table
    };
    let low = build(0, m_lo);
    let high = build(m_lo, m_hi);

    let target = r.words();
    let mut inter: u64 = (1u64 << m) - 1;
    for mask in 0u64..(1u64 << m) {
        let lo = (mask & ((1u64 << m_lo) - 1)) as usize;
        let hi = (mask >> m_lo) as usize;
        let mut equal = true;
        for w in 0..words {
            if low[lo * words + w] | high[hi * words + w] != target[w] {
                equal = false;
                break;
            }
        }
        if equal {
            inter &= mask;
        }
    }

    Ok(candidates
        .iter()
        .enumerate()
        .filter(|(bit, _)| inter >> bit & 1 == 1)
        .map(|(_, &col)| col)
        .collect())
}

/// Is `C` a d-union-free code with fast decoding: (a) it is d-union-free and
/// (b) every outcome achievable as a Boolean sum of at most `d` columns
/// covers at most n^(1/d) columns (checked exactly as `count^d <= n`).
pub fn is_uffd(c: &CodeMatrix, d: usize) -> PropertyReport {
    assert!(d >= 1, "d must be at least 1");
    if let Some((first, second)) = find_outcome_collision(c, d) {
        return PropertyReport::fails(
            CodeProperty::Uffd,
            d,
            Witness::OutcomeCollision { first, second },
        );
    }
    let n = c.n();
    for k in 0..=d.min(n) {
        for combo in (1..=n).combinations(k) {
            let r = c.outcome_of(&combo);
            let covered = c.covered_columns(&r).expect("outcome has matrix height");
            if !count_within_root(covered.len(), d, n) {
                return PropertyReport::fails(
                    CodeProperty::Uffd,
                    d,
                    Witness::OversizedCover {
                        defectives: DefectiveSet::new(combo),
                        covered,
                    },
                );
            }
        }
    }
    PropertyReport::holds(CodeProperty::Uffd, d)
}

/// One implication between two verified properties that failed to hold.
/// Any violation means a verifier is buggy: the implications are theorems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationViolation {
    pub premise: (CodeProperty, usize),
    pub conclusion: (CodeProperty, usize),
}

impl fmt::Display for ImplicationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({}) holds but {}({}) fails",
            self.premise.0, self.premise.1, self.conclusion.0, self.conclusion.1
        )
    }
}

/// Truth table of all four properties at `d`, plus disjunctive at `d-1`,
/// with every theorem-implication between them checked.
#[derive(Debug, Clone)]
pub struct HierarchyReport {
    pub d: usize,
    pub union_free: PropertyReport,
    pub disjunctive: PropertyReport,
    pub ssm: PropertyReport,
    pub uffd: PropertyReport,
    /// Only present for d >= 2 (the implied disjunctive order d-1 must be >= 1).
    pub disjunctive_minus_one: Option<PropertyReport>,
    pub violations: Vec<ImplicationViolation>,
}

impl HierarchyReport {
    pub fn all_hold(&self) -> bool {
        self.union_free.holds && self.disjunctive.holds && self.ssm.holds && self.uffd.holds
    }
}

/// Evaluate all four properties and cross-check the implications:
/// disjunctive(d) => ssm(d) => union-free(d), disjunctive(d) => uffd(d) =>
/// union-free(d), and union-free(d) => disjunctive(d-1). The verifiers are
/// mutually checking oracles, so any violation is reported as fatal by the
/// caller.
///
/// Vacuously-holding premises (see [`PropertyReport::vacuous`]) are skipped:
/// a premise that holds for lack of qualifying sets implies nothing.
///
/// The disjunctive => uffd implication is additionally checked only when
/// d^d <= n. Below that scale it is genuinely false, not a verifier bug: the
/// outcome of a full-size defective set covers its own d columns, so the
/// coverage bound needs d <= n^(1/d). The identity matrix at n = 4, d = 3 is
/// a concrete counterexample (3-disjunctive, yet a 3-column outcome covers
/// 3 > 4^(1/3) columns).
pub fn check_hierarchy(c: &CodeMatrix, d: usize) -> Result<HierarchyReport, Error> {
    check_hierarchy_with_budget(c, d, DEFAULT_SSM_SUBSET_BUDGET)
}

/// [`check_hierarchy`] with an explicit SSM subset budget.
pub fn check_hierarchy_with_budget(
    c: &CodeMatrix,
    d: usize,
    budget: u64,
) -> Result<HierarchyReport, Error> {
    assert!(d >= 1, "d must be at least 1");
    let union_free = is_union_free(c, d);
    let disjunctive = is_disjunctive(c, d);
    let ssm = is_ssm_with_budget(c, d, budget)?;
    let uffd = is_uffd(c, d);
    let disjunctive_minus_one = (d >= 2).then(|| is_disjunctive(c, d - 1));

    let mut violations = Vec::new();
    let mut imply = |premise: &PropertyReport, conclusion: &PropertyReport| {
        if premise.holds && !premise.vacuous && !conclusion.holds {
            violations.push(ImplicationViolation {
                premise: (premise.property, premise.d),
                conclusion: (conclusion.property, conclusion.d),
            });
        }
    };
    imply(&disjunctive, &ssm);
    imply(&ssm, &union_free);
    if count_within_root(d, d, c.n()) {
        imply(&disjunctive, &uffd);
    }
    imply(&uffd, &union_free);
    if let Some(dm1) = &disjunctive_minus_one {
        imply(&union_free, dm1);
    }

    Ok(HierarchyReport {
        d,
        union_free,
        disjunctive,
        ssm,
        uffd,
        disjunctive_minus_one,
        violations,
    })
}
