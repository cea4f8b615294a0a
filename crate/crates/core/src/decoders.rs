//! The four decoding procedures and a simulation harness around them.
//!
//! * [`decode_comp`]: output every column covered by the outcome vector.
//!   Never misses a defective; exact on d-disjunctive codes.
//! * [`decode_dd`]: keep the covered columns that uniquely explain some
//!   positive test. Never accuses a non-defective; exact on d-SSM codes at
//!   full defective load.
//! * [`decode_uffd`]: two steps: collect the covered columns, then scan
//!   their subsets of size at most d for one whose Boolean sum reproduces
//!   the outcome. On a d-union-free code the match is unique, and on a
//!   d-UFFD code the covered set is small enough that the whole decode is
//!   O(tn).
//! * [`decode_bruteforce`]: scan all subsets of [n] of size at most d and
//!   collect every match; the reference oracle the fast path is checked
//!   against.

use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::bitmatrix::{BitVector, CodeMatrix, DefectiveSet};
use crate::error::Error;

/// Default cap on the number of candidate subsets [`decode_bruteforce`]
/// may test.
pub const DEFAULT_BRUTEFORCE_BUDGET: u64 = 10_000_000;

/// Selects one of the four decoding procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderId {
    Comp,
    Dd,
    Uffd,
    Brute,
}

impl std::fmt::Display for DecoderId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DecoderId::Comp => "comp",
            DecoderId::Dd => "dd",
            DecoderId::Uffd => "uffd",
            DecoderId::Brute => "brute",
        })
    }
}

/// Outcome of a set-recovering decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeStatus {
    /// Exactly one consistent set was found.
    Ok(DefectiveSet),
    /// More than one consistent set exists; carries the first two found.
    Ambiguous(DefectiveSet, DefectiveSet),
    /// No set of size <= d reproduces the outcome.
    Inconsistent,
}

/// Decode result with the exact counters the complexity claims are tested
/// against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    /// Size of the covered-column candidate pool (for the brute-force
    /// decoder this is n: every column is a candidate).
    pub step1_size: usize,
    /// Number of candidate subsets whose outcome was compared against `r`.
    pub candidates_examined: u64,
}

impl DecodeResult {
    pub fn defectives(&self) -> Option<&DefectiveSet> {
        match &self.status {
            DecodeStatus::Ok(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_ok(&self) -> bool {
        matches!(self.status, DecodeStatus::Ok(_))
    }
}

/// COMP: all columns covered by the outcome vector, i.e. all samples that
/// appear only in positive tests.
pub fn decode_comp(c: &CodeMatrix, r: &BitVector) -> Result<DefectiveSet, Error> {
    Ok(DefectiveSet::new(c.covered_columns(r)?))
}

/// DD (definitely defective): a covered column is kept iff some positive
/// test contains it and no other covered column; that test cannot be
/// explained otherwise.
pub fn decode_dd(c: &CodeMatrix, r: &BitVector) -> Result<DefectiveSet, Error> {
    let candidates = c.covered_columns(r)?;
    let mut definite = Vec::new();
    for (pos, &i) in candidates.iter().enumerate() {
        let alone = (0..c.t()).any(|row| {
            r.get(row)
                && c.col(i).get(row)
                && candidates
                    .iter()
                    .enumerate()
                    .all(|(q, &k)| q == pos || !c.col(k).get(row))
        });
        if alone {
            definite.push(i);
        }
    }
    Ok(DefectiveSet::new(definite))
}

/// Two-step decoder: restrict to covered columns, then scan their subsets of
/// size at most `d` in (cardinality, lexicographic) order and return the
/// first whose Boolean sum equals `r`.
///
/// On a d-union-free code the matching set is unique, so the scan order is
/// irrelevant to the answer; on other matrices the fixed order makes the
/// result deterministic. The matrix is not verified here, so decoding stays
/// O(tn) and callers opt into verification separately.
pub fn decode_uffd(c: &CodeMatrix, r: &BitVector, d: usize) -> Result<DecodeResult, Error> {
    let candidates = c.covered_columns(r)?;
    let step1_size = candidates.len();
    let mut examined = 0u64;
    for k in 0..=d.min(step1_size) {
        for combo in candidates.iter().copied().combinations(k) {
            examined += 1;
            if c.outcome_of(&combo) == *r {
                return Ok(DecodeResult {
                    status: DecodeStatus::Ok(DefectiveSet::new(combo)),
                    step1_size,
                    candidates_examined: examined,
                });
            }
        }
    }
    Ok(DecodeResult {
        status: DecodeStatus::Inconsistent,
        step1_size,
        candidates_examined: examined,
    })
}

/// Brute force oracle: scan every subset of [n] of size at most `d` and
/// collect all matches. Unique match decodes, two matches report ambiguity
/// (with both sets as witness), none is inconsistent.
pub fn decode_bruteforce(c: &CodeMatrix, r: &BitVector, d: usize) -> Result<DecodeResult, Error> {
    decode_bruteforce_with_budget(c, r, d, DEFAULT_BRUTEFORCE_BUDGET)
}

/// [`decode_bruteforce`] with an explicit subset budget.
pub fn decode_bruteforce_with_budget(
    c: &CodeMatrix,
    r: &BitVector,
    d: usize,
    budget: u64,
) -> Result<DecodeResult, Error> {
    if r.len() != c.t() {
        return Err(Error::LengthMismatch { expected: c.t(), actual: r.len() });
    }
    let n = c.n();
    let required = subsets_upto_count(n, d);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }

    let mut examined = 0u64;
    let mut matches: Vec<DefectiveSet> = Vec::new();
    'scan: for k in 0..=d.min(n) {
        for combo in (1..=n).combinations(k) {
            examined += 1;
            if c.outcome_of(&combo) == *r {
                matches.push(DefectiveSet::new(combo));
                if matches.len() == 2 {
                    break 'scan;
                }
            }
        }
    }
    let status = match matches.len() {
        0 => DecodeStatus::Inconsistent,
        1 => DecodeStatus::Ok(matches.pop().unwrap()),
        _ => {
            let second = matches.pop().unwrap();
            DecodeStatus::Ambiguous(matches.pop().unwrap(), second)
        }
    };
    Ok(DecodeResult { status, step1_size: n, candidates_examined: examined })
}

fn subsets_upto_count(n: usize, d: usize) -> u128 {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for k in 0..=d.min(n) {
        if k > 0 {
            term = term.saturating_mul((n - k + 1) as u128) / k as u128;
        }
        total = total.saturating_add(term);
    }
    total
}

/// Record of one simulated decode.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub decoder: DecoderId,
    pub defectives: DefectiveSet,
    pub status: DecodeStatus,
    /// `true` iff the decoder recovered exactly the planted set.
    pub success: bool,
    pub step1_size: usize,
    pub candidates_examined: u64,
    pub elapsed: Duration,
}

/// Plant a defective set, compute its outcome, run the selected decoder and
/// compare.
pub fn simulate(
    c: &CodeMatrix,
    defectives: &DefectiveSet,
    decoder: DecoderId,
    d: usize,
) -> Result<TrialRecord, Error> {
    let r = c.outcome(defectives)?;
    let start = Instant::now();
    let (status, step1_size, candidates_examined) = match decoder {
        DecoderId::Comp => {
            let set = decode_comp(c, &r)?;
            let step1 = set.len();
            (DecodeStatus::Ok(set), step1, 0)
        }
        DecoderId::Dd => {
            let candidates = c.covered_columns(&r)?.len();
            (DecodeStatus::Ok(decode_dd(c, &r)?), candidates, 0)
        }
        DecoderId::Uffd => {
            let res = decode_uffd(c, &r, d)?;
            (res.status, res.step1_size, res.candidates_examined)
        }
        DecoderId::Brute => {
            let res = decode_bruteforce(c, &r, d)?;
            (res.status, res.step1_size, res.candidates_examined)
        }
    };
    let elapsed = start.elapsed();
    let success = matches!(&status, DecodeStatus::Ok(set) if set == defectives);
    Ok(TrialRecord {
        decoder,
        defectives: defectives.clone(),
        status,
        success,
        step1_size,
        candidates_examined,
        elapsed,
    })
}

/// Run `trials` independent simulated decodes with planted sets drawn from
/// the seed.
///
/// Trial `i` draws its defective set from an RNG stream keyed by `(seed, i)`:
/// the set size is uniform on `0..=d`, the set uniform among that size, so
/// results are byte-identical at any thread count and trials parallelize
/// freely.
pub fn simulate_batch(
    c: &CodeMatrix,
    decoder: DecoderId,
    d: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<TrialRecord>, Error> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let defectives = sample_defectives(c.n(), d, seed, trial);
            simulate(c, &defectives, decoder, d)
        })
        .collect()
}

fn sample_defectives(n: usize, d: usize, seed: u64, trial: u64) -> DefectiveSet {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(trial.wrapping_add(1));
    let size = rng.random_range(0..=d.min(n));
    let idx = rand::seq::index::sample(&mut rng, n, size);
    DefectiveSet::new(idx.iter().map(|i| i + 1).collect())
}
