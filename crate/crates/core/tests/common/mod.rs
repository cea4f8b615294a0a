//! Shared corpus generation for the integration suites: deterministic,
//! seed-driven random matrices of mixed column-weight profiles.
#![allow(dead_code)] // each test binary uses a different subset

use gtcodes_core::{BitVector, CodeMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// One random matrix with t in `t_range`, n in `n_range`, columns drawn from
/// one of three profiles: i.i.d. Bernoulli bits, constant weight, or
/// per-column random weight.
pub fn corpus_matrix(
    rng: &mut ChaCha12Rng,
    t_range: std::ops::RangeInclusive<usize>,
    n_range: std::ops::RangeInclusive<usize>,
) -> CodeMatrix {
    let t = rng.random_range(t_range);
    let n = rng.random_range(n_range);
    let mode = rng.random_range(0..3u8);
    let columns = (0..n)
        .map(|_| {
            let mut col = BitVector::zeros(t);
            match mode {
                0 => {
                    let density = *[0.2, 0.35, 0.5].get(rng.random_range(0..3)).unwrap();
                    for i in 0..t {
                        if rng.random_bool(density) {
                            col.set(i, true);
                        }
                    }
                }
                _ => {
                    let w = if mode == 1 {
                        rng.random_range(1..=(t / 2).max(1))
                    } else {
                        rng.random_range(1..=t - 1)
                    };
                    for i in rand::seq::index::sample(rng, t, w) {
                        col.set(i, true);
                    }
                }
            }
            col
        })
        .collect();
    CodeMatrix::from_columns(columns).unwrap()
}

/// All subsets of {1..n} of size <= d, smallest-cardinality first then
/// lexicographic: the canonical enumeration order used across the tests.
pub fn subsets_upto(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for k in 1..=d.min(n) {
        let mut combo: Vec<usize> = (1..=k).collect();
        loop {
            out.push(combo.clone());
            // next k-combination of {1..n} in lexicographic order
            let mut i = k;
            while i > 0 && combo[i - 1] == n - (k - i) {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for j in i..k {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    out
}
