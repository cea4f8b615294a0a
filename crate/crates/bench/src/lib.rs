//! Benchmark-only crate; shared fixtures for the criterion benches.

use gtcodes_core::construct::{build_uffd2, CoverageThreshold, EnsembleParams};
use gtcodes_core::CodeMatrix;

/// A verified 2-UFFD code at the scale the decoding benches use.
pub fn verified_code(t: usize, n: usize, seed: u64) -> CodeMatrix {
    let params = EnsembleParams::new(t, 0.3105, n, seed).expect("valid bench params");
    build_uffd2(&params, CoverageThreshold::SqrtHalfN, 32)
        .expect("bench construction succeeds")
        .matrix
}
