//! Non-adaptive group testing codes.
//!
//! A pooled test design is a binary t x n matrix: rows are tests, columns
//! are samples, and the outcome of a test is the OR over the defective
//! columns it contains. This crate provides the pieces needed to study such
//! designs at desk scale:
//!
//! * [`bitmatrix`]: packed bit vectors, column-major matrices, and the
//!   Boolean-sum / cover / weight algebra, plus the matrix text format.
//! * [`properties`]: exhaustive verifiers for union-free, disjunctive,
//!   strongly separable, and fast-decodable union-free codes, with
//!   replayable counterexample witnesses and hierarchy cross-checks.
//! * [`decoders`]: COMP, DD, the two-step fast decoder, the brute-force
//!   reference decoder, and a seeded simulation harness.
//! * [`construct`]: the randomized constant-weight construction with
//!   bad-pair expurgation and coverage filtering, emitting exhaustively
//!   verified 2-UFFD codes.
//! * [`ratebound`]: exact collision probabilities in rational arithmetic
//!   and the max-min rate optimization that yields the 0.3017 lower bound
//!   on the rate of 2-UFFD codes at p ~= 0.3105.

pub mod bitmatrix;
pub mod construct;
pub mod decoders;
mod error;
pub mod properties;
pub mod ratebound;

pub use bitmatrix::{boolean_sum, BitVector, CodeMatrix, DefectiveSet};
pub use error::{Error, ParseError, ParseErrorKind};
