//! Protocol sequences for slot-synchronous collision channels without
//! feedback, where the receiver decodes up to γ simultaneous packets.
//!
//! The crate builds shift-invariant sequence sets, verifies shift- and
//! throughput-invariance exhaustively, evaluates closed-form throughput and
//! runs Monte-Carlo and erasure-threshold session simulations.
//!
//! Slot counts are always integers. Closed-form throughput is generic over
//! [`Scalar`], so it can be evaluated exactly ([`Rational`], [`BigRational`])
//! or in floating point (`f64`, `f32`).

pub mod analysis;
pub mod cli;
pub mod construction;
pub mod error;
pub mod format;
pub mod scalar;
pub mod sequence;
pub mod simulator;
pub mod throughput;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use sequence::{BinarySequence, SequenceSet, ShiftAssignment, ThetaProfile};

/// Exact machine-word rational; duty factors and slot fractions.
pub type Rational = num_rational::Ratio<i64>;

/// Arbitrary-precision rational for formulas whose denominators grow like
/// `d^K`.
pub type BigRational = num_rational::BigRational;

/// Closed-form throughput evaluated exactly.
pub type ExactThroughput = throughput::ThroughputReport<BigRational>;

/// Closed-form throughput evaluated in double precision.
pub type FloatThroughput = throughput::ThroughputReport<f64>;

/// Closed-form throughput evaluated in single precision.
pub type Float32Throughput = throughput::ThroughputReport<f32>;
