//! # steerseq
//!
//! How many observers, one after the other, can demonstrate EPR steering of a
//! distant party using the same half of a symmetric entangled state?
//!
//! Each Bob performs an unsharp measurement along a basis (`η`-mixture of a
//! projective measurement and white noise) with the Lüders instrument, then
//! hands the post-measurement system on. For Werner and isotropic states the
//! averaged post-measurement state stays in its family, and the whole
//! problem reduces to a scalar recursion on the visibility `p`.
//!
//! The crate is organized as:
//!
//! - [`qcore`]: dense complex matrices, partial traces, Haar sampling.
//! - [`states`]: Werner and isotropic states and their thresholds.
//! - [`measurements`]: unsharp measurements, Lüders Kraus operators, MUBs.
//! - [`sequence`]: the visibility recursion and Bob counting.
//! - [`verify`]: brute-force density-matrix checks of the recursion.
//!
//! ```
//! use steerseq::{count_bobs, Family, ThresholdKind};
//!
//! let n = count_bobs(2, Family::Isotropic, ThresholdKind::SteerAllProjective)?;
//! assert_eq!(n, 5);
//! # Ok::<(), steerseq::Error>(())
//! ```
//!
//! A narrative guide lives in the `book/` directory of the repository; its
//! code listings are compiled and run as doc-tests of this crate.

pub mod error;
pub mod measurements;
pub mod qcore;
pub mod sequence;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use measurements::{
    mub_bases, qubit_merit, verify_projective_2design, KrausSet, MubSet, NoisyBasisMeasurement,
};
pub use qcore::{ComplexMatrix, ComplexVector, RngStream};
pub use sequence::{
    anonymous_count, anonymous_optimum, anonymous_report, count_bobs, f_ano, ratio,
    saturating_sequence, scaling_table, AnonymousReport, Comparison, ScalingRow, SequenceReport,
};
pub use states::{extract_p, threshold, Family, SymmetricState, ThresholdKind};
pub use verify::{verify_sequence, AveragingMode, VerificationReport};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/measurements.md")]
    mod measurements {}
    #[doc = include_str!("../../../book/src/recursion.md")]
    mod recursion {}
    #[doc = include_str!("../../../book/src/mubs.md")]
    mod mubs {}
    #[doc = include_str!("../../../book/src/anonymous.md")]
    mod anonymous {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
