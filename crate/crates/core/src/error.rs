use thiserror::Error;

use crate::states::{Family, ThresholdKind};

/// Errors raised by the steering-sequence toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("no threshold for {kind} with {family} states in d={d}: {reason}")]
    UnsupportedThreshold {
        kind: ThresholdKind,
        family: Family,
        d: usize,
        reason: &'static str,
    },

    #[error("no complete set of mutually unbiased bases is constructed for d={0} (supported: primes and 4)")]
    UnsupportedMubDimension(usize),

    #[error("basis is not unitary (max |U^dag U - 1| = {0:e})")]
    NotUnitary(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dimension(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d as f64,
            reason: "local dimension must be at least 2",
        });
    }
    Ok(())
}

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must lie in [0, 1]",
        });
    }
    Ok(())
}
