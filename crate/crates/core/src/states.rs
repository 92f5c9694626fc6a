//! Werner and isotropic states, and the visibility thresholds that decide
//! what a given visibility `p` allows.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_dimension, check_unit_interval, Error, Result};
use crate::qcore::{identity, projector, swap_operator, ComplexMatrix, ComplexVector};

/// The two symmetric families of bipartite states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `p |φ+><φ+| + (1 - p) 1/d²`, invariant under `U* ⊗ U`.
    Isotropic,
    /// `(((d - 1 + p)/d) 1 - p V) / (d(d - 1))`, invariant under `U ⊗ U`.
    Werner,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::Isotropic, Family::Werner];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Isotropic => "isotropic",
            Family::Werner => "werner",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "isotropic" | "iso" => Ok(Family::Isotropic),
            "werner" => Ok(Family::Werner),
            other => Err(format!(
                "unknown state family `{other}` (isotropic | werner)"
            )),
        }
    }
}

/// A member of one of the symmetric families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricState {
    family: Family,
    d: usize,
    p: f64,
}

impl SymmetricState {
    pub fn new(family: Family, d: usize, p: f64) -> Result<Self> {
        check_dimension(d)?;
        check_unit_interval("p", p)?;
        Ok(Self { family, d, p })
    }

    pub fn isotropic(d: usize, p: f64) -> Result<Self> {
        Self::new(Family::Isotropic, d, p)
    }

    pub fn werner(d: usize, p: f64) -> Result<Self> {
        Self::new(Family::Werner, d, p)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// The `d² x d²` density matrix of this state.
    pub fn to_density_matrix(&self) -> ComplexMatrix {
        let d = self.d;
        let df = d as f64;
        let p = self.p;
        match self.family {
            Family::Isotropic => {
                let phi = projector(&phi_plus(d));
                phi.scale(p) + identity(d * d).scale((1.0 - p) / (df * df))
            }
            Family::Werner => {
                let norm = 1.0 / (df * (df - 1.0));
                (identity(d * d).scale((df - 1.0 + p) / df) - swap_operator(d).scale(p)).scale(norm)
            }
        }
    }
}

/// `|φ+> = Σ_i |ii> / √d`.
pub fn phi_plus(d: usize) -> ComplexVector {
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = ComplexVector::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    v
}

/// Visibility of `rho` within `family`.
///
/// This is the linear inversion of the family parametrization, so it is exact
/// on family members and acts as a projection for any other Hermitian input:
///
/// * isotropic: `p = (d² <φ+|ρ|φ+> - 1) / (d² - 1)`
/// * Werner: `p = (1 - d tr(ρV)) / (d + 1)`, from `tr(ρ_W V) = 1/d - p(d+1)/d`
pub fn extract_p(rho: &ComplexMatrix, family: Family, d: usize) -> Result<f64> {
    check_dimension(d)?;
    let n = d * d;
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.nrows(),
        });
    }
    let df = d as f64;
    Ok(match family {
        Family::Isotropic => {
            // <φ+|ρ|φ+> = (1/d) Σ_ij ρ[ii, jj]
            let overlap: Complex64 = (0..d)
                .flat_map(|i| (0..d).map(move |j| (i, j)))
                .map(|(i, j)| rho[(i * d + i, j * d + j)])
                .sum::<Complex64>()
                / df;
            (df * df * overlap.re - 1.0) / (df * df - 1.0)
        }
        Family::Werner => {
            // tr(ρV) = Σ_ij ρ[ij, ji]
            let swap_expectation: f64 = (0..d)
                .flat_map(|i| (0..d).map(move |j| (i, j)))
                .map(|(i, j)| rho[(i * d + j, j * d + i)].re)
                .sum();
            (1.0 - df * swap_expectation) / (df + 1.0)
        }
    })
}

/// Which visibility threshold to look up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    /// Steering with all projective measurements.
    SteerAllProjective,
    /// Upper bound on the steering threshold for a complete set of MUBs
    /// (isotropic states only).
    SteerMub,
    /// Separable iff `p <= 1/(d+1)`.
    Separability,
    /// Two-qubit isotropic state is local below this value.
    LocalQubit,
    /// Two-qubit isotropic state is Bell-nonlocal above this value.
    NonlocalQubit,
}

impl ThresholdKind {
    pub const ALL: [ThresholdKind; 5] = [
        ThresholdKind::SteerAllProjective,
        ThresholdKind::SteerMub,
        ThresholdKind::Separability,
        ThresholdKind::LocalQubit,
        ThresholdKind::NonlocalQubit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ThresholdKind::SteerAllProjective => "steer_all_projective",
            ThresholdKind::SteerMub => "steer_mub",
            ThresholdKind::Separability => "separability",
            ThresholdKind::LocalQubit => "local_qubit",
            ThresholdKind::NonlocalQubit => "nonlocal_qubit",
        }
    }
}

impl fmt::Display for ThresholdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ThresholdKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .or(match norm.as_str() {
                "all" | "projective" => Some(ThresholdKind::SteerAllProjective),
                "mub" => Some(ThresholdKind::SteerMub),
                _ => None,
            })
            .ok_or_else(|| {
                format!(
                    "unknown threshold kind `{s}` (steer_all_projective | steer_mub | \
                     separability | local_qubit | nonlocal_qubit)"
                )
            })
    }
}

/// Two-qubit isotropic state is local for `p` below this (four decimals).
pub const LOCAL_QUBIT_BOUND: f64 = 0.6829;
/// Two-qubit isotropic state is nonlocal for `p` above this (four decimals).
pub const NONLOCAL_QUBIT_BOUND: f64 = 0.7012;

/// `Σ_{i=2}^{d} 1/i / (d - 1)`.
fn isotropic_projective_threshold(d: usize) -> f64 {
    let tail: f64 = (2..=d).map(|i| 1.0 / i as f64).sum();
    tail / (d as f64 - 1.0)
}

/// `(√d/(d+1) + 1) / (√d + 1)`.
fn isotropic_mub_threshold(d: usize) -> f64 {
    let df = d as f64;
    let sq = df.sqrt();
    (sq / (df + 1.0) + 1.0) / (sq + 1.0)
}

/// Visibility threshold of `kind` for `family` in local dimension `d`.
///
/// The locality bounds are only known for two qubits, and the MUB steering
/// bound only for isotropic states; other combinations are errors.
pub fn threshold(kind: ThresholdKind, family: Family, d: usize) -> Result<f64> {
    check_dimension(d)?;
    let df = d as f64;
    match (kind, family) {
        (ThresholdKind::SteerAllProjective, Family::Werner) => Ok((df - 1.0) / df),
        (ThresholdKind::SteerAllProjective, Family::Isotropic) => {
            Ok(isotropic_projective_threshold(d))
        }
        (ThresholdKind::SteerMub, Family::Isotropic) => Ok(isotropic_mub_threshold(d)),
        (ThresholdKind::SteerMub, Family::Werner) => Err(Error::UnsupportedThreshold {
            kind,
            family,
            d,
            reason: "the MUB steering bound comes from measurement incompatibility on \
                     isotropic states and does not transfer to Werner states",
        }),
        (ThresholdKind::Separability, _) => Ok(1.0 / (df + 1.0)),
        (ThresholdKind::LocalQubit | ThresholdKind::NonlocalQubit, _) if d != 2 => {
            Err(Error::UnsupportedThreshold {
                kind,
                family,
                d,
                reason: "Bell-locality bounds are only known for two qubits",
            })
        }
        (ThresholdKind::LocalQubit, _) => Ok(LOCAL_QUBIT_BOUND),
        (ThresholdKind::NonlocalQubit, _) => Ok(NONLOCAL_QUBIT_BOUND),
    }
}
