//! Brute-force checks of the visibility recursion on full density matrices.
//!
//! Two averaged channels are provided. The MUB average is an exact finite
//! sum and must reproduce the recursion to rounding error. The Haar average
//! is Monte Carlo: it is split into batches, batch `k` drawing from the
//! stream seeded with `seed + k`, and the batches are reduced in index order
//! so the result depends only on `(seed, samples, batches)`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dimension, check_unit_interval, Error, Result};
use crate::measurements::{
    luders_coefficients, mub_bases, KrausSet, MubSet, NoisyBasisMeasurement,
};
use crate::qcore::{haar_unitary, trace_distance, ComplexMatrix, RngStream};
use crate::sequence::ratio;
use crate::states::{extract_p, Family, SymmetricState};

/// Default number of Haar samples per step.
pub const DEFAULT_SAMPLES: usize = 10_000;
/// Batches used to estimate the Monte-Carlo standard error.
pub const DEFAULT_BATCHES: usize = 10;
/// Haar-mode acceptance: `|p_measured - p_analytic|` within this many
/// standard errors.
pub const HAAR_SIGMA: f64 = 3.0;
/// Haar-mode acceptance on the distance to the symmetric family.
pub const HAAR_FAMILY_TOL: f64 = 0.02;
/// MUB-mode acceptance, on both the visibility and the family distance.
pub const MUB_TOL: f64 = 1e-10;
/// Lower bound on the Haar-mode visibility tolerance.
///
/// Conjugating a Kraus operator by a unitary leaves its trace unchanged, so
/// the visibility of every single Haar sample already equals the analytic
/// value; the spread across batches is pure rounding. Only the off-family
/// part of the averaged state carries sampling noise.
pub const ROUNDING_FLOOR: f64 = 1e-12;

/// `Σ_b (1 ⊗ K_b) ρ (1 ⊗ K_b^dag)`.
///
/// Works block-wise: the `(a, a')` block of size `d x d` is mapped to
/// `Σ_b K_b ρ_{aa'} K_b^dag`.
pub fn apply_luders_step(rho: &ComplexMatrix, kraus: &KrausSet) -> Result<ComplexMatrix> {
    let d = kraus.d();
    let n = d * d;
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.nrows(),
        });
    }
    let adjoints: Vec<ComplexMatrix> = kraus.operators.iter().map(|k| k.adjoint()).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for a in 0..d {
        for a2 in 0..d {
            let block = rho.view((a * d, a2 * d), (d, d));
            let mut acc = ComplexMatrix::zeros(d, d);
            for (k, kd) in kraus.operators.iter().zip(&adjoints) {
                acc += k * block * kd;
            }
            out.view_mut((a * d, a2 * d), (d, d)).copy_from(&acc);
        }
    }
    Ok(out)
}

fn local_dimension(rho: &ComplexMatrix) -> Result<usize> {
    if rho.nrows() != rho.ncols() {
        return Err(Error::NotSquare(rho.nrows(), rho.ncols()));
    }
    let n = rho.nrows();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: n,
        });
    }
    check_dimension(d)?;
    Ok(d)
}

/// Lüders instrument in the computational basis.
fn reference_kraus(d: usize, eta: f64) -> Result<KrausSet> {
    Ok(NoisyBasisMeasurement::computational(d, eta)?.luders_kraus())
}

fn haar_sum(
    rho: &ComplexMatrix,
    kraus: &KrausSet,
    samples: usize,
    rng: &mut RngStream,
) -> Result<ComplexMatrix> {
    let d = kraus.d();
    let mut acc = ComplexMatrix::zeros(rho.nrows(), rho.ncols());
    for _ in 0..samples {
        let u = haar_unitary(d, rng);
        acc += apply_luders_step(rho, &kraus.rotated(&u))?;
    }
    Ok(acc)
}

/// Monte-Carlo estimate of the Haar-averaged Lüders channel, drawing
/// `samples` bases from a single stream.
pub fn haar_averaged_step(
    rho: &ComplexMatrix,
    eta: f64,
    samples: usize,
    rng: &mut RngStream,
) -> Result<ComplexMatrix> {
    if samples == 0 {
        return Err(Error::InvalidParameter {
            name: "samples",
            value: 0.0,
            reason: "need at least one sample",
        });
    }
    let d = local_dimension(rho)?;
    let kraus = reference_kraus(d, eta)?;
    let acc = haar_sum(rho, &kraus, samples, rng)?;
    Ok(acc.unscale(samples as f64))
}

/// Haar-averaged channel split into `batches` independent batch means.
///
/// Batch `k` uses the stream seeded with `seed + k`; the first
/// `samples % batches` batches get one extra sample. Batches run in parallel
/// and are returned in index order.
pub fn haar_averaged_batches(
    rho: &ComplexMatrix,
    eta: f64,
    samples: usize,
    batches: usize,
    seed: u64,
) -> Result<Vec<ComplexMatrix>> {
    if batches == 0 || samples < batches {
        return Err(Error::InvalidParameter {
            name: "samples",
            value: samples as f64,
            reason: "need at least one sample per batch",
        });
    }
    let d = local_dimension(rho)?;
    let kraus = reference_kraus(d, eta)?;
    let master = RngStream::new(seed);
    (0..batches)
        .into_par_iter()
        .map(|k| {
            let size = samples / batches + usize::from(k < samples % batches);
            let mut rng = master.split(k as u64);
            Ok(haar_sum(rho, &kraus, size, &mut rng)?.unscale(size as f64))
        })
        .collect()
}

/// Exact average of the Lüders channels over the `d + 1` bases of `mubs`.
pub fn mub_averaged_step(rho: &ComplexMatrix, eta: f64, mubs: &MubSet) -> Result<ComplexMatrix> {
    let d = local_dimension(rho)?;
    if mubs.d() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: mubs.d(),
        });
    }
    check_unit_interval("eta", eta)?;
    let mut acc = ComplexMatrix::zeros(rho.nrows(), rho.ncols());
    for basis in mubs.bases() {
        let kraus = NoisyBasisMeasurement::new(basis.clone(), eta)?.luders_kraus();
        acc += apply_luders_step(rho, &kraus)?;
    }
    Ok(acc.unscale(mubs.bases().len() as f64))
}

/// Extracted visibility of `rho` and its trace distance to the family member
/// with that visibility (clamped into `[0, 1]`).
pub fn family_projection(rho: &ComplexMatrix, family: Family, d: usize) -> Result<(f64, f64)> {
    let p = extract_p(rho, family, d)?;
    let nearest = SymmetricState::new(family, d, p.clamp(0.0, 1.0))?.to_density_matrix();
    Ok((p, trace_distance(rho, &nearest)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AveragingMode {
    /// Monte-Carlo over Haar-random bases.
    Haar,
    /// Exact sum over a complete set of mutually unbiased bases.
    Mub,
}

impl fmt::Display for AveragingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AveragingMode::Haar => "haar",
            AveragingMode::Mub => "mub",
        })
    }
}

impl FromStr for AveragingMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "haar" => Ok(AveragingMode::Haar),
            "mub" => Ok(AveragingMode::Mub),
            other => Err(format!("unknown averaging mode `{other}` (haar | mub)")),
        }
    }
}

/// One step of a brute-force sequence. Step 0 is the initial state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub step: usize,
    pub d: usize,
    pub family: Family,
    pub mode: AveragingMode,
    pub eta: f64,
    /// Analytic visibility entering this step.
    pub p_in: f64,
    /// `ratio(eta, d) · p_in`.
    pub p_analytic: f64,
    pub p_measured: f64,
    /// Monte-Carlo standard error of `p_measured` (Haar mode only).
    pub p_stderr: Option<f64>,
    pub family_distance: f64,
    pub samples: usize,
    pub seed: u64,
}

impl VerificationReport {
    pub fn deviation(&self) -> f64 {
        (self.p_measured - self.p_analytic).abs()
    }

    /// Whether this step agrees with the recursion at the mode's tolerance.
    pub fn within_tolerance(&self) -> bool {
        match self.mode {
            AveragingMode::Mub => self.deviation() < MUB_TOL && self.family_distance < MUB_TOL,
            AveragingMode::Haar => {
                let bound = self.p_stderr.map_or(0.0, |se| HAAR_SIGMA * se);
                self.deviation() < bound.max(ROUNDING_FLOOR)
                    && self.family_distance < HAAR_FAMILY_TOL
            }
        }
    }
}

/// Run a sequence of averaged Lüders steps from the family state at `p = 1`.
///
/// In Haar mode, step `i` (1-based) draws its batches from seed
/// `seed + i · batches`, so steps never share streams.
pub fn verify_sequence(
    d: usize,
    family: Family,
    mode: AveragingMode,
    etas: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    for &eta in etas {
        check_unit_interval("eta", eta)?;
    }
    let mubs = match mode {
        AveragingMode::Mub => Some(mub_bases(d)?),
        AveragingMode::Haar => None,
    };
    let mut rho = SymmetricState::new(family, d, 1.0)?.to_density_matrix();
    let (p0, dist0) = family_projection(&rho, family, d)?;
    let mut reports = vec![VerificationReport {
        step: 0,
        d,
        family,
        mode,
        eta: 0.0,
        p_in: 1.0,
        p_analytic: 1.0,
        p_measured: p0,
        p_stderr: None,
        family_distance: dist0,
        samples: 0,
        seed,
    }];
    let mut p_analytic = 1.0;
    for (i, &eta) in etas.iter().enumerate() {
        let step = i + 1;
        let p_in = p_analytic;
        p_analytic = ratio(eta, d) * p_in;
        let (next, p_stderr, used) = match &mubs {
            Some(set) => (mub_averaged_step(&rho, eta, set)?, None, 0),
            None => {
                let step_seed = seed.wrapping_add((step * DEFAULT_BATCHES) as u64);
                let batches =
                    haar_averaged_batches(&rho, eta, samples, DEFAULT_BATCHES, step_seed)?;
                let se = batch_standard_error(&batches, family, d)?;
                let mean = batches
                    .iter()
                    .fold(ComplexMatrix::zeros(rho.nrows(), rho.ncols()), |acc, b| {
                        acc + b
                    })
                    .unscale(batches.len() as f64);
                (mean, Some(se), samples)
            }
        };
        rho = next;
        let (p_measured, family_distance) = family_projection(&rho, family, d)?;
        reports.push(VerificationReport {
            step,
            d,
            family,
            mode,
            eta,
            p_in,
            p_analytic,
            p_measured,
            p_stderr,
            family_distance,
            samples: used,
            seed,
        });
    }
    Ok(reports)
}

/// Standard error of the mean visibility, estimated from the spread of the
/// per-batch visibilities.
pub fn batch_standard_error(batches: &[ComplexMatrix], family: Family, d: usize) -> Result<f64> {
    let ps = batches
        .iter()
        .map(|b| extract_p(b, family, d))
        .collect::<Result<Vec<_>>>()?;
    let n = ps.len() as f64;
    if ps.len() < 2 {
        return Ok(f64::NAN);
    }
    let mean = ps.iter().sum::<f64>() / n;
    let var = ps.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((var / n).sqrt())
}

/// The averaged channel acting on a family state, computed in closed form
/// from the Lüders eigenvalues: `Σ_b [(tr K_b)² - tr(K_b²)/d] / (d² - 1)`.
///
/// This is a third, independent route to `ratio(eta, d)`.
pub fn ratio_from_kraus_traces(eta: f64, d: usize) -> f64 {
    let (on, off) = luders_coefficients(d, eta);
    let df = d as f64;
    let tr = on + (df - 1.0) * off;
    let tr_sq = on * on + (df - 1.0) * off * off;
    df * (tr * tr - tr_sq / df) / (df * df - 1.0)
}
