//! Scalar visibility recursion and Bob counting.
//!
//! A Bob measuring with unsharpness `η` on a family state of visibility `p`
//! (averaged over all bases) leaves the next Bob a state of the same family
//! with visibility `ratio(η, d) · p`. The `i`-th Bob steers iff
//! `η_i p_i > p_steer`.

use serde::{Deserialize, Serialize};

use crate::error::{check_dimension, check_unit_interval, Error, Result};
use crate::states::{threshold, Family, ThresholdKind};

/// Slack used when comparing a visibility against a threshold.
pub const SATURATION_TOL: f64 = 1e-12;

/// Grid step for the anonymous-scenario optimizer.
pub const ANONYMOUS_GRID_STEP: f64 = 1e-4;

/// Visibility shrink factor of one averaged Lüders step:
///
/// `r(η, d) = [η + (1-η)(d-1) + 2√(1-η)√(1+(d-1)η)] / (d+1)`.
pub fn ratio(eta: f64, d: usize) -> f64 {
    let df = d as f64;
    let cross = 2.0 * (1.0 - eta).sqrt() * (1.0 + (df - 1.0) * eta).sqrt();
    (eta + (1.0 - eta) * (df - 1.0) + cross) / (df + 1.0)
}

/// How a Bob sitting exactly on the threshold is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `p_i >= p_steer` (up to [`SATURATION_TOL`]): a Bob at exact saturation
    /// counts.
    #[default]
    Closed,
    /// `p_i > p_steer`: a Bob at exact saturation does not count.
    Strict,
}

impl Comparison {
    fn admits(self, p: f64, p_steer: f64) -> bool {
        match self {
            Comparison::Closed => p >= p_steer - SATURATION_TOL,
            Comparison::Strict => p > p_steer + SATURATION_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceEntry {
    /// 1-based Bob index.
    pub index: usize,
    pub p: f64,
    /// Unsharpness used by this Bob; `None` once no admissible `η` exists.
    pub eta: Option<f64>,
    pub steers: bool,
}

/// The saturating sequence: every Bob uses exactly `η_i = p_steer / p_i`.
///
/// `entries` lists the steering Bobs followed by one terminating entry for
/// the first Bob who cannot steer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub d: usize,
    pub family: Option<Family>,
    pub threshold: f64,
    pub entries: Vec<SequenceEntry>,
    pub n_bob: usize,
}

fn check_threshold_value(p_steer: f64) -> Result<()> {
    if !(p_steer > 0.0 && p_steer <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "p_steer",
            value: p_steer,
            reason: "must lie in (0, 1]",
        });
    }
    Ok(())
}

pub fn saturating_sequence(d: usize, p_steer: f64, p1: f64) -> Result<SequenceReport> {
    saturating_sequence_with(d, p_steer, p1, Comparison::Closed)
}

pub fn saturating_sequence_with(
    d: usize,
    p_steer: f64,
    p1: f64,
    comparison: Comparison,
) -> Result<SequenceReport> {
    check_dimension(d)?;
    check_threshold_value(p_steer)?;
    check_unit_interval("p1", p1)?;

    let mut entries = Vec::new();
    let mut p = p1;
    while comparison.admits(p, p_steer) {
        let eta = (p_steer / p).min(1.0);
        entries.push(SequenceEntry {
            index: entries.len() + 1,
            p,
            eta: Some(eta),
            steers: true,
        });
        p *= ratio(eta, d);
    }
    let n_bob = entries.len();
    entries.push(SequenceEntry {
        index: n_bob + 1,
        p,
        eta: None,
        steers: false,
    });
    Ok(SequenceReport {
        d,
        family: None,
        threshold: p_steer,
        entries,
        n_bob,
    })
}

/// Saturating sequence from a pure initial state against the tabulated
/// threshold.
pub fn sequence_for(d: usize, family: Family, kind: ThresholdKind) -> Result<SequenceReport> {
    let p_steer = threshold(kind, family, d)?;
    let mut report = saturating_sequence(d, p_steer, 1.0)?;
    report.family = Some(family);
    Ok(report)
}

/// Largest number of Bobs that can steer (or, for the locality kinds, be
/// Bell-nonlocal) in sequence when each knows its position.
pub fn count_bobs(d: usize, family: Family, kind: ThresholdKind) -> Result<usize> {
    Ok(sequence_for(d, family, kind)?.n_bob)
}

/// `f_ano(η, d) = 1 + ln(p_steer/η) / ln r(η, d)`.
///
/// With every Bob at the same `η`, Bob `i` steers iff `i < f_ano`. For
/// `η <= p_steer` the value is at most 1 and nobody steers.
pub fn f_ano(eta: f64, d: usize, p_steer: f64) -> Result<f64> {
    check_dimension(d)?;
    check_unit_interval("eta", eta)?;
    check_threshold_value(p_steer)?;
    if eta == 0.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
            reason: "ratio(0, d) = 1, so f_ano divides by ln 1",
        });
    }
    Ok(1.0 + (p_steer / eta).ln() / ratio(eta, d).ln())
}

/// Number of Bobs `i >= 1` with `i < f_ano(η, d)`.
pub fn anonymous_count(eta: f64, d: usize, p_steer: f64) -> Result<usize> {
    let f = f_ano(eta, d, p_steer)?;
    if eta <= p_steer || f <= 1.0 {
        return Ok(0);
    }
    Ok(f.ceil() as usize - 1)
}

/// The constant unsharpness `2 p_steer (1 - 1/(4 ln d))`, which already
/// gives an unbounded number of anonymous Bobs.
pub fn prescribed_anonymous_eta(d: usize, p_steer: f64) -> f64 {
    2.0 * p_steer * (1.0 - 1.0 / (4.0 * (d as f64).ln()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnonymousPoint {
    pub eta: f64,
    pub f_ano: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnonymousReport {
    pub d: usize,
    pub kind: ThresholdKind,
    pub threshold: f64,
    pub grid: Vec<AnonymousPoint>,
    pub optimum: AnonymousPoint,
}

/// Grid `p_steer + k·step` for `k >= 1`, capped by (and always including)
/// `η = 1`.
fn eta_grid(p_steer: f64, step: f64) -> impl Iterator<Item = f64> {
    let n = ((1.0 - p_steer) / step).ceil().max(1.0) as usize;
    (1..=n).map(move |k| (p_steer + k as f64 * step).min(1.0))
}

/// Anonymous scenario for isotropic states over an `η` grid of spacing
/// `step`. The optimum maximizes the Bob count, ties going to the smaller
/// `η`.
pub fn anonymous_report(d: usize, kind: ThresholdKind, step: f64) -> Result<AnonymousReport> {
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::InvalidParameter {
            name: "step",
            value: step,
            reason: "grid step must lie in (0, 1)",
        });
    }
    let p_steer = threshold(kind, Family::Isotropic, d)?;
    let grid = eta_grid(p_steer, step)
        .map(|eta| {
            Ok(AnonymousPoint {
                eta,
                f_ano: f_ano(eta, d, p_steer)?,
                count: anonymous_count(eta, d, p_steer)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let optimum = grid
        .iter()
        .copied()
        .reduce(|best, pt| if pt.count > best.count { pt } else { best })
        .ok_or(Error::InvalidParameter {
            name: "p_steer",
            value: p_steer,
            reason: "threshold leaves no room for eta",
        })?;
    Ok(AnonymousReport {
        d,
        kind,
        threshold: p_steer,
        grid,
        optimum,
    })
}

/// Best constant `η` and its Bob count for isotropic states.
pub fn anonymous_optimum(d: usize, kind: ThresholdKind) -> Result<(f64, usize)> {
    let report = anonymous_report(d, kind, ANONYMOUS_GRID_STEP)?;
    Ok((report.optimum.eta, report.optimum.count))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub d: usize,
    pub n_bob_all: usize,
    pub n_bob_mub: usize,
    /// `d / ln d`.
    pub d_over_log_d: f64,
    /// `n_bob_all / (d / ln d)`.
    pub ratio_all: f64,
    /// `(ln 2 / 2) · d / ln d`.
    pub anonymous_bound_all: f64,
    /// `(ln 2 / 2) · √d`.
    pub anonymous_bound_mub: f64,
    /// A complete set of MUBs is known to exist (prime-power `d`). The MUB
    /// column is computed from the bound formula either way.
    pub csmub_known: bool,
}

fn is_prime_power(mut n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|k| n.is_multiple_of(*k)).unwrap_or(n);
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Isotropic Bob counts against the `d / ln d` law, one row per `d`.
pub fn scaling_table(d_values: &[usize]) -> Result<Vec<ScalingRow>> {
    let half_ln2 = std::f64::consts::LN_2 / 2.0;
    d_values
        .iter()
        .map(|&d| {
            let n_bob_all = count_bobs(d, Family::Isotropic, ThresholdKind::SteerAllProjective)?;
            let n_bob_mub = count_bobs(d, Family::Isotropic, ThresholdKind::SteerMub)?;
            let df = d as f64;
            let d_over_log_d = df / df.ln();
            Ok(ScalingRow {
                d,
                n_bob_all,
                n_bob_mub,
                d_over_log_d,
                ratio_all: n_bob_all as f64 / d_over_log_d,
                anonymous_bound_all: half_ln2 * d_over_log_d,
                anonymous_bound_mub: half_ln2 * df.sqrt(),
                csmub_known: is_prime_power(d),
            })
        })
        .collect()
}
