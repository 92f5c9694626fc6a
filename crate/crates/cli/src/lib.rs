//! Command-line front-end for `steerseq`.
//!
//! Exit codes: 0 on success, 1 when a requested threshold or MUB
//! construction is not available (or on I/O failure), 2 for invalid
//! arguments, 3 when `verify --strict` sees a tolerance breach.

pub mod args;
pub mod format;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;
use steerseq::sequence::{saturating_sequence_with, sequence_for, Comparison};
use steerseq::{
    anonymous_report, f_ano, ratio, scaling_table, threshold, verify_sequence, Family,
    ThresholdKind,
};
use thiserror::Error;

pub use args::{Cli, Command, DimensionList, Format, VerifyArgs};
use format::{fmt_float, fmt_opt, Output, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Unsupported(steerseq::Error),
    #[error("verification tolerance exceeded at step(s) {0:?}")]
    Tolerance(Vec<usize>),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Unsupported(_) | CliError::Io(_) => 1,
            CliError::Tolerance(_) => 3,
        }
    }
}

impl From<steerseq::Error> for CliError {
    fn from(err: steerseq::Error) -> Self {
        use steerseq::Error::*;
        match err {
            UnsupportedThreshold { .. } | UnsupportedMubDimension(_) => CliError::Unsupported(err),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::Io(io::Error::other(err))
    }
}

/// Run a parsed command line, writing its output.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (output, breaches) = execute(&cli.command)?;
    match &cli.out {
        Some(path) => emit(&output, cli.format, BufWriter::new(File::create(path)?))?,
        None => emit(&output, cli.format, io::stdout().lock())?,
    }
    if breaches.is_empty() {
        Ok(())
    } else {
        Err(CliError::Tolerance(breaches))
    }
}

fn emit<W: Write>(output: &Output, format: Format, mut out: W) -> Result<(), CliError> {
    match format {
        Format::Csv => output.table.write_csv(&mut out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &output.json).map_err(io::Error::other)?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Build the output of a command. The second value lists verification steps
/// that missed their tolerance under `--strict`.
pub fn execute(command: &Command) -> Result<(Output, Vec<usize>), CliError> {
    let output = match command {
        Command::Thresholds { d, family, kind } => thresholds(&d.0, *family, *kind),
        Command::Sequence {
            d,
            family,
            kind,
            threshold,
            p1,
            strict,
        } => sequence(*d, *family, *kind, *threshold, *p1, *strict)?,
        Command::Anonymous { d, kind, step } => anonymous(*d, *kind, *step)?,
        Command::Scaling { d } => scaling(&d.0)?,
        Command::Verify(args) => return verify(args),
        Command::Fig2 { points } => staircase_figure(&[2], *points)?,
        Command::Fig3 { d, points } => staircase_figure(&d.0, *points)?,
        Command::Fig4 { d, step } => fig4(&d.0, *step)?,
    };
    Ok((output, Vec::new()))
}

#[derive(Serialize)]
struct ThresholdRow {
    d: usize,
    family: Family,
    kind: ThresholdKind,
    threshold: Option<f64>,
    note: Option<String>,
}

fn thresholds(ds: &[usize], family: Option<Family>, kind: Option<ThresholdKind>) -> Output {
    let families: Vec<Family> = family.map_or(Family::ALL.to_vec(), |f| vec![f]);
    let kinds: Vec<ThresholdKind> = kind.map_or(ThresholdKind::ALL.to_vec(), |k| vec![k]);
    let mut rows = Vec::new();
    for &d in ds {
        for &family in &families {
            for &kind in &kinds {
                let (value, note) = match threshold(kind, family, d) {
                    Ok(v) => (Some(v), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                rows.push(ThresholdRow {
                    d,
                    family,
                    kind,
                    threshold: value,
                    note,
                });
            }
        }
    }
    let mut table = Table::new(vec!["d", "family", "kind", "threshold", "note"]);
    for r in &rows {
        table.push(vec![
            r.d.to_string(),
            r.family.to_string(),
            r.kind.to_string(),
            fmt_opt(r.threshold),
            r.note.clone().unwrap_or_default(),
        ]);
    }
    Output::new(table, &rows)
}

fn sequence(
    d: usize,
    family: Family,
    kind: ThresholdKind,
    threshold_override: Option<f64>,
    p1: f64,
    strict: bool,
) -> Result<Output, CliError> {
    let comparison = if strict {
        Comparison::Strict
    } else {
        Comparison::Closed
    };
    let p_steer = match threshold_override {
        Some(t) => t,
        None => threshold(kind, family, d)?,
    };
    let mut report = saturating_sequence_with(d, p_steer, p1, comparison)?;
    report.family = Some(family);
    let mut table = Table::new(vec!["i", "p_i", "eta_i", "steers"]);
    for e in &report.entries {
        table.push(vec![
            e.index.to_string(),
            fmt_float(e.p),
            fmt_opt(e.eta),
            e.steers.to_string(),
        ]);
    }
    Ok(Output::new(table, &report))
}

fn anonymous(d: usize, kind: ThresholdKind, step: f64) -> Result<Output, CliError> {
    let report = anonymous_report(d, kind, step)?;
    let mut table = Table::new(vec!["eta", "f_ano", "count", "optimal"]);
    for pt in &report.grid {
        table.push(vec![
            fmt_float(pt.eta),
            fmt_float(pt.f_ano),
            pt.count.to_string(),
            (pt.eta == report.optimum.eta).to_string(),
        ]);
    }
    Ok(Output::new(table, &report))
}

fn scaling(ds: &[usize]) -> Result<Output, CliError> {
    let rows = scaling_table(ds)?;
    let mut table = Table::new(vec![
        "d",
        "n_bob_all",
        "n_bob_mub",
        "d_over_log_d",
        "ratio_all",
        "anonymous_bound_all",
        "anonymous_bound_mub",
        "csmub_known",
    ]);
    for r in &rows {
        table.push(vec![
            r.d.to_string(),
            r.n_bob_all.to_string(),
            r.n_bob_mub.to_string(),
            fmt_float(r.d_over_log_d),
            fmt_float(r.ratio_all),
            fmt_float(r.anonymous_bound_all),
            fmt_float(r.anonymous_bound_mub),
            r.csmub_known.to_string(),
        ]);
    }
    Ok(Output::new(table, &rows))
}

fn verify(args: &VerifyArgs) -> Result<(Output, Vec<usize>), CliError> {
    let etas: Vec<f64> = if args.saturating {
        sequence_for(args.d, args.family, ThresholdKind::SteerAllProjective)?
            .entries
            .iter()
            .filter_map(|e| e.eta)
            .collect()
    } else {
        args.eta.clone()
    };
    let reports = verify_sequence(
        args.d,
        args.family,
        args.mode,
        &etas,
        args.samples,
        args.seed,
    )?;
    let mut table = Table::new(vec![
        "step",
        "d",
        "family",
        "mode",
        "eta",
        "p_in",
        "p_analytic",
        "p_measured",
        "p_stderr",
        "family_distance",
        "samples",
        "seed",
        "within_tolerance",
    ]);
    let mut breaches = Vec::new();
    for r in &reports {
        let ok = r.within_tolerance();
        if !ok {
            breaches.push(r.step);
        }
        table.push(vec![
            r.step.to_string(),
            r.d.to_string(),
            r.family.to_string(),
            r.mode.to_string(),
            fmt_float(r.eta),
            fmt_float(r.p_in),
            fmt_float(r.p_analytic),
            fmt_float(r.p_measured),
            fmt_opt(r.p_stderr),
            fmt_float(r.family_distance),
            r.samples.to_string(),
            r.seed.to_string(),
            ok.to_string(),
        ]);
    }
    if !args.strict {
        breaches.clear();
    }
    Ok((Output::new(table, &reports), breaches))
}

#[derive(Serialize)]
struct FigurePoint {
    d: usize,
    p_steer: f64,
    series: &'static str,
    step: usize,
    x: f64,
    y: f64,
}

/// Cobweb data for the saturating map: the curve `p -> ratio(p_steer/p) p`
/// on `[p_steer, 1]` and the staircase started at `p = 1`, which alternates
/// `(p_i, p_i) -> (p_i, p_{i+1})` and ends at the first `p` below threshold.
fn staircase_figure(ds: &[usize], points: usize) -> Result<Output, CliError> {
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let mut data = Vec::new();
    for &d in ds {
        let report = sequence_for(d, Family::Isotropic, ThresholdKind::SteerAllProjective)?;
        let p_steer = report.threshold;
        for k in 0..points {
            let p = p_steer + (1.0 - p_steer) * k as f64 / (points - 1) as f64;
            data.push(FigurePoint {
                d,
                p_steer,
                series: "curve",
                step: k,
                x: p,
                y: ratio(p_steer / p, d) * p,
            });
        }
        let ps: Vec<f64> = report.entries.iter().map(|e| e.p).collect();
        let mut step = 0;
        for w in ps.windows(2) {
            for (x, y) in [(w[0], w[0]), (w[0], w[1])] {
                data.push(FigurePoint {
                    d,
                    p_steer,
                    series: "staircase",
                    step,
                    x,
                    y,
                });
                step += 1;
            }
        }
    }
    let mut table = Table::new(vec!["d", "p_steer", "series", "step", "x", "y"]);
    for pt in &data {
        table.push(vec![
            pt.d.to_string(),
            fmt_float(pt.p_steer),
            pt.series.to_string(),
            pt.step.to_string(),
            fmt_float(pt.x),
            fmt_float(pt.y),
        ]);
    }
    Ok(Output::new(table, &data))
}

#[derive(Serialize)]
struct AnonymousCurvePoint {
    d: usize,
    p_steer: f64,
    eta: f64,
    eta_rescaled: f64,
    f_ano: f64,
}

fn fig4(ds: &[usize], step: f64) -> Result<Output, CliError> {
    if !(step > 0.0 && step < 1.0) {
        return Err(CliError::Usage("--step must lie in (0, 1)".into()));
    }
    let mut data = Vec::new();
    for &d in ds {
        let p_steer = threshold(ThresholdKind::SteerAllProjective, Family::Isotropic, d)?;
        let n = ((1.0 - p_steer) / step).ceil() as usize;
        for k in 1..=n {
            let eta = (p_steer + k as f64 * step).min(1.0);
            data.push(AnonymousCurvePoint {
                d,
                p_steer,
                eta,
                eta_rescaled: (eta - p_steer) / (1.0 - p_steer),
                f_ano: f_ano(eta, d, p_steer)?,
            });
        }
    }
    let mut table = Table::new(vec!["d", "p_steer", "eta", "eta_rescaled", "f_ano"]);
    for pt in &data {
        table.push(vec![
            pt.d.to_string(),
            fmt_float(pt.p_steer),
            fmt_float(pt.eta),
            fmt_float(pt.eta_rescaled),
            fmt_float(pt.f_ano),
        ]);
    }
    Ok(Output::new(table, &data))
}
