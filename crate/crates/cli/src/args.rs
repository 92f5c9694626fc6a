//! Command-line arguments.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use steerseq::{AveragingMode, Family, ThresholdKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Sequential EPR steering with unsharp Lüders measurements.
///
/// Every command writes one table (CSV, header row first, floats with 12
/// significant digits) or the full report as JSON.
#[derive(Debug, Parser)]
#[command(name = "steerseq", version)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Threshold table over dimensions, families and threshold kinds.
    ///
    /// CSV columns: d,family,kind,threshold,note. `threshold` is empty and
    /// `note` names the missing theory when no value is known.
    Thresholds {
        /// Dimensions: `N`, `A..B` (inclusive) or `A,B,C`.
        #[arg(long, default_value = "2..16")]
        d: DimensionList,
        #[arg(long)]
        family: Option<Family>,
        #[arg(long)]
        kind: Option<ThresholdKind>,
    },

    /// Saturating sequence: each Bob uses eta_i = p_steer / p_i.
    ///
    /// CSV columns: i,p_i,eta_i,steers. The last row is the first Bob who
    /// cannot steer (empty eta_i).
    Sequence {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "isotropic")]
        family: Family,
        #[arg(long, default_value = "steer_all_projective")]
        kind: ThresholdKind,
        /// Override the tabulated threshold.
        #[arg(long)]
        threshold: Option<f64>,
        /// Visibility of the initial state.
        #[arg(long, default_value_t = 1.0)]
        p1: f64,
        /// Do not count a Bob sitting exactly on the threshold.
        #[arg(long)]
        strict: bool,
    },

    /// Anonymous scenario: all Bobs use the same eta (isotropic states).
    ///
    /// CSV columns: eta,f_ano,count,optimal. `optimal` marks the smallest
    /// eta reaching the largest count.
    Anonymous {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "steer_all_projective")]
        kind: ThresholdKind,
        /// Grid spacing in eta.
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },

    /// Bob counts against the d / ln d law (isotropic states).
    ///
    /// CSV columns: d,n_bob_all,n_bob_mub,d_over_log_d,ratio_all,
    /// anonymous_bound_all,anonymous_bound_mub,csmub_known. The MUB count
    /// uses the bound formula for every d; csmub_known flags prime powers.
    Scaling {
        #[arg(long, default_value = "2..150")]
        d: DimensionList,
    },

    /// Brute-force density-matrix check of the visibility recursion.
    ///
    /// CSV columns: step,d,family,mode,eta,p_in,p_analytic,p_measured,
    /// p_stderr,family_distance,samples,seed,within_tolerance. Step 0 is the
    /// initial state.
    Verify(VerifyArgs),

    /// Figure data: saturating function and staircase for qubits.
    ///
    /// CSV columns: d,p_steer,series,step,x,y with series `curve` (the map
    /// p -> ratio(p_steer/p, d) p) and `staircase` (its iteration from 1).
    Fig2 {
        /// Points on the curve.
        #[arg(long, default_value_t = 200)]
        points: usize,
    },

    /// Figure data: saturating function and staircase for several d.
    ///
    /// Same columns as fig2.
    Fig3 {
        #[arg(long, default_value = "2,4,16")]
        d: DimensionList,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },

    /// Figure data: f_ano(eta, d) curves.
    ///
    /// CSV columns: d,p_steer,eta,eta_rescaled,f_ano where eta_rescaled =
    /// (eta - p_steer)/(1 - p_steer) maps (p_steer, 1] onto (0, 1].
    Fig4 {
        #[arg(long, default_value = "2..16")]
        d: DimensionList,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value = "isotropic")]
    pub family: Family,
    #[arg(long, default_value = "mub")]
    pub mode: AveragingMode,
    /// Unsharpness of each successive Bob (comma separated or repeated).
    #[arg(long, value_delimiter = ',', conflicts_with = "saturating")]
    pub eta: Vec<f64>,
    /// Use the saturating sequence's eta values for this family.
    #[arg(long)]
    pub saturating: bool,
    /// Haar samples per step.
    #[arg(long, default_value_t = steerseq::verify::DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, env = "STEERSEQ_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Exit with status 3 if any step misses its tolerance.
    #[arg(long)]
    pub strict: bool,
}

/// A list of local dimensions: `N`, `A..B` (inclusive) or `A,B,C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionList(pub Vec<usize>);

impl FromStr for DimensionList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{t}` is not a dimension"))
        };
        let values: Vec<usize> = if let Some((lo, hi)) = s.split_once("..") {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            (lo..=hi).collect()
        } else {
            s.split(',').map(parse).collect::<Result<_, _>>()?
        };
        if let Some(bad) = values.iter().find(|&&d| d < 2) {
            return Err(format!("dimension {bad} is below 2"));
        }
        Ok(DimensionList(values))
    }
}
