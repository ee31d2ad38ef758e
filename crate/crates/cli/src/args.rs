//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "modclust",
    version,
    about = "Fuzzy clustering of units with attributes and a network: \
             entropic c-medoids/c-modes with a modularity correction term"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one configuration and write the result files.
    Fit(FitArgs),
    /// Sweep (C, gamma), score each cell with the validity index.
    Grid(GridArgs),
    /// Generate a benchmark dataset from a named preset.
    Simulate(SimulateArgs),
    /// Recompute the validity index from a saved fit directory.
    Validity(ValidityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Numeric attributes, modularity correction.
    Medoids,
    /// Categorical attributes, modularity correction.
    Modes,
    /// Numeric attributes, adjacency-penalty baseline.
    MedoidsPenalty,
    /// Categorical attributes, adjacency-penalty baseline.
    ModesPenalty,
}

impl Algorithm {
    pub fn is_categorical(&self) -> bool {
        matches!(self, Algorithm::Modes | Algorithm::ModesPenalty)
    }

    pub fn is_penalty(&self) -> bool {
        matches!(self, Algorithm::MedoidsPenalty | Algorithm::ModesPenalty)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Medoids => "medoids",
            Algorithm::Modes => "modes",
            Algorithm::MedoidsPenalty => "medoids-penalty",
            Algorithm::ModesPenalty => "modes-penalty",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "medoids" => Some(Algorithm::Medoids),
            "modes" => Some(Algorithm::Modes),
            "medoids-penalty" => Some(Algorithm::MedoidsPenalty),
            "modes-penalty" => Some(Algorithm::ModesPenalty),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdjacencyFormatArg {
    Dense,
    EdgeList,
}

impl AdjacencyFormatArg {
    pub fn name(&self) -> &'static str {
        match self {
            AdjacencyFormatArg::Dense => "dense",
            AdjacencyFormatArg::EdgeList => "edge-list",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "dense" => Some(AdjacencyFormatArg::Dense),
            "edge-list" => Some(AdjacencyFormatArg::EdgeList),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CutoffRuleArg {
    /// Crisp when the top membership is >= the cutoff.
    Geq,
    /// Crisp only when the top membership exceeds the cutoff.
    Strict,
}

impl CutoffRuleArg {
    pub fn name(&self) -> &'static str {
        match self {
            CutoffRuleArg::Geq => "geq",
            CutoffRuleArg::Strict => "strict",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "geq" => Some(CutoffRuleArg::Geq),
            "strict" => Some(CutoffRuleArg::Strict),
            _ => None,
        }
    }
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Attribute CSV: header row, leading unit-identifier column.
    #[arg(long)]
    pub attributes: PathBuf,

    /// Adjacency file (dense CSV or src,dst[,weight] edge list).
    #[arg(long)]
    pub adjacency: PathBuf,

    #[arg(long, value_enum, default_value = "dense")]
    pub adjacency_format: AdjacencyFormatArg,

    /// Category schema for categorical data: one `name: cat1,cat2,...` line
    /// per attribute. Without it, domains are inferred and sorted.
    #[arg(long)]
    pub schema: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, value_enum)]
    pub algorithm: Algorithm,

    #[command(flatten)]
    pub data: DataArgs,

    /// Number of clusters.
    #[arg(long)]
    pub c: usize,

    /// Modularity weight in [0,1] (medoids/modes algorithms).
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Penalty weight in [0,1] (penalty algorithms).
    #[arg(long)]
    pub beta: Option<f64>,

    /// Entropy weight; larger values give fuzzier partitions.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,

    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,

    #[arg(long, default_value_t = 1e-9)]
    pub conv_tol: f64,

    #[arg(long, default_value_t = 10)]
    pub restarts: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Membership cutoff for the crisp label column.
    #[arg(long, default_value_t = 0.7)]
    pub cutoff: f64,

    #[arg(long, value_enum, default_value = "geq")]
    pub cutoff_rule: CutoffRuleArg,

    /// Categorical fits: drop the (1-gamma) weight on the distance term in
    /// the membership update (legacy variant).
    #[arg(long)]
    pub unweighted_attr_update: bool,

    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Only the modularity-corrected algorithms are grid-searched.
    #[arg(long, value_enum)]
    pub algorithm: Algorithm,

    #[command(flatten)]
    pub data: DataArgs,

    /// Cluster counts as start:stop[:step], bounds inclusive.
    #[arg(long)]
    pub c_range: String,

    /// Gamma values as start:stop:step, bounds inclusive.
    #[arg(long)]
    pub gamma_range: String,

    #[arg(long, default_value_t = 1.0)]
    pub p: f64,

    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,

    #[arg(long, default_value_t = 1e-9)]
    pub conv_tol: f64,

    #[arg(long, default_value_t = 50)]
    pub restarts: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Include self-pairs in the validity index's modularity sum.
    #[arg(long)]
    pub include_self_pairs: bool,

    #[arg(long)]
    pub unweighted_attr_update: bool,

    /// Cutoff used for the best cell's crisp labels.
    #[arg(long, default_value_t = 0.7)]
    pub cutoff: f64,

    #[arg(long, value_enum, default_value = "geq")]
    pub cutoff_rule: CutoffRuleArg,

    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Preset name (`paper-4.1` numeric, `paper-4.2` categorical).
    #[arg(long)]
    pub preset: String,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidityArgs {
    /// Directory written by `modclust fit`.
    #[arg(long)]
    pub run_dir: PathBuf,

    /// Override the self-pair setting stored in the manifest.
    #[arg(long)]
    pub include_self_pairs: bool,
}

/// Parses `start:stop[:step]` into an inclusive integer range.
pub fn parse_usize_range(text: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 && parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "range '{text}' must be start:stop[:step]"
        )));
    }
    let parse = |s: &str| -> Result<usize> {
        s.parse()
            .map_err(|_| CliError::Usage(format!("'{s}' is not a non-negative integer")))
    };
    let start = parse(parts[0])?;
    let stop = parse(parts[1])?;
    let step = if parts.len() == 3 { parse(parts[2])? } else { 1 };
    if step == 0 || stop < start {
        return Err(CliError::Usage(format!(
            "range '{text}' must be increasing with a positive step"
        )));
    }
    Ok((start..=stop).step_by(step).collect())
}

/// Parses `start:stop:step` into an inclusive float grid.
pub fn parse_float_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "range '{text}' must be start:stop:step"
        )));
    }
    let parse = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| CliError::Usage(format!("'{s}' is not a number")))
    };
    let start = parse(parts[0])?;
    let stop = parse(parts[1])?;
    let step = parse(parts[2])?;
    if !(step > 0.0) || stop < start {
        return Err(CliError::Usage(format!(
            "range '{text}' must be increasing with a positive step"
        )));
    }
    let mut values = Vec::new();
    let mut k = 0u32;
    loop {
        let v = start + f64::from(k) * step;
        if v > stop + step * 1e-9 {
            break;
        }
        values.push(v);
        k += 1;
    }
    Ok(values)
}
