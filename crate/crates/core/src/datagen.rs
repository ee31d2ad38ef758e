//! Seeded generators for benchmark datasets: stochastic block model
//! networks, disk-sampled numeric attributes, and probability-table
//! categorical attributes. Two ready-made scenarios over 95 units (three
//! blocks of 30 plus 5 deliberately ambiguous units) ship as named presets.

use ndarray::Array2;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::error::{CoreError, Result};
use crate::graph::AdjacencyMatrix;
use crate::medoids::NumericAttributeMatrix;
use crate::membership::ROW_SUM_TOLERANCE;
use crate::modes::{CategoricalAttributeMatrix, Domain};
use crate::seed::{mix_seed, restart_rng};

/// Attribute table of either kind.
#[derive(Debug, Clone)]
pub enum AttributeData {
    Numeric(NumericAttributeMatrix),
    Categorical(CategoricalAttributeMatrix),
}

impl AttributeData {
    pub fn n_units(&self) -> usize {
        match self {
            AttributeData::Numeric(x) => x.n_units(),
            AttributeData::Categorical(x) => x.n_units(),
        }
    }
}

/// Stochastic block model: an undirected edge between units of blocks `k`
/// and `l` appears independently with probability `prob_matrix[k][l]`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SbmSpec {
    pub block_sizes: Vec<usize>,
    pub prob_matrix: Vec<Vec<f64>>,
    pub seed: u64,
}

impl SbmSpec {
    fn validate(&self) -> Result<()> {
        let k = self.block_sizes.len();
        if k == 0 || self.block_sizes.iter().any(|&s| s == 0) {
            return Err(CoreError::InvalidInput(
                "block sizes must be positive".into(),
            ));
        }
        if self.prob_matrix.len() != k || self.prob_matrix.iter().any(|row| row.len() != k) {
            return Err(CoreError::InvalidInput(format!(
                "probability matrix must be {k}x{k}"
            )));
        }
        for i in 0..k {
            for j in 0..k {
                let p = self.prob_matrix[i][j];
                if !(0.0..=1.0).contains(&p) {
                    return Err(CoreError::InvalidInput(format!(
                        "edge probability ({i},{j}) = {p} outside [0, 1]"
                    )));
                }
                if self.prob_matrix[i][j] != self.prob_matrix[j][i] {
                    return Err(CoreError::InvalidInput(
                        "probability matrix must be symmetric".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn n_units(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// Block index of every unit, blocks laid out consecutively.
    pub fn block_labels(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .enumerate()
            .flat_map(|(k, &size)| std::iter::repeat(k).take(size))
            .collect()
    }
}

/// Draws one network from the block model. Isolated units are kept; the
/// empty graph is representable and only rejected once modularity is needed.
pub fn generate_sbm(spec: &SbmSpec) -> Result<AdjacencyMatrix> {
    spec.validate()?;
    let n = spec.n_units();
    let labels = spec.block_labels();
    let mut rng = restart_rng(spec.seed, 0);
    let mut entries = Array2::zeros((n, n));
    for src in 0..n {
        for dst in (src + 1)..n {
            let p = spec.prob_matrix[labels[src]][labels[dst]];
            if rng.gen::<f64>() < p {
                entries[[src, dst]] = 1.0;
                entries[[dst, src]] = 1.0;
            }
        }
    }
    AdjacencyMatrix::from_dense(entries)
}

/// One block's sampling disk for the numeric generator.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CircleSpec {
    pub center: [f64; 2],
    pub radius: f64,
    pub count: usize,
}

/// Numeric attribute generator: each unit's 2-d attribute vector is drawn
/// uniformly over its block's disk (uniform in area, not on the rim).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CircleAttrSpec {
    pub circles: Vec<CircleSpec>,
}

impl CircleAttrSpec {
    fn validate(&self) -> Result<()> {
        if self.circles.is_empty() {
            return Err(CoreError::InvalidInput("no sampling disks given".into()));
        }
        for (k, c) in self.circles.iter().enumerate() {
            if !(c.radius > 0.0 && c.radius.is_finite()) {
                return Err(CoreError::InvalidInput(format!(
                    "disk {k} has non-positive radius {}",
                    c.radius
                )));
            }
            if c.count == 0 {
                return Err(CoreError::InvalidInput(format!("disk {k} has count 0")));
            }
        }
        Ok(())
    }

    pub fn n_units(&self) -> usize {
        self.circles.iter().map(|c| c.count).sum()
    }
}

pub fn generate_circle_attributes(
    spec: &CircleAttrSpec,
    seed: u64,
) -> Result<NumericAttributeMatrix> {
    spec.validate()?;
    let n = spec.n_units();
    let mut rng = restart_rng(seed, 0);
    let mut entries = Array2::zeros((n, 2));
    let mut row = 0;
    for circle in &spec.circles {
        for _ in 0..circle.count {
            // Uniform over the disk: radius scaled by sqrt of a uniform.
            let r = circle.radius * rng.gen::<f64>().sqrt();
            let theta = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
            entries[[row, 0]] = circle.center[0] + r * theta.cos();
            entries[[row, 1]] = circle.center[1] + r * theta.sin();
            row += 1;
        }
    }
    NumericAttributeMatrix::new(entries)
}

/// One block's per-attribute category distributions:
/// `column_probs[i][v]` is the probability that attribute `i` takes the
/// `v`-th category.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BlockAttrTable {
    pub count: usize,
    pub column_probs: Vec<Vec<f64>>,
}

/// Categorical attribute generator over one shared category set.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CategoricalAttrSpec {
    pub categories: Vec<String>,
    pub blocks: Vec<BlockAttrTable>,
}

impl CategoricalAttrSpec {
    fn validate(&self) -> Result<()> {
        if self.categories.is_empty() {
            return Err(CoreError::InvalidInput("no categories given".into()));
        }
        if self.blocks.is_empty() {
            return Err(CoreError::InvalidInput("no blocks given".into()));
        }
        let n_attrs = self.blocks[0].column_probs.len();
        if n_attrs == 0 {
            return Err(CoreError::InvalidInput("no attribute columns".into()));
        }
        for (k, block) in self.blocks.iter().enumerate() {
            if block.count == 0 {
                return Err(CoreError::InvalidInput(format!("block {k} has count 0")));
            }
            if block.column_probs.len() != n_attrs {
                return Err(CoreError::InvalidInput(format!(
                    "block {k} has {} attribute columns, expected {n_attrs}",
                    block.column_probs.len()
                )));
            }
            for (i, probs) in block.column_probs.iter().enumerate() {
                if probs.len() != self.categories.len() {
                    return Err(CoreError::InvalidInput(format!(
                        "block {k} attribute {i} has {} probabilities for {} categories",
                        probs.len(),
                        self.categories.len()
                    )));
                }
                let sum: f64 = probs.iter().sum();
                if probs.iter().any(|&p| !(0.0..=1.0).contains(&p))
                    || (sum - 1.0).abs() > ROW_SUM_TOLERANCE
                {
                    return Err(CoreError::InvalidInput(format!(
                        "block {k} attribute {i} probabilities must be non-negative and sum to 1"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n_units(&self) -> usize {
        self.blocks.iter().map(|b| b.count).sum()
    }

    pub fn n_attrs(&self) -> usize {
        self.blocks[0].column_probs.len()
    }
}

pub fn generate_categorical_attributes(
    spec: &CategoricalAttrSpec,
    seed: u64,
) -> Result<CategoricalAttributeMatrix> {
    spec.validate()?;
    let n = spec.n_units();
    let n_attrs = spec.n_attrs();
    let mut rng = restart_rng(seed, 0);
    let mut entries = Array2::zeros((n, n_attrs));
    let mut row = 0;
    for block in &spec.blocks {
        for _ in 0..block.count {
            for (i, probs) in block.column_probs.iter().enumerate() {
                entries[[row, i]] = sample_category(probs, &mut rng);
            }
            row += 1;
        }
    }
    let domains = (0..n_attrs)
        .map(|i| Domain {
            name: format!("a{}", i + 1),
            categories: spec.categories.clone(),
        })
        .collect();
    CategoricalAttributeMatrix::new(entries, domains)
}

/// Inverse-CDF draw; zero-probability categories can never be selected.
fn sample_category<R: Rng>(probs: &[f64], rng: &mut R) -> u32 {
    let x = rng.gen::<f64>();
    let mut cumulative = 0.0;
    for (v, &p) in probs.iter().enumerate() {
        cumulative += p;
        if p > 0.0 && x < cumulative {
            return v as u32;
        }
    }
    // Rounding pushed the total below 1; fall back to the last positive
    // category.
    probs
        .iter()
        .rposition(|&p| p > 0.0)
        .expect("probabilities sum to 1") as u32
}

/// The two built-in benchmark scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimulationPreset {
    /// 95 units, 2 numeric attributes sampled from four unit disks, SBM
    /// network over blocks 30/30/30/5.
    NumericCircles,
    /// Same network layout with 10 categorical attributes over {A..E} drawn
    /// from per-block probability tables.
    CategoricalTables,
}

impl SimulationPreset {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "paper-4.1" => Some(Self::NumericCircles),
            "paper-4.2" => Some(Self::CategoricalTables),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::NumericCircles => "paper-4.1",
            Self::CategoricalTables => "paper-4.2",
        }
    }

    pub const ALL_NAMES: [&'static str; 2] = ["paper-4.1", "paper-4.2"];
}

/// Parameters of the numeric preset, stored as a data file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NumericPreset {
    pub block_sizes: Vec<usize>,
    pub prob_matrix: Vec<Vec<f64>>,
    pub circles: Vec<CircleSpec>,
}

/// Parameters of the categorical preset, stored as a data file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CategoricalPreset {
    pub block_sizes: Vec<usize>,
    pub prob_matrix: Vec<Vec<f64>>,
    pub categories: Vec<String>,
    pub block_tables: Vec<Vec<Vec<f64>>>,
}

pub const NUMERIC_PRESET_JSON: &str = include_str!("../presets/numeric_circles.json");
pub const CATEGORICAL_PRESET_JSON: &str = include_str!("../presets/categorical_tables.json");

pub fn numeric_preset() -> &'static NumericPreset {
    static PRESET: OnceLock<NumericPreset> = OnceLock::new();
    PRESET.get_or_init(|| serde_json::from_str(NUMERIC_PRESET_JSON).expect("valid preset file"))
}

pub fn categorical_preset() -> &'static CategoricalPreset {
    static PRESET: OnceLock<CategoricalPreset> = OnceLock::new();
    PRESET
        .get_or_init(|| serde_json::from_str(CATEGORICAL_PRESET_JSON).expect("valid preset file"))
}

/// A generated scenario: attributes, network, and the ground-truth block of
/// every unit.
#[derive(Debug, Clone)]
pub struct GeneratedDataset {
    pub attributes: AttributeData,
    pub adjacency: AdjacencyMatrix,
    pub block_labels: Vec<usize>,
}

const NETWORK_SALT: u64 = 0x6e65_7477; // "netw"
const ATTRIBUTE_SALT: u64 = 0x6174_7472; // "attr"

/// Instantiates a preset with one base seed; the network and the attributes
/// draw from independent derived streams.
pub fn generate_preset(preset: SimulationPreset, seed: u64) -> Result<GeneratedDataset> {
    match preset {
        SimulationPreset::NumericCircles => {
            let def = numeric_preset();
            let sbm = SbmSpec {
                block_sizes: def.block_sizes.clone(),
                prob_matrix: def.prob_matrix.clone(),
                seed: mix_seed(seed, NETWORK_SALT),
            };
            let circles = CircleAttrSpec {
                circles: def.circles.clone(),
            };
            if circles.n_units() != sbm.n_units() {
                return Err(CoreError::InvalidInput(
                    "preset disk counts disagree with block sizes".into(),
                ));
            }
            let adjacency = generate_sbm(&sbm)?;
            let attrs = generate_circle_attributes(&circles, mix_seed(seed, ATTRIBUTE_SALT))?;
            Ok(GeneratedDataset {
                attributes: AttributeData::Numeric(attrs),
                adjacency,
                block_labels: sbm.block_labels(),
            })
        }
        SimulationPreset::CategoricalTables => {
            let def = categorical_preset();
            let sbm = SbmSpec {
                block_sizes: def.block_sizes.clone(),
                prob_matrix: def.prob_matrix.clone(),
                seed: mix_seed(seed, NETWORK_SALT),
            };
            let blocks = def
                .block_sizes
                .iter()
                .zip(&def.block_tables)
                .map(|(&count, table)| BlockAttrTable {
                    count,
                    column_probs: table.clone(),
                })
                .collect();
            let spec = CategoricalAttrSpec {
                categories: def.categories.clone(),
                blocks,
            };
            if spec.n_units() != sbm.n_units() {
                return Err(CoreError::InvalidInput(
                    "preset table counts disagree with block sizes".into(),
                ));
            }
            let adjacency = generate_sbm(&sbm)?;
            let attrs = generate_categorical_attributes(&spec, mix_seed(seed, ATTRIBUTE_SALT))?;
            Ok(GeneratedDataset {
                attributes: AttributeData::Categorical(attrs),
                adjacency,
                block_labels: sbm.block_labels(),
            })
        }
    }
}
