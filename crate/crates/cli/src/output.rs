//! Result serialization.
//!
//! Every run directory gets machine-precision CSV files plus a `display/`
//! tier rounded to two decimals in the layout of a published membership
//! table, and a `manifest.json` sufficient to reproduce the run.

use std::fs;
use std::path::Path;

use modclust_core::datagen::{AttributeData, GeneratedDataset};
use modclust_core::validity::{CellOutcome, GridResult, ValidityTable};
use modclust_core::{
    CrispLabel, CrispPartition, Domain, FitResult, MedoidSet, MembershipMatrix, ModeSet,
    Prototypes,
};
use ndarray::Array2;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::manifest::RunManifest;

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| CliError::io(format!("creating {}", path.display()), e))
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::WriterBuilder::new()
        .from_path(path)
        .map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })
}

fn crisp_label_text(label: &CrispLabel) -> String {
    match label {
        CrispLabel::Cluster(c) => (c + 1).to_string(),
        CrispLabel::Fuzzy => "Fuzzy".into(),
    }
}

/// `memberships.csv`: unit id, one full-precision column per cluster, crisp
/// label. Reloading reproduces the matrix bit for bit.
pub fn write_memberships(
    path: &Path,
    ids: &[String],
    u: &MembershipMatrix,
    crisp: &CrispPartition,
) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["unit".to_string()];
    header.extend((1..=u.n_clusters()).map(|c| format!("u{c}")));
    header.push("crisp".into());
    w.write_record(&header).map_err(write_err(path))?;
    for (n, id) in ids.iter().enumerate() {
        let mut record = vec![id.clone()];
        record.extend((0..u.n_clusters()).map(|c| format!("{}", u.entries()[[n, c]])));
        record.push(crisp_label_text(&crisp.labels[n]));
        w.write_record(&record).map_err(write_err(path))?;
    }
    w.flush().map_err(|e| CliError::io("flushing csv", e))
}

/// Two-decimal display tier of the membership table.
pub fn write_memberships_display(
    path: &Path,
    ids: &[String],
    u: &MembershipMatrix,
    crisp: &CrispPartition,
) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["unit".to_string()];
    header.extend((1..=u.n_clusters()).map(|c| format!("u{c}")));
    header.push("crisp".into());
    w.write_record(&header).map_err(write_err(path))?;
    for (n, id) in ids.iter().enumerate() {
        let mut record = vec![id.clone()];
        record.extend((0..u.n_clusters()).map(|c| format!("{:.2}", u.entries()[[n, c]])));
        record.push(crisp_label_text(&crisp.labels[n]));
        w.write_record(&record).map_err(write_err(path))?;
    }
    w.flush().map_err(|e| CliError::io("flushing csv", e))
}

/// Reads a membership file back: identifiers, matrix, crisp labels.
pub fn read_memberships(path: &Path) -> Result<(Vec<String>, MembershipMatrix, Vec<String>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let n_clusters = headers.len().saturating_sub(2);
    if n_clusters == 0 {
        return Err(CliError::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "expected unit, membership columns, crisp".into(),
        });
    }
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
        ids.push(record[0].to_string());
        let mut row = Vec::with_capacity(n_clusters);
        for c in 0..n_clusters {
            row.push(record[c + 1].parse::<f64>().map_err(|_| CliError::Parse {
                path: path.display().to_string(),
                line: record.position().map_or(0, |p| p.line() as usize),
                message: format!("'{}' is not a number", &record[c + 1]),
            })?);
        }
        rows.push(row);
        labels.push(record[n_clusters + 1].to_string());
    }
    let mut entries = Array2::zeros((rows.len(), n_clusters));
    for (r, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            entries[[r, c]] = v;
        }
    }
    Ok((ids, MembershipMatrix::new(entries)?, labels))
}

/// `prototypes.csv`: `cluster,unit` rows for medoids, `cluster,<attrs...>`
/// category rows for modes.
pub fn write_prototypes(
    path: &Path,
    prototypes: &Prototypes,
    ids: &[String],
    domains: Option<&[Domain]>,
) -> Result<()> {
    let mut w = writer(path)?;
    match prototypes {
        Prototypes::Medoids(medoids) => {
            w.write_record(["cluster", "unit"]).map_err(write_err(path))?;
            for (c, &idx) in medoids.indices().iter().enumerate() {
                w.write_record([(c + 1).to_string(), ids[idx].clone()])
                    .map_err(write_err(path))?;
            }
        }
        Prototypes::Modes(modes) => {
            let domains = domains.expect("mode prototypes come with domains");
            let mut header = vec!["cluster".to_string()];
            header.extend(domains.iter().map(|d| d.name.clone()));
            w.write_record(&header).map_err(write_err(path))?;
            for c in 0..modes.n_clusters() {
                let mut record = vec![(c + 1).to_string()];
                for (i, domain) in domains.iter().enumerate() {
                    record.push(domain.categories[modes.entries()[[c, i]] as usize].clone());
                }
                w.write_record(&record).map_err(write_err(path))?;
            }
        }
    }
    w.flush().map_err(|e| CliError::io("flushing csv", e))
}

pub fn read_medoid_prototypes(path: &Path, ids: &[String]) -> Result<MedoidSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
    let mut indices = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
        let unit = &record[1];
        let idx = ids
            .iter()
            .position(|id| id == unit)
            .ok_or_else(|| CliError::IdentifierMismatch(unit.to_string()))?;
        indices.push(idx);
    }
    Ok(MedoidSet::new(indices, ids.len())?)
}

pub fn read_mode_prototypes(path: &Path, domains: &[Domain]) -> Result<ModeSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let mut row = Vec::with_capacity(domains.len());
        for (i, domain) in domains.iter().enumerate() {
            let cell = &record[i + 1];
            let code = domain
                .categories
                .iter()
                .position(|cat| cat == cell)
                .ok_or_else(|| CliError::Parse {
                    path: path.display().to_string(),
                    line,
                    message: format!(
                        "category '{cell}' is not in the domain of attribute '{}'",
                        domain.name
                    ),
                })?;
            row.push(code as u32);
        }
        rows.push(row);
    }
    let mut entries = Array2::zeros((rows.len(), domains.len()));
    for (r, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            entries[[r, c]] = v;
        }
    }
    Ok(ModeSet::new(entries, domains)?)
}

/// `validity.csv`: rows indexed by C, columns by gamma. Degenerate cells
/// print `inf`, failed cells stay empty.
pub fn write_validity_table(path: &Path, table: &ValidityTable) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["C".to_string()];
    header.extend(table.gamma_values.iter().map(|g| format!("{g}")));
    w.write_record(&header).map_err(write_err(path))?;
    for (ci, &c) in table.c_values.iter().enumerate() {
        let mut record = vec![c.to_string()];
        for gi in 0..table.gamma_values.len() {
            record.push(match table.get(ci, gi) {
                Some(v) if v.is_infinite() => "inf".into(),
                Some(v) => format!("{v}"),
                None => String::new(),
            });
        }
        w.write_record(&record).map_err(write_err(path))?;
    }
    w.flush().map_err(|e| CliError::io("flushing csv", e))
}

/// Parses a validity table in the exported layout.
pub fn read_validity_table(path: &Path) -> Result<ValidityTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let gamma_values: Vec<f64> = headers
        .iter()
        .skip(1)
        .map(|h| {
            h.parse::<f64>().map_err(|_| CliError::Parse {
                path: path.display().to_string(),
                line: 1,
                message: format!("'{h}' is not a gamma value"),
            })
        })
        .collect::<Result<_>>()?;
    let mut c_values = Vec::new();
    let mut cells = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        c_values.push(record[0].parse::<usize>().map_err(|_| CliError::Parse {
            path: path.display().to_string(),
            line,
            message: format!("'{}' is not a cluster count", &record[0]),
        })?);
        for gi in 0..gamma_values.len() {
            let cell = &record[gi + 1];
            cells.push(if cell.is_empty() {
                None
            } else {
                Some(cell.parse::<f64>().map_err(|_| CliError::Parse {
                    path: path.display().to_string(),
                    line,
                    message: format!("'{cell}' is not a validity value"),
                })?)
            });
        }
    }
    Ok(ValidityTable::new(c_values, gamma_values, cells))
}

#[derive(Serialize)]
struct FitSummary<'a> {
    algorithm: &'a str,
    n_units: usize,
    n_clusters: usize,
    objective: f64,
    n_iterations: usize,
    converged: bool,
    restart_index: usize,
}

/// Writes the full file set of one fit into `out_dir`.
pub fn save_fit(
    out_dir: &Path,
    algorithm: &str,
    ids: &[String],
    attributes: &AttributeData,
    fit: &FitResult,
    crisp: &CrispPartition,
    manifest: &RunManifest,
) -> Result<()> {
    create_dir(out_dir)?;
    create_dir(&out_dir.join("display"))?;
    create_dir(&out_dir.join("plotdata"))?;

    write_memberships(&out_dir.join("memberships.csv"), ids, &fit.membership, crisp)?;
    write_memberships_display(
        &out_dir.join("display").join("memberships.csv"),
        ids,
        &fit.membership,
        crisp,
    )?;
    let domains = match attributes {
        AttributeData::Categorical(x) => Some(x.domains()),
        AttributeData::Numeric(_) => None,
    };
    write_prototypes(&out_dir.join("prototypes.csv"), &fit.prototypes, ids, domains)?;

    let summary = FitSummary {
        algorithm,
        n_units: fit.membership.n_units(),
        n_clusters: fit.membership.n_clusters(),
        objective: fit.objective,
        n_iterations: fit.n_iterations,
        converged: fit.converged,
        restart_index: fit.restart_index,
    };
    let summary_path = out_dir.join("fit_summary.json");
    std::fs::write(
        &summary_path,
        serde_json::to_string_pretty(&summary)
            .map_err(|e| CliError::Data(format!("serializing summary: {e}")))?
            + "\n",
    )
    .map_err(|e| CliError::io(format!("writing {}", summary_path.display()), e))?;

    write_membership_lines(&out_dir.join("plotdata").join("membership_lines.csv"), ids, fit)?;
    if let AttributeData::Numeric(x) = attributes {
        write_attribute_scatter(
            &out_dir.join("plotdata").join("attribute_scatter.csv"),
            ids,
            x.entries(),
            fit,
        )?;
    }
    manifest.write(&out_dir.join("manifest.json"))
}

/// Per-unit membership lines (one column per cluster), the data behind a
/// membership line plot.
fn write_membership_lines(path: &Path, ids: &[String], fit: &FitResult) -> Result<()> {
    let u = &fit.membership;
    let mut w = writer(path)?;
    let mut header = vec!["index".to_string(), "unit".to_string()];
    header.extend((1..=u.n_clusters()).map(|c| format!("u{c}")));
    w.write_record(&header).map_err(write_err(path))?;
    for (n, id) in ids.iter().enumerate() {
        let mut record = vec![(n + 1).to_string(), id.clone()];
        record.extend((0..u.n_clusters()).map(|c| format!("{:.6}", u.entries()[[n, c]])));
        w.write_record(&record).map_err(write_err(path))?;
    }
    w.flush().map_err(|e| CliError::io("flushing csv", e))
}

/// Attribute coordinates with argmax cluster and its membership, the data
/// behind a colored scatter plot.
fn write_attribute_scatter(
    path: &Path,
    ids: &[String],
    attrs: &Array2<f64>,
    fit: &FitResult,
) -> Result<()> {
    let u = &fit.membership;
    let labels = u.argmax_labels();
    let mut w = writer(path)?;
    let mut header = vec!["unit".to_string()];
    header.extend((1..=attrs.ncols()).map(|i| format!("a{i}")));
    header.push("cluster".into());
    header.push("membership".into());
    w.write_record(&header).map_err(write_err(path))?;
    for (n, id) in ids.iter().enumerate() {
        let mut record = vec![id.clone()];
        record.extend((0..attrs.ncols()).map(|i| format!("{}", attrs[[n, i]])));
        record.push((labels[n] + 1).to_string());
        record.push(format!("{:.6}", u.entries()[[n, labels[n]]]));
        w.write_record(&record).map_err(write_err(path))?;
    }
    w.flush().map_err(|e| CliError::io("flushing csv", e))
}

#[derive(Serialize)]
struct GridCellMeta {
    c: usize,
    gamma: f64,
    seed: u64,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    validity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    objective: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    restart_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Writes `validity.csv`, per-cell metadata, the manifest, and the best
/// cell's fit files under `best/`.
pub fn save_grid(
    out_dir: &Path,
    algorithm: &str,
    ids: &[String],
    attributes: &AttributeData,
    grid: &GridResult,
    best_crisp: Option<&CrispPartition>,
    manifest: &RunManifest,
) -> Result<()> {
    create_dir(out_dir)?;
    write_validity_table(&out_dir.join("validity.csv"), &grid.table)?;

    let meta: Vec<GridCellMeta> = grid
        .cells
        .iter()
        .map(|cell| match &cell.outcome {
            CellOutcome::Fitted { fit, validity } => GridCellMeta {
                c: cell.n_clusters,
                gamma: cell.gamma,
                seed: cell.seed,
                status: "ok",
                validity: Some(*validity),
                objective: Some(fit.objective),
                converged: Some(fit.converged),
                iterations: Some(fit.n_iterations),
                restart_index: Some(fit.restart_index),
                error: None,
            },
            CellOutcome::Degenerate { fit } => GridCellMeta {
                c: cell.n_clusters,
                gamma: cell.gamma,
                seed: cell.seed,
                status: "degenerate",
                validity: None,
                objective: Some(fit.objective),
                converged: Some(fit.converged),
                iterations: Some(fit.n_iterations),
                restart_index: Some(fit.restart_index),
                error: None,
            },
            CellOutcome::Failed(message) => GridCellMeta {
                c: cell.n_clusters,
                gamma: cell.gamma,
                seed: cell.seed,
                status: "failed",
                validity: None,
                objective: None,
                converged: None,
                iterations: None,
                restart_index: None,
                error: Some(message.clone()),
            },
        })
        .collect();
    let cells_path = out_dir.join("grid_cells.json");
    std::fs::write(
        &cells_path,
        serde_json::to_string_pretty(&meta)
            .map_err(|e| CliError::Data(format!("serializing grid metadata: {e}")))?
            + "\n",
    )
    .map_err(|e| CliError::io(format!("writing {}", cells_path.display()), e))?;

    if let (Some((cell, fit)), Some(crisp)) = (grid.best_fit(), best_crisp) {
        let best_dir = out_dir.join("best");
        create_dir(&best_dir)?;
        write_memberships(&best_dir.join("memberships.csv"), ids, &fit.membership, crisp)?;
        let domains = match attributes {
            AttributeData::Categorical(x) => Some(x.domains()),
            AttributeData::Numeric(_) => None,
        };
        write_prototypes(&best_dir.join("prototypes.csv"), &fit.prototypes, ids, domains)?;
        let summary = FitSummary {
            algorithm,
            n_units: fit.membership.n_units(),
            n_clusters: cell.n_clusters,
            objective: fit.objective,
            n_iterations: fit.n_iterations,
            converged: fit.converged,
            restart_index: fit.restart_index,
        };
        std::fs::write(
            best_dir.join("fit_summary.json"),
            serde_json::to_string_pretty(&summary)
                .map_err(|e| CliError::Data(format!("serializing summary: {e}")))?
                + "\n",
        )
        .map_err(|e| CliError::io("writing best-cell summary", e))?;
    }
    manifest.write(&out_dir.join("manifest.json"))
}

/// Writes a generated dataset: attributes, edge list, ground-truth blocks,
/// and (for categorical data) the schema file.
pub fn save_simulation(
    out_dir: &Path,
    ids: &[String],
    dataset: &GeneratedDataset,
    manifest: &RunManifest,
) -> Result<()> {
    create_dir(out_dir)?;

    let attr_path = out_dir.join("attributes.csv");
    match &dataset.attributes {
        AttributeData::Numeric(x) => {
            let mut w = writer(&attr_path)?;
            let mut header = vec!["unit".to_string()];
            header.extend((1..=x.n_attrs()).map(|i| format!("a{i}")));
            w.write_record(&header).map_err(write_err(&attr_path))?;
            for (n, id) in ids.iter().enumerate() {
                let mut record = vec![id.clone()];
                record.extend((0..x.n_attrs()).map(|i| format!("{}", x.entries()[[n, i]])));
                w.write_record(&record).map_err(write_err(&attr_path))?;
            }
            w.flush().map_err(|e| CliError::io("flushing csv", e))?;
        }
        AttributeData::Categorical(x) => {
            let mut w = writer(&attr_path)?;
            let mut header = vec!["unit".to_string()];
            header.extend(x.domains().iter().map(|d| d.name.clone()));
            w.write_record(&header).map_err(write_err(&attr_path))?;
            for (n, id) in ids.iter().enumerate() {
                let mut record = vec![id.clone()];
                for (i, domain) in x.domains().iter().enumerate() {
                    record.push(domain.categories[x.entries()[[n, i]] as usize].clone());
                }
                w.write_record(&record).map_err(write_err(&attr_path))?;
            }
            w.flush().map_err(|e| CliError::io("flushing csv", e))?;

            let schema_path = out_dir.join("schema.txt");
            let mut lines = String::new();
            for domain in x.domains() {
                lines.push_str(&format!(
                    "{}: {}\n",
                    domain.name,
                    domain.categories.join(",")
                ));
            }
            std::fs::write(&schema_path, lines)
                .map_err(|e| CliError::io(format!("writing {}", schema_path.display()), e))?;
        }
    }

    let adj_path = out_dir.join("adjacency.csv");
    let mut w = writer(&adj_path)?;
    w.write_record(["src", "dst"]).map_err(write_err(&adj_path))?;
    let a = dataset.adjacency.entries();
    for n in 0..dataset.adjacency.n_units() {
        for m in (n + 1)..dataset.adjacency.n_units() {
            if a[[n, m]] > 0.0 {
                w.write_record([ids[n].clone(), ids[m].clone()])
                    .map_err(write_err(&adj_path))?;
            }
        }
    }
    w.flush().map_err(|e| CliError::io("flushing csv", e))?;

    let blocks_path = out_dir.join("blocks.csv");
    let mut w = writer(&blocks_path)?;
    w.write_record(["unit", "block"]).map_err(write_err(&blocks_path))?;
    for (n, id) in ids.iter().enumerate() {
        w.write_record([id.clone(), (dataset.block_labels[n] + 1).to_string()])
            .map_err(write_err(&blocks_path))?;
    }
    w.flush().map_err(|e| CliError::io("flushing csv", e))?;

    manifest.write(&out_dir.join("manifest.json"))
}

fn write_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::Parse {
        path: path.display().to_string(),
        line: 0,
        message: e.to_string(),
    }
}
