//! CSV ingestion: attribute tables, adjacency (dense or edge list), and
//! categorical schema files.

use std::collections::HashMap;
use std::path::Path;

use modclust_core::datagen::AttributeData;
use modclust_core::modes::CategoryCode;
use modclust_core::{AdjacencyMatrix, CategoricalAttributeMatrix, Domain, NumericAttributeMatrix};
use ndarray::Array2;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjacencyFormat {
    /// N x N matrix of numbers, no header, row order matching the attribute
    /// file.
    Dense,
    /// `src,dst[,weight]` rows with a header, identifiers resolved against
    /// the attribute file.
    EdgeList,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeKind {
    Numeric,
    Categorical,
}

/// A loaded and cross-validated dataset: attribute rows, network, and the
/// shared unit identifiers in file order.
#[derive(Debug, Clone)]
pub struct DatasetBundle {
    pub ids: Vec<String>,
    pub attributes: AttributeData,
    pub adjacency: AdjacencyMatrix,
}

pub fn load_dataset(
    attr_path: &Path,
    adj_path: &Path,
    format: AdjacencyFormat,
    kind: AttributeKind,
    schema_path: Option<&Path>,
) -> Result<DatasetBundle> {
    let (ids, attributes) = load_attributes(attr_path, kind, schema_path)?;
    let adjacency = load_adjacency(adj_path, format, &ids)?;
    if adjacency.n_units() != ids.len() {
        return Err(CliError::Data(format!(
            "adjacency covers {} units but the attribute file has {}",
            adjacency.n_units(),
            ids.len()
        )));
    }
    Ok(DatasetBundle {
        ids,
        attributes,
        adjacency,
    })
}

pub fn load_attributes(
    path: &Path,
    kind: AttributeKind,
    schema_path: Option<&Path>,
) -> Result<(Vec<String>, AttributeData)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::io(format!("opening {}", path.display()), io_of_csv(e)))?;

    let headers = reader
        .headers()
        .map_err(|e| csv_parse_error(path, &e))?
        .clone();
    if headers.len() < 2 {
        return Err(CliError::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "expected an identifier column plus at least one attribute column".into(),
        });
    }
    let attr_names: Vec<String> = headers.iter().skip(1).map(|s| s.to_string()).collect();

    let mut ids = Vec::new();
    let mut rows: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_parse_error(path, &e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let mut iter = record.iter();
        let id = iter
            .next()
            .ok_or_else(|| CliError::Parse {
                path: path.display().to_string(),
                line,
                message: "empty row".into(),
            })?
            .to_string();
        if id.is_empty() {
            return Err(CliError::MissingValue {
                path: path.display().to_string(),
                line,
                column: headers[0].to_string(),
            });
        }
        ids.push(id);
        rows.push(iter.map(|s| s.to_string()).collect());
    }
    let mut seen = HashMap::new();
    for (row, id) in ids.iter().enumerate() {
        if let Some(first) = seen.insert(id.clone(), row) {
            return Err(CliError::Data(format!(
                "unit identifier '{id}' appears on rows {} and {}",
                first + 2,
                row + 2
            )));
        }
    }

    let attributes = match kind {
        AttributeKind::Numeric => {
            let mut entries = Array2::zeros((rows.len(), attr_names.len()));
            for (r, row) in rows.iter().enumerate() {
                for (c, cell) in row.iter().enumerate() {
                    if cell.is_empty() {
                        return Err(CliError::MissingValue {
                            path: path.display().to_string(),
                            line: r + 2,
                            column: attr_names[c].clone(),
                        });
                    }
                    let value: f64 = cell.parse().map_err(|_| CliError::Parse {
                        path: path.display().to_string(),
                        line: r + 2,
                        message: format!("'{cell}' is not a number (column '{}')", attr_names[c]),
                    })?;
                    if !value.is_finite() {
                        return Err(CliError::Parse {
                            path: path.display().to_string(),
                            line: r + 2,
                            message: format!("non-finite value in column '{}'", attr_names[c]),
                        });
                    }
                    entries[[r, c]] = value;
                }
            }
            AttributeData::Numeric(NumericAttributeMatrix::new(entries)?)
        }
        AttributeKind::Categorical => {
            let domains = match schema_path {
                Some(schema) => read_schema(schema, &attr_names)?,
                None => {
                    eprintln!(
                        "warning: no schema file given; inferring category domains from {} \
                         (sorted lexicographically)",
                        path.display()
                    );
                    infer_domains(&attr_names, &rows)
                }
            };
            let mut entries = Array2::zeros((rows.len(), attr_names.len()));
            for (r, row) in rows.iter().enumerate() {
                for (c, cell) in row.iter().enumerate() {
                    if cell.is_empty() {
                        return Err(CliError::MissingValue {
                            path: path.display().to_string(),
                            line: r + 2,
                            column: attr_names[c].clone(),
                        });
                    }
                    let code = domains[c]
                        .categories
                        .iter()
                        .position(|cat| cat == cell)
                        .ok_or_else(|| CliError::Parse {
                            path: path.display().to_string(),
                            line: r + 2,
                            message: format!(
                                "category '{cell}' is not in the domain of attribute '{}'",
                                attr_names[c]
                            ),
                        })?;
                    entries[[r, c]] = code as CategoryCode;
                }
            }
            AttributeData::Categorical(CategoricalAttributeMatrix::new(entries, domains)?)
        }
    };
    Ok((ids, attributes))
}

/// Schema file: one line per attribute, `name: cat1,cat2,...`, the listed
/// order defining mode tie-break precedence. Lines must match the attribute
/// columns in order.
pub fn read_schema(path: &Path, attr_names: &[String]) -> Result<Vec<Domain>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    let mut domains = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, cats) = line.split_once(':').ok_or_else(|| CliError::Parse {
            path: path.display().to_string(),
            line: idx + 1,
            message: "expected 'name: cat1,cat2,...'".into(),
        })?;
        let categories: Vec<String> = cats
            .split(',')
            .map(|c| c.trim().to_string())
            .filter(|c| !c.is_empty())
            .collect();
        if categories.is_empty() {
            return Err(CliError::Parse {
                path: path.display().to_string(),
                line: idx + 1,
                message: format!("attribute '{}' lists no categories", name.trim()),
            });
        }
        domains.push(Domain {
            name: name.trim().to_string(),
            categories,
        });
    }
    if domains.len() != attr_names.len() {
        return Err(CliError::Data(format!(
            "schema {} defines {} attributes but the data has {}",
            path.display(),
            domains.len(),
            attr_names.len()
        )));
    }
    for (domain, expected) in domains.iter().zip(attr_names) {
        if &domain.name != expected {
            return Err(CliError::Data(format!(
                "schema attribute '{}' does not match data column '{}'",
                domain.name, expected
            )));
        }
    }
    Ok(domains)
}

fn infer_domains(attr_names: &[String], rows: &[Vec<String>]) -> Vec<Domain> {
    attr_names
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let mut categories: Vec<String> = rows
                .iter()
                .map(|row| row[c].clone())
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            categories.sort();
            Domain {
                name: name.clone(),
                categories,
            }
        })
        .collect()
}

pub fn load_adjacency(
    path: &Path,
    format: AdjacencyFormat,
    ids: &[String],
) -> Result<AdjacencyMatrix> {
    match format {
        AdjacencyFormat::Dense => load_dense_adjacency(path),
        AdjacencyFormat::EdgeList => load_edge_list(path, ids),
    }
}

fn load_dense_adjacency(path: &Path) -> Result<AdjacencyMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::io(format!("opening {}", path.display()), io_of_csv(e)))?;
    let mut values: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_parse_error(path, &e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row: Vec<f64> = record
            .iter()
            .enumerate()
            .map(|(col, cell)| {
                cell.parse::<f64>().map_err(|_| CliError::Parse {
                    path: path.display().to_string(),
                    line,
                    message: format!("'{cell}' is not a number (column {})", col + 1),
                })
            })
            .collect::<Result<_>>()?;
        values.push(row);
    }
    let n = values.len();
    if values.iter().any(|row| row.len() != n) {
        return Err(CliError::Data(format!(
            "dense adjacency in {} is not square",
            path.display()
        )));
    }
    let mut entries = Array2::zeros((n, n));
    for (r, row) in values.into_iter().enumerate() {
        for (c, v) in row.into_iter().enumerate() {
            entries[[r, c]] = v;
        }
    }
    Ok(AdjacencyMatrix::from_dense(entries)?)
}

fn load_edge_list(path: &Path, ids: &[String]) -> Result<AdjacencyMatrix> {
    let index: HashMap<&str, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::io(format!("opening {}", path.display()), io_of_csv(e)))?;
    let headers = reader
        .headers()
        .map_err(|e| csv_parse_error(path, &e))?
        .clone();
    if headers.len() < 2 || &headers[0] != "src" || &headers[1] != "dst" {
        return Err(CliError::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "edge list must start with a 'src,dst[,weight]' header".into(),
        });
    }
    let has_weight = headers.len() >= 3 && &headers[2] == "weight";

    let mut edges = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_parse_error(path, &e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let resolve = |name: &str| -> Result<usize> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| CliError::IdentifierMismatch(name.to_string()))
        };
        let src = resolve(&record[0])?;
        let dst = resolve(&record[1])?;
        let weight = if has_weight {
            record[2].parse::<f64>().map_err(|_| CliError::Parse {
                path: path.display().to_string(),
                line,
                message: format!("'{}' is not a number (column 'weight')", &record[2]),
            })?
        } else {
            1.0
        };
        edges.push((src, dst, weight));
    }
    Ok(AdjacencyMatrix::from_edges(ids.len(), &edges)?)
}

fn csv_parse_error(path: &Path, err: &csv::Error) -> CliError {
    let line = err
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or_default();
    CliError::Parse {
        path: path.display().to_string(),
        line,
        message: err.to_string(),
    }
}

fn io_of_csv(err: csv::Error) -> std::io::Error {
    match err.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::other(format!("{other:?}")),
    }
}
