use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Label, LabeledExample, Point};

/// A table of real-valued feature rows with one discrete label column.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// Feature column names, in file order.
    pub feature_names: Vec<String>,
    pub label_column: String,
    /// Label tokens; label `l` is `label_names[l]`, numbered by first appearance.
    pub label_names: Vec<String>,
    pub rows: Vec<LabeledExample>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.feature_names.len()
    }

    pub fn label_id(&self, token: &str) -> Option<Label> {
        self.label_names
            .iter()
            .position(|t| t == token)
            .map(|i| i as Label)
    }

    pub fn feature_index(&self, name_or_index: &str) -> Option<usize> {
        self.feature_names
            .iter()
            .position(|n| n == name_or_index)
            .or_else(|| name_or_index.parse().ok().filter(|&i| i < self.dimension()))
    }
}

/// Reads a headed CSV file. Every column except `label_column` must hold
/// finite reals.
pub fn load_csv(path: &Path, label_column: &str) -> Result<Dataset> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let label_at = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::MissingColumn(label_column.to_string()))?;
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_at)
        .map(|(_, h)| h.clone())
        .collect();

    let mut label_names: Vec<String> = Vec::new();
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        let mut features = Vec::with_capacity(feature_names.len());
        let mut label = None;
        for (c, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            if c == label_at {
                if cell.is_empty() {
                    return Err(Error::Cell {
                        row: r + 1,
                        column: headers[c].clone(),
                        message: "empty label".into(),
                    });
                }
                let id = match label_names.iter().position(|t| t == cell) {
                    Some(id) => id,
                    None => {
                        label_names.push(cell.to_string());
                        label_names.len() - 1
                    }
                };
                label = Some(id as Label);
            } else {
                let x: f64 = cell
                    .parse()
                    .ok()
                    .filter(|x: &f64| x.is_finite())
                    .ok_or_else(|| Error::Cell {
                        row: r + 1,
                        column: headers[c].clone(),
                        message: format!("non-numeric value `{cell}`"),
                    })?;
                features.push(x);
            }
        }
        let label = label.expect("csv enforces equal record lengths");
        rows.push(LabeledExample::new(Point::features(features), label));
    }
    Ok(Dataset {
        feature_names,
        label_column: label_column.to_string(),
        label_names,
        rows,
    })
}

/// Writes features then the label column; [`load_csv`] reads it back exactly.
pub fn write_csv(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let mut header = dataset.feature_names.clone();
    header.push(dataset.label_column.clone());
    writer.write_record(&header)?;
    for row in &dataset.rows {
        let mut record: Vec<String> = row
            .point
            .as_features()
            .unwrap_or(&[])
            .iter()
            .map(f64::to_string)
            .collect();
        record.push(dataset.label_names[row.label as usize].clone());
        writer.write_record(&record)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}
