use std::path::Path;
use std::str::FromStr;

use pdi_core::{Dataset, ProductPoint, SpaceSignature};

use crate::{CliError, CliResult};

/// Consecutive column counts, one per factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnBlocks {
    widths: Vec<usize>,
}

impl ColumnBlocks {
    pub fn new(widths: Vec<usize>) -> CliResult<Self> {
        if widths.is_empty() || widths.contains(&0) {
            return Err(CliError::usage("column blocks must be a nonempty list of positive widths"));
        }
        Ok(Self { widths })
    }

    /// One scalar factor per column.
    pub fn scalars(columns: usize) -> CliResult<Self> {
        Self::new(vec![1; columns])
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn n(&self) -> usize {
        self.widths.len()
    }

    pub fn total(&self) -> usize {
        self.widths.iter().sum()
    }
}

impl FromStr for ColumnBlocks {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let widths = s
            .split(',')
            .map(|w| {
                w.trim().parse::<usize>().map_err(|_| CliError::usage(format!("invalid block width '{w}' in '{s}'")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        Self::new(widths)
    }
}

/// Read a headed numeric CSV and split each row into factors.
/// Rows and columns in error messages are 1-based, the header being row 1.
/// Without `blocks` every column is its own factor.
pub fn load_csv(path: &Path, blocks: Option<&ColumnBlocks>) -> CliResult<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::data(format!("cannot open {}: {e}", path.display())))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::data(format!("{}: cannot read header: {e}", path.display())))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let owned;
    let blocks = match blocks {
        Some(b) => b,
        None => {
            owned = ColumnBlocks::scalars(header.len())?;
            &owned
        }
    };
    if header.len() != blocks.total() {
        return Err(CliError::data(format!(
            "{}: blocks {:?} cover {} columns but the header has {}",
            path.display(),
            blocks.widths(),
            blocks.total(),
            header.len()
        )));
    }
    let mut samples = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| CliError::data(format!("{}: row {row}: {e}", path.display())))?;
        if record.len() != header.len() {
            return Err(CliError::data(format!(
                "{}: row {row}: expected {} columns, found {}",
                path.display(),
                header.len(),
                record.len()
            )));
        }
        let mut values = Vec::with_capacity(record.len());
        for (j, field) in record.iter().enumerate() {
            let col = j + 1;
            let v: f64 = field.trim().parse().map_err(|_| {
                CliError::data(format!(
                    "{}: row {row}, column {col} ('{}'): cannot parse '{field}' as a number",
                    path.display(),
                    header[j]
                ))
            })?;
            if !v.is_finite() {
                return Err(CliError::data(format!(
                    "{}: row {row}, column {col} ('{}'): non-finite value '{field}'",
                    path.display(),
                    header[j]
                )));
            }
            values.push(v);
        }
        let mut at = 0;
        let components = blocks
            .widths()
            .iter()
            .map(|&w| {
                let c = values[at..at + w].to_vec();
                at += w;
                c
            })
            .collect();
        samples.push(ProductPoint::new(components));
    }
    if samples.is_empty() {
        return Err(CliError::data(format!("{}: no data rows", path.display())));
    }
    let signature = SpaceSignature::new(blocks.widths().to_vec())?;
    Ok(Dataset::new(signature, samples)?)
}
