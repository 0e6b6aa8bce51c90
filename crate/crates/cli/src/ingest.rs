use std::path::Path;

use coreset_core::WeightedPointSet;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Weight column taken from a `weight` header if present.
    Auto,
    /// Every column is a coordinate.
    Csv,
    /// A `weight` header column, or the last column without a header.
    CsvWeight,
}

impl Format {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "auto" => Ok(Format::Auto),
            "csv" => Ok(Format::Csv),
            "csv+weight" => Ok(Format::CsvWeight),
            _ => Err(CliError::validation(format!("unknown format {s:?}"))),
        }
    }
}

pub fn ingest(path: &Path, format: Format) -> CliResult<WeightedPointSet> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_points(&text, format)
        .map_err(|e| CliError::validation(format!("ingest {}: {e}", path.display())))
}

/// Rows are numbered from 1 over data rows, excluding a header.
pub fn parse_points(text: &str, format: Format) -> Result<WeightedPointSet, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for r in reader.records() {
        let r = r.map_err(|e| e.to_string())?;
        if r.len() == 1 && r[0].is_empty() {
            continue;
        }
        records.push(r);
    }
    let Some(first) = records.first() else {
        return Err("no data rows".into());
    };
    let header = first.iter().any(|c| c.parse::<f64>().is_err());
    let width = first.len();
    let weight_col = if header {
        let pos = first.iter().position(|c| c.eq_ignore_ascii_case("weight"));
        if format == Format::CsvWeight && pos.is_none() {
            return Err("csv+weight input needs a `weight` column".into());
        }
        if format == Format::Csv { None } else { pos }
    } else if format == Format::CsvWeight {
        Some(width - 1)
    } else {
        None
    };
    let dim = width - usize::from(weight_col.is_some());
    if dim == 0 {
        return Err("no coordinate columns".into());
    }

    let mut rows = Vec::new();
    let mut weights = Vec::new();
    for (n, rec) in records.iter().enumerate().skip(usize::from(header)) {
        let row = n + 1 - usize::from(header);
        if rec.len() != width {
            return Err(format!("row {row}: expected {width} fields, found {}", rec.len()));
        }
        let mut coords = Vec::with_capacity(dim);
        let mut weight = 1.0;
        for (c, cell) in rec.iter().enumerate() {
            let v: f64 = cell
                .parse()
                .map_err(|_| format!("row {row}, column {}: not a number: {cell:?}", c + 1))?;
            if !v.is_finite() {
                return Err(format!("row {row}, column {}: non-finite value {cell:?}", c + 1));
            }
            if Some(c) == weight_col {
                if v < 0.0 {
                    return Err(format!("row {row}: negative weight {v}"));
                }
                weight = v;
            } else {
                coords.push(v);
            }
        }
        rows.push(coords);
        weights.push(weight);
    }
    if rows.is_empty() {
        return Err("no data rows".into());
    }
    WeightedPointSet::new(rows, weights).map_err(|e| e.to_string())
}
