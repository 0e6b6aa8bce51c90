//! On-disk formats.
//!
//! `build` writes `coreset.csv` (coordinates in the projected space, then
//! `weight,group,cluster,source,draw`; `group` is empty for zero-bucket
//! aggregates) and `meta.json`, which holds everything `eval` needs.

use std::fmt::Write as _;
use std::path::Path;

use coreset_core::decompose::Projection;
use coreset_core::pipeline::{BuildConfig, Built};
use coreset_core::{Solution, WeightedPointSet};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const CORESET_FILE: &str = "coreset.csv";
pub const META_FILE: &str = "meta.json";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub format_version: u32,
    pub params: BuildConfig,
    pub seed: u64,
    pub input_points: usize,
    pub input_dim: usize,
    pub projection: Projection,
    /// Integral weights used for sampling were `scale * w`.
    pub weight_scale: f64,
    pub num_groups: usize,
    pub budgets: Vec<usize>,
    pub coreset_size: usize,
    /// Input rows used as the centers of `A`.
    pub reference_indices: Vec<usize>,
    /// `A` in the projected space.
    pub reference: Vec<Vec<f64>>,
}

impl Meta {
    pub fn from_built(b: &Built, points: &WeightedPointSet) -> Self {
        Meta {
            format_version: FORMAT_VERSION,
            params: b.config.clone(),
            seed: b.config.seed,
            input_points: points.len(),
            input_dim: points.dim(),
            projection: b.projection.clone(),
            weight_scale: b.weight_scale,
            num_groups: b.num_groups,
            budgets: b.coreset.params.budgets.clone(),
            coreset_size: b.coreset.len(),
            reference_indices: b.reference_indices.clone(),
            reference: b.reference.centers().map(<[f64]>::to_vec).collect(),
        }
    }

    pub fn reference(&self) -> CliResult<Solution> {
        Solution::new(self.reference.clone(), self.params.power)
            .map_err(|e| CliError::validation(format!("meta: {e}")))
    }
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Runtime(format!("serialize: {e}")))?;
    text.push('\n');
    write_text(path, &text)
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

/// The coreset as CSV text.
pub fn coreset_csv(b: &Built) -> String {
    let c = &b.coreset;
    let dim = c.points.dim();
    let mut out = String::new();
    for j in 0..dim {
        let _ = write!(out, "x{j},");
    }
    out.push_str("weight,group,cluster,source,draw\n");
    for (i, prov) in c.provenance.iter().enumerate() {
        for v in c.points.point(i) {
            let _ = write!(out, "{v},");
        }
        let group = prov.group.map(|g| g.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{group},{},{},{}",
            c.points.weight(i),
            prov.cluster,
            prov.source,
            prov.draw
        );
    }
    out
}

/// Points, weights and source rows of a coreset file.
pub struct CoresetFile {
    pub points: WeightedPointSet,
    pub sources: Vec<usize>,
}

pub fn read_coreset(path: &Path) -> CliResult<CoresetFile> {
    let bad = |msg: String| CliError::validation(format!("{}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::io(path, e))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(format!("missing column {name}")))
    };
    let (wcol, scol) = (col("weight")?, col("source")?);
    let dim = headers.iter().take_while(|h| h.starts_with('x')).count();
    let mut coords = Vec::new();
    let mut weights = Vec::new();
    let mut sources = Vec::new();
    for (n, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |c: usize| -> CliResult<f64> {
            rec.get(c)
                .and_then(|s| s.parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(format!("row {}, column {}: bad value", n + 1, c + 1)))
        };
        for c in 0..dim {
            coords.push(num(c)?);
        }
        weights.push(num(wcol)?);
        sources.push(num(scol)? as usize);
    }
    let points = WeightedPointSet::from_flat(dim, coords, weights).map_err(|e| bad(e.to_string()))?;
    Ok(CoresetFile { points, sources })
}

pub fn points_csv(points: &WeightedPointSet) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..points.dim()).map(|j| format!("x{j}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for (p, _) in points.iter() {
        let row: Vec<String> = p.iter().map(f64::to_string).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
