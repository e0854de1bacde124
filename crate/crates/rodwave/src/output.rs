//! CSV tables and the JSON run manifest.

use std::io::Write;

use rodwave_core::{FieldGrid, ForcingSpec, MaterialParams, PoleSet, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// Shortest round-trip decimal; scientific notation outside `[1e-4, 1e15)`.
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

pub const CSV_HEADER: [&str; 7] = ["field", "x", "t", "value", "cut_part", "residue_part", "error_estimate"];

/// Writes samples x-major, one row each. Floats use the shortest decimal that
/// round-trips, so identical runs give identical bytes.
pub fn write_csv<W: Write>(out: W, grids: &[FieldGrid]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for g in grids {
        for s in &g.samples {
            w.write_record([
                g.field.name().to_string(),
                format_float(s.x),
                format_float(s.t),
                format_float(s.value),
                format_float(s.cut_part),
                format_float(s.residue_part),
                format_float(s.error_estimate),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub field: String,
    pub samples: usize,
    pub max_error_estimate: f64,
    pub max_abs_value: f64,
    pub n_terms: usize,
}

impl FieldSummary {
    pub fn of(g: &FieldGrid) -> Self {
        Self {
            field: g.field.name().to_string(),
            samples: g.samples.len(),
            max_error_estimate: g.samples.iter().map(|s| s.error_estimate).fold(0.0, f64::max),
            max_abs_value: g.samples.iter().map(|s| s.value.abs()).fold(0.0, f64::max),
            n_terms: g.samples.iter().map(|s| s.n_terms).max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleSummary {
    pub count: usize,
    pub max_residual: f64,
    pub flagged: Vec<usize>,
}

impl PoleSummary {
    pub fn of(p: &PoleSet) -> Self {
        Self {
            count: p.len(),
            max_residual: p.poles.iter().map(|q| q.residual).fold(0.0, f64::max),
            flagged: p.flagged(),
        }
    }
}

/// Everything needed to re-run: the complete config including every solver setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub params: MaterialParams,
    pub forcing: ForcingSpec,
    pub cfg: SolverConfig,
    pub config: RunConfig,
    pub threads: Option<usize>,
    pub wall_clock_seconds: f64,
    pub poles: PoleSummary,
    pub fields: Vec<FieldSummary>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: &RunConfig, threads: Option<usize>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            params: config.params,
            forcing: config.forcing,
            cfg: config.solver.clone(),
            config: config.clone(),
            threads,
            wall_clock_seconds: 0.0,
            poles: PoleSummary { count: 0, max_residual: 0.0, flagged: Vec::new() },
            fields: Vec::new(),
            outputs: Vec::new(),
        }
    }
}
