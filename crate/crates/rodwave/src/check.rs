//! Field values against the numerical inverse Laplace transform.

use rodwave_core::fields::compute_field;
use rodwave_core::oracle::{displacement_transform, invert, stress_transform};
use rodwave_core::{Field, PoleSet};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::RunResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSample {
    /// `u` (total displacement) or `sigma` (total stress).
    pub quantity: String,
    pub x: f64,
    pub t: f64,
    pub field: f64,
    pub oracle: f64,
    pub oracle_error: f64,
    pub field_error: f64,
    pub rel_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub samples: Vec<CheckSample>,
    pub max_rel_diff: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares total displacement (`u_H + u_F`) and total stress (`σ_F`, which is
/// `σ_H` without extra forcing) with the inversion of `Υ̃P̃` and `sΥ̃T̃`.
pub fn run_check(cfg: &RunConfig, poles: &PoleSet) -> RunResult<CheckReport> {
    if cfg.check.xs.is_empty() || cfg.check.ts.is_empty() {
        return Err(crate::RunError::Config("check: the sample grid is empty".into()));
    }
    let extra = cfg.forcing.has_extra();
    let mut samples = Vec::new();
    for &x in &cfg.check.xs {
        for &t in &cfg.check.ts {
            let field = |f: Field| compute_field(f, x, t, &cfg.forcing, &cfg.params, poles, &cfg.solver);
            let mut u = field(Field::UH)?;
            if extra {
                let uf = field(Field::UF)?;
                u.value += uf.value;
                u.error_estimate += uf.error_estimate;
            }
            let sigma = field(if extra { Field::SigmaF } else { Field::SigmaH })?;
            let ou = invert(displacement_transform(x, &cfg.forcing, &cfg.params), t, &cfg.check.oracle)?;
            let os = invert(stress_transform(x, &cfg.forcing, &cfg.params), t, &cfg.check.oracle)?;
            for (name, f, o) in [("u", u, ou), ("sigma", sigma, os)] {
                let rel_diff = if o.value == 0.0 { (f.value - o.value).abs() } else { (f.value - o.value).abs() / o.value.abs() };
                samples.push(CheckSample {
                    quantity: name.to_string(),
                    x,
                    t,
                    field: f.value,
                    oracle: o.value,
                    oracle_error: o.error_estimate,
                    field_error: f.error_estimate,
                    rel_diff,
                });
            }
        }
    }
    let max_rel_diff = samples.iter().map(|s| s.rel_diff).fold(0.0, f64::max);
    Ok(CheckReport { samples, max_rel_diff, tolerance: cfg.check.tolerance, passed: max_rel_diff < cfg.check.tolerance })
}
