//! The run configuration: one JSON document.

use std::path::{Path, PathBuf};

use rodwave_core::fields::PhysicalRecord;
use rodwave_core::oracle::OracleConfig;
use rodwave_core::{Field, ForcingSpec, MaterialParams, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::{RunError, RunResult};

/// Oracle comparison samples for `check`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    /// Largest accepted `|field - oracle| / |oracle|`.
    pub tolerance: f64,
    pub oracle: OracleConfig,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            xs: vec![0.25, 0.5, 0.75],
            ts: vec![1.0, 5.0, 10.0],
            tolerance: 1e-4,
            oracle: OracleConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub params: MaterialParams,
    pub forcing: ForcingSpec,
    pub solver: SolverConfig,
    /// Fields written by `relax`. Displacements use `solver.displacement_grid`,
    /// stresses `solver.stress_grid`.
    pub fields: Vec<Field>,
    pub check: CheckConfig,
    /// Input of `nondim`.
    pub nondim: Option<PhysicalRecord>,
    /// Directory of cached pole sets; none disables caching.
    pub pole_cache: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: MaterialParams::new(0.045, 0.5).expect("default parameters are valid"),
            forcing: ForcingSpec::default(),
            solver: SolverConfig::default(),
            fields: vec![Field::UH, Field::SigmaH],
            check: CheckConfig::default(),
            nondim: None,
            pole_cache: None,
        }
    }
}

/// Command-line overrides of the solver settings.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub q_max: Option<f64>,
    pub n_residues: Option<usize>,
    pub rel_tol: Option<f64>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> RunResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            RunError::Config(msg) => RunError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str) -> RunResult<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: Overrides) -> RunResult<()> {
        if let Some(q) = o.q_max {
            self.solver.quadrature.q_max = q;
        }
        if let Some(n) = o.n_residues {
            self.solver.n_residues = n;
        }
        if let Some(tol) = o.rel_tol {
            self.solver.quadrature.rel_tol = tol;
        }
        self.validate()
    }

    pub fn validate(&self) -> RunResult<()> {
        self.forcing.validate().map_err(|e| section("forcing", e))?;
        self.solver.validate().map_err(|e| section("solver", e))?;
        if self.fields.is_empty() {
            return Err(RunError::Config("fields: at least one field is required".into()));
        }
        if self.fields.iter().any(|f| matches!(f, Field::UF | Field::SigmaF)) {
            self.forcing.check_admissible().map_err(|e| section("forcing", e))?;
        }
        if !(self.check.tolerance > 0.0) {
            return Err(RunError::Config("check.tolerance: must be positive".into()));
        }
        if self.check.xs.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(RunError::Config("check.xs: values must lie in [0, 1]".into()));
        }
        if self.check.ts.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(RunError::Config("check.ts: times must be positive".into()));
        }
        Ok(())
    }

    pub fn grid_for(&self, field: Field) -> &rodwave_core::GridSpec {
        if field.is_stress() {
            &self.solver.stress_grid
        } else {
            &self.solver.displacement_grid
        }
    }
}

fn section(name: &str, e: rodwave_core::Error) -> RunError {
    RunError::Config(format!("{name}: {e}"))
}
