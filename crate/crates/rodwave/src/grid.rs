//! Data-parallel grid evaluation. Each sample is computed independently with a
//! fixed summation order, so results do not depend on scheduling.

use rayon::prelude::*;
use rodwave_core::fields::compute_field;
use rodwave_core::{Field, FieldGrid, ForcingSpec, GridSpec, MaterialParams, PoleSet, SolverConfig};

pub fn evaluate_grid(
    field: Field,
    grid: &GridSpec,
    forcing: &ForcingSpec,
    params: &MaterialParams,
    poles: &PoleSet,
    cfg: &SolverConfig,
) -> rodwave_core::Result<FieldGrid> {
    grid.validate()?;
    let ts = grid.times.values();
    let points: Vec<(f64, f64)> = grid.xs.iter().flat_map(|&x| ts.iter().map(move |&t| (x, t))).collect();
    let samples = points
        .par_iter()
        .map(|&(x, t)| compute_field(field, x, t, forcing, params, poles, cfg))
        .collect::<rodwave_core::Result<Vec<_>>>()?;
    Ok(FieldGrid { field, xs: grid.xs.clone(), ts, samples, config: cfg.clone() })
}

/// Runs `f` on a pool with `threads` workers, or on the global pool.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}
