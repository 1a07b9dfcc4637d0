//! Row-parallel grid evaluation. Rows are computed independently and
//! gathered by position, so the result does not depend on the thread count.

use mdiff_core::pattern::{DensityField, DensityModel};
use rayon::prelude::*;

use crate::config::Grid;
use crate::{CliError, Result};

/// Environment variable consulted when the thread count is 0.
pub const THREADS_ENV: &str = "MDIFF_THREADS";

/// Thread count after applying the `0 = automatic` rule.
pub fn resolve_threads(requested: usize) -> Result<usize> {
    if requested > 0 {
        return Ok(requested);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Config(format!("{THREADS_ENV} must be a positive integer"))),
        },
        _ => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Evaluates `model` on `grid` with `threads` workers (0 = automatic).
pub fn evaluate(model: &DensityModel, grid: &Grid, threads: usize) -> Result<DensityField> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolve_threads(threads)?)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let xs = grid.xs();
    let zs = grid.zs();
    let rows: Vec<Vec<f64>> = pool.install(|| {
        zs.par_iter()
            .map(|&z| model.row(&xs, z))
            .collect::<mdiff_core::Result<_>>()
    })?;
    let values = rows.into_iter().flatten().collect();
    Ok(DensityField::from_rows(model, xs, zs, values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mdiff_core::Preset;

    #[test]
    fn thread_count_does_not_change_values() {
        let model = DensityModel::new(&Preset::Crystal.scenario().with_grating(8.0, 3)).unwrap();
        let grid = Grid {
            x_min: -8.0,
            x_max: 8.0,
            nx: 23,
            z_min: 1.0,
            z_max: 30.0,
            nz: 17,
        };
        let one = evaluate(&model, &grid, 1).unwrap();
        let many = evaluate(&model, &grid, 5).unwrap();
        assert_eq!(one.values, many.values);
        assert_eq!(one.values.len(), 23 * 17);
    }

    #[test]
    fn explicit_count_wins() {
        assert_eq!(resolve_threads(3).unwrap(), 3);
    }
}
