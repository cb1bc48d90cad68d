use crate::error::{Result, WsvdError};
use crate::geometry::{uniform_grid, Domain, Point};

/// Root-mean-square difference between `approx` and `f` over `grid`.
pub fn rmse<A, F>(approx: A, f: F, grid: &[Point]) -> Result<f64>
where
    A: Fn(&Point) -> f64,
    F: Fn(&Point) -> f64,
{
    if grid.is_empty() {
        return Err(WsvdError::EmptyGrid);
    }
    let sum: f64 = grid
        .iter()
        .map(|p| {
            let d = approx(p) - f(p);
            d * d
        })
        .sum();
    Ok((sum / grid.len() as f64).sqrt())
}

/// RMSE and maximum absolute error from paired value lists.
pub fn error_stats(approx: &[f64], exact: &[f64]) -> Result<(f64, f64)> {
    if approx.is_empty() {
        return Err(WsvdError::EmptyGrid);
    }
    if approx.len() != exact.len() {
        return Err(WsvdError::LengthMismatch {
            expected: exact.len(),
            got: approx.len(),
        });
    }
    let mut sum = 0.0;
    let mut max = 0.0f64;
    for (a, e) in approx.iter().zip(exact) {
        let d = (a - e).abs();
        sum += d * d;
        max = max.max(d);
    }
    Ok(((sum / approx.len() as f64).sqrt(), max))
}

/// The uniform `resolution × resolution` bbox grid restricted to the domain.
pub fn eval_grid(domain: &Domain, resolution: usize) -> Result<Vec<Point>> {
    let grid = uniform_grid(resolution, domain)?;
    if grid.is_empty() {
        return Err(WsvdError::EmptyGrid);
    }
    Ok(grid)
}
