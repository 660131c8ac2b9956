//! Enumeration caps shared by every exhaustive evaluator.

use crate::error::{Error, Result};

/// Default cap on the number of grid points visited by one enumeration.
pub const DEFAULT_MAX_POINTS: u64 = 20_000_000;

/// Largest cube dimension accepted by dense Walsh transforms.
pub const MAX_DENSE_N: usize = 20;

/// Coefficients smaller than this in magnitude are dropped from sparse spectra.
pub const DROP_TOL: f64 = 1e-14;

/// Current enumeration cap, overridable through `BHLAB_MAX_POINTS`.
pub fn max_points() -> u64 {
    std::env::var("BHLAB_MAX_POINTS")
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|v| v.is_finite() && *v >= 1.0)
        .map(|v| v as u64)
        .unwrap_or(DEFAULT_MAX_POINTS)
}

/// Returns `base^exp` when it fits under the enumeration cap.
pub fn check_grid(base: usize, exp: usize, what: &str) -> Result<u64> {
    let cap = max_points();
    let mut total: u64 = 1;
    for _ in 0..exp {
        total = total.saturating_mul(base as u64);
        if total > cap {
            return Err(Error::ResourceLimit(format!(
                "{what}: {base}^{exp} points exceeds the cap of {cap}"
            )));
        }
    }
    Ok(total)
}

/// Checks that a product of grid sizes stays under the cap.
pub fn check_product(sizes: &[usize], what: &str) -> Result<u64> {
    let cap = max_points();
    let mut total: u64 = 1;
    for &s in sizes {
        total = total.saturating_mul(s as u64);
        if total > cap {
            return Err(Error::ResourceLimit(format!(
                "{what}: grid of {} factors exceeds the cap of {cap}",
                sizes.len()
            )));
        }
    }
    Ok(total)
}
