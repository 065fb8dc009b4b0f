//! Linear stability of the scheme on `y' = αy + β∫_{x0}^{x} y(t) dt`.
//!
//! With `u = hα` and `v = h²β` the scheme reduces to the two-term recurrence
//! `y_j = b1·y_{j-1} + b2·y_{j-2}`; the zero solution is asymptotically stable
//! when both roots of `r² − b1·r − b2 = 0` lie strictly inside the unit circle.

use rayon::prelude::*;
use thiserror::Error;

use super::complex::{quadratic_roots, Complex};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityAssessment {
    pub u: f64,
    pub v: f64,
    pub b1: f64,
    pub b2: f64,
    pub r1: Complex,
    pub r2: Complex,
    pub stable: bool,
}

impl StabilityAssessment {
    pub fn max_modulus(&self) -> f64 {
        self.r1.norm().max(self.r2.norm())
    }
}

/// Recurrence coefficients `(b1, b2)` at `(u, v)`.
pub fn stability_coefficients(u: f64, v: f64) -> (f64, f64) {
    let (u2, u3) = (u * u, u * u * u);
    let (v2, v3) = (v * v, v * v * v);
    let b1 = 2.0
        + u
        + u2 / 2.0
        + u3 / 8.0
        + v
        + 3.0 * u * v / 4.0
        + 5.0 * u2 * v / 16.0
        + v2 / 4.0
        + 7.0 * u * v2 / 32.0
        + 3.0 * v3 / 64.0;
    let b2 =
        -1.0 - u - u2 / 2.0 - u3 / 8.0 - u * v / 4.0 - u2 * v / 16.0 + u * v2 / 32.0 + v3 / 64.0;
    (b1, b2)
}

/// Stable iff both roots have modulus strictly below one.
pub fn assess_stability(u: f64, v: f64) -> StabilityAssessment {
    let (b1, b2) = stability_coefficients(u, v);
    let (r1, r2) = quadratic_roots(-b1, -b2);
    StabilityAssessment {
        u,
        v,
        b1,
        b2,
        r1,
        r2,
        stable: r1.norm() < 1.0 && r2.norm() < 1.0,
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("empty {axis} range [{min}, {max}]")]
    EmptyRange {
        axis: &'static str,
        min: f64,
        max: f64,
    },
    #[error("resolution must be at least 1")]
    ZeroResolution,
}

/// Row-major scan: `cells[row * resolution + col]` sits at the centre of
/// cell `(col, row)`, with `u` varying along a row and `v` across rows.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityGrid {
    pub resolution: usize,
    pub cells: Vec<StabilityAssessment>,
}

impl StabilityGrid {
    pub fn get(&self, col: usize, row: usize) -> &StabilityAssessment {
        &self.cells[row * self.resolution + col]
    }
}

fn centre(min: f64, max: f64, i: usize, n: usize) -> f64 {
    min + (i as f64 + 0.5) * (max - min) / n as f64
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn stability_region(
    u_min: f64,
    u_max: f64,
    v_min: f64,
    v_max: f64,
    resolution: usize,
) -> Result<StabilityGrid, RegionError> {
    // `!(a < b)` also rejects NaN bounds
    if !(u_min < u_max) {
        return Err(RegionError::EmptyRange {
            axis: "u",
            min: u_min,
            max: u_max,
        });
    }
    if !(v_min < v_max) {
        return Err(RegionError::EmptyRange {
            axis: "v",
            min: v_min,
            max: v_max,
        });
    }
    if resolution == 0 {
        return Err(RegionError::ZeroResolution);
    }
    let cells = (0..resolution * resolution)
        .into_par_iter()
        .map(|k| {
            let (row, col) = (k / resolution, k % resolution);
            assess_stability(
                centre(u_min, u_max, col, resolution),
                centre(v_min, v_max, row, resolution),
            )
        })
        .collect();
    Ok(StabilityGrid { resolution, cells })
}
