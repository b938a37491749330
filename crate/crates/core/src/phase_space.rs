//! Husimi Q-function `Q(ζ) = |⟨ζ|ψ⟩|² / π` on rectangular grids.

use std::f64::consts::PI;

use crate::coherent::{coherent_overlap, CoherentSuperposition};
use crate::error::{Error, Result};
use crate::C64;

const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridBounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl GridBounds {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("grid bounds"));
        }
        if !(x_min < x_max && y_min < y_max) {
            return Err(Error::InvalidArgument(format!(
                "degenerate bounds [{x_min}, {x_max}] × [{y_min}, {y_max}]"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    /// Square `[−h, h]²`.
    pub fn symmetric(half_width: f64) -> Result<Self> {
        Self::new(-half_width, half_width, -half_width, half_width)
    }
}

/// Q sampled at cell centres, row-major with `x` varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct QGrid {
    pub bounds: GridBounds,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl QGrid {
    pub fn dx(&self) -> f64 {
        (self.bounds.x_max - self.bounds.x_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.bounds.y_max - self.bounds.y_min) / self.ny as f64
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.bounds.x_min + (ix as f64 + 0.5) * self.dx()
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.bounds.y_min + (iy as f64 + 0.5) * self.dy()
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Riemann sum `Σ Q dx dy`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.dx() * self.dy()
    }

    /// `(x, y, Q)` in storage order.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.ny).flat_map(move |iy| (0..self.nx).map(move |ix| (self.x(ix), self.y(iy), self.get(ix, iy))))
    }
}

fn q_unchecked(state: &CoherentSuperposition, zeta: C64) -> f64 {
    let amp: C64 = state
        .terms()
        .iter()
        .map(|t| t.coeff * coherent_overlap(zeta, t.amp))
        .sum();
    amp.norm_sqr() / PI
}

fn require_normalized(state: &CoherentSuperposition) -> Result<()> {
    let n = state.norm_sq();
    if (n - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

/// `Q(ζ)` for a unit-norm state.
pub fn q_value(state: &CoherentSuperposition, zeta: C64) -> Result<f64> {
    require_normalized(state)?;
    if !zeta.is_finite() {
        return Err(Error::NonFinite("zeta"));
    }
    Ok(q_unchecked(state, zeta))
}

pub fn q_grid(
    state: &CoherentSuperposition,
    bounds: GridBounds,
    nx: usize,
    ny: usize,
) -> Result<QGrid> {
    require_normalized(state)?;
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least 2×2 cells, got {nx}×{ny}"
        )));
    }
    let mut grid = QGrid {
        bounds,
        nx,
        ny,
        values: Vec::with_capacity(nx * ny),
    };
    for iy in 0..ny {
        let y = grid.y(iy);
        for ix in 0..nx {
            let v = q_unchecked(state, C64::new(grid.x(ix), y));
            grid.values.push(v);
        }
    }
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// Strict local maxima over the 8-neighbourhood (edge cells compare against
/// the neighbours they have) with value at least `threshold_frac · max`,
/// sorted by value, largest first.
pub fn peak_find(grid: &QGrid, threshold_frac: f64) -> Vec<Peak> {
    debug_assert!(threshold_frac > 0.0 && threshold_frac < 1.0);
    let cutoff = threshold_frac * grid.max();
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let mut peaks = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            let v = grid.get(ix as usize, iy as usize);
            if v < cutoff || v <= 0.0 {
                continue;
            }
            let is_max = (-1..=1)
                .flat_map(|dy| (-1..=1).map(move |dx| (dx, dy)))
                .filter(|&(dx, dy)| dx != 0 || dy != 0)
                .filter_map(|(dx, dy)| {
                    let (jx, jy) = (ix + dx, iy + dy);
                    (jx >= 0 && jx < nx && jy >= 0 && jy < ny)
                        .then(|| grid.get(jx as usize, jy as usize))
                })
                .all(|n| v > n);
            if is_max {
                peaks.push(Peak {
                    x: grid.x(ix as usize),
                    y: grid.y(iy as usize),
                    value: v,
                });
            }
        }
    }
    peaks.sort_by(|a, b| b.value.total_cmp(&a.value));
    peaks
}
