//! `qfunc`: Husimi Q of a fan-state as an `x,y,Q` table.

use fanstate_core::{fan_state, q_grid, GridBounds, QGrid, C64};

use crate::output::Table;
use crate::CliError;

/// Largest accepted `k`; the state is built from `(2k)²` raw terms.
pub const MAX_K: usize = 64;

pub fn default_bounds(alpha: C64) -> GridBounds {
    GridBounds::symmetric(alpha.norm() + 3.0).expect("positive half-width")
}

pub fn fan_q_grid(alpha: C64, k: usize, bounds: Option<GridBounds>, res: (usize, usize)) -> Result<QGrid, CliError> {
    if !(1..=MAX_K).contains(&k) {
        return Err(CliError::Usage(format!("--k must be in 1..={MAX_K}, got {k}")));
    }
    let (nx, ny) = res;
    if nx < 2 || ny < 2 || nx.saturating_mul(ny) > 25_000_000 {
        return Err(CliError::Usage(format!("--res {nx},{ny} out of range")));
    }
    let state = fan_state(alpha, k)?;
    Ok(q_grid(&state, bounds.unwrap_or_else(|| default_bounds(alpha)), nx, ny)?)
}

pub fn grid_table(grid: &QGrid) -> Table {
    let mut table = Table::new(["x", "y", "Q"]);
    table.rows = grid.cells().map(|(x, y, q)| vec![x, y, q]).collect();
    table
}
