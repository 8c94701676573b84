//! Time-step selection.

use crate::grid::GridSpec;
use crate::material::MaterialParams;

/// `dt = sqrt(cfl / (c^2 * sum_k 1/h_k^2))`.
pub fn compute_time_step(material: &MaterialParams, grid: &GridSpec, cfl: f64) -> f64 {
    time_step_for_speed(material.c(), grid, cfl)
}

pub fn time_step_for_speed(c: f64, grid: &GridSpec, cfl: f64) -> f64 {
    assert!(cfl > 0.0, "cfl must be positive");
    (cfl / (c * c * grid.inv_h2_sum())).sqrt()
}

/// Largest step not exceeding `dt_max` that lands exactly on `t_final`.
pub fn steps_to_reach(t_final: f64, dt_max: f64) -> (usize, f64) {
    let steps = ((t_final / dt_max) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    (steps, t_final / steps as f64)
}
