//! Time-level storage for E, P_m and N_l.

use crate::grid::{GridFunction, GridSpec};

/// Slot indices into the three-level arrays.
pub const PREV: usize = 0;
pub const CUR: usize = 1;
pub const NEXT: usize = 2;

/// Fields on one grid. `e` and `p` hold levels `[n-1, n, n+1]`, `n_lev` holds `[n, n+1]`.
///
/// P component `(m, c)` lives at `m*d + c`.
#[derive(Debug, Clone)]
pub struct FieldState {
    pub grid: GridSpec,
    /// E components per node: 1 in 1D, 2 in 2D.
    pub d: usize,
    pub np: usize,
    pub nn: usize,
    pub e: [GridFunction; 3],
    pub p: [GridFunction; 3],
    pub n_lev: [GridFunction; 2],
    pub t: f64,
    pub step: usize,
}

impl FieldState {
    pub fn zeros(grid: &GridSpec, np: usize, nn: usize) -> Self {
        let d = grid.dim();
        let e = GridFunction::zeros(grid, d);
        let p = GridFunction::zeros(grid, np * d);
        let n = GridFunction::zeros(grid, nn);
        FieldState {
            grid: grid.clone(),
            d,
            np,
            nn,
            e: [e.clone(), e.clone(), e],
            p: [p.clone(), p.clone(), p],
            n_lev: [n.clone(), n],
            t: 0.0,
            step: 0,
        }
    }

    /// Make level n+1 current: (n+1) -> n, n -> (n-1).
    pub fn rotate(&mut self, dt: f64) {
        self.e.rotate_left(1);
        self.p.rotate_left(1);
        self.n_lev.swap(0, 1);
        self.t += dt;
        self.step += 1;
    }

    pub fn e_cur(&self) -> &GridFunction {
        &self.e[CUR]
    }
    pub fn p_cur(&self) -> &GridFunction {
        &self.p[CUR]
    }
    pub fn n_cur(&self) -> &GridFunction {
        &self.n_lev[0]
    }

    /// True when every stored value of the current levels is finite.
    pub fn current_finite(&self) -> bool {
        self.e[CUR].all_finite() && self.p[CUR].all_finite() && self.n_lev[0].all_finite()
    }
}
