//! Ghost-node assignment for periodic, exact-Dirichlet and interface faces.

use crate::error::{MlaError, Result};
use crate::grid::{GridFunction, GridSpec};
use crate::solutions::{FieldId, SolutionSource};
use crate::state::{FieldState, CUR};
use crate::stepper::UpdateRange;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaceKind {
    Periodic,
    DirichletExact,
    /// Filled by an interface solve; ghosts are extrapolated first.
    Interface,
}

/// Face kinds indexed `[axis][side]`, side 0 = low.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boundaries(pub [[FaceKind; 2]; 2]);

impl Boundaries {
    pub fn uniform(kind: FaceKind) -> Self {
        Boundaries([[kind; 2]; 2])
    }

    pub fn face(&self, axis: usize, side: usize) -> FaceKind {
        self.0[axis][side]
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        for axis in 0..dim {
            let [lo, hi] = self.0[axis];
            if (lo == FaceKind::Periodic) != (hi == FaceKind::Periodic) {
                return Err(MlaError::Config(format!("axis {axis}: periodic must be set on both faces")));
            }
        }
        Ok(())
    }

    /// Nodes advanced by the interior stepper.
    ///
    /// Periodic axes advance `0..n-1` (node `n` is the image of node 0), Dirichlet faces
    /// are excluded, interface faces are advanced by each side's stepper.
    pub fn update_range(&self, grid: &GridSpec) -> UpdateRange {
        let axis_range = |axis: usize| -> (isize, isize) {
            if axis >= grid.dim() {
                return (0, 0);
            }
            let n = grid.n(axis) as isize;
            let lo = match self.0[axis][0] {
                FaceKind::DirichletExact => 1,
                _ => 0,
            };
            let hi = match self.0[axis][1] {
                FaceKind::Interface => n,
                _ => n - 1,
            };
            (lo, hi)
        };
        UpdateRange { i: axis_range(0), j: axis_range(1) }
    }
}

/// Index along `axis` of the node `p` steps inward from face `side` (negative `p` = ghost).
#[inline]
pub fn face_index(grid: &GridSpec, axis: usize, side: usize, p: isize) -> isize {
    if side == 0 {
        p
    } else {
        grid.n(axis) as isize - p
    }
}

/// Wrap ghost nodes of `u` periodically along `axis`.
pub fn apply_periodic(u: &mut GridFunction, axis: usize) {
    let grid = u.grid().clone();
    let n = grid.n(axis) as isize;
    let g = grid.n_ghost() as isize;
    let other = 1 - axis;
    let (o0, o1) = grid.full_range(other);
    let at = |a: isize, o: isize| if axis == 0 { grid.idx(a, o) } else { grid.idx(o, a) };
    for c in 0..u.ncomp() {
        let v = u.comp_mut(c);
        for o in o0..=o1 {
            for a in -g..0 {
                v[at(a, o)] = v[at(a + n, o)];
            }
            for a in n..=n + g {
                v[at(a, o)] = v[at(a - n, o)];
            }
        }
    }
}

/// Wrap every periodic axis of the current level.
pub fn wrap_current(state: &mut FieldState, bcs: &Boundaries) {
    for axis in 0..state.grid.dim() {
        if bcs.face(axis, 0) == FaceKind::Periodic {
            apply_periodic(&mut state.e[CUR], axis);
            apply_periodic(&mut state.p[CUR], axis);
            apply_periodic(&mut state.n_lev[0], axis);
        }
    }
}

/// Set the face and ghost nodes of one face of the current level to the exact solution at `t`.
pub fn apply_dirichlet_exact(state: &mut FieldState, src: &dyn SolutionSource, t: f64, axis: usize, side: usize) {
    let grid = state.grid.clone();
    let g = grid.n_ghost() as isize;
    let (o0, o1) = grid.full_range(1 - axis);
    let (d, np, nn) = (state.d, state.np, state.nn);
    for o in o0..=o1 {
        for p in -g..=0 {
            let a = face_index(&grid, axis, side, p);
            let (i, j) = if axis == 0 { (a, o) } else { (o, a) };
            let x = grid.point(i, j);
            for c in 0..d {
                state.e[CUR].set(c, i, j, src.value(FieldId::E(c), x, t));
                for m in 0..np {
                    state.p[CUR].set(m * d + c, i, j, src.value(FieldId::P(m, c), x, t));
                }
            }
            for l in 0..nn {
                state.n_lev[0].set(l, i, j, src.value(FieldId::N(l), x, t));
            }
        }
    }
}

/// Fill ghost lines `1..=lines` of face `(axis, side)` by 5-point one-sided extrapolation.
pub fn extrapolate_face(u: &mut GridFunction, axis: usize, side: usize, lines: usize) {
    const W: [f64; 5] = [5.0, -10.0, 10.0, -5.0, 1.0];
    let grid = u.grid().clone();
    let (o0, o1) = grid.full_range(1 - axis);
    let at = |p: isize, o: isize| {
        let a = face_index(&grid, axis, side, p);
        if axis == 0 {
            grid.idx(a, o)
        } else {
            grid.idx(o, a)
        }
    };
    for c in 0..u.ncomp() {
        let v = u.comp_mut(c);
        for o in o0..=o1 {
            for gl in 1..=lines as isize {
                let mut s = 0.0;
                for (q, w) in W.iter().enumerate() {
                    s += w * v[at(-gl + 1 + q as isize, o)];
                }
                v[at(-gl, o)] = s;
            }
        }
    }
}

/// All non-interface fills of the current level at time `t`, plus extrapolation on interface faces.
pub fn fill_boundaries(state: &mut FieldState, bcs: &Boundaries, src: &dyn SolutionSource, t: f64) {
    wrap_current(state, bcs);
    let g = state.grid.n_ghost();
    for axis in 0..state.grid.dim() {
        for side in 0..2 {
            match bcs.face(axis, side) {
                FaceKind::DirichletExact => apply_dirichlet_exact(state, src, t, axis, side),
                FaceKind::Interface => {
                    extrapolate_face(&mut state.e[CUR], axis, side, g);
                    extrapolate_face(&mut state.p[CUR], axis, side, g);
                    extrapolate_face(&mut state.n_lev[0], axis, side, g);
                }
                FaceKind::Periodic => {}
            }
        }
    }
}
