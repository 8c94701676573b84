//! Cartesian grids with ghost layers and component-major grid functions.

use crate::error::{MlaError, Result};
use serde::{Deserialize, Serialize};

/// Axis-aligned box discretized with `n[k]` cells per axis and `n_ghost` ghost layers.
///
/// Node `j` on axis `k` sits at `lo[k] + j*h[k]` for `j` in `-n_ghost..=n[k]+n_ghost`.
/// For a 1D grid only axis 0 is used; axis 1 has a single node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    lo: [f64; 2],
    hi: [f64; 2],
    n: [usize; 2],
    h: [f64; 2],
    n_ghost: usize,
}

impl GridSpec {
    pub fn new(dim: usize, lo: &[f64], hi: &[f64], n: &[usize], n_ghost: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(MlaError::InvalidGrid(format!("dim must be 1 or 2, got {dim}")));
        }
        if lo.len() != dim || hi.len() != dim || n.len() != dim {
            return Err(MlaError::InvalidGrid(format!(
                "lo, hi and n must each have {dim} entries"
            )));
        }
        if n_ghost == 0 {
            return Err(MlaError::InvalidGrid("n_ghost must be positive".into()));
        }
        let mut g = GridSpec {
            dim,
            lo: [0.0; 2],
            hi: [0.0; 2],
            n: [0; 2],
            h: [1.0; 2],
            n_ghost,
        };
        for k in 0..dim {
            if n[k] < 3 * n_ghost {
                return Err(MlaError::InvalidGrid(format!(
                    "axis {k}: n = {} is below 3*n_ghost = {}",
                    n[k],
                    3 * n_ghost
                )));
            }
            let h = (hi[k] - lo[k]) / n[k] as f64;
            if !(h > 0.0 && h.is_finite()) {
                return Err(MlaError::InvalidGrid(format!("axis {k}: spacing {h} not positive")));
            }
            g.lo[k] = lo[k];
            g.hi[k] = hi[k];
            g.n[k] = n[k];
            g.h[k] = h;
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn lo(&self, axis: usize) -> f64 {
        self.lo[axis]
    }
    pub fn hi(&self, axis: usize) -> f64 {
        self.hi[axis]
    }
    pub fn n(&self, axis: usize) -> usize {
        self.n[axis]
    }
    pub fn h(&self, axis: usize) -> f64 {
        self.h[axis]
    }
    pub fn n_ghost(&self) -> usize {
        self.n_ghost
    }

    /// Same box and resolution with a different ghost width.
    pub fn with_ghost(&self, n_ghost: usize) -> Result<Self> {
        GridSpec::new(
            self.dim,
            &self.lo[..self.dim],
            &self.hi[..self.dim],
            &self.n[..self.dim],
            n_ghost,
        )
    }

    /// Stored nodes per axis, ghosts included.
    pub fn extent(&self, axis: usize) -> usize {
        if axis < self.dim {
            self.n[axis] + 1 + 2 * self.n_ghost
        } else {
            1
        }
    }

    /// Index strides (axis 0 is contiguous).
    pub fn strides(&self) -> [usize; 2] {
        [1, self.extent(0)]
    }

    pub fn num_nodes(&self) -> usize {
        self.extent(0) * self.extent(1)
    }

    /// Flat offset of node `(i, j)`; `j` is ignored in 1D.
    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        let g = self.n_ghost as isize;
        let jj = if self.dim == 2 { j + g } else { 0 };
        ((i + g) as usize) + (jj as usize) * self.extent(0)
    }

    /// Signed index range covering ghosts on `axis`.
    pub fn full_range(&self, axis: usize) -> (isize, isize) {
        if axis < self.dim {
            let g = self.n_ghost as isize;
            (-g, self.n[axis] as isize + g)
        } else {
            (0, 0)
        }
    }

    #[inline]
    pub fn coord(&self, axis: usize, j: isize) -> f64 {
        if axis < self.dim {
            self.lo[axis] + j as f64 * self.h[axis]
        } else {
            0.0
        }
    }

    pub fn point(&self, i: isize, j: isize) -> [f64; 2] {
        [self.coord(0, i), self.coord(1, j)]
    }

    /// Product of spacings, the trapezoid weight for interior nodes.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|k| self.h[k]).product()
    }

    /// Sum of `1/h_k^2` over active axes.
    pub fn inv_h2_sum(&self) -> f64 {
        (0..self.dim).map(|k| 1.0 / (self.h[k] * self.h[k])).sum()
    }

    /// True when `fine` refines `self` by exactly `ratio` on every axis over the same box.
    pub fn nests(&self, fine: &GridSpec, ratio: usize) -> bool {
        self.dim == fine.dim
            && (0..self.dim).all(|k| {
                fine.n[k] == ratio * self.n[k]
                    && (fine.lo[k] - self.lo[k]).abs() <= 1e-12 * self.h[k]
                    && (fine.hi[k] - self.hi[k]).abs() <= 1e-12 * self.h[k]
            })
    }
}

/// Values of `ncomp` components at every stored node of a grid (component-major).
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: GridSpec,
    ncomp: usize,
    data: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(grid: &GridSpec, ncomp: usize) -> Self {
        GridFunction {
            grid: grid.clone(),
            ncomp,
            data: vec![0.0; grid.num_nodes() * ncomp],
        }
    }

    /// Fill every node (ghosts included) from `f(x, component)`.
    pub fn from_fn(grid: &GridSpec, ncomp: usize, f: impl Fn([f64; 2], usize) -> f64) -> Self {
        let mut u = GridFunction::zeros(grid, ncomp);
        let (i0, i1) = grid.full_range(0);
        let (j0, j1) = grid.full_range(1);
        for c in 0..ncomp {
            for j in j0..=j1 {
                for i in i0..=i1 {
                    let k = grid.idx(i, j);
                    u.comp_mut(c)[k] = f(grid.point(i, j), c);
                }
            }
        }
        u
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
    pub fn ncomp(&self) -> usize {
        self.ncomp
    }
    pub fn data(&self) -> &[f64] {
        &self.data
    }
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn comp(&self, c: usize) -> &[f64] {
        let n = self.grid.num_nodes();
        &self.data[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn comp_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.grid.num_nodes();
        &mut self.data[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn get(&self, c: usize, i: isize, j: isize) -> f64 {
        self.data[c * self.grid.num_nodes() + self.grid.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, c: usize, i: isize, j: isize, v: f64) {
        let k = c * self.grid.num_nodes() + self.grid.idx(i, j);
        self.data[k] = v;
    }

    pub fn fill(&mut self, v: f64) {
        self.data.iter_mut().for_each(|x| *x = v);
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Max absolute value over non-ghost nodes.
    pub fn max_abs_interior(&self) -> f64 {
        let mut m: f64 = 0.0;
        for_each_interior(&self.grid, |i, j| {
            for c in 0..self.ncomp {
                m = m.max(self.get(c, i, j).abs());
            }
        });
        m
    }
}

/// Visit every non-ghost node `0..=n` per axis.
pub fn for_each_interior(grid: &GridSpec, mut f: impl FnMut(isize, isize)) {
    let i1 = grid.n(0) as isize;
    let j1 = if grid.dim() == 2 { grid.n(1) as isize } else { 0 };
    for j in 0..=j1 {
        for i in 0..=i1 {
            f(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_covers_ghosts() {
        let g = GridSpec::new(2, &[0.0, 0.0], &[1.0, 2.0], &[10, 20], 2).unwrap();
        assert_eq!(g.extent(0), 15);
        assert_eq!(g.extent(1), 25);
        assert_eq!(g.idx(-2, -2), 0);
        assert_eq!(g.idx(12, 22), g.num_nodes() - 1);
        assert!((g.coord(1, -1) + 0.1).abs() < 1e-15);
        assert_eq!(g.h(1), 0.1);
    }

    #[test]
    fn rejects_coarse_grid() {
        assert!(GridSpec::new(1, &[0.0], &[1.0], &[8], 3).is_err());
        assert!(GridSpec::new(1, &[1.0], &[0.0], &[20], 2).is_err());
    }

    #[test]
    fn nesting() {
        let a = GridSpec::new(1, &[0.0], &[1.0], &[10], 2).unwrap();
        let b = GridSpec::new(1, &[0.0], &[1.0], &[20], 2).unwrap();
        assert!(a.nests(&b, 2));
        assert!(!b.nests(&a, 2));
    }
}
