//! Centered finite-difference operators on ghost-padded grid functions.
//!
//! Grid-level operators write non-ghost nodes only and leave ghost outputs at zero;
//! callers fill input ghosts first.

use crate::error::{MlaError, Result};
use crate::grid::{for_each_interior, GridFunction, GridSpec};

/// Strides and spacings for evaluating stencils at a flat node offset.
#[derive(Debug, Clone, Copy)]
pub struct Stencil {
    pub dim: usize,
    pub stride: [usize; 2],
    pub h: [f64; 2],
    inv_h2: [f64; 2],
}

impl Stencil {
    pub fn new(grid: &GridSpec) -> Self {
        let h = [grid.h(0), grid.h(1)];
        Stencil {
            dim: grid.dim(),
            stride: grid.strides(),
            h,
            inv_h2: [1.0 / (h[0] * h[0]), 1.0 / (h[1] * h[1])],
        }
    }

    #[inline]
    pub fn d2_axis(&self, u: &[f64], k: usize, a: usize) -> f64 {
        let s = self.stride[a];
        (u[k + s] - 2.0 * u[k] + u[k - s]) * self.inv_h2[a]
    }

    #[inline]
    pub fn d2_axis4(&self, u: &[f64], k: usize, a: usize) -> f64 {
        let s = self.stride[a];
        (-u[k - 2 * s] + 16.0 * u[k - s] - 30.0 * u[k] + 16.0 * u[k + s] - u[k + 2 * s])
            * (self.inv_h2[a] / 12.0)
    }

    #[inline]
    pub fn d1(&self, u: &[f64], k: usize, a: usize) -> f64 {
        let s = self.stride[a];
        (u[k + s] - u[k - s]) / (2.0 * self.h[a])
    }

    #[inline]
    pub fn d1_4(&self, u: &[f64], k: usize, a: usize) -> f64 {
        let s = self.stride[a];
        (u[k - 2 * s] - 8.0 * u[k - s] + 8.0 * u[k + s] - u[k + 2 * s]) / (12.0 * self.h[a])
    }

    #[inline]
    pub fn lap2(&self, u: &[f64], k: usize) -> f64 {
        let mut v = self.d2_axis(u, k, 0);
        if self.dim == 2 {
            v += self.d2_axis(u, k, 1);
        }
        v
    }

    #[inline]
    pub fn lap4(&self, u: &[f64], k: usize) -> f64 {
        let mut v = self.d2_axis4(u, k, 0);
        if self.dim == 2 {
            v += self.d2_axis4(u, k, 1);
        }
        v
    }

    /// Fused square of the 3-point Laplacian.
    #[inline]
    pub fn lapsq2(&self, u: &[f64], k: usize) -> f64 {
        let quartic = |a: usize| {
            let s = self.stride[a];
            (u[k - 2 * s] - 4.0 * u[k - s] + 6.0 * u[k] - 4.0 * u[k + s] + u[k + 2 * s])
                * (self.inv_h2[a] * self.inv_h2[a])
        };
        let mut v = quartic(0);
        if self.dim == 2 {
            v += quartic(1);
            let (sx, sy) = (self.stride[0], self.stride[1]);
            let row = |kk: usize| u[kk + sx] - 2.0 * u[kk] + u[kk - sx];
            let mixed = row(k + sy) - 2.0 * row(k) + row(k - sy);
            v += 2.0 * mixed * (self.inv_h2[0] * self.inv_h2[1]);
        }
        v
    }

    /// Second-order `Δ(N E) = E ΔN + N ΔE + 2 ∇E·∇N` for one E component.
    #[inline]
    pub fn lap_product(&self, e: &[f64], n: &[f64], k: usize) -> f64 {
        let mut grad = self.d1(e, k, 0) * self.d1(n, k, 0);
        if self.dim == 2 {
            grad += self.d1(e, k, 1) * self.d1(n, k, 1);
        }
        e[k] * self.lap2(n, k) + n[k] * self.lap2(e, k) + 2.0 * grad
    }
}

fn map_interior(u: &GridFunction, ncomp: usize, f: impl Fn(&Stencil, usize, usize) -> f64) -> GridFunction {
    let grid = u.grid();
    let st = Stencil::new(grid);
    let mut out = GridFunction::zeros(grid, ncomp);
    for c in 0..ncomp {
        let mut vals = Vec::new();
        for_each_interior(grid, |i, j| {
            let k = grid.idx(i, j);
            vals.push((k, f(&st, c, k)));
        });
        let oc = out.comp_mut(c);
        for (k, v) in vals {
            oc[k] = v;
        }
    }
    out
}

pub fn lap2(u: &GridFunction) -> GridFunction {
    map_interior(u, u.ncomp(), |st, c, k| st.lap2(u.comp(c), k))
}

pub fn lap4(u: &GridFunction) -> GridFunction {
    map_interior(u, u.ncomp(), |st, c, k| st.lap4(u.comp(c), k))
}

pub fn lap_sq2(u: &GridFunction) -> GridFunction {
    map_interior(u, u.ncomp(), |st, c, k| st.lapsq2(u.comp(c), k))
}

/// Two sequential 3-point Laplacians (reference for the fused stencil).
///
/// The inner pass covers one ghost layer so the outer pass is defined on all non-ghost nodes.
pub fn lap_sq2_two_pass(u: &GridFunction) -> GridFunction {
    let grid = u.grid();
    let st = Stencil::new(grid);
    let mut inner = GridFunction::zeros(grid, u.ncomp());
    let (i1, j1) = (grid.n(0) as isize, grid.n(1) as isize);
    let jr = if grid.dim() == 2 { (-1, j1 + 1) } else { (0, 0) };
    for c in 0..u.ncomp() {
        for j in jr.0..=jr.1 {
            for i in -1..=i1 + 1 {
                let k = grid.idx(i, j);
                let v = st.lap2(u.comp(c), k);
                inner.comp_mut(c)[k] = v;
            }
        }
    }
    lap2(&inner)
}

pub fn first_deriv2(u: &GridFunction, axis: usize) -> GridFunction {
    map_interior(u, u.ncomp(), |st, c, k| st.d1(u.comp(c), k, axis))
}

pub fn first_deriv4(u: &GridFunction, axis: usize) -> GridFunction {
    map_interior(u, u.ncomp(), |st, c, k| st.d1_4(u.comp(c), k, axis))
}

/// Per-component second-order approximation of `Δ(N E)`.
pub fn lap_product_chain(e: &GridFunction, n: &GridFunction) -> GridFunction {
    let nc = n.comp(0);
    map_interior(e, e.ncomp(), |st, c, k| st.lap_product(e.comp(c), nc, k))
}

fn check_vector(u: &GridFunction) -> Result<()> {
    if u.ncomp() != u.grid().dim() {
        return Err(MlaError::DimensionMismatch(format!(
            "vector field needs {} components, has {}",
            u.grid().dim(),
            u.ncomp()
        )));
    }
    Ok(())
}

fn div_with(u: &GridFunction, d: fn(&Stencil, &[f64], usize, usize) -> f64) -> Result<GridFunction> {
    check_vector(u)?;
    let dim = u.grid().dim();
    Ok(map_interior(u, 1, |st, _, k| (0..dim).map(|a| d(st, u.comp(a), k, a)).sum()))
}

fn curl_with(u: &GridFunction, d: fn(&Stencil, &[f64], usize, usize) -> f64) -> Result<GridFunction> {
    if u.grid().dim() == 1 {
        return Err(MlaError::CurlUndefined1D);
    }
    check_vector(u)?;
    Ok(map_interior(u, 1, |st, _, k| d(st, u.comp(1), k, 0) - d(st, u.comp(0), k, 1)))
}

pub fn div2(u: &GridFunction) -> Result<GridFunction> {
    div_with(u, Stencil::d1)
}

pub fn div4(u: &GridFunction) -> Result<GridFunction> {
    div_with(u, Stencil::d1_4)
}

/// z-component `∂x u_y − ∂y u_x`.
pub fn curl2(u: &GridFunction) -> Result<GridFunction> {
    curl_with(u, Stencil::d1)
}

pub fn curl4(u: &GridFunction) -> Result<GridFunction> {
    curl_with(u, Stencil::d1_4)
}
