//! Time-stepping schemes, registered by name and driven over grid ranges.

pub mod kernel;
pub mod ode;

use crate::error::{MlaError, Result};
use crate::forcing::{Forcing, ForcingSample};
use crate::grid::GridFunction;
use crate::state::FieldState;
use crate::stencils::Stencil;
use kernel::{KernelCoeffs, PointData, PointUpdate};
use std::sync::Arc;

/// A single-step three-level scheme.
pub trait Scheme: Send + Sync {
    fn name(&self) -> &'static str;
    fn order(&self) -> usize;
    /// Ghost layers the scheme's stencils need.
    fn ghost_width(&self) -> usize;
    fn update_point(&self, k: &KernelCoeffs, dt: f64, pd: &PointData, f: &ForcingSample) -> PointUpdate;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Order2;

impl Scheme for Order2 {
    fn name(&self) -> &'static str {
        "order2"
    }
    fn order(&self) -> usize {
        2
    }
    fn ghost_width(&self) -> usize {
        2
    }
    fn update_point(&self, k: &KernelCoeffs, dt: f64, pd: &PointData, f: &ForcingSample) -> PointUpdate {
        kernel::update_order2(k, dt, pd, f)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Order4;

impl Scheme for Order4 {
    fn name(&self) -> &'static str {
        "order4"
    }
    fn order(&self) -> usize {
        4
    }
    fn ghost_width(&self) -> usize {
        3
    }
    fn update_point(&self, k: &KernelCoeffs, dt: f64, pd: &PointData, f: &ForcingSample) -> PointUpdate {
        kernel::update_order4(k, dt, pd, f)
    }
}

pub struct SchemeRegistry {
    entries: Vec<Arc<dyn Scheme>>,
}

impl SchemeRegistry {
    pub fn builtin() -> Self {
        SchemeRegistry { entries: vec![Arc::new(Order2), Arc::new(Order4)] }
    }

    pub fn register(&mut self, s: Arc<dyn Scheme>) {
        self.entries.retain(|e| e.name() != s.name());
        self.entries.push(s);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|s| s.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Scheme>> {
        self.entries
            .iter()
            .find(|s| s.name() == name)
            .cloned()
            .ok_or_else(|| MlaError::UnknownStrategy { kind: "scheme", name: name.to_string() })
    }

    pub fn by_order(&self, order: usize) -> Result<Arc<dyn Scheme>> {
        self.entries
            .iter()
            .find(|s| s.order() == order)
            .cloned()
            .ok_or_else(|| MlaError::Config(format!("no scheme of order {order}")))
    }
}

/// Inclusive node ranges `(i0, i1), (j0, j1)` updated by the interior stepper.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UpdateRange {
    pub i: (isize, isize),
    pub j: (isize, isize),
}

/// Read-only view of levels n and n-1.
pub struct Levels<'a> {
    pub e_prev: &'a GridFunction,
    pub e: &'a GridFunction,
    pub p_prev: &'a GridFunction,
    pub p: &'a GridFunction,
    pub n: &'a GridFunction,
}

impl<'a> Levels<'a> {
    pub fn of(state: &'a FieldState) -> Self {
        Levels {
            e_prev: &state.e[0],
            e: &state.e[1],
            p_prev: &state.p[0],
            p: &state.p[1],
            n: &state.n_lev[0],
        }
    }
}

/// Collect point values and the spatial operators `order` needs at flat offset `kk`.
pub fn gather_point(lv: &Levels, st: &Stencil, k: &KernelCoeffs, kk: usize, order: usize) -> PointData {
    let mut pd = PointData::default();
    let d = k.d;
    for c in 0..d {
        let e = lv.e.comp(c);
        pd.e[c] = e[kk];
        pd.e_prev[c] = lv.e_prev.comp(c)[kk];
        pd.lap2_e[c] = st.lap2(e, kk);
    }
    for m in 0..k.np {
        for c in 0..d {
            pd.p[m][c] = lv.p.comp(m * d + c)[kk];
            pd.p_prev[m][c] = lv.p_prev.comp(m * d + c)[kk];
        }
    }
    for l in 0..k.nn {
        pd.n[l] = lv.n.comp(l)[kk];
    }
    if order >= 4 {
        for c in 0..d {
            let e = lv.e.comp(c);
            pd.lap2_e_prev[c] = st.lap2(lv.e_prev.comp(c), kk);
            pd.lap4_e[c] = st.lap4(e, kk);
            pd.lapsq2_e[c] = st.lapsq2(e, kk);
            for m in 0..k.np {
                pd.lap4_p[m][c] = st.lap4(lv.p.comp(m * d + c), kk);
                pd.lap4_p_prev[m][c] = st.lap4(lv.p_prev.comp(m * d + c), kk);
            }
            for l in 0..k.nn {
                pd.lap_ne[l][c] = st.lap_product(e, lv.n.comp(l), kk);
            }
        }
    }
    pd
}

/// Advance every node of `range` from level n to level n+1 (written into the next slots).
pub fn advance(
    scheme: &dyn Scheme,
    state: &mut FieldState,
    k: &KernelCoeffs,
    dt: f64,
    forcing: &dyn Forcing,
    range: UpdateRange,
) {
    let grid = state.grid.clone();
    let st = Stencil::new(&grid);
    let (d, np, nn) = (state.d, state.np, state.nn);
    let t = state.t;
    let order = scheme.order();
    let zero = forcing.is_zero();
    let (e_read, e_write) = state.e.split_at_mut(2);
    let (p_read, p_write) = state.p.split_at_mut(2);
    let (n_read, n_write) = state.n_lev.split_at_mut(1);
    let lv = Levels { e_prev: &e_read[0], e: &e_read[1], p_prev: &p_read[0], p: &p_read[1], n: &n_read[0] };
    let (en, pn, nnext) = (&mut e_write[0], &mut p_write[0], &mut n_write[0]);
    let nodes = grid.num_nodes();
    for j in range.j.0..=range.j.1 {
        for i in range.i.0..=range.i.1 {
            let kk = grid.idx(i, j);
            let f = if zero { ForcingSample::ZERO } else { forcing.sample(grid.point(i, j), t) };
            let pd = gather_point(&lv, &st, k, kk, order);
            let u = scheme.update_point(k, dt, &pd, &f);
            let (ed, pdat, ndat) = (en.data_mut(), pn.data_mut(), nnext.data_mut());
            for c in 0..d {
                ed[c * nodes + kk] = u.e_next[c];
                for m in 0..np {
                    pdat[(m * d + c) * nodes + kk] = u.p_next[m][c];
                }
            }
            for l in 0..nn {
                ndat[l * nodes + kk] = u.n_next[l];
            }
        }
    }
}
