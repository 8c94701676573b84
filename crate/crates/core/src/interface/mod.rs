//! Planar two-material interfaces on matched Cartesian grids.
//!
//! Ghost values of E on both sides are found from jump conditions written in
//! local coordinates: `p` counts nodes inward from the interface (ghosts have
//! `p < 0`), `q` runs along the interface, and `∂_normal = sigma * D_p` with
//! `sigma = +1` on a low face and `-1` on a high face. Locally `A` is the normal
//! E component and `B` the tangential one (the only one in 1D).
//!
//! Each system is solved in residual-correction form `A q_new = A q_old - R(q_old)`.
//! The matrix holds only pure-normal stencil weights of the unknown ghosts, so
//! terms with tangential differences and every P-dependent term are frozen at
//! their current values and the matrix is the same at every point and step.

pub mod lu;

use crate::boundary::{face_index, wrap_current, Boundaries, FaceKind};
use crate::error::{MlaError, Result};
use crate::forcing::Forcing;
use crate::grid::GridSpec;
use crate::material::MaterialParams;
use crate::state::{FieldState, CUR};
use crate::stencils::Stencil;
use crate::stepper::kernel::{ptt_known, update_order4, KernelCoeffs};
use crate::stepper::{gather_point, Levels};
use lu::{lu_factor, lu_solve, DenseSystem, LuFactors};
use serde::{Deserialize, Serialize};

/// One side of an interface: face `face` (0 low, 1 high) of domain `domain` on the shared normal axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfaceSide {
    pub domain: usize,
    pub face: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfaceSpec {
    pub axis: usize,
    pub sides: [InterfaceSide; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cond {
    Div2,
    Curl2,
    LapA2,
    WaveB2,
    Div4,
    Curl4,
    LapA4,
    /// Tangential wave equation with the second-order `P_tt`.
    WaveB4,
    /// Tangential wave equation with the fourth-order `P_tt`.
    WaveB4Full,
    DivLap,
    CurlLap,
    LapSqA,
    LapSqB,
}

/// Which condition set is being solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Order-2 scheme: ghost line 1.
    Order2,
    /// Order-4 scheme, first pass: ghost line 1 from the order-2 conditions with 4th-order stencils.
    First,
    /// Order-4 scheme, second pass: ghost lines 1 and 2.
    Second,
}

impl Stage {
    fn conditions(self, dim: usize) -> &'static [Cond] {
        use Cond::*;
        match (self, dim) {
            (Stage::Order2, 2) => &[Div2, Curl2, LapA2, WaveB2],
            (Stage::Order2, _) => &[Curl2, WaveB2],
            (Stage::First, 2) => &[Div4, Curl4, LapA4, WaveB4],
            (Stage::First, _) => &[Curl4, WaveB4],
            (Stage::Second, 2) => &[Div4, LapA4, Curl4, WaveB4Full, DivLap, CurlLap, LapSqA, LapSqB],
            (Stage::Second, _) => &[Curl4, WaveB4Full, CurlLap, LapSqB],
        }
    }

    fn ghost_lines(self) -> usize {
        match self {
            Stage::Second => 2,
            _ => 1,
        }
    }
}

/// Static per-side description.
#[derive(Debug, Clone)]
struct Side {
    grid: GridSpec,
    coeffs: KernelCoeffs,
    sigma: f64,
    face: usize,
    mu: f64,
}

/// E values around an interface node in local `(component, p, q)` layout.
#[derive(Debug, Clone, Copy)]
struct Patch {
    v: [[[f64; 5]; 5]; 2],
}

/// Frozen data terms at the 5-point cross `(0,0), (1,0), (-1,0), (0,1), (0,-1)`.
#[derive(Debug, Clone, Copy, Default)]
struct SideData {
    q: [[f64; 2]; 5],
    fe: [[f64; 2]; 5],
    lapfe: [f64; 2],
    fett_b: f64,
    d4ttp_b: f64,
    ptttt_b: f64,
}

const CROSS: [(isize, isize); 5] = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)];

struct Eval<'a> {
    side: &'a Side,
    patch: &'a Patch,
    hn: f64,
    ht: f64,
    /// Include tangential differences.
    tan: bool,
    dim: usize,
}

impl Eval<'_> {
    #[inline]
    fn f(&self, c: usize, p: isize, q: isize) -> f64 {
        self.patch.v[c][(p + 2) as usize][(q + 2) as usize]
    }
    fn dp1(&self, c: usize, p: isize, q: isize) -> f64 {
        (self.f(c, p + 1, q) - self.f(c, p - 1, q)) / (2.0 * self.hn)
    }
    fn dp1_4(&self, c: usize) -> f64 {
        (self.f(c, -2, 0) - 8.0 * self.f(c, -1, 0) + 8.0 * self.f(c, 1, 0) - self.f(c, 2, 0)) / (12.0 * self.hn)
    }
    fn dpp2(&self, c: usize, p: isize, q: isize) -> f64 {
        (self.f(c, p + 1, q) - 2.0 * self.f(c, p, q) + self.f(c, p - 1, q)) / (self.hn * self.hn)
    }
    fn dpp4(&self, c: usize) -> f64 {
        (-self.f(c, -2, 0) + 16.0 * self.f(c, -1, 0) - 30.0 * self.f(c, 0, 0) + 16.0 * self.f(c, 1, 0)
            - self.f(c, 2, 0))
            / (12.0 * self.hn * self.hn)
    }
    fn dq1(&self, c: usize, p: isize, q: isize) -> f64 {
        if !self.tan {
            return 0.0;
        }
        (self.f(c, p, q + 1) - self.f(c, p, q - 1)) / (2.0 * self.ht)
    }
    fn dq1_4(&self, c: usize) -> f64 {
        if !self.tan {
            return 0.0;
        }
        (self.f(c, 0, -2) - 8.0 * self.f(c, 0, -1) + 8.0 * self.f(c, 0, 1) - self.f(c, 0, 2)) / (12.0 * self.ht)
    }
    fn dqq2(&self, c: usize, p: isize, q: isize) -> f64 {
        if !self.tan {
            return 0.0;
        }
        (self.f(c, p, q + 1) - 2.0 * self.f(c, p, q) + self.f(c, p, q - 1)) / (self.ht * self.ht)
    }
    fn dqq4(&self, c: usize) -> f64 {
        if !self.tan {
            return 0.0;
        }
        (-self.f(c, 0, -2) + 16.0 * self.f(c, 0, -1) - 30.0 * self.f(c, 0, 0) + 16.0 * self.f(c, 0, 1)
            - self.f(c, 0, 2))
            / (12.0 * self.ht * self.ht)
    }
    fn lap2(&self, c: usize, p: isize, q: isize) -> f64 {
        self.dpp2(c, p, q) + self.dqq2(c, p, q)
    }
    fn lap4(&self, c: usize) -> f64 {
        self.dpp4(c) + self.dqq4(c)
    }
    /// Centered first differences of `lap2 E_c` at the interface node.
    fn lap_dp(&self, c: usize) -> f64 {
        (self.lap2(c, 1, 0) - self.lap2(c, -1, 0)) / (2.0 * self.hn)
    }
    fn lap_dq(&self, c: usize) -> f64 {
        if !self.tan {
            return 0.0;
        }
        (self.lap2(c, 0, 1) - self.lap2(c, 0, -1)) / (2.0 * self.ht)
    }
    fn lapsq(&self, c: usize) -> f64 {
        let l0 = self.lap2(c, 0, 0);
        let mut v = (self.lap2(c, 1, 0) - 2.0 * l0 + self.lap2(c, -1, 0)) / (self.hn * self.hn);
        if self.tan {
            v += (self.lap2(c, 0, 1) - 2.0 * l0 + self.lap2(c, 0, -1)) / (self.ht * self.ht);
        }
        v
    }

    /// Grid-data operators on the 5-point cross (always with tangential terms in 2D).
    fn data_dp(&self, g: &[[f64; 2]; 5], c: usize) -> f64 {
        (g[1][c] - g[2][c]) / (2.0 * self.hn)
    }
    fn data_dq(&self, g: &[[f64; 2]; 5], c: usize) -> f64 {
        if self.dim == 1 {
            return 0.0;
        }
        (g[3][c] - g[4][c]) / (2.0 * self.ht)
    }
    fn data_lap(&self, g: &[[f64; 2]; 5], c: usize) -> f64 {
        let mut v = (g[1][c] - 2.0 * g[0][c] + g[2][c]) / (self.hn * self.hn);
        if self.dim == 2 {
            v += (g[3][c] - 2.0 * g[0][c] + g[4][c]) / (self.ht * self.ht);
        }
        v
    }

    /// Side expression of condition `cond`; `data = None` drops every frozen data term.
    fn cond(&self, cond: Cond, data: Option<&SideData>) -> f64 {
        const A: usize = 0;
        const B: usize = 1;
        let s = self.side.sigma;
        let mu = self.side.mu;
        let c2 = self.side.coeffs.c2;
        let ap = self.side.coeffs.ap;
        let with = |f: &dyn Fn(&SideData) -> f64| data.map_or(0.0, f);
        match cond {
            Cond::Div2 => s * self.dp1(A, 0, 0) + self.dq1(B, 0, 0),
            Cond::Curl2 => (s * self.dp1(B, 0, 0) - self.dq1(A, 0, 0)) / mu,
            Cond::LapA2 => self.lap2(A, 0, 0) / mu,
            Cond::WaveB2 => c2 * self.lap2(B, 0, 0) + with(&|d| -ap * d.q[0][B] + d.fe[0][B]),
            Cond::Div4 => s * self.dp1_4(A) + self.dq1_4(B),
            Cond::Curl4 => (s * self.dp1_4(B) - self.dq1_4(A)) / mu,
            Cond::LapA4 => self.lap4(A) / mu,
            Cond::WaveB4 => c2 * self.lap4(B) + with(&|d| -ap * d.q[0][B] + d.fe[0][B]),
            Cond::WaveB4Full => c2 * self.lap4(B) + with(&|d| -ap * d.d4ttp_b + d.fe[0][B]),
            Cond::DivLap => {
                c2 * (s * self.lap_dp(A) + self.lap_dq(B))
                    + with(&|d| {
                        -ap * (s * self.data_dp(&d.q, A) + self.data_dq(&d.q, B))
                            + s * self.data_dp(&d.fe, A)
                            + self.data_dq(&d.fe, B)
                    })
            }
            Cond::CurlLap => {
                (c2 * (s * self.lap_dp(B) - self.lap_dq(A))
                    + with(&|d| {
                        -ap * (s * self.data_dp(&d.q, B) - self.data_dq(&d.q, A))
                            + s * self.data_dp(&d.fe, B)
                            - self.data_dq(&d.fe, A)
                    }))
                    / mu
            }
            Cond::LapSqA => (c2 * self.lapsq(A) + with(&|d| -ap * self.data_lap(&d.q, A) + d.lapfe[A])) / mu,
            Cond::LapSqB => {
                c2 * c2 * self.lapsq(B)
                    + with(&|d| {
                        -c2 * ap * self.data_lap(&d.q, B) + c2 * d.lapfe[B] - ap * d.ptttt_b + d.fett_b
                    })
            }
        }
    }
}

/// Interface ghost solver with factored matrices for each stage.
pub struct InterfaceSolver {
    spec: InterfaceSpec,
    dim: usize,
    order: usize,
    dt: f64,
    sides: [Side; 2],
    /// Tangential node range on side 0 and the index shift to side 1.
    tan_range: (isize, isize),
    tan_shift: isize,
    systems: Vec<(Stage, DenseSystem, LuFactors)>,
    first_done: Option<usize>,
}

/// Map local component (A = 0, B = 1) to the physical component index.
fn phys_comp(dim: usize, axis: usize, local: usize) -> Option<usize> {
    if dim == 1 {
        (local == 1).then_some(0)
    } else if local == 0 {
        Some(axis)
    } else {
        Some(1 - axis)
    }
}

impl InterfaceSolver {
    pub fn new(
        spec: InterfaceSpec,
        grids: [&GridSpec; 2],
        bcs: [&Boundaries; 2],
        materials: [&MaterialParams; 2],
        order: usize,
        dt: f64,
    ) -> Result<Self> {
        let axis = spec.axis;
        let dim = grids[0].dim();
        if grids[1].dim() != dim || axis >= dim {
            return Err(MlaError::Config("interface grids must share dimension and contain the axis".into()));
        }
        let [f0, f1] = [spec.sides[0].face, spec.sides[1].face];
        if f0 > 1 || f1 > 1 || f0 == f1 {
            return Err(MlaError::Config("interface faces must be one low and one high face".into()));
        }
        let face_coord = |g: &GridSpec, f: usize| if f == 0 { g.lo(axis) } else { g.hi(axis) };
        let (x0, x1) = (face_coord(grids[0], f0), face_coord(grids[1], f1));
        let hn = grids[0].h(axis);
        if (x0 - x1).abs() > 1e-12 * hn.max(1.0) || (grids[1].h(axis) - hn).abs() > 1e-12 * hn {
            return Err(MlaError::Config("interface faces must coincide with equal normal spacing".into()));
        }
        for s in 0..2 {
            if bcs[s].face(axis, spec.sides[s].face) != FaceKind::Interface {
                return Err(MlaError::Config(format!("side {s}: interface face not marked as interface")));
            }
        }
        let (mut tan_range, mut tan_shift) = ((0, 0), 0);
        if dim == 2 {
            let t = 1 - axis;
            let (g0, g1) = (grids[0], grids[1]);
            let ht = g0.h(t);
            if (g1.h(t) - ht).abs() > 1e-12 * ht
                || (g0.lo(t) - g1.lo(t)).abs() > 1e-9 * ht
                || (g0.hi(t) - g1.hi(t)).abs() > 1e-9 * ht
                || bcs[0].0[t] != bcs[1].0[t]
            {
                return Err(MlaError::Config("interface grids must match along the interface".into()));
            }
            let r = bcs[0].update_range(g0);
            tan_range = if axis == 0 { r.j } else { r.i };
            tan_shift = ((g0.lo(t) - g1.lo(t)) / ht).round() as isize;
        }
        let mk_side = |s: usize| Side {
            grid: grids[s].clone(),
            coeffs: KernelCoeffs::new(materials[s], dim),
            sigma: if spec.sides[s].face == 0 { 1.0 } else { -1.0 },
            face: spec.sides[s].face,
            mu: materials[s].mu0(),
        };
        let sides = [mk_side(0), mk_side(1)];
        let stages: &[Stage] = if order == 4 { &[Stage::First, Stage::Second] } else { &[Stage::Order2] };
        let mut solver = InterfaceSolver {
            spec,
            dim,
            order,
            dt,
            sides,
            tan_range,
            tan_shift,
            systems: Vec::new(),
            first_done: None,
        };
        for &st in stages {
            let m = solver.assemble(st);
            let f = lu_factor(&m)?;
            solver.systems.push((st, m, f));
        }
        Ok(solver)
    }

    pub fn spec(&self) -> &InterfaceSpec {
        &self.spec
    }

    pub fn stages(&self) -> Vec<Stage> {
        self.systems.iter().map(|s| s.0).collect()
    }

    /// Assembled matrix of a stage (identical at every point and step).
    pub fn matrix(&self, stage: Stage) -> Option<&DenseSystem> {
        self.systems.iter().find(|s| s.0 == stage).map(|s| &s.1)
    }

    fn local_comps(&self) -> &'static [usize] {
        if self.dim == 2 {
            &[0, 1]
        } else {
            &[1]
        }
    }

    /// Unknown layout: `(side, ghost line, local component)`.
    fn unknowns(&self, stage: Stage) -> Vec<(usize, usize, usize)> {
        let mut u = Vec::new();
        for s in 0..2 {
            for g in 1..=stage.ghost_lines() {
                for &c in self.local_comps() {
                    u.push((s, g, c));
                }
            }
        }
        u
    }

    fn spacings(&self) -> (f64, f64) {
        let g = &self.sides[0].grid;
        let hn = g.h(self.spec.axis);
        let ht = if self.dim == 2 { g.h(1 - self.spec.axis) } else { 1.0 };
        (hn, ht)
    }

    fn eval<'a>(&'a self, s: usize, patch: &'a Patch, tan: bool) -> Eval<'a> {
        let (hn, ht) = self.spacings();
        Eval { side: &self.sides[s], patch, hn, ht, tan: tan && self.dim == 2, dim: self.dim }
    }

    fn assemble(&self, stage: Stage) -> DenseSystem {
        let conds = stage.conditions(self.dim);
        let unk = self.unknowns(stage);
        let n = conds.len();
        debug_assert_eq!(n, unk.len());
        let mut m = DenseSystem::zeros(n);
        for (col, &(s, g, c)) in unk.iter().enumerate() {
            let mut patch = Patch { v: [[[0.0; 5]; 5]; 2] };
            patch.v[c][2 - g][2] = 1.0;
            let ev = self.eval(s, &patch, false);
            let sign = if s == 0 { 1.0 } else { -1.0 };
            for (row, &cond) in conds.iter().enumerate() {
                m.set(row, col, sign * ev.cond(cond, None));
            }
        }
        m
    }

    /// Flat node index on side `s` at local offsets `(p, q)` from tangential index `j` (side 0 numbering).
    fn node(&self, s: usize, j: isize, p: isize, q: isize) -> (isize, isize) {
        let side = &self.sides[s];
        let axis = self.spec.axis;
        let a = face_index(&side.grid, axis, side.face, p);
        let jt = j + q + if s == 1 { self.tan_shift } else { 0 };
        if axis == 0 {
            (a, jt)
        } else {
            (jt, a)
        }
    }

    fn patch(&self, s: usize, st: &FieldState, j: isize) -> Patch {
        let mut patch = Patch { v: [[[0.0; 5]; 5]; 2] };
        let qr: isize = if self.dim == 2 { 2 } else { 0 };
        for &lc in self.local_comps() {
            let pc = phys_comp(self.dim, self.spec.axis, lc).unwrap();
            for p in -2..=2isize {
                for q in -qr..=qr {
                    let (i, jj) = self.node(s, j, p, q);
                    patch.v[lc][(p + 2) as usize][(q + 2) as usize] = st.e[CUR].get(pc, i, jj);
                }
            }
        }
        patch
    }

    fn side_data(&self, s: usize, st: &FieldState, forcing: &dyn Forcing, j: isize, stage: Stage) -> SideData {
        let side = &self.sides[s];
        let grid = &side.grid;
        let sten = Stencil::new(grid);
        let lv = Levels::of(st);
        let k = &side.coeffs;
        let t = st.t;
        let mut data = SideData::default();
        let npts = if stage == Stage::Second { 5 } else { 1 };
        let to_local = |v: [f64; 2]| -> [f64; 2] {
            let mut out = [0.0; 2];
            for &lc in self.local_comps() {
                out[lc] = v[phys_comp(self.dim, self.spec.axis, lc).unwrap()];
            }
            out
        };
        for (n, &(p, q)) in CROSS.iter().enumerate().take(npts) {
            if self.dim == 1 && q != 0 {
                continue;
            }
            let (i, jj) = self.node(s, j, p, q);
            let kk = grid.idx(i, jj);
            let x = grid.point(i, jj);
            let f = forcing.sample(x, t);
            let pd = gather_point(&lv, &sten, k, kk, 2);
            data.q[n] = to_local(ptt_known(k, self.dt, &pd, &f));
            data.fe[n] = to_local(f.fe);
            if n == 0 {
                data.lapfe = to_local(f.lapfe);
                data.fett_b = to_local(f.fett)[1];
                if stage == Stage::Second {
                    let pd4 = gather_point(&lv, &sten, k, kk, 4);
                    let u = update_order4(k, self.dt, &pd4, &f);
                    let dt2 = self.dt * self.dt;
                    let mut d4 = [0.0; 2];
                    let mut p4 = [0.0; 2];
                    for m in 0..k.np {
                        for c in 0..k.d {
                            d4[c] += (u.p_next[m][c] - 2.0 * pd4.p[m][c] + pd4.p_prev[m][c]) / dt2
                                - dt2 / 12.0 * u.scratch.pttttv_star[m][c];
                            p4[c] += u.scratch.pttttv_star[m][c];
                        }
                    }
                    data.d4ttp_b = to_local(d4)[1];
                    data.ptttt_b = to_local(p4)[1];
                }
            }
        }
        data
    }

    /// Residuals `R_0 - R_1` of every condition at tangential index `j`.
    fn residuals(&self, stage: Stage, patches: &[Patch; 2], data: &[SideData; 2]) -> Vec<f64> {
        let e0 = self.eval(0, &patches[0], true);
        let e1 = self.eval(1, &patches[1], true);
        stage
            .conditions(self.dim)
            .iter()
            .map(|&c| e0.cond(c, Some(&data[0])) - e1.cond(c, Some(&data[1])))
            .collect()
    }

    /// Solve one stage at every interface node and write the ghost values (Jacobi style).
    pub fn solve_stage(
        &mut self,
        stage: Stage,
        states: [&mut FieldState; 2],
        forcing: [&dyn Forcing; 2],
        bcs: [&Boundaries; 2],
    ) -> Result<()> {
        let [s0, s1] = states;
        let step = s0.step;
        match stage {
            Stage::Second if self.first_done != Some(step) => return Err(MlaError::StageOrderViolation),
            Stage::First => self.first_done = None,
            _ => {}
        }
        let (_, _, lu) = self
            .systems
            .iter()
            .find(|s| s.0 == stage)
            .ok_or_else(|| MlaError::Config(format!("stage {stage:?} not used at order {}", self.order)))?;
        let unk = self.unknowns(stage);
        let a = self.matrix(stage).unwrap();
        let mut updates = Vec::new();
        for j in self.tan_range.0..=self.tan_range.1 {
            let patches = [self.patch(0, s0, j), self.patch(1, s1, j)];
            let data = [
                self.side_data(0, s0, forcing[0], j, stage),
                self.side_data(1, s1, forcing[1], j, stage),
            ];
            let r = self.residuals(stage, &patches, &data);
            let q_old: Vec<f64> = unk.iter().map(|&(s, g, c)| patches[s].v[c][2 - g][2]).collect();
            let aq = a.mul_vec(&q_old);
            let rhs: Vec<f64> = aq.iter().zip(&r).map(|(x, y)| x - y).collect();
            updates.push((j, lu_solve(lu, &rhs)));
        }
        for (j, q) in updates {
            for (&(s, g, lc), v) in unk.iter().zip(&q) {
                let pc = phys_comp(self.dim, self.spec.axis, lc).unwrap();
                let (i, jj) = self.node(s, j, -(g as isize), 0);
                let st: &mut FieldState = if s == 0 { s0 } else { s1 };
                st.e[CUR].set(pc, i, jj, *v);
            }
        }
        wrap_current(s0, bcs[0]);
        wrap_current(s1, bcs[1]);
        if stage == Stage::First {
            self.first_done = Some(step);
        }
        Ok(())
    }

    /// All stages in order.
    pub fn apply(&mut self, states: [&mut FieldState; 2], forcing: [&dyn Forcing; 2], bcs: [&Boundaries; 2]) -> Result<()> {
        let [s0, s1] = states;
        for stage in self.stages() {
            self.solve_stage(stage, [&mut *s0, &mut *s1], forcing, bcs)?;
        }
        Ok(())
    }

    /// Max absolute jump residual over interface nodes for the last stage.
    pub fn max_residual(&self, states: [&FieldState; 2], forcing: [&dyn Forcing; 2]) -> f64 {
        let stage = *self.stages().last().unwrap();
        let mut m: f64 = 0.0;
        for j in self.tan_range.0..=self.tan_range.1 {
            let patches = [self.patch(0, states[0], j), self.patch(1, states[1], j)];
            let data = [
                self.side_data(0, states[0], forcing[0], j, stage),
                self.side_data(1, states[1], forcing[1], j, stage),
            ];
            for r in self.residuals(stage, &patches, &data) {
                m = m.max(r.abs());
            }
        }
        m
    }
}
