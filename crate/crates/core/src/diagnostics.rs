//! Error norms, convergence rates, population sums and the polarization-population energy.

use crate::error::{MlaError, Result};
use crate::grid::{for_each_interior, GridFunction};
use crate::material::{MaterialParams, MAX_LEV, MAX_POL};
use crate::solutions::{FieldId, SolutionSource};
use crate::state::{FieldState, CUR, NEXT, PREV};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSelector {
    E,
    P,
    N,
    All,
}

/// Max-norm errors per field family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldErrors {
    pub e: f64,
    pub p: f64,
    pub n: f64,
}

impl FieldErrors {
    pub fn max(&self) -> f64 {
        self.e.max(self.p).max(self.n)
    }
}

/// Max over non-ghost nodes and selected components of `|computed - exact|` at time `t`.
pub fn max_norm_error(state: &FieldState, src: &dyn SolutionSource, t: f64, sel: FieldSelector) -> f64 {
    let e = field_errors(state, src, t);
    match sel {
        FieldSelector::E => e.e,
        FieldSelector::P => e.p,
        FieldSelector::N => e.n,
        FieldSelector::All => e.max(),
    }
}

pub fn field_errors(state: &FieldState, src: &dyn SolutionSource, t: f64) -> FieldErrors {
    let g = &state.grid;
    let (d, np, nn) = (state.d, state.np, state.nn);
    let mut err = FieldErrors::default();
    for_each_interior(g, |i, j| {
        let x = g.point(i, j);
        for c in 0..d {
            err.e = err.e.max((state.e[CUR].get(c, i, j) - src.value(FieldId::E(c), x, t)).abs());
            for m in 0..np {
                err.p = err.p.max((state.p[CUR].get(m * d + c, i, j) - src.value(FieldId::P(m, c), x, t)).abs());
            }
        }
        for l in 0..nn {
            err.n = err.n.max((state.n_lev[0].get(l, i, j) - src.value(FieldId::N(l), x, t)).abs());
        }
    });
    err
}

/// Max-norm of `u - v` over non-ghost nodes (same grid).
pub fn max_norm_diff(u: &GridFunction, v: &GridFunction) -> f64 {
    let g = u.grid();
    let mut m: f64 = 0.0;
    for_each_interior(g, |i, j| {
        for c in 0..u.ncomp() {
            m = m.max((u.get(c, i, j) - v.get(c, i, j)).abs());
        }
    });
    m
}

/// Pairwise observed orders `log(e_k/e_{k+1}) / log(h_k/h_{k+1})`.
pub fn convergence_rate(errors: &[(f64, f64)]) -> Result<Vec<f64>> {
    if errors.len() < 2 {
        return Err(MlaError::DegenerateInput("need at least two (h, err) pairs".into()));
    }
    if let Some(&(h, e)) = errors.iter().find(|(h, e)| !(*e > 0.0) || !(*h > 0.0)) {
        return Err(MlaError::DegenerateInput(format!("error {e:e} at h = {h} is at floor")));
    }
    errors
        .windows(2)
        .map(|w| {
            let ((h0, e0), (h1, e1)) = (w[0], w[1]);
            if !(h1 < h0) {
                return Err(MlaError::DegenerateInput("h must be strictly decreasing".into()));
            }
            Ok((e0 / e1).ln() / (h0 / h1).ln())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfConvergence {
    /// `|u_h - u_{h/2}|` on common nodes.
    pub e1: f64,
    /// `|u_{h/2} - u_{h/4}|` on common nodes.
    pub e2: f64,
    /// `log2(e1/e2)`; `None` when the differences are at floor.
    pub rate: Option<f64>,
}

/// Max-norm difference between a grid function and its refinement by `ratio`, sampled on the coarse nodes.
pub fn nested_diff(coarse: &GridFunction, fine: &GridFunction, ratio: usize) -> Result<f64> {
    let (gc, gf) = (coarse.grid(), fine.grid());
    if !gc.nests(gf, ratio) || coarse.ncomp() != fine.ncomp() {
        return Err(MlaError::GridsNotNested(format!(
            "n = {} vs {} (ratio {ratio})",
            gc.n(0),
            gf.n(0)
        )));
    }
    let r = ratio as isize;
    let mut m: f64 = 0.0;
    for_each_interior(gc, |i, j| {
        for c in 0..coarse.ncomp() {
            m = m.max((coarse.get(c, i, j) - fine.get(c, r * i, r * j)).abs());
        }
    });
    Ok(m)
}

pub fn self_convergence(u_h: &GridFunction, u_h2: &GridFunction, u_h4: &GridFunction) -> Result<SelfConvergence> {
    let e1 = nested_diff(u_h, u_h2, 2)?;
    let e2 = nested_diff(u_h2, u_h4, 2)?;
    let rate = (e1 > 0.0 && e2 > 0.0).then(|| (e1 / e2).log2());
    Ok(SelfConvergence { e1, e2, rate })
}

/// `sum_l N_l` at every non-ghost node, in interior iteration order.
pub fn population_sum(state: &FieldState) -> Vec<f64> {
    let g = &state.grid;
    let mut out = Vec::new();
    for_each_interior(g, |i, j| {
        out.push((0..state.nn).map(|l| state.n_lev[0].get(l, i, j)).sum());
    });
    out
}

/// Tracks the largest pointwise deviation of `sum_l N_l` from its initial value.
#[derive(Debug, Clone)]
pub struct PopulationMonitor {
    initial: Vec<f64>,
    pub max_deviation: f64,
}

impl PopulationMonitor {
    pub fn new(state: &FieldState) -> Self {
        PopulationMonitor { initial: population_sum(state), max_deviation: 0.0 }
    }

    pub fn deviation(&self, state: &FieldState) -> f64 {
        population_sum(state)
            .iter()
            .zip(&self.initial)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn update(&mut self, state: &FieldState) -> f64 {
        let d = self.deviation(state);
        self.max_deviation = self.max_deviation.max(d);
        d
    }
}

/// One radiative transition `j -> i` driving polarization `m` (its position in the list).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub low: usize,
    pub high: usize,
    pub omega: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub hbar_omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyPairing {
    transitions: Vec<Transition>,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300)
}

impl EnergyPairing {
    /// Check that `material` has exactly the structure the transitions imply.
    pub fn new(transitions: Vec<Transition>, material: &MaterialParams) -> Result<Self> {
        let mis = |s: String| Err(MlaError::PairingMismatch(s));
        if transitions.len() != material.num_polarization() {
            return mis(format!(
                "{} transitions for {} polarizations",
                transitions.len(),
                material.num_polarization()
            ));
        }
        let nn = material.num_levels();
        for (m, tr) in transitions.iter().enumerate() {
            if !(tr.kappa > 0.0 && tr.omega > 0.0 && tr.gamma >= 0.0 && tr.hbar_omega > 0.0) {
                return mis(format!("transition {m}: need kappa, omega, hbar_omega > 0 and gamma >= 0"));
            }
            if tr.low >= nn || tr.high >= nn || tr.low == tr.high {
                return mis(format!("transition {m}: bad levels {} -> {}", tr.high, tr.low));
            }
            if !close(material.b1(m), tr.gamma) || !close(material.b0(m), tr.omega * tr.omega) {
                return mis(format!("transition {m}: b0/b1 do not match omega^2/gamma"));
            }
            for l in 0..nn {
                let (a_want, b_want) = if l == tr.low {
                    (tr.kappa, -1.0 / tr.hbar_omega)
                } else if l == tr.high {
                    (-tr.kappa, 1.0 / tr.hbar_omega)
                } else {
                    (0.0, 0.0)
                };
                let ok_a = if a_want == 0.0 { material.a(m, l) == 0.0 } else { close(material.a(m, l), a_want) };
                let ok_b = if b_want == 0.0 { material.beta(l, m) == 0.0 } else { close(material.beta(l, m), b_want) };
                if !ok_a || !ok_b {
                    return mis(format!("transition {m}, level {l}: a or beta inconsistent"));
                }
            }
        }
        Ok(EnergyPairing { transitions })
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// `sum kappa * hbar_omega`.
    pub fn k_total(&self) -> f64 {
        self.transitions.iter().map(|t| t.kappa * t.hbar_omega).sum()
    }

    pub fn delta(&self, m: usize) -> f64 {
        let t = &self.transitions[m];
        self.k_total() / (t.kappa * t.hbar_omega)
    }

    /// Energy density at a point from P, its time derivative, and N.
    pub fn density(&self, d: usize, p: &[[f64; 2]; MAX_POL], pt: &[[f64; 2]; MAX_POL], n: &[f64; MAX_LEV], nn: usize) -> f64 {
        let mut s = 0.0;
        for (m, tr) in self.transitions.iter().enumerate() {
            let mut kin = 0.0;
            let mut pot = 0.0;
            for c in 0..d {
                kin += pt[m][c] * pt[m][c];
                pot += p[m][c] * p[m][c];
            }
            s += self.delta(m) * (0.5 * kin + 0.5 * tr.omega * tr.omega * pot);
        }
        let n2: f64 = n[..nn].iter().map(|v| v * v).sum();
        s + 0.5 * self.k_total() * n2
    }
}

/// Energy value plus whether `P_t` came from a one-sided difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyValue {
    pub value: f64,
    pub one_sided: bool,
}

/// Trapezoid-rule energy over the grid at level n.
///
/// With `next_valid`, `P_t = (P^{n+1} - P^{n-1}) / 2dt`; otherwise the backward difference
/// `(P^n - P^{n-1}) / dt` is used and flagged.
pub fn energy_pn(state: &FieldState, pairing: &EnergyPairing, dt: f64, next_valid: bool) -> EnergyValue {
    let g = &state.grid;
    let (d, np, nn) = (state.d, state.np, state.nn);
    let weight = |axis: usize, k: isize| -> f64 {
        if axis >= g.dim() {
            return 1.0;
        }
        let w = g.h(axis);
        if k == 0 || k == g.n(axis) as isize {
            0.5 * w
        } else {
            w
        }
    };
    let mut total = 0.0;
    for_each_interior(g, |i, j| {
        let mut p = [[0.0; 2]; MAX_POL];
        let mut pt = [[0.0; 2]; MAX_POL];
        let mut n = [0.0; MAX_LEV];
        for m in 0..np {
            for c in 0..d {
                let comp = m * d + c;
                let pc = state.p[CUR].get(comp, i, j);
                let pp = state.p[PREV].get(comp, i, j);
                p[m][c] = pc;
                pt[m][c] = if next_valid {
                    (state.p[NEXT].get(comp, i, j) - pp) / (2.0 * dt)
                } else {
                    (pc - pp) / dt
                };
            }
        }
        for (l, v) in n.iter_mut().enumerate().take(nn) {
            *v = state.n_lev[0].get(l, i, j);
        }
        total += weight(0, i) * weight(1, j) * pairing.density(d, &p, &pt, &n, nn);
    });
    EnergyValue { value: total, one_sided: !next_valid }
}

/// `eps0/2 |E|^2` over the grid at level n.
pub fn electric_energy(state: &FieldState, eps0: f64) -> f64 {
    let g = &state.grid;
    let mut s = 0.0;
    for_each_interior(g, |i, j| {
        for c in 0..state.d {
            let v = state.e[CUR].get(c, i, j);
            s += v * v;
        }
    });
    0.5 * eps0 * s * g.cell_volume()
}
