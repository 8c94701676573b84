//! Refinement studies: MMS convergence, soliton self-convergence, 0D energy drift.

use crate::config::SimulationConfig;
use crate::diagnostics::{convergence_rate, nested_diff, EnergyPairing, FieldErrors, Transition};
use crate::driver::Simulation;
use crate::error::{MlaError, Result};
use crate::forcing::ForcingSample;
use crate::grid::for_each_interior;
use crate::material::{build_material, MaterialParams, RawMaterial, MAX_LEV, MAX_POL};
use crate::output::ConvergenceRow;
use crate::solutions::soliton::SolitonParams;
use crate::state::{FieldState, CUR};
use crate::stepper::ode::PointOde;
use crate::stepper::SchemeRegistry;
use serde::{Deserialize, Serialize};

fn min_h(cfg: &SimulationConfig) -> f64 {
    cfg.domains
        .iter()
        .flat_map(|d| (0..d.grid.n.len()).map(move |k| (d.grid.hi[k] - d.grid.lo[k]) / d.grid.n[k] as f64))
        .fold(f64::INFINITY, f64::min)
}

/// Run `cfg` refined by each factor; errors against the exact source, or self-convergence
/// differences between neighbouring levels when the source is not exact.
pub fn convergence_study(cfg: &SimulationConfig, factors: &[usize]) -> Result<Vec<ConvergenceRow>> {
    if factors.len() < 2 {
        return Err(MlaError::DegenerateInput("need at least two resolutions".into()));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    let mut finals: Vec<Vec<FieldState>> = Vec::new();
    let mut exact = true;
    for &r in factors {
        let c = cfg.refined(r);
        let mut sim = Simulation::from_config(&c)?;
        sim.run()?;
        exact = sim.source.is_exact();
        let errs = sim.errors();
        let e = errs.iter().fold(FieldErrors::default(), |a, b| FieldErrors {
            e: a.e.max(b.e),
            p: a.p.max(b.p),
            n: a.n.max(b.n),
        });
        rows.push(ConvergenceRow { n: c.domains[0].grid.n[0], h: min_h(&c), dt: sim.dt, errors: e, rate: None });
        finals.push(sim.domains.into_iter().map(|d| d.state).collect());
    }
    if !exact {
        let mut out = Vec::new();
        for k in 0..finals.len() - 1 {
            let ratio = factors[k + 1] / factors[k];
            if factors[k + 1] != ratio * factors[k] {
                return Err(MlaError::GridsNotNested("refinement factors must divide each other".into()));
            }
            let mut e = FieldErrors::default();
            for (a, b) in finals[k].iter().zip(&finals[k + 1]) {
                e.e = e.e.max(nested_diff(&a.e[CUR], &b.e[CUR], ratio)?);
                e.p = e.p.max(nested_diff(&a.p[CUR], &b.p[CUR], ratio)?);
                e.n = e.n.max(nested_diff(&a.n_lev[0], &b.n_lev[0], ratio)?);
            }
            out.push(ConvergenceRow { errors: e, ..rows[k].clone() });
        }
        rows = out;
    }
    fill_rates(&mut rows);
    Ok(rows)
}

fn fill_rates(rows: &mut [ConvergenceRow]) {
    for k in 1..rows.len() {
        let pair = [(rows[k - 1].h, rows[k - 1].errors.max()), (rows[k].h, rows[k].errors.max())];
        rows[k].rate = convergence_rate(&pair).ok().map(|r| r[0]);
    }
}

/// Soliton self-convergence plus envelope checks on the finest grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolitonReport {
    /// Self-convergence differences between consecutive levels.
    pub rows: Vec<ConvergenceRow>,
    /// Min of D (N0) within `window` of the predicted envelope centre.
    pub min_d: f64,
    pub max_abs_e: f64,
    pub center: f64,
    pub window: f64,
}

/// Standard soliton config: 1D, exact-Dirichlet ends, `n` nodes on `[lo, hi]`.
pub fn soliton_config(order: usize, params: SolitonParams, lo: f64, hi: f64, n: usize, t_final: f64) -> SimulationConfig {
    use crate::boundary::FaceKind;
    use crate::config::{BoundaryConfig, DomainConfig, GridConfig, OutputConfig, SolutionSpec};
    SimulationConfig {
        order,
        cfl: 0.9,
        t_final: Some(t_final),
        steps: None,
        solution: SolutionSpec {
            kind: "soliton".into(),
            params: serde_json::to_value(params).expect("soliton params serialize"),
        },
        domains: vec![DomainConfig {
            material: None,
            grid: GridConfig { lo: vec![lo], hi: vec![hi], n: vec![n] },
            boundary: BoundaryConfig { x: [FaceKind::DirichletExact; 2], y: None },
        }],
        interface: None,
        output: OutputConfig::default(),
        nan_check_every: 10,
    }
}

pub fn soliton_study(cfg: &SimulationConfig, factors: &[usize], window: f64) -> Result<SolitonReport> {
    if cfg.solution.kind != "soliton" || cfg.dim() != 1 || cfg.domains.len() != 1 {
        return Err(MlaError::Config("soliton study needs a single 1D soliton domain".into()));
    }
    let rows = convergence_study(cfg, factors)?;
    let params: SolitonParams = if cfg.solution.params.is_null() {
        SolitonParams::default()
    } else {
        serde_json::from_value(cfg.solution.params.clone()).map_err(|e| MlaError::Config(e.to_string()))?
    };
    let fine = cfg.refined(*factors.last().unwrap());
    let mut sim = Simulation::from_config(&fine)?;
    sim.run()?;
    let center = params.x0 + params.u * sim.t();
    let st = &sim.domains[0].state;
    let mut min_d = f64::INFINITY;
    for_each_interior(&st.grid, |i, j| {
        if (st.grid.coord(0, i) - center).abs() <= window {
            min_d = min_d.min(st.n_lev[0].get(0, i, j));
        }
    });
    Ok(SolitonReport { rows, min_d, max_abs_e: sim.max_abs_e(), center, window })
}

/// The 0D restricted system used by the energy check: two transitions on four levels,
/// no damping, no relaxation, and a prescribed bounded field.
#[derive(Debug, Clone)]
pub struct EnergyProblem {
    pub material: MaterialParams,
    pub pairing: EnergyPairing,
    pub p0: [f64; 2],
    pub pt0: [f64; 2],
    pub n0: [f64; 4],
}

impl EnergyProblem {
    pub fn standard() -> Result<Self> {
        let transitions = vec![
            Transition { low: 0, high: 3, omega: 2.0, kappa: 0.8, gamma: 0.0, hbar_omega: 0.5 },
            Transition { low: 1, high: 2, omega: 3.0, kappa: 0.5, gamma: 0.0, hbar_omega: 0.25 },
        ];
        let mut a = vec![vec![0.0; 4]; 2];
        let mut beta = vec![vec![0.0; 2]; 4];
        for (m, t) in transitions.iter().enumerate() {
            a[m][t.low] = t.kappa;
            a[m][t.high] = -t.kappa;
            beta[t.low][m] = -1.0 / t.hbar_omega;
            beta[t.high][m] = 1.0 / t.hbar_omega;
        }
        let material = build_material(RawMaterial {
            name: Some("energy-check".into()),
            num_polarization: 2,
            num_levels: 4,
            eps0: 1.0,
            mu0: 1.0,
            a,
            b0: transitions.iter().map(|t| t.omega * t.omega).collect(),
            b1: vec![0.0; 2],
            alpha: vec![vec![0.0; 4]; 4],
            beta,
        })?;
        let pairing = EnergyPairing::new(transitions, &material)?;
        Ok(EnergyProblem { material, pairing, p0: [0.3, 0.2], pt0: [0.0, 0.4], n0: [0.4, 0.3, 0.2, 0.1] })
    }

    /// Prescribed field and its derivatives `[E, E_t, E_tt, E_ttt]`.
    pub fn field(t: f64) -> [f64; 4] {
        let (a, w1, b, w2) = (0.8, 1.3, 0.3, 0.7);
        [
            a * (w1 * t).cos() + b * (w2 * t).sin(),
            -a * w1 * (w1 * t).sin() + b * w2 * (w2 * t).cos(),
            -a * w1 * w1 * (w1 * t).cos() - b * w2 * w2 * (w2 * t).sin(),
            a * w1.powi(3) * (w1 * t).sin() - b * w2.powi(3) * (w2 * t).cos(),
        ]
    }

    /// Right-hand side of the first-order form `(P, P_t, N)`.
    fn rhs(&self, t: f64, y: &[f64; 8]) -> [f64; 8] {
        let e = Self::field(t)[0];
        let m = &self.material;
        let mut out = [0.0; 8];
        for k in 0..2 {
            let an: f64 = (0..4).map(|l| m.a(k, l) * y[4 + l]).sum();
            out[k] = y[2 + k];
            out[2 + k] = -m.b1(k) * y[2 + k] - m.b0(k) * y[k] + an * e;
        }
        for l in 0..4 {
            out[4 + l] = (0..2).map(|k| m.beta(l, k) * e * y[2 + k]).sum();
        }
        out
    }

    fn rk4(&self, y: [f64; 8], t0: f64, t1: f64, sub: usize) -> [f64; 8] {
        let h = (t1 - t0) / sub as f64;
        let mut y = y;
        let mut t = t0;
        let axpy = |y: &[f64; 8], k: &[f64; 8], s: f64| -> [f64; 8] {
            let mut o = *y;
            for i in 0..8 {
                o[i] += s * k[i];
            }
            o
        };
        for _ in 0..sub {
            let k1 = self.rhs(t, &y);
            let k2 = self.rhs(t + h / 2.0, &axpy(&y, &k1, h / 2.0));
            let k3 = self.rhs(t + h / 2.0, &axpy(&y, &k2, h / 2.0));
            let k4 = self.rhs(t + h, &axpy(&y, &k3, h));
            for i in 0..8 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            t += h;
        }
        y
    }

    fn initial(&self) -> [f64; 8] {
        [self.p0[0], self.p0[1], self.pt0[0], self.pt0[1], self.n0[0], self.n0[1], self.n0[2], self.n0[3]]
    }

    /// Point state at t = 0 with `P^{-1}` from an accurate backward integration.
    pub fn point_ode(&self, dt: f64) -> PointOde {
        let mut ode = PointOde::new(&self.material, 1);
        let back = self.rk4(self.initial(), 0.0, -dt, 64);
        ode.e = [Self::field(0.0)[0], 0.0];
        ode.e_prev = [Self::field(-dt)[0], 0.0];
        for m in 0..2 {
            ode.p[m][0] = self.p0[m];
            ode.p_prev[m][0] = back[m];
        }
        ode.n[..4].copy_from_slice(&self.n0);
        ode
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub dt: f64,
    pub steps: usize,
    pub e0: f64,
    /// `max_n |E_PN^n - E_PN^0|` over the run.
    pub max_drift: f64,
    /// Observed order against the previous row.
    pub rate: Option<f64>,
}

/// Discrete E_PN along a 0D run: the energy at level n uses `P_t` from the step n -> n+1.
pub fn energy_history(problem: &EnergyProblem, order: usize, dt: f64, steps: usize) -> Result<Vec<f64>> {
    let scheme = SchemeRegistry::builtin().by_order(order)?;
    let mut ode = problem.point_ode(dt);
    let mut out = Vec::with_capacity(steps + 1);
    for n in 0..=steps {
        let t = n as f64 * dt;
        let next = EnergyProblem::field(t + dt);
        let ettt = EnergyProblem::field(t)[3];
        let (p, nv) = (ode.p, ode.n);
        let u = ode.step(scheme.as_ref(), dt, &ForcingSample::ZERO, Some(([next[0], 0.0], [ettt, 0.0])));
        if !u.p_next.iter().flatten().chain(u.n_next.iter()).all(|v| v.is_finite()) {
            return Err(MlaError::NonFiniteField { step: n + 1, t: t + dt });
        }
        let pt: [[f64; 2]; MAX_POL] = u.scratch.ptv;
        let mut nn = [0.0; MAX_LEV];
        nn[..4].copy_from_slice(&nv[..4]);
        out.push(problem.pairing.density(1, &p, &pt, &nn, 4));
    }
    Ok(out)
}

pub fn energy_check(order: usize, dts: &[f64], t_final: f64) -> Result<Vec<EnergyRow>> {
    let problem = EnergyProblem::standard()?;
    let mut rows: Vec<EnergyRow> = Vec::new();
    for &dt in dts {
        let steps = (t_final / dt).round() as usize;
        let h = energy_history(&problem, order, dt, steps)?;
        let max_drift = h.iter().map(|v| (v - h[0]).abs()).fold(0.0, f64::max);
        let rate = rows
            .last()
            .and_then(|r: &EnergyRow| convergence_rate(&[(r.dt, r.max_drift), (dt, max_drift)]).ok())
            .map(|r| r[0]);
        rows.push(EnergyRow { dt, steps, e0: h[0], max_drift, rate });
    }
    Ok(rows)
}
