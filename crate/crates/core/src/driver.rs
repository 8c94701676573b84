//! Run orchestration: build domains from a config, initialize, step, write outputs.

use crate::boundary::{fill_boundaries, Boundaries};
use crate::config::SimulationConfig;
use crate::diagnostics::{field_errors, FieldErrors, PopulationMonitor};
use crate::error::{MlaError, Result};
use crate::forcing::Forcing;
use crate::grid::{GridFunction, GridSpec};
use crate::interface::InterfaceSolver;
use crate::material::MaterialParams;
use crate::output::{write_snapshot, RunDiagnostics, RunManifest, SnapshotRecord};
use crate::solutions::{FieldId, SolutionContext, SolutionRegistry, SolutionSource};
use crate::state::{FieldState, CUR, PREV};
use crate::stepper::kernel::KernelCoeffs;
use crate::stepper::{advance, Scheme, SchemeRegistry, UpdateRange};
use crate::timestep::{compute_time_step, steps_to_reach};
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

/// One grid with its material, boundaries and forcing.
pub struct Domain {
    pub state: FieldState,
    pub material: MaterialParams,
    pub coeffs: KernelCoeffs,
    pub bcs: Boundaries,
    pub forcing: Arc<dyn Forcing>,
    pub range: UpdateRange,
}

pub struct Simulation {
    pub scheme: Arc<dyn Scheme>,
    pub domains: Vec<Domain>,
    pub source: Arc<dyn SolutionSource>,
    pub interface: Option<InterfaceSolver>,
    pub dt: f64,
    /// CFL step before shrinking to land on `t_final`.
    pub dt_max: f64,
    pub steps: usize,
    pub nan_check_every: usize,
}

impl Simulation {
    pub fn from_config(cfg: &SimulationConfig) -> Result<Self> {
        Self::with_registries(cfg, &SchemeRegistry::builtin(), &SolutionRegistry::builtin())
    }

    pub fn with_registries(cfg: &SimulationConfig, schemes: &SchemeRegistry, solutions: &SolutionRegistry) -> Result<Self> {
        cfg.validate()?;
        let scheme = schemes.by_order(cfg.order)?;
        let dim = cfg.dim();
        let mut built = Vec::new();
        for (k, dc) in cfg.domains.iter().enumerate() {
            let material = cfg.material(k)?;
            let grid = GridSpec::new(dim, &dc.grid.lo, &dc.grid.hi, &dc.grid.n, scheme.ghost_width())?;
            let bcs = dc.boundary.to_boundaries(dim)?;
            built.push((material, grid, bcs));
        }
        let ctx = SolutionContext {
            dim,
            np: built.iter().map(|b| b.0.num_polarization()).max().unwrap_or(0),
            nn: built.iter().map(|b| b.0.num_levels()).max().unwrap_or(0),
        };
        let source = solutions.create(&cfg.solution.kind, &cfg.solution.params, &ctx)?;
        let dt_max = built
            .iter()
            .map(|(m, g, _)| compute_time_step(m, g, cfg.cfl))
            .fold(f64::INFINITY, f64::min);
        let (steps, dt) = match (cfg.t_final, cfg.steps) {
            (Some(t), _) => steps_to_reach(t, dt_max),
            (None, Some(n)) => (n, dt_max),
            (None, None) => unreachable!("validated"),
        };
        let interface = match &cfg.interface {
            Some(spec) => Some(InterfaceSolver::new(
                spec.clone(),
                [&built[0].1, &built[1].1],
                [&built[0].2, &built[1].2],
                [&built[0].0, &built[1].0],
                cfg.order,
                dt,
            )?),
            None => None,
        };
        let domains = built
            .into_iter()
            .map(|(material, grid, bcs)| Domain {
                state: FieldState::zeros(&grid, material.num_polarization(), material.num_levels()),
                coeffs: KernelCoeffs::new(&material, dim),
                forcing: source.forcing(&material, cfg.order),
                range: bcs.update_range(&grid),
                material,
                bcs,
            })
            .collect();
        let mut sim = Simulation {
            scheme,
            domains,
            source,
            interface,
            dt,
            dt_max,
            steps,
            nan_check_every: cfg.nan_check_every,
        };
        sim.initialize()?;
        Ok(sim)
    }

    /// Levels n = 0 and n = -1 from the source (ghosts included), then boundary and interface fills.
    pub fn initialize(&mut self) -> Result<()> {
        let dt = self.dt;
        let src = self.source.clone();
        for dom in &mut self.domains {
            let st = &mut dom.state;
            let (d, np, nn) = (st.d, st.np, st.nn);
            let g = st.grid.clone();
            for (slot, t) in [(PREV, -dt), (CUR, 0.0)] {
                st.e[slot] = GridFunction::from_fn(&g, d, |x, c| src.value(FieldId::E(c), x, t));
                st.p[slot] = GridFunction::from_fn(&g, np * d, |x, q| src.value(FieldId::P(q / d, q % d), x, t));
            }
            st.n_lev[0] = GridFunction::from_fn(&g, nn, |x, l| src.value(FieldId::N(l), x, 0.0));
            st.t = 0.0;
            st.step = 0;
            fill_boundaries(st, &dom.bcs, src.as_ref(), 0.0);
        }
        self.apply_interface()
    }

    fn apply_interface(&mut self) -> Result<()> {
        if let Some(ifc) = &mut self.interface {
            let (a, b) = self.domains.split_at_mut(1);
            let (d0, d1) = (&mut a[0], &mut b[0]);
            ifc.apply(
                [&mut d0.state, &mut d1.state],
                [d0.forcing.as_ref(), d1.forcing.as_ref()],
                [&d0.bcs, &d1.bcs],
            )?;
        }
        Ok(())
    }

    pub fn t(&self) -> f64 {
        self.domains[0].state.t
    }

    pub fn step_index(&self) -> usize {
        self.domains[0].state.step
    }

    /// Advance every domain one step, then refill boundaries and interface ghosts.
    pub fn step(&mut self) -> Result<()> {
        let dt = self.dt;
        let src = self.source.clone();
        for dom in &mut self.domains {
            advance(self.scheme.as_ref(), &mut dom.state, &dom.coeffs, dt, dom.forcing.as_ref(), dom.range);
            dom.state.rotate(dt);
            let t = dom.state.t;
            fill_boundaries(&mut dom.state, &dom.bcs, src.as_ref(), t);
        }
        self.apply_interface()?;
        let step = self.step_index();
        if step % self.nan_check_every == 0 || step == self.steps {
            self.check_finite()?;
        }
        Ok(())
    }

    pub fn check_finite(&self) -> Result<()> {
        for dom in &self.domains {
            if !dom.state.current_finite() {
                return Err(MlaError::NonFiniteField { step: dom.state.step, t: dom.state.t });
            }
        }
        Ok(())
    }

    /// Run the remaining steps, calling `observe` after every step.
    pub fn run_with(&mut self, mut observe: impl FnMut(&Simulation) -> Result<()>) -> Result<()> {
        while self.step_index() < self.steps {
            self.step()?;
            observe(self)?;
        }
        Ok(())
    }

    pub fn run(&mut self) -> Result<()> {
        self.run_with(|_| Ok(()))
    }

    /// Final-time errors per domain against the source (meaningful when it is exact).
    pub fn errors(&self) -> Vec<FieldErrors> {
        let t = self.t();
        self.domains.iter().map(|d| field_errors(&d.state, self.source.as_ref(), t)).collect()
    }

    pub fn max_abs_e(&self) -> f64 {
        self.domains.iter().map(|d| d.state.e[CUR].max_abs_interior()).fold(0.0, f64::max)
    }
}

/// Run a config to completion, writing snapshots and `manifest.json` into `out`.
pub fn run_to_dir(cfg: &SimulationConfig, out: &Path) -> Result<RunManifest> {
    std::fs::create_dir_all(out)?;
    let start = Instant::now();
    let mut sim = Simulation::from_config(cfg)?;
    let every = cfg.output.snapshot_every;
    let mut snapshots = Vec::new();
    let write_all = |sim: &Simulation, snaps: &mut Vec<SnapshotRecord>| -> Result<()> {
        for (k, d) in sim.domains.iter().enumerate() {
            let file = write_snapshot(out, k, &d.state)?;
            snaps.push(SnapshotRecord { file, domain: k, step: d.state.step, t: d.state.t });
        }
        Ok(())
    };
    if every > 0 {
        write_all(&sim, &mut snapshots)?;
    }
    let mut monitors: Vec<PopulationMonitor> = sim.domains.iter().map(|d| PopulationMonitor::new(&d.state)).collect();
    sim.run_with(|s| {
        for (m, d) in monitors.iter_mut().zip(&s.domains) {
            m.update(&d.state);
        }
        let step = s.step_index();
        if (every > 0 && step % every == 0) || step == s.steps {
            write_all(s, &mut snapshots)?;
        }
        Ok(())
    })?;
    if sim.steps == 0 && every == 0 {
        write_all(&sim, &mut snapshots)?;
    }
    let diagnostics = RunDiagnostics {
        max_abs_e: sim.max_abs_e(),
        errors: sim.source.is_exact().then(|| sim.errors()),
        population_deviation: monitors.iter().map(|m| m.max_deviation).fold(0.0, f64::max),
    };
    let manifest = RunManifest {
        config: cfg.clone(),
        scheme: sim.scheme.name().to_string(),
        order: sim.scheme.order(),
        dt: sim.dt,
        dt_max: sim.dt_max,
        steps: sim.steps,
        t_final: sim.t(),
        wall_time_s: start.elapsed().as_secs_f64(),
        snapshots,
        diagnostics,
    };
    manifest.write(out)?;
    Ok(manifest)
}
