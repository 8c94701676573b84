//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use common::*;
use mla_core::config::sample_config;
use mla_core::diagnostics::PopulationMonitor;
use mla_core::driver::Simulation;
use mla_core::forcing::ForcingSample;
use mla_core::grid::{for_each_interior, GridFunction, GridSpec};
use mla_core::material::builtin_material;
use mla_core::solutions::soliton::SolitonParams;
use mla_core::stencils;
use mla_core::stepper::ode::PointOde;
use mla_core::stepper::Order2;
use mla_core::studies::{convergence_study, energy_check, soliton_config, soliton_study};
use mla_core::MlaError;
use std::time::Instant;

const RATE2: (f64, f64) = (1.7, 2.3);
const RATE4: (f64, f64) = (3.5, 4.5);
const SOLITON_RATE_TOL: f64 = 0.5;
const SOLITON_MIN_D: (f64, f64) = (-1.05, -0.90);
const SOLITON_MAX_E: (f64, f64) = (1.8, 2.2);
const POP_TOL: f64 = 1e-9;
const ENERGY_RATE_TOL: f64 = 0.5;
const BLOWUP_FACTOR: f64 = 10.0;
const ODE_RATIO: (f64, f64) = (3.5, 4.5);
const EXACT_TOL: f64 = 1e-9;

type Outcome = (bool, String);

fn inside(v: f64, r: (f64, f64)) -> bool {
    v >= r.0 && v <= r.1
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn rates_ok(rates: &[f64], r: (f64, f64)) -> bool {
    !rates.is_empty() && rates.iter().all(|v| inside(*v, r))
}

fn mms_rates(cfg: &mla_core::config::SimulationConfig) -> Vec<f64> {
    convergence_study(cfg, &[1, 2, 4]).unwrap().iter().filter_map(|r| r.rate).collect()
}

fn criterion1() -> Outcome {
    let mut detail = String::new();
    let mut ok = true;
    for (order, band) in [(2, RATE2), (4, RATE4)] {
        let mut cfg = sample_config();
        cfg.order = order;
        let rates = mms_rates(&cfg);
        ok &= rates_ok(&rates, band);
        detail += &format!("order {order} rates {rates:.3?}; ");
    }
    (ok, detail)
}

fn criterion2() -> Outcome {
    let mut detail = String::new();
    let mut ok = true;
    for (order, band) in [(2, RATE2), (4, RATE4)] {
        let rates = mms_rates(&interface_config(order));
        ok &= rates_ok(&rates, band);
        detail += &format!("order {order} rates {rates:.3?}; ");
    }
    (ok, detail)
}

fn criterion3() -> Outcome {
    let mut detail = String::new();
    let mut ok = true;
    for order in [2, 4] {
        let cfg = soliton_config(order, SolitonParams::default(), -150.0, 250.0, 800, 100.0);
        let rep = soliton_study(&cfg, &[1, 2, 4], 10.0).unwrap();
        let rates: Vec<f64> = rep.rows.iter().filter_map(|r| r.rate).collect();
        let target = order as f64;
        ok &= rates_ok(&rates, (target - SOLITON_RATE_TOL, target + SOLITON_RATE_TOL));
        ok &= inside(rep.min_d, SOLITON_MIN_D) && inside(rep.max_abs_e, SOLITON_MAX_E);
        detail += &format!(
            "order {order} rate {rates:.3?} min D {:.4} near x = {:.1} max|E| {:.4}; ",
            rep.min_d, rep.center, rep.max_abs_e
        );
    }
    (ok, detail)
}

fn criterion4() -> Outcome {
    let mut detail = String::new();
    let mut ok = true;
    for order in [2, 4] {
        let cfg = pulse_config(order, "\"mlaMat4levels\"", 2000, 5000, 0.9, &[0.7, 0.1, 0.1, 0.1]);
        let mut sim = Simulation::from_config(&cfg).unwrap();
        let mut mon = PopulationMonitor::new(&sim.domains[0].state);
        sim.run_with(|s| {
            mon.update(&s.domains[0].state);
            Ok(())
        })
        .unwrap();
        ok &= mon.max_deviation <= POP_TOL && sim.step_index() == 5000;
        detail += &format!("order {order} max deviation {:.3e}; ", mon.max_deviation);
    }
    (ok, detail)
}

fn criterion5() -> Outcome {
    let mut detail = String::new();
    let mut ok = true;
    for order in [2, 4] {
        let rows = energy_check(order, &[0.02, 0.01, 0.005], 10.0).unwrap();
        let rates: Vec<f64> = rows.iter().filter_map(|r| r.rate).collect();
        let target = order as f64;
        ok &= rates.len() == 2 && rates_ok(&rates, (target - ENERGY_RATE_TOL, target + ENERGY_RATE_TOL));
        let drifts: Vec<f64> = rows.iter().map(|r| r.max_drift).collect();
        detail += &format!("order {order} drift {} rates {rates:.3?}; ", sci(&drifts));
    }
    (ok, detail)
}

fn criterion6() -> Outcome {
    let stable = pulse_config(2, VACUUM, 200, 10_000, 0.9, &[0.0]);
    let mut sim = Simulation::from_config(&stable).unwrap();
    let e0 = sim.max_abs_e();
    let mut peak: f64 = 0.0;
    let r = sim.run_with(|s| {
        peak = peak.max(s.max_abs_e());
        Ok(())
    });
    let bounded = r.is_ok() && peak < BLOWUP_FACTOR * e0;

    let unstable = pulse_config(2, VACUUM, 200, 500, 2.5, &[0.0]);
    let mut sim = Simulation::from_config(&unstable).unwrap();
    let blow = sim.run();
    let caught = matches!(blow, Err(MlaError::NonFiniteField { step, .. }) if step <= 500);
    (
        bounded && caught,
        format!("cfl 0.9: peak/initial {:.4} over 10000 steps; cfl 2.5: {blow:?}", peak / e0),
    )
}

/// Max error at t = 4 of the order-2 point scheme against a fine RK4 reference.
fn ode_error(dt: f64) -> f64 {
    let mat = builtin_material("mlaMat2").unwrap();
    let oracle = RefOde { mat: &mat, e: drive };
    let y0 = [0.1, -0.2, 0.3, 0.1, 0.4, 0.3, 0.2, 0.1];
    let back = oracle.integrate(&y0, 0.0, -dt, 200);
    let t_end = 4.0;
    let steps = (t_end / dt).round() as usize;
    let exact = oracle.integrate(&y0, 0.0, t_end, 40_000);
    let mut ode = PointOde::new(&mat, 1);
    ode.e = [drive(0.0), 0.0];
    ode.e_prev = [drive(-dt), 0.0];
    for m in 0..2 {
        ode.p[m][0] = y0[m];
        ode.p_prev[m][0] = back[m];
    }
    ode.n[..4].copy_from_slice(&y0[4..]);
    for n in 0..steps {
        let next = drive((n + 1) as f64 * dt);
        ode.step(&Order2, dt, &ForcingSample::ZERO, Some(([next, 0.0], [0.0, 0.0])));
    }
    let mut err: f64 = 0.0;
    for m in 0..2 {
        err = err.max((ode.p[m][0] - exact[m]).abs());
    }
    for l in 0..4 {
        err = err.max((ode.n[l] - exact[4 + l]).abs());
    }
    err
}

fn max_diff(a: &GridFunction, f: impl Fn([f64; 2]) -> f64) -> f64 {
    let g = a.grid();
    let mut m: f64 = 0.0;
    for_each_interior(g, |i, j| m = m.max((a.get(0, i, j) - f(g.point(i, j))).abs()));
    m
}

/// Polynomial exactness and linearity of the discrete operators on an uneven 2D grid.
fn stencil_suite() -> (bool, f64) {
    let g = GridSpec::new(2, &[-0.3, 0.1], &[0.9, 1.2], &[12, 11], 3).unwrap();
    let quad = |x: [f64; 2]| 1.0 + 2.0 * x[0] - x[1] + 3.0 * x[0] * x[0] - 0.5 * x[0] * x[1] + 1.5 * x[1] * x[1];
    let quint = |x: [f64; 2]| x[0].powi(5) - 2.0 * x[0].powi(3) * x[1] * x[1] + 0.7 * x[1].powi(4) * x[0] + x[1].powi(5);
    let quint_lap = |x: [f64; 2]| {
        20.0 * x[0].powi(3) - 12.0 * x[0] * x[1] * x[1] + 8.4 * x[1] * x[1] * x[0]
            - 4.0 * x[0].powi(3) + 20.0 * x[1].powi(3)
    };
    // Δ² of quint: Δ(quint_lap)
    let quint_bilap = |x: [f64; 2]| 120.0 * x[0] - 24.0 * x[0] - 24.0 * x[0] + 16.8 * x[0] + 120.0 * x[1];
    let uq = GridFunction::from_fn(&g, 1, |x, _| quad(x));
    let u5 = GridFunction::from_fn(&g, 1, |x, _| quint(x));
    let mut worst: f64 = 0.0;
    worst = worst.max(max_diff(&stencils::lap2(&uq), |_| 9.0));
    worst = worst.max(max_diff(&stencils::lap4(&u5), quint_lap) / 1e2);
    worst = worst.max(max_diff(&stencils::lap_sq2(&u5), quint_bilap) / 1e3);
    worst = worst.max(max_diff(&stencils::first_deriv2(&uq, 0), |x| 2.0 + 6.0 * x[0] - 0.5 * x[1]));
    let cubic = GridFunction::from_fn(&g, 1, |x, _| x[1].powi(4) - x[0] * x[1].powi(3));
    worst = worst.max(max_diff(&stencils::first_deriv4(&cubic, 1), |x| 4.0 * x[1].powi(3) - 3.0 * x[0] * x[1] * x[1]) / 1e1);
    // linearity: L(2u + 3v) = 2 L u + 3 L v
    let v = GridFunction::from_fn(&g, 1, |x, _| (3.0 * x[0]).sin() * (2.0 * x[1]).cos());
    let mut w = uq.clone();
    for (a, (b, c)) in w.data_mut().iter_mut().zip(u5.data().iter().zip(v.data())) {
        *a = 2.0 * b + 3.0 * c;
    }
    for op in [stencils::lap2, stencils::lap4, stencils::lap_sq2] {
        let (lw, lu, lv) = (op(&w), op(&u5), op(&v));
        let mut m: f64 = 0.0;
        for_each_interior(&g, |i, j| {
            let mixed = 2.0 * lu.get(0, i, j) + 3.0 * lv.get(0, i, j);
            m = m.max((lw.get(0, i, j) - mixed).abs() / (1.0 + mixed.abs()));
        });
        worst = worst.max(m);
    }
    (worst <= EXACT_TOL, worst)
}

fn criterion7() -> Outcome {
    let errs: Vec<f64> = [0.02, 0.01, 0.005].iter().map(|&dt| ode_error(dt)).collect();
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    let ode_ok = ratios.iter().all(|r| inside(*r, ODE_RATIO));
    let (st_ok, worst) = stencil_suite();
    (
        ode_ok && st_ok,
        format!("0D errors {} ratios {ratios:.3?}; stencil worst residual {worst:.2e}", sci(&errs)),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("single-domain MMS rates", criterion1),
        ("planar interface MMS rates", criterion2),
        ("soliton self-convergence", criterion3),
        ("population conservation", criterion4),
        ("E_PN energy drift order", criterion5),
        ("stability envelope", criterion6),
        ("0D oracle and stencil suite", criterion7),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = f();
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {} [{}] {}: {} ({:.1}s)",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            name,
            detail.trim_end_matches("; "),
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
