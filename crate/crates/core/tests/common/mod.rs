#![allow(dead_code)]

use mla_core::config::SimulationConfig;
use mla_core::material::MaterialParams;

pub fn interface_config(order: usize) -> SimulationConfig {
    interface_config_2d(order, "manufactured", "mlaMat2", "mlaMat3", 10)
}

pub fn interface_config_2d(order: usize, solution: &str, left: &str, right: &str, n: usize) -> SimulationConfig {
    let text = format!(
        r#"{{
      "order": {order}, "t_final": 1.0,
      "solution": {{"kind": "{solution}"}},
      "domains": [
        {{"material": "{left}", "grid": {{"lo": [0,0], "hi": [1,1], "n": [{n},{n}]}},
         "boundary": {{"x": ["dirichlet-exact", "interface"], "y": ["periodic", "periodic"]}}}},
        {{"material": "{right}", "grid": {{"lo": [1,0], "hi": [2,1], "n": [{n},{n}]}},
         "boundary": {{"x": ["interface", "dirichlet-exact"], "y": ["periodic", "periodic"]}}}}
      ],
      "interface": {{"axis": 0, "sides": [{{"domain": 0, "face": 1}}, {{"domain": 1, "face": 0}}]}}
    }}"#
    );
    SimulationConfig::from_json(&text).unwrap()
}

pub fn interface_config_1d(order: usize, left: &str, right: &str, n: usize) -> SimulationConfig {
    let text = format!(
        r#"{{
      "order": {order}, "t_final": 0.5,
      "solution": {{"kind": "manufactured"}},
      "domains": [
        {{"material": "{left}", "grid": {{"lo": [0], "hi": [1], "n": [{n}]}},
         "boundary": {{"x": ["dirichlet-exact", "interface"]}}}},
        {{"material": "{right}", "grid": {{"lo": [1], "hi": [2], "n": [{n}]}},
         "boundary": {{"x": ["interface", "dirichlet-exact"]}}}}
      ],
      "interface": {{"axis": 0, "sides": [{{"domain": 0, "face": 1}}, {{"domain": 1, "face": 0}}]}}
    }}"#
    );
    SimulationConfig::from_json(&text).unwrap()
}

/// 1D periodic Gaussian plane-wave run on `[-5, 5]`.
pub fn pulse_config(order: usize, material: &str, n: usize, steps: usize, cfl: f64, populations: &[f64]) -> SimulationConfig {
    let text = format!(
        r#"{{
      "order": {order}, "steps": {steps}, "cfl": {cfl},
      "solution": {{"kind": "gaussian-plane-wave", "params": {{"populations": {populations:?}}}}},
      "domains": [{{"material": {material}, "grid": {{"lo": [-5], "hi": [5], "n": [{n}]}},
                    "boundary": {{"x": ["periodic", "periodic"]}}}}]
    }}"#
    );
    SimulationConfig::from_json(&text).unwrap()
}

pub const VACUUM: &str = r#"{"num_polarization":1,"num_levels":1,"eps0":1,"mu0":1,"a":[[0]],"b0":[0],"b1":[0],"alpha":[[0]],"beta":[[0]]}"#;

/// Classical RK4 for the point system P_tt + b1 P_t + b0 P = (a N) E, N_t = alpha N + beta (E P_t)
/// with a prescribed scalar field `e(t)`. State layout: `[P_0.., Pt_0.., N_0..]`.
pub struct RefOde<'a> {
    pub mat: &'a MaterialParams,
    pub e: fn(f64) -> f64,
}

impl RefOde<'_> {
    fn rhs(&self, t: f64, y: &[f64]) -> Vec<f64> {
        let np = self.mat.num_polarization();
        let nn = self.mat.num_levels();
        let e = (self.e)(t);
        let mut f = vec![0.0; y.len()];
        for m in 0..np {
            let an: f64 = (0..nn).map(|l| self.mat.a(m, l) * y[2 * np + l]).sum();
            f[m] = y[np + m];
            f[np + m] = -self.mat.b1(m) * y[np + m] - self.mat.b0(m) * y[m] + an * e;
        }
        for l in 0..nn {
            let relax: f64 = (0..nn).map(|k| self.mat.alpha(l, k) * y[2 * np + k]).sum();
            let exch: f64 = (0..np).map(|m| self.mat.beta(l, m) * e * y[np + m]).sum();
            f[2 * np + l] = relax + exch;
        }
        f
    }

    pub fn integrate(&self, y0: &[f64], t0: f64, t1: f64, steps: usize) -> Vec<f64> {
        let h = (t1 - t0) / steps as f64;
        let mut y = y0.to_vec();
        let add = |y: &[f64], k: &[f64], s: f64| -> Vec<f64> { y.iter().zip(k).map(|(a, b)| a + s * b).collect() };
        for i in 0..steps {
            let t = t0 + i as f64 * h;
            let k1 = self.rhs(t, &y);
            let k2 = self.rhs(t + h / 2.0, &add(&y, &k1, h / 2.0));
            let k3 = self.rhs(t + h / 2.0, &add(&y, &k2, h / 2.0));
            let k4 = self.rhs(t + h, &add(&y, &k3, h));
            for j in 0..y.len() {
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
        }
        y
    }
}

pub fn drive(t: f64) -> f64 {
    0.5 * (1.7 * t).sin() + 0.2 * (0.4 * t).cos()
}
