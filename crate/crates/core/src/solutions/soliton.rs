//! Asymptotic traveling soliton of the two-level model.

use crate::error::{MlaError, Result};
use crate::material::MaterialParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolitonParams {
    pub x0: f64,
    /// Envelope speed, `0 < u < 1`.
    pub u: f64,
    pub eta: f64,
    pub c: f64,
    pub delta: f64,
}

impl Default for SolitonParams {
    fn default() -> Self {
        SolitonParams { x0: 0.0, u: 0.5, eta: 1.0, c: 1.0, delta: 0.1 }
    }
}

impl SolitonParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.u > 0.0 && self.u < 1.0) {
            return Err(MlaError::InvalidParams(format!("soliton speed u = {} not in (0,1)", self.u)));
        }
        if !(self.delta > 0.0 && self.eta > 0.0 && self.c > 0.0) {
            return Err(MlaError::InvalidParams("soliton delta, eta and c must be positive".into()));
        }
        Ok(())
    }

    /// Material whose MLA system is the soliton model; `N0` plays the role of `D`.
    pub fn material(&self) -> Result<MaterialParams> {
        MaterialParams::soliton(self.eta, self.c, self.delta)
    }

    /// Peak of the E envelope, `2 sqrt(eta u / (1 - u))`.
    pub fn amplitude(&self) -> f64 {
        2.0 * (self.eta * self.u / (1.0 - self.u)).sqrt()
    }
}

/// `(E, P, D)` at `(x, t)`.
pub fn soliton_exact(p: &SolitonParams, x: f64, t: f64) -> Result<(f64, f64, f64)> {
    p.validate()?;
    Ok(soliton_unchecked(p, x, t))
}

pub(crate) fn soliton_unchecked(p: &SolitonParams, x: f64, t: f64) -> (f64, f64, f64) {
    let xi = p.delta * (x - p.x0 - p.u * t);
    let sech = 1.0 / xi.cosh();
    let e = p.amplitude() * sech * (x - t).sin();
    let pol = 2.0 * p.delta * xi.tanh() * sech * (x - t).cos();
    let d = 1.0 - 2.0 * sech * sech;
    (e, pol, d)
}
