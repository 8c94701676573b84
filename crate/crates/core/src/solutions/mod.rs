//! Closed-form solution sources, selected by name.

pub mod gaussian;
pub mod manufactured;
pub mod soliton;
pub mod trig;

use crate::error::{MlaError, Result};
use crate::forcing::{Forcing, ManufacturedForcing, ZeroForcing};
use crate::material::MaterialParams;
use manufactured::{default_manufactured, ManufacturedSolution};
use serde::Deserialize;
use soliton::SolitonParams;
use std::fmt::Debug;
use std::sync::Arc;

/// One scalar component of the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldId {
    E(usize),
    /// `(m, component)`
    P(usize, usize),
    N(usize),
}

/// Something that can supply exact or prescribed values of E, P and N.
pub trait SolutionSource: Send + Sync + Debug {
    fn name(&self) -> &'static str;
    fn value(&self, field: FieldId, x: [f64; 2], t: f64) -> f64;
    /// Mixed derivative `[dx, dy, dt]`; sources without closed-form derivatives support order 0 only.
    fn derivative(&self, field: FieldId, x: [f64; 2], t: f64, d: [usize; 3]) -> Result<f64> {
        if d == [0, 0, 0] {
            Ok(self.value(field, x, t))
        } else {
            Err(MlaError::UnsupportedDerivative(d.iter().sum()))
        }
    }
    /// Forcing that makes this source solve the MLA system for `material`.
    fn forcing(&self, _material: &MaterialParams, _order: usize) -> Arc<dyn Forcing> {
        Arc::new(ZeroForcing)
    }
    /// False for sources that only approximate a solution (comparisons are then indicative).
    fn is_exact(&self) -> bool {
        true
    }
}

/// Exact mixed derivative of total order at most 4.
pub fn eval_exact(src: &dyn SolutionSource, field: FieldId, x: [f64; 2], t: f64, d: [usize; 3]) -> Result<f64> {
    let total: usize = d.iter().sum();
    if total > 4 {
        return Err(MlaError::UnsupportedDerivative(total));
    }
    src.derivative(field, x, t, d)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroSolution;

impl SolutionSource for ZeroSolution {
    fn name(&self) -> &'static str {
        "zero"
    }
    fn value(&self, _: FieldId, _: [f64; 2], _: f64) -> f64 {
        0.0
    }
    fn derivative(&self, _: FieldId, _: [f64; 2], _: f64, _: [usize; 3]) -> Result<f64> {
        Ok(0.0)
    }
}

#[derive(Debug, Clone)]
pub struct Manufactured(pub ManufacturedSolution);

impl SolutionSource for Manufactured {
    fn name(&self) -> &'static str {
        "manufactured"
    }
    fn value(&self, field: FieldId, x: [f64; 2], t: f64) -> f64 {
        self.0.deriv(field, x, t, [0, 0, 0])
    }
    fn derivative(&self, field: FieldId, x: [f64; 2], t: f64, d: [usize; 3]) -> Result<f64> {
        Ok(self.0.deriv(field, x, t, d))
    }
    fn forcing(&self, material: &MaterialParams, order: usize) -> Arc<dyn Forcing> {
        Arc::new(ManufacturedForcing::new(self.0.clone(), material.clone(), order))
    }
}

/// Soliton with E and P along the transverse component (index `dim - 1`) and `N0 = D`.
#[derive(Debug, Clone)]
pub struct Soliton {
    pub params: SolitonParams,
    pub dim: usize,
}

impl SolutionSource for Soliton {
    fn name(&self) -> &'static str {
        "soliton"
    }
    fn value(&self, field: FieldId, x: [f64; 2], t: f64) -> f64 {
        let (e, p, d) = soliton::soliton_unchecked(&self.params, x[0], t);
        let tc = self.dim - 1;
        match field {
            FieldId::E(c) if c == tc => e,
            FieldId::P(0, c) if c == tc => p,
            FieldId::N(0) => d,
            _ => 0.0,
        }
    }
    fn is_exact(&self) -> bool {
        false
    }
}

/// Gaussian pulse in the transverse E component with P = 0 and constant populations.
#[derive(Debug, Clone)]
pub struct GaussianPulse {
    pub dim: usize,
    pub populations: Vec<f64>,
}

impl SolutionSource for GaussianPulse {
    fn name(&self) -> &'static str {
        "gaussian-plane-wave"
    }
    fn value(&self, field: FieldId, x: [f64; 2], t: f64) -> f64 {
        match field {
            FieldId::E(c) if c == self.dim - 1 => gaussian::gaussian_plane_wave(x[0], t),
            FieldId::N(l) => self.populations.get(l).copied().unwrap_or(0.0),
            _ => 0.0,
        }
    }
    fn is_exact(&self) -> bool {
        false
    }
}

/// Sizes a source factory may need.
#[derive(Debug, Clone, Copy)]
pub struct SolutionContext {
    pub dim: usize,
    /// Largest polarization count over all domains.
    pub np: usize,
    /// Largest level count over all domains.
    pub nn: usize,
}

pub type SolutionFactory = fn(&serde_json::Value, &SolutionContext) -> Result<Arc<dyn SolutionSource>>;

fn params<T: for<'de> Deserialize<'de> + Default>(v: &serde_json::Value) -> Result<T> {
    if v.is_null() {
        return Ok(T::default());
    }
    T::deserialize(v).map_err(|e| MlaError::Config(format!("solution params: {e}")))
}

fn make_zero(_: &serde_json::Value, _: &SolutionContext) -> Result<Arc<dyn SolutionSource>> {
    Ok(Arc::new(ZeroSolution))
}

fn make_manufactured(v: &serde_json::Value, ctx: &SolutionContext) -> Result<Arc<dyn SolutionSource>> {
    let sol = if v.is_null() {
        default_manufactured(ctx.dim, ctx.np, ctx.nn)
    } else {
        let s: ManufacturedSolution =
            serde_json::from_value(v.clone()).map_err(|e| MlaError::Config(format!("manufactured params: {e}")))?;
        if s.dim != ctx.dim {
            return Err(MlaError::Config(format!("manufactured dim {} but grid dim {}", s.dim, ctx.dim)));
        }
        s
    };
    Ok(Arc::new(Manufactured(sol)))
}

fn make_soliton(v: &serde_json::Value, ctx: &SolutionContext) -> Result<Arc<dyn SolutionSource>> {
    let p: SolitonParams = params(v)?;
    p.validate()?;
    Ok(Arc::new(Soliton { params: p, dim: ctx.dim }))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PulseParams {
    #[serde(default)]
    populations: Option<Vec<f64>>,
}

fn make_pulse(v: &serde_json::Value, ctx: &SolutionContext) -> Result<Arc<dyn SolutionSource>> {
    let p: PulseParams = params(v)?;
    let populations = p.populations.unwrap_or_else(|| {
        let mut n = vec![0.0; ctx.nn];
        n[0] = 1.0;
        n
    });
    Ok(Arc::new(GaussianPulse { dim: ctx.dim, populations }))
}

/// Name-keyed table of solution factories.
pub struct SolutionRegistry {
    entries: Vec<(&'static str, SolutionFactory)>,
}

impl SolutionRegistry {
    pub fn empty() -> Self {
        SolutionRegistry { entries: Vec::new() }
    }

    pub fn builtin() -> Self {
        let mut r = SolutionRegistry::empty();
        r.register("zero", make_zero);
        r.register("manufactured", make_manufactured);
        r.register("soliton", make_soliton);
        r.register("gaussian-plane-wave", make_pulse);
        r
    }

    /// Later registrations under the same name replace earlier ones.
    pub fn register(&mut self, name: &'static str, f: SolutionFactory) {
        self.entries.retain(|(n, _)| *n != name);
        self.entries.push((name, f));
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }

    pub fn create(&self, name: &str, params: &serde_json::Value, ctx: &SolutionContext) -> Result<Arc<dyn SolutionSource>> {
        let f = self
            .entries
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, f)| *f)
            .ok_or_else(|| MlaError::UnknownStrategy { kind: "solution", name: name.to_string() })?;
        f(params, ctx)
    }
}
