//! JSON run configuration.

use crate::boundary::{Boundaries, FaceKind};
use crate::error::{MlaError, Result};
use crate::interface::InterfaceSpec;
use crate::material::{build_material, builtin_material, load_material_file, MaterialParams, RawMaterial};
use crate::solutions::soliton::SolitonParams;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

fn default_order() -> usize {
    2
}
fn default_cfl() -> f64 {
    0.9
}
fn default_nan_check() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// Final time; the step is shrunk so the run lands on it exactly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    /// Fixed step count at the CFL step (alternative to `t_final`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    pub solution: SolutionSpec,
    pub domains: Vec<DomainConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interface: Option<InterfaceSpec>,
    #[serde(default)]
    pub output: OutputConfig,
    /// Check for NaN/Inf every this many steps.
    #[serde(default = "default_nan_check")]
    pub nan_check_every: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionSpec {
    /// Registered solution name: `manufactured`, `soliton`, `gaussian-plane-wave` or `zero`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub params: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaterialSpec {
    Builtin(String),
    File { file: PathBuf },
    Inline(RawMaterial),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub n: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    pub x: [FaceKind; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<[FaceKind; 2]>,
}

impl BoundaryConfig {
    pub fn to_boundaries(&self, dim: usize) -> Result<Boundaries> {
        let y = match (dim, self.y) {
            (2, Some(y)) => y,
            (2, None) => return Err(MlaError::Config("2D domain needs y boundaries".into())),
            (_, Some(_)) => return Err(MlaError::Config("1D domain takes no y boundaries".into())),
            (_, None) => [FaceKind::Periodic; 2],
        };
        let b = Boundaries([self.x, y]);
        b.validate(dim)?;
        Ok(b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    /// Omitted only for soliton runs, which derive the material from the soliton parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material: Option<MaterialSpec>,
    pub grid: GridConfig,
    pub boundary: BoundaryConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// Snapshot cadence in steps; 0 writes only the final state.
    #[serde(default)]
    pub snapshot_every: usize,
}

impl SimulationConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SimulationConfig = serde_json::from_str(text).map_err(|e| MlaError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Read and validate; relative material file paths are resolved against the config's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = SimulationConfig::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for d in &mut cfg.domains {
            if let Some(MaterialSpec::File { file }) = &mut d.material {
                if file.is_relative() {
                    *file = base.join(&*file);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order != 2 && self.order != 4 {
            return Err(MlaError::Config(format!("order must be 2 or 4, got {}", self.order)));
        }
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return Err(MlaError::Config(format!("cfl must be positive, got {}", self.cfl)));
        }
        match (self.t_final, self.steps) {
            (Some(t), None) if t > 0.0 && t.is_finite() => {}
            (None, Some(_)) => {}
            (Some(_), Some(_)) => return Err(MlaError::Config("give either t_final or steps, not both".into())),
            (None, None) => return Err(MlaError::Config("one of t_final or steps is required".into())),
            (Some(t), None) => return Err(MlaError::Config(format!("t_final must be positive, got {t}"))),
        }
        if self.domains.is_empty() || self.domains.len() > 2 {
            return Err(MlaError::Config("one or two domains are supported".into()));
        }
        if (self.domains.len() == 2) != self.interface.is_some() {
            return Err(MlaError::Config("two domains require an interface and vice versa".into()));
        }
        let dim = self.dim();
        for (k, d) in self.domains.iter().enumerate() {
            if d.grid.lo.len() != dim || d.grid.hi.len() != dim || d.grid.n.len() != dim {
                return Err(MlaError::Config(format!("domain {k}: lo, hi, n must have {dim} entries")));
            }
            if d.material.is_none() && self.solution.kind != "soliton" {
                return Err(MlaError::Config(format!("domain {k}: material is required")));
            }
            d.boundary.to_boundaries(dim)?;
        }
        if self.nan_check_every == 0 {
            return Err(MlaError::Config("nan_check_every must be positive".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.domains.first().map_or(1, |d| d.grid.n.len())
    }

    /// Resolve the material of domain `k`.
    pub fn material(&self, k: usize) -> Result<MaterialParams> {
        match &self.domains[k].material {
            Some(MaterialSpec::Builtin(name)) => builtin_material(name),
            Some(MaterialSpec::File { file }) => load_material_file(file),
            Some(MaterialSpec::Inline(raw)) => build_material(raw.clone()),
            None => {
                let p: SolitonParams = if self.solution.params.is_null() {
                    SolitonParams::default()
                } else {
                    serde_json::from_value(self.solution.params.clone())
                        .map_err(|e| MlaError::Config(format!("soliton params: {e}")))?
                };
                p.validate()?;
                p.material()
            }
        }
    }

    /// Copy with every grid refined by integer factor `r` along every axis.
    pub fn refined(&self, r: usize) -> Self {
        let mut c = self.clone();
        for d in &mut c.domains {
            for n in &mut d.grid.n {
                *n *= r;
            }
        }
        c
    }
}

/// A small but complete example configuration (order-2 manufactured run).
pub fn sample_config() -> SimulationConfig {
    SimulationConfig {
        order: 2,
        cfl: 0.9,
        t_final: Some(1.0),
        steps: None,
        solution: SolutionSpec { kind: "manufactured".into(), params: serde_json::Value::Null },
        domains: vec![DomainConfig {
            material: Some(MaterialSpec::Builtin("mlaMat2".into())),
            grid: GridConfig { lo: vec![0.0, 0.0], hi: vec![1.0, 1.0], n: vec![20, 20] },
            boundary: BoundaryConfig {
                x: [FaceKind::DirichletExact; 2],
                y: Some([FaceKind::Periodic; 2]),
            },
        }],
        interface: None,
        output: OutputConfig { dir: Some("out".into()), snapshot_every: 0 },
        nan_check_every: 10,
    }
}

/// Human-readable schema followed by the sample configuration.
pub fn schema_text() -> String {
    let sample = serde_json::to_string_pretty(&sample_config()).expect("sample config serializes");
    format!(
        r#"SimulationConfig (JSON object)
  order            2 | 4                      default 2
  cfl              number > 0                 default 0.9; dt = sqrt(cfl / (c^2 sum 1/h^2))
  t_final          number > 0                 exactly one of t_final / steps
  steps            integer >= 0
  solution         {{ "kind": NAME, "params": {{...}} }}
                   kinds: manufactured (params optional: dim, e, p, n trig tables)
                          soliton (x0, u, eta, c, delta)
                          gaussian-plane-wave (populations: [N_0, ...])
                          zero
  domains          1 or 2 of:
    material       builtin name | {{ "file": PATH }} | inline object with
                   num_polarization, num_levels, eps0, mu0, a, b0, b1, alpha, beta
                   (may be omitted for soliton runs)
    grid           {{ "lo": [..], "hi": [..], "n": [..] }}  (1 or 2 entries each)
    boundary       {{ "x": [LO, HI], "y": [LO, HI] }}  faces: periodic | dirichlet-exact | interface
  interface        required with two domains:
                   {{ "axis": 0|1, "sides": [{{ "domain": 0, "face": 1 }}, {{ "domain": 1, "face": 0 }}] }}
                   face 0 = low, 1 = high
  output           {{ "dir": PATH, "snapshot_every": N }}  (0 = final snapshot only)
  nan_check_every  integer > 0                default 10

Example:
{sample}
"#
    )
}
