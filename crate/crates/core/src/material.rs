//! MLA material coefficients and the builtin material table.

use crate::error::{MlaError, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Upper bound on polarization vectors per material (fixed-size kernel scratch).
pub const MAX_POL: usize = 8;
/// Upper bound on atomic levels per material.
pub const MAX_LEV: usize = 8;

/// Raw coefficient set in the JSON layout used for material files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMaterial {
    #[serde(default)]
    pub name: Option<String>,
    pub num_polarization: usize,
    pub num_levels: usize,
    pub eps0: f64,
    pub mu0: f64,
    /// `num_polarization` rows of `num_levels` entries.
    pub a: Vec<Vec<f64>>,
    pub b0: Vec<f64>,
    pub b1: Vec<f64>,
    /// `num_levels` x `num_levels`.
    pub alpha: Vec<Vec<f64>>,
    /// `num_levels` rows of `num_polarization` entries.
    pub beta: Vec<Vec<f64>>,
}

/// Validated material with derived constants.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialParams {
    name: String,
    np: usize,
    nn: usize,
    eps0: f64,
    mu0: f64,
    a: Vec<Vec<f64>>,
    b0: Vec<f64>,
    b1: Vec<f64>,
    alpha: Vec<Vec<f64>>,
    beta: Vec<Vec<f64>>,
    c: f64,
    alpha_p: f64,
}

fn check_matrix(label: &str, m: &[Vec<f64>], rows: usize, cols: usize) -> Result<()> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        let shape: Vec<usize> = m.iter().map(Vec::len).collect();
        return Err(MlaError::DimensionMismatch(format!(
            "{label} must be {rows}x{cols}, got rows {shape:?}"
        )));
    }
    if m.iter().flatten().any(|v| !v.is_finite()) {
        return Err(MlaError::InvalidParams(format!("{label} has non-finite entries")));
    }
    Ok(())
}

fn check_vector(label: &str, v: &[f64], len: usize) -> Result<()> {
    if v.len() != len {
        return Err(MlaError::DimensionMismatch(format!(
            "{label} must have {len} entries, got {}",
            v.len()
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(MlaError::InvalidParams(format!("{label} has non-finite entries")));
    }
    Ok(())
}

/// Validate a raw coefficient set and compute `c` and `alpha_p`.
pub fn build_material(raw: RawMaterial) -> Result<MaterialParams> {
    let (np, nn) = (raw.num_polarization, raw.num_levels);
    if np == 0 || nn == 0 {
        return Err(MlaError::DimensionMismatch(
            "num_polarization and num_levels must be positive".into(),
        ));
    }
    if np > MAX_POL || nn > MAX_LEV {
        return Err(MlaError::DimensionMismatch(format!(
            "at most {MAX_POL} polarizations and {MAX_LEV} levels are supported"
        )));
    }
    check_matrix("a", &raw.a, np, nn)?;
    check_vector("b0", &raw.b0, np)?;
    check_vector("b1", &raw.b1, np)?;
    check_matrix("alpha", &raw.alpha, nn, nn)?;
    check_matrix("beta", &raw.beta, nn, np)?;
    if !(raw.eps0 > 0.0 && raw.eps0.is_finite()) {
        return Err(MlaError::NonPositivePhysical(format!("eps0 = {}", raw.eps0)));
    }
    if !(raw.mu0 > 0.0 && raw.mu0.is_finite()) {
        return Err(MlaError::NonPositivePhysical(format!("mu0 = {}", raw.mu0)));
    }
    let c = 1.0 / (raw.eps0 * raw.mu0).sqrt();
    let alpha_p = 1.0 / raw.eps0;
    if !(c.is_finite() && alpha_p.is_finite()) {
        return Err(MlaError::NonPositivePhysical("derived c or alpha_p not finite".into()));
    }
    Ok(MaterialParams {
        name: raw.name.unwrap_or_else(|| "custom".to_string()),
        np,
        nn,
        eps0: raw.eps0,
        mu0: raw.mu0,
        a: raw.a,
        b0: raw.b0,
        b1: raw.b1,
        alpha: raw.alpha,
        beta: raw.beta,
        c,
        alpha_p,
    })
}

impl MaterialParams {
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn num_polarization(&self) -> usize {
        self.np
    }
    pub fn num_levels(&self) -> usize {
        self.nn
    }
    pub fn eps0(&self) -> f64 {
        self.eps0
    }
    pub fn mu0(&self) -> f64 {
        self.mu0
    }
    /// Wave speed `1/sqrt(eps0 mu0)`.
    pub fn c(&self) -> f64 {
        self.c
    }
    /// Polarization coupling `1/eps0`.
    pub fn alpha_p(&self) -> f64 {
        self.alpha_p
    }
    pub fn a(&self, m: usize, l: usize) -> f64 {
        self.a[m][l]
    }
    pub fn b0(&self, m: usize) -> f64 {
        self.b0[m]
    }
    pub fn b1(&self, m: usize) -> f64 {
        self.b1[m]
    }
    pub fn alpha(&self, l: usize, k: usize) -> f64 {
        self.alpha[l][k]
    }
    pub fn beta(&self, l: usize, m: usize) -> f64 {
        self.beta[l][m]
    }

    pub fn to_raw(&self) -> RawMaterial {
        RawMaterial {
            name: Some(self.name.clone()),
            num_polarization: self.np,
            num_levels: self.nn,
            eps0: self.eps0,
            mu0: self.mu0,
            a: self.a.clone(),
            b0: self.b0.clone(),
            b1: self.b1.clone(),
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
        }
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// Column sums of `alpha` (zero columns conserve the total population).
    pub fn alpha_column_sums(&self) -> Vec<f64> {
        (0..self.nn)
            .map(|k| (0..self.nn).map(|l| self.alpha[l][k]).sum())
            .collect()
    }

    pub fn beta_column_sums(&self) -> Vec<f64> {
        (0..self.np)
            .map(|m| (0..self.nn).map(|l| self.beta[l][m]).sum())
            .collect()
    }

    /// Material with no polarization coupling: the pure wave equation with speed `c`.
    pub fn vacuum(c: f64) -> Result<Self> {
        build_material(RawMaterial {
            name: Some("vacuum".into()),
            num_polarization: 1,
            num_levels: 1,
            eps0: 1.0,
            mu0: 1.0 / (c * c),
            a: vec![vec![0.0]],
            b0: vec![0.0],
            b1: vec![0.0],
            alpha: vec![vec![0.0]],
            beta: vec![vec![0.0]],
        })
    }

    /// One polarization, one level ("D" = N0) form of the two-level soliton model:
    /// `E_tt - c^2 E_xx = -eta P_tt`, `P_tt + P = delta^2 D E`, `D_t = -E P_t`.
    pub fn soliton(eta: f64, c: f64, delta: f64) -> Result<Self> {
        build_material(RawMaterial {
            name: Some("soliton".into()),
            num_polarization: 1,
            num_levels: 1,
            eps0: 1.0 / eta,
            mu0: eta / (c * c),
            a: vec![vec![delta * delta]],
            b0: vec![1.0],
            b1: vec![0.0],
            alpha: vec![vec![0.0]],
            beta: vec![vec![-1.0]],
        })
    }
}

pub const BUILTIN_NAMES: [&str; 3] = ["mlaMat2", "mlaMat3", "mlaMat4levels"];

fn raw_mla_mat2() -> RawMaterial {
    RawMaterial {
        name: Some("mlaMat2".into()),
        num_polarization: 2,
        num_levels: 4,
        eps0: 1.0,
        mu0: 1.0,
        a: vec![vec![2.3418, 0.0, 0.0, 2.3418], vec![0.0, 11.666, 11.666, 0.0]],
        b0: vec![1.0, 1.0],
        b1: vec![0.1, 0.1],
        alpha: vec![
            vec![0.0, 0.0010542, 0.0, 0.000000012723],
            vec![0.0, -0.0010542, 0.0000014641, 0.0],
            vec![0.0, 0.0, -0.0000014641, 0.0012299],
            vec![0.0, 0.0, 0.0, -0.0012299],
        ],
        beta: vec![
            vec![-2.3418, 0.0],
            vec![0.0, -2.4362],
            vec![0.0, 2.4362],
            vec![2.3418, 0.0],
        ],
    }
}

fn raw_mla_mat3() -> RawMaterial {
    RawMaterial {
        name: Some("mlaMat3".into()),
        num_polarization: 1,
        num_levels: 1,
        eps0: 2.0,
        mu0: 1.0,
        a: vec![vec![10.0]],
        b0: vec![1.0],
        b1: vec![0.0],
        alpha: vec![vec![0.01]],
        beta: vec![vec![1.0]],
    }
}

fn raw_mla_mat4levels() -> RawMaterial {
    // The printed decay into level 3 is rounded; the diagonal entry carries the
    // 0->3 contribution too, so every alpha column sums to zero.
    let a33 = -(0.0012299 + 0.000000012723);
    RawMaterial {
        name: Some("mlaMat4levels".into()),
        num_polarization: 2,
        num_levels: 4,
        eps0: 2.0,
        mu0: 1.0,
        a: vec![vec![2.3418, 0.0, 0.0, -2.3418], vec![0.0, 11.666, -11.666, 0.0]],
        b0: vec![769.2308, 710.8037],
        b1: vec![64.0180, 152.1820],
        alpha: vec![
            vec![0.0, 0.0010542, 0.0, 0.000000012723],
            vec![0.0, -0.0010542, 0.0000014641, 0.0],
            vec![0.0, 0.0, -0.0000014641, 0.0012299],
            vec![0.0, 0.0, 0.0, a33],
        ],
        beta: vec![
            vec![-1801.421965974931, 0.0],
            vec![0.0, -1873.997239424281],
            vec![0.0, 1873.997239424281],
            vec![1801.421965974931, 0.0],
        ],
    }
}

/// Look up one of the builtin materials by name.
pub fn builtin_material(name: &str) -> Result<MaterialParams> {
    let raw = match name {
        "mlaMat2" => raw_mla_mat2(),
        "mlaMat3" => raw_mla_mat3(),
        "mlaMat4levels" => raw_mla_mat4levels(),
        _ => return Err(MlaError::UnknownMaterial(name.to_string())),
    };
    build_material(raw)
}

/// Load a material from a JSON file with `RawMaterial` keys.
pub fn load_material_file(path: &Path) -> Result<MaterialParams> {
    let text = std::fs::read_to_string(path)?;
    let raw: RawMaterial = serde_json::from_str(&text)
        .map_err(|e| MlaError::Config(format!("{}: {e}", path.display())))?;
    build_material(raw)
}
