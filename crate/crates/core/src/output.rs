//! CSV snapshots, convergence tables and the run manifest.

use crate::config::SimulationConfig;
use crate::diagnostics::FieldErrors;
use crate::error::{MlaError, Result};
use crate::grid::for_each_interior;
use crate::state::{FieldState, CUR};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// Column names: coordinates, then E, P_m and N_l components.
pub fn snapshot_header(d: usize, np: usize, nn: usize) -> Vec<String> {
    let mut h: Vec<String> = if d == 2 { vec!["x".into(), "y".into()] } else { vec!["x".into()] };
    let comps = ["x", "y"];
    if d == 2 {
        h.push("Ex".into());
        h.push("Ey".into());
    } else {
        h.push("E".into());
    }
    for m in 1..=np {
        if d == 2 {
            for c in comps {
                h.push(format!("P{m}{c}"));
            }
        } else {
            h.push(format!("P{m}"));
        }
    }
    for l in 0..nn {
        h.push(format!("N{l}"));
    }
    h
}

/// Format with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// The current level of every non-ghost node as CSV text.
pub fn snapshot_csv(state: &FieldState) -> String {
    let (d, np, nn) = (state.d, state.np, state.nn);
    let g = &state.grid;
    let mut s = snapshot_header(d, np, nn).join(",");
    s.push('\n');
    for_each_interior(g, |i, j| {
        let x = g.point(i, j);
        let mut row: Vec<String> = x[..d].iter().map(|v| fmt17(*v)).collect();
        for c in 0..d {
            row.push(fmt17(state.e[CUR].get(c, i, j)));
        }
        for m in 0..np {
            for c in 0..d {
                row.push(fmt17(state.p[CUR].get(m * d + c, i, j)));
            }
        }
        for l in 0..nn {
            row.push(fmt17(state.n_lev[0].get(l, i, j)));
        }
        let _ = writeln!(s, "{}", row.join(","));
    });
    s
}

pub fn snapshot_file_name(domain: usize, step: usize) -> String {
    format!("snapshot_d{domain}_s{step:06}.csv")
}

pub fn write_snapshot(dir: &Path, domain: usize, state: &FieldState) -> Result<String> {
    let name = snapshot_file_name(domain, state.step);
    std::fs::write(dir.join(&name), snapshot_csv(state))?;
    Ok(name)
}

/// Parsed snapshot: header plus rows of numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Snapshot {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

pub fn parse_snapshot(text: &str) -> Result<Snapshot> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| MlaError::Config("empty snapshot".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| MlaError::Config(format!("snapshot row {}: {e}", k + 1)))?;
        if row.len() != header.len() {
            return Err(MlaError::Config(format!("snapshot row {} has {} fields", k + 1, row.len())));
        }
        rows.push(row);
    }
    Ok(Snapshot { header, rows })
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    parse_snapshot(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub file: String,
    pub domain: usize,
    pub step: usize,
    pub t: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunDiagnostics {
    /// Max |E| over all domains at the final time.
    pub max_abs_e: f64,
    /// Final max-norm errors per domain, when the solution source is exact.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub errors: Option<Vec<FieldErrors>>,
    /// Largest pointwise drift of the population sum over the run.
    pub population_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: SimulationConfig,
    pub scheme: String,
    pub order: usize,
    pub dt: f64,
    pub dt_max: f64,
    pub steps: usize,
    pub t_final: f64,
    pub wall_time_s: f64,
    pub snapshots: Vec<SnapshotRecord>,
    pub diagnostics: RunDiagnostics,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(dir.join("manifest.json"), text)?;
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(dir.join("manifest.json"))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// One refinement level of a convergence study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub dt: f64,
    pub errors: FieldErrors,
    /// Observed order against the previous row.
    pub rate: Option<f64>,
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut s = String::from("n,h,dt,err_e,err_p,err_n,err_max,rate\n");
    for r in rows {
        let rate = r.rate.map(fmt17).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.n,
            fmt17(r.h),
            fmt17(r.dt),
            fmt17(r.errors.e),
            fmt17(r.errors.p),
            fmt17(r.errors.n),
            fmt17(r.errors.max()),
            rate
        );
    }
    s
}

pub fn write_convergence(dir: &Path, rows: &[ConvergenceRow]) -> Result<()> {
    std::fs::write(dir.join("convergence.csv"), convergence_csv(rows))?;
    std::fs::write(dir.join("convergence.json"), serde_json::to_string_pretty(rows)?)?;
    Ok(())
}
