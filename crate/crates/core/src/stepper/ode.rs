//! Single-point (0D) mode: the schemes with every spatial term removed.

use super::kernel::{KernelCoeffs, NVec, PVec, PointData, PointUpdate, Vec2};
use super::Scheme;
use crate::forcing::ForcingSample;
use crate::material::MaterialParams;

/// State of one point: levels n and n-1 of E and P, level n of N.
#[derive(Debug, Clone)]
pub struct PointOde {
    pub coeffs: KernelCoeffs,
    pub e: Vec2,
    pub e_prev: Vec2,
    pub p: PVec,
    pub p_prev: PVec,
    pub n: NVec,
    pub t: f64,
}

impl PointOde {
    pub fn new(material: &MaterialParams, d: usize) -> Self {
        PointOde {
            coeffs: KernelCoeffs::new(material, d),
            e: [0.0; 2],
            e_prev: [0.0; 2],
            p: Default::default(),
            p_prev: Default::default(),
            n: Default::default(),
            t: 0.0,
        }
    }

    fn point_data(&self, prescribed: Option<(Vec2, Vec2)>) -> PointData {
        PointData {
            e: self.e,
            e_prev: self.e_prev,
            p: self.p,
            p_prev: self.p_prev,
            n: self.n,
            prescribed,
            ..Default::default()
        }
    }

    /// Advance one step; `prescribed` supplies `(E^{n+1}, E_ttt^n)` when E is driven externally.
    pub fn step(
        &mut self,
        scheme: &dyn Scheme,
        dt: f64,
        f: &ForcingSample,
        prescribed: Option<(Vec2, Vec2)>,
    ) -> PointUpdate {
        let pd = self.point_data(prescribed);
        let u = scheme.update_point(&self.coeffs, dt, &pd, f);
        self.e_prev = self.e;
        self.e = u.e_next;
        self.p_prev = self.p;
        self.p = u.p_next;
        self.n = u.n_next;
        self.t += dt;
        u
    }
}
