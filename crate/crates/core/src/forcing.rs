//! Per-point forcing terms and the manufactured-solution residuals.

use crate::material::{MaterialParams, MAX_LEV, MAX_POL};
use crate::solutions::manufactured::{ManufacturedPoint, ManufacturedSolution};

/// Forcing for the E, P and N equations at one point; unused entries stay zero.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ForcingSample {
    pub fe: [f64; 2],
    pub fet: [f64; 2],
    pub fett: [f64; 2],
    pub lapfe: [f64; 2],
    pub fp: [[f64; 2]; MAX_POL],
    pub fpt: [[f64; 2]; MAX_POL],
    pub fptt: [[f64; 2]; MAX_POL],
    pub lapfp: [[f64; 2]; MAX_POL],
    pub fnv: [f64; MAX_LEV],
    pub fnt: [f64; MAX_LEV],
    pub fntt: [f64; MAX_LEV],
    pub fnttt: [f64; MAX_LEV],
}

impl ForcingSample {
    pub const ZERO: ForcingSample = ForcingSample {
        fe: [0.0; 2],
        fet: [0.0; 2],
        fett: [0.0; 2],
        lapfe: [0.0; 2],
        fp: [[0.0; 2]; MAX_POL],
        fpt: [[0.0; 2]; MAX_POL],
        fptt: [[0.0; 2]; MAX_POL],
        lapfp: [[0.0; 2]; MAX_POL],
        fnv: [0.0; MAX_LEV],
        fnt: [0.0; MAX_LEV],
        fntt: [0.0; MAX_LEV],
        fnttt: [0.0; MAX_LEV],
    };

    pub fn is_finite(&self) -> bool {
        let flat = |a: &[[f64; 2]]| a.iter().flatten().all(|v| v.is_finite());
        [self.fe, self.fet, self.fett, self.lapfe].iter().flatten().all(|v| v.is_finite())
            && flat(&self.fp)
            && flat(&self.fpt)
            && flat(&self.fptt)
            && flat(&self.lapfp)
            && [self.fnv, self.fnt, self.fntt, self.fnttt].iter().flatten().all(|v| v.is_finite())
    }
}

/// Source of per-point forcing.
pub trait Forcing: Send + Sync {
    fn sample(&self, x: [f64; 2], t: f64) -> ForcingSample;
    /// Callers may skip sampling entirely when this is true.
    fn is_zero(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroForcing;

impl Forcing for ZeroForcing {
    fn sample(&self, _x: [f64; 2], _t: f64) -> ForcingSample {
        ForcingSample::ZERO
    }
    fn is_zero(&self) -> bool {
        true
    }
}

/// Residual of the MLA system under a manufactured solution.
#[derive(Debug, Clone)]
pub struct ManufacturedForcing {
    solution: ManufacturedSolution,
    material: MaterialParams,
    /// 2 skips the terms only the fourth-order scheme reads.
    order: usize,
}

impl ManufacturedForcing {
    pub fn new(solution: ManufacturedSolution, material: MaterialParams, order: usize) -> Self {
        ManufacturedForcing { solution, material, order }
    }
}

fn binom(k: usize, j: usize) -> f64 {
    const ROWS: [[f64; 5]; 5] = [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0, 0.0],
        [1.0, 3.0, 3.0, 1.0, 0.0],
        [1.0, 4.0, 6.0, 4.0, 1.0],
    ];
    ROWS[k][j]
}

/// Laplacian of a derivative query in `dim` dimensions.
fn lap(dim: usize, f: impl Fn([usize; 3]) -> f64, d: [usize; 3]) -> f64 {
    let mut v = f([d[0] + 2, d[1], d[2]]);
    if dim == 2 {
        v += f([d[0], d[1] + 2, d[2]]);
    }
    v
}

fn grad_dot(dim: usize, f: impl Fn([usize; 3]) -> f64, g: impl Fn([usize; 3]) -> f64) -> f64 {
    let mut v = f([1, 0, 0]) * g([1, 0, 0]);
    if dim == 2 {
        v += f([0, 1, 0]) * g([0, 1, 0]);
    }
    v
}

/// Build the forcing sample from cached values of a manufactured solution.
pub fn manufactured_sample(pt: &ManufacturedPoint, mat: &MaterialParams, dim: usize, order: usize) -> ForcingSample {
    let mut f = ForcingSample::ZERO;
    let (np, nn) = (mat.num_polarization(), mat.num_levels());
    let (c2, ap) = (mat.c() * mat.c(), mat.alpha_p());
    let kmax = if order >= 4 { 3 } else { 1 };

    for c in 0..dim {
        let e = |d: [usize; 3]| pt.e(c, d);
        // fe^{(k)} = E_tt^{(k)} + ap sum_m P_tt^{(k)} - c^2 lap E^{(k)}
        let fe_k = |k: usize| {
            let psum: f64 = (0..np).map(|m| pt.p(m, c, [0, 0, 2 + k])).sum();
            e([0, 0, 2 + k]) + ap * psum - c2 * lap(dim, e, [0, 0, k])
        };
        f.fe[c] = fe_k(0);
        if order >= 4 {
            f.fet[c] = fe_k(1);
            f.fett[c] = fe_k(2);
            let lap_ptt: f64 = (0..np).map(|m| lap(dim, |d| pt.p(m, c, d), [0, 0, 2])).sum();
            let lap_sq = if dim == 2 {
                e([4, 0, 0]) + 2.0 * e([2, 2, 0]) + e([0, 4, 0])
            } else {
                e([4, 0, 0])
            };
            f.lapfe[c] = lap(dim, e, [0, 0, 2]) + ap * lap_ptt - c2 * lap_sq;
        }
    }

    for m in 0..np {
        let (b0, b1) = (mat.b0(m), mat.b1(m));
        for c in 0..dim {
            let p = |d: [usize; 3]| pt.p(m, c, d);
            // d_t^k (N_l E_c) by Leibniz
            let ne_k = |l: usize, k: usize| -> f64 {
                (0..=k).map(|j| binom(k, j) * pt.n(l, [0, 0, j]) * pt.e(c, [0, 0, k - j])).sum()
            };
            let fp_k = |k: usize| {
                let an: f64 = (0..nn).map(|l| mat.a(m, l) * ne_k(l, k)).sum();
                p([0, 0, 2 + k]) + b1 * p([0, 0, 1 + k]) + b0 * p([0, 0, k]) - an
            };
            f.fp[m][c] = fp_k(0);
            if order >= 4 {
                f.fpt[m][c] = fp_k(1);
                f.fptt[m][c] = fp_k(2);
                let lap_ne: f64 = (0..nn)
                    .map(|l| {
                        let n = |d: [usize; 3]| pt.n(l, d);
                        let e = |d: [usize; 3]| pt.e(c, d);
                        let v = n([0, 0, 0]) * lap(dim, e, [0, 0, 0])
                            + e([0, 0, 0]) * lap(dim, n, [0, 0, 0])
                            + 2.0 * grad_dot(dim, n, e);
                        mat.a(m, l) * v
                    })
                    .sum();
                f.lapfp[m][c] = lap(dim, p, [0, 0, 2]) + b1 * lap(dim, p, [0, 0, 1]) + b0 * lap(dim, p, [0, 0, 0]) - lap_ne;
            }
        }
    }

    for l in 0..nn {
        let fn_k = |k: usize| {
            let relax: f64 = (0..nn).map(|q| mat.alpha(l, q) * pt.n(q, [0, 0, k])).sum();
            let mut exch = 0.0;
            for m in 0..np {
                let mut dot = 0.0;
                for c in 0..dim {
                    dot += (0..=k)
                        .map(|j| binom(k, j) * pt.e(c, [0, 0, j]) * pt.p(m, c, [0, 0, k - j + 1]))
                        .sum::<f64>();
                }
                exch += mat.beta(l, m) * dot;
            }
            pt.n(l, [0, 0, k + 1]) - relax - exch
        };
        let vals: Vec<f64> = (0..=kmax).map(fn_k).collect();
        f.fnv[l] = vals[0];
        f.fnt[l] = vals[1];
        if order >= 4 {
            f.fntt[l] = vals[2];
            f.fnttt[l] = vals[3];
        }
    }
    f
}

impl Forcing for ManufacturedForcing {
    fn sample(&self, x: [f64; 2], t: f64) -> ForcingSample {
        let pt = self.solution.at(x, t);
        manufactured_sample(&pt, &self.material, self.solution.dim, self.order)
    }
}
