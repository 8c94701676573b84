//! Per-point update formulas of the second- and fourth-order schemes.
//!
//! Spatial operators arrive precomputed in [`PointData`], so the same kernels
//! serve grid loops, interface corrections and the 0D ODE mode.

use crate::forcing::ForcingSample;
use crate::material::{MaterialParams, MAX_LEV, MAX_POL};

pub type Vec2 = [f64; 2];
pub type PVec = [[f64; 2]; MAX_POL];
pub type NVec = [f64; MAX_LEV];

/// Material coefficients copied into fixed arrays.
#[derive(Debug, Clone, Copy)]
pub struct KernelCoeffs {
    pub np: usize,
    pub nn: usize,
    /// E components per point.
    pub d: usize,
    pub c2: f64,
    pub ap: f64,
    pub a: [[f64; MAX_LEV]; MAX_POL],
    pub b0: [f64; MAX_POL],
    pub b1: [f64; MAX_POL],
    pub alpha: [[f64; MAX_LEV]; MAX_LEV],
    pub beta: [[f64; MAX_POL]; MAX_LEV],
}

impl KernelCoeffs {
    pub fn new(mat: &MaterialParams, d: usize) -> Self {
        let (np, nn) = (mat.num_polarization(), mat.num_levels());
        let mut k = KernelCoeffs {
            np,
            nn,
            d,
            c2: mat.c() * mat.c(),
            ap: mat.alpha_p(),
            a: [[0.0; MAX_LEV]; MAX_POL],
            b0: [0.0; MAX_POL],
            b1: [0.0; MAX_POL],
            alpha: [[0.0; MAX_LEV]; MAX_LEV],
            beta: [[0.0; MAX_POL]; MAX_LEV],
        };
        for m in 0..np {
            k.b0[m] = mat.b0(m);
            k.b1[m] = mat.b1(m);
            for l in 0..nn {
                k.a[m][l] = mat.a(m, l);
                k.beta[l][m] = mat.beta(l, m);
            }
        }
        for l in 0..nn {
            for q in 0..nn {
                k.alpha[l][q] = mat.alpha(l, q);
            }
        }
        k
    }

    #[inline]
    fn an(&self, m: usize, n: &NVec) -> f64 {
        let mut s = 0.0;
        for l in 0..self.nn {
            s += self.a[m][l] * n[l];
        }
        s
    }

    #[inline]
    fn relax(&self, l: usize, n: &NVec) -> f64 {
        let mut s = 0.0;
        for q in 0..self.nn {
            s += self.alpha[l][q] * n[q];
        }
        s
    }

    /// `sum_m beta_{l,m} (u . v_m)`.
    #[inline]
    fn exch(&self, l: usize, u: &Vec2, v: &PVec) -> f64 {
        let mut s = 0.0;
        for m in 0..self.np {
            let mut dot = 0.0;
            for c in 0..self.d {
                dot += u[c] * v[m][c];
            }
            s += self.beta[l][m] * dot;
        }
        s
    }
}

/// Inputs at one point: levels n and n-1 plus the spatial operators of level n (and n-1 where needed).
#[derive(Debug, Clone, Copy, Default)]
pub struct PointData {
    pub e: Vec2,
    pub e_prev: Vec2,
    pub p: PVec,
    pub p_prev: PVec,
    pub n: NVec,
    pub lap2_e: Vec2,
    pub lap2_e_prev: Vec2,
    pub lap4_e: Vec2,
    pub lapsq2_e: Vec2,
    pub lap4_p: PVec,
    pub lap4_p_prev: PVec,
    /// Second-order `Δ(N_l E_c)` indexed `[l][c]`.
    pub lap_ne: [[f64; 2]; MAX_LEV],
    /// Prescribed `(E^{n+1}, E_ttt^n)` replacing the E update (0D driven mode).
    pub prescribed: Option<(Vec2, Vec2)>,
}

/// Time-derivative intermediates left behind by a point update.
#[derive(Debug, Clone, Copy, Default)]
pub struct StepScratch {
    pub qt: NVec,
    pub qtt: NVec,
    pub qttt: NVec,
    pub qtttt: NVec,
    /// First time derivative of P at level n (second order: D0t, fourth order: D4t).
    pub ptv: PVec,
    pub pttv: PVec,
    pub ptttv: PVec,
    pub pttttv: PVec,
    /// Starred fourth derivative of the predictor (fourth-order scheme only).
    pub pttttv_star: PVec,
    pub etv: Vec2,
    pub ettv: Vec2,
    pub etttv: Vec2,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PointUpdate {
    pub e_next: Vec2,
    pub p_next: PVec,
    pub n_next: NVec,
    pub scratch: StepScratch,
}

/// Second-order P update for every polarization.
#[inline]
pub fn predict_p(k: &KernelCoeffs, dt: f64, pd: &PointData, f: &ForcingSample) -> PVec {
    let dt2 = dt * dt;
    let mut out = [[0.0; 2]; MAX_POL];
    for m in 0..k.np {
        let beta = 1.0 / (1.0 + 0.5 * dt * k.b1[m]);
        let an = k.an(m, &pd.n);
        for c in 0..k.d {
            let (p, pm) = (pd.p[m][c], pd.p_prev[m][c]);
            out[m][c] = beta
                * (2.0 * p - pm + 0.5 * dt * k.b1[m] * pm - dt2 * k.b0[m] * p
                    + dt2 * an * pd.e[c]
                    + dt2 * f.fp[m][c]);
        }
    }
    out
}

/// `sum_m (P_m^{n+1} - 2 P_m^n + P_m^{n-1})` from a P update.
#[inline]
fn p_second_diff_sum(k: &KernelCoeffs, pd: &PointData, pn: &PVec) -> Vec2 {
    let mut s = [0.0; 2];
    for m in 0..k.np {
        for c in 0..k.d {
            s[c] += pn[m][c] - 2.0 * pd.p[m][c] + pd.p_prev[m][c];
        }
    }
    s
}

/// Total `P_tt` at level n from the second-order P update; depends on no E ghost values.
pub fn ptt_known(k: &KernelCoeffs, dt: f64, pd: &PointData, f: &ForcingSample) -> Vec2 {
    let pn = predict_p(k, dt, pd, f);
    let s = p_second_diff_sum(k, pd, &pn);
    [s[0] / (dt * dt), s[1] / (dt * dt)]
}

/// N derivatives `(qt, qtt)` of the second-order scheme.
pub fn n_derivs_order2(
    k: &KernelCoeffs,
    dt: f64,
    pd: &PointData,
    e_next: &Vec2,
    p_next: &PVec,
    f: &ForcingSample,
) -> (NVec, NVec) {
    let dt2 = dt * dt;
    let mut pt = [[0.0; 2]; MAX_POL];
    let mut ptt = [[0.0; 2]; MAX_POL];
    for m in 0..k.np {
        for c in 0..k.d {
            pt[m][c] = (p_next[m][c] - pd.p_prev[m][c]) / (2.0 * dt);
            ptt[m][c] = (p_next[m][c] - 2.0 * pd.p[m][c] + pd.p_prev[m][c]) / dt2;
        }
    }
    let mut et = [0.0; 2];
    for c in 0..k.d {
        et[c] = (e_next[c] - pd.e_prev[c]) / (2.0 * dt);
    }
    let mut qt = [0.0; MAX_LEV];
    let mut qtt = [0.0; MAX_LEV];
    for l in 0..k.nn {
        qt[l] = f.fnv[l] + k.relax(l, &pd.n) + k.exch(l, &pd.e, &pt);
    }
    for l in 0..k.nn {
        qtt[l] = f.fnt[l] + k.relax(l, &qt) + k.exch(l, &et, &pt) + k.exch(l, &pd.e, &ptt);
    }
    (qt, qtt)
}

/// E update of the second-order scheme (or the prescribed value).
#[inline]
fn e_order2(k: &KernelCoeffs, dt: f64, pd: &PointData, psum: &Vec2, f: &ForcingSample) -> Vec2 {
    if let Some((en, _)) = pd.prescribed {
        return en;
    }
    let dt2 = dt * dt;
    let mut en = [0.0; 2];
    for c in 0..k.d {
        en[c] = 2.0 * pd.e[c] - pd.e_prev[c] + k.c2 * dt2 * pd.lap2_e[c] - k.ap * psum[c] + dt2 * f.fe[c];
    }
    en
}

/// One step of the second-order scheme at a point.
pub fn update_order2(k: &KernelCoeffs, dt: f64, pd: &PointData, f: &ForcingSample) -> PointUpdate {
    let p_next = predict_p(k, dt, pd, f);
    let psum = p_second_diff_sum(k, pd, &p_next);
    let e_next = e_order2(k, dt, pd, &psum, f);
    let (qt, qtt) = n_derivs_order2(k, dt, pd, &e_next, &p_next, f);
    let mut n_next = [0.0; MAX_LEV];
    for l in 0..k.nn {
        n_next[l] = pd.n[l] + dt * qt[l] + 0.5 * dt * dt * qtt[l];
    }
    let mut s = StepScratch { qt, qtt, ..Default::default() };
    for m in 0..k.np {
        for c in 0..k.d {
            s.ptv[m][c] = (p_next[m][c] - pd.p_prev[m][c]) / (2.0 * dt);
            s.pttv[m][c] = (p_next[m][c] - 2.0 * pd.p[m][c] + pd.p_prev[m][c]) / (dt * dt);
        }
    }
    for c in 0..k.d {
        s.etv[c] = (e_next[c] - pd.e_prev[c]) / (2.0 * dt);
        s.ettv[c] = (e_next[c] - 2.0 * pd.e[c] + pd.e_prev[c]) / (dt * dt);
    }
    PointUpdate { e_next, p_next, n_next, scratch: s }
}

/// Starred third and fourth P derivatives from predicted levels and starred N derivatives.
pub fn p_ladder_starred(
    k: &KernelCoeffs,
    dt: f64,
    pd: &PointData,
    p_star: &PVec,
    e_star: &Vec2,
    qt: &NVec,
    qtt: &NVec,
    f: &ForcingSample,
) -> (PVec, PVec) {
    let dt2 = dt * dt;
    let mut pttt = [[0.0; 2]; MAX_POL];
    let mut ptttt = [[0.0; 2]; MAX_POL];
    for c in 0..k.d {
        let et = (e_star[c] - pd.e_prev[c]) / (2.0 * dt);
        let ett = (e_star[c] - 2.0 * pd.e[c] + pd.e_prev[c]) / dt2;
        for m in 0..k.np {
            let ptv = (p_star[m][c] - pd.p_prev[m][c]) / (2.0 * dt);
            let pttv = (p_star[m][c] - 2.0 * pd.p[m][c] + pd.p_prev[m][c]) / dt2;
            let mut s3 = 0.0;
            let mut s4 = 0.0;
            for l in 0..k.nn {
                s3 += k.a[m][l] * (qt[l] * pd.e[c] + pd.n[l] * et);
                s4 += k.a[m][l] * (qtt[l] * pd.e[c] + 2.0 * qt[l] * et + pd.n[l] * ett);
            }
            pttt[m][c] = -k.b1[m] * pttv - k.b0[m] * ptv + s3 + f.fpt[m][c];
            ptttt[m][c] = -k.b1[m] * pttt[m][c] - k.b0[m] * pttv + s4 + f.fptt[m][c];
        }
    }
    (pttt, ptttt)
}

/// One step of the fourth-order predictor-corrector scheme at a point.
pub fn update_order4(k: &KernelCoeffs, dt: f64, pd: &PointData, f: &ForcingSample) -> PointUpdate {
    let dt2 = dt * dt;
    let dt4 = dt2 * dt2;
    let (np, nn, d) = (k.np, k.nn, k.d);

    // predictor
    let p_star = predict_p(k, dt, pd, f);
    let psum_star = p_second_diff_sum(k, pd, &p_star);
    let e_star = e_order2(k, dt, pd, &psum_star, f);
    let (qt_s, qtt_s) = n_derivs_order2(k, dt, pd, &e_star, &p_star, f);
    let (pttt_s, ptttt_s) = p_ladder_starred(k, dt, pd, &p_star, &e_star, &qt_s, &qtt_s, f);

    // corrected P
    let mut p_next = [[0.0; 2]; MAX_POL];
    let mut pttt_sum = [0.0; 2];
    for m in 0..np {
        let beta = 1.0 / (1.0 + 0.5 * dt * k.b1[m]);
        let an = k.an(m, &pd.n);
        for c in 0..d {
            let (p, pm) = (pd.p[m][c], pd.p_prev[m][c]);
            p_next[m][c] = beta
                * (2.0 * p - pm
                    + dt4 / 12.0 * ptttt_s[m][c]
                    + dt4 / 6.0 * k.b1[m] * pttt_s[m][c]
                    + 0.5 * dt * k.b1[m] * pm
                    - dt2 * k.b0[m] * p
                    + dt2 * an * pd.e[c]
                    + dt2 * f.fp[m][c]);
            pttt_sum[c] += pttt_s[m][c];
        }
    }
    let psum = p_second_diff_sum(k, pd, &p_next);

    // Laplacian of P recurrence (second order is enough: it sits under dt^4)
    let mut pxx_sum = [0.0; 2];
    for m in 0..np {
        let beta = 1.0 / (1.0 + 0.5 * dt * k.b1[m]);
        for c in 0..d {
            let (q, qm) = (pd.lap4_p[m][c], pd.lap4_p_prev[m][c]);
            let mut ane = 0.0;
            for l in 0..nn {
                ane += k.a[m][l] * pd.lap_ne[l][c];
            }
            let qn = beta
                * (2.0 * q - qm + 0.5 * dt * k.b1[m] * qm - dt2 * k.b0[m] * q
                    + dt2 * ane
                    + dt2 * f.lapfp[m][c]);
            pxx_sum[c] += qn - 2.0 * q + qm;
        }
    }

    // corrected E and its third derivative
    let mut e_next = [0.0; 2];
    let mut ettt = [0.0; 2];
    for c in 0..d {
        let c2 = k.c2;
        e_next[c] = 2.0 * pd.e[c] - pd.e_prev[c] + c2 * dt2 * pd.lap4_e[c] - k.ap * psum[c]
            + dt2 * f.fe[c]
            + dt4 / 12.0
                * (c2 * c2 * pd.lapsq2_e[c] - k.ap * c2 * pxx_sum[c] / dt2 + c2 * f.lapfe[c] + f.fett[c]);
        let elap2n = 2.0 * pd.lap2_e[c] - pd.lap2_e_prev[c] + dt2 * c2 * pd.lapsq2_e[c] - k.ap * pxx_sum[c]
            + dt2 * f.lapfe[c];
        ettt[c] = (c2 * elap2n - c2 * pd.lap2_e_prev[c]) / (2.0 * dt) - k.ap * pttt_sum[c] + f.fet[c];
    }
    if let Some((en, et3)) = pd.prescribed {
        e_next = en;
        ettt = et3;
    }

    // fourth-order time derivatives at level n
    let mut et = [0.0; 2];
    let mut ett = [0.0; 2];
    for c in 0..d {
        et[c] = (e_next[c] - pd.e_prev[c]) / (2.0 * dt) - dt2 / 6.0 * ettt[c];
        ett[c] = (e_next[c] - 2.0 * pd.e[c] + pd.e_prev[c]) / dt2;
    }
    let mut pt = [[0.0; 2]; MAX_POL];
    let mut ptt = [[0.0; 2]; MAX_POL];
    for m in 0..np {
        let an = k.an(m, &pd.n);
        for c in 0..d {
            pt[m][c] = (p_next[m][c] - pd.p_prev[m][c]) / (2.0 * dt) - dt2 / 6.0 * pttt_s[m][c];
            ptt[m][c] = -k.b1[m] * pt[m][c] - k.b0[m] * pd.p[m][c] + an * pd.e[c] + f.fp[m][c];
        }
    }
    let mut qt = [0.0; MAX_LEV];
    let mut qtt = [0.0; MAX_LEV];
    for l in 0..nn {
        qt[l] = f.fnv[l] + k.relax(l, &pd.n) + k.exch(l, &pd.e, &pt);
    }
    for l in 0..nn {
        qtt[l] = f.fnt[l] + k.relax(l, &qt) + k.exch(l, &et, &pt) + k.exch(l, &pd.e, &ptt);
    }

    // refreshed P ladders
    let mut pttt = [[0.0; 2]; MAX_POL];
    let mut ptttt = [[0.0; 2]; MAX_POL];
    for m in 0..np {
        for c in 0..d {
            let mut s3 = 0.0;
            for l in 0..nn {
                s3 += k.a[m][l] * (qt[l] * pd.e[c] + pd.n[l] * et[c]);
            }
            pttt[m][c] = -k.b1[m] * ptt[m][c] - k.b0[m] * pt[m][c] + s3 + f.fpt[m][c];
            let mut s4 = 0.0;
            for l in 0..nn {
                s4 += k.a[m][l] * (qtt[l] * pd.e[c] + 2.0 * qt[l] * et[c] + pd.n[l] * ett[c]);
            }
            ptttt[m][c] = -k.b1[m] * pttt[m][c] - k.b0[m] * ptt[m][c] + s4 + f.fptt[m][c];
        }
    }

    let mut qttt = [0.0; MAX_LEV];
    let mut qtttt = [0.0; MAX_LEV];
    for l in 0..nn {
        qttt[l] = f.fntt[l] + k.relax(l, &qtt) + k.exch(l, &ett, &pt) + 2.0 * k.exch(l, &et, &ptt)
            + k.exch(l, &pd.e, &pttt);
    }
    for l in 0..nn {
        qtttt[l] = f.fnttt[l]
            + k.relax(l, &qttt)
            + k.exch(l, &ettt, &pt)
            + 3.0 * k.exch(l, &ett, &ptt)
            + 3.0 * k.exch(l, &et, &pttt)
            + k.exch(l, &pd.e, &ptttt);
    }
    let mut n_next = [0.0; MAX_LEV];
    for l in 0..nn {
        n_next[l] = pd.n[l] + dt * qt[l] + dt2 / 2.0 * qtt[l] + dt2 * dt / 6.0 * qttt[l] + dt4 / 24.0 * qtttt[l];
    }

    PointUpdate {
        e_next,
        p_next,
        n_next,
        scratch: StepScratch {
            qt,
            qtt,
            qttt,
            qtttt,
            ptv: pt,
            pttv: ptt,
            ptttv: pttt,
            pttttv: ptttt,
            pttttv_star: ptttt_s,
            etv: et,
            ettv: ett,
            etttv: ettt,
        },
    }
}
