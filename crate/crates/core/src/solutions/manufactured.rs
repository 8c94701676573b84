//! Trigonometric manufactured solutions.
//!
//! In 2D, E comes from a stream function `psi`: `Ex = psi_y`, `Ey = -psi_x`.
//! In 1D the single E component is a plain product. Default frequencies and phases
//! are fixed by [`default_manufactured`].

use super::trig::{TrigEval, TrigFactor, TrigProduct};
use super::FieldId;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManufacturedSolution {
    pub dim: usize,
    /// Stream function (2D) or the E component itself (1D).
    pub e: TrigProduct,
    /// Indexed `[m][component]`.
    pub p: Vec<Vec<TrigProduct>>,
    pub n: Vec<TrigProduct>,
}

/// Deterministic default: periodic with period 1 in y (2D) or x (1D).
pub fn default_manufactured(dim: usize, np: usize, nn: usize) -> ManufacturedSolution {
    let two_pi = 2.0 * PI;
    let e = if dim == 2 {
        TrigProduct {
            amp: 0.5 / PI,
            offset: 0.0,
            x: TrigFactor::new(PI, 0.5),
            y: TrigFactor::new(two_pi, 0.25),
            t: TrigFactor::new(2.0, 0.0),
        }
    } else {
        TrigProduct {
            amp: 1.0,
            offset: 0.0,
            x: TrigFactor::new(two_pi, 0.5),
            y: TrigFactor::ONE,
            t: TrigFactor::new(2.0, 0.0),
        }
    };
    let spatial = |fx: f64, px: f64, py: f64| {
        if dim == 2 {
            (TrigFactor::new(fx, px), TrigFactor::new(two_pi, py))
        } else {
            (TrigFactor::new(two_pi, px), TrigFactor::ONE)
        }
    };
    let p = (0..np)
        .map(|m| {
            (0..dim)
                .map(|c| {
                    let q = (m * dim + c) as f64;
                    let (x, y) = spatial(1.0 + 0.5 * q, 0.1 + 0.2 * q, 0.3 + 0.25 * q);
                    TrigProduct { amp: 0.1, offset: 0.0, x, y, t: TrigFactor::new(1.0 + 0.35 * q, 0.15 * q) }
                })
                .collect()
        })
        .collect();
    let n = (0..nn)
        .map(|l| {
            let q = l as f64;
            let (x, y) = spatial(1.5 + 0.4 * q, 0.2 + 0.3 * q, 0.1 + 0.4 * q);
            TrigProduct { amp: 0.2, offset: 0.6, x, y, t: TrigFactor::new(0.8 + 0.3 * q, 0.25 * q) }
        })
        .collect();
    ManufacturedSolution { dim, e, p, n }
}

impl ManufacturedSolution {
    /// Mixed derivative of one field component; indices beyond the table are zero.
    pub fn deriv(&self, field: FieldId, x: [f64; 2], t: f64, d: [usize; 3]) -> f64 {
        match field {
            FieldId::E(c) => {
                if self.dim == 1 {
                    if c == 0 {
                        self.e.deriv(x, t, d)
                    } else {
                        0.0
                    }
                } else {
                    match c {
                        0 => self.e.deriv(x, t, [d[0], d[1] + 1, d[2]]),
                        1 => -self.e.deriv(x, t, [d[0] + 1, d[1], d[2]]),
                        _ => 0.0,
                    }
                }
            }
            FieldId::P(m, c) => self.p.get(m).and_then(|v| v.get(c)).map_or(0.0, |q| q.deriv(x, t, d)),
            FieldId::N(l) => self.n.get(l).map_or(0.0, |q| q.deriv(x, t, d)),
        }
    }

    /// Cached trig values at one point for repeated derivative queries.
    pub fn at(&self, x: [f64; 2], t: f64) -> ManufacturedPoint {
        ManufacturedPoint {
            dim: self.dim,
            e: self.e.eval_at(x, t),
            p: self.p.iter().map(|v| v.iter().map(|q| q.eval_at(x, t)).collect()).collect(),
            n: self.n.iter().map(|q| q.eval_at(x, t)).collect(),
        }
    }
}

pub struct ManufacturedPoint {
    dim: usize,
    e: TrigEval,
    p: Vec<Vec<TrigEval>>,
    n: Vec<TrigEval>,
}

impl ManufacturedPoint {
    #[inline]
    pub fn e(&self, c: usize, d: [usize; 3]) -> f64 {
        if self.dim == 1 {
            if c == 0 {
                self.e.d(d)
            } else {
                0.0
            }
        } else if c == 0 {
            self.e.d([d[0], d[1] + 1, d[2]])
        } else {
            -self.e.d([d[0] + 1, d[1], d[2]])
        }
    }
    #[inline]
    pub fn p(&self, m: usize, c: usize, d: [usize; 3]) -> f64 {
        self.p.get(m).and_then(|v| v.get(c)).map_or(0.0, |q| q.d(d))
    }
    #[inline]
    pub fn n(&self, l: usize, d: [usize; 3]) -> f64 {
        self.n.get(l).map_or(0.0, |q| q.d(d))
    }
}
