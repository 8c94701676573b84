//! Separable cosine products with closed-form derivatives.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// `cos(f s + phi)` in one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigFactor {
    pub f: f64,
    pub phi: f64,
}

impl TrigFactor {
    pub const ONE: TrigFactor = TrigFactor { f: 0.0, phi: 0.0 };

    pub fn new(f: f64, phi: f64) -> Self {
        TrigFactor { f, phi }
    }

    /// k-th derivative: `f^k cos(f s + phi + k pi/2)`.
    pub fn deriv(&self, s: f64, k: usize) -> f64 {
        self.f.powi(k as i32) * (self.f * s + self.phi + k as f64 * FRAC_PI_2).cos()
    }

    fn cos_sin(&self, s: f64) -> [f64; 2] {
        let (sn, cs) = (self.f * s + self.phi).sin_cos();
        [cs, sn]
    }
}

/// Derivative of `cos(theta)` of order `k` from precomputed `[cos, sin]`, times `f^k`.
#[inline]
fn cycle(cs: [f64; 2], f: f64, k: usize) -> f64 {
    let base = match k % 4 {
        0 => cs[0],
        1 => -cs[1],
        2 => -cs[0],
        _ => cs[1],
    };
    if k == 0 {
        base
    } else {
        f.powi(k as i32) * base
    }
}

/// `offset + amp * cos(fx x + px) cos(fy y + py) cos(ft t + pt)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigProduct {
    pub amp: f64,
    #[serde(default)]
    pub offset: f64,
    pub x: TrigFactor,
    pub y: TrigFactor,
    pub t: TrigFactor,
}

/// Cos/sin of each factor at a fixed point, for cheap repeated derivatives.
#[derive(Debug, Clone, Copy)]
pub struct TrigEval {
    prod: TrigProduct,
    cs: [[f64; 2]; 3],
}

impl TrigProduct {
    pub fn value(&self, x: [f64; 2], t: f64) -> f64 {
        self.deriv(x, t, [0, 0, 0])
    }

    /// Mixed derivative `d = [dx, dy, dt]`.
    pub fn deriv(&self, x: [f64; 2], t: f64, d: [usize; 3]) -> f64 {
        let v = self.amp * self.x.deriv(x[0], d[0]) * self.y.deriv(x[1], d[1]) * self.t.deriv(t, d[2]);
        if d == [0, 0, 0] {
            self.offset + v
        } else {
            v
        }
    }

    pub fn eval_at(&self, x: [f64; 2], t: f64) -> TrigEval {
        TrigEval {
            prod: *self,
            cs: [self.x.cos_sin(x[0]), self.y.cos_sin(x[1]), self.t.cos_sin(t)],
        }
    }
}

impl TrigEval {
    #[inline]
    pub fn d(&self, d: [usize; 3]) -> f64 {
        let p = &self.prod;
        let v = p.amp
            * cycle(self.cs[0], p.x.f, d[0])
            * cycle(self.cs[1], p.y.f, d[1])
            * cycle(self.cs[2], p.t.f, d[2]);
        if d == [0, 0, 0] {
            p.offset + v
        } else {
            v
        }
    }
}
