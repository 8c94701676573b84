use mla_core::material::{builtin_material, MaterialParams};
use mla_core::solutions::manufactured::{default_manufactured, ManufacturedSolution};
use mla_core::solutions::soliton::{soliton_exact, SolitonParams};
use mla_core::solutions::trig::{TrigFactor, TrigProduct};
use mla_core::solutions::{eval_exact, FieldId, Manufactured, SolutionContext, SolutionRegistry, SolutionSource};
use mla_core::MlaError;
use std::f64::consts::PI;

const POINTS: [([f64; 2], f64); 3] = [([0.13, 0.71], 0.2), ([0.52, 0.05], 0.9), ([0.91, 0.44], 1.7)];

fn fields(dim: usize, np: usize, nn: usize) -> Vec<FieldId> {
    let mut v: Vec<FieldId> = (0..dim).map(FieldId::E).collect();
    for m in 0..np {
        for c in 0..dim {
            v.push(FieldId::P(m, c));
        }
    }
    v.extend((0..nn).map(FieldId::N));
    v
}

/// Sixth-order central difference of `g` along unit direction `axis` (0 = x, 1 = y, 2 = t).
fn fd6(g: impl Fn([f64; 2], f64) -> f64, x: [f64; 2], t: f64, axis: usize, h: f64) -> f64 {
    const W: [f64; 3] = [45.0, -9.0, 1.0];
    let mut s = 0.0;
    for (k, w) in W.iter().enumerate() {
        let o = (k + 1) as f64 * h;
        let shift = |sgn: f64| {
            let mut xx = x;
            let mut tt = t;
            if axis == 2 {
                tt += sgn * o;
            } else {
                xx[axis] += sgn * o;
            }
            g(xx, tt)
        };
        s += w * (shift(1.0) - shift(-1.0));
    }
    s / (60.0 * h)
}

#[test]
fn eval_exact_examples() {
    let u = Manufactured(ManufacturedSolution {
        dim: 1,
        e: TrigProduct { amp: 1.0, offset: 0.0, x: TrigFactor::new(1.0, 0.0), y: TrigFactor::ONE, t: TrigFactor::new(1.0, 0.0) },
        p: vec![],
        n: vec![],
    });
    assert!((eval_exact(&u, FieldId::E(0), [0.0, 0.0], 0.0, [0, 0, 2]).unwrap() + 1.0).abs() < 1e-15);
    let x = [0.3, 0.0];
    assert_eq!(eval_exact(&u, FieldId::E(0), x, 0.4, [0, 0, 0]).unwrap(), u.value(FieldId::E(0), x, 0.4));
    assert!(matches!(
        eval_exact(&u, FieldId::E(0), x, 0.0, [2, 0, 3]),
        Err(MlaError::UnsupportedDerivative(5))
    ));
    let v = TrigProduct { amp: 2.0, offset: 0.0, x: TrigFactor::new(3.0, 0.5), y: TrigFactor::ONE, t: TrigFactor::new(2.0, 0.0) };
    let d = v.deriv([0.0, 0.0], 0.0, [1, 0, 0]);
    assert!((d + 6.0 * 0.5f64.sin()).abs() < 1e-14);
    let fd = fd6(|x, t| v.value(x, t), [0.0, 0.0], 0.0, 0, 1e-3);
    assert!((d - fd).abs() < 1e-8);
}

#[test]
fn stream_function_example() {
    let s = ManufacturedSolution {
        dim: 2,
        e: TrigProduct { amp: 1.0, offset: 0.0, x: TrigFactor::new(PI, 0.0), y: TrigFactor::new(PI, 0.0), t: TrigFactor::new(2.0, 0.0) },
        p: vec![],
        n: vec![],
    };
    let ex = s.deriv(FieldId::E(0), [0.25, 0.25], 0.0, [0, 0, 0]);
    assert!((ex + PI / 2.0).abs() < 1e-14);
    let div = s.deriv(FieldId::E(0), [0.3, 0.8], 0.6, [1, 0, 0]) + s.deriv(FieldId::E(1), [0.3, 0.8], 0.6, [0, 1, 0]);
    assert!(div.abs() < 1e-14);
}

#[test]
fn derivatives_match_finite_differences() {
    for dim in [1, 2] {
        let src = Manufactured(default_manufactured(dim, 2, 4));
        for f in fields(dim, 2, 4) {
            for (x, t) in POINTS {
                // a spread of base derivatives, each differentiated once more along every axis
                for base in [[0, 0, 0], [1, 0, 1], [0, 1, 2], [2, 0, 0]] {
                    if dim == 1 && base[1] > 0 {
                        continue;
                    }
                    let g = |xx: [f64; 2], tt: f64| src.derivative(f, xx, tt, base).unwrap();
                    for axis in 0..3 {
                        if dim == 1 && axis == 1 {
                            continue;
                        }
                        let mut d = base;
                        d[axis] += 1;
                        let exact = src.derivative(f, x, t, d).unwrap();
                        let approx = fd6(g, x, t, axis, 1e-3);
                        let scale = exact.abs().max(1.0);
                        assert!(
                            (exact - approx).abs() <= 1e-6 * scale,
                            "{f:?} d={d:?} at {x:?},{t}: {exact} vs {approx}"
                        );
                    }
                }
            }
        }
    }
}

fn d(src: &dyn SolutionSource, f: FieldId, x: [f64; 2], t: f64, k: [usize; 3]) -> f64 {
    src.derivative(f, x, t, k).unwrap()
}

fn lap(src: &dyn SolutionSource, dim: usize, f: FieldId, x: [f64; 2], t: f64) -> f64 {
    let mut v = d(src, f, x, t, [2, 0, 0]);
    if dim == 2 {
        v += d(src, f, x, t, [0, 2, 0]);
    }
    v
}

/// Residuals of the unforced equations, assembled independently of the forcing module.
fn residuals(src: &dyn SolutionSource, mat: &MaterialParams, dim: usize, x: [f64; 2], t: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let (np, nn) = (mat.num_polarization(), mat.num_levels());
    let c2 = mat.c() * mat.c();
    let fe = (0..dim)
        .map(|c| {
            let ptt: f64 = (0..np).map(|m| d(src, FieldId::P(m, c), x, t, [0, 0, 2])).sum();
            d(src, FieldId::E(c), x, t, [0, 0, 2]) + mat.alpha_p() * ptt - c2 * lap(src, dim, FieldId::E(c), x, t)
        })
        .collect();
    let mut fp = Vec::new();
    for m in 0..np {
        for c in 0..dim {
            let p = |k| d(src, FieldId::P(m, c), x, t, k);
            let an: f64 = (0..nn).map(|l| mat.a(m, l) * d(src, FieldId::N(l), x, t, [0, 0, 0])).sum();
            fp.push(p([0, 0, 2]) + mat.b1(m) * p([0, 0, 1]) + mat.b0(m) * p([0, 0, 0]) - an * d(src, FieldId::E(c), x, t, [0, 0, 0]));
        }
    }
    let fnv = (0..nn)
        .map(|l| {
            let relax: f64 = (0..nn).map(|k| mat.alpha(l, k) * d(src, FieldId::N(k), x, t, [0, 0, 0])).sum();
            let exch: f64 = (0..np)
                .map(|m| {
                    mat.beta(l, m)
                        * (0..dim)
                            .map(|c| d(src, FieldId::E(c), x, t, [0, 0, 0]) * d(src, FieldId::P(m, c), x, t, [0, 0, 1]))
                            .sum::<f64>()
                })
                .sum();
            d(src, FieldId::N(l), x, t, [0, 0, 1]) - relax - exch
        })
        .collect();
    (fe, fp, fnv)
}

#[test]
fn forcing_matches_assembled_residuals() {
    for (dim, name) in [(2, "mlaMat2"), (2, "mlaMat3"), (1, "mlaMat4levels")] {
        let mat = builtin_material(name).unwrap();
        let src = Manufactured(default_manufactured(dim, mat.num_polarization(), mat.num_levels()));
        let forcing = src.forcing(&mat, 4);
        for (x, t) in POINTS {
            let s = forcing.sample(x, t);
            let (fe, fp, fnv) = residuals(&src, &mat, dim, x, t);
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0) * 10.0;
            for c in 0..dim {
                assert!(close(s.fe[c], fe[c]), "{name} fe {} vs {}", s.fe[c], fe[c]);
                // time and space derivatives of fe by finite differences of the assembled residual
                let fe_at = |xx: [f64; 2], tt: f64| residuals(&src, &mat, dim, xx, tt).0[c];
                let fet = fd6(fe_at, x, t, 2, 1e-3);
                assert!((s.fet[c] - fet).abs() <= 1e-6 * fet.abs().max(1.0), "{name} fet");
                let fet_at = |xx: [f64; 2], tt: f64| fd6(fe_at, xx, tt, 2, 1e-3);
                let fett = fd6(fet_at, x, t, 2, 1e-3);
                assert!((s.fett[c] - fett).abs() <= 1e-4 * fett.abs().max(1.0), "{name} fett {} vs {fett}", s.fett[c]);
            }
            for m in 0..mat.num_polarization() {
                for c in 0..dim {
                    assert!(close(s.fp[m][c], fp[m * dim + c]), "{name} fp");
                }
            }
            for l in 0..mat.num_levels() {
                assert!(close(s.fnv[l], fnv[l]), "{name} fn {} vs {}", s.fnv[l], fnv[l]);
                let fn_at = |xx: [f64; 2], tt: f64| residuals(&src, &mat, dim, xx, tt).2[l];
                let fnt = fd6(fn_at, x, t, 2, 1e-3);
                assert!((s.fnt[l] - fnt).abs() <= 1e-6 * fnt.abs().max(1.0), "{name} fnt");
            }
        }
    }
}

#[test]
fn forcing_examples() {
    let mat = builtin_material("mlaMat3").unwrap();
    let zero = SolutionRegistry::builtin()
        .create("zero", &serde_json::Value::Null, &SolutionContext { dim: 2, np: 1, nn: 1 })
        .unwrap();
    assert!(zero.forcing(&mat, 4).is_zero());
    let flat = TrigProduct { amp: 0.0, offset: 0.0, x: TrigFactor::ONE, y: TrigFactor::ONE, t: TrigFactor::ONE };
    let src = Manufactured(ManufacturedSolution {
        dim: 1,
        e: flat,
        p: vec![vec![flat]],
        n: vec![TrigProduct { offset: 1.0, ..flat }],
    });
    let s = src.forcing(&mat, 4).sample([0.4, 0.0], 1.1);
    assert!((s.fnv[0] + 0.01).abs() < 1e-16);
    assert_eq!(s.fnt[0], 0.0);
    assert_eq!(s.fe[0], 0.0);
}

#[test]
fn soliton_shifts_with_envelope_speed() {
    let p = SolitonParams::default();
    let dt = 0.01;
    for x in [-3.0, 0.5, 7.0] {
        let (_, _, d_prev) = soliton_exact(&p, x, -dt).unwrap();
        let (_, _, d_now) = soliton_exact(&p, x + p.u * dt, 0.0).unwrap();
        assert!((d_prev - d_now).abs() < 1e-14);
    }
    assert!(matches!(
        soliton_exact(&SolitonParams { u: -0.1, ..p }, 0.0, 0.0),
        Err(MlaError::InvalidParams(_))
    ));
}

#[test]
fn registry_names_and_errors() {
    let r = SolutionRegistry::builtin();
    assert_eq!(r.names(), ["zero", "manufactured", "soliton", "gaussian-plane-wave"]);
    let ctx = SolutionContext { dim: 1, np: 2, nn: 4 };
    assert!(matches!(
        r.create("plane", &serde_json::Value::Null, &ctx),
        Err(MlaError::UnknownStrategy { kind: "solution", .. })
    ));
    let g = r.create("gaussian-plane-wave", &serde_json::Value::Null, &ctx).unwrap();
    assert_eq!(g.value(FieldId::N(0), [0.0, 0.0], 0.0), 1.0);
    assert_eq!(g.value(FieldId::E(0), [-3.0, 0.0], 0.0), 1.0);
    assert!(!g.is_exact());
    assert!(r.create("soliton", &serde_json::json!({"u": 2.0}), &ctx).is_err());
}
