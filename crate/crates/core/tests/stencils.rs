use mla_core::grid::{for_each_interior, GridFunction, GridSpec};
use mla_core::stencils::*;
use mla_core::MlaError;
use proptest::prelude::*;

fn grid1(n: usize, h: f64) -> GridSpec {
    GridSpec::new(1, &[0.0], &[n as f64 * h], &[n], 3).unwrap()
}

fn grid2(n: usize) -> GridSpec {
    GridSpec::new(2, &[0.0, -0.5], &[1.0, 0.7], &[n, n + 2], 3).unwrap()
}

fn max_err(u: &GridFunction, c: usize, f: impl Fn([f64; 2]) -> f64) -> f64 {
    let g = u.grid();
    let mut m: f64 = 0.0;
    for_each_interior(g, |i, j| m = m.max((u.get(c, i, j) - f(g.point(i, j))).abs()));
    m
}

fn sample(g: &GridSpec, f: impl Fn([f64; 2]) -> f64) -> GridFunction {
    GridFunction::from_fn(g, 1, |x, _| f(x))
}

#[test]
fn lap2_examples() {
    let g = grid1(10, 0.13);
    assert!(max_err(&lap2(&sample(&g, |x| x[0] * x[0])), 0, |_| 2.0) < 1e-11);
    assert_eq!(max_err(&lap2(&sample(&g, |_| 4.2)), 0, |_| 0.0), 0.0);
    let (k, h) = (1.7, 0.13);
    let sym = -4.0 / (h * h) * (k * h / 2.0f64).sin().powi(2);
    assert!(max_err(&lap2(&sample(&g, |x| (k * x[0]).sin())), 0, |x| sym * (k * x[0]).sin()) < 1e-12);
}

#[test]
fn lap4_examples() {
    let g = grid1(12, 0.1);
    assert!(max_err(&lap4(&sample(&g, |x| x[0].powi(4))), 0, |x| 12.0 * x[0] * x[0]) < 1e-10);
    assert!(max_err(&lap4(&sample(&g, |x| x[0].powi(5))), 0, |x| 20.0 * x[0].powi(3)) < 1e-10);
    assert_eq!(max_err(&lap4(&sample(&g, |_| -1.0)), 0, |_| 0.0), 0.0);
    let v = lap4(&sample(&g, |x| x[0].sin())).get(0, 5, 0);
    assert!((v + 0.5f64.sin()).abs() < 1e-5);
}

#[test]
fn lap_sq2_examples() {
    let g = grid1(12, 0.1);
    assert!(max_err(&lap_sq2(&sample(&g, |x| x[0].powi(4))), 0, |_| 24.0) < 1e-8);
    assert_eq!(max_err(&lap_sq2(&sample(&g, |_| 3.0)), 0, |_| 0.0), 0.0);
}

#[test]
fn lap_sq2_fused_equals_two_pass() {
    let g = grid2(9);
    let u = GridFunction::from_fn(&g, 1, |x, _| {
        let r = (x[0] * 12.9898 + x[1] * 78.233).sin() * 43758.5453;
        r - r.floor() - 0.5
    });
    let (a, b) = (lap_sq2(&u), lap_sq2_two_pass(&u));
    let mut m: f64 = 0.0;
    for_each_interior(&g, |i, j| m = m.max((a.get(0, i, j) - b.get(0, i, j)).abs()));
    let scale = 1.0 / g.h(0).powi(4);
    assert!(m <= 1e-12 * scale, "fused vs two-pass {m}");
}

#[test]
fn first_derivative_examples() {
    let g = GridSpec::new(1, &[-0.5], &[0.5], &[10], 2).unwrap();
    assert!(max_err(&first_deriv2(&sample(&g, |x| x[0]), 0), 0, |_| 1.0) < 1e-13);
    assert_eq!(max_err(&first_deriv2(&sample(&g, |_| 7.0), 0), 0, |_| 0.0), 0.0);
    let d = first_deriv2(&sample(&g, |x| x[0].powi(3)), 0);
    assert!((d.get(0, 5, 0) - 0.01).abs() < 1e-14);
    let d4 = first_deriv4(&sample(&g, |x| x[0].powi(4)), 0);
    assert!(max_err(&d4, 0, |x| 4.0 * x[0].powi(3)) < 1e-12);
}

#[test]
fn lap_product_chain_examples() {
    let g = grid2(10);
    let e = GridFunction::from_fn(&g, 2, |x, c| if c == 0 { x[0] } else { 0.0 });
    let n = sample(&g, |x| x[0]);
    let r = lap_product_chain(&e, &n);
    assert!(max_err(&r, 0, |_| 2.0) < 1e-10);
    assert!(max_err(&r, 1, |_| 0.0) < 1e-12);

    let e = GridFunction::from_fn(&g, 2, |x, c| (x[0] + 2.0 * c as f64 * x[1]).sin());
    let kappa = sample(&g, |_| 0.7);
    let (r, l) = (lap_product_chain(&e, &kappa), lap2(&e));
    for c in 0..2 {
        let mut m: f64 = 0.0;
        for_each_interior(&g, |i, j| m = m.max((r.get(c, i, j) - 0.7 * l.get(c, i, j)).abs()));
        assert!(m < 1e-10);
    }
    let e = GridFunction::from_fn(&g, 2, |_, c| 1.0 + c as f64);
    let n = sample(&g, |x| (2.0 * x[0]).cos() * x[1]);
    let (r, l) = (lap_product_chain(&e, &n), lap2(&n));
    for c in 0..2 {
        let mut m: f64 = 0.0;
        for_each_interior(&g, |i, j| m = m.max((r.get(c, i, j) - (1.0 + c as f64) * l.get(0, i, j)).abs()));
        assert!(m < 1e-10);
    }
}

#[test]
fn div_and_curl_examples() {
    let g = grid2(10);
    let u = GridFunction::from_fn(&g, 2, |x, c| if c == 0 { x[1] } else { -x[0] });
    for (div, curl) in [(div2(&u).unwrap(), curl2(&u).unwrap()), (div4(&u).unwrap(), curl4(&u).unwrap())] {
        assert!(max_err(&div, 0, |_| 0.0) < 1e-12);
        assert!(max_err(&curl, 0, |_| -2.0) < 1e-12);
    }
    let k = GridFunction::from_fn(&g, 2, |_, c| 3.0 - c as f64);
    assert_eq!(max_err(&div4(&k).unwrap(), 0, |_| 0.0), 0.0);
    assert_eq!(max_err(&curl4(&k).unwrap(), 0, |_| 0.0), 0.0);
    let g1 = grid1(10, 0.1);
    let e = GridFunction::from_fn(&g1, 1, |x, _| x[0]);
    assert!(matches!(curl2(&e), Err(MlaError::CurlUndefined1D)));
    assert!(max_err(&div2(&e).unwrap(), 0, |_| 1.0) < 1e-12);
}

fn psi_pair(g: &GridSpec) -> GridFunction {
    use std::f64::consts::PI;
    // E = (psi_y, -psi_x), psi = cos(pi x + 0.5) cos(2 pi y + 0.25)
    GridFunction::from_fn(g, 2, |x, c| {
        let (a, b) = (PI * x[0] + 0.5, 2.0 * PI * x[1] + 0.25);
        if c == 0 {
            -2.0 * PI * a.cos() * b.sin()
        } else {
            PI * a.sin() * b.cos()
        }
    })
}

#[test]
fn div4_of_divergence_free_field_is_fourth_order() {
    let errs: Vec<f64> = [10, 20, 40]
        .iter()
        .map(|&n| {
            let g = GridSpec::new(2, &[0.0, 0.0], &[1.0, 1.0], &[n, n], 3).unwrap();
            max_err(&div4(&psi_pair(&g)).unwrap(), 0, |_| 0.0)
        })
        .collect();
    for w in errs.windows(2) {
        let rate = (w[0] / w[1]).log2();
        assert!((rate - 4.0).abs() < 0.3, "rate {rate} from {errs:?}");
    }
}

#[test]
fn refinement_orders_on_trig_input() {
    let f = |x: [f64; 2]| (1.3 * x[0] + 0.2).sin() * (2.1 * x[1]).cos();
    let lap = |x: [f64; 2]| -(1.69 + 4.41) * f(x);
    type Op = fn(&GridFunction) -> GridFunction;
    let ops: [(Op, f64); 2] = [(lap2, 2.0), (lap4, 4.0)];
    for (op, order) in ops {
        let errs: Vec<f64> = [10, 20, 40]
            .iter()
            .map(|&n| {
                let g = GridSpec::new(2, &[0.0, 0.0], &[1.0, 1.0], &[n, n], 3).unwrap();
                max_err(&op(&sample(&g, f)), 0, lap)
            })
            .collect();
        for w in errs.windows(2) {
            let rate = (w[0] / w[1]).log2();
            assert!((rate - order).abs() < 0.2, "order {order}: rate {rate}");
        }
    }
}

proptest! {
    #[test]
    fn operators_are_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, k in 0.5f64..4.0) {
        let g = grid2(9);
        let h4 = g.h(0).min(g.h(1)).powi(4);
        let u = sample(&g, |x| (k * x[0]).sin() + x[1] * x[1]);
        let v = sample(&g, |x| (x[0] * x[1] * k).cos());
        let mut w = u.clone();
        for (z, (p, q)) in w.data_mut().iter_mut().zip(u.data().iter().zip(v.data())) {
            *z = a * p + b * q;
        }
        type Op = fn(&GridFunction) -> GridFunction;
        let ops: [Op; 4] = [lap2, lap4, lap_sq2, |u| first_deriv4(u, 1)];
        for op in ops {
            let (lw, lu, lv) = (op(&w), op(&u), op(&v));
            for_each_interior(&g, |i, j| {
                let mix = a * lu.get(0, i, j) + b * lv.get(0, i, j);
                // relative to the operator norm (widest stencil: Delta^2 with weights ~ 64/h^4)
                let scale = (a.abs() + b.abs() + 1.0) * 64.0 / h4;
                assert!((lw.get(0, i, j) - mix).abs() <= 1e-13 * scale);
            });
        }
    }
}
