//! Small dense LU factorization with partial pivoting.

use crate::error::{MlaError, Result};

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSystem {
    pub n: usize,
    pub a: Vec<f64>,
}

impl DenseSystem {
    pub fn zeros(n: usize) -> Self {
        DenseSystem { n, a: vec![0.0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        DenseSystem { n, a: rows.iter().flatten().copied().collect() }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum()).collect()
    }
}

/// `PA = LU` with unit-diagonal L stored below the diagonal.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    piv: Vec<usize>,
}

/// Factor with partial pivoting; a pivot below `1e-14` of its original row scale is singular.
pub fn lu_factor(sys: &DenseSystem) -> Result<LuFactors> {
    let n = sys.n;
    if sys.a.iter().any(|v| !v.is_finite()) {
        return Err(MlaError::DegenerateInput("matrix has non-finite entries".into()));
    }
    let mut lu = sys.a.clone();
    let mut scale: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| lu[i * n + j].abs()).fold(0.0, f64::max))
        .collect();
    let mut piv: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| lu[x * n + k].abs().total_cmp(&lu[y * n + k].abs()))
            .unwrap_or(k);
        let pivot = lu[p * n + k];
        if scale[p] == 0.0 || pivot.abs() < 1e-14 * scale[p] {
            return Err(MlaError::SingularInterfaceMatrix { row: k, pivot });
        }
        if p != k {
            for j in 0..n {
                lu.swap(k * n + j, p * n + j);
            }
            piv.swap(k, p);
            scale.swap(k, p);
        }
        for i in k + 1..n {
            let l = lu[i * n + k] / pivot;
            lu[i * n + k] = l;
            for j in k + 1..n {
                lu[i * n + j] -= l * lu[k * n + j];
            }
        }
    }
    Ok(LuFactors { n, lu, piv })
}

pub fn lu_solve(f: &LuFactors, rhs: &[f64]) -> Vec<f64> {
    let n = f.n;
    let mut x: Vec<f64> = f.piv.iter().map(|&p| rhs[p]).collect();
    for i in 0..n {
        for j in 0..i {
            x[i] -= f.lu[i * n + j] * x[j];
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            x[i] -= f.lu[i * n + j] * x[j];
        }
        x[i] /= f.lu[i * n + i];
    }
    x
}
