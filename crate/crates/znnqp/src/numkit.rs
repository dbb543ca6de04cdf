//! Dense linear algebra, special functions, differencing, and seeded
//! randomness used by every other module.
//!
//! Matrices are small (at most a few dozen rows), so storage is row-major
//! `Vec<f64>` and the solver is plain LU with partial pivoting.

use crate::error::Error;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Build from row-major entries; length must equal rows*cols and all
    /// entries must be finite.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "matrix entry count",
                expected: rows * cols,
                got: data.len(),
            });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::DomainError {
                what: "matrix entries must be finite",
                value: f64::NAN,
            });
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Writes `block` with its top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)];
            }
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn matvec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        let mut out = Vector::zeros(self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            let mut acc = 0.0;
            for c in 0..self.cols {
                acc += row[c] * v[c];
            }
            out[r] = acc;
        }
        out
    }

    /// Transpose-vector product without materializing the transpose.
    pub fn t_matvec(&self, v: &Vector) -> Vector {
        assert_eq!(self.rows, v.len(), "t_matvec dimension mismatch");
        let mut out = Vector::zeros(self.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            let s = v[r];
            for c in 0..self.cols {
                out[c] += row[c] * s;
            }
        }
        out
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// Largest absolute entry; zero for empty matrices.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Dense vector of `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Vector { data: vec![0.0; n] }
    }

    pub fn from_vec(data: Vec<f64>) -> Self {
        Vector { data }
    }

    pub fn from_slice(s: &[f64]) -> Self {
        Vector { data: s.to_vec() }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn slice(&self, from: usize, to: usize) -> Vector {
        Vector::from_slice(&self.data[from..to])
    }

    pub fn concat(parts: &[&Vector]) -> Vector {
        let mut data = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
        for p in parts {
            data.extend_from_slice(&p.data);
        }
        Vector { data }
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.len(), other.len(), "dot dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "add dimension mismatch");
        Vector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "sub dimension mismatch");
        Vector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector {
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// In-place `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &Vector) {
        assert_eq!(self.len(), other.len(), "axpy dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn hadamard(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "hadamard dimension mismatch");
        Vector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Vector {
        Vector {
            data: self.data.iter().map(|v| f(*v)).collect(),
        }
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl std::ops::IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.data[i]
    }
}

/// Result of a linear solve. `degenerate` is set when partial pivoting hit a
/// pivot below the singularity threshold and the least-squares fallback path
/// produced the answer.
#[derive(Clone, Debug)]
pub struct Solve {
    pub x: Vector,
    pub degenerate: bool,
}

const PIVOT_TOL: f64 = 1e-12;

/// Solves `M x = r` for square `M` by LU with partial pivoting. If a pivot
/// falls below 1e-12 the system is treated as degenerate and a regularized
/// least-squares solution is returned instead, flagged in the result.
pub fn solve_square(m: &Mat, r: &Vector) -> Result<Solve, Error> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch {
            what: "solve_square matrix must be square",
            expected: m.rows(),
            got: m.cols(),
        });
    }
    if r.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            what: "solve_square rhs length",
            expected: m.rows(),
            got: r.len(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Solve {
            x: Vector::zeros(0),
            degenerate: false,
        });
    }
    let scale = m.max_abs().max(1.0);
    match lu_solve(m, r, PIVOT_TOL * scale) {
        Some(x) => Ok(Solve {
            x,
            degenerate: false,
        }),
        None => {
            // Tikhonov-regularized normal equations as a least-squares fallback.
            let mt = m.transpose();
            let mut mtm = mt.matmul(m);
            let lambda = PIVOT_TOL * scale * scale;
            for i in 0..n {
                mtm[(i, i)] += lambda;
            }
            let mtr = m.t_matvec(r);
            let x = lu_solve(&mtm, &mtr, 0.0).ok_or(Error::IllPosed { t: f64::NAN })?;
            Ok(Solve {
                x,
                degenerate: true,
            })
        }
    }
}

fn lu_solve(m: &Mat, r: &Vector, pivot_tol: f64) -> Option<Vector> {
    let n = m.rows();
    let mut a = m.clone();
    let mut x = r.clone();
    for k in 0..n {
        let mut p = k;
        let mut best = a[(k, k)].abs();
        for i in k + 1..n {
            let v = a[(i, k)].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= pivot_tol || best == 0.0 {
            return None;
        }
        if p != k {
            for c in 0..n {
                let tmp = a[(k, c)];
                a[(k, c)] = a[(p, c)];
                a[(p, c)] = tmp;
            }
            let tmp = x[k];
            x[k] = x[p];
            x[p] = tmp;
        }
        let pivot = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / pivot;
            if f == 0.0 {
                continue;
            }
            a[(i, k)] = 0.0;
            for c in k + 1..n {
                a[(i, c)] -= f * a[(k, c)];
            }
            x[i] -= f * x[k];
        }
    }
    for k in (0..n).rev() {
        let mut acc = x[k];
        for c in k + 1..n {
            acc -= a[(k, c)] * x[c];
        }
        x[k] = acc / a[(k, k)];
    }
    if x.is_finite() {
        Some(x)
    } else {
        None
    }
}

// Lanczos approximation, g = 7, matching the classic 9-coefficient table.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler gamma function on (0, 2], accurate to well below 1e-10 relative
/// error there. The gain schedules only ever need this window.
pub fn gamma_fn(z: f64) -> Result<f64, Error> {
    if !(z > 0.0) {
        return Err(Error::DomainError {
            what: "gamma_fn requires z > 0",
            value: z,
        });
    }
    if z > 2.0 {
        return Err(Error::DomainError {
            what: "gamma_fn restricted to (0, 2]",
            value: z,
        });
    }
    Ok(lanczos_gamma(z))
}

fn lanczos_gamma(z: f64) -> f64 {
    let z = z - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let sqrt_two_pi = (2.0 * std::f64::consts::PI).sqrt();
    sqrt_two_pi * t.powf(z + 0.5) * (-t).exp() * acc
}

/// Relative step used by every central-difference check in the crate.
pub const FD_REL_STEP: f64 = 1e-6;

/// Conformable fractional derivative of order `alpha` at `t > 0`:
/// `t^(1-alpha) * f'(t)` with the first derivative taken by central
/// differences. Only valid for 0 < alpha <= 1.
pub fn conformable_deriv(f: impl Fn(f64) -> f64, t: f64, alpha: f64) -> Result<f64, Error> {
    if !(t > 0.0) {
        return Err(Error::DomainError {
            what: "conformable_deriv requires t > 0",
            value: t,
        });
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::DomainError {
            what: "conformable_deriv requires alpha in (0,1]",
            value: alpha,
        });
    }
    let h = FD_REL_STEP * t.abs().max(1.0);
    let fprime = (f(t + h) - f(t - h)) / (2.0 * h);
    Ok(t.powf(1.0 - alpha) * fprime)
}

/// `n` i.i.d. uniform draws on [-1, 1]. Same seed, same stream, on every
/// platform: the generator is ChaCha8 and the u64 -> f64 mapping is the
/// usual 53-bit one.
pub fn seeded_uniform(seed: u64, n: usize) -> Vector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vector::zeros(n);
    for i in 0..n {
        out[i] = next_uniform_sym(&mut rng);
    }
    out
}

/// Uniform on [-1, 1] from the top 53 bits of a u64 draw.
pub fn next_uniform_sym(rng: &mut ChaCha8Rng) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    2.0 * u - 1.0
}
