//! Time-variant QP problem model and the smoothed-complementarity KKT
//! system built from it.
//!
//! A problem is `min x'H(t)x/2 + rho(t)'x  s.t.  A(t)x = b(t), C(t)x <= d(t)`.
//! The KKT conditions are rewritten as one vector equation `f(y, t) = 0` in
//! the stacked variable `y = [x; phi; varphi]` (primal, equality multipliers,
//! inequality multipliers), with the complementarity rows smoothed by the
//! perturbed Fischer-Burmeister function. `assemble_blocks` produces the
//! coefficient blocks of the exact time-derivative identity
//! `d/dt f = M(t) y' + N(t) y + sigma(t)` that the neural models integrate.

use crate::error::Error;
use crate::numkit::{Mat, Vector};

/// One sample of the problem data and its time derivatives.
#[derive(Clone, Debug)]
pub struct ProblemData {
    pub h: Mat,
    pub rho: Vector,
    pub a: Mat,
    pub b: Vector,
    pub c: Mat,
    pub d: Vector,
    pub h_dot: Mat,
    pub rho_dot: Vector,
    pub a_dot: Mat,
    pub b_dot: Vector,
    pub c_dot: Mat,
    pub d_dot: Vector,
}

type Sampler = dyn Fn(f64) -> ProblemData + Send + Sync;

/// Time-variant QP described by a re-entrant sampler.
pub struct TimeVariantQP {
    n: usize,
    m: usize,
    p: usize,
    sampler: Box<Sampler>,
}

impl TimeVariantQP {
    pub fn new(
        n: usize,
        m: usize,
        p: usize,
        sampler: impl Fn(f64) -> ProblemData + Send + Sync + 'static,
    ) -> Self {
        TimeVariantQP {
            n,
            m,
            p,
            sampler: Box::new(sampler),
        }
    }

    /// Wraps a values-only sampler, supplying the time derivatives by
    /// central differences with relative step 1e-6.
    pub fn from_value_sampler(
        n: usize,
        m: usize,
        p: usize,
        values: impl Fn(f64) -> (Mat, Vector, Mat, Vector, Mat, Vector) + Send + Sync + 'static,
    ) -> Self {
        let sampler = move |t: f64| {
            let (h, rho, a, b, c, d) = values(t);
            let step = crate::numkit::FD_REL_STEP * t.abs().max(1.0);
            let (hp, rp, ap, bp, cp, dp) = values(t + step);
            let (hm, rm, am, bm, cm, dm) = values(t - step);
            let inv = 1.0 / (2.0 * step);
            let mdiff = |plus: &Mat, minus: &Mat| {
                let mut out = Mat::zeros(plus.rows(), plus.cols());
                for r in 0..plus.rows() {
                    for col in 0..plus.cols() {
                        out[(r, col)] = (plus[(r, col)] - minus[(r, col)]) * inv;
                    }
                }
                out
            };
            ProblemData {
                h_dot: mdiff(&hp, &hm),
                rho_dot: rp.sub(&rm).scale(inv),
                a_dot: mdiff(&ap, &am),
                b_dot: bp.sub(&bm).scale(inv),
                c_dot: mdiff(&cp, &cm),
                d_dot: dp.sub(&dm).scale(inv),
                h,
                rho,
                a,
                b,
                c,
                d,
            }
        };
        TimeVariantQP {
            n,
            m,
            p,
            sampler: Box::new(sampler),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n + self.m + self.p
    }

    pub fn sample(&self, t: f64) -> ProblemData {
        (self.sampler)(t)
    }

    /// Advisory diagnostic: smallest-eigenvalue estimate of H (power
    /// iteration on a shifted matrix) and row ranks of A and C at `t`.
    pub fn validate_at(&self, t: f64) -> ProblemReport {
        let data = self.sample(t);
        let h_min_eig = min_eig_estimate(&data.h);
        ProblemReport {
            h_min_eig,
            h_psd: h_min_eig >= -1e-9,
            a_full_row_rank: row_rank(&data.a) == self.m,
            c_full_row_rank: row_rank(&data.c) == self.p,
        }
    }
}

/// Advisory problem health report; violations are surfaced, not fatal.
#[derive(Clone, Copy, Debug)]
pub struct ProblemReport {
    pub h_min_eig: f64,
    pub h_psd: bool,
    pub a_full_row_rank: bool,
    pub c_full_row_rank: bool,
}

fn min_eig_estimate(h: &Mat) -> f64 {
    let n = h.rows();
    if n == 0 {
        return 0.0;
    }
    // power iteration on s*I - H with s = max row sum bound
    let mut s = 0.0f64;
    for r in 0..n {
        s = s.max(h.row(r).iter().map(|v| v.abs()).sum());
    }
    let mut v = Vector::from_vec((0..n).map(|i| 1.0 + (i as f64) * 0.3).collect());
    let mut lam = 0.0;
    for _ in 0..200 {
        let hv = h.matvec(&v);
        let mut w = v.scale(s);
        w.axpy(-1.0, &hv);
        let nw = w.norm2();
        if nw == 0.0 {
            return s;
        }
        v = w.scale(1.0 / nw);
        lam = nw;
    }
    s - lam
}

fn row_rank(m: &Mat) -> usize {
    // Gaussian elimination with partial pivoting over the rows.
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut rank = 0;
    let mut r0 = 0;
    for c in 0..cols {
        let mut p = r0;
        let mut best = 0.0;
        for r in r0..rows {
            if a[(r, c)].abs() > best {
                best = a[(r, c)].abs();
                p = r;
            }
        }
        if best < 1e-10 {
            continue;
        }
        for cc in 0..cols {
            let tmp = a[(r0, cc)];
            a[(r0, cc)] = a[(p, cc)];
            a[(p, cc)] = tmp;
        }
        for r in r0 + 1..rows {
            let f = a[(r, c)] / a[(r0, c)];
            for cc in 0..cols {
                a[(r, cc)] -= f * a[(r0, cc)];
            }
        }
        rank += 1;
        r0 += 1;
        if r0 == rows {
            break;
        }
    }
    rank
}

/// Stacked primal-dual state `y = [x; phi; varphi]` at time `t` with the
/// complementarity perturbation `tau`.
#[derive(Clone, Debug)]
pub struct KktState {
    pub y: Vector,
    pub t: f64,
    pub tau: f64,
}

impl KktState {
    pub fn new(y: Vector, t: f64, tau: f64) -> Result<Self, Error> {
        if !(tau > 0.0) {
            return Err(Error::DomainError {
                what: "tau must be positive",
                value: tau,
            });
        }
        Ok(KktState { y, t, tau })
    }

    pub fn x(&self, problem: &TimeVariantQP) -> Vector {
        self.y.slice(0, problem.n())
    }

    pub fn phi(&self, problem: &TimeVariantQP) -> Vector {
        self.y.slice(problem.n(), problem.n() + problem.m())
    }

    pub fn varphi(&self, problem: &TimeVariantQP) -> Vector {
        self.y.slice(problem.n() + problem.m(), problem.dim())
    }
}

/// Coefficient blocks of the KKT residual and its time derivative.
#[derive(Clone, Debug)]
pub struct KktBlocks {
    pub p: Mat,
    pub q: Vector,
    pub m: Mat,
    pub n: Mat,
    pub sigma: Vector,
    pub pi1: Vector,
    pub pi2: Vector,
    pub m_vec: Vector,
    pub n_vec: Vector,
    /// Set when some n_vec entry had to be floored at sqrt(tau).
    pub degenerate: bool,
}

/// Perturbed Fischer-Burmeister function, element-wise:
/// `u + v - sqrt(u*u + v*v + tau)`.
pub fn fb_perturbed(u: &Vector, v: &Vector, tau: f64) -> Result<Vector, Error> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            what: "fb_perturbed operands",
            expected: u.len(),
            got: v.len(),
        });
    }
    if !(tau > 0.0) {
        return Err(Error::DomainError {
            what: "fb_perturbed tau must be positive",
            value: tau,
        });
    }
    let mut out = Vector::zeros(u.len());
    for i in 0..u.len() {
        out[i] = u[i] + v[i] - (u[i] * u[i] + v[i] * v[i] + tau).sqrt();
    }
    Ok(out)
}

fn check_state(problem: &TimeVariantQP, state: &KktState) -> Result<(), Error> {
    if state.y.len() != problem.dim() {
        return Err(Error::DimensionMismatch {
            what: "state length",
            expected: problem.dim(),
            got: state.y.len(),
        });
    }
    Ok(())
}

/// KKT residual `f(y, t)`: stationarity rows, equality rows, and the
/// FB-smoothed complementarity rows.
pub fn residual(problem: &TimeVariantQP, state: &KktState) -> Result<Vector, Error> {
    check_state(problem, state)?;
    let data = problem.sample(state.t);
    residual_from(problem, &data, state)
}

/// Same as [`residual`] but reusing an already-sampled `ProblemData`.
pub fn residual_from(
    problem: &TimeVariantQP,
    data: &ProblemData,
    state: &KktState,
) -> Result<Vector, Error> {
    check_state(problem, state)?;
    let x = state.x(problem);
    let phi = state.phi(problem);
    let varphi = state.varphi(problem);

    let mut e1 = data.h.matvec(&x);
    e1.axpy(1.0, &data.rho);
    e1.axpy(1.0, &data.a.t_matvec(&phi));
    e1.axpy(1.0, &data.c.t_matvec(&varphi));

    let e2 = data.a.matvec(&x).sub(&data.b);

    let m_vec = data.d.sub(&data.c.matvec(&x));
    let e3 = fb_perturbed(&m_vec, &varphi, state.tau)?;

    Ok(Vector::concat(&[&e1, &e2, &e3]))
}

/// Builds the M, N, sigma blocks (and P, q) of the KKT system at the
/// current state.
pub fn assemble_blocks(problem: &TimeVariantQP, state: &KktState) -> Result<KktBlocks, Error> {
    check_state(problem, state)?;
    let data = problem.sample(state.t);
    assemble_blocks_from(problem, &data, state)
}

/// Same as [`assemble_blocks`] but reusing an already-sampled `ProblemData`.
pub fn assemble_blocks_from(
    problem: &TimeVariantQP,
    data: &ProblemData,
    state: &KktState,
) -> Result<KktBlocks, Error> {
    check_state(problem, state)?;
    let (n, m, p) = (problem.n(), problem.m(), problem.p());
    let dim = problem.dim();
    let x = state.x(problem);
    let varphi = state.varphi(problem);

    let m_vec = data.d.sub(&data.c.matvec(&x));
    let sqrt_tau = state.tau.sqrt();
    let mut n_vec = Vector::zeros(p);
    let mut degenerate = false;
    for i in 0..p {
        let raw = (m_vec[i] * m_vec[i] + varphi[i] * varphi[i] + state.tau).sqrt();
        if raw < sqrt_tau * (1.0 - 1e-9) {
            degenerate = true;
        }
        n_vec[i] = raw.max(sqrt_tau);
    }
    let mut pi1 = Vector::zeros(p);
    let mut pi2 = Vector::zeros(p);
    for i in 0..p {
        pi1[i] = m_vec[i] / n_vec[i];
        pi2[i] = varphi[i] / n_vec[i];
    }

    // P = [H A' C'; A 0 0; -C 0 I],  q = [rho; -b; d - n]
    let mut pmat = Mat::zeros(dim, dim);
    pmat.set_block(0, 0, &data.h);
    pmat.set_block(0, n, &data.a.transpose());
    pmat.set_block(0, n + m, &data.c.transpose());
    pmat.set_block(n, 0, &data.a);
    pmat.set_block(n + m, 0, &data.c.scale(-1.0));
    pmat.set_block(n + m, n + m, &Mat::identity(p));
    let q = Vector::concat(&[&data.rho, &data.b.scale(-1.0), &data.d.sub(&n_vec)]);

    // M = [H A' C'; A 0 0; (Pi1 - I) C 0 I - Pi2]
    let mut mmat = Mat::zeros(dim, dim);
    mmat.set_block(0, 0, &data.h);
    mmat.set_block(0, n, &data.a.transpose());
    mmat.set_block(0, n + m, &data.c.transpose());
    mmat.set_block(n, 0, &data.a);
    for i in 0..p {
        for c in 0..n {
            mmat[(n + m + i, c)] = (pi1[i] - 1.0) * data.c[(i, c)];
        }
        mmat[(n + m + i, n + m + i)] = 1.0 - pi2[i];
    }

    // N = [H' A'' ... ] pattern with dotted data; bottom-right block is zero
    let mut nmat = Mat::zeros(dim, dim);
    nmat.set_block(0, 0, &data.h_dot);
    nmat.set_block(0, n, &data.a_dot.transpose());
    nmat.set_block(0, n + m, &data.c_dot.transpose());
    nmat.set_block(n, 0, &data.a_dot);
    for i in 0..p {
        for c in 0..n {
            nmat[(n + m + i, c)] = (pi1[i] - 1.0) * data.c_dot[(i, c)];
        }
    }

    // sigma = [rho_dot; -b_dot; (I - Pi1) d_dot]
    let mut sig3 = Vector::zeros(p);
    for i in 0..p {
        sig3[i] = (1.0 - pi1[i]) * data.d_dot[i];
    }
    let sigma = Vector::concat(&[&data.rho_dot, &data.b_dot.scale(-1.0), &sig3]);

    Ok(KktBlocks {
        p: pmat,
        q,
        m: mmat,
        n: nmat,
        sigma,
        pi1,
        pi2,
        m_vec,
        n_vec,
        degenerate,
    })
}

/// Explicit time partial of the residual holding y fixed: `N y + sigma`.
pub fn partial_time_residual(blocks: &KktBlocks, y: &Vector) -> Result<Vector, Error> {
    if y.len() != blocks.n.cols() {
        return Err(Error::DimensionMismatch {
            what: "partial_time_residual state",
            expected: blocks.n.cols(),
            got: y.len(),
        });
    }
    let mut out = blocks.n.matvec(y);
    out.axpy(1.0, &blocks.sigma);
    Ok(out)
}

/// The rotating-coefficient two-variable benchmark problem used throughout
/// the test suite and the shipped presets: box-constrained, one moving
/// equality, oscillating cost.
pub fn benchmark_problem() -> TimeVariantQP {
    TimeVariantQP::new(2, 1, 4, |t| {
        let h = Mat::from_rows(
            2,
            2,
            vec![
                t.sin() / 4.0 + 1.0,
                t.cos() / 2.0,
                t.cos() / 2.0,
                t.cos() / 4.0 + 1.0,
            ],
        )
        .unwrap();
        let rho = Vector::from_slice(&[(3.0 * t).cos(), (3.0 * t).sin()]);
        let a = Mat::from_rows(1, 2, vec![(4.0 * t).cos(), (4.0 * t).sin()]).unwrap();
        let b = Vector::from_slice(&[(2.0 * t).sin()]);
        let c = Mat::from_rows(4, 2, vec![1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0]).unwrap();
        let d = Vector::from_slice(&[1.3, 1.3, 1.3, 1.3]);
        let h_dot = Mat::from_rows(
            2,
            2,
            vec![
                t.cos() / 4.0,
                -t.sin() / 2.0,
                -t.sin() / 2.0,
                -t.sin() / 4.0,
            ],
        )
        .unwrap();
        let rho_dot = Vector::from_slice(&[-3.0 * (3.0 * t).sin(), 3.0 * (3.0 * t).cos()]);
        let a_dot =
            Mat::from_rows(1, 2, vec![-4.0 * (4.0 * t).sin(), 4.0 * (4.0 * t).cos()]).unwrap();
        let b_dot = Vector::from_slice(&[2.0 * (2.0 * t).cos()]);
        ProblemData {
            h,
            rho,
            a,
            b,
            c,
            d,
            h_dot,
            rho_dot,
            a_dot,
            b_dot,
            c_dot: Mat::zeros(4, 2),
            d_dot: Vector::zeros(4),
        }
    })
}

/// Variant of [`benchmark_problem`] with a wide box (never active) and the
/// time frequencies scaled by `speed`. With inactive inequalities the KKT
/// root stays smooth, which is what the Lyapunov-functional checks need.
pub fn smooth_benchmark_problem(speed: f64) -> TimeVariantQP {
    TimeVariantQP::new(2, 1, 4, move |t| {
        let s = speed * t;
        let h = Mat::from_rows(
            2,
            2,
            vec![
                s.sin() / 4.0 + 1.0,
                s.cos() / 2.0,
                s.cos() / 2.0,
                s.cos() / 4.0 + 1.0,
            ],
        )
        .unwrap();
        let rho = Vector::from_slice(&[(3.0 * s).cos(), (3.0 * s).sin()]);
        let a = Mat::from_rows(1, 2, vec![(4.0 * s).cos(), (4.0 * s).sin()]).unwrap();
        let b = Vector::from_slice(&[(2.0 * s).sin()]);
        let c = Mat::from_rows(4, 2, vec![1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0]).unwrap();
        let d = Vector::from_slice(&[2.6, 2.6, 2.6, 2.6]);
        let h_dot = Mat::from_rows(
            2,
            2,
            vec![
                speed * s.cos() / 4.0,
                -speed * s.sin() / 2.0,
                -speed * s.sin() / 2.0,
                -speed * s.sin() / 4.0,
            ],
        )
        .unwrap();
        let rho_dot = Vector::from_slice(&[
            -3.0 * speed * (3.0 * s).sin(),
            3.0 * speed * (3.0 * s).cos(),
        ]);
        let a_dot = Mat::from_rows(
            1,
            2,
            vec![
                -4.0 * speed * (4.0 * s).sin(),
                4.0 * speed * (4.0 * s).cos(),
            ],
        )
        .unwrap();
        let b_dot = Vector::from_slice(&[2.0 * speed * (2.0 * s).cos()]);
        ProblemData {
            h,
            rho,
            a,
            b,
            c,
            d,
            h_dot,
            rho_dot,
            a_dot,
            b_dot,
            c_dot: Mat::zeros(4, 2),
            d_dot: Vector::zeros(4),
        }
    })
}

/// Freezes a problem at time `t0`: constant data, zero derivatives.
pub fn frozen_problem(problem: &TimeVariantQP, t0: f64) -> TimeVariantQP {
    let data = problem.sample(t0);
    let (n, m, p) = (problem.n(), problem.m(), problem.p());
    TimeVariantQP::new(n, m, p, move |_t| ProblemData {
        h: data.h.clone(),
        rho: data.rho.clone(),
        a: data.a.clone(),
        b: data.b.clone(),
        c: data.c.clone(),
        d: data.d.clone(),
        h_dot: Mat::zeros(n, n),
        rho_dot: Vector::zeros(n),
        a_dot: Mat::zeros(m, n),
        b_dot: Vector::zeros(m),
        c_dot: Mat::zeros(p, n),
        d_dot: Vector::zeros(p),
    })
}
