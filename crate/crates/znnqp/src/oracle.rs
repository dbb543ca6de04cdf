//! Ground-truth KKT points by brute-force active-set enumeration.
//!
//! For each subset of inequality constraints held tight, the
//! equality-constrained stationarity system is solved directly; the first
//! candidate passing primal feasibility and dual nonnegativity wins, with
//! ties broken by objective value then lexicographically smallest subset.
//! Exponential in the inequality count, which is fine at desk scale.

use crate::error::Error;
use crate::numkit::{solve_square, Mat, Vector};
use crate::tvqp::TimeVariantQP;

const FEAS_TOL: f64 = 1e-10;

/// Exact KKT point at one sampled instant.
#[derive(Clone, Debug)]
pub struct OracleSolution {
    pub x_star: Vector,
    pub phi_star: Vector,
    pub varphi_star: Vector,
    /// Bitmask over inequality indices held tight.
    pub active_set: u32,
    pub objective: f64,
    pub t: f64,
}

/// Stacks the oracle solution into the solver's state layout
/// `[x; phi; varphi]`.
pub fn stacked_state(sol: &OracleSolution) -> Vector {
    Vector::concat(&[&sol.x_star, &sol.phi_star, &sol.varphi_star])
}

/// Solves the QP at time `t` by enumerating all 2^p active sets.
pub fn solve_at(problem: &TimeVariantQP, t: f64) -> Result<OracleSolution, Error> {
    let (n, m, p) = (problem.n(), problem.m(), problem.p());
    if p > 24 {
        return Err(Error::DomainError {
            what: "active-set enumeration limited to p <= 24",
            value: p as f64,
        });
    }
    let data = problem.sample(t);
    let mut best: Option<OracleSolution> = None;
    let mut all_singular = true;

    for mask in 0u32..(1u32 << p) {
        let tight: Vec<usize> = (0..p).filter(|i| mask >> i & 1 == 1).collect();
        let k = tight.len();
        let dim = n + m + k;
        let mut kkt = Mat::zeros(dim, dim);
        let mut r = Vector::zeros(dim);
        kkt.set_block(0, 0, &data.h);
        for row in 0..m {
            for col in 0..n {
                kkt[(col, n + row)] = data.a[(row, col)];
                kkt[(n + row, col)] = data.a[(row, col)];
            }
            r[n + row] = data.b[row];
        }
        for (j, &i) in tight.iter().enumerate() {
            for col in 0..n {
                kkt[(col, n + m + j)] = data.c[(i, col)];
                kkt[(n + m + j, col)] = data.c[(i, col)];
            }
            r[n + m + j] = data.d[i];
        }
        for i in 0..n {
            r[i] = -data.rho[i];
        }
        let solved = match solve_square(&kkt, &r) {
            Ok(s) if !s.degenerate => s,
            _ => continue,
        };
        all_singular = false;
        let x = solved.x.slice(0, n);
        let phi = solved.x.slice(n, n + m);
        let mu = solved.x.slice(n + m, dim);
        if mu.iter().any(|v| *v < -FEAS_TOL) {
            continue;
        }
        let cx = data.c.matvec(&x);
        if (0..p).any(|i| cx[i] - data.d[i] > FEAS_TOL) {
            continue;
        }
        let mut varphi = Vector::zeros(p);
        for (j, &i) in tight.iter().enumerate() {
            varphi[i] = mu[j].max(0.0);
        }
        let objective = 0.5 * x.dot(&data.h.matvec(&x)) + data.rho.dot(&x);
        let cand = OracleSolution {
            x_star: x,
            phi_star: phi,
            varphi_star: varphi,
            active_set: mask,
            objective,
            t,
        };
        best = match best {
            None => Some(cand),
            Some(cur) => {
                if cand.objective < cur.objective - 1e-12
                    || ((cand.objective - cur.objective).abs() <= 1e-12
                        && cand.active_set < cur.active_set)
                {
                    Some(cand)
                } else {
                    Some(cur)
                }
            }
        };
    }
    match best {
        Some(sol) => Ok(sol),
        None if all_singular => Err(Error::IllPosed { t }),
        None => Err(Error::Infeasible { t }),
    }
}

/// Oracle solutions along an ascending grid, with the times at which the
/// reported active set changed between adjacent samples.
pub struct SolutionPath {
    pub solutions: Vec<OracleSolution>,
    pub switch_times: Vec<f64>,
}

pub fn solution_path(problem: &TimeVariantQP, t_grid: &[f64]) -> Result<SolutionPath, Error> {
    let mut solutions = Vec::with_capacity(t_grid.len());
    let mut switch_times = Vec::new();
    for &t in t_grid {
        let sol = solve_at(problem, t)?;
        if let Some(prev) = solutions.last() {
            let prev: &OracleSolution = prev;
            if prev.active_set != sol.active_set {
                switch_times.push(t);
            }
        }
        solutions.push(sol);
    }
    Ok(SolutionPath {
        solutions,
        switch_times,
    })
}

/// CSV export: `t, x*..., phi*..., varphi*..., active_mask`.
pub fn path_to_csv(path: &SolutionPath) -> String {
    let mut out = String::new();
    if let Some(first) = path.solutions.first() {
        out.push('t');
        for i in 0..first.x_star.len() {
            out.push_str(&format!(",x{i}"));
        }
        for i in 0..first.phi_star.len() {
            out.push_str(&format!(",phi{i}"));
        }
        for i in 0..first.varphi_star.len() {
            out.push_str(&format!(",varphi{i}"));
        }
        out.push_str(",active_mask\n");
    }
    for sol in &path.solutions {
        out.push_str(&format!("{:.17e}", sol.t));
        for v in sol
            .x_star
            .iter()
            .chain(sol.phi_star.iter())
            .chain(sol.varphi_star.iter())
        {
            out.push_str(&format!(",{v:.17e}"));
        }
        out.push_str(&format!(",{}\n", sol.active_set));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tvqp::{
        benchmark_problem, fb_perturbed, residual, KktState, ProblemData, TimeVariantQP,
    };
    use approx::assert_relative_eq;

    fn toy(rho0: f64) -> TimeVariantQP {
        // min x^2/2 + rho0 * x  s.t.  x <= 1
        TimeVariantQP::new(1, 0, 1, move |_t| ProblemData {
            h: Mat::identity(1),
            rho: Vector::from_slice(&[rho0]),
            a: Mat::zeros(0, 1),
            b: Vector::zeros(0),
            c: Mat::from_rows(1, 1, vec![1.0]).unwrap(),
            d: Vector::from_slice(&[1.0]),
            h_dot: Mat::zeros(1, 1),
            rho_dot: Vector::zeros(1),
            a_dot: Mat::zeros(0, 1),
            b_dot: Vector::zeros(0),
            c_dot: Mat::zeros(1, 1),
            d_dot: Vector::zeros(1),
        })
    }

    #[test]
    fn interior_optimum() {
        let sol = solve_at(&toy(0.0), 0.0).unwrap();
        assert_eq!(sol.active_set, 0);
        assert!(sol.x_star[0].abs() < 1e-12);
        assert!(sol.varphi_star[0].abs() < 1e-12);
    }

    #[test]
    fn boundary_optimum_hand_kkt() {
        // min x^2/2 - 2x s.t. x <= 1: x* = 1, multiplier 1
        let sol = solve_at(&toy(-2.0), 0.0).unwrap();
        assert_eq!(sol.active_set, 1);
        assert_relative_eq!(sol.x_star[0], 1.0, max_relative = 1e-12);
        assert_relative_eq!(sol.varphi_star[0], 1.0, max_relative = 1e-12);
    }

    #[test]
    fn infeasible_equalities() {
        // x = 0 and x = 1 simultaneously
        let problem = TimeVariantQP::new(1, 2, 0, |_t| ProblemData {
            h: Mat::identity(1),
            rho: Vector::zeros(1),
            a: Mat::from_rows(2, 1, vec![1.0, 1.0]).unwrap(),
            b: Vector::from_slice(&[0.0, 1.0]),
            h_dot: Mat::zeros(1, 1),
            rho_dot: Vector::zeros(1),
            a_dot: Mat::zeros(2, 1),
            b_dot: Vector::zeros(2),
            c: Mat::zeros(0, 1),
            d: Vector::zeros(0),
            c_dot: Mat::zeros(0, 1),
            d_dot: Vector::zeros(0),
        });
        assert!(matches!(
            solve_at(&problem, 0.0),
            Err(Error::IllPosed { .. }) | Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn benchmark_fixtures() {
        // frozen outputs, independently cross-checked against a convex
        // programming solver to ~1e-8
        let problem = benchmark_problem();
        let sol = solve_at(&problem, 0.0).unwrap();
        assert!(sol.x_star.norm_inf() < 1e-10);
        assert_relative_eq!(sol.phi_star[0], -1.0, max_relative = 1e-9);
        assert!(sol.objective.abs() < 1e-12);

        let sol = solve_at(&problem, 0.5).unwrap();
        assert_relative_eq!(sol.x_star[0], -0.815_889_677_753_396_8, max_relative = 1e-8);
        assert_relative_eq!(sol.x_star[1], 0.552_009_784_292_041_5, max_relative = 1e-8);
        assert_relative_eq!(
            sol.phi_star[0],
            -1.443_540_909_203_797_4,
            max_relative = 1e-8
        );
        assert_relative_eq!(sol.objective, 0.853_805_515_096_031_8, max_relative = 1e-8);
        assert_eq!(sol.active_set, 0);

        let sol = solve_at(&problem, 1.0).unwrap();
        assert_relative_eq!(sol.x_star[0], 0.114_046_576_292_036_9, max_relative = 1e-8);
        assert_relative_eq!(sol.x_star[1], -1.3, max_relative = 1e-12);
        assert_eq!(sol.active_set, 0b1000);
        assert_relative_eq!(
            sol.varphi_star[3],
            0.089_365_056_635_619_43,
            max_relative = 1e-7
        );
        assert_relative_eq!(sol.objective, 0.630_596_236_163_231_3, max_relative = 1e-8);

        let sol = solve_at(&problem, 2.0).unwrap();
        assert_relative_eq!(sol.x_star[0], -0.824_502_972_933_886_3, max_relative = 1e-8);
        assert_relative_eq!(sol.x_star[1], -0.886_198_410_674_257_5, max_relative = 1e-8);
        assert_relative_eq!(
            sol.phi_star[0],
            0.911_560_189_352_339_5,
            max_relative = 1e-8
        );
    }

    #[test]
    fn oracle_point_satisfies_exact_kkt() {
        // Stationarity and primal feasibility to 1e-8; complementarity with
        // the tau = 0 convention.
        let problem = benchmark_problem();
        for &t in &[0.0, 0.3, 1.0, 1.8, 2.6] {
            let data = problem.sample(t);
            let sol = solve_at(&problem, t).unwrap();
            let mut stat = data.h.matvec(&sol.x_star);
            stat.axpy(1.0, &data.rho);
            stat.axpy(1.0, &data.a.t_matvec(&sol.phi_star));
            stat.axpy(1.0, &data.c.t_matvec(&sol.varphi_star));
            assert!(
                stat.norm_inf() < 1e-8,
                "stationarity at t={t}: {}",
                stat.norm_inf()
            );
            let eq = data.a.matvec(&sol.x_star).sub(&data.b);
            assert!(eq.norm_inf() < 1e-10);
            let slack = data.d.sub(&data.c.matvec(&sol.x_star));
            for i in 0..4 {
                assert!(slack[i] > -1e-10);
                assert!(sol.varphi_star[i] > -1e-10);
                assert!(
                    sol.varphi_star[i] * slack[i] < 1e-8,
                    "complementarity at t={t} row {i}"
                );
            }
        }
    }

    #[test]
    fn oracle_agrees_with_fb_residual() {
        // plugging the oracle point into the smoothed residual leaves only
        // the O(sqrt(tau)) bias on near-active rows
        let problem = benchmark_problem();
        for &t in &[0.0, 0.5, 1.0, 2.0] {
            let sol = solve_at(&problem, t).unwrap();
            let state = KktState {
                y: stacked_state(&sol),
                t,
                tau: 1e-8,
            };
            let eps = residual(&problem, &state).unwrap();
            let d_inf = 1.3;
            assert!(
                eps.norm2() <= 1e-4 * (1.0 + d_inf),
                "t={t}: {}",
                eps.norm2()
            );
        }
        // at t = 0 no constraint is near active and the bias collapses
        let sol = solve_at(&problem, 0.0).unwrap();
        let state = KktState {
            y: stacked_state(&sol),
            t: 0.0,
            tau: 1e-8,
        };
        let eps = residual(&problem, &state).unwrap();
        assert!(eps.norm2() <= 1e-6, "{}", eps.norm2());
    }

    #[test]
    fn static_path_is_constant_and_box_holds() {
        let problem = benchmark_problem();
        let grid: Vec<f64> = (0..=300).map(|i| i as f64 * 0.01).collect();
        let path = solution_path(&problem, &grid).unwrap();
        for sol in &path.solutions {
            assert!(sol.x_star.norm_inf() <= 1.3 + 1e-9);
        }
        // the box genuinely activates somewhere on [0, 3]
        assert!(!path.switch_times.is_empty());

        let frozen = crate::tvqp::frozen_problem(&problem, 0.4);
        let path = solution_path(&frozen, &[0.0, 1.0, 2.0]).unwrap();
        assert!(path.switch_times.is_empty());
        for sol in &path.solutions[1..] {
            assert!(sol.x_star.sub(&path.solutions[0].x_star).norm_inf() < 1e-12);
        }
    }

    #[test]
    fn unique_for_strictly_convex() {
        // On strictly convex instances with inactive constraints, exactly
        // one subset (the empty one) passes both feasibility checks with
        // strictly positive slack margins.
        let problem = toy(0.25);
        let sol = solve_at(&problem, 0.0).unwrap();
        assert_eq!(sol.active_set, 0);
        assert_relative_eq!(sol.x_star[0], -0.25, max_relative = 1e-12);
    }

    #[test]
    fn fb_bias_matches_expansion() {
        // the tau-smoothed complementarity row at an exactly-active pair is
        // -sqrt(tau) at the origin of (m, varphi)
        let v = fb_perturbed(
            &Vector::from_slice(&[0.0]),
            &Vector::from_slice(&[0.0]),
            1e-8,
        )
        .unwrap();
        assert_relative_eq!(v[0], -1e-4, max_relative = 1e-12);
    }
}
