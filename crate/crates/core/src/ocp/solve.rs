use std::fmt;

use crate::error::{Error, Result};
use crate::ocp::cost::CostBreakdown;
use crate::ocp::gradient::gradient_from_trajectory;
use crate::ocp::{evaluate_cost_with_trajectory, OcpSpec};
use crate::simulator::{ControlSchedule, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iter: usize,
    /// Stop when the projected-gradient norm is at most `tol_rel (1 + |J|)`.
    pub tol_rel: f64,
    /// Relative finite-difference step.
    pub fd_eps: f64,
    /// Sufficient-decrease constant of the Armijo test.
    pub armijo: f64,
    pub max_backtracks: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            tol_rel: 1e-6,
            fd_eps: 1e-6,
            armijo: 1e-4,
            max_backtracks: 60,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Projected-gradient norm under tolerance.
    Converged,
    /// Iteration budget exhausted; the best iterate is returned.
    MaxIter,
    /// The line search could not find a decrease; the best iterate is returned.
    Stalled,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Converged => "converged",
            Termination::MaxIter => "max-iter",
            Termination::Stalled => "stalled",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convergence {
    pub termination: Termination,
    pub projected_gradient_norm: f64,
    pub tolerance: f64,
    /// Last accepted step length.
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OcpSolution {
    pub schedule: ControlSchedule,
    pub trajectory: Trajectory,
    pub objective: f64,
    pub cost: CostBreakdown,
    pub iterations: usize,
    pub convergence: Convergence,
    /// Objective after every accepted iterate, starting with the initial guess.
    pub history: Vec<f64>,
}

/// Minimises the transcribed cost by projected gradient descent.
///
/// Trial steps start from the Barzilai-Borwein length and are halved until the
/// Armijo condition along the projection arc holds, so the objective history is
/// non-increasing and every iterate lies inside the box.
pub fn solve(spec: &OcpSpec, init: &ControlSchedule, opts: &SolverOptions) -> Result<OcpSolution> {
    spec.validate()?;
    let lower = spec.lower_bounds();
    let upper = spec.upper_bounds();
    let project = |z: &mut [f64]| {
        for ((v, lo), hi) in z.iter_mut().zip(&lower).zip(&upper) {
            *v = v.clamp(*lo, *hi);
        }
    };

    let mut z = spec.decision_vector(&spec.project_schedule(init))?;
    project(&mut z);
    let mut sched = spec.schedule_from(&z);
    let fail = |iteration: usize, sched: &ControlSchedule, e: Error| Error::Optimizer {
        iteration,
        schedule: Box::new(sched.clone()),
        source: Box::new(e),
    };

    let (mut cost, mut traj) =
        evaluate_cost_with_trajectory(&sched, spec).map_err(|e| fail(0, &sched, e))?;
    let mut j = cost.total();
    let mut g = gradient_from_trajectory(&sched, spec, opts.fd_eps, &traj)
        .map_err(|e| fail(0, &sched, e))?
        .values;
    let mut history = vec![j];
    let mut step = 0.0_f64;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut termination = Termination::MaxIter;
    let mut pg_norm = projected_gradient_norm(&z, &g, &lower, &upper);
    let mut iterations = 0;

    while iterations < opts.max_iter {
        let tol = opts.tol_rel * (1.0 + j.abs());
        if pg_norm <= tol {
            termination = Termination::Converged;
            break;
        }

        let g_inf = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut trial_step = match &prev {
            Some((dz, dg)) => {
                let ss: f64 = dz.iter().map(|v| v * v).sum();
                let sy: f64 = dz.iter().zip(dg).map(|(a, b)| a * b).sum();
                if sy > 0.0 {
                    ss / sy
                } else {
                    2.0 * step.max(1.0 / g_inf)
                }
            }
            None => 1.0 / g_inf,
        };

        let mut accepted = None;
        for _ in 0..=opts.max_backtracks {
            let mut trial: Vec<f64> = z.iter().zip(&g).map(|(v, d)| v - trial_step * d).collect();
            project(&mut trial);
            let decrease: f64 = trial.iter().zip(&z).zip(&g).map(|((a, b), d)| d * (a - b)).sum();
            if decrease == 0.0 {
                break;
            }
            let trial_sched = spec.schedule_from(&trial);
            // an integration failure at a trial point only shortens the step
            if let Ok((c, t)) = evaluate_cost_with_trajectory(&trial_sched, spec) {
                if c.total() <= j + opts.armijo * decrease {
                    accepted = Some((trial, trial_sched, c, t));
                    break;
                }
            }
            trial_step *= 0.5;
        }

        let Some((z_new, sched_new, cost_new, traj_new)) = accepted else {
            termination = Termination::Stalled;
            break;
        };
        iterations += 1;
        let g_new = gradient_from_trajectory(&sched_new, spec, opts.fd_eps, &traj_new)
            .map_err(|e| fail(iterations, &sched_new, e))?
            .values;
        let dz: Vec<f64> = z_new.iter().zip(&z).map(|(a, b)| a - b).collect();
        let dg: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        prev = Some((dz, dg));
        step = trial_step;
        z = z_new;
        sched = sched_new;
        cost = cost_new;
        traj = traj_new;
        j = cost.total();
        g = g_new;
        history.push(j);
        pg_norm = projected_gradient_norm(&z, &g, &lower, &upper);
    }
    if termination == Termination::MaxIter && pg_norm <= opts.tol_rel * (1.0 + j.abs()) {
        termination = Termination::Converged;
    }

    Ok(OcpSolution {
        schedule: sched,
        trajectory: traj,
        objective: j,
        cost,
        iterations,
        convergence: Convergence {
            termination,
            projected_gradient_norm: pg_norm,
            tolerance: opts.tol_rel * (1.0 + j.abs()),
            step,
        },
        history,
    })
}

/// Euclidean norm of the gradient restricted to directions that stay feasible.
pub(crate) fn projected_gradient_norm(z: &[f64], g: &[f64], lower: &[f64], upper: &[f64]) -> f64 {
    z.iter()
        .zip(g)
        .zip(lower.iter().zip(upper))
        .map(|((&v, &d), (&lo, &hi))| {
            if v <= lo {
                d.min(0.0)
            } else if v >= hi {
                d.max(0.0)
            } else {
                d
            }
        })
        .map(|d| d * d)
        .sum::<f64>()
        .sqrt()
}
