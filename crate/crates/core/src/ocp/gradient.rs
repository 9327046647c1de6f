use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ocp::cost::{control_cost, disease_cost};
use crate::ocp::spec::SLOT;
use crate::ocp::OcpSpec;
use crate::simulator::{integrate, integrate_from, ControlSchedule, Trajectory};

/// Finite-difference gradient with respect to the decision vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub values: Vec<f64>,
    /// `true` where the parameter sat within one perturbation of a bound and a
    /// one-sided difference was used.
    pub active_bound: Vec<bool>,
}

impl Gradient {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Central differences on each piecewise-constant control value, one-sided
/// next to a bound. The perturbation is `eps * max(1, |z_i|)`.
pub fn gradient_fd(sched: &ControlSchedule, spec: &OcpSpec, eps: f64) -> Result<Gradient> {
    spec.check_grid(sched)?;
    let traj = integrate(&spec.model, &spec.initial, sched, spec.t_f, spec.step)?;
    gradient_from_trajectory(sched, spec, eps, &traj)
}

/// Same as [`gradient_fd`], reusing the nominal trajectory of `sched`.
///
/// A change on interval `i` leaves everything before its start untouched, so
/// each difference only re-integrates from that breakpoint onward. This is
/// exact: the restarted run reproduces the nominal tail bit for bit.
pub(crate) fn gradient_from_trajectory(
    sched: &ControlSchedule,
    spec: &OcpSpec,
    eps: f64,
    traj: &Trajectory,
) -> Result<Gradient> {
    if !(1e-8..=1e-3).contains(&eps) {
        return Err(Error::InvalidArgument(format!("eps = {eps} outside [1e-8, 1e-3]")));
    }
    let n = sched.len();
    let edges = sched.edges();
    let starts: Vec<usize> = (0..n)
        .map(|i| {
            traj.times
                .iter()
                .position(|&t| t == edges[i])
                .expect("integrator samples every breakpoint")
        })
        .collect();
    let bounds = spec.model.bounds;

    let tail = |i: usize, s: &ControlSchedule| -> Result<f64> {
        let k = starts[i];
        let t0 = edges[i];
        let run = integrate_from(&spec.model, traj.states[k], t0, s, spec.t_f, spec.step)?;
        Ok(disease_cost(&run.times, &run.states, spec) + control_cost(s, t0, spec.t_f, spec).total())
    };
    let nominal_tail = |i: usize| -> f64 {
        let k = starts[i];
        disease_cost(&traj.times[k..], &traj.states[k..], spec)
            + control_cost(sched, edges[i], spec.t_f, spec).total()
    };

    let results: Vec<Result<(f64, bool)>> = (0..3 * n)
        .into_par_iter()
        .map(|idx| {
            let (i, slot) = (idx / 3, idx % 3);
            let control = SLOT[slot];
            let u = sched.values()[i];
            let v = u.get(control);
            let delta = eps * v.abs().max(1.0);
            let (lo, hi) = (bounds.lower(control), bounds.upper(control));
            let perturbed = |value: f64| {
                let mut values = sched.values().to_vec();
                values[i] = u.with(control, value);
                sched.with_values(values)
            };
            if v + delta > hi {
                let minus = tail(i, &perturbed(v - delta))?;
                Ok(((nominal_tail(i) - minus) / delta, true))
            } else if v - delta < lo {
                let plus = tail(i, &perturbed(v + delta))?;
                Ok(((plus - nominal_tail(i)) / delta, true))
            } else {
                let plus = tail(i, &perturbed(v + delta))?;
                let minus = tail(i, &perturbed(v - delta))?;
                Ok(((plus - minus) / (2.0 * delta), false))
            }
        })
        .collect();

    let mut values = Vec::with_capacity(3 * n);
    let mut active_bound = Vec::with_capacity(3 * n);
    for r in results {
        let (g, one_sided) = r?;
        values.push(g);
        active_bound.push(one_sided);
    }
    Ok(Gradient {
        values,
        active_bound,
    })
}
