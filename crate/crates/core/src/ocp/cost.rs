use crate::error::Result;
use crate::model::{ControlVector, State};
use crate::ocp::OcpSpec;
use crate::simulator::{integrate, ControlSchedule, Trajectory};

/// Weighted cost split by term.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostBreakdown {
    pub disease: f64,
    pub adulticide: f64,
    pub larvicide: f64,
    pub mechanical: f64,
}

impl CostBreakdown {
    pub fn total(&self) -> f64 {
        self.disease + self.adulticide + self.larvicide + self.mechanical
    }
}

/// Cost of `sched` under `spec`.
///
/// The disease term is integrated by the composite trapezoid rule on the
/// integration grid; the control terms are integrated exactly, interval by
/// interval.
pub fn evaluate_cost(sched: &ControlSchedule, spec: &OcpSpec) -> Result<f64> {
    Ok(evaluate_cost_with_trajectory(sched, spec)?.0.total())
}

pub fn evaluate_cost_with_trajectory(
    sched: &ControlSchedule,
    spec: &OcpSpec,
) -> Result<(CostBreakdown, Trajectory)> {
    let traj = integrate(&spec.model, &spec.initial, sched, spec.t_f, spec.step)?;
    let mut cost = control_cost(sched, 0.0, spec.t_f, spec);
    cost.disease = disease_cost(&traj.times, &traj.states, spec);
    Ok((cost, traj))
}

/// Trapezoid rule for `gamma_D I_h^2` over the given samples.
pub(crate) fn disease_cost(times: &[f64], states: &[State], spec: &OcpSpec) -> f64 {
    let scale = if spec.normalize_infected {
        1.0 / spec.model.params.n_h
    } else {
        1.0
    };
    let f = |x: &State| (x.i_h * scale).powi(2);
    let mut sum = CompensatedSum::default();
    for k in 1..times.len() {
        sum.add(0.5 * (times[k] - times[k - 1]) * (f(&states[k - 1]) + f(&states[k])));
    }
    spec.weights.disease * sum.value()
}

/// Exact integral of the control terms over `[from, to]`.
pub(crate) fn control_cost(sched: &ControlSchedule, from: f64, to: f64, spec: &OcpSpec) -> CostBreakdown {
    let mut out = CostBreakdown::default();
    let edges = sched.edges();
    for (i, u) in sched.values().iter().enumerate() {
        let len = edges[i + 1].min(to) - edges[i].max(from);
        if len > 0.0 {
            add_interval(&mut out, u, len, spec);
        }
    }
    out
}

pub(crate) fn add_interval(out: &mut CostBreakdown, u: &ControlVector, len: f64, spec: &OcpSpec) {
    let w = &spec.weights;
    out.adulticide += w.adulticide * u.c_m * u.c_m * len;
    out.larvicide += w.larvicide * u.c_a * u.c_a * len;
    out.mechanical += w.mechanical * (1.0 - u.alpha) * (1.0 - u.alpha) * len;
}

/// Neumaier summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}
