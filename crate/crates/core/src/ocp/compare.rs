use crate::error::{Error, Result};
use crate::ocp::cost::{control_cost, disease_cost, CompensatedSum};
use crate::ocp::OcpSpec;
use crate::simulator::{integrate, ControlSchedule};

/// Outcome of one named schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRow {
    pub name: String,
    pub cost: f64,
    pub peak_infected: f64,
    pub peak_time: f64,
    /// `int eta_h I_h dt`, humans passing through the infected class.
    pub total_infections: f64,
}

/// Integrates every schedule on the spec's grid and reports rows in input order.
pub fn compare_scenarios(spec: &OcpSpec, scheds: &[(String, ControlSchedule)]) -> Result<Vec<ScenarioRow>> {
    scheds
        .iter()
        .map(|(name, sched)| {
            let wrap = |e: Error| Error::Scenario {
                name: name.clone(),
                source: Box::new(e),
            };
            let traj = integrate(&spec.model, &spec.initial, sched, spec.t_f, spec.step).map_err(wrap)?;
            let cost = disease_cost(&traj.times, &traj.states, spec)
                + control_cost(sched, 0.0, spec.t_f, spec).total();
            let (peak_time, peak_infected) = traj.peak_infected();
            let eta_h = spec.model.params.eta_h;
            let mut total = CompensatedSum::default();
            for k in 1..traj.len() {
                let dt = traj.times[k] - traj.times[k - 1];
                total.add(0.5 * dt * eta_h * (traj.states[k - 1].i_h + traj.states[k].i_h));
            }
            Ok(ScenarioRow {
                name: name.clone(),
                cost,
                peak_infected,
                peak_time,
                total_infections: total.value(),
            })
        })
        .collect()
}
