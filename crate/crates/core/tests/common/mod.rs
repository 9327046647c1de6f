#![allow(dead_code)]

use dengue_oc::ocp::evaluate_cost;
use dengue_oc::{ControlVector, CostWeights, DengueModel, Error, InitialState, ModelParams, OcpSpec};

pub fn default_problem(weights: CostWeights) -> OcpSpec {
    let model = DengueModel::default();
    OcpSpec::new(model, InitialState::cape_verde(&ModelParams::default()), weights)
}

/// Cost of a constant policy, halving the step until the fixed-step run is
/// stable. Returns the cost and the step that was needed.
pub fn constant_cost_refined(spec: &OcpSpec, u: ControlVector) -> (f64, f64) {
    let mut s = spec.clone();
    let sched = s.constant_schedule(u).unwrap();
    for _ in 0..8 {
        match evaluate_cost(&sched, &s) {
            Ok(j) => return (j, s.step),
            Err(Error::StepRejected { .. } | Error::BlowUp { .. }) => s.step *= 0.5,
            Err(e) => panic!("{e}"),
        }
    }
    panic!("no stable step for {u:?}");
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
        .collect()
}

pub fn time_average(values: &[ControlVector], f: impl Fn(&ControlVector) -> f64) -> f64 {
    values.iter().map(f).sum::<f64>() / values.len() as f64
}
