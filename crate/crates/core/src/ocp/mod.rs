//! Quadratic-cost optimal vector control by control-vector parameterisation.
//!
//! Each control is piecewise constant on `n_intervals` equal intervals of the
//! horizon, which turns the problem into a bound-constrained minimisation over
//! `3 n_intervals` numbers. Decision vectors are laid out interval by interval
//! as `[c_A, c_m, alpha]`.

mod compare;
mod cost;
mod gradient;
mod solve;
mod spec;

pub use compare::{compare_scenarios, ScenarioRow};
pub use cost::{evaluate_cost, evaluate_cost_with_trajectory, CostBreakdown};
pub use gradient::{gradient_fd, Gradient};
pub use solve::{solve, Convergence, OcpSolution, SolverOptions, Termination};
pub use spec::{CostWeights, OcpSpec, DEFAULT_INTERVALS};
