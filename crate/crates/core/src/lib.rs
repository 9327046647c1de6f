//! Simulation, basic reproduction number and optimal vector control for a
//! dengue host-vector model.
//!
//! Humans move through susceptible, infected and recovered classes; female
//! mosquitoes through an aquatic phase and susceptible and infected adults.
//! Three instruments act on the vector: larvicide `c_A`, adulticide `c_m` and
//! mechanical removal of breeding sites `alpha`.
//!
//! ```
//! use dengue_oc::{integrate, r0, ControlSchedule, ControlVector, DengueModel, InitialState};
//!
//! let model = DengueModel::default();
//! let x0 = InitialState::cape_verde(&model.params);
//! let traj = integrate(&model, &x0, &ControlSchedule::none(365.0), 365.0, 0.05).unwrap();
//! let (_, peak) = traj.peak_infected();
//! assert!(peak > 10.0);
//! assert!(r0(&ControlVector::NONE, &model.params).r0 > 1.0);
//! ```

pub mod contour;
pub mod error;
pub mod model;
pub mod ocp;
pub mod r0;
pub mod simulator;

pub use error::{Error, Result};
pub use model::{
    validate_params, Control, ControlBounds, ControlVector, DengueModel, InitialState, ModelParams,
    State, StateDerivative,
};
pub use ocp::{
    compare_scenarios, evaluate_cost, gradient_fd, solve, CostWeights, OcpSolution, OcpSpec,
    SolverOptions, Termination,
};
pub use r0::{dfe_mosquito_equilibrium, r0, r0_ngm_oracle, r0_sweep, R0Grid, R0Result, SweepAxis};
pub use simulator::{integrate, resample, ControlSchedule, Trajectory};
