//! Domain types and the right-hand side of the host-vector system.
//!
//! Humans follow an SIR structure, female mosquitoes an aquatic/susceptible/
//! infected (ASI) structure, and the two populations are coupled through
//! bilinear biting incidence.

mod control;
mod params;
mod rhs;
mod state;

pub use control::{Control, ControlBounds, ControlVector, DEFAULT_ALPHA_MIN};
pub use params::{validate_params, ModelParams, ValidationReport, Violation};
pub use rhs::{rhs, rhs_array, DengueModel};
pub use state::{InitialState, State, StateDerivative, COMPARTMENTS};
