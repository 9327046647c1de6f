use thiserror::Error;

use crate::simulator::ControlSchedule;

/// Errors produced by the model, the integrator and the optimizer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("control out of bounds: {0}")]
    ControlDomain(String),

    #[error("non-finite input to the right-hand side: {0}")]
    NonFinite(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid control schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("step rejected at t = {time}: component {component} = {value:e} below clip tolerance (step too coarse)")]
    StepRejected {
        time: f64,
        component: &'static str,
        value: f64,
    },

    #[error("integration blew up at t = {time}: non-finite state")]
    BlowUp { time: f64 },

    #[error("mosquito population is not viable under the given controls")]
    NonViable,

    #[error("invalid optimal-control problem: {0}")]
    InvalidProblem(String),

    #[error("scenario `{name}`: {source}")]
    Scenario { name: String, source: Box<Error> },

    #[error("optimizer failed at iteration {iteration}: {source}")]
    Optimizer {
        iteration: usize,
        schedule: Box<ControlSchedule>,
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
