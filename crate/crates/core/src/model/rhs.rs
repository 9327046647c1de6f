use crate::error::{Error, Result};
use crate::model::{ControlBounds, ControlVector, ModelParams, State, StateDerivative, COMPARTMENTS};

/// Parameters and control bounds of one model instance.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DengueModel {
    pub params: ModelParams,
    pub bounds: ControlBounds,
}

impl DengueModel {
    pub fn new(params: ModelParams, bounds: ControlBounds) -> Result<Self> {
        let report = params.validate();
        if !report.is_valid() {
            return Err(Error::InvalidParams(report.to_string()));
        }
        Ok(Self { params, bounds })
    }

    /// Evaluates the six right-hand sides at `(t, x, u)`.
    ///
    /// The system is autonomous; `t` is accepted for the time-varying control
    /// case, where `u` is the control in force at `t`.
    pub fn rhs(&self, _t: f64, x: &State, u: &ControlVector) -> Result<StateDerivative> {
        for (name, v) in COMPARTMENTS.iter().zip(x.to_array()) {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("{name} = {v}")));
            }
        }
        for (name, v) in [("c_A", u.c_a), ("c_m", u.c_m), ("alpha", u.alpha)] {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("{name} = {v}")));
            }
        }
        self.bounds.check(u)?;
        Ok(StateDerivative::from_array(rhs_array(
            &x.to_array(),
            u,
            &self.params,
        )))
    }
}

/// Checked evaluation with explicit parameters and bounds.
pub fn rhs(
    t: f64,
    x: &State,
    u: &ControlVector,
    p: &ModelParams,
    bounds: &ControlBounds,
) -> Result<StateDerivative> {
    DengueModel {
        params: *p,
        bounds: *bounds,
    }
    .rhs(t, x, u)
}

/// Unchecked right-hand side on raw arrays, term by term as the model is written.
#[inline]
pub fn rhs_array(x: &[f64; 6], u: &ControlVector, p: &ModelParams) -> [f64; 6] {
    let [s_h, i_h, r_h, a_m, s_m, i_m] = *x;

    let force_on_humans = p.b * p.beta_mh * i_m / p.n_h;
    let force_on_mosquitoes = p.b * p.beta_hm * i_h / p.n_h;
    let capacity = u.alpha * p.k * p.n_h;

    let ds_h = p.mu_h * p.n_h - (force_on_humans + p.mu_h) * s_h;
    let di_h = force_on_humans * s_h - (p.eta_h + p.mu_h) * i_h;
    let dr_h = p.eta_h * i_h - p.mu_h * r_h;
    let da_m = p.phi * (1.0 - a_m / capacity) * (s_m + i_m) - (p.eta_a + p.mu_a + u.c_a) * a_m;
    let ds_m = p.eta_a * a_m - (force_on_mosquitoes + p.mu_m + u.c_m) * s_m;
    let di_m = force_on_mosquitoes * s_m - (p.mu_m + u.c_m) * i_m;

    [ds_h, di_h, dr_h, da_m, ds_m, di_m]
}
