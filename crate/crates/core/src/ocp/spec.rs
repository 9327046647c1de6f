use crate::error::{Error, Result};
use crate::model::{Control, ControlVector, DengueModel, InitialState};
use crate::simulator::{ControlSchedule, DEFAULT_HORIZON, DEFAULT_STEP};

pub const DEFAULT_INTERVALS: usize = 28;

/// Weights of the disease and of the three control costs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostWeights {
    /// `gamma_D`, infected humans squared.
    pub disease: f64,
    /// `gamma_S`, adulticide.
    pub adulticide: f64,
    /// `gamma_L`, larvicide.
    pub larvicide: f64,
    /// `gamma_E`, mechanical control.
    pub mechanical: f64,
}

impl CostWeights {
    pub fn equal(w: f64) -> Self {
        Self {
            disease: w,
            adulticide: w,
            larvicide: w,
            mechanical: w,
        }
    }

    fn as_array(&self) -> [f64; 4] {
        [self.disease, self.adulticide, self.larvicide, self.mechanical]
    }
}

impl Default for CostWeights {
    fn default() -> Self {
        Self::equal(0.25)
    }
}

/// A transcribed optimal-control problem.
#[derive(Debug, Clone, PartialEq)]
pub struct OcpSpec {
    pub model: DengueModel,
    pub initial: InitialState,
    pub weights: CostWeights,
    /// Horizon in days.
    pub t_f: f64,
    pub n_intervals: usize,
    /// Integrator step in days.
    pub step: f64,
    /// Use `(I_h / N_h)^2` instead of `I_h^2` in the disease term.
    pub normalize_infected: bool,
}

impl OcpSpec {
    pub fn new(model: DengueModel, initial: InitialState, weights: CostWeights) -> Self {
        Self {
            model,
            initial,
            weights,
            t_f: DEFAULT_HORIZON,
            n_intervals: DEFAULT_INTERVALS,
            step: DEFAULT_STEP,
            normalize_infected: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let w = self.weights.as_array();
        if w.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidProblem(format!("weights {w:?} must be non-negative")));
        }
        if w.iter().all(|v| *v == 0.0) {
            return Err(Error::InvalidProblem("all weights are zero".into()));
        }
        if !(self.t_f > 0.0 && self.t_f.is_finite()) {
            return Err(Error::InvalidProblem(format!("horizon {} must be positive", self.t_f)));
        }
        if self.n_intervals == 0 {
            return Err(Error::InvalidProblem("n_intervals must be at least 1".into()));
        }
        if !(self.step > 0.0 && self.step <= self.t_f / self.n_intervals as f64) {
            return Err(Error::InvalidProblem(format!(
                "step {} must lie in (0, t_f / n_intervals]",
                self.step
            )));
        }
        let report = self.model.params.validate();
        if !report.is_valid() {
            return Err(Error::InvalidParams(report.to_string()));
        }
        self.initial.state().check_nonnegative()
    }

    pub fn dimension(&self) -> usize {
        3 * self.n_intervals
    }

    pub fn interval_length(&self) -> f64 {
        self.t_f / self.n_intervals as f64
    }

    /// Schedule with `u` on every interval of the problem grid.
    pub fn constant_schedule(&self, u: ControlVector) -> Result<ControlSchedule> {
        ControlSchedule::uniform(self.t_f, vec![u; self.n_intervals], &self.model.bounds)
    }

    /// Mid-box constants.
    pub fn default_guess(&self) -> ControlSchedule {
        self.constant_schedule(self.model.bounds.midpoint())
            .expect("midpoint lies inside the bounds")
    }

    pub fn no_control(&self) -> ControlSchedule {
        self.constant_schedule(ControlVector::NONE)
            .expect("no-control values lie inside the bounds")
    }

    pub fn lower_bounds(&self) -> Vec<f64> {
        let b = &self.model.bounds;
        (0..self.n_intervals)
            .flat_map(|_| SLOT.map(|c| b.lower(c)))
            .collect()
    }

    pub fn upper_bounds(&self) -> Vec<f64> {
        let b = &self.model.bounds;
        (0..self.n_intervals)
            .flat_map(|_| SLOT.map(|c| b.upper(c)))
            .collect()
    }

    /// Flattens a schedule on the problem grid into a decision vector.
    pub fn decision_vector(&self, sched: &ControlSchedule) -> Result<Vec<f64>> {
        self.check_grid(sched)?;
        Ok(sched
            .values()
            .iter()
            .flat_map(|u| SLOT.map(|c| u.get(c)))
            .collect())
    }

    /// Inverse of [`OcpSpec::decision_vector`]; values are projected onto the box.
    pub fn schedule_from(&self, z: &[f64]) -> ControlSchedule {
        assert_eq!(z.len(), self.dimension());
        let b = &self.model.bounds;
        let values = z
            .chunks_exact(3)
            .map(|c| {
                b.project(ControlVector {
                    c_a: c[0],
                    c_m: c[1],
                    alpha: c[2],
                })
            })
            .collect();
        ControlSchedule::uniform(self.t_f, values, b).expect("projected values are feasible")
    }

    /// Maps any schedule covering the horizon onto the problem grid by sampling
    /// each interval at its start.
    pub fn project_schedule(&self, sched: &ControlSchedule) -> ControlSchedule {
        let b = &self.model.bounds;
        let h = self.interval_length();
        let values = (0..self.n_intervals)
            .map(|i| b.project(sched.at(i as f64 * h)))
            .collect();
        ControlSchedule::uniform(self.t_f, values, b).expect("projected values are feasible")
    }

    pub(crate) fn check_grid(&self, sched: &ControlSchedule) -> Result<()> {
        let expected = self.no_control();
        let same = sched.len() == self.n_intervals
            && sched
                .edges()
                .iter()
                .zip(expected.edges())
                .all(|(a, b)| (a - b).abs() <= 1e-9 * self.t_f);
        if !same {
            return Err(Error::InvalidSchedule(format!(
                "schedule does not match the {}-interval problem grid",
                self.n_intervals
            )));
        }
        Ok(())
    }
}

/// Order of the controls inside one interval of a decision vector.
pub(crate) const SLOT: [Control; 3] = [Control::Larvicide, Control::Adulticide, Control::Mechanical];
