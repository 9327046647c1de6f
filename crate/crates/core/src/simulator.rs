//! Fixed-step RK4 integration under piecewise-constant control schedules.

use crate::error::{Error, Result};
use crate::model::{
    rhs_array, ControlBounds, ControlVector, DengueModel, InitialState, ModelParams, State,
    COMPARTMENTS,
};

/// Default integration step in days.
pub const DEFAULT_STEP: f64 = 0.05;
/// Default horizon in days.
pub const DEFAULT_HORIZON: f64 = 365.0;

/// Piecewise-constant controls on right-open intervals `[edges[i], edges[i+1])`.
///
/// The last interval is closed at the end so that the schedule covers `[0, t_f]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSchedule {
    edges: Vec<f64>,
    values: Vec<ControlVector>,
}

impl ControlSchedule {
    /// `edges` has one more entry than `values`, starts at 0 and increases strictly.
    pub fn new(edges: Vec<f64>, values: Vec<ControlVector>, bounds: &ControlBounds) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSchedule("no control intervals".into()));
        }
        if edges.len() != values.len() + 1 {
            return Err(Error::InvalidSchedule(format!(
                "{} edges for {} intervals",
                edges.len(),
                values.len()
            )));
        }
        if edges[0] != 0.0 {
            return Err(Error::InvalidSchedule(format!(
                "schedule starts at {} instead of 0",
                edges[0]
            )));
        }
        if edges.iter().any(|t| !t.is_finite()) || edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSchedule(
                "breakpoints must be finite and strictly increasing".into(),
            ));
        }
        for (i, u) in values.iter().enumerate() {
            bounds
                .check(u)
                .map_err(|e| Error::InvalidSchedule(format!("interval {i}: {e}")))?;
        }
        Ok(Self { edges, values })
    }

    /// A single interval holding `u` over `[0, t_f]`.
    pub fn constant(u: ControlVector, t_f: f64, bounds: &ControlBounds) -> Result<Self> {
        Self::new(vec![0.0, t_f], vec![u], bounds)
    }

    /// `values.len()` equal intervals over `[0, t_f]`.
    pub fn uniform(t_f: f64, values: Vec<ControlVector>, bounds: &ControlBounds) -> Result<Self> {
        if !(t_f > 0.0 && t_f.is_finite()) {
            return Err(Error::InvalidSchedule(format!("horizon {t_f} must be positive")));
        }
        let n = values.len();
        let edges = (0..=n)
            .map(|i| if i == n { t_f } else { t_f * i as f64 / n as f64 })
            .collect();
        Self::new(edges, values, bounds)
    }

    /// No control over `[0, t_f]`.
    pub fn none(t_f: f64) -> Self {
        Self {
            edges: vec![0.0, t_f],
            values: vec![ControlVector::NONE],
        }
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn values(&self) -> &[ControlVector] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn end(&self) -> f64 {
        *self.edges.last().expect("schedule has edges")
    }

    /// Index of the interval in force at `t`.
    pub fn interval_index(&self, t: f64) -> usize {
        let upper = self.edges.partition_point(|&e| e <= t);
        upper.saturating_sub(1).min(self.values.len() - 1)
    }

    /// Control in force at `t`.
    pub fn at(&self, t: f64) -> ControlVector {
        self.values[self.interval_index(t)]
    }

    /// Same breakpoints, different values.
    pub fn with_values(&self, values: Vec<ControlVector>) -> Self {
        assert_eq!(values.len(), self.values.len());
        Self {
            edges: self.edges.clone(),
            values,
        }
    }
}

/// States and controls sampled at every accepted integration step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub controls: Vec<ControlVector>,
    pub params: ModelParams,
    pub schedule: ControlSchedule,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> State {
        *self.states.last().expect("trajectory is never empty")
    }

    /// Time series of one compartment (`0..6`, see [`COMPARTMENTS`]).
    pub fn column(&self, index: usize) -> Vec<f64> {
        self.states.iter().map(|x| x[index]).collect()
    }

    /// `(time, value)` of the largest sampled `I_h`.
    pub fn peak_infected(&self) -> (f64, f64) {
        self.times
            .iter()
            .zip(&self.states)
            .map(|(&t, x)| (t, x.i_h))
            .fold((0.0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
    }

    /// `max_t |S_h + I_h + R_h - N_h|`.
    pub fn conservation_residual(&self) -> f64 {
        self.states
            .iter()
            .map(|x| (x.humans() - self.params.n_h).abs())
            .fold(0.0, f64::max)
    }
}

/// Integrates from `x0` over `[0, t_f]` with classical RK4.
///
/// Every schedule interval is split into equal substeps no longer than `h`, so
/// the integrator lands exactly on each breakpoint and never averages a control
/// switch. Post-step components in `[-clip_tol, 0)` are clipped to zero, where
/// `clip_tol = 1e-9 max(N_h, k N_h)`; anything more negative rejects the step.
pub fn integrate(
    model: &DengueModel,
    x0: &InitialState,
    schedule: &ControlSchedule,
    t_f: f64,
    h: f64,
) -> Result<Trajectory> {
    integrate_from(model, x0.state(), 0.0, schedule, t_f, h)
}

/// Same as [`integrate`], starting from `x` at a schedule breakpoint `t0`.
///
/// Starting from a sample of an earlier run at one of its breakpoints
/// reproduces that run's tail bit for bit.
pub fn integrate_from(
    model: &DengueModel,
    x: State,
    t0: f64,
    schedule: &ControlSchedule,
    t_f: f64,
    h: f64,
) -> Result<Trajectory> {
    if !(t_f > 0.0 && t_f.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon {t_f} must be positive")));
    }
    if !(h > 0.0 && h <= t_f) {
        return Err(Error::InvalidArgument(format!("step {h} must lie in (0, {t_f}]")));
    }
    if schedule.end() < t_f * (1.0 - 1e-12) {
        return Err(Error::InvalidSchedule(format!(
            "schedule ends at {} before the horizon {t_f}",
            schedule.end()
        )));
    }
    if !(t0 >= 0.0 && t0 < t_f) {
        return Err(Error::InvalidArgument(format!("start time {t0} outside [0, {t_f})")));
    }
    for u in schedule.values() {
        model.bounds.check(u)?;
    }
    x.check_nonnegative()?;

    let p = &model.params;
    let clip_tol = 1e-9 * p.n_h.max(p.k * p.n_h);
    let capacity = ((t_f - t0) / h).ceil() as usize + schedule.len() + 1;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    let mut controls = Vec::with_capacity(capacity);

    let mut y = x.to_array();
    let first = schedule.interval_index(t0);
    times.push(t0);
    states.push(x);
    controls.push(schedule.at(t0));

    let edges = schedule.edges();
    for (i, u) in schedule.values().iter().enumerate().skip(first) {
        let start = if i == first { t0 } else { edges[i] };
        let end = edges[i + 1].min(t_f);
        if end <= start {
            break;
        }
        let n = ((end - start) / h - 1e-9).ceil().max(1.0) as usize;
        let dt = (end - start) / n as f64;
        for step in 1..=n {
            y = rk4_step(&y, u, p, dt);
            let t = if step == n { end } else { start + dt * step as f64 };
            for (c, v) in y.iter_mut().enumerate() {
                if !v.is_finite() {
                    return Err(Error::BlowUp { time: t });
                }
                if *v < 0.0 {
                    if *v < -clip_tol {
                        return Err(Error::StepRejected {
                            time: t,
                            component: COMPARTMENTS[c],
                            value: *v,
                        });
                    }
                    *v = 0.0;
                }
            }
            times.push(t);
            states.push(State::from_array(y));
            controls.push(if step == n && end < t_f {
                schedule.values()[i + 1]
            } else {
                *u
            });
        }
        if end >= t_f {
            break;
        }
    }

    Ok(Trajectory {
        times,
        states,
        controls,
        params: *p,
        schedule: schedule.clone(),
    })
}

#[inline]
fn rk4_step(y: &[f64; 6], u: &ControlVector, p: &ModelParams, dt: f64) -> [f64; 6] {
    let k1 = rhs_array(y, u, p);
    let k2 = rhs_array(&axpy(y, 0.5 * dt, &k1), u, p);
    let k3 = rhs_array(&axpy(y, 0.5 * dt, &k2), u, p);
    let k4 = rhs_array(&axpy(y, dt, &k3), u, p);
    let mut out = *y;
    for i in 0..6 {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

#[inline]
fn axpy(y: &[f64; 6], a: f64, k: &[f64; 6]) -> [f64; 6] {
    let mut out = *y;
    for i in 0..6 {
        out[i] += a * k[i];
    }
    out
}

/// Linearly interpolates the states of `traj` onto `grid`.
///
/// Controls are read from the schedule, not interpolated.
pub fn resample(traj: &Trajectory, grid: &[f64]) -> Result<Trajectory> {
    let (t_lo, t_hi) = (traj.times[0], *traj.times.last().expect("non-empty"));
    let tol = 1e-9 * t_hi.abs().max(1.0);
    let mut states = Vec::with_capacity(grid.len());
    let mut controls = Vec::with_capacity(grid.len());
    for &t in grid {
        if !(t >= t_lo - tol && t <= t_hi + tol) {
            return Err(Error::InvalidArgument(format!(
                "resample time {t} outside [{t_lo}, {t_hi}]"
            )));
        }
        let t = t.clamp(t_lo, t_hi);
        let j = traj.times.partition_point(|&s| s < t);
        let x = if j < traj.times.len() && traj.times[j] == t {
            traj.states[j]
        } else {
            let (ta, tb) = (traj.times[j - 1], traj.times[j]);
            let w = (t - ta) / (tb - ta);
            let (a, b) = (traj.states[j - 1].to_array(), traj.states[j].to_array());
            let mut v = [0.0; 6];
            for i in 0..6 {
                v[i] = a[i] + w * (b[i] - a[i]);
            }
            State::from_array(v)
        };
        states.push(x);
        controls.push(traj.schedule.at(t));
    }
    Ok(Trajectory {
        times: grid.to_vec(),
        states,
        controls,
        params: traj.params,
        schedule: traj.schedule.clone(),
    })
}

/// `0, stride, 2 stride, ...` up to and including `t_f`.
pub fn output_grid(t_f: f64, stride: f64) -> Vec<f64> {
    let n = (t_f / stride + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|i| i as f64 * stride).collect();
    if t_f - grid[n] > 1e-9 * t_f.max(1.0) {
        grid.push(t_f);
    } else {
        grid[n] = t_f;
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> DengueModel {
        DengueModel::default()
    }

    #[test]
    fn schedule_lookup_is_right_open() {
        let b = ControlBounds::default();
        let u1 = ControlVector::NONE;
        let u2 = ControlVector { c_m: 0.5, ..u1 };
        let s = ControlSchedule::new(vec![0.0, 10.0, 20.0], vec![u1, u2], &b).unwrap();
        assert_eq!(s.at(0.0), u1);
        assert_eq!(s.at(9.999), u1);
        assert_eq!(s.at(10.0), u2);
        assert_eq!(s.at(20.0), u2);
        assert_eq!(s.at(25.0), u2);
    }

    #[test]
    fn schedule_validation() {
        let b = ControlBounds::default();
        let u = ControlVector::NONE;
        assert!(ControlSchedule::new(vec![0.0, 5.0, 5.0], vec![u, u], &b).is_err());
        assert!(ControlSchedule::new(vec![1.0, 5.0], vec![u], &b).is_err());
        assert!(ControlSchedule::new(vec![0.0, 5.0], vec![], &b).is_err());
        let bad = ControlVector { c_a: 1.5, ..u };
        assert!(ControlSchedule::new(vec![0.0, 5.0], vec![bad], &b).is_err());
    }

    #[test]
    fn lands_on_breakpoints() {
        let m = model();
        let b = m.bounds;
        let u = ControlVector::NONE;
        let s = ControlSchedule::new(vec![0.0, 0.13, 1.0], vec![u, u.with(crate::Control::Adulticide, 0.4)], &b)
            .unwrap();
        let x0 = InitialState::cape_verde(&m.params);
        let tr = integrate(&m, &x0, &s, 1.0, 0.05).unwrap();
        assert!(tr.times.contains(&0.13));
        assert_eq!(*tr.times.last().unwrap(), 1.0);
        assert!(tr.times.windows(2).all(|w| w[1] > w[0]));
        let k = tr.times.iter().position(|&t| t == 0.13).unwrap();
        assert_eq!(tr.controls[k].c_m, 0.4);
        assert_eq!(tr.controls[k - 1].c_m, 0.0);
    }

    #[test]
    fn argument_errors() {
        let m = model();
        let x0 = InitialState::cape_verde(&m.params);
        let s = ControlSchedule::none(10.0);
        assert!(integrate(&m, &x0, &s, 0.0, 0.05).is_err());
        assert!(integrate(&m, &x0, &s, 10.0, 0.0).is_err());
        assert!(integrate(&m, &x0, &s, 10.0, 11.0).is_err());
        assert!(matches!(
            integrate(&m, &x0, &s, 20.0, 0.05),
            Err(Error::InvalidSchedule(_))
        ));
    }

    #[test]
    fn coarse_step_is_rejected() {
        let m = model();
        let x0 = InitialState::cape_verde(&m.params);
        let s = ControlSchedule::none(50.0);
        let err = integrate(&m, &x0, &s, 50.0, 25.0).unwrap_err();
        assert!(
            matches!(err, Error::StepRejected { .. } | Error::BlowUp { .. }),
            "{err}"
        );
    }

    #[test]
    fn resample_identity_and_midpoint() {
        let m = model();
        let x0 = InitialState::cape_verde(&m.params);
        let s = ControlSchedule::none(5.0);
        let tr = integrate(&m, &x0, &s, 5.0, 0.5).unwrap();
        let same = resample(&tr, &tr.times).unwrap();
        assert_eq!(same, tr);

        let mid = resample(&tr, &[0.25]).unwrap();
        let (a, b) = (tr.states[0].to_array(), tr.states[1].to_array());
        for i in 0..6 {
            assert!((mid.states[0][i] - 0.5 * (a[i] + b[i])).abs() <= 1e-9 * a[i].abs().max(1.0));
        }
        assert!(resample(&tr, &[5.5]).is_err());
        assert!(resample(&tr, &[-0.1]).is_err());
    }

    #[test]
    fn output_grid_includes_end() {
        assert_eq!(output_grid(3.0, 1.0), vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(output_grid(2.5, 1.0), vec![0.0, 1.0, 2.0, 2.5]);
    }
}
