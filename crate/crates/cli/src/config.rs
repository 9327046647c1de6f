//! Run configuration: a sectioned key-value (TOML) file whose keys mirror the
//! model symbols. Every key is optional and defaults to the Cape Verde values.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use dengue_oc::{
    ControlBounds, ControlVector, CostWeights, DengueModel, InitialState, ModelParams, OcpSpec,
    SolverOptions, State,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub params: ParamsBlock,
    pub initial: InitialBlock,
    pub controls: ControlsBlock,
    pub ocp: OcpBlock,
    pub run: RunBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
#[allow(non_snake_case)]
pub struct ParamsBlock {
    pub N_h: f64,
    pub B: f64,
    pub beta_mh: f64,
    pub beta_hm: f64,
    pub mu_h: f64,
    pub eta_h: f64,
    pub mu_m: f64,
    pub phi: f64,
    pub mu_A: f64,
    pub eta_A: f64,
    pub m: f64,
    pub k: f64,
}

impl Default for ParamsBlock {
    fn default() -> Self {
        let p = ModelParams::cape_verde();
        Self {
            N_h: p.n_h,
            B: p.b,
            beta_mh: p.beta_mh,
            beta_hm: p.beta_hm,
            mu_h: p.mu_h,
            eta_h: p.eta_h,
            mu_m: p.mu_m,
            phi: p.phi,
            mu_A: p.mu_a,
            eta_A: p.eta_a,
            m: p.m,
            k: p.k,
        }
    }
}

/// Unset compartments follow the outbreak defaults: `I_h0` imported cases in a
/// susceptible population, aquatic phase at `k N_h`, `m N_h` susceptible adults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
#[allow(non_snake_case)]
pub struct InitialBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub S_h0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub I_h0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub R_h0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub A_m0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub S_m0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub I_m0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
#[allow(non_snake_case)]
pub struct ControlsBlock {
    pub c_A: f64,
    pub c_m: f64,
    pub alpha: f64,
    pub alpha_min: f64,
    /// CSV with columns `interval,t_start,t_end,c_A,c_m,alpha`; overrides the constants.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule_file: Option<PathBuf>,
}

impl Default for ControlsBlock {
    fn default() -> Self {
        Self {
            c_A: 0.0,
            c_m: 0.0,
            alpha: 1.0,
            alpha_min: dengue_oc::model::DEFAULT_ALPHA_MIN,
            schedule_file: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
#[allow(non_snake_case)]
pub struct OcpBlock {
    pub gamma_D: f64,
    pub gamma_S: f64,
    pub gamma_L: f64,
    pub gamma_E: f64,
    pub n_intervals: usize,
    pub tol_rel: f64,
    pub max_iter: usize,
    pub fd_eps: f64,
    pub normalize_infected: bool,
}

impl Default for OcpBlock {
    fn default() -> Self {
        let opts = SolverOptions::default();
        Self {
            gamma_D: 0.25,
            gamma_S: 0.25,
            gamma_L: 0.25,
            gamma_E: 0.25,
            n_intervals: dengue_oc::ocp::DEFAULT_INTERVALS,
            tol_rel: opts.tol_rel,
            max_iter: opts.max_iter,
            fd_eps: opts.fd_eps,
            normalize_infected: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunBlock {
    pub t_f: f64,
    pub h: f64,
    pub out_dir: PathBuf,
    /// Spacing of the rows written to trajectory CSVs, in days.
    pub stride: f64,
}

impl Default for RunBlock {
    fn default() -> Self {
        Self {
            t_f: dengue_oc::simulator::DEFAULT_HORIZON,
            h: dengue_oc::simulator::DEFAULT_STEP,
            out_dir: PathBuf::from("out"),
            stride: 1.0,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut cfg = Self::parse(&text).with_context(|| format!("in config {}", path.display()))?;
        // schedule paths are relative to the config file
        if let (Some(file), Some(dir)) = (&cfg.controls.schedule_file, path.parent()) {
            if file.is_relative() {
                cfg.controls.schedule_file = Some(std::path::absolute(dir.join(file))?);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serialisable")
    }

    pub fn params(&self) -> ModelParams {
        let p = &self.params;
        ModelParams {
            n_h: p.N_h,
            b: p.B,
            beta_mh: p.beta_mh,
            beta_hm: p.beta_hm,
            mu_h: p.mu_h,
            eta_h: p.eta_h,
            mu_m: p.mu_m,
            phi: p.phi,
            mu_a: p.mu_A,
            eta_a: p.eta_A,
            m: p.m,
            k: p.k,
        }
    }

    pub fn model(&self) -> anyhow::Result<DengueModel> {
        let bounds = ControlBounds::new(self.controls.alpha_min).context("[controls] alpha_min")?;
        DengueModel::new(self.params(), bounds).context("[params]")
    }

    pub fn initial_state(&self) -> anyhow::Result<InitialState> {
        let p = self.params();
        let i = &self.initial;
        let i_h = i.I_h0.unwrap_or(10.0);
        let r_h = i.R_h0.unwrap_or(0.0);
        let x = State::new(
            i.S_h0.unwrap_or(p.n_h - i_h - r_h),
            i_h,
            r_h,
            i.A_m0.unwrap_or(p.k * p.n_h),
            i.S_m0.unwrap_or(p.m * p.n_h),
            i.I_m0.unwrap_or(0.0),
        )
        .context("[initial]")?;
        InitialState::for_population(&p, x).context("[initial]")
    }

    pub fn control(&self) -> anyhow::Result<ControlVector> {
        let c = &self.controls;
        let bounds = ControlBounds::new(c.alpha_min).context("[controls] alpha_min")?;
        ControlVector::new(c.c_A, c.c_m, c.alpha, &bounds).context("[controls]")
    }

    pub fn weights(&self) -> CostWeights {
        CostWeights {
            disease: self.ocp.gamma_D,
            adulticide: self.ocp.gamma_S,
            larvicide: self.ocp.gamma_L,
            mechanical: self.ocp.gamma_E,
        }
    }

    pub fn ocp_spec(&self) -> anyhow::Result<OcpSpec> {
        let mut spec = OcpSpec::new(self.model()?, self.initial_state()?, self.weights());
        spec.t_f = self.run.t_f;
        spec.step = self.run.h;
        spec.n_intervals = self.ocp.n_intervals;
        spec.normalize_infected = self.ocp.normalize_infected;
        spec.validate().context("[ocp]")?;
        Ok(spec)
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            max_iter: self.ocp.max_iter,
            tol_rel: self.ocp.tol_rel,
            fd_eps: self.ocp.fd_eps,
            ..SolverOptions::default()
        }
    }

    /// Checks everything that does not depend on the subcommand.
    pub fn validate(&self) -> anyhow::Result<()> {
        self.model()?;
        self.initial_state()?;
        self.control()?;
        let r = &self.run;
        if !(r.t_f > 0.0 && r.t_f.is_finite()) {
            bail!("[run] t_f = {} must be positive", r.t_f);
        }
        if !(r.h > 0.0 && r.h <= r.t_f) {
            bail!("[run] h = {} must lie in (0, t_f]", r.h);
        }
        if !(r.stride > 0.0 && r.stride.is_finite()) {
            bail!("[run] stride = {} must be positive", r.stride);
        }
        Ok(())
    }
}
