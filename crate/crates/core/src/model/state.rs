use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Compartment names in storage order.
pub const COMPARTMENTS: [&str; 6] = ["S_h", "I_h", "R_h", "A_m", "S_m", "I_m"];

/// Six compartment values: humans `(S_h, I_h, R_h)`, mosquitoes `(A_m, S_m, I_m)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State {
    pub s_h: f64,
    pub i_h: f64,
    pub r_h: f64,
    pub a_m: f64,
    pub s_m: f64,
    pub i_m: f64,
}

impl State {
    /// Builds a state, rejecting negative or non-finite components.
    pub fn new(s_h: f64, i_h: f64, r_h: f64, a_m: f64, s_m: f64, i_m: f64) -> Result<Self> {
        let x = Self::from_array([s_h, i_h, r_h, a_m, s_m, i_m]);
        x.check_nonnegative()?;
        Ok(x)
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        Self {
            s_h: v[0],
            i_h: v[1],
            r_h: v[2],
            a_m: v[3],
            s_m: v[4],
            i_m: v[5],
        }
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.s_h, self.i_h, self.r_h, self.a_m, self.s_m, self.i_m]
    }

    pub fn humans(&self) -> f64 {
        self.s_h + self.i_h + self.r_h
    }

    pub fn adult_mosquitoes(&self) -> f64 {
        self.s_m + self.i_m
    }

    pub fn check_nonnegative(&self) -> Result<()> {
        for (name, v) in COMPARTMENTS.iter().zip(self.to_array()) {
            if !v.is_finite() {
                return Err(Error::InvalidState(format!("{name} = {v} is not finite")));
            }
            if v < 0.0 {
                return Err(Error::InvalidState(format!("{name} = {v} is negative")));
            }
        }
        Ok(())
    }
}

impl Index<usize> for State {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.s_h,
            1 => &self.i_h,
            2 => &self.r_h,
            3 => &self.a_m,
            4 => &self.s_m,
            5 => &self.i_m,
            _ => panic!("state index {i} out of range"),
        }
    }
}

impl IndexMut<usize> for State {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        match i {
            0 => &mut self.s_h,
            1 => &mut self.i_h,
            2 => &mut self.r_h,
            3 => &mut self.a_m,
            4 => &mut self.s_m,
            5 => &mut self.i_m,
            _ => panic!("state index {i} out of range"),
        }
    }
}

/// Time derivative of a [`State`], per day, in the same layout.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateDerivative {
    pub s_h: f64,
    pub i_h: f64,
    pub r_h: f64,
    pub a_m: f64,
    pub s_m: f64,
    pub i_m: f64,
}

impl StateDerivative {
    pub fn from_array(v: [f64; 6]) -> Self {
        Self {
            s_h: v[0],
            i_h: v[1],
            r_h: v[2],
            a_m: v[3],
            s_m: v[4],
            i_m: v[5],
        }
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.s_h, self.i_h, self.r_h, self.a_m, self.s_m, self.i_m]
    }

    /// Net rate of change of the human population.
    pub fn humans(&self) -> f64 {
        self.s_h + self.i_h + self.r_h
    }
}

/// Initial condition of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState(pub State);

impl InitialState {
    /// `infected` humans introduced into a fully susceptible population, the
    /// aquatic phase at carrying capacity `k N_h` and `m N_h` susceptible adults.
    pub fn outbreak(p: &ModelParams, infected: f64) -> Result<Self> {
        if infected > p.n_h {
            return Err(Error::InvalidState(format!(
                "initial infected {infected} exceeds N_h = {}",
                p.n_h
            )));
        }
        let x = State::new(
            p.n_h - infected,
            infected,
            0.0,
            p.k * p.n_h,
            p.m * p.n_h,
            0.0,
        )?;
        Ok(Self(x))
    }

    /// Ten imported human cases.
    pub fn cape_verde(p: &ModelParams) -> Self {
        Self::outbreak(p, 10.0).expect("valid parameters give a valid outbreak state")
    }

    /// Builds an initial state whose human compartments must add up to `N_h`
    /// within `1e-9 N_h`.
    pub fn for_population(p: &ModelParams, x: State) -> Result<Self> {
        x.check_nonnegative()?;
        let residual = (x.humans() - p.n_h).abs();
        if residual > 1e-9 * p.n_h {
            return Err(Error::InvalidState(format!(
                "S_h + I_h + R_h = {} differs from N_h = {}",
                x.humans(),
                p.n_h
            )));
        }
        Ok(Self(x))
    }

    pub fn state(&self) -> State {
        self.0
    }
}
