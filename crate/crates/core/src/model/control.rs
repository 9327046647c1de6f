use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default floor on the mechanical-control proportion.
pub const DEFAULT_ALPHA_MIN: f64 = 0.01;

/// Box bounds shared by every control value.
///
/// `c_A` and `c_m` live in `[0, 1]`; `alpha` in `[alpha_min, 1]`. The floor keeps
/// the aquatic carrying capacity `alpha k N_h` away from zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlBounds {
    pub alpha_min: f64,
}

impl ControlBounds {
    pub fn new(alpha_min: f64) -> Result<Self> {
        if !(alpha_min > 0.0 && alpha_min <= 1.0) {
            return Err(Error::ControlDomain(format!(
                "alpha_min = {alpha_min} must lie in (0, 1]"
            )));
        }
        Ok(Self { alpha_min })
    }

    pub fn lower(&self, control: Control) -> f64 {
        match control {
            Control::Larvicide | Control::Adulticide => 0.0,
            Control::Mechanical => self.alpha_min,
        }
    }

    pub fn upper(&self, _control: Control) -> f64 {
        1.0
    }

    pub fn check(&self, u: &ControlVector) -> Result<()> {
        for control in Control::ALL {
            let v = u.get(control);
            if !v.is_finite() || v < self.lower(control) || v > self.upper(control) {
                return Err(Error::ControlDomain(format!(
                    "{control} = {v} outside [{}, {}]",
                    self.lower(control),
                    self.upper(control)
                )));
            }
        }
        Ok(())
    }

    pub fn project(&self, u: ControlVector) -> ControlVector {
        let mut out = u;
        for control in Control::ALL {
            let v = u.get(control);
            let v = if v.is_nan() { self.lower(control) } else { v };
            out.set(control, v.clamp(self.lower(control), self.upper(control)));
        }
        out
    }

    /// Centre of the box.
    pub fn midpoint(&self) -> ControlVector {
        ControlVector {
            c_a: 0.5,
            c_m: 0.5,
            alpha: 0.5 * (1.0 + self.alpha_min),
        }
    }
}

impl Default for ControlBounds {
    fn default() -> Self {
        Self {
            alpha_min: DEFAULT_ALPHA_MIN,
        }
    }
}

/// The three vector-control instruments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Control {
    /// `c_A`, proportion of larvicide.
    Larvicide,
    /// `c_m`, proportion of adulticide.
    Adulticide,
    /// `alpha`, proportion of mechanical control (breeding-site removal).
    Mechanical,
}

impl Control {
    pub const ALL: [Control; 3] = [Control::Larvicide, Control::Adulticide, Control::Mechanical];

    pub fn name(self) -> &'static str {
        match self {
            Control::Larvicide => "c_A",
            Control::Adulticide => "c_m",
            Control::Mechanical => "alpha",
        }
    }

    /// Value meaning "no intervention".
    pub fn inactive_value(self) -> f64 {
        match self {
            Control::Larvicide | Control::Adulticide => 0.0,
            Control::Mechanical => 1.0,
        }
    }
}

impl fmt::Display for Control {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Control {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c_A" | "cA" | "ca" | "larvicide" => Ok(Control::Larvicide),
            "c_m" | "cm" | "adulticide" => Ok(Control::Adulticide),
            "alpha" | "mechanical" => Ok(Control::Mechanical),
            other => Err(Error::InvalidArgument(format!(
                "unknown control `{other}` (expected c_A, c_m or alpha)"
            ))),
        }
    }
}

/// Control values at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlVector {
    pub c_a: f64,
    pub c_m: f64,
    pub alpha: f64,
}

impl ControlVector {
    /// No larvicide, no adulticide, no breeding-site removal.
    pub const NONE: ControlVector = ControlVector {
        c_a: 0.0,
        c_m: 0.0,
        alpha: 1.0,
    };

    pub fn new(c_a: f64, c_m: f64, alpha: f64, bounds: &ControlBounds) -> Result<Self> {
        let u = Self { c_a, c_m, alpha };
        bounds.check(&u)?;
        Ok(u)
    }

    pub fn get(&self, control: Control) -> f64 {
        match control {
            Control::Larvicide => self.c_a,
            Control::Adulticide => self.c_m,
            Control::Mechanical => self.alpha,
        }
    }

    pub fn set(&mut self, control: Control, value: f64) {
        match control {
            Control::Larvicide => self.c_a = value,
            Control::Adulticide => self.c_m = value,
            Control::Mechanical => self.alpha = value,
        }
    }

    pub fn with(mut self, control: Control, value: f64) -> Self {
        self.set(control, value);
        self
    }
}

impl Default for ControlVector {
    fn default() -> Self {
        Self::NONE
    }
}
