use std::fmt;

/// Epidemiological and entomological constants of the host-vector model.
///
/// Rates are per day. `m` only enters through the default initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Total human population.
    pub n_h: f64,
    /// Average daily biting rate.
    pub b: f64,
    /// Transmission probability per bite, mosquito to human.
    pub beta_mh: f64,
    /// Transmission probability per bite, human to mosquito.
    pub beta_hm: f64,
    /// Human mortality rate.
    pub mu_h: f64,
    /// Human recovery rate (reciprocal of the mean viremic period).
    pub eta_h: f64,
    /// Adult mosquito mortality rate.
    pub mu_m: f64,
    /// Eggs per capita per day.
    pub phi: f64,
    /// Larval natural mortality rate.
    pub mu_a: f64,
    /// Maturation rate from larvae to adult.
    pub eta_a: f64,
    /// Female mosquitoes per human.
    pub m: f64,
    /// Larvae per human.
    pub k: f64,
}

impl ModelParams {
    /// Cape Verde 2009 outbreak values.
    pub fn cape_verde() -> Self {
        Self {
            n_h: 480_000.0,
            b: 0.8,
            beta_mh: 0.375,
            beta_hm: 0.375,
            mu_h: 1.0 / (71.0 * 365.0),
            eta_h: 1.0 / 3.0,
            mu_m: 1.0 / 10.0,
            phi: 6.0,
            mu_a: 1.0 / 4.0,
            eta_a: 0.08,
            m: 3.0,
            k: 3.0,
        }
    }

    /// `(name, value)` for every field, in declaration order.
    pub fn fields(&self) -> [(&'static str, f64); 12] {
        [
            ("N_h", self.n_h),
            ("B", self.b),
            ("beta_mh", self.beta_mh),
            ("beta_hm", self.beta_hm),
            ("mu_h", self.mu_h),
            ("eta_h", self.eta_h),
            ("mu_m", self.mu_m),
            ("phi", self.phi),
            ("mu_A", self.mu_a),
            ("eta_A", self.eta_a),
            ("m", self.m),
            ("k", self.k),
        ]
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (name, value) in self.fields() {
            if !value.is_finite() || value <= 0.0 {
                violations.push(Violation {
                    field: name,
                    value,
                    rule: "must be finite and strictly positive",
                });
            }
        }
        for (name, value) in [("beta_mh", self.beta_mh), ("beta_hm", self.beta_hm)] {
            if value > 1.0 {
                violations.push(Violation {
                    field: name,
                    value,
                    rule: "probability must not exceed 1",
                });
            }
        }
        if self.n_h > 0.0 && self.n_h < 1.0 {
            violations.push(Violation {
                field: "N_h",
                value: self.n_h,
                rule: "population must be at least 1",
            });
        }
        ValidationReport { violations }
    }

    /// Aquatic carrying capacity `k N_h` without mechanical control.
    pub fn carrying_capacity(&self) -> f64 {
        self.k * self.n_h
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::cape_verde()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub value: f64,
    pub rule: &'static str,
}

/// Every violated parameter invariant; empty iff the parameters are valid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.violations.iter().map(|v| v.field).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{} = {} ({})", v.field, v.value, v.rule))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// Checks every parameter invariant and reports all violations at once.
pub fn validate_params(p: &ModelParams) -> ValidationReport {
    p.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert!(validate_params(&ModelParams::default()).is_valid());
    }

    #[test]
    fn probability_above_one() {
        let p = ModelParams {
            beta_mh: 1.5,
            ..Default::default()
        };
        assert_eq!(validate_params(&p).names(), vec!["beta_mh"]);
    }

    #[test]
    fn zero_population() {
        let p = ModelParams {
            n_h: 0.0,
            ..Default::default()
        };
        let report = validate_params(&p);
        assert_eq!(report.names(), vec!["N_h"]);
        assert!(report.to_string().contains("N_h"));
    }

    #[test]
    fn fractional_population_and_nan() {
        let p = ModelParams {
            n_h: 0.5,
            phi: f64::NAN,
            ..Default::default()
        };
        let names = validate_params(&p).names();
        assert!(names.contains(&"N_h"));
        assert!(names.contains(&"phi"));
    }
}
