//! Basic reproduction number of the host-vector system under vector control.
//!
//! The closed form is
//!
//! ```text
//! R0^2 = alpha k B^2 beta_hm beta_mh M / (phi (eta_h + mu_h) (c_m + mu_m)^2)
//! M    = phi eta_A - (eta_A + mu_A + c_A) (mu_m + c_m)
//! ```
//!
//! `M` is the margin by which mosquito recruitment beats aquatic and adult
//! losses; when it is not positive the vector population dies out and `R0 = 0`.
//! [`r0_ngm_oracle`] recomputes the same number as the spectral radius of the
//! next-generation matrix at the disease-free equilibrium.

use rayon::prelude::*;

use crate::contour::contour_lines;
use crate::error::{Error, Result};
use crate::model::{Control, ControlBounds, ControlVector, ModelParams};

/// Mosquito disease-free equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MosquitoEquilibrium {
    /// Aquatic phase `A*`.
    pub a_star: f64,
    /// Susceptible adults `S*`.
    pub s_star: f64,
    /// `false` when the vector population cannot sustain itself.
    pub viable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R0Result {
    pub r0: f64,
    /// Recruitment margin `M`, per day squared.
    pub m_factor: f64,
    pub dfe: MosquitoEquilibrium,
    pub viable: bool,
}

/// `phi eta_A - (eta_A + mu_A + c_A)(mu_m + c_m)`.
pub fn recruitment_margin(u: &ControlVector, p: &ModelParams) -> f64 {
    p.phi * p.eta_a - (p.eta_a + p.mu_a + u.c_a) * (p.mu_m + u.c_m)
}

/// Steady state of the mosquito subsystem with no infection.
pub fn dfe_mosquito_equilibrium(u: &ControlVector, p: &ModelParams) -> MosquitoEquilibrium {
    let recruitment = p.phi * p.eta_a;
    let losses = (p.eta_a + p.mu_a + u.c_a) * (p.mu_m + u.c_m);
    if recruitment > losses {
        let a_star = u.alpha * p.k * p.n_h * (1.0 - losses / recruitment);
        MosquitoEquilibrium {
            a_star,
            s_star: p.eta_a * a_star / (p.mu_m + u.c_m),
            viable: true,
        }
    } else {
        MosquitoEquilibrium {
            a_star: 0.0,
            s_star: 0.0,
            viable: false,
        }
    }
}

/// Closed-form basic reproduction number.
pub fn r0(u: &ControlVector, p: &ModelParams) -> R0Result {
    let m_factor = recruitment_margin(u, p);
    let dfe = dfe_mosquito_equilibrium(u, p);
    if m_factor <= 0.0 || !dfe.viable {
        return R0Result {
            r0: 0.0,
            m_factor,
            dfe: MosquitoEquilibrium {
                a_star: 0.0,
                s_star: 0.0,
                viable: false,
            },
            viable: false,
        };
    }
    let num = u.alpha * p.k * p.b * p.b * p.beta_hm * p.beta_mh * m_factor;
    let den = p.phi * (p.eta_h + p.mu_h) * (u.c_m + p.mu_m).powi(2);
    R0Result {
        r0: (num / den).sqrt(),
        m_factor,
        dfe,
        viable: true,
    }
}

/// Spectral radius of a real 2x2 matrix `[[a, b], [c, d]]`.
pub fn spectral_radius_2x2(m: [[f64; 2]; 2]) -> f64 {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = 0.25 * tr * tr - det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        (0.5 * tr + s).abs().max((0.5 * tr - s).abs())
    } else {
        // complex pair, |lambda|^2 = det
        det.sqrt()
    }
}

/// Next-generation matrix `F V^-1` of `(I_h, I_m)` linearised at `(N_h, S*)`.
pub fn next_generation_matrix(s_star: f64, u: &ControlVector, p: &ModelParams) -> [[f64; 2]; 2] {
    let f = [
        [0.0, p.b * p.beta_mh],
        [p.b * p.beta_hm * s_star / p.n_h, 0.0],
    ];
    let v_inv = [
        [1.0 / (p.eta_h + p.mu_h), 0.0],
        [0.0, 1.0 / (p.mu_m + u.c_m)],
    ];
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = (0..2).map(|k| f[i][k] * v_inv[k][j]).sum();
        }
    }
    out
}

/// R0 as the spectral radius of the next-generation matrix.
///
/// Fails with [`Error::NonViable`] when the vector population is strictly
/// below its persistence threshold; exactly at the threshold `S* = 0` and the
/// result is 0.
pub fn r0_ngm_oracle(u: &ControlVector, p: &ModelParams) -> Result<f64> {
    let dfe = dfe_mosquito_equilibrium(u, p);
    if !dfe.viable && recruitment_margin(u, p) < 0.0 {
        return Err(Error::NonViable);
    }
    Ok(spectral_radius_2x2(next_generation_matrix(dfe.s_star, u, p)))
}

/// One sweep axis: `points` evenly spaced values of `control` over `[from, to]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub control: Control,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl SweepAxis {
    pub fn new(control: Control, from: f64, to: f64, points: usize) -> Self {
        Self {
            control,
            from,
            to,
            points,
        }
    }

    /// The whole admissible range of `control`.
    pub fn full(control: Control, points: usize, bounds: &ControlBounds) -> Self {
        Self::new(control, bounds.lower(control), bounds.upper(control), points)
    }

    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.from],
            n => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.to
                    } else {
                        self.from + (self.to - self.from) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

/// R0 over the Cartesian product of two control axes.
#[derive(Debug, Clone, PartialEq)]
pub struct R0Grid {
    pub axis1: SweepAxis,
    pub axis2: SweepAxis,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major, `axis1` outer: `r0[i * ys.len() + j]` is at `(xs[i], ys[j])`.
    pub r0: Vec<f64>,
    /// Polylines of the `R0 = 1` level set.
    pub threshold_contour: Vec<Vec<(f64, f64)>>,
}

impl R0Grid {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.r0[i * self.ys.len() + j]
    }
}

/// Evaluates R0 on a grid of two distinct controls; the third is read from `fixed`.
pub fn r0_sweep(
    axis1: SweepAxis,
    axis2: SweepAxis,
    fixed: &ControlVector,
    p: &ModelParams,
    bounds: &ControlBounds,
) -> Result<R0Grid> {
    if axis1.control == axis2.control {
        return Err(Error::InvalidArgument(format!(
            "sweep axes overlap: both are {}",
            axis1.control
        )));
    }
    for axis in [&axis1, &axis2] {
        if axis.points == 0 {
            return Err(Error::InvalidArgument(format!("empty range for {}", axis.control)));
        }
        let (lo, hi) = (bounds.lower(axis.control), bounds.upper(axis.control));
        for v in [axis.from, axis.to] {
            if !(v >= lo && v <= hi) {
                return Err(Error::ControlDomain(format!(
                    "{} range endpoint {v} outside [{lo}, {hi}]",
                    axis.control
                )));
            }
        }
        if axis.points > 1 && axis.from == axis.to {
            return Err(Error::InvalidArgument(format!("empty range for {}", axis.control)));
        }
    }
    bounds.check(fixed)?;

    let xs = axis1.values();
    let ys = axis2.values();
    let r0: Vec<f64> = xs
        .par_iter()
        .flat_map_iter(|&x| {
            ys.iter().map(move |&y| {
                let u = fixed.with(axis1.control, x).with(axis2.control, y);
                r0(&u, p).r0
            })
        })
        .collect();
    let threshold_contour = contour_lines(&xs, &ys, &r0, 1.0);
    Ok(R0Grid {
        axis1,
        axis2,
        xs,
        ys,
        r0,
        threshold_contour,
    })
}
