//! Curve data for the two `m = 1` density figures.
//!
//! For `m = 1` and `beta = 1` the standardized density depends on `R` only
//! through `r = ||R||`, so each curve is the profile along one coordinate
//! axis, `f(r) = |r|^{2t} (1 - r^2)^{c - 1} / B(t + 1/2, c)` with
//! `c = nu/2 + k`, scaled to unit mass on `(-1, 1)`. The `log_profile`
//! column is the full `n`-dimensional log-density at `R = r e_1`.

use serde::Serialize;

use crate::algebra::Algebra;
use crate::densities::pearson2riesz_logpdf_vector;
use crate::error::{Error, Result};
use crate::specfun::ln_gamma;

pub const GRID_POINTS: usize = 1001;

/// Values swept for the parameter a figure leaves open.
pub const SWEEP: [f64; 4] = [0.0, 1.0, 2.0, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSpec {
    pub figure: u8,
    pub nu: f64,
    pub n: usize,
    pub k: f64,
    pub t: f64,
}

impl CurveSpec {
    fn c(&self) -> f64 {
        self.nu / 2.0 + self.k
    }

    /// `ln B(t + 1/2, c)`.
    fn ln_mass(&self) -> f64 {
        ln_gamma(self.t + 0.5) + ln_gamma(self.c()) - ln_gamma(self.t + 0.5 + self.c())
    }

    /// Unit-mass profile at `r`.
    pub fn density(&self, r: f64) -> f64 {
        let r2 = r * r;
        if r2 > 1.0 {
            return 0.0;
        }
        let mut ln = -self.ln_mass();
        if self.t != 0.0 {
            if r2 == 0.0 {
                return if self.t > 0.0 { 0.0 } else { f64::INFINITY };
            }
            ln += self.t * r2.ln();
        }
        let power = self.c() - 1.0;
        if power != 0.0 {
            if r2 == 1.0 {
                return if power > 0.0 { 0.0 } else { f64::INFINITY };
            }
            ln += power * (1.0 - r2).ln();
        }
        ln.exp()
    }

    /// Log-density of the full `n`-vector law at `R = r e_1`; `-inf` off the support.
    pub fn log_profile(&self, r: f64) -> f64 {
        pearson2riesz_logpdf_vector(r * r, self.nu, self.k, self.t, self.n, Algebra::Real).unwrap_or(f64::NEG_INFINITY)
    }
}

/// Default curve and, with `sweep`, the family over the open parameter.
pub fn figure_curves(which: u8, sweep: bool) -> Result<Vec<CurveSpec>> {
    let base = match which {
        1 => CurveSpec { figure: 1, nu: 15.0, n: 18, k: 0.0, t: 7.0 },
        2 => CurveSpec { figure: 2, nu: 3.0, n: 18, k: 0.0, t: 0.0 },
        other => return Err(Error::Parameter(format!("unknown figure {other}; expected 1 or 2"))),
    };
    if !sweep {
        return Ok(vec![base]);
    }
    Ok(SWEEP
        .iter()
        .map(|&v| match which {
            1 => CurveSpec { k: v, ..base },
            _ => CurveSpec { t: v, ..base },
        })
        .collect())
}

/// Uniform grid on `[-1, 1]`, exactly antisymmetric.
pub fn grid() -> Vec<f64> {
    let half = (GRID_POINTS / 2) as f64;
    (0..GRID_POINTS).map(|i| (i as f64 - half) / half).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub r: f64,
    pub density: f64,
    pub log_profile: f64,
}

pub fn curve(spec: &CurveSpec) -> Vec<CurvePoint> {
    grid()
        .into_iter()
        .map(|r| CurvePoint { r, density: spec.density(r), log_profile: spec.log_profile(r) })
        .collect()
}

/// Trapezoid rule on the emitted points.
pub fn trapezoid(points: &[CurvePoint]) -> f64 {
    points
        .windows(2)
        .map(|w| 0.5 * (w[1].r - w[0].r) * (w[0].density + w[1].density))
        .sum()
}
