use std::f64::consts::PI;

use super::cutoff::eta;
use crate::error::KernelError;
use crate::geometry::Vec2;

/// Backwards heat kernel for one-dimensional boundaries in the plane,
/// centered at `(y, s)`, with truncation radius `r` and time offset `delta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatKernelQuery {
    pub y: Vec2,
    pub s: f64,
    pub r: f64,
    pub delta: f64,
}

impl HeatKernelQuery {
    pub fn new(y: Vec2, s: f64, r: f64, delta: f64) -> Result<Self, KernelError> {
        if !(r > 0.0) {
            return Err(KernelError::NonPositiveRadius(r));
        }
        Ok(Self { y, s, r, delta })
    }

    /// `(4 pi (s - t))^{-1/2} exp(-|x - y|^2 / 4(s - t))`.
    pub fn rho(&self, x: Vec2, t: f64) -> Result<f64, KernelError> {
        if t >= self.s {
            return Err(KernelError::TimeNotBeforeReference { t, s: self.s });
        }
        let tau = self.s - t;
        Ok((-(x - self.y).norm_squared() / (4.0 * tau)).exp() / (4.0 * PI * tau).sqrt())
    }

    pub fn rho_hat(&self, x: Vec2, t: f64) -> Result<f64, KernelError> {
        let cut = eta((x - self.y).norm() / self.r);
        if cut == 0.0 {
            if t >= self.s {
                return Err(KernelError::TimeNotBeforeReference { t, s: self.s });
            }
            return Ok(0.0);
        }
        Ok(cut * self.rho(x, t)?)
    }

    /// Truncated kernel with the reference time placed `delta r^2` after the
    /// evaluation time.
    pub fn rho_hat_r_delta(&self, x: Vec2) -> f64 {
        let var = self.delta * self.r * self.r;
        let d2 = (x - self.y).norm_squared();
        eta(d2.sqrt() / self.r) * (-d2 / (4.0 * var)).exp() / (4.0 * PI * var).sqrt()
    }
}

/// Density-form clearing-out threshold `(4 pi delta0)^{1/2} / 4`.
pub fn clearing_out_theta0(delta0: f64) -> f64 {
    (4.0 * PI * delta0).sqrt() / 4.0
}
