use std::f64::consts::PI;

use super::cutoff::{psi, psi_derivative};
use crate::error::KernelError;
use crate::geometry::Vec2;

/// Truncated, renormalized Gaussian mollifier in the plane together with its
/// scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSuite {
    eps: f64,
    c_eps: f64,
    excess: f64,
    cutoff_radius: f64,
}

impl KernelSuite {
    /// Ambient boundary dimension.
    pub const N: usize = 1;

    pub fn new(eps: f64) -> Result<Self, KernelError> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(KernelError::InvalidEps(eps));
        }
        // Mass removed by the cutoff, written as a radial integral of the
        // Gaussian against 1 - psi. Beyond radius 1 psi vanishes and the
        // Gaussian tail is exp(-1/(2 eps^2)).
        let s2 = eps * eps;
        let inner = quadrature::integrate(
            |r| (1.0 - psi(r)) * r / s2 * (-r * r / (2.0 * s2)).exp(),
            0.5,
            1.0,
            1e-300_f64.max(1e-10 * (-1.0 / (8.0 * s2)).exp()),
        )
        .integral;
        let removed = inner + (-1.0 / (2.0 * s2)).exp();
        let excess = removed / (1.0 - removed);
        Ok(Self {
            eps,
            c_eps: 1.0 + excess,
            excess,
            cutoff_radius: (6.0 * eps).min(1.0),
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Normalization constant `c(eps)`. Rounds to 1 in double precision for
    /// small `eps`; see [`Self::c_eps_excess`].
    pub fn c_eps(&self) -> f64 {
        self.c_eps
    }

    /// `c(eps) - 1`, kept separately because it underflows relative to 1.
    pub fn c_eps_excess(&self) -> f64 {
        self.excess
    }

    /// Radius beyond which the kernel is treated as zero.
    pub fn support_radius(&self) -> f64 {
        self.cutoff_radius
    }

    /// Untruncated Gaussian factor `(2 pi eps^2)^{-1} exp(-|x|^2 / 2 eps^2)`.
    pub fn gaussian(&self, x: Vec2) -> f64 {
        let s2 = self.eps * self.eps;
        (-x.norm_squared() / (2.0 * s2)).exp() / (2.0 * PI * s2)
    }

    pub fn phi(&self, x: Vec2) -> f64 {
        let r = x.norm();
        if r >= self.cutoff_radius {
            return 0.0;
        }
        self.c_eps * psi(r) * self.gaussian(x)
    }

    pub fn grad_phi(&self, x: Vec2) -> Vec2 {
        let r = x.norm();
        if r >= self.cutoff_radius {
            return Vec2::zeros();
        }
        let g = self.c_eps * self.gaussian(x);
        let s2 = self.eps * self.eps;
        let mut out = -x * (psi(r) * g / s2);
        if r > 0.5 {
            out += x * (psi_derivative(r) * g / r);
        }
        out
    }

    /// Radial profile `phi(r)` for a point at distance `r`.
    pub fn phi_radial(&self, r: f64) -> f64 {
        self.phi(Vec2::new(r, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::quad::composite;

    #[test]
    fn support_and_symmetry() {
        let k = KernelSuite::new(0.3).unwrap();
        assert_eq!(k.support_radius(), 1.0);
        assert_eq!(k.phi(Vec2::new(1.5, 0.0)), 0.0);
        assert_eq!(k.phi(Vec2::new(0.0, 1.0)), 0.0);
        let a = k.phi(Vec2::new(0.3, 0.4));
        let b = k.phi(Vec2::new(-0.5, 0.0));
        assert!((a - b).abs() < 1e-15 * a.max(1.0));
    }

    #[test]
    fn integrates_to_one_by_product_gauss() {
        for eps in [0.02, 0.05, 0.2, 0.4] {
            let k = KernelSuite::new(eps).unwrap();
            let r = k.support_radius();
            let panels = 48;
            let v = composite(-r, r, panels, 8, |x| {
                composite(-r, r, panels, 8, |y| k.phi(Vec2::new(x, y)))
            });
            assert!((v - 1.0).abs() < 1e-6, "eps={eps} integral={v}");
        }
    }

    #[test]
    fn normalization_excess_matches_tail_oracle() {
        let k = KernelSuite::new(0.05).unwrap();
        assert!(k.c_eps() >= 1.0);
        let ex = k.c_eps_excess();
        assert!(ex > 0.0 && ex < 1e-8);
        // Independent oracle: scaled radial tail by a fine composite rule.
        let s2 = 0.05f64 * 0.05;
        let scale = (-1.0 / (8.0 * s2)).exp();
        let tail = composite(0.5, 1.0, 400, 8, |r| {
            (1.0 - psi(r)) * r / s2 * ((-r * r / (2.0 * s2)) + 1.0 / (8.0 * s2)).exp()
        }) * scale
            + (-1.0 / (2.0 * s2)).exp();
        assert!((ex - tail).abs() < 1e-6 * tail, "excess={ex} oracle={tail}");
        assert!(ex < (-1.0 / (8.0 * s2)).exp());
    }

    #[test]
    fn large_eps_normalization() {
        let k = KernelSuite::new(0.4).unwrap();
        assert!(k.c_eps() > 1.01 && k.c_eps() < 2.0);
        assert!(KernelSuite::new(1.0).is_err());
        assert!(KernelSuite::new(0.0).is_err());
    }

    fn fd_error(k: &KernelSuite, h: f64) -> (f64, f64) {
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..40 {
            let ang = 0.7 + i as f64 * 0.31;
            let r = k.support_radius() * (i as f64 + 0.5) / 41.0;
            let x = Vec2::new(r * ang.cos(), r * ang.sin());
            let g = k.grad_phi(x);
            let fd = Vec2::new(
                k.phi(x + Vec2::new(h, 0.0)) - k.phi(x - Vec2::new(h, 0.0)),
                k.phi(x + Vec2::new(0.0, h)) - k.phi(x - Vec2::new(0.0, h)),
            ) / (2.0 * h);
            worst = worst.max((g - fd).norm());
            scale = scale.max(g.norm());
        }
        (worst, scale)
    }

    #[test]
    fn gradient_matches_central_differences() {
        for eps in [0.02, 0.05, 0.3] {
            let k = KernelSuite::new(eps).unwrap();
            let (e1, scale) = fd_error(&k, eps / 100.0);
            let (e2, _) = fd_error(&k, eps / 200.0);
            assert!(e1 <= 2e-4 * scale, "eps={eps} worst={e1} scale={scale}");
            assert!(e1 / e2 > 3.5, "not second order: {e1} vs {e2}");
        }
    }
}
