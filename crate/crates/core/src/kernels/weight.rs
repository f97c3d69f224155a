use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::quad::composite;
use crate::geometry::Vec2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightVariant {
    ConstantOne,
    Exponential,
}

/// Positive weight `Omega <= 1` used to measure boundary mass, with the
/// constant `c1` bounding `|grad Omega| / Omega` and `|hess Omega| / Omega`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightOmega {
    variant: WeightVariant,
    c1: f64,
}

/// Largest absolute eigenvalue of a symmetric 2x2 matrix.
pub fn spectral_norm(m: &Matrix2<f64>) -> f64 {
    let (a, b, d) = (m[(0, 0)], 0.5 * (m[(0, 1)] + m[(1, 0)]), m[(1, 1)]);
    let mean = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    (mean + rad).abs().max((mean - rad).abs())
}

impl WeightOmega {
    pub fn constant_one() -> Self {
        Self {
            variant: WeightVariant::ConstantOne,
            c1: 0.0,
        }
    }

    /// `Omega(x) = exp(-sqrt(1 + |x|^2))`, with `c1` set to 1.01 times the
    /// largest derivative ratio found on a `grid x grid` lattice over
    /// `[-10, 10]^2`.
    pub fn exponential(grid: usize) -> Self {
        let mut w = Self {
            variant: WeightVariant::Exponential,
            c1: 0.0,
        };
        w.c1 = 1.01 * w.max_derivative_ratio(grid, 10.0);
        w
    }

    pub fn from_variant(variant: WeightVariant, grid: usize) -> Self {
        match variant {
            WeightVariant::ConstantOne => Self::constant_one(),
            WeightVariant::Exponential => Self::exponential(grid),
        }
    }

    pub fn variant(&self) -> WeightVariant {
        self.variant
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn is_constant(&self) -> bool {
        self.variant == WeightVariant::ConstantOne
    }

    pub fn value(&self, x: Vec2) -> f64 {
        match self.variant {
            WeightVariant::ConstantOne => 1.0,
            WeightVariant::Exponential => (-(1.0 + x.norm_squared()).sqrt()).exp(),
        }
    }

    pub fn grad(&self, x: Vec2) -> Vec2 {
        match self.variant {
            WeightVariant::ConstantOne => Vec2::zeros(),
            WeightVariant::Exponential => {
                let s = (1.0 + x.norm_squared()).sqrt();
                -x * ((-s).exp() / s)
            }
        }
    }

    pub fn hessian(&self, x: Vec2) -> Matrix2<f64> {
        match self.variant {
            WeightVariant::ConstantOne => Matrix2::zeros(),
            WeightVariant::Exponential => {
                let s = (1.0 + x.norm_squared()).sqrt();
                let w = (-s).exp();
                let xx = x * x.transpose();
                (xx / (s * s) - Matrix2::identity() / s + xx / (s * s * s)) * w
            }
        }
    }

    /// `max(|grad Omega| / Omega, |hess Omega| / Omega)` over a square
    /// lattice of `grid x grid` points on `[-half, half]^2`.
    pub fn max_derivative_ratio(&self, grid: usize, half: f64) -> f64 {
        let mut m = 0.0f64;
        let step = 2.0 * half / (grid.max(2) - 1) as f64;
        for i in 0..grid {
            for k in 0..grid {
                let x = Vec2::new(-half + i as f64 * step, -half + k as f64 * step);
                let w = self.value(x);
                m = m
                    .max(self.grad(x).norm() / w)
                    .max(spectral_norm(&self.hessian(x)) / w);
            }
        }
        m
    }

    /// `int_[a,b] Omega dH^1`.
    pub fn segment_integral(&self, a: Vec2, b: Vec2) -> f64 {
        let len = (b - a).norm();
        match self.variant {
            WeightVariant::ConstantOne => len,
            WeightVariant::Exponential => {
                let panels = (len / 0.25).ceil().max(1.0) as usize;
                len * composite(0.0, 1.0, panels, 5, |t| self.value(a + (b - a) * t))
            }
        }
    }

    /// Lower bound of `Omega` over a box.
    pub fn min_over_box(&self, lo: Vec2, hi: Vec2) -> f64 {
        let far = Vec2::new(lo.x.abs().max(hi.x.abs()), lo.y.abs().max(hi.y.abs()));
        self.value(far)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_weight() {
        let w = WeightOmega::constant_one();
        assert_eq!(w.c1(), 0.0);
        assert_eq!(
            w.segment_integral(Vec2::new(0.0, 0.0), Vec2::new(3.0, 4.0)),
            5.0
        );
    }

    #[test]
    fn exponential_bounds_on_validation_grid() {
        let w = WeightOmega::exponential(201);
        // The ratios peak at the origin where both equal 1.
        assert!((w.c1() - 1.01).abs() < 1e-12);
        for i in 0..201 {
            for k in 0..201 {
                let x = Vec2::new(-10.0 + 0.1 * i as f64, -10.0 + 0.1 * k as f64);
                let v = w.value(x);
                assert!(v > 0.0 && v <= 1.0);
                assert!(w.grad(x).norm() <= w.c1() * v);
                assert!(spectral_norm(&w.hessian(x)) <= w.c1() * v);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let w = WeightOmega::exponential(11);
        let h = 1e-5;
        for x in [
            Vec2::new(0.3, -0.7),
            Vec2::new(2.0, 1.0),
            Vec2::new(-4.0, 0.1),
        ] {
            let fd = Vec2::new(
                w.value(x + Vec2::new(h, 0.0)) - w.value(x - Vec2::new(h, 0.0)),
                w.value(x + Vec2::new(0.0, h)) - w.value(x - Vec2::new(0.0, h)),
            ) / (2.0 * h);
            assert!((fd - w.grad(x)).norm() < 1e-9);
            let gx = (w.grad(x + Vec2::new(h, 0.0)) - w.grad(x - Vec2::new(h, 0.0))) / (2.0 * h);
            let hs = w.hessian(x);
            assert!((gx.x - hs[(0, 0)]).abs() < 1e-8 && (gx.y - hs[(1, 0)]).abs() < 1e-8);
        }
    }

    #[test]
    fn exponential_segment_integral_matches_adaptive_oracle() {
        let w = WeightOmega::exponential(11);
        let (a, b) = (Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0));
        let oracle =
            quadrature::integrate(|x: f64| (-(1.0 + x * x).sqrt()).exp(), 0.0, 1.0, 1e-14).integral;
        assert!((w.segment_integral(a, b) - oracle).abs() < 1e-8);
    }
}
