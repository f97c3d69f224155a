use nalgebra::Matrix2;

use crate::geometry::Vec2;
use crate::kernels::{Bump, ScalarField};

/// Space-time test function for the Brakke inequality.
pub trait TestFunction: Sync {
    fn value(&self, x: Vec2, t: f64) -> f64;
    fn grad(&self, x: Vec2, t: f64) -> Vec2;
    fn time_derivative(&self, _x: Vec2, _t: f64) -> f64 {
        0.0
    }
}

impl<F: ScalarField + Sync> TestFunction for F {
    fn value(&self, x: Vec2, _t: f64) -> f64 {
        ScalarField::value(self, x)
    }
    fn grad(&self, x: Vec2, _t: f64) -> Vec2 {
        ScalarField::grad(self, x)
    }
}

/// Equal to `amp` on the disc of radius `inner`, zero outside `outer`,
/// with a quintic smoothstep in `|x - center|^2` between.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plateau {
    pub center: Vec2,
    pub inner: f64,
    pub outer: f64,
    pub amp: f64,
}

impl Plateau {
    pub fn new(center: Vec2, inner: f64, outer: f64, amp: f64) -> Self {
        assert!(0.0 <= inner && inner < outer);
        Self {
            center,
            inner,
            outer,
            amp,
        }
    }

    /// `(p(u), p'(u), p''(u))` with `u` the normalized squared radius.
    fn profile(&self, x: Vec2) -> (f64, f64, f64, f64) {
        let (a2, b2) = (self.inner * self.inner, self.outer * self.outer);
        let u = ((x - self.center).norm_squared() - a2) / (b2 - a2);
        let du = 1.0 / (b2 - a2);
        if u <= 0.0 {
            return (1.0, 0.0, 0.0, du);
        }
        if u >= 1.0 {
            return (0.0, 0.0, 0.0, du);
        }
        let v = 1.0 - u;
        let p = v * v * v * (1.0 + 3.0 * u + 6.0 * u * u);
        let dp = -30.0 * u * u * (1.0 - u) * (1.0 - u);
        let ddp = -60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
        (p, dp, ddp, du)
    }
}

impl ScalarField for Plateau {
    fn value(&self, x: Vec2) -> f64 {
        self.amp * self.profile(x).0
    }

    fn grad(&self, x: Vec2) -> Vec2 {
        let (_, dp, _, du) = self.profile(x);
        (x - self.center) * (2.0 * du * dp * self.amp)
    }

    fn hessian(&self, x: Vec2) -> Matrix2<f64> {
        let (_, dp, ddp, du) = self.profile(x);
        let d = x - self.center;
        ((d * d.transpose()) * (4.0 * du * du * ddp) + Matrix2::identity() * (2.0 * du * dp))
            * self.amp
    }
}

/// Compactly supported C1 vector field.
pub trait VectorField: Sync {
    fn value(&self, x: Vec2) -> Vec2;
    fn jacobian(&self, x: Vec2) -> Matrix2<f64>;
}

/// `b(x) (x - center)` with `b` the cubic bump of the given radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialField {
    bump: Bump,
}

impl RadialField {
    pub fn new(center: Vec2, radius: f64) -> Self {
        Self {
            bump: Bump::new(center, radius, 1.0),
        }
    }
}

impl VectorField for RadialField {
    fn value(&self, x: Vec2) -> Vec2 {
        (x - self.bump.center) * ScalarField::value(&self.bump, x)
    }

    fn jacobian(&self, x: Vec2) -> Matrix2<f64> {
        let d = x - self.bump.center;
        Matrix2::identity() * ScalarField::value(&self.bump, x)
            + d * ScalarField::grad(&self.bump, x).transpose()
    }
}

/// Constant-direction field `b(x) v` with `b` a cubic bump.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftField {
    bump: Bump,
    direction: Vec2,
}

impl ShiftField {
    pub fn new(center: Vec2, radius: f64, direction: Vec2) -> Self {
        Self {
            bump: Bump::new(center, radius, 1.0),
            direction,
        }
    }
}

impl VectorField for ShiftField {
    fn value(&self, x: Vec2) -> Vec2 {
        self.direction * ScalarField::value(&self.bump, x)
    }

    fn jacobian(&self, x: Vec2) -> Matrix2<f64> {
        self.direction * ScalarField::grad(&self.bump, x).transpose()
    }
}
