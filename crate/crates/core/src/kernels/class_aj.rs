use nalgebra::Matrix2;

use super::weight::{spectral_norm, WeightOmega};
use crate::geometry::Vec2;

/// A C2 scalar field with analytic derivatives.
pub trait ScalarField {
    fn value(&self, x: Vec2) -> f64;
    fn grad(&self, x: Vec2) -> Vec2;
    fn hessian(&self, x: Vec2) -> Matrix2<f64>;
}

impl ScalarField for WeightOmega {
    fn value(&self, x: Vec2) -> f64 {
        WeightOmega::value(self, x)
    }
    fn grad(&self, x: Vec2) -> Vec2 {
        WeightOmega::grad(self, x)
    }
    fn hessian(&self, x: Vec2) -> Matrix2<f64> {
        WeightOmega::hessian(self, x)
    }
}

/// `amp * (1 - |x - center|^2 / R^2)^3` inside the disc, 0 outside.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump {
    pub center: Vec2,
    pub radius: f64,
    pub amp: f64,
}

impl Bump {
    pub fn new(center: Vec2, radius: f64, amp: f64) -> Self {
        Self {
            center,
            radius,
            amp,
        }
    }
}

impl ScalarField for Bump {
    fn value(&self, x: Vec2) -> f64 {
        let q = 1.0 - (x - self.center).norm_squared() / (self.radius * self.radius);
        if q <= 0.0 {
            0.0
        } else {
            self.amp * q * q * q
        }
    }

    fn grad(&self, x: Vec2) -> Vec2 {
        let r2 = self.radius * self.radius;
        let d = x - self.center;
        let q = 1.0 - d.norm_squared() / r2;
        if q <= 0.0 {
            Vec2::zeros()
        } else {
            d * (-6.0 * self.amp * q * q / r2)
        }
    }

    fn hessian(&self, x: Vec2) -> Matrix2<f64> {
        let r2 = self.radius * self.radius;
        let d = x - self.center;
        let q = 1.0 - d.norm_squared() / r2;
        if q <= 0.0 {
            Matrix2::zeros()
        } else {
            (d * d.transpose()) * (24.0 * self.amp * q / (r2 * r2))
                - Matrix2::identity() * (6.0 * self.amp * q * q / r2)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AjViolation {
    AboveWeight { value: f64, omega: f64 },
    Gradient { norm: f64, bound: f64 },
    Hessian { norm: f64, bound: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AjReport {
    pub pass: bool,
    pub witness: Option<(Vec2, AjViolation)>,
    pub samples: usize,
}

/// Pointwise check of `phi <= Omega`, `|grad phi| <= j phi` and
/// `|hess phi| <= j phi` on the given samples. Stops at the first violation.
pub fn aj_membership(
    phi: &dyn ScalarField,
    omega: &WeightOmega,
    j: f64,
    samples: &[Vec2],
) -> AjReport {
    let tol = 1e-12;
    for &x in samples {
        let v = phi.value(x);
        let w = omega.value(x);
        let violation = if v > w * (1.0 + tol) {
            Some(AjViolation::AboveWeight { value: v, omega: w })
        } else {
            let g = phi.grad(x).norm();
            let h = spectral_norm(&phi.hessian(x));
            let bound = j * v;
            if g > bound * (1.0 + tol) + tol * f64::MIN_POSITIVE {
                Some(AjViolation::Gradient { norm: g, bound })
            } else if h > bound * (1.0 + tol) + tol * f64::MIN_POSITIVE {
                Some(AjViolation::Hessian { norm: h, bound })
            } else {
                None
            }
        };
        if let Some(viol) = violation {
            return AjReport {
                pass: false,
                witness: Some((x, viol)),
                samples: samples.len(),
            };
        }
    }
    AjReport {
        pass: true,
        witness: None,
        samples: samples.len(),
    }
}

/// Uniform lattice of `n x n` points over `[lo, hi]`.
pub fn lattice(lo: Vec2, hi: Vec2, n: usize) -> Vec<Vec2> {
    let d = (hi - lo) / (n.max(2) - 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            out.push(Vec2::new(lo.x + i as f64 * d.x, lo.y + k as f64 * d.y));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<Vec2> {
        lattice(Vec2::new(-10.0, -10.0), Vec2::new(10.0, 10.0), 201)
    }

    #[test]
    fn omega_in_aj_for_j_at_least_c1() {
        let w = WeightOmega::exponential(201);
        let r = aj_membership(&w, &w, w.c1().ceil(), &grid());
        assert!(r.pass, "{:?}", r.witness);
        assert!(aj_membership(&w, &w, w.c1(), &grid()).pass);
    }

    #[test]
    fn omega_fails_for_j_zero() {
        let w = WeightOmega::exponential(201);
        let r = aj_membership(&w, &w, 0.0, &grid());
        assert!(!r.pass);
        assert!(matches!(r.witness, Some((_, AjViolation::Gradient { .. }))));
    }

    #[test]
    fn bump_fails_near_support_edge() {
        let w = WeightOmega::constant_one();
        let b = Bump::new(Vec2::zeros(), 1.0, 0.5);
        // Along a ray, |grad b| / b = 6r / q and the radial Hessian ratio is
        // |24 r^2 / q^2 - 6 / q| with q = 1 - r^2; both blow up as r -> 1.
        let ratio = |r: f64| {
            let q = 1.0 - r * r;
            (6.0 * r / q)
                .max((24.0 * r * r / (q * q) - 6.0 / q).abs())
                .max(6.0 / q)
        };
        let j = 50.0;
        let samples: Vec<Vec2> = (0..200).map(|k| Vec2::new(k as f64 / 200.0, 0.0)).collect();
        let r = aj_membership(&b, &w, j, &samples);
        assert!(!r.pass);
        let (x, _) = r.witness.unwrap();
        assert!(x.x > 0.5 && x.x < 1.0);
        assert!(ratio(x.x) > j);
        assert!(ratio(x.x - 1.0 / 200.0) <= j);
    }

    #[test]
    fn bump_derivatives_match_finite_differences() {
        let b = Bump::new(Vec2::new(0.1, 0.2), 0.7, 1.3);
        let h = 1e-6;
        for x in [Vec2::new(0.3, 0.1), Vec2::new(-0.2, 0.4)] {
            let fd = Vec2::new(
                b.value(x + Vec2::new(h, 0.0)) - b.value(x - Vec2::new(h, 0.0)),
                b.value(x + Vec2::new(0.0, h)) - b.value(x - Vec2::new(0.0, h)),
            ) / (2.0 * h);
            assert!((fd - b.grad(x)).norm() < 1e-7);
            let gy = (b.grad(x + Vec2::new(0.0, h)) - b.grad(x - Vec2::new(0.0, h))) / (2.0 * h);
            let hs = b.hessian(x);
            assert!((gy.x - hs[(0, 1)]).abs() < 1e-6 && (gy.y - hs[(1, 1)]).abs() < 1e-6);
        }
    }
}
