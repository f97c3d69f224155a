//! Smooth radial cutoff profiles built from one C-infinity step.

use std::sync::OnceLock;

use super::quad::composite;

const STEEPNESS: f64 = 0.1;
const TABLE: usize = 4096;

fn bump(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        (-STEEPNESS / (x * (1.0 - x))).exp()
    }
}

struct StepTable {
    cumulative: Vec<f64>,
    total: f64,
}

fn table() -> &'static StepTable {
    static T: OnceLock<StepTable> = OnceLock::new();
    T.get_or_init(|| {
        let h = 1.0 / TABLE as f64;
        let mut cumulative = Vec::with_capacity(TABLE + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for k in 0..TABLE {
            let a = k as f64 * h;
            acc += composite(a, a + h, 1, 8, bump);
            cumulative.push(acc);
        }
        StepTable {
            total: acc,
            cumulative,
        }
    })
}

/// Smooth monotone step: 0 for `x <= 0`, 1 for `x >= 1`, all derivatives
/// vanishing at both ends.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let t = table();
    let h = 1.0 / TABLE as f64;
    let k = ((x / h) as usize).min(TABLE - 1);
    let x0 = k as f64 * h;
    let s = (x - x0) / h;
    let (p0, p1) = (t.cumulative[k], t.cumulative[k + 1]);
    let (m0, m1) = (bump(x0) * h, bump(x0 + h) * h);
    let s2 = s * s;
    let s3 = s2 * s;
    let v = (2.0 * s3 - 3.0 * s2 + 1.0) * p0
        + (s3 - 2.0 * s2 + s) * m0
        + (-2.0 * s3 + 3.0 * s2) * p1
        + (s3 - s2) * m1;
    (v / t.total).clamp(0.0, 1.0)
}

pub fn smooth_step_derivative(x: f64) -> f64 {
    bump(x) / table().total
}

/// Largest slope of [`smooth_step`].
pub fn smooth_step_max_slope() -> f64 {
    smooth_step_derivative(0.5)
}

/// Mollifier cutoff: 1 on `r <= 1/2`, 0 on `r >= 1`.
pub fn psi(r: f64) -> f64 {
    1.0 - smooth_step(2.0 * r - 1.0)
}

pub fn psi_derivative(r: f64) -> f64 {
    -2.0 * smooth_step_derivative(2.0 * r - 1.0)
}

/// Heat-kernel truncation: 1 on `r <= 1`, 0 on `r >= 2`.
pub fn eta(r: f64) -> f64 {
    1.0 - smooth_step(r - 1.0)
}

pub fn eta_derivative(r: f64) -> f64 {
    -smooth_step_derivative(r - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_endpoints_and_symmetry() {
        assert_eq!(smooth_step(-0.1), 0.0);
        assert_eq!(smooth_step(1.3), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-12);
        for k in 1..100 {
            let x = k as f64 / 100.0;
            assert!((smooth_step(x) + smooth_step(1.0 - x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn step_is_monotone_and_matches_adaptive_integral() {
        let total = quadrature::integrate(bump, 0.0, 1.0, 1e-14).integral;
        let mut prev = 0.0;
        for k in 0..=1000 {
            let x = k as f64 / 1000.0;
            let s = smooth_step(x);
            assert!(s >= prev);
            prev = s;
            if k % 37 == 0 {
                let oracle = quadrature::integrate(bump, 0.0, x, 1e-14).integral / total;
                assert!((s - oracle).abs() < 1e-11, "x={x} s={s} oracle={oracle}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for k in 1..50 {
            let x = k as f64 / 50.0;
            let h = 1e-5;
            let fd = (smooth_step(x + h) - smooth_step(x - h)) / (2.0 * h);
            assert!((fd - smooth_step_derivative(x)).abs() < 1e-6);
        }
    }

    #[test]
    fn cutoff_slopes() {
        let m = smooth_step_max_slope();
        assert!((m - 1.354).abs() < 1e-3);
        assert!(2.0 * m <= 3.0);
        assert!(m <= 2.0);
        assert_eq!(psi(0.4), 1.0);
        assert_eq!(psi(1.0), 0.0);
        assert_eq!(eta(1.0), 1.0);
        assert_eq!(eta(2.0), 0.0);
    }
}
