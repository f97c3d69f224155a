use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

/// Gauss-Legendre nodes and weights on `[-1, 1]` for a few fixed orders.
pub fn gauss_rule(order: usize) -> &'static [(f64, f64)] {
    static R3: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static R5: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static R8: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static R20: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    let cell = match order {
        3 => &R3,
        5 => &R5,
        8 => &R8,
        20 => &R20,
        _ => panic!("unsupported Gauss-Legendre order {order}"),
    };
    cell.get_or_init(|| {
        let mut v: Vec<(f64, f64)> = GaussLegendre::new(NonZeroUsize::new(order).unwrap())
            .as_node_weight_pairs()
            .to_vec();
        v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        v
    })
}

/// Composite Gauss-Legendre rule on `[a, b]` with `panels` equal panels.
pub fn composite<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
    mut f: F,
) -> f64 {
    let rule = gauss_rule(order);
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * h;
        for (x, w) in rule {
            s += w * f(c + 0.5 * h * x);
        }
    }
    0.5 * h * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let v = composite(0.0, 2.0, 1, 3, |x| x.powi(5));
        assert!((v - 64.0 / 6.0).abs() < 1e-12);
        let w: f64 = gauss_rule(20).iter().map(|p| p.1).sum();
        assert!((w - 2.0).abs() < 1e-14);
    }
}
