//! The mollifier, the weight and the backwards heat kernel.

use grainflow::geometry::Vec2;
use grainflow::kernels::{clearing_out_theta0, HeatKernelQuery, KernelSuite, WeightOmega};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for eps in [0.05, 0.02, 0.01] {
        let k = KernelSuite::new(eps)?;
        // Radial mass of the truncated kernel by the midpoint rule.
        let n = 20_000;
        let dr = k.support_radius() / n as f64;
        let mass: f64 = (0..n)
            .map(|i| {
                let r = (i as f64 + 0.5) * dr;
                2.0 * std::f64::consts::PI * r * k.phi_radial(r) * dr
            })
            .sum();
        println!(
            "eps {eps}: support {:.3}, cutoff excess {:.3e}, mass {mass:.8}",
            k.support_radius(),
            k.c_eps_excess()
        );
    }

    let w = WeightOmega::exponential(64);
    for x in [Vec2::zeros(), Vec2::new(1.0, 0.0), Vec2::new(3.0, 4.0)] {
        println!(
            "Omega({:.0}, {:.0}) = {:.6}  |grad| = {:.6}",
            x.x,
            x.y,
            w.value(x),
            w.grad(x).norm()
        );
    }
    println!("c1 = {:.4}", w.c1());

    let q = HeatKernelQuery::new(Vec2::zeros(), 0.01, 0.2, 0.01)?;
    for t in [0.0, 0.005, 0.009] {
        println!(
            "rho_hat(0.05, 0; t = {t}) = {:.5}",
            q.rho_hat(Vec2::new(0.05, 0.0), t)?
        );
    }
    println!(
        "clearing-out theta0(0.01) = {:.5}",
        clearing_out_theta0(0.01)
    );
    Ok(())
}
