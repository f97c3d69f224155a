use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

use nalgebra::Matrix2;
use rayon::prelude::*;

use super::DiscreteVarifold;
use crate::error::NumericError;
use crate::geometry::{BBox, PointGrid, Vec2};
use crate::kernels::{KernelSuite, WeightOmega};

const TILE: i64 = 16;

type TileKey = (i64, i64);

struct Tile {
    u: Vec<Vec2>,
    energy: Vec<f64>,
}

/// Maximum of the finite-difference Jacobian norm of `h_eps` over a set of
/// points.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientReport {
    pub max: f64,
    pub at: Vec2,
    pub per_point: Vec<f64>,
}

/// Smoothed mean curvature `h_eps` of one varifold.
///
/// The outer convolution is a midpoint rule on the global lattice of
/// spacing `eps / quad_factor`. The inner field
/// `u = (Phi * dV) / (Phi * |V| + eps / Omega)` is evaluated at lattice
/// nodes on demand and cached in square tiles, so repeated evaluations near
/// the same boundary share work.
pub struct CurvatureField {
    dv: DiscreteVarifold,
    suite: KernelSuite,
    omega: WeightOmega,
    spacing: f64,
    reach: f64,
    active: PointGrid,
    mass_points: Vec<(Vec2, f64)>,
    mass_grid: PointGrid,
    tiles: RwLock<HashMap<TileKey, Arc<Tile>>>,
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

impl CurvatureField {
    pub fn new(
        dv: DiscreteVarifold,
        suite: KernelSuite,
        omega: WeightOmega,
        quad_factor: f64,
    ) -> Self {
        let reach = suite.support_radius();
        let active = dv.active_grid(reach);
        let mass_points = dv.mass_points(0.75 * suite.eps());
        let mass_grid =
            PointGrid::new(reach, mass_points.iter().enumerate().map(|(i, p)| (i, p.0)));
        Self {
            spacing: suite.eps() / quad_factor,
            dv,
            suite,
            omega,
            reach,
            active,
            mass_points,
            mass_grid,
            tiles: RwLock::new(HashMap::new()),
        }
    }

    pub fn varifold(&self) -> &DiscreteVarifold {
        &self.dv
    }

    pub fn suite(&self) -> &KernelSuite {
        &self.suite
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// `h_eps` vanishes identically at points farther than this from every
    /// active vertex.
    pub fn influence_radius(&self) -> f64 {
        2.0 * self.reach
    }

    fn node(&self, i: i64, k: i64) -> Vec2 {
        Vec2::new(
            (i as f64 + 0.5) * self.spacing,
            (k as f64 + 0.5) * self.spacing,
        )
    }

    fn node_range(&self, lo: f64, hi: f64) -> (i64, i64) {
        (
            (lo / self.spacing - 0.5).floor() as i64,
            (hi / self.spacing - 0.5).ceil() as i64,
        )
    }

    fn influenced(&self, x: Vec2) -> bool {
        let r = self.influence_radius();
        self.active
            .query_disc(x, r)
            .iter()
            .any(|&v| (self.dv.vertices()[v] - x).norm() < r)
    }

    fn tiles_for(&self, x: Vec2, keys: &mut Vec<TileKey>) {
        let (i0, i1) = self.node_range(x.x - self.reach, x.x + self.reach);
        let (k0, k1) = self.node_range(x.y - self.reach, x.y + self.reach);
        for ti in floor_div(i0, TILE)..=floor_div(i1, TILE) {
            for tk in floor_div(k0, TILE)..=floor_div(k1, TILE) {
                keys.push((ti, tk));
            }
        }
    }

    fn compute_tile(&self, key: TileKey) -> Tile {
        let lo = self.node(key.0 * TILE, key.1 * TILE);
        let hi = self.node(key.0 * TILE + TILE - 1, key.1 * TILE + TILE - 1);
        let bx = BBox::new(lo, hi).expanded(self.reach);
        let verts = self.active.query_box(&bx);
        let masses = self.mass_grid.query_box(&bx);
        let eps = self.suite.eps();
        let r2 = self.reach * self.reach;
        let n = (TILE * TILE) as usize;
        let mut u = vec![Vec2::zeros(); n];
        let mut energy = vec![0.0; n];
        for a in 0..TILE {
            for b in 0..TILE {
                let z = self.node(key.0 * TILE + a, key.1 * TILE + b);
                let mut f = Vec2::zeros();
                for &v in &verts {
                    let d = self.dv.vertices()[v] - z;
                    if d.norm_squared() < r2 {
                        f -= self.dv.star(v) * self.suite.phi(d);
                    }
                }
                if f == Vec2::zeros() {
                    continue;
                }
                let mut w = 0.0;
                for &m in &masses {
                    let (p, wt) = self.mass_points[m];
                    let d = p - z;
                    if d.norm_squared() < r2 {
                        w += wt * self.suite.phi(d);
                    }
                }
                let om = self.omega.value(z);
                let denom = w + eps / om;
                let idx = (a * TILE + b) as usize;
                u[idx] = f / denom;
                energy[idx] = f.norm_squared() * om / denom;
            }
        }
        Tile { u, energy }
    }

    fn ensure(&self, keys: Vec<TileKey>) {
        let mut keys = keys;
        keys.sort_unstable();
        keys.dedup();
        let missing: Vec<TileKey> = {
            let map = self.tiles.read().unwrap();
            keys.into_iter().filter(|k| !map.contains_key(k)).collect()
        };
        if missing.is_empty() {
            return;
        }
        let computed: Vec<(TileKey, Tile)> = missing
            .into_par_iter()
            .map(|k| (k, self.compute_tile(k)))
            .collect();
        let mut map = self.tiles.write().unwrap();
        for (k, t) in computed {
            map.insert(k, Arc::new(t));
        }
    }

    fn eval_cached(&self, map: &HashMap<TileKey, Arc<Tile>>, x: Vec2) -> Vec2 {
        let r = self.reach;
        let (i0, i1) = self.node_range(x.x - r, x.x + r);
        let (k0, k1) = self.node_range(x.y - r, x.y + r);
        let eps = self.suite.eps();
        let factor = r <= 0.5;
        let two_s2 = 2.0 * eps * eps;
        let gx: Vec<f64> = if factor {
            (i0..=i1)
                .map(|i| (-(self.node(i, 0).x - x.x).powi(2) / two_s2).exp())
                .collect()
        } else {
            Vec::new()
        };
        let gy: Vec<f64> = if factor {
            (k0..=k1)
                .map(|k| (-(self.node(0, k).y - x.y).powi(2) / two_s2).exp())
                .collect()
        } else {
            Vec::new()
        };
        let norm = self.suite.c_eps() / (PI * two_s2);
        let r2 = r * r;
        let mut acc = Vec2::zeros();
        for ti in floor_div(i0, TILE)..=floor_div(i1, TILE) {
            for tk in floor_div(k0, TILE)..=floor_div(k1, TILE) {
                let tile = &map[&(ti, tk)];
                let (a0, a1) = ((ti * TILE).max(i0), (ti * TILE + TILE - 1).min(i1));
                let (b0, b1) = ((tk * TILE).max(k0), (tk * TILE + TILE - 1).min(k1));
                for i in a0..=a1 {
                    for k in b0..=b1 {
                        let u = tile.u[((i - ti * TILE) * TILE + (k - tk * TILE)) as usize];
                        if u == Vec2::zeros() {
                            continue;
                        }
                        let d = self.node(i, k) - x;
                        if d.norm_squared() >= r2 {
                            continue;
                        }
                        let w = if factor {
                            norm * gx[(i - i0) as usize] * gy[(k - k0) as usize]
                        } else {
                            self.suite.phi(d)
                        };
                        acc += u * w;
                    }
                }
            }
        }
        -acc * (self.spacing * self.spacing)
    }

    /// `h_eps` at each point, without the magnitude check.
    pub fn eval_unchecked(&self, points: &[Vec2]) -> Vec<Vec2> {
        let live: Vec<bool> = points.par_iter().map(|&x| self.influenced(x)).collect();
        let mut keys = Vec::new();
        for (x, l) in points.iter().zip(&live) {
            if *l {
                self.tiles_for(*x, &mut keys);
            }
        }
        self.ensure(keys);
        let map = self.tiles.read().unwrap();
        points
            .par_iter()
            .zip(live.par_iter())
            .map(|(&x, &l)| {
                if l {
                    self.eval_cached(&map, x)
                } else {
                    Vec2::zeros()
                }
            })
            .collect()
    }

    /// `h_eps` at each point; fails if `|h_eps| > 2 eps^-2` anywhere.
    pub fn eval_many(&self, points: &[Vec2]) -> Result<Vec<Vec2>, NumericError> {
        let h = self.eval_unchecked(points);
        let bound = 2.0 / self.suite.eps().powi(2);
        for (x, v) in points.iter().zip(&h) {
            let n = v.norm();
            if !n.is_finite() {
                return Err(NumericError::NonFinite { x: x.x, y: x.y });
            }
            if n > bound {
                return Err(NumericError::CurvatureBound {
                    value: n,
                    bound,
                    x: x.x,
                    y: x.y,
                });
            }
        }
        Ok(h)
    }

    pub fn eval(&self, x: Vec2) -> Result<Vec2, NumericError> {
        Ok(self.eval_many(&[x])?[0])
    }

    /// Central-difference Jacobians of `h_eps` with step `eps / 50`.
    pub fn jacobians(&self, points: &[Vec2]) -> Result<Vec<Matrix2<f64>>, NumericError> {
        let d = self.suite.eps() / 50.0;
        let ex = Vec2::new(d, 0.0);
        let ey = Vec2::new(0.0, d);
        let probes: Vec<Vec2> = points
            .iter()
            .flat_map(|&x| [x + ex, x - ex, x + ey, x - ey])
            .collect();
        let h = self.eval_many(&probes)?;
        Ok(h.chunks(4)
            .map(|c| {
                let cx = (c[0] - c[1]) / (2.0 * d);
                let cy = (c[2] - c[3]) / (2.0 * d);
                Matrix2::new(cx.x, cy.x, cx.y, cy.y)
            })
            .collect())
    }

    /// Largest finite-difference `|grad h_eps|`; fails if it exceeds
    /// `2 eps^-4`.
    pub fn gradient_bound_check(&self, points: &[Vec2]) -> Result<GradientReport, NumericError> {
        let jac = self.jacobians(points)?;
        let per_point: Vec<f64> = jac.iter().map(operator_norm).collect();
        let bound = 2.0 / self.suite.eps().powi(4);
        let mut report = GradientReport {
            max: 0.0,
            at: Vec2::zeros(),
            per_point,
        };
        for (x, g) in points.iter().zip(&report.per_point) {
            if *g > bound {
                return Err(NumericError::GradientBound {
                    value: *g,
                    bound,
                    x: x.x,
                    y: x.y,
                });
            }
            if *g > report.max {
                report.max = *g;
                report.at = *x;
            }
        }
        Ok(report)
    }

    /// Lattice quadrature of `|Phi * dV|^2 Omega / (Phi * |V| + eps / Omega)`.
    pub fn curvature_energy(&self) -> f64 {
        let mut keys = Vec::new();
        for &v in self.dv.active_vertices() {
            let p = self.dv.vertices()[v];
            let (i0, i1) = self.node_range(p.x - self.reach, p.x + self.reach);
            let (k0, k1) = self.node_range(p.y - self.reach, p.y + self.reach);
            for ti in floor_div(i0, TILE)..=floor_div(i1, TILE) {
                for tk in floor_div(k0, TILE)..=floor_div(k1, TILE) {
                    keys.push((ti, tk));
                }
            }
        }
        keys.sort_unstable();
        keys.dedup();
        self.ensure(keys.clone());
        let map = self.tiles.read().unwrap();
        let s2 = self.spacing * self.spacing;
        keys.iter()
            .map(|k| map[k].energy.iter().sum::<f64>())
            .sum::<f64>()
            * s2
    }

    /// Number of cached tiles.
    pub fn cached_tiles(&self) -> usize {
        self.tiles.read().unwrap().len()
    }
}

/// Largest singular value of a 2x2 matrix.
pub fn operator_norm(m: &Matrix2<f64>) -> f64 {
    let mtm = m.transpose() * m;
    let (a, b, d) = (mtm[(0, 0)], mtm[(0, 1)], mtm[(1, 1)]);
    let mean = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    (mean + rad).max(0.0).sqrt()
}

/// `h_eps(x)` for a single point with the default lattice (`quad_factor` 4).
pub fn smoothed_mean_curvature(
    dv: &DiscreteVarifold,
    suite: &KernelSuite,
    omega: &WeightOmega,
    x: Vec2,
) -> Result<Vec2, NumericError> {
    CurvatureField::new(dv.clone(), *suite, *omega, 4.0).eval(x)
}

/// Largest finite-difference `|grad h_eps|` over the samples.
pub fn mean_curvature_gradient_bound_check(
    dv: &DiscreteVarifold,
    suite: &KernelSuite,
    omega: &WeightOmega,
    points: &[Vec2],
) -> Result<GradientReport, NumericError> {
    CurvatureField::new(dv.clone(), *suite, *omega, 4.0).gradient_bound_check(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Edge, Label, LabeledNetwork};

    fn circle(n: usize, r: f64, center: Vec2) -> LabeledNetwork {
        let v = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                center + Vec2::new(r * t.cos(), r * t.sin())
            })
            .collect();
        let e = (0..n)
            .map(|k| Edge::new(k, (k + 1) % n, Label(1), Label(2)))
            .collect();
        LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap()
    }

    fn field(net: &LabeledNetwork, eps: f64) -> CurvatureField {
        CurvatureField::new(
            DiscreteVarifold::from_network(net),
            KernelSuite::new(eps).unwrap(),
            WeightOmega::constant_one(),
            4.0,
        )
    }

    #[test]
    fn circle_curvature_points_inward_with_magnitude_two() {
        let net = circle(256, 0.5, Vec2::zeros());
        let f = field(&net, 0.02);
        let pts: Vec<Vec2> = (0..256).step_by(17).map(|v| net.vertex(v)).collect();
        let h = f.eval_many(&pts).unwrap();
        for (p, v) in pts.iter().zip(&h) {
            let inward = -p / p.norm();
            assert!((v.norm() - 2.0).abs() < 0.1, "|h| = {}", v.norm());
            assert!(v.normalize().dot(&inward) > 0.999);
        }
    }

    #[test]
    fn straight_line_is_flat() {
        let pts: Vec<Vec2> = (0..=400)
            .map(|k| Vec2::new(-2.0 + 0.01 * k as f64, 0.0))
            .collect();
        let edges = (0..400)
            .map(|k| Edge::new(k, k + 1, Label(1), Label(2)))
            .collect();
        let net = LabeledNetwork::new(pts, edges, 2, Label(2), 0.0).unwrap();
        let f = field(&net, 0.02);
        let h = f.eval(Vec2::new(0.005, 0.0)).unwrap();
        assert!(h.norm() <= 1e-6 / (0.02 * 0.02));
        let g = f.gradient_bound_check(&[Vec2::new(0.3, 0.0)]).unwrap();
        assert!(g.max < 1e-6);
    }

    #[test]
    fn gradient_is_order_curvature_squared() {
        let net = circle(256, 0.5, Vec2::zeros());
        let f = field(&net, 0.02);
        let pts: Vec<Vec2> = (0..256).step_by(31).map(|v| net.vertex(v)).collect();
        let g = f.gradient_bound_check(&pts).unwrap();
        assert!(g.max < 2.0 / 0.02f64.powi(4));
        assert!(g.max > 1.0 && g.max < 40.0, "max grad {}", g.max);
    }

    #[test]
    fn reflection_symmetry() {
        // Circle centered on the x axis; h on the axis has no y component.
        let net = circle(200, 0.3, Vec2::new(0.1, 0.0));
        let f = field(&net, 0.03);
        for x in [
            Vec2::new(0.4, 0.0),
            Vec2::new(-0.2, 0.0),
            Vec2::new(0.38, 0.0),
        ] {
            let h = f.eval(x).unwrap();
            assert!(h.y.abs() <= 1e-8 * h.norm().max(1.0), "{h:?}");
        }
    }

    #[test]
    fn parallel_evaluation_is_deterministic() {
        let net = circle(128, 0.4, Vec2::new(0.05, -0.02));
        let pts: Vec<Vec2> = net.vertices().to_vec();
        let a = field(&net, 0.03).eval_many(&pts).unwrap();
        let f = field(&net, 0.03);
        let _ = f.eval_many(&pts[..10]).unwrap();
        let b = f.eval_many(&pts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn energy_of_circle() {
        // h is close to the curvature vector, so the energy is close to
        // the integral of |kappa|^2 = 2 pi / r.
        let net = circle(256, 0.5, Vec2::zeros());
        let e = field(&net, 0.02).curvature_energy();
        assert!((e - 4.0 * PI).abs() < 0.05 * 4.0 * PI, "energy {e}");
    }

    #[test]
    fn far_points_are_zero() {
        let net = circle(64, 0.2, Vec2::zeros());
        let f = field(&net, 0.02);
        assert_eq!(f.eval(Vec2::new(1.0, 1.0)).unwrap(), Vec2::zeros());
        assert_eq!(f.cached_tiles(), 0);
    }

    #[test]
    fn operator_norm_of_rotation_and_diagonal() {
        let rot = Matrix2::new(0.0, -2.0, 2.0, 0.0);
        assert!((operator_norm(&rot) - 2.0).abs() < 1e-14);
        let d = Matrix2::new(-3.0, 0.0, 0.0, 1.0);
        assert!((operator_norm(&d) - 3.0).abs() < 1e-14);
    }
}
