use serde::Serialize;

use super::fields::{TestFunction, VectorField};
use super::sampling::{sample_frames, FrameSample};
use crate::error::DiagnosticsError;
use crate::geometry::{
    mass_in_ball, point_segment_distance, right_normal, signed_areas, Label, LabeledNetwork,
    SegmentGrid, Vec2,
};
use crate::kernels::quad::composite;
use crate::kernels::{clearing_out_theta0, HeatKernelQuery, KernelSuite, WeightOmega};
use crate::stepper::{EpochRecord, FlowSettings, Trajectory};

fn same_time(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-3)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BrakkeResidual {
    pub t1: f64,
    pub t2: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// `int int phi |h|^2`, the scale of the tolerance.
    pub dissipation: f64,
    pub tol: f64,
    /// Set when the interval contains deformation moves or surgeries; the
    /// check is then one-sided.
    pub deformed: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeIdentity {
    pub label: Label,
    pub t1: f64,
    pub t2: f64,
    pub dvol: f64,
    pub flux: f64,
    pub residual: f64,
    /// Certified deformation budget plus recorded resampling and surgery
    /// area changes in the window.
    pub ledger: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HuiskenResidual {
    pub y: [f64; 2],
    pub s: f64,
    pub r: f64,
    pub t1: f64,
    pub t2: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub c_n: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClearingOut {
    pub y: [f64; 2],
    pub t: f64,
    pub r: f64,
    pub delta0: f64,
    pub kernel_mass: f64,
    /// Kernel mass below one half.
    pub predicted: bool,
    pub target: f64,
    /// Distance from `y` to the network at `target`; infinite once extinct,
    /// absent when the trajectory ends earlier.
    pub distance: Option<f64>,
    pub outcome: Option<bool>,
    pub density: f64,
    pub theta0: f64,
    pub density_predicted: bool,
    pub density_target: f64,
    pub density_distance: Option<f64>,
    pub density_outcome: Option<bool>,
}

impl ClearingOut {
    /// False only for an issued prediction that the trajectory contradicts.
    pub fn kernel_ok(&self) -> bool {
        !self.predicted || self.outcome != Some(false)
    }

    pub fn density_ok(&self) -> bool {
        !self.density_predicted || self.density_outcome != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangentialReport {
    pub sup: f64,
    pub mean: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BvChecks {
    pub t1: f64,
    pub t2: f64,
    /// Velocities come from one `h_eps` value per point shared by both
    /// grains, so `v_i nu_i = v_j nu_j` holds identically.
    pub reflection: bool,
    pub weak_residual: f64,
    /// `int int |grad g|`.
    pub weak_scale: f64,
    /// `H1(t2) + int int |v|^2` and `H1(t1)` on the reduced boundary.
    pub dissipation_lhs: f64,
    pub dissipation_rhs: f64,
}

/// A trajectory together with `h_eps` sampled on every stored frame.
pub struct SampledTrajectory<'a> {
    traj: &'a Trajectory,
    samples: Vec<FrameSample>,
    suite: KernelSuite,
    j: u32,
}

impl<'a> SampledTrajectory<'a> {
    pub fn new(traj: &'a Trajectory, flow: &FlowSettings) -> Result<Self, DiagnosticsError> {
        if traj.frames.is_empty() {
            return Err(DiagnosticsError::EmptyTrajectory);
        }
        let suite = KernelSuite::new(flow.eps)?;
        let w: WeightOmega = flow.weight();
        let samples = sample_frames(&traj.frames, &suite, &w, flow.quad_factor);
        Ok(Self {
            traj,
            samples,
            suite,
            j: flow.j,
        })
    }

    pub fn trajectory(&self) -> &Trajectory {
        self.traj
    }

    pub fn samples(&self) -> &[FrameSample] {
        &self.samples
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn eps(&self) -> f64 {
        self.suite.eps()
    }

    fn frame_index(&self, t: f64) -> Result<usize, DiagnosticsError> {
        self.samples
            .iter()
            .position(|s| same_time(s.t, t))
            .ok_or(DiagnosticsError::InvalidWindow { t1: t, t2: t })
    }

    fn window(&self, t1: f64, t2: f64) -> Result<(usize, usize), DiagnosticsError> {
        if !(t1 < t2) {
            return Err(DiagnosticsError::InvalidWindow { t1, t2 });
        }
        let bad = || DiagnosticsError::InvalidWindow { t1, t2 };
        let i1 = self.frame_index(t1).map_err(|_| bad())?;
        let i2 = self.frame_index(t2).map_err(|_| bad())?;
        Ok((i1, i2))
    }

    fn records_in(&self, t1: f64, t2: f64) -> impl Iterator<Item = &EpochRecord> + '_ {
        self.traj
            .records
            .iter()
            .filter(move |r| r.t_start >= t1 - 1e-12 && r.t <= t2 + 1e-9 * t2.abs().max(1e-3))
    }

    fn check_nonnegative(
        &self,
        phi: &dyn TestFunction,
        i1: usize,
        i2: usize,
    ) -> Result<(), DiagnosticsError> {
        for i in i1..=i2 {
            let (s, net) = (&self.samples[i], &self.traj.frames[i].net);
            let pts = s.points.iter().chain(net.vertices());
            let lattice: Vec<Vec2> = match net.bbox() {
                Some(b) => {
                    let b = b.expanded(0.1 * b.diameter().max(1e-3));
                    crate::kernels::lattice(b.min, b.max, 21)
                }
                None => Vec::new(),
            };
            for x in pts.chain(lattice.iter()) {
                if phi.value(*x, s.t) < 0.0 {
                    return Err(DiagnosticsError::NegativeTestFunction { x: x.x, y: x.y });
                }
            }
        }
        Ok(())
    }

    /// Brakke inequality on `[t1, t2]` against `phi`, with the time
    /// integral taken by the trapezoid rule over stored frames.
    pub fn brakke_residual(
        &self,
        phi: &dyn TestFunction,
        t1: f64,
        t2: f64,
        tol_rel: f64,
    ) -> Result<BrakkeResidual, DiagnosticsError> {
        let (i1, i2) = self.window(t1, t2)?;
        self.check_nonnegative(phi, i1, i2)?;
        let m1 = self.samples[i1].mass(|x| phi.value(x, self.samples[i1].t));
        let m2 = self.samples[i2].mass(|x| phi.value(x, self.samples[i2].t));
        let rates: Vec<(f64, f64)> = (i1..=i2)
            .map(|k| {
                let s = &self.samples[k];
                let r = s.integrate(|x, h, _| {
                    -phi.value(x, s.t) * h.norm_squared()
                        + phi.grad(x, s.t).dot(&h)
                        + phi.time_derivative(x, s.t)
                });
                (
                    r,
                    s.integrate(|x, h, _| phi.value(x, s.t) * h.norm_squared()),
                )
            })
            .collect();
        let (mut rhs, mut diss) = (0.0, 0.0);
        for k in 0..rates.len() - 1 {
            let dt = self.samples[i1 + k + 1].t - self.samples[i1 + k].t;
            rhs += 0.5 * dt * (rates[k].0 + rates[k + 1].0);
            diss += 0.5 * dt * (rates[k].1 + rates[k + 1].1);
        }
        let lhs = m2 - m1;
        let residual = lhs - rhs;
        let deformed = self.records_in(t1, t2).any(|r| r.deformed());
        let tol = tol_rel * diss + 1e-9 * m1.max(m2);
        let pass = if deformed {
            residual <= tol
        } else {
            residual.abs() <= tol
        };
        Ok(BrakkeResidual {
            t1,
            t2,
            lhs,
            rhs,
            residual,
            dissipation: diss,
            tol,
            deformed,
            pass,
        })
    }

    fn area_at(&self, label: Label, t: f64) -> Result<f64, DiagnosticsError> {
        let from_net = |net: &LabeledNetwork| {
            signed_areas(net)
                .iter()
                .find(|a| a.0 == label)
                .map_or(0.0, |a| a.1)
        };
        if same_time(t, self.samples[0].t) {
            return Ok(from_net(&self.traj.frames[0].net));
        }
        if let Some(r) = self.traj.records.iter().find(|r| same_time(r.t, t)) {
            return Ok(r
                .grains
                .iter()
                .find(|g| g.label == label)
                .map_or(0.0, |g| g.area));
        }
        let i = self.frame_index(t)?;
        Ok(from_net(&self.traj.frames[i].net))
    }

    /// `Vol(t2) - Vol(t1)` of a bounded grain against the accumulated
    /// curvature flux `sum dt sum |e| (h . nu)`.
    pub fn volume_identity_residual(
        &self,
        label: Label,
        t1: f64,
        t2: f64,
        tol_rel: f64,
    ) -> Result<VolumeIdentity, DiagnosticsError> {
        if self.traj.frames[0].net.is_exterior(label) {
            return Err(DiagnosticsError::ExteriorGrain(label));
        }
        if !(t1 < t2) {
            return Err(DiagnosticsError::InvalidWindow { t1, t2 });
        }
        let a1 = self
            .area_at(label, t1)
            .map_err(|_| DiagnosticsError::InvalidWindow { t1, t2 })?;
        let a2 = self
            .area_at(label, t2)
            .map_err(|_| DiagnosticsError::InvalidWindow { t1, t2 })?;
        let (mut flux, mut ledger) = (0.0, 0.0);
        for r in self.records_in(t1, t2) {
            if let Some(g) = r.grains.iter().find(|g| g.label == label) {
                flux += g.flux;
                ledger += g.resample_delta.abs() + g.surgery_delta.abs();
                if g.deform_delta != 0.0 {
                    ledger += r.drop / self.j as f64;
                }
            }
        }
        let dvol = a2 - a1;
        let residual = dvol - flux;
        let tol = tol_rel * dvol.abs() + ledger + 1e-12 * a1.abs().max(a2.abs());
        Ok(VolumeIdentity {
            label,
            t1,
            t2,
            dvol,
            flux,
            residual,
            ledger,
            tol,
            pass: residual.abs() <= tol,
        })
    }

    /// Monotonicity of the truncated backwards heat kernel mass centered
    /// at `(y, s)`.
    #[allow(clippy::too_many_arguments)]
    pub fn huisken_residual(
        &self,
        y: Vec2,
        s: f64,
        r: f64,
        t1: f64,
        t2: f64,
        c_n: f64,
        tol: f64,
    ) -> Result<HuiskenResidual, DiagnosticsError> {
        if t2 >= s {
            return Err(DiagnosticsError::ReferenceTime { t2, s });
        }
        let (i1, i2) = self.window(t1, t2)?;
        let q = HeatKernelQuery::new(y, s, r, 0.0)?;
        let mass = |i: usize| -> Result<f64, DiagnosticsError> {
            let t = self.samples[i].t;
            let scale = (s - t).sqrt();
            let net = &self.traj.frames[i].net;
            let mut sum = 0.0;
            for e in 0..net.edges().len() {
                let (a, b) = net.segment(e);
                if point_segment_distance(y, a, b) >= 2.0 * r {
                    continue;
                }
                let len = (b - a).norm();
                let panels = (len / (0.25 * scale)).ceil().clamp(1.0, 1e5) as usize;
                let mut err = None;
                let v = composite(0.0, len, panels, 8, |u| {
                    match q.rho_hat(a + (b - a) * (u / len), t) {
                        Ok(v) => v,
                        Err(e) => {
                            err = Some(e);
                            0.0
                        }
                    }
                });
                if let Some(e) = err {
                    return Err(e.into());
                }
                sum += v;
            }
            Ok(sum)
        };
        let lhs = mass(i2)? - mass(i1)?;
        let sup = (i1..=i2)
            .map(|i| mass_in_ball(&self.traj.frames[i].net, None, y, 2.0 * r) / r)
            .fold(0.0, f64::max);
        let rhs = c_n / (r * r) * (t2 - t1) * sup;
        let residual = lhs - rhs;
        Ok(HuiskenResidual {
            y: [y.x, y.y],
            s,
            r,
            t1,
            t2,
            lhs,
            rhs,
            residual,
            c_n,
            tol,
            pass: residual <= tol,
        })
    }

    fn distance_at(&self, y: Vec2, target: f64) -> Option<f64> {
        if let Some(te) = self.traj.extinction_time() {
            if te <= target {
                return Some(f64::INFINITY);
            }
        }
        let i = self.samples.iter().position(|s| s.t >= target - 1e-12)?;
        let net = &self.traj.frames[i].net;
        Some(
            (0..net.edges().len())
                .map(|e| {
                    let (a, b) = net.segment(e);
                    point_segment_distance(y, a, b)
                })
                .fold(f64::INFINITY, f64::min),
        )
    }

    /// Clearing-out prediction at `(y, t)` and scale `r`, in the kernel
    /// form and in the density form.
    pub fn clearing_out_check(
        &self,
        y: Vec2,
        t: f64,
        r: f64,
        delta0: f64,
    ) -> Result<ClearingOut, DiagnosticsError> {
        let i = self.frame_index(t)?;
        let net = &self.traj.frames[i].net;
        let q = HeatKernelQuery::new(y, t + delta0 * r * r, r, delta0)?;
        let width = (delta0).sqrt() * r;
        let mut kernel_mass = 0.0;
        for e in 0..net.edges().len() {
            let (a, b) = net.segment(e);
            if point_segment_distance(y, a, b) >= 2.0 * r {
                continue;
            }
            let len = (b - a).norm();
            let panels = (len / (0.25 * width)).ceil().clamp(1.0, 1e5) as usize;
            kernel_mass += composite(0.0, len, panels, 8, |u| {
                q.rho_hat_r_delta(a + (b - a) * (u / len))
            });
        }
        let tau = net.tau_geom();
        let predicted = kernel_mass < 0.5;
        let target = t + delta0 * r * r;
        let distance = self.distance_at(y, target);
        let density = mass_in_ball(net, None, y, r) / r;
        let theta0 = clearing_out_theta0(delta0);
        let density_target = t + 0.25 * delta0 * r * r;
        let density_distance = self.distance_at(y, density_target);
        Ok(ClearingOut {
            y: [y.x, y.y],
            t,
            r,
            delta0,
            kernel_mass,
            predicted,
            target,
            distance,
            outcome: distance.map(|d| d > tau),
            density,
            theta0,
            density_predicted: density < theta0,
            density_target,
            density_distance,
            density_outcome: density_distance.map(|d| d > tau),
        })
    }

    /// `|h . tau| / (|h| + eps)` at degree-2 vertices of every frame.
    pub fn tangential_component_report(&self) -> TangentialReport {
        let eps = self.suite.eps();
        let (mut sup, mut sum, mut n) = (0.0f64, 0.0, 0usize);
        for (s, f) in self.samples.iter().zip(&self.traj.frames) {
            let net = &f.net;
            let mut nb: Vec<Vec<usize>> = vec![Vec::new(); net.vertices().len()];
            for e in net.edges() {
                nb[e.tail].push(e.head);
                nb[e.head].push(e.tail);
            }
            for (v, adj) in nb.iter().enumerate() {
                if adj.len() != 2 {
                    continue;
                }
                let d = net.vertex(adj[1]) - net.vertex(adj[0]);
                let n2 = d.norm();
                if n2 == 0.0 {
                    continue;
                }
                let h = s.h_vertices[v];
                let ratio = (h.dot(&(d / n2))).abs() / (h.norm() + eps);
                sup = sup.max(ratio);
                sum += ratio;
                n += 1;
            }
        }
        TangentialReport {
            sup,
            mean: if n > 0 { sum / n as f64 } else { 0.0 },
            samples: n,
        }
    }

    /// Weak form of `v = h . nu` against `g` and the interval dissipation
    /// balance, both on the reduced boundary.
    pub fn bv_flow_checks(
        &self,
        g: &dyn VectorField,
        t1: f64,
        t2: f64,
    ) -> Result<BvChecks, DiagnosticsError> {
        let (i1, i2) = self.window(t1, t2)?;
        let reduced = |k: usize, e: usize| {
            let ed = self.traj.frames[k].net.edge(e);
            ed.left != ed.right
        };
        let length = |k: usize| -> f64 {
            let s = &self.samples[k];
            (0..s.points.len())
                .filter(|&q| reduced(k, s.edges[q]))
                .map(|q| s.weights[q])
                .sum()
        };
        let (mut weak, mut scale, mut energy) = (0.0, 0.0, 0.0);
        for k in i1..i2 {
            let s = &self.samples[k];
            let dt = self.samples[k + 1].t - s.t;
            for q in 0..s.points.len() {
                if !reduced(k, s.edges[q]) {
                    continue;
                }
                let (x, tau, h) = (s.points[q], s.tangents[q], s.h[q]);
                let nu = right_normal(tau);
                let jac = g.jacobian(x);
                let div_s = tau.dot(&(jac * tau));
                let v = h.dot(&nu);
                weak += dt * s.weights[q] * (div_s + v * nu.dot(&g.value(x)));
                scale += dt * s.weights[q] * crate::varifold::operator_norm(&jac);
                energy += dt * s.weights[q] * v * v;
            }
        }
        Ok(BvChecks {
            t1,
            t2,
            reflection: true,
            weak_residual: weak,
            weak_scale: scale,
            dissipation_lhs: length(i2) + energy,
            dissipation_rhs: length(i1),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtinctionReport {
    pub bound: f64,
    pub measured: f64,
    /// False when the run ended before every bounded grain vanished; the
    /// measured time is then only a lower estimate.
    pub extinct: bool,
    pub tol: f64,
    pub pass: bool,
}

/// Lower bound `2 (|E(0)| / H1(Gamma_0))^2` on the extinction time.
pub fn extinction_report(
    traj: &Trajectory,
    tol: f64,
) -> Result<ExtinctionReport, DiagnosticsError> {
    let first = traj
        .frames
        .first()
        .ok_or(DiagnosticsError::EmptyTrajectory)?;
    let area: f64 = signed_areas(&first.net).iter().map(|a| a.1).sum();
    let length = first.net.total_length();
    let bound = if length > 0.0 {
        2.0 * (area / length).powi(2)
    } else {
        0.0
    };
    let (measured, extinct) = match traj.extinction_time() {
        Some(t) => (t - first.t, true),
        None => (traj.frames.last().map_or(first.t, |f| f.t) - first.t, false),
    };
    Ok(ExtinctionReport {
        bound,
        measured,
        extinct,
        tol,
        pass: measured >= bound * (1.0 - tol),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub sup: f64,
    pub at: [f64; 2],
    pub radius: f64,
    /// Largest ratio for each radius.
    pub per_radius: Vec<(f64, f64)>,
}

/// Sup of `|V|(B_r(x)) / 2r` over the given radii and sample points.
pub fn density_report(net: &LabeledNetwork, radii: &[f64], points: &[Vec2]) -> DensityReport {
    let cell = radii.iter().copied().fold(0.0, f64::max).max(1e-6);
    let grid = SegmentGrid::new(
        cell,
        (0..net.edges().len()).map(|e| {
            let (a, b) = net.segment(e);
            (e, a, b)
        }),
    );
    let mut out = DensityReport {
        sup: 0.0,
        at: [0.0; 2],
        radius: 0.0,
        per_radius: Vec::new(),
    };
    for &r in radii {
        let mut best = 0.0f64;
        for &x in points {
            let ratio = mass_in_ball(net, Some(&grid), x, r) / (2.0 * r);
            if ratio > best {
                best = ratio;
            }
            if ratio > out.sup {
                out.sup = ratio;
                out.at = [x.x, x.y];
                out.radius = r;
            }
        }
        out.per_radius.push((r, best));
    }
    out
}

/// Vertices and edge midpoints: where density ratios peak on a polygon.
pub fn density_sample_points(net: &LabeledNetwork) -> Vec<Vec2> {
    let mut pts = net.vertices().to_vec();
    pts.extend((0..net.edges().len()).map(|e| net.edge_midpoint(e)));
    pts
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityCheck {
    pub report: DensityReport,
    pub r0: f64,
    pub delta0: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Initial-data density hypothesis `|V|(B_r(x)) < (2 - delta0) 2r` for
/// radii `r0 / 2^k`.
pub fn initial_density_check(net: &LabeledNetwork, r0: f64, delta0: f64) -> DensityCheck {
    let radii: Vec<f64> = (0..5).map(|k| r0 / 2f64.powi(k)).collect();
    let report = density_report(net, &radii, &density_sample_points(net));
    let threshold = 2.0 - delta0;
    DensityCheck {
        pass: report.sup < threshold,
        report,
        r0,
        delta0,
        threshold,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Junction {
    pub vertex: usize,
    pub position: [f64; 2],
    /// Angles between consecutive incident curves, counter-clockwise, in
    /// degrees.
    pub angles: Vec<f64>,
}

/// Tangent of the curve leaving `v` along `e`, from a parabola through
/// the next two vertices when the curve continues through a degree-2
/// vertex.
fn junction_tangent(
    net: &LabeledNetwork,
    deg: &[usize],
    nb: &[Vec<(usize, usize)>],
    v: usize,
    e: usize,
) -> Vec2 {
    let w = net.edge(e).other_end(v);
    let (p0, p1) = (net.vertex(v), net.vertex(w));
    let first = (p1 - p0).normalize();
    if deg[w] != 2 {
        return first;
    }
    let Some(&(x, _)) = nb[w].iter().find(|(_, f)| *f != e) else {
        return first;
    };
    let p2 = net.vertex(x);
    let s1 = (p1 - p0).norm();
    let s2 = s1 + (p2 - p1).norm();
    let d =
        p0 * (-(1.0 / s1 + 1.0 / s2)) + p1 * (s2 / (s1 * (s2 - s1))) - p2 * (s1 / (s2 * (s2 - s1)));
    let n = d.norm();
    if n > 0.0 && n.is_finite() {
        d / n
    } else {
        first
    }
}

/// Angles at every vertex of degree at least 3.
pub fn junction_angles(net: &LabeledNetwork) -> Vec<Junction> {
    let deg = net.degrees();
    let mut nb: Vec<Vec<(usize, usize)>> = vec![Vec::new(); net.vertices().len()];
    for (i, e) in net.edges().iter().enumerate() {
        nb[e.tail].push((e.head, i));
        nb[e.head].push((e.tail, i));
    }
    let mut out = Vec::new();
    for (v, &d) in deg.iter().enumerate() {
        if d < 3 {
            continue;
        }
        let mut dirs: Vec<f64> = nb[v]
            .iter()
            .map(|&(_, e)| {
                let t = junction_tangent(net, &deg, &nb, v, e);
                t.y.atan2(t.x)
            })
            .collect();
        dirs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let angles = (0..dirs.len())
            .map(|i| {
                let next = if i + 1 < dirs.len() {
                    dirs[i + 1]
                } else {
                    dirs[0] + 2.0 * std::f64::consts::PI
                };
                (next - dirs[i]).to_degrees()
            })
            .collect();
        let p = net.vertex(v);
        out.push(Junction {
            vertex: v,
            position: [p.x, p.y],
            angles,
        });
    }
    out
}

/// Counts of junction angles in bins of `width` degrees, keyed by the bin
/// start.
pub fn angle_histogram(junctions: &[Junction], width: f64) -> Vec<(f64, usize)> {
    let mut bins: std::collections::BTreeMap<i64, usize> = Default::default();
    for a in junctions.iter().flat_map(|j| &j.angles) {
        *bins.entry((a / width).floor() as i64).or_default() += 1;
    }
    bins.into_iter()
        .map(|(k, n)| (k as f64 * width, n))
        .collect()
}
