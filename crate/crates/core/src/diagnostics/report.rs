use std::fmt::Write as _;

use serde::Serialize;

use super::checks::{
    angle_histogram, extinction_report, initial_density_check, junction_angles, BrakkeResidual,
    BvChecks, ClearingOut, DensityCheck, ExtinctionReport, HuiskenResidual, Junction,
    SampledTrajectory, TangentialReport, VolumeIdentity,
};
use super::fields::RadialField;
use super::DiagnosticsSettings;
use crate::error::DiagnosticsError;
use crate::geometry::{BBox, Vec2};
use crate::kernels::Bump;
use crate::stepper::{FlowSettings, Trajectory};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BrakkeEntry {
    /// Index into `DiagnosticsReport::test_functions`.
    pub phi: usize,
    #[serde(flatten)]
    pub residual: BrakkeResidual,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DissipationEntry {
    pub k: usize,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureBounds {
    pub max_h: f64,
    pub h_bound: f64,
    pub max_grad_h: f64,
    pub grad_bound: f64,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub settings: DiagnosticsSettings,
    pub eps: f64,
    pub windows: Vec<(f64, f64)>,
    pub test_functions: Vec<String>,
    pub brakke: Vec<BrakkeEntry>,
    pub volume: Vec<VolumeIdentity>,
    pub dissipation: Vec<DissipationEntry>,
    pub huisken: Vec<HuiskenResidual>,
    pub density: DensityCheck,
    pub clearing_out: Vec<ClearingOut>,
    pub extinction: ExtinctionReport,
    pub angles: Vec<Junction>,
    pub angle_histogram: Vec<(f64, usize)>,
    pub bv: Vec<BvChecks>,
    pub tangential: TangentialReport,
    pub bounds: CurvatureBounds,
    pub moves: usize,
    pub inadmissible_moves: usize,
    pub flagged_surgeries: usize,
    pub assertions: Vec<Assertion>,
}

/// Splits `[t0, t_last]` into `n` windows with endpoints on stored frame
/// times.
fn windows(times: &[f64], n: usize) -> Vec<(f64, f64)> {
    let (t0, tl) = (times[0], *times.last().unwrap());
    let mut ends: Vec<f64> = (0..=n)
        .map(|i| {
            let target = t0 + (tl - t0) * i as f64 / n as f64;
            *times
                .iter()
                .min_by(|a, b| {
                    (*a - target)
                        .abs()
                        .partial_cmp(&(*b - target).abs())
                        .unwrap()
                })
                .unwrap()
        })
        .collect();
    ends.dedup();
    ends.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Runs every check over a trajectory with the standard families of test
/// functions, windows and sample points.
pub fn diagnose(
    traj: &Trajectory,
    flow: &FlowSettings,
    ds: &DiagnosticsSettings,
) -> Result<DiagnosticsReport, DiagnosticsError> {
    let st = SampledTrajectory::new(traj, flow)?;
    let w = flow.weight();
    let times = st.times();
    let t0 = times[0];
    let tl = *times.last().unwrap();
    let wins = windows(&times, ds.intervals);
    let initial = &traj.frames[0].net;
    let bbox = initial
        .bbox()
        .unwrap_or(BBox::new(Vec2::zeros(), Vec2::zeros()));
    let center = (bbox.min + bbox.max) * 0.5;
    let diam = bbox.diameter().max(flow.eps);

    let mut bumps: Vec<Bump> = Vec::new();
    let mut describe = Vec::new();
    let mut push_bump = |c: Vec2, r: f64| {
        let amp = w.min_over_box(c - Vec2::new(r, r), c + Vec2::new(r, r));
        describe.push(format!(
            "bump center ({:.4}, {:.4}) radius {:.4} amp {:.4e}",
            c.x, c.y, r, amp
        ));
        bumps.push(Bump::new(c, r, amp));
    };
    push_bump(center, 0.75 * diam);
    let nv = initial.vertices().len();
    for k in 0..4.min(nv) {
        push_bump(initial.vertex(k * nv / 4), 0.25 * diam);
    }

    let mut brakke = Vec::new();
    for (i, b) in bumps.iter().enumerate() {
        for &(a, c) in &wins {
            brakke.push(BrakkeEntry {
                phi: i,
                residual: st.brakke_residual(b, a, c, ds.tol_brakke)?,
            });
        }
    }

    let mut volume = Vec::new();
    let labels: Vec<_> = initial.bounded_labels().collect();
    for &l in &labels {
        if tl > t0 {
            volume.push(st.volume_identity_residual(l, t0, tl, ds.tol_volume)?);
        }
        for &(a, c) in &wins {
            volume.push(st.volume_identity_residual(l, a, c, ds.tol_volume)?);
        }
    }

    let dissipation = traj
        .records
        .iter()
        .map(|r| DissipationEntry {
            k: r.k,
            t: r.t,
            lhs: r.dissipation.lhs,
            rhs: r.dissipation.rhs,
            slack: r.dissipation.slack,
            pass: r.dissipation.pass,
        })
        .collect::<Vec<_>>();

    let s_ref = tl + (tl - t0).max(flow.eps * flow.eps) * 0.05;
    let mut huisken = Vec::new();
    let probes = [
        center,
        initial.vertices().first().copied().unwrap_or(center),
    ];
    for y in probes {
        for r in [0.25 * diam, 0.5 * diam] {
            for &(a, c) in &wins {
                huisken.push(st.huisken_residual(y, s_ref, r, a, c, ds.c_n, ds.tol_huisken)?);
            }
        }
    }

    let density = initial_density_check(initial, ds.r0, ds.density_delta0);

    let mut clearing_out = Vec::new();
    let grid_box = bbox.expanded(0.2 * diam);
    let m = ds.clearing_grid.max(2);
    let pts: Vec<Vec2> = crate::kernels::lattice(grid_box.min, grid_box.max, m);
    for &(a, _) in &wins {
        for &r in &ds.clearing_radii {
            for &y in &pts {
                let c = st.clearing_out_check(y, a, r, ds.delta0)?;
                if c.distance.is_some() || c.density_distance.is_some() {
                    clearing_out.push(c);
                }
            }
        }
    }

    let extinction = extinction_report(traj, ds.tol_extinction)?;
    let last = traj
        .frames
        .iter()
        .rev()
        .find(|f| !f.net.edges().is_empty())
        .unwrap_or(&traj.frames[0]);
    let angles = junction_angles(&last.net);
    let histogram = angle_histogram(&angles, 5.0);

    let g = RadialField::new(center, 0.75 * diam);
    let bv = wins
        .iter()
        .map(|&(a, c)| st.bv_flow_checks(&g, a, c))
        .collect::<Result<Vec<_>, _>>()?;
    let tangential = st.tangential_component_report();

    let bounds = CurvatureBounds {
        max_h: traj.records.iter().map(|r| r.max_h).fold(0.0, f64::max),
        h_bound: traj.records.first().map_or(0.0, |r| r.h_bound),
        max_grad_h: traj
            .records
            .iter()
            .map(|r| r.max_grad_h)
            .fold(0.0, f64::max),
        grad_bound: traj.records.first().map_or(0.0, |r| r.grad_bound),
        violations: traj.records.iter().map(|r| r.bound_violations).sum(),
    };
    let moves: usize = traj.records.iter().map(|r| r.moves.len()).sum();
    let inadmissible_moves = traj
        .records
        .iter()
        .flat_map(|r| &r.moves)
        .filter(|m| !m.report.admissible())
        .count();
    let flagged_surgeries = traj
        .records
        .iter()
        .flat_map(|r| &r.surgeries)
        .filter(|s| s.flagged)
        .count();

    let mut assertions = Vec::new();
    let mut assert = |name: &str, pass: bool, detail: String| {
        assertions.push(Assertion {
            name: name.into(),
            pass,
            detail,
        });
    };
    let bad = brakke.iter().filter(|b| !b.residual.pass).count();
    assert(
        "brakke",
        bad == 0,
        format!("{bad} of {} residuals out of tolerance", brakke.len()),
    );
    let bad = volume.iter().filter(|v| !v.pass).count();
    assert(
        "volume-identity",
        bad == 0,
        format!("{bad} of {} residuals out of tolerance", volume.len()),
    );
    let bad = dissipation.iter().filter(|d| !d.pass).count();
    assert(
        "dissipation",
        bad == 0,
        format!("{bad} of {} epochs fail", dissipation.len()),
    );
    assert(
        "curvature-bounds",
        bounds.violations == 0,
        format!(
            "max |h| {:.4e} (bound {:.4e}), max |grad h| {:.4e} (bound {:.4e})",
            bounds.max_h, bounds.h_bound, bounds.max_grad_h, bounds.grad_bound
        ),
    );
    let bad = huisken.iter().filter(|h| !h.pass).count();
    assert(
        "huisken",
        bad == 0,
        format!(
            "{bad} of {} residuals positive (c_n = {})",
            huisken.len(),
            ds.c_n
        ),
    );
    assert(
        "initial-density",
        density.pass,
        format!(
            "sup ratio {:.4} vs {:.4}",
            density.report.sup, density.threshold
        ),
    );
    let issued = clearing_out
        .iter()
        .filter(|c| c.density_predicted && c.density_outcome.is_some())
        .count();
    let bad = clearing_out.iter().filter(|c| !c.density_ok()).count();
    assert(
        "clearing-out",
        bad == 0,
        format!("{bad} of {issued} density-form predictions contradicted"),
    );
    assert(
        "admissibility",
        inadmissible_moves == 0,
        format!("{inadmissible_moves} of {moves} moves inadmissible"),
    );
    if extinction.extinct && flagged_surgeries == 0 {
        assert(
            "extinction",
            extinction.pass,
            format!(
                "measured {:.6} vs bound {:.6}",
                extinction.measured, extinction.bound
            ),
        );
    }

    Ok(DiagnosticsReport {
        settings: ds.clone(),
        eps: st.eps(),
        windows: wins,
        test_functions: describe,
        brakke,
        volume,
        dissipation,
        huisken,
        density,
        clearing_out,
        extinction,
        angles,
        angle_histogram: histogram,
        bv,
        tangential,
        bounds,
        moves,
        inadmissible_moves,
        flagged_surgeries,
        assertions,
    })
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "ok"
    } else {
        "FAIL"
    }
}

impl DiagnosticsReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    /// Plain text, one section per check.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let s_ = &mut s;
        let ds = &self.settings;
        let _ = writeln!(s_, "# diagnostics (eps = {})", self.eps);
        let _ = writeln!(s_);
        let _ = writeln!(s_, "## assertions");
        for a in &self.assertions {
            let _ = writeln!(s_, "{:<18} {:<4} {}", a.name, mark(a.pass), a.detail);
        }

        let _ = writeln!(
            s_,
            "\n## brakke (tol = {} * int int phi |h|^2, one-sided on deformed windows)",
            ds.tol_brakke
        );
        for (i, d) in self.test_functions.iter().enumerate() {
            let _ = writeln!(s_, "phi {i}: {d}");
        }
        let _ = writeln!(s_, "phi t1 t2 lhs rhs residual tol deformed status");
        for b in &self.brakke {
            let r = &b.residual;
            let _ = writeln!(
                s_,
                "{} {:.6} {:.6} {:.6e} {:.6e} {:.3e} {:.3e} {} {}",
                b.phi,
                r.t1,
                r.t2,
                r.lhs,
                r.rhs,
                r.residual,
                r.tol,
                r.deformed,
                mark(r.pass)
            );
        }

        let _ = writeln!(
            s_,
            "\n## volume identity (tol = {} * |dVol| + ledger)",
            ds.tol_volume
        );
        let _ = writeln!(s_, "grain t1 t2 dvol flux residual ledger status");
        for v in &self.volume {
            let _ = writeln!(
                s_,
                "{} {:.6} {:.6} {:.6e} {:.6e} {:.3e} {:.3e} {}",
                v.label.0,
                v.t1,
                v.t2,
                v.dvol,
                v.flux,
                v.residual,
                v.ledger,
                mark(v.pass)
            );
        }

        let bad = self.dissipation.iter().filter(|d| !d.pass).count();
        let worst = self
            .dissipation
            .iter()
            .map(|d| d.lhs - d.rhs - d.slack)
            .fold(f64::NEG_INFINITY, f64::max);
        let _ = writeln!(
            s_,
            "\n## dissipation (slack = 2 * resampling mass change / dt)"
        );
        let _ = writeln!(
            s_,
            "epochs {} failing {} worst lhs - rhs - slack {:.4e}",
            self.dissipation.len(),
            bad,
            worst
        );
        for d in self.dissipation.iter().filter(|d| !d.pass) {
            let _ = writeln!(
                s_,
                "epoch {} t {:.6} lhs {:.4e} rhs {:.4e} slack {:.4e}",
                d.k, d.t, d.lhs, d.rhs, d.slack
            );
        }

        let _ = writeln!(
            s_,
            "\n## huisken (c_n = {}, tol = {:e})",
            ds.c_n, ds.tol_huisken
        );
        let _ = writeln!(s_, "y s r t1 t2 lhs rhs residual status");
        for h in &self.huisken {
            let _ = writeln!(
                s_,
                "({:.4}, {:.4}) {:.6} {:.4} {:.6} {:.6} {:.4e} {:.4e} {:.4e} {}",
                h.y[0],
                h.y[1],
                h.s,
                h.r,
                h.t1,
                h.t2,
                h.lhs,
                h.rhs,
                h.residual,
                mark(h.pass)
            );
        }

        let d = &self.density;
        let _ = writeln!(
            s_,
            "\n## initial density (r0 = {}, delta0 = {})",
            d.r0, d.delta0
        );
        let _ = writeln!(
            s_,
            "sup {:.6} at ({:.4}, {:.4}) r {:.4}; threshold {:.4} {}",
            d.report.sup,
            d.report.at[0],
            d.report.at[1],
            d.report.radius,
            d.threshold,
            mark(d.pass)
        );
        for (r, v) in &d.report.per_radius {
            let _ = writeln!(s_, "r {r:.5} sup {v:.6}");
        }

        let _ = writeln!(s_, "\n## clearing out (delta0 = {})", ds.delta0);
        let issued = self.clearing_out.iter().filter(|c| c.predicted).count();
        let kernel_bad = self.clearing_out.iter().filter(|c| !c.kernel_ok()).count();
        let dens = self
            .clearing_out
            .iter()
            .filter(|c| c.density_predicted)
            .count();
        let dens_bad = self.clearing_out.iter().filter(|c| !c.density_ok()).count();
        let _ = writeln!(s_, "samples {}", self.clearing_out.len());
        let _ = writeln!(
            s_,
            "kernel form: {issued} predictions, {kernel_bad} contradicted"
        );
        let _ = writeln!(
            s_,
            "density form (theta0 = {:.4}): {dens} predictions, {dens_bad} contradicted",
            self.clearing_out.first().map_or(0.0, |c| c.theta0)
        );
        for c in self
            .clearing_out
            .iter()
            .filter(|c| !c.kernel_ok() || !c.density_ok())
        {
            let _ = writeln!(
                s_,
                "y ({:.4}, {:.4}) t {:.6} r {:.3} kernel {:.4} dist {:?} density {:.4} dist {:?}",
                c.y[0], c.y[1], c.t, c.r, c.kernel_mass, c.distance, c.density, c.density_distance
            );
        }

        let e = &self.extinction;
        let _ = writeln!(s_, "\n## extinction (tol = {})", e.tol);
        let _ = writeln!(
            s_,
            "bound {:.6} measured {:.6}{} {}",
            e.bound,
            e.measured,
            if e.extinct {
                ""
            } else {
                " (run ended first, lower estimate)"
            },
            mark(e.pass)
        );

        let _ = writeln!(s_, "\n## junction angles (last non-empty frame)");
        for j in &self.angles {
            let list: Vec<String> = j.angles.iter().map(|a| format!("{a:.2}")).collect();
            let _ = writeln!(
                s_,
                "vertex {} at ({:.4}, {:.4}): {}",
                j.vertex,
                j.position[0],
                j.position[1],
                list.join(" ")
            );
        }
        for (start, n) in &self.angle_histogram {
            let _ = writeln!(s_, "[{:.0}, {:.0}) {}", start, start + 5.0, n);
        }

        let _ = writeln!(
            s_,
            "\n## bv checks (radial field; reflection holds by construction)"
        );
        let _ = writeln!(
            s_,
            "t1 t2 weak_residual scale dissipation_lhs dissipation_rhs"
        );
        for b in &self.bv {
            let _ = writeln!(
                s_,
                "{:.6} {:.6} {:.4e} {:.4e} {:.6} {:.6}",
                b.t1, b.t2, b.weak_residual, b.weak_scale, b.dissipation_lhs, b.dissipation_rhs
            );
        }

        let t = &self.tangential;
        let _ = writeln!(s_, "\n## tangential component of h (informational)");
        let _ = writeln!(
            s_,
            "sup {:.4e} mean {:.4e} over {} samples",
            t.sup, t.mean, t.samples
        );

        let _ = writeln!(s_, "\n## deformation");
        let _ = writeln!(
            s_,
            "moves {} inadmissible {} flagged surgeries {}",
            self.moves, self.inadmissible_moves, self.flagged_surgeries
        );
        s
    }
}
