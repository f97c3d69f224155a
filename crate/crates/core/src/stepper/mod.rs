//! Epoch loop: deformation, advection by the smoothed mean curvature,
//! resampling and topology repair.

mod resample;
mod surgery;

use serde::{Deserialize, Serialize};

use crate::deformation::{apply_best_moves, AppliedMove};
use crate::error::{ConfigError, RunError};
use crate::geometry::{right_normal, signed_areas, total_mass, Label, LabeledNetwork, Vec2};
use crate::kernels::{KernelSuite, WeightOmega, WeightVariant};
use crate::varifold::{CurvatureField, DiscreteVarifold};

pub use resample::{resample, ResampleReport};
pub use surgery::{repair, SurgeryRecord};

/// Grid used to estimate the derivative constant of the exponential weight.
pub const WEIGHT_GRID: usize = 201;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowSettings {
    pub eps: f64,
    pub j: u32,
    pub kappa: f64,
    pub t_end: f64,
    /// Caps the time step below `eps^kappa`.
    pub dt: Option<f64>,
    pub weight: WeightVariant,
    /// Lattice nodes per `eps` in the outer convolution.
    pub quad_factor: f64,
    /// Resampling target, `eps / 2` when unset.
    pub h_res: Option<f64>,
    pub snapshot_every: usize,
    /// Bound on `dt * max |grad h_eps|`.
    pub guard: f64,
}

impl Default for FlowSettings {
    fn default() -> Self {
        Self {
            eps: 0.02,
            j: 10,
            kappa: 2.0,
            t_end: 0.2,
            dt: None,
            weight: WeightVariant::ConstantOne,
            quad_factor: 4.0,
            h_res: None,
            snapshot_every: 1,
            guard: 0.5,
        }
    }
}

impl FlowSettings {
    pub fn weight(&self) -> WeightOmega {
        WeightOmega::from_variant(self.weight, WEIGHT_GRID)
    }
}

/// Largest `2^-p` not above `x`.
pub fn dyadic_floor(x: f64) -> f64 {
    let mut dt = 2f64.powi(x.log2().floor() as i32);
    while dt > x {
        dt *= 0.5;
    }
    while dt * 2.0 <= x {
        dt *= 2.0;
    }
    dt
}

/// `(j, eps_j, dt_j)` and the derived resolution settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochSchedule {
    pub j: u32,
    pub eps: f64,
    pub dt: f64,
    pub kappa: f64,
    pub t_end: f64,
    pub h_res: f64,
    pub guard: f64,
    pub quad_factor: f64,
}

impl EpochSchedule {
    pub fn new(s: &FlowSettings, w: &WeightOmega) -> Result<Self, ConfigError> {
        if !(s.eps > 0.0 && s.eps < 1.0) {
            return Err(ConfigError::new(
                "kernel.eps",
                format!("must lie in (0, 1), got {}", s.eps),
            ));
        }
        if !(s.kappa >= 1.0) {
            return Err(ConfigError::new(
                "schedule.kappa",
                format!("must be at least 1, got {}", s.kappa),
            ));
        }
        let jmin = 1f64.max(w.c1().ceil()) as u32;
        if s.j < jmin {
            return Err(ConfigError::new(
                "schedule.j",
                format!("must be at least {jmin}, got {}", s.j),
            ));
        }
        if !(s.t_end >= 0.0) || !s.t_end.is_finite() {
            return Err(ConfigError::new(
                "schedule.T",
                format!("must be non-negative, got {}", s.t_end),
            ));
        }
        let mut cap = s.eps.powf(s.kappa);
        if let Some(dt) = s.dt {
            if !(dt > 0.0) {
                return Err(ConfigError::new(
                    "schedule.dt",
                    format!("must be positive, got {dt}"),
                ));
            }
            cap = cap.min(dt);
        }
        let h_res = s.h_res.unwrap_or(0.5 * s.eps);
        if !(h_res > 0.0) {
            return Err(ConfigError::new(
                "schedule.h_res",
                format!("must be positive, got {h_res}"),
            ));
        }
        if !(s.quad_factor >= 1.0) {
            return Err(ConfigError::new(
                "kernel.quad_factor",
                format!("must be at least 1, got {}", s.quad_factor),
            ));
        }
        if !(s.guard > 0.0) {
            return Err(ConfigError::new(
                "schedule.guard",
                format!("must be positive, got {}", s.guard),
            ));
        }
        Ok(Self {
            j: s.j,
            eps: s.eps,
            dt: dyadic_floor(cap),
            kappa: s.kappa,
            t_end: s.t_end,
            h_res,
            guard: s.guard,
            quad_factor: s.quad_factor,
        })
    }
}

/// Running totals of the errors the scheme introduces on purpose.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorLedger {
    pub resample_area: f64,
    pub resample_mass: f64,
    pub deformation_volume: f64,
    pub flagged_surgeries: usize,
    pub bound_violations: usize,
    pub guard_halvings: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowState {
    pub net: LabeledNetwork,
    pub k: usize,
    pub t: f64,
    pub ledger: ErrorLedger,
}

impl FlowState {
    pub fn new(net: LabeledNetwork) -> Self {
        let t = net.time();
        Self {
            net,
            k: 0,
            t,
            ledger: ErrorLedger::default(),
        }
    }
}

/// Area bookkeeping of one grain over one epoch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrainStep {
    pub label: Label,
    pub area: f64,
    /// `dt * sum (h . nu) |e|` with `h` averaged over each edge.
    pub flux: f64,
    pub deform_delta: f64,
    pub resample_delta: f64,
    pub surgery_delta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissipationCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub k: usize,
    pub t_start: f64,
    pub t: f64,
    pub dt: f64,
    pub guard_halvings: u32,
    pub mass_before: f64,
    pub mass_deformed: f64,
    pub mass_after: f64,
    pub drop: f64,
    pub moves: Vec<AppliedMove>,
    pub max_volume_delta: f64,
    pub volume_budget: f64,
    pub rolled_back: usize,
    pub curvature_energy: f64,
    pub max_h: f64,
    pub max_grad_h: f64,
    pub h_bound: f64,
    pub grad_bound: f64,
    pub bound_violations: usize,
    pub max_displacement: f64,
    pub grains: Vec<GrainStep>,
    pub resample: ResampleReport,
    pub surgeries: Vec<SurgeryRecord>,
    pub dissipation: DissipationCheck,
    /// Boundary length of bounded grains after the deformation step.
    pub bounded_mass_deformed: f64,
    /// Boundary length of bounded grains at the end of the epoch.
    pub bounded_mass: f64,
    pub vertices: usize,
}

impl EpochRecord {
    pub fn deformed(&self) -> bool {
        !self.moves.is_empty() || !self.surgeries.is_empty()
    }
}

/// Length of the boundary of bounded grains.
pub fn bounded_mass(net: &LabeledNetwork) -> f64 {
    (0..net.edges().len())
        .filter(|&e| {
            let ed = net.edge(e);
            !net.is_exterior(ed.left) || !net.is_exterior(ed.right)
        })
        .map(|e| net.edge_length(e))
        .sum()
}

fn area_of(areas: &[(Label, f64)], l: Label) -> f64 {
    areas.iter().find(|a| a.0 == l).map_or(0.0, |a| a.1)
}

/// `h_eps` at every vertex of `net` together with the largest
/// finite-difference gradient and the curvature energy.
pub struct CurvatureSample {
    pub h: Vec<Vec2>,
    pub grad: Vec<f64>,
    pub energy: f64,
}

pub fn sample_curvature(
    net: &LabeledNetwork,
    suite: &KernelSuite,
    w: &WeightOmega,
    quad_factor: f64,
) -> CurvatureSample {
    let field = CurvatureField::new(DiscreteVarifold::from_network(net), *suite, *w, quad_factor);
    let pts = net.vertices();
    let h = field.eval_unchecked(pts);
    let d = suite.eps() / 50.0;
    let probes: Vec<Vec2> = pts
        .iter()
        .flat_map(|&x| {
            [
                x + Vec2::new(d, 0.0),
                x - Vec2::new(d, 0.0),
                x + Vec2::new(0.0, d),
                x - Vec2::new(0.0, d),
            ]
        })
        .collect();
    let hp = field.eval_unchecked(&probes);
    let grad = hp
        .chunks(4)
        .map(|c| {
            let cx = (c[0] - c[1]) / (2.0 * d);
            let cy = (c[2] - c[3]) / (2.0 * d);
            crate::varifold::operator_norm(&nalgebra::Matrix2::new(cx.x, cy.x, cx.y, cy.y))
        })
        .collect();
    CurvatureSample {
        h,
        grad,
        energy: field.curvature_energy(),
    }
}

/// One epoch: greedy deformation, motion by `dt h_eps`, resampling and
/// repair.
pub fn advance_epoch(
    state: &FlowState,
    sched: &EpochSchedule,
    suite: &KernelSuite,
    w: &WeightOmega,
) -> Result<(FlowState, EpochRecord), RunError> {
    let net0 = &state.net;
    let areas0 = signed_areas(net0);
    let mass_before = total_mass(net0, w);

    let (net1, est) = apply_best_moves(net0, sched.j, w);
    let areas1 = signed_areas(&net1);
    let mass_deformed = total_mass(&net1, w);

    let cs = sample_curvature(&net1, suite, w, sched.quad_factor);
    let h_bound = 2.0 / suite.eps().powi(2);
    let grad_bound = 2.0 / suite.eps().powi(4);
    let mut max_h = 0.0f64;
    let mut violations = 0;
    for v in &cs.h {
        let n = v.norm();
        if !n.is_finite() {
            return Err(RunError::Aborted {
                time: state.t,
                reason: "non-finite curvature".into(),
                dump: None,
            });
        }
        max_h = max_h.max(n);
        if n > h_bound {
            violations += 1;
        }
    }
    let max_grad = cs.grad.iter().copied().fold(0.0, f64::max);
    violations += cs.grad.iter().filter(|g| **g > grad_bound).count();

    let mut dt = sched.dt;
    let mut halvings = 0;
    while dt * max_grad > sched.guard && halvings < 60 {
        dt *= 0.5;
        halvings += 1;
    }
    if halvings > 0 {
        log::info!(
            "epoch {}: guard halved dt {halvings} times (max |grad h| = {max_grad:.3e})",
            state.k + 1
        );
    }

    let moved: Vec<Vec2> = net1
        .vertices()
        .iter()
        .zip(&cs.h)
        .map(|(p, h)| p + h * dt)
        .collect();
    let max_displacement = cs.h.iter().map(|h| h.norm() * dt).fold(0.0, f64::max);
    let mut flux: Vec<(Label, f64)> = net1.bounded_labels().map(|l| (l, 0.0)).collect();
    for (e, ed) in net1.edges().iter().enumerate() {
        if ed.is_interior() {
            continue;
        }
        let len = net1.edge_length(e);
        let nu = right_normal(net1.edge_tangent(e));
        let hm = (cs.h[ed.tail] + cs.h[ed.head]) * 0.5;
        let f = dt * len * hm.dot(&nu);
        for (l, sign) in [(ed.left, 1.0), (ed.right, -1.0)] {
            if let Some(x) = flux.iter_mut().find(|x| x.0 == l) {
                x.1 += sign * f;
            }
        }
    }
    let net2 = net1.with_positions(moved);

    let (net3, rs) = resample(&net2, sched.h_res, w);
    let areas3 = signed_areas(&net3);
    let t_end = state.t + dt;
    let (net4, surgeries) =
        repair(net3.clone(), sched.j, w).map_err(|reason| RunError::Aborted {
            time: t_end,
            reason,
            dump: None,
        })?;
    let areas4 = signed_areas(&net4);
    let net4 = net4.with_time(t_end);
    let mass_after = total_mass(&net4, w);

    let grains = net4
        .bounded_labels()
        .map(|l| GrainStep {
            label: l,
            area: area_of(&areas4, l),
            flux: area_of(&flux, l),
            deform_delta: area_of(&areas1, l) - area_of(&areas0, l),
            resample_delta: rs
                .area_changes
                .iter()
                .find(|a| a.0 == l)
                .map_or(0.0, |a| a.1),
            surgery_delta: area_of(&areas4, l) - area_of(&areas3, l),
        })
        .collect();

    let lhs = (mass_after - mass_deformed) / dt + 0.25 * cs.energy;
    let rhs = suite.eps().powf(0.125) + 0.5 * w.c1() * w.c1() * mass_before;
    let slack = 2.0 * rs.mass_change.abs() / dt;
    let dissipation = DissipationCheck {
        lhs,
        rhs,
        slack,
        pass: lhs <= rhs + slack,
    };

    let mut ledger = state.ledger.clone();
    ledger.resample_area += rs.area_abs;
    ledger.resample_mass += rs.mass_change.abs();
    ledger.deformation_volume += est
        .moves
        .iter()
        .map(|m| m.report.max_volume_delta)
        .sum::<f64>();
    ledger.flagged_surgeries += surgeries.iter().filter(|s| s.flagged).count();
    ledger.bound_violations += violations;
    ledger.guard_halvings += halvings as usize;

    let record = EpochRecord {
        k: state.k + 1,
        t_start: state.t,
        t: t_end,
        dt,
        guard_halvings: halvings,
        mass_before,
        mass_deformed,
        mass_after,
        drop: est.drop,
        moves: est.moves,
        max_volume_delta: est.max_volume_delta,
        volume_budget: est.volume_budget,
        rolled_back: est.rolled_back,
        curvature_energy: cs.energy,
        max_h,
        max_grad_h: max_grad,
        h_bound,
        grad_bound,
        bound_violations: violations,
        max_displacement,
        grains,
        resample: rs,
        surgeries,
        dissipation,
        bounded_mass_deformed: bounded_mass(&net1),
        bounded_mass: bounded_mass(&net4),
        vertices: net4.vertices().len(),
    };
    let next = FlowState {
        net: net4,
        k: state.k + 1,
        t: t_end,
        ledger,
    };
    Ok((next, record))
}

/// A stored network state.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub k: usize,
    pub t: f64,
    pub net: LabeledNetwork,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Termination {
    Completed,
    Extinct { time: f64 },
}

/// Receives frames and epoch records as a run proceeds.
pub trait Observer {
    fn frame(&mut self, frame: &Frame) -> std::io::Result<()>;
    fn epoch(&mut self, record: &EpochRecord) -> std::io::Result<()>;
    /// Called with the last valid state when a run aborts; may persist it.
    fn aborted(&mut self, _state: &FlowState, _reason: &str) -> Option<std::path::PathBuf> {
        None
    }
}

/// In-memory trajectory.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub frames: Vec<Frame>,
    pub records: Vec<EpochRecord>,
    pub termination: Option<Termination>,
    pub ledger: ErrorLedger,
}

impl Observer for Trajectory {
    fn frame(&mut self, frame: &Frame) -> std::io::Result<()> {
        self.frames.push(frame.clone());
        Ok(())
    }

    fn epoch(&mut self, record: &EpochRecord) -> std::io::Result<()> {
        self.records.push(record.clone());
        Ok(())
    }
}

impl Trajectory {
    pub fn initial(&self) -> Option<&LabeledNetwork> {
        self.frames.first().map(|f| &f.net)
    }

    /// Frame with time closest to `t`.
    pub fn frame_at(&self, t: f64) -> Option<&Frame> {
        self.frames
            .iter()
            .min_by(|a, b| (a.t - t).abs().partial_cmp(&(b.t - t).abs()).unwrap())
    }

    pub fn extinction_time(&self) -> Option<f64> {
        match self.termination {
            Some(Termination::Extinct { time }) => Some(time),
            _ => None,
        }
    }
}

/// Summary returned by [`run_observed`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub epochs: usize,
    pub t: f64,
    pub termination: Termination,
    pub ledger: ErrorLedger,
    pub schedule: EpochSchedule,
}

pub fn run(net: LabeledNetwork, settings: &FlowSettings) -> Result<Trajectory, RunError> {
    let mut traj = Trajectory::default();
    let summary = run_observed(net, settings, &mut traj)?;
    traj.termination = Some(summary.termination);
    traj.ledger = summary.ledger;
    Ok(traj)
}

/// Runs until `t_end` or extinction of every bounded grain, streaming
/// frames every `snapshot_every` epochs (the initial and final states are
/// always emitted).
pub fn run_observed(
    net: LabeledNetwork,
    settings: &FlowSettings,
    obs: &mut dyn Observer,
) -> Result<RunSummary, RunError> {
    let w = settings.weight();
    let sched = EpochSchedule::new(settings, &w)?;
    let suite =
        KernelSuite::new(sched.eps).map_err(|e| ConfigError::new("kernel.eps", e.to_string()))?;
    let every = settings.snapshot_every.max(1);
    let mut state = FlowState::new(net);
    let t0 = state.t;
    obs.frame(&Frame {
        k: 0,
        t: state.t,
        net: state.net.clone(),
    })?;
    let mut last_emitted = 0;
    let finish = |state: &FlowState, termination: Termination| RunSummary {
        epochs: state.k,
        t: state.t,
        termination,
        ledger: state.ledger.clone(),
        schedule: sched,
    };
    if bounded_mass(&state.net) == 0.0 {
        return Ok(finish(&state, Termination::Extinct { time: t0 }));
    }
    let stop = t0 + sched.t_end;
    while state.t < stop - 1e-9 * sched.dt {
        let mut step = sched;
        step.dt = sched.dt.min(stop - state.t);
        let (next, rec) = match advance_epoch(&state, &step, &suite, &w) {
            Ok(x) => x,
            Err(RunError::Aborted { time, reason, .. }) => {
                log::error!("run aborted at t = {time}: {reason}");
                let dump = obs.aborted(&state, &reason);
                return Err(RunError::Aborted { time, reason, dump });
            }
            Err(e) => return Err(e),
        };
        obs.epoch(&rec)?;
        let extinct = rec.bounded_mass == 0.0;
        let deformed_empty = rec.bounded_mass_deformed == 0.0;
        state = next;
        if extinct || state.k % every == 0 {
            obs.frame(&Frame {
                k: state.k,
                t: state.t,
                net: state.net.clone(),
            })?;
            last_emitted = state.k;
        }
        if extinct {
            let time = if deformed_empty { rec.t_start } else { rec.t };
            return Ok(finish(&state, Termination::Extinct { time }));
        }
    }
    if last_emitted != state.k {
        obs.frame(&Frame {
            k: state.k,
            t: state.t,
            net: state.net.clone(),
        })?;
    }
    Ok(finish(&state, Termination::Completed))
}

#[cfg(test)]
mod tests;
