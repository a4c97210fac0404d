//! Transport planning along a straight line.
//!
//! A trajectory is a sequence of acceleration samples on a uniform grid.
//! Velocity and arc length are the trapezoidal integrals of those samples, so
//! the emitted kinematics are exactly self-consistent and every phase lands
//! on a grid point.
//!
//! Layout of a planned trajectory:
//!
//! 1. acceleration phase: the tray tilts into the motion with a jerk-limited
//!    rotation, the translational acceleration follows the tipping limit of
//!    the current tray motion, then the tray holds its tilt until the
//!    velocity reaches half the peak. The second half is the time mirror of
//!    the first, so the tray is level again when the peak velocity is
//!    reached;
//! 2. cruise at the peak velocity;
//! 3. deceleration phase: an acceleration phase planned for the mirrored
//!    line (elevation `-theta`), with negated acceleration and backward tilt.
//!
//! The peak velocity is `p_t / (P dt)` for an integer `P`, the smallest
//! admissible one. It equals `v_max` up to one grid step of cruise.

use crate::error::{invalid, require_finite, require_positive, PlanError, Result};
use crate::par::{map_ordered, Execution};
use crate::physics::{max_translational_accel, static_tipping_accel, ObjectParams, TippingLimit, TrayState};
use crate::scurve::{plan_seven_segment, rotation_half_profile, sample_rotation, AxisCaps, RotationProfile};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Default sample period, s.
pub const DEFAULT_SAMPLE_DT: f64 = 1e-3;

/// Upper bound of the fitted terminal tilt, rad.
pub const MAX_TILT: f64 = PI / 3.0;

/// Bisection tolerance of the terminal-tilt fit, rad.
pub const TILT_TOLERANCE: f64 = 1e-6;

/// Shortest target distance the planner accepts, m.
pub const MIN_DISTANCE: f64 = 1e-6;

/// Hard cap on samples in one acceleration phase.
const MAX_PHASE_SAMPLES: usize = 2_000_000;

/// Relative overshoot of `v(t_a)` over the half-peak target tolerated before
/// the phase is rejected.
const HALF_VELOCITY_SLACK: f64 = 1e-3;

/// Candidates past the smallest admissible `P` that are also tried.
const SEARCH_WINDOW: usize = 4;

/// Translational and rotational jerk/acceleration/velocity bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionLimits {
    pub j_max: f64,
    pub a_max: f64,
    pub v_max: f64,
    pub j_rm: f64,
    pub alpha_rm: f64,
    pub omega_rm: f64,
}

impl MotionLimits {
    /// Limits used on the Panda transport setup.
    pub fn panda() -> Self {
        Self {
            j_max: 6500.0,
            a_max: 13.0,
            v_max: 0.6,
            j_rm: 6000.0,
            alpha_rm: 9.0,
            omega_rm: 2.61,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("j_max", self.j_max)?;
        require_positive("a_max", self.a_max)?;
        require_positive("v_max", self.v_max)?;
        require_positive("j_rm", self.j_rm)?;
        require_positive("alpha_rm", self.alpha_rm)?;
        require_positive("omega_rm", self.omega_rm)
    }

    pub fn rotation_caps(&self) -> AxisCaps {
        AxisCaps {
            jerk: self.j_rm,
            accel: self.alpha_rm,
            velocity: self.omega_rm,
        }
    }

    pub fn translation_caps(&self) -> AxisCaps {
        AxisCaps {
            jerk: self.j_max,
            accel: self.a_max,
            velocity: self.v_max,
        }
    }
}

/// A straight-line transport task.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanRequest {
    /// `p_t`, m.
    pub target_distance: f64,
    /// Angle of the line above the horizontal, rad.
    pub elevation: f64,
    /// Heading of the motion plane about the world vertical, rad.
    pub azimuth: f64,
    pub object: ObjectParams,
    pub limits: MotionLimits,
    pub sample_dt: f64,
    /// World position at `s = 0`, m.
    pub start: [f64; 3],
}

impl PlanRequest {
    pub fn new(target_distance: f64, elevation: f64, object: ObjectParams, limits: MotionLimits) -> Self {
        Self {
            target_distance,
            elevation,
            azimuth: 0.0,
            object,
            limits,
            sample_dt: DEFAULT_SAMPLE_DT,
            start: [0.0; 3],
        }
    }

    /// Request toward a world-frame displacement `[x, y, z]` (z up).
    pub fn toward(displacement: [f64; 3], object: ObjectParams, limits: MotionLimits) -> Self {
        let [x, y, z] = displacement;
        let horizontal = x.hypot(y);
        Self {
            azimuth: y.atan2(x),
            ..Self::new(horizontal.hypot(z), z.atan2(horizontal), object, limits)
        }
    }

    pub fn with_azimuth(mut self, azimuth: f64) -> Self {
        self.azimuth = azimuth;
        self
    }

    pub fn with_sample_dt(mut self, dt: f64) -> Self {
        self.sample_dt = dt;
        self
    }

    pub fn with_object(mut self, object: ObjectParams) -> Self {
        self.object = object;
        self
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("target_distance", self.target_distance)?;
        require_finite("elevation", self.elevation)?;
        if self.elevation.abs() > FRAC_PI_2 {
            return Err(invalid(
                "elevation",
                format!("must lie in [-pi/2, pi/2], got {}", self.elevation),
            ));
        }
        require_finite("azimuth", self.azimuth)?;
        require_positive("sample_dt", self.sample_dt)?;
        for c in self.start {
            require_finite("start", c)?;
        }
        self.limits.validate()
    }

    /// Unit vector of the motion line in the world frame.
    pub fn direction(&self) -> [f64; 3] {
        let (se, ce) = self.elevation.sin_cos();
        let (sa, ca) = self.azimuth.sin_cos();
        [ce * ca, ce * sa, se]
    }
}

/// One time sample of a trajectory.
///
/// `pitch` is the signed tray angle relative to level (`+` leans toward the
/// target) and `tilt` its magnitude. `angular_velocity`,
/// `angular_acceleration` and `angular_jerk` are time derivatives of `pitch`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct KinematicSample {
    pub t: f64,
    pub tilt: f64,
    pub angular_velocity: f64,
    pub angular_acceleration: f64,
    pub angular_jerk: f64,
    pub accel: f64,
    pub velocity: f64,
    pub arc_length: f64,
    pub position: [f64; 3],
    pub pitch: f64,
}

impl KinematicSample {
    /// Tray state in the unmirrored motion plane.
    pub fn tray(&self) -> TrayState {
        TrayState {
            tilt: self.pitch,
            angular_velocity: self.angular_velocity,
            angular_acceleration: self.angular_acceleration,
        }
    }
}

/// Phase timing and fitted parameters of a planned trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSummary {
    pub t_total: f64,
    pub t_acc: f64,
    pub t_cruise: f64,
    pub t_dec: f64,
    /// End of the tray rotation in the acceleration phase (`t_a`).
    pub accel_rotation_end: f64,
    /// Duration of the tray rotation in the deceleration phase (`t_b`).
    pub decel_rotation_end: f64,
    pub accel_tilt: f64,
    pub decel_tilt: f64,
    pub peak_velocity: f64,
    /// Uniform scale applied to the acceleration envelope of each phase.
    pub accel_scale: f64,
    pub decel_scale: f64,
}

impl PhaseSummary {
    /// `[end of acceleration, end of cruise, end of trajectory]`.
    pub fn phase_marks(&self) -> [f64; 3] {
        [self.t_acc, self.t_acc + self.t_cruise, self.t_total]
    }
}

/// Time-sampled transport trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<KinematicSample>,
    /// `None` for trajectories loaded from files.
    pub phases: Option<PhaseSummary>,
    pub request: PlanRequest,
}

impl Trajectory {
    pub fn total_time(&self) -> f64 {
        self.samples.last().map(|s| s.t).unwrap_or(0.0)
    }

    pub fn peak_velocity(&self) -> f64 {
        self.samples.iter().map(|s| s.velocity).fold(0.0, f64::max)
    }

    /// Spacing of the first two samples.
    pub fn sample_dt(&self) -> f64 {
        match self.samples.as_slice() {
            [a, b, ..] => b.t - a.t,
            _ => self.request.sample_dt,
        }
    }
}

/// Whether the tray may rotate during a phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseKind {
    Rotating,
    Level,
}

/// One acceleration phase from rest to the peak velocity.
///
/// The sample arrays have `2 * mid_index + 1` entries and are symmetric
/// about `mid_index` in acceleration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccelPhase {
    pub rotation: RotationProfile,
    /// Elevation the tipping limit was evaluated at.
    pub elevation: f64,
    pub dt: f64,
    pub accel: Vec<f64>,
    pub velocity: Vec<f64>,
    pub distance: Vec<f64>,
    pub mid_index: usize,
    pub scale: f64,
    pub peak_velocity: f64,
}

impl AccelPhase {
    pub fn intervals(&self) -> usize {
        2 * self.mid_index
    }

    pub fn duration(&self) -> f64 {
        self.intervals() as f64 * self.dt
    }

    pub fn total_distance(&self) -> f64 {
        *self.distance.last().unwrap_or(&0.0)
    }

    /// Tray state and rotational jerk at sample `k`; the second half mirrors
    /// the first in time.
    pub fn tray_at(&self, k: usize) -> (TrayState, f64) {
        if k <= self.mid_index {
            sample_rotation(&self.rotation, k as f64 * self.dt)
        } else {
            let (s, j) = sample_rotation(&self.rotation, (self.intervals() - k) as f64 * self.dt);
            (
                TrayState {
                    tilt: s.tilt,
                    angular_velocity: -s.angular_velocity,
                    angular_acceleration: s.angular_acceleration,
                },
                -j,
            )
        }
    }
}

/// Tipping-limited acceleration clamped to `a_max` at time `t` of a rotation.
fn tipping_envelope(
    rotation: &RotationProfile,
    elevation: f64,
    obj: &ObjectParams,
    limits: &MotionLimits,
    t: f64,
) -> f64 {
    let (tray, _) = sample_rotation(rotation, t);
    max_translational_accel(&tray, elevation, obj).clamp(limits.a_max)
}

/// Envelope including the translational jerk ramp from rest.
fn phase_envelope(
    rotation: &RotationProfile,
    elevation: f64,
    obj: &ObjectParams,
    limits: &MotionLimits,
    t: f64,
) -> f64 {
    tipping_envelope(rotation, elevation, obj, limits, t).min(limits.j_max * t)
}

/// Acceleration admissible at each grid point `k dt` of `[0, t_a]`.
pub fn derive_accel_profile(
    rotation: &RotationProfile,
    elevation: f64,
    obj: &ObjectParams,
    limits: &MotionLimits,
    dt: f64,
) -> Vec<f64> {
    let last = (rotation.rotation_end() / dt + 1e-9).floor() as usize;
    (0..=last)
        .map(|k| tipping_envelope(rotation, elevation, obj, limits, k as f64 * dt))
        .collect()
}

const GAUSS_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GAUSS_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Velocity gained over `[0, t_a]` of a rotation, by composite
/// Gauss-Legendre quadrature over every jerk segment.
pub fn rotation_phase_velocity(
    rotation: &RotationProfile,
    elevation: f64,
    obj: &ObjectParams,
    limits: &MotionLimits,
) -> f64 {
    const PIECES: usize = 8;
    let mut start = 0.0;
    let mut total = 0.0;
    for seg in rotation.segments() {
        if seg.duration > 0.0 {
            let h = seg.duration / PIECES as f64;
            for p in 0..PIECES {
                let mid = start + (p as f64 + 0.5) * h;
                for (x, w) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
                    total += w * 0.5 * h * phase_envelope(rotation, elevation, obj, limits, mid + 0.5 * h * x);
                }
            }
        }
        start += seg.duration;
    }
    total
}

/// Largest terminal tilt whose rotation phase keeps the end-of-rotation
/// acceleration within `a_max` and the velocity at `t_a` within `v_max / 2`.
pub fn fit_phi_rm(elevation: f64, obj: &ObjectParams, limits: &MotionLimits) -> f64 {
    fit_terminal_tilt(elevation, obj, limits, limits.v_max)
}

fn fit_terminal_tilt(elevation: f64, obj: &ObjectParams, limits: &MotionLimits, peak_velocity: f64) -> f64 {
    let half = 0.5 * peak_velocity;
    let caps = limits.rotation_caps();
    let admissible = |tilt: f64| -> bool {
        let end_ok = match static_tipping_accel(tilt, elevation, obj) {
            TippingLimit::Bounded(a) => a <= limits.a_max,
            TippingLimit::Blocked => true,
            TippingLimit::Unconstrained => false,
        };
        end_ok && {
            let rotation = rotation_half_profile(&caps, tilt).expect("tilt is non-negative");
            rotation_phase_velocity(&rotation, elevation, obj, limits) <= half
        }
    };
    if admissible(MAX_TILT) {
        return MAX_TILT;
    }
    let (mut lo, mut hi) = (0.0, MAX_TILT);
    while hi - lo > TILT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if admissible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Builds the grid samples of one acceleration phase reaching `peak_velocity`.
fn build_phase(
    rotation: RotationProfile,
    elevation: f64,
    obj: &ObjectParams,
    limits: &MotionLimits,
    dt: f64,
    peak_velocity: f64,
) -> Result<AccelPhase> {
    let half = 0.5 * peak_velocity;
    let t_a = rotation.rotation_end();
    let last_inside = (t_a / dt + 1e-9).floor() as usize;
    let first_after = ((t_a / dt - 1e-9).ceil().max(1.0)) as usize;

    let mut base = vec![0.0];
    let mut v = 0.0;
    let mut k = 0;
    loop {
        k += 1;
        if k > MAX_PHASE_SAMPLES {
            return Err(PlanError::InfeasiblePhase(format!(
                "velocity {peak_velocity} m/s not reached within {MAX_PHASE_SAMPLES} samples"
            )));
        }
        let a = phase_envelope(&rotation, elevation, obj, limits, k as f64 * dt);
        v += 0.5 * dt * (base[k - 1] + a);
        base.push(a);
        if k <= last_inside && v > half * (1.0 + HALF_VELOCITY_SLACK) {
            return Err(PlanError::InfeasiblePhase(format!(
                "velocity {v} m/s at t = {} s already exceeds half the peak {half} m/s before the rotation ends",
                k as f64 * dt
            )));
        }
        if k >= first_after && v >= half {
            break;
        }
    }
    let mid = k;
    let scale = half / v;

    let mut accel = Vec::with_capacity(2 * mid + 1);
    accel.extend(base.iter().map(|a| a * scale));
    accel.extend(base[..mid].iter().rev().map(|a| a * scale));
    let (velocity, distance) = integrate(&accel, dt, 0.0, 0.0);
    let peak = *velocity.last().unwrap();
    Ok(AccelPhase {
        rotation,
        elevation,
        dt,
        accel,
        velocity,
        distance,
        mid_index: mid,
        scale,
        peak_velocity: peak,
    })
}

/// Trapezoidal integrals of a uniformly sampled acceleration.
pub fn integrate(accel: &[f64], dt: f64, v0: f64, s0: f64) -> (Vec<f64>, Vec<f64>) {
    let mut velocity = Vec::with_capacity(accel.len());
    let mut distance = Vec::with_capacity(accel.len());
    let (mut v, mut s) = (v0, s0);
    for (i, a) in accel.iter().enumerate() {
        if i > 0 {
            let v_next = v + 0.5 * dt * (accel[i - 1] + a);
            s += 0.5 * dt * (v + v_next);
            v = v_next;
        }
        velocity.push(v);
        distance.push(s);
    }
    (velocity, distance)
}

/// Acceleration phase for a given terminal tilt, reaching `v_max`.
pub fn build_accel_phase(terminal_tilt: f64, request: &PlanRequest) -> Result<AccelPhase> {
    request.validate()?;
    let rotation = rotation_half_profile(&request.limits.rotation_caps(), terminal_tilt)?;
    build_phase(
        rotation,
        request.elevation,
        &request.object,
        &request.limits,
        request.sample_dt,
        request.limits.v_max,
    )
}

/// Fits and builds one acceleration phase for `peak_velocity`.
fn plan_phase(
    kind: PhaseKind,
    elevation: f64,
    obj: &ObjectParams,
    limits: &MotionLimits,
    dt: f64,
    peak_velocity: f64,
) -> Result<AccelPhase> {
    let rotation = match kind {
        PhaseKind::Rotating => {
            let tilt = fit_terminal_tilt(elevation, obj, limits, peak_velocity);
            rotation_half_profile(&limits.rotation_caps(), tilt)?
        }
        PhaseKind::Level => RotationProfile::none(),
    };
    build_phase(rotation, elevation, obj, limits, dt, peak_velocity)
}

struct Candidate {
    accel: AccelPhase,
    decel: AccelPhase,
    cruise: usize,
}

impl Candidate {
    fn intervals(&self) -> usize {
        self.accel.intervals() + self.cruise + self.decel.intervals()
    }
}

/// Tries peak velocity `p_t / (units * dt)`; the two phases then cover
/// `v (M + M') dt` and the cruise fills the remaining `units - M - M'` steps.
fn evaluate(kind: PhaseKind, req: &PlanRequest, units: usize) -> Result<Option<Candidate>> {
    let dt = req.sample_dt;
    let v = req.target_distance / (units as f64 * dt);
    if v > req.limits.v_max {
        return Ok(None);
    }
    let accel = plan_phase(kind, req.elevation, &req.object, &req.limits, dt, v)?;
    if accel.mid_index > units {
        return Ok(None);
    }
    let decel = plan_phase(kind, -req.elevation, &req.object, &req.limits, dt, v)?;
    let used = accel.mid_index + decel.mid_index;
    if used > units {
        return Ok(None);
    }
    Ok(Some(Candidate {
        accel,
        decel,
        cruise: units - used,
    }))
}

fn search(kind: PhaseKind, req: &PlanRequest) -> Result<Candidate> {
    let dt = req.sample_dt;
    let mut lo = ((req.target_distance / (req.limits.v_max * dt)).ceil() as usize).max(1);
    while req.target_distance / (lo as f64 * dt) > req.limits.v_max {
        lo += 1;
    }

    let (units, first) = match evaluate(kind, req, lo)? {
        Some(c) => (lo, c),
        None => {
            let mut hi = lo.saturating_mul(2);
            let found = loop {
                if hi > MAX_PHASE_SAMPLES * 4 {
                    return Err(PlanError::InfeasibleDistance {
                        distance: req.target_distance,
                        minimum: MIN_DISTANCE,
                    });
                }
                match evaluate(kind, req, hi)? {
                    Some(c) => break c,
                    None => {
                        lo = hi;
                        hi = hi.saturating_mul(2);
                    }
                }
            };
            let mut best = (hi, found);
            while best.0 - lo > 1 {
                let mid = lo + (best.0 - lo) / 2;
                match evaluate(kind, req, mid)? {
                    Some(c) => best = (mid, c),
                    None => lo = mid,
                }
            }
            best
        }
    };

    let mut best = first;
    for extra in 1..=SEARCH_WINDOW {
        if let Some(c) = evaluate(kind, req, units + extra)? {
            if c.intervals() < best.intervals() {
                best = c;
            }
        }
    }
    Ok(best)
}

fn assemble(req: &PlanRequest, c: Candidate) -> Trajectory {
    let dt = req.sample_dt;
    let acc_n = c.accel.intervals();
    let cruise_end = acc_n + c.cruise;
    let total = c.intervals();

    let mut accel = Vec::with_capacity(total + 1);
    let mut trays = Vec::with_capacity(total + 1);
    for n in 0..=total {
        if n <= acc_n {
            accel.push(c.accel.accel[n]);
            let (tray, jerk) = c.accel.tray_at(n);
            trays.push((tray, jerk, 1.0));
        } else if n < cruise_end {
            accel.push(0.0);
            trays.push((TrayState::level(), 0.0, 1.0));
        } else {
            let k = n - cruise_end;
            accel.push(0.0 - c.decel.accel[k]);
            let (tray, jerk) = c.decel.tray_at(k);
            trays.push((tray, jerk, -1.0));
        }
    }
    let (velocity, distance) = integrate(&accel, dt, 0.0, 0.0);
    let dir = req.direction();

    let samples = (0..=total)
        .map(|n| {
            let (tray, jerk, sign) = trays[n];
            let s = distance[n];
            KinematicSample {
                t: n as f64 * dt,
                tilt: tray.tilt,
                angular_velocity: sign * tray.angular_velocity,
                angular_acceleration: sign * tray.angular_acceleration,
                angular_jerk: sign * jerk,
                accel: accel[n],
                velocity: velocity[n],
                arc_length: s,
                position: [
                    req.start[0] + s * dir[0],
                    req.start[1] + s * dir[1],
                    req.start[2] + s * dir[2],
                ],
                pitch: sign * tray.tilt,
            }
        })
        .collect();

    let phases = PhaseSummary {
        t_total: total as f64 * dt,
        t_acc: acc_n as f64 * dt,
        t_cruise: c.cruise as f64 * dt,
        t_dec: c.decel.intervals() as f64 * dt,
        accel_rotation_end: c.accel.rotation.rotation_end(),
        decel_rotation_end: c.decel.rotation.rotation_end(),
        accel_tilt: c.accel.rotation.terminal_tilt(),
        decel_tilt: c.decel.rotation.terminal_tilt(),
        peak_velocity: c.accel.peak_velocity,
        accel_scale: c.accel.scale,
        decel_scale: c.decel.scale,
    };
    Trajectory {
        samples,
        phases: Some(phases),
        request: *req,
    }
}

fn plan(kind: PhaseKind, req: &PlanRequest) -> Result<Trajectory> {
    req.validate()?;
    if req.target_distance < MIN_DISTANCE {
        return Err(PlanError::InfeasibleDistance {
            distance: req.target_distance,
            minimum: MIN_DISTANCE,
        });
    }
    let candidate = search(kind, req)?;
    Ok(assemble(req, candidate))
}

/// Time-optimized transport with tray rotation.
pub fn assemble_trajectory(request: &PlanRequest) -> Result<Trajectory> {
    plan(PhaseKind::Rotating, request)
}

/// Level-tray seven-segment transport, capped by the level tipping limit.
pub fn plan_baseline(request: &PlanRequest) -> Result<Trajectory> {
    plan(PhaseKind::Level, request)
}

/// Acceleration cap of the level-tray planner for motion at `elevation`.
pub fn baseline_accel_cap(elevation: f64, obj: &ObjectParams, limits: &MotionLimits) -> f64 {
    static_tipping_accel(0.0, elevation, obj).clamp(limits.a_max)
}

/// Continuous-time seven-segment reference for the level-tray planner: the
/// acceleration cap is the smaller of the two directional tipping limits.
pub fn baseline_reference_time(request: &PlanRequest) -> Result<f64> {
    request.validate()?;
    let obj = &request.object;
    let limits = &request.limits;
    let cap =
        baseline_accel_cap(request.elevation, obj, limits).min(baseline_accel_cap(-request.elevation, obj, limits));
    let caps = AxisCaps::new(limits.j_max, cap, limits.v_max)?;
    Ok(plan_seven_segment(request.target_distance, &caps)?.total_time())
}

/// Polar form of a transport target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetSummary {
    pub distance_m: f64,
    pub theta_rad: f64,
    pub psi_rad: f64,
}

/// Timing of the rotating planner against the level-tray planner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub t_with_rotation: f64,
    pub t_without_rotation: f64,
    /// `1 - t_with / t_without`.
    pub improvement: f64,
    pub target: TargetSummary,
    pub accel_tilt: f64,
    pub decel_tilt: f64,
    pub radius_with_rotation: f64,
    pub radius_without_rotation: f64,
}

/// Runs both planners on the same request.
pub fn compare(request: &PlanRequest) -> Result<ComparisonReport> {
    compare_objects(request, &request.object)
}

/// Runs the rotating planner with `request.object` and the level planner with
/// `baseline_object`.
pub fn compare_objects(request: &PlanRequest, baseline_object: &ObjectParams) -> Result<ComparisonReport> {
    let rotated = assemble_trajectory(request)?;
    let level = plan_baseline(&request.with_object(*baseline_object))?;
    let phases = rotated.phases.expect("planned trajectories carry phases");
    let t_with = rotated.total_time();
    let t_without = level.total_time();
    Ok(ComparisonReport {
        t_with_rotation: t_with,
        t_without_rotation: t_without,
        improvement: 1.0 - t_with / t_without,
        target: TargetSummary {
            distance_m: request.target_distance,
            theta_rad: request.elevation,
            psi_rad: request.azimuth,
        },
        accel_tilt: phases.accel_tilt,
        decel_tilt: phases.decel_tilt,
        radius_with_rotation: request.object.base_radius(),
        radius_without_rotation: baseline_object.base_radius(),
    })
}

/// Evenly spaced values `start ..= end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(start: f64, end: f64, count: usize) -> Result<Self> {
        require_finite("range start", start)?;
        require_finite("range end", end)?;
        if count == 0 {
            return Err(invalid("count", "grid needs at least one point per axis"));
        }
        Ok(Self { start, end, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + step * i as f64).collect()
    }
}

/// Grid of targets in the motion plane: `x` horizontal, `y` vertical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub x: AxisRange,
    pub y: AxisRange,
}

/// One grid point of an efficiency sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub x: f64,
    pub y: f64,
    pub t_rot: Option<f64>,
    pub t_norot: Option<f64>,
    pub improvement: Option<f64>,
    pub note: Option<String>,
}

/// Compares both planners at every grid point. Records are ordered by `x`
/// index, then `y` index, whatever the execution mode.
pub fn efficiency_sweep(
    grid: &SweepGrid,
    obj: &ObjectParams,
    limits: &MotionLimits,
    sample_dt: f64,
    exec: Execution,
) -> Vec<SweepRecord> {
    let points: Vec<(f64, f64)> = grid
        .x
        .values()
        .into_iter()
        .flat_map(|x| grid.y.values().into_iter().map(move |y| (x, y)))
        .collect();
    map_ordered(&points, exec, |&(x, y)| sweep_point(x, y, obj, limits, sample_dt))
}

fn sweep_point(x: f64, y: f64, obj: &ObjectParams, limits: &MotionLimits, sample_dt: f64) -> SweepRecord {
    let skipped = |note: String| SweepRecord {
        x,
        y,
        t_rot: None,
        t_norot: None,
        improvement: None,
        note: Some(note),
    };
    if x.hypot(y) < MIN_DISTANCE {
        return skipped("origin".to_string());
    }
    let request = PlanRequest::new(x.hypot(y), y.atan2(x), *obj, *limits).with_sample_dt(sample_dt);
    if request.elevation.abs() > FRAC_PI_2 {
        return skipped("behind the start (x < 0)".to_string());
    }
    match compare(&request) {
        Ok(r) => SweepRecord {
            x,
            y,
            t_rot: Some(r.t_with_rotation),
            t_norot: Some(r.t_without_rotation),
            improvement: Some(r.improvement),
            note: None,
        },
        Err(e) => skipped(e.to_string()),
    }
}
