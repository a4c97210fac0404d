//! Independent audit of planned trajectories.
//!
//! Stability is re-derived from the torque balance at the virtual joint by
//! solving for the center of pressure each sample requires; the tipping-limit
//! formula used by the planner is never consulted here.

use crate::physics::{required_cop_offset, ObjectParams};
use crate::planner::{MotionLimits, Trajectory};
use serde::{Deserialize, Serialize};

/// Slack on the center-of-pressure bound, m. Absorbs sampling discretization
/// at 1 ms.
pub const TOL_COP: f64 = 1e-4;

/// Tolerance of the endpoint contract (m, m/s, m/s², rad, rad/s, rad/s²).
pub const ENDPOINT_TOL: f64 = 1e-6;

/// Slack on direct limit comparisons.
pub const LIMIT_SLACK: f64 = 1e-9;

/// Center-of-pressure audit of a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    /// Required offset per sample; `None` where the contact is singular.
    pub cop_offset: Vec<Option<f64>>,
    /// `r - |offset|` per sample (`-inf` where singular).
    pub margin: Vec<f64>,
    pub min_margin: f64,
    /// Time of the sample with the smallest margin.
    pub min_margin_t: f64,
    pub stable: bool,
    pub first_violation_t: Option<f64>,
    pub singular_samples: Vec<usize>,
    pub tolerance: f64,
}

pub fn stability_audit(traj: &Trajectory, obj: &ObjectParams) -> StabilityReport {
    let r = obj.base_radius();
    let elevation = traj.request.elevation;
    let mut cop_offset = Vec::with_capacity(traj.samples.len());
    let mut margin = Vec::with_capacity(traj.samples.len());
    let mut singular_samples = Vec::new();
    let mut first_violation_t = None;
    let (mut min_margin, mut min_margin_t) = (f64::INFINITY, 0.0);

    for (i, s) in traj.samples.iter().enumerate() {
        let (offset, m) = match required_cop_offset(&s.tray(), s.accel, elevation, obj) {
            Ok(d) => (Some(d), r - d.abs()),
            Err(_) => {
                singular_samples.push(i);
                (None, f64::NEG_INFINITY)
            }
        };
        if m < -TOL_COP && first_violation_t.is_none() {
            first_violation_t = Some(s.t);
        }
        if m < min_margin {
            min_margin = m;
            min_margin_t = s.t;
        }
        cop_offset.push(offset);
        margin.push(m);
    }
    StabilityReport {
        cop_offset,
        margin,
        min_margin,
        min_margin_t,
        stable: min_margin >= -TOL_COP,
        first_violation_t,
        singular_samples,
        tolerance: TOL_COP,
    }
}

/// One audited bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCheck {
    pub name: String,
    pub observed: f64,
    pub limit: f64,
    pub slack: f64,
    pub pass: bool,
    pub worst_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintAudit {
    pub checks: Vec<LimitCheck>,
}

impl ConstraintAudit {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&LimitCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `(time, value)` of the largest value; `(0, -inf)` for no samples.
fn worst<I: Iterator<Item = (f64, f64)>>(values: I) -> (f64, f64) {
    values.fold(
        (0.0, f64::NEG_INFINITY),
        |best, cur| if cur.1 > best.1 { cur } else { best },
    )
}

fn limit_check(name: &str, observed: (f64, f64), limit: f64, slack: f64) -> LimitCheck {
    let (worst_t, observed) = observed;
    LimitCheck {
        name: name.to_string(),
        observed,
        limit,
        slack,
        pass: observed <= limit + slack,
        worst_t,
    }
}

/// Checks jerk, acceleration and velocity bounds of both axes. Translational
/// jerk is the central finite difference of the sampled acceleration.
/// Angular rates and accelerations are audited by magnitude.
pub fn audit_constraints(traj: &Trajectory, limits: &MotionLimits) -> ConstraintAudit {
    let samples = &traj.samples;
    let dt = traj.sample_dt();
    let jerk = worst(
        samples
            .windows(3)
            .map(|w| (w[1].t, ((w[2].accel - w[0].accel) / (w[2].t - w[0].t)).abs())),
    );
    let checks = vec![
        limit_check("j_max", jerk, limits.j_max, 10.0 * limits.a_max * dt),
        limit_check(
            "a_max",
            worst(samples.iter().map(|s| (s.t, s.accel.abs()))),
            limits.a_max,
            LIMIT_SLACK,
        ),
        limit_check(
            "v_max",
            worst(samples.iter().map(|s| (s.t, s.velocity))),
            limits.v_max,
            LIMIT_SLACK,
        ),
        limit_check(
            "v_min",
            worst(samples.iter().map(|s| (s.t, -s.velocity))),
            0.0,
            LIMIT_SLACK,
        ),
        limit_check(
            "j_rm",
            worst(samples.iter().map(|s| (s.t, s.angular_jerk.abs()))),
            limits.j_rm,
            LIMIT_SLACK,
        ),
        limit_check(
            "alpha_rm",
            worst(samples.iter().map(|s| (s.t, s.angular_acceleration.abs()))),
            limits.alpha_rm,
            LIMIT_SLACK,
        ),
        limit_check(
            "omega_rm",
            worst(samples.iter().map(|s| (s.t, s.angular_velocity.abs()))),
            limits.omega_rm,
            LIMIT_SLACK,
        ),
    ];
    ConstraintAudit { checks }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointCheck {
    pub name: String,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointAudit {
    pub checks: Vec<EndpointCheck>,
}

impl EndpointAudit {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EndpointCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Start and end at rest, level, with the final arc length on target and no
/// overshoot along the way.
pub fn endpoint_audit(traj: &Trajectory) -> EndpointAudit {
    let target = traj.request.target_distance;
    let check = |name: &str, observed: f64| EndpointCheck {
        name: name.to_string(),
        observed,
        tolerance: ENDPOINT_TOL,
        pass: observed <= ENDPOINT_TOL,
    };
    let (Some(first), Some(last)) = (traj.samples.first(), traj.samples.last()) else {
        return EndpointAudit {
            checks: vec![check("samples", f64::INFINITY)],
        };
    };
    let overshoot = traj.samples.iter().map(|s| s.arc_length - target).fold(0.0, f64::max);
    let checks = vec![
        check("initial_velocity", first.velocity.abs()),
        check("initial_accel", first.accel.abs()),
        check("initial_tilt", first.pitch.abs()),
        check("displacement", (last.arc_length - target).abs()),
        check("overshoot", overshoot),
        check("terminal_velocity", last.velocity.abs()),
        check("terminal_accel", last.accel.abs()),
        check("terminal_angular_velocity", last.angular_velocity.abs()),
        check("terminal_angular_accel", last.angular_acceleration.abs()),
        check("terminal_tilt", last.pitch.abs()),
    ];
    EndpointAudit { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::{assemble_trajectory, plan_baseline, PlanRequest};

    fn object(r: f64) -> ObjectParams {
        ObjectParams::cylinder(1.0, r, 0.2).unwrap()
    }

    fn planned() -> (Trajectory, ObjectParams) {
        let obj = object(0.008);
        let req = PlanRequest::new(0.5, 0.0, obj, MotionLimits::panda());
        (assemble_trajectory(&req).unwrap(), obj)
    }

    #[test]
    fn planned_trajectory_passes_everything() {
        let (traj, obj) = planned();
        let s = stability_audit(&traj, &obj);
        assert!(s.stable);
        assert!(s.singular_samples.is_empty());
        assert!(s.min_margin >= -TOL_COP && s.min_margin <= 5e-3, "{}", s.min_margin);
        assert!(audit_constraints(&traj, &MotionLimits::panda()).pass());
        assert!(endpoint_audit(&traj).pass());
    }

    #[test]
    fn doubled_acceleration_is_unstable() {
        let (mut traj, obj) = planned();
        for s in traj.samples.iter_mut() {
            s.accel *= 2.0;
        }
        let report = stability_audit(&traj, &obj);
        assert!(!report.stable);
        let t = report.first_violation_t.unwrap();
        assert!(t > 0.0 && t < traj.total_time());
    }

    #[test]
    fn half_cap_leaves_half_radius_margin() {
        // The level cap scales with r at theta = 0, so a plan for r/2 audited
        // with r uses half the available base.
        let req = PlanRequest::new(0.5, 0.0, object(0.004), MotionLimits::panda());
        let traj = plan_baseline(&req).unwrap();
        let report = stability_audit(&traj, &object(0.008));
        let peak = traj.samples.iter().map(|s| s.accel.abs()).fold(0.0, f64::max);
        let expected = 0.008 - peak * 0.1 / crate::physics::GRAVITY;
        assert!(
            (report.min_margin - expected).abs() < 1e-12,
            "{} vs {expected}",
            report.min_margin
        );
        assert!((report.min_margin - 0.004).abs() < 1e-5);
    }

    #[test]
    fn reduced_accel_limit_is_reported() {
        let (traj, _) = planned();
        let phases = traj.phases.unwrap();
        let limits = MotionLimits {
            a_max: 1.0,
            ..MotionLimits::panda()
        };
        let audit = audit_constraints(&traj, &limits);
        assert!(!audit.pass());
        let a = audit.check("a_max").unwrap();
        assert!(!a.pass);
        assert!(a.observed > 1.0);
        assert!(
            a.worst_t > 0.0 && a.worst_t <= phases.t_acc / 2.0 + 1e-9,
            "{}",
            a.worst_t
        );
        assert!(audit.check("v_max").unwrap().pass);
    }

    #[test]
    fn truncated_trajectory_fails_terminal_checks() {
        let (mut traj, _) = planned();
        let keep = traj.samples.len() / 2;
        traj.samples.truncate(keep);
        let audit = endpoint_audit(&traj);
        let failed: Vec<&str> = audit.failures().map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"terminal_velocity"));
        assert!(failed.contains(&"displacement"));
    }

    #[test]
    fn target_mismatch_fails_displacement() {
        let (mut traj, _) = planned();
        traj.request.target_distance = 0.4;
        let failed: Vec<String> = endpoint_audit(&traj).failures().map(|c| c.name.clone()).collect();
        assert!(failed.contains(&"displacement".to_string()));
        assert!(failed.contains(&"overshoot".to_string()));
    }

    #[test]
    fn empty_trajectory_fails() {
        let (mut traj, obj) = planned();
        traj.samples.clear();
        assert!(!endpoint_audit(&traj).pass());
        assert!(stability_audit(&traj, &obj).stable);
    }
}
