//! Jerk-limited rest-to-rest profiles.
//!
//! Both the tray rotation and the level-tray translation use the classic
//! seven-segment shape with jerk pattern `+j, 0, -j, 0, -j, 0, +j`. Segments
//! are kept analytically and sampled on demand.

use crate::error::{invalid, require_positive, Result};
use crate::physics::TrayState;
use serde::{Deserialize, Serialize};

/// One constant-jerk piece.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JerkSegment {
    pub duration: f64,
    pub jerk: f64,
}

/// Jerk, acceleration and velocity caps for one axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisCaps {
    pub jerk: f64,
    pub accel: f64,
    pub velocity: f64,
}

impl AxisCaps {
    pub fn new(jerk: f64, accel: f64, velocity: f64) -> Result<Self> {
        require_positive("jerk cap", jerk)?;
        require_positive("acceleration cap", accel)?;
        require_positive("velocity cap", velocity)?;
        Ok(Self { jerk, accel, velocity })
    }
}

/// Position, velocity, acceleration and jerk of a profile at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AxisState {
    pub position: f64,
    pub velocity: f64,
    pub accel: f64,
    pub jerk: f64,
}

/// Segment list plus the state at the start of every segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SevenSegment {
    segments: Vec<JerkSegment>,
    /// `knots[i]` is the state at the start of segment `i`; the last entry is
    /// the terminal state.
    knots: Vec<AxisState>,
    starts: Vec<f64>,
    peak_velocity: f64,
    peak_accel: f64,
}

impl SevenSegment {
    fn empty() -> Self {
        Self {
            segments: Vec::new(),
            knots: vec![AxisState::default()],
            starts: vec![0.0],
            peak_velocity: 0.0,
            peak_accel: 0.0,
        }
    }

    /// Minimum-time rest-to-rest profile over `distance` (>= 0).
    fn rest_to_rest(distance: f64, caps: &AxisCaps) -> Self {
        if distance <= 0.0 {
            return Self::empty();
        }
        let AxisCaps {
            jerk: j,
            accel: a,
            velocity: v,
        } = *caps;

        // Durations of the jerk ramp, the constant-acceleration plateau and
        // the cruise.
        let (ramp, plateau, cruise, peak_accel) = {
            let (ramp_v, plateau_v) = if v * j >= a * a {
                (a / j, v / a - a / j)
            } else {
                ((v / j).sqrt(), 0.0)
            };
            let accel_distance = v * (2.0 * ramp_v + plateau_v);
            if distance >= accel_distance {
                let peak = if plateau_v > 0.0 { a } else { j * ramp_v };
                (ramp_v, plateau_v, (distance - accel_distance) / v, peak)
            } else {
                let ramp_a = a / j;
                let plateau_a = 0.5 * (-3.0 * ramp_a + (ramp_a * ramp_a + 4.0 * distance / a).sqrt());
                if plateau_a > 0.0 {
                    (ramp_a, plateau_a, 0.0, a)
                } else {
                    let ramp = (distance / (2.0 * j)).cbrt();
                    (ramp, 0.0, 0.0, j * ramp)
                }
            }
        };

        let pattern = [
            (ramp, j),
            (plateau, 0.0),
            (ramp, -j),
            (cruise, 0.0),
            (ramp, -j),
            (plateau, 0.0),
            (ramp, j),
        ];
        // Acceleration at segment starts is pinned to the exact plateau value.
        let knot_accel = [0.0, peak_accel, peak_accel, 0.0, 0.0, -peak_accel, -peak_accel, 0.0];

        let mut segments = Vec::with_capacity(7);
        let mut knots = Vec::with_capacity(8);
        let mut starts = Vec::with_capacity(8);
        let mut state = AxisState::default();
        let mut t = 0.0;
        for (i, &(duration, jerk)) in pattern.iter().enumerate() {
            state.accel = knot_accel[i];
            state.jerk = jerk;
            if i == 3 && cruise > 0.0 {
                state.velocity = v;
            }
            knots.push(state);
            starts.push(t);
            segments.push(JerkSegment { duration, jerk });
            state = advance(&state, duration);
            t += duration;
        }
        let peak_velocity = knots[3].velocity;
        // Terminal state is exact by construction; drop rounding residue.
        knots.push(AxisState {
            position: distance,
            ..AxisState::default()
        });
        starts.push(t);
        Self {
            segments,
            knots,
            starts,
            peak_velocity,
            peak_accel,
        }
    }

    fn total_time(&self) -> f64 {
        *self.starts.last().unwrap_or(&0.0)
    }

    fn sample(&self, t: f64) -> AxisState {
        let total = self.total_time();
        if self.segments.is_empty() || t >= total {
            let mut end = *self.knots.last().unwrap();
            end.jerk = 0.0;
            return end;
        }
        if t <= 0.0 {
            return AxisState {
                jerk: self.segments[0].jerk,
                ..AxisState::default()
            };
        }
        // Segment containing t; zero-length segments are skipped by the search.
        let idx = match self.starts[1..].iter().position(|&s| t < s) {
            Some(i) => i,
            None => self.segments.len() - 1,
        };
        advance(&self.knots[idx], t - self.starts[idx])
    }
}

fn advance(s: &AxisState, tau: f64) -> AxisState {
    let j = s.jerk;
    AxisState {
        position: s.position + s.velocity * tau + s.accel * tau * tau / 2.0 + j * tau * tau * tau / 6.0,
        velocity: s.velocity + s.accel * tau + j * tau * tau / 2.0,
        accel: s.accel + j * tau,
        jerk: j,
    }
}

/// Tray rotation from level to `terminal_tilt` and back to rest.
///
/// Breakpoints are `t1 ... t6` and `t_a` (end of rotation). After `t_a` the
/// tray holds the terminal tilt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationProfile {
    profile: SevenSegment,
    terminal_tilt: f64,
    direction_sign: f64,
}

impl RotationProfile {
    /// No rotation at all.
    pub fn none() -> Self {
        Self {
            profile: SevenSegment::empty(),
            terminal_tilt: 0.0,
            direction_sign: 1.0,
        }
    }

    pub fn segments(&self) -> &[JerkSegment] {
        &self.profile.segments
    }

    /// `[t1, t2, t3, t4, t5, t6, t_a]`; all zero for an empty profile.
    pub fn breakpoints(&self) -> [f64; 7] {
        let mut out = [0.0; 7];
        for (slot, t) in out.iter_mut().zip(self.profile.starts.iter().skip(1)) {
            *slot = *t;
        }
        out
    }

    /// End of rotation `t_a`.
    pub fn rotation_end(&self) -> f64 {
        self.profile.total_time()
    }

    pub fn terminal_tilt(&self) -> f64 {
        self.terminal_tilt
    }

    pub fn peak_angular_velocity(&self) -> f64 {
        self.profile.peak_velocity
    }

    pub fn peak_angular_accel(&self) -> f64 {
        self.profile.peak_accel
    }

    /// `+1` leans into the motion, `-1` leans against it.
    pub fn direction_sign(&self) -> f64 {
        self.direction_sign
    }

    /// Same profile, tilting the other way.
    pub fn reversed(&self) -> Self {
        Self {
            direction_sign: -self.direction_sign,
            ..self.clone()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.profile.segments.is_empty()
    }
}

/// Minimum-time jerk-limited rotation from level to `terminal_tilt`, with
/// zero angular velocity and acceleration at both ends.
pub fn rotation_half_profile(caps: &AxisCaps, terminal_tilt: f64) -> Result<RotationProfile> {
    if !(terminal_tilt.is_finite() && terminal_tilt >= 0.0) {
        return Err(invalid(
            "terminal_tilt",
            format!("must be finite and >= 0, got {terminal_tilt}"),
        ));
    }
    Ok(RotationProfile {
        profile: SevenSegment::rest_to_rest(terminal_tilt, caps),
        terminal_tilt,
        direction_sign: 1.0,
    })
}

/// Tilt state and rotational jerk at time `t`, relative to the profile's own
/// tilt direction (tilt is non-negative).
pub fn sample_rotation(profile: &RotationProfile, t: f64) -> (TrayState, f64) {
    let s = profile.profile.sample(t);
    (
        TrayState {
            tilt: s.position,
            angular_velocity: s.velocity,
            angular_acceleration: s.accel,
        },
        s.jerk,
    )
}

/// Rest-to-rest translation along a line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarProfile1D {
    profile: SevenSegment,
}

impl ScalarProfile1D {
    pub fn segments(&self) -> &[JerkSegment] {
        &self.profile.segments
    }

    pub fn total_time(&self) -> f64 {
        self.profile.total_time()
    }

    pub fn peak_velocity(&self) -> f64 {
        self.profile.peak_velocity
    }

    pub fn peak_accel(&self) -> f64 {
        self.profile.peak_accel
    }

    pub fn distance(&self) -> f64 {
        self.profile.knots.last().map(|k| k.position).unwrap_or(0.0)
    }

    pub fn sample(&self, t: f64) -> AxisState {
        self.profile.sample(t)
    }
}

/// Seven-segment point-to-point profile covering `distance`.
pub fn plan_seven_segment(distance: f64, caps: &AxisCaps) -> Result<ScalarProfile1D> {
    require_positive("distance", distance)?;
    Ok(ScalarProfile1D {
        profile: SevenSegment::rest_to_rest(distance, caps),
    })
}
