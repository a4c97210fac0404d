//! Contact model between the tray and a standing cylinder.
//!
//! All quantities live in the vertical plane that contains the motion
//! direction. The plane has a forward axis `x` (horizontal component of the
//! motion direction) and an up axis `z`. The object is rigidly attached to
//! the tray at the base center `R` through a virtual joint, and the tray
//! rotates about `R`.
//!
//! Sign conventions:
//! - tray tilt `phi > 0` leans the object axis toward `+x`, i.e. into the
//!   direction of motion;
//! - elevation `theta` is the angle of the motion line above the horizontal;
//! - a center-of-pressure offset `d > 0` lies on the trailing edge of the
//!   base (toward `-x` along the tray surface).
//!
//! Torques are planar pseudo-scalars (`p.x * f.z - p.z * f.x`).

use crate::error::{invalid, require_finite, require_positive, PlanError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Gravitational acceleration magnitude, m/s².
pub const GRAVITY: f64 = 9.81;

/// At or below this value (meters) the tipping denominator is treated as
/// non-positive and the tipping constraint as inactive.
pub const DENOMINATOR_GUARD: f64 = 1e-6;

/// Transported cylinder: mass, base radius, height and the moment of inertia
/// about the transverse axis through the base center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectParams {
    mass: f64,
    base_radius: f64,
    height: f64,
    inertia: f64,
}

impl ObjectParams {
    /// Uniform solid cylinder; inertia from [`cylinder_inertia`].
    pub fn cylinder(mass: f64, base_radius: f64, height: f64) -> Result<Self> {
        let inertia = cylinder_inertia(mass, base_radius, height)?;
        Ok(Self {
            mass,
            base_radius,
            height,
            inertia,
        })
    }

    /// Object with an explicitly supplied inertia about the base-center axis.
    pub fn with_inertia(mass: f64, base_radius: f64, height: f64, inertia: f64) -> Result<Self> {
        require_positive("mass", mass)?;
        require_positive("base_radius", base_radius)?;
        require_positive("height", height)?;
        require_positive("inertia", inertia)?;
        Ok(Self {
            mass,
            base_radius,
            height,
            inertia,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn base_radius(&self) -> f64 {
        self.base_radius
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn inertia(&self) -> f64 {
        self.inertia
    }

    /// `I / m`, the only way mass enters the tipping limit.
    pub fn inertia_per_mass(&self) -> f64 {
        self.inertia / self.mass
    }

    /// Same geometry with a different base radius.
    pub fn with_base_radius(&self, base_radius: f64) -> Result<Self> {
        Self::cylinder(self.mass, base_radius, self.height)
    }
}

/// Moment of inertia of a uniform solid cylinder about a transverse axis
/// through the center of its base: `m (h²/3 + r²/4)`.
pub fn cylinder_inertia(mass: f64, base_radius: f64, height: f64) -> Result<f64> {
    require_positive("mass", mass)?;
    require_positive("base_radius", base_radius)?;
    require_positive("height", height)?;
    Ok(mass * (height * height / 3.0 + base_radius * base_radius / 4.0))
}

/// Rotational state of the tray.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TrayState {
    /// Tilt `phi`, rad. Positive leans the object axis toward `+x`.
    pub tilt: f64,
    /// `omega = dphi/dt`, rad/s.
    pub angular_velocity: f64,
    /// `alpha = d²phi/dt²`, rad/s².
    pub angular_acceleration: f64,
}

impl TrayState {
    pub fn new(tilt: f64, angular_velocity: f64, angular_acceleration: f64) -> Result<Self> {
        require_finite("tilt", tilt)?;
        require_finite("angular_velocity", angular_velocity)?;
        require_finite("angular_acceleration", angular_acceleration)?;
        if tilt.abs() > FRAC_PI_2 {
            return Err(invalid("tilt", format!("must lie in [-pi/2, pi/2], got {tilt}")));
        }
        Ok(Self {
            tilt,
            angular_velocity,
            angular_acceleration,
        })
    }

    /// Level tray at rest.
    pub fn level() -> Self {
        Self::default()
    }

    /// Tray held still at `tilt`.
    pub fn holding(tilt: f64) -> Self {
        Self {
            tilt,
            ..Self::default()
        }
    }

    fn mirrored(self) -> Self {
        Self {
            tilt: -self.tilt,
            angular_velocity: -self.angular_velocity,
            angular_acceleration: -self.angular_acceleration,
        }
    }
}

/// Tipping-limited translational acceleration at one tray state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TippingLimit {
    /// The object tips once the acceleration exceeds this value (m/s²).
    Bounded(f64),
    /// Positive denominator but negative numerator: no forward acceleration
    /// is admissible at this instant.
    Blocked,
    /// Denominator at or below [`DENOMINATOR_GUARD`]: acceleration along the
    /// line cannot tip the object.
    Unconstrained,
}

impl TippingLimit {
    /// Admissible acceleration once the robot cap is applied.
    pub fn clamp(self, cap: f64) -> f64 {
        match self {
            TippingLimit::Bounded(a) => a.min(cap),
            TippingLimit::Blocked => 0.0,
            TippingLimit::Unconstrained => cap,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, TippingLimit::Bounded(_))
    }
}

/// Numerator and denominator of the tipping-limit quotient.
///
/// The denominator is the collapsed form `(h/2) cos(theta+phi) - r sin(theta+phi)`.
/// The tray torque enters by magnitude, `I |alpha| / m`.
pub fn tipping_terms(tray: &TrayState, elevation: f64, obj: &ObjectParams) -> (f64, f64) {
    let TrayState {
        tilt: phi,
        angular_velocity: omega,
        angular_acceleration: alpha,
    } = *tray;
    let r = obj.base_radius;
    let half_h = obj.height / 2.0;
    let numerator = obj.inertia_per_mass() * alpha.abs() + half_h * GRAVITY * phi.sin() + r * GRAVITY * phi.cos()
        - r * omega * omega * half_h;
    let sum = elevation + phi;
    let denominator = half_h * sum.cos() - r * sum.sin();
    (numerator, denominator)
}

/// Largest translational acceleration along the motion line that keeps the
/// center of pressure on the trailing edge of the base, for the given tray
/// motion.
pub fn max_translational_accel(tray: &TrayState, elevation: f64, obj: &ObjectParams) -> TippingLimit {
    let (numerator, denominator) = tipping_terms(tray, elevation, obj);
    if denominator <= DENOMINATOR_GUARD {
        TippingLimit::Unconstrained
    } else if numerator < 0.0 {
        TippingLimit::Blocked
    } else {
        TippingLimit::Bounded(numerator / denominator)
    }
}

/// Tipping limit of a tray held still at `tilt`.
pub fn static_tipping_accel(tilt: f64, elevation: f64, obj: &ObjectParams) -> TippingLimit {
    max_translational_accel(&TrayState::holding(tilt), elevation, obj)
}

/// Forces and torque about the base center for one contact configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceBalance {
    /// Gravity plus inertial force on the object, `m g - m a` (N, `[x, z]`).
    pub f_obj: [f64; 2],
    /// Tray reaction, `-f_obj`.
    pub f_tray: [f64; 2],
    /// Centrifugal term, magnitude `m omega² h/2`, directed along the object
    /// axis toward the tray.
    pub f_centrifugal: [f64; 2],
    /// `I |alpha|`, N·m.
    pub torque: f64,
    /// `RO x F_obj + RC x F_tray + RC x F_r`, N·m.
    pub moment_sum: f64,
}

impl ForceBalance {
    /// `torque - moment_sum`; zero when the configuration balances.
    pub fn residual(&self) -> f64 {
        self.torque - self.moment_sum
    }
}

fn cross(p: [f64; 2], f: [f64; 2]) -> f64 {
    p[0] * f[1] - p[1] * f[0]
}

/// Force balance with the acceleration along `+x` (`accel >= 0`).
fn forward_balance(tray: &TrayState, accel: f64, elevation: f64, offset: f64, obj: &ObjectParams) -> ForceBalance {
    let (sin_phi, cos_phi) = tray.tilt.sin_cos();
    let axis = [sin_phi, cos_phi];
    let surface = [cos_phi, -sin_phi];
    let half_h = obj.height / 2.0;
    let m = obj.mass;

    let ro = [half_h * axis[0], half_h * axis[1]];
    let rc = [-offset * surface[0], -offset * surface[1]];

    let (sin_t, cos_t) = elevation.sin_cos();
    let f_obj = [-m * accel * cos_t, -m * GRAVITY - m * accel * sin_t];
    let f_tray = [-f_obj[0], -f_obj[1]];
    let omega = tray.angular_velocity;
    let fr = m * omega * omega * half_h;
    let f_centrifugal = [-fr * axis[0], -fr * axis[1]];

    let moment_sum = cross(ro, f_obj) + cross(rc, f_tray) + cross(rc, f_centrifugal);
    ForceBalance {
        f_obj,
        f_tray,
        f_centrifugal,
        torque: obj.inertia * tray.angular_acceleration.abs(),
        moment_sum,
    }
}

/// Force balance for a signed acceleration along the motion line.
///
/// A negative acceleration is evaluated in the mirrored plane (`x -> -x`),
/// where it points forward at elevation `-theta` and the tray tilt flips
/// sign. `offset` stays in the unmirrored convention.
pub fn force_balance(tray: &TrayState, accel: f64, elevation: f64, offset: f64, obj: &ObjectParams) -> ForceBalance {
    if accel < 0.0 {
        forward_balance(&tray.mirrored(), -accel, -elevation, -offset, obj)
    } else {
        forward_balance(tray, accel, elevation, offset, obj)
    }
}

/// Torque-balance residual at the virtual joint for a center of pressure at
/// `cop_offset` from the base center.
pub fn torque_residual(
    tray: &TrayState,
    accel: f64,
    elevation: f64,
    cop_offset: f64,
    obj: &ObjectParams,
) -> Result<f64> {
    require_finite("cop_offset", cop_offset)?;
    require_finite("accel", accel)?;
    if cop_offset.abs() > obj.base_radius * (1.0 + 1e-12) {
        return Err(invalid(
            "cop_offset",
            format!("|{cop_offset}| exceeds base radius {}", obj.base_radius),
        ));
    }
    Ok(force_balance(tray, accel, elevation, cop_offset, obj).residual())
}

/// Center-of-pressure offset that balances the given motion.
///
/// The residual is affine in the offset, so the root is exact. Results with
/// `|offset| > r` mean the object tips.
pub fn required_cop_offset(tray: &TrayState, accel: f64, elevation: f64, obj: &ObjectParams) -> Result<f64> {
    require_finite("accel", accel)?;
    let at_center = force_balance(tray, accel, elevation, 0.0, obj).residual();
    let probe = obj.base_radius;
    let at_edge = force_balance(tray, accel, elevation, probe, obj).residual();
    let slope = (at_edge - at_center) / probe;
    let scale = obj.mass * (GRAVITY + accel.abs());
    if !slope.is_finite() || slope.abs() <= 1e-12 * scale {
        return Err(PlanError::SingularConfiguration(format!(
            "no normal contact force (accel {accel}, tilt {})",
            tray.tilt
        )));
    }
    Ok(-at_center / slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cylinder() -> ObjectParams {
        ObjectParams::cylinder(1.0, 0.008, 0.2).unwrap()
    }

    #[test]
    fn inertia_closed_form() {
        let i = cylinder_inertia(1.0, 0.008, 0.2).unwrap();
        assert!((i - (0.04 / 3.0 + 0.000064 / 4.0)).abs() < 1e-15);
        assert!((i - 0.013349333).abs() < 1e-9);
        let i2 = cylinder_inertia(2.0, 0.008, 0.2).unwrap();
        assert_eq!(i2, 2.0 * i);
    }

    #[test]
    fn inertia_vanishes_for_point_mass() {
        let i = cylinder_inertia(1.0, 1e-9, 1e-9).unwrap();
        assert!(i < 1e-17);
    }

    #[test]
    fn inertia_rejects_non_positive() {
        assert!(cylinder_inertia(0.0, 0.008, 0.2).is_err());
        assert!(cylinder_inertia(1.0, -0.008, 0.2).is_err());
        assert!(cylinder_inertia(1.0, 0.008, f64::NAN).is_err());
        assert!(ObjectParams::with_inertia(1.0, 0.008, 0.2, 0.0).is_err());
    }

    #[test]
    fn tray_state_rejects_overtilt() {
        assert!(TrayState::new(1.6, 0.0, 0.0).is_err());
        assert!(TrayState::new(0.1, f64::INFINITY, 0.0).is_err());
        assert!(TrayState::new(-1.5, 2.0, -3.0).is_ok());
    }

    #[test]
    fn static_limit_level_tray() {
        let a = static_tipping_accel(0.0, 0.0, &cylinder());
        match a {
            TippingLimit::Bounded(a) => assert!((a - 0.7848).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        match static_tipping_accel(0.0, PI / 8.0, &cylinder()) {
            TippingLimit::Bounded(a) => assert!((a - 0.07848 / 0.089326_5).abs() < 1e-4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn vertical_motion_is_unconstrained() {
        assert_eq!(
            static_tipping_accel(0.0, PI / 2.0, &cylinder()),
            TippingLimit::Unconstrained
        );
        assert_eq!(TippingLimit::Unconstrained.clamp(13.0), 13.0);
    }

    #[test]
    fn large_spin_blocks_acceleration() {
        let tray = TrayState::new(0.0, 200.0, 0.0).unwrap();
        assert_eq!(max_translational_accel(&tray, 0.0, &cylinder()), TippingLimit::Blocked);
        assert_eq!(TippingLimit::Blocked.clamp(13.0), 0.0);
    }

    #[test]
    fn balance_forces() {
        let tray = TrayState::new(0.3, 1.5, -4.0).unwrap();
        let b = force_balance(&tray, 2.0, 0.2, 0.004, &cylinder());
        assert_eq!(b.f_tray, [-b.f_obj[0], -b.f_obj[1]]);
        let fr = b.f_centrifugal[0].hypot(b.f_centrifugal[1]);
        assert!((fr - 1.0 * 1.5 * 1.5 * 0.1).abs() < 1e-12);
    }

    #[test]
    fn residual_zero_on_tipping_boundary() {
        let obj = cylinder();
        let tray = TrayState::new(0.2, 1.0, 5.0).unwrap();
        let theta = 0.3;
        let a = max_translational_accel(&tray, theta, &obj).clamp(f64::INFINITY);
        let res = torque_residual(&tray, a, theta, obj.base_radius(), &obj).unwrap();
        assert!(res.abs() < 1e-9, "{res}");
    }

    #[test]
    fn residual_at_rest_and_unbalanced() {
        let obj = cylinder();
        let rest = torque_residual(&TrayState::level(), 0.0, 0.0, 0.0, &obj).unwrap();
        assert_eq!(rest, 0.0);
        let res = torque_residual(&TrayState::level(), 0.7848, 0.0, 0.0, &obj).unwrap();
        assert!((res.abs() - 0.7848 * 0.1).abs() < 1e-12);
    }

    #[test]
    fn residual_rejects_offset_outside_base() {
        let obj = cylinder();
        assert!(torque_residual(&TrayState::level(), 0.0, 0.0, 0.0081, &obj).is_err());
    }

    #[test]
    fn cop_offset_cases() {
        let obj = cylinder();
        let level = TrayState::level();
        assert_eq!(required_cop_offset(&level, 0.0, 0.0, &obj).unwrap(), 0.0);
        let a = static_tipping_accel(0.0, 0.0, &obj).clamp(f64::INFINITY);
        let d = required_cop_offset(&level, a, 0.0, &obj).unwrap();
        assert!((d - obj.base_radius()).abs() < 1e-9);
        let d2 = required_cop_offset(&level, 2.0 * a, 0.0, &obj).unwrap();
        assert!((d2 - 2.0 * obj.base_radius()).abs() < 1e-9);
    }

    #[test]
    fn deceleration_pushes_cop_to_leading_edge() {
        let obj = cylinder();
        let a = static_tipping_accel(0.0, -0.4, &obj).clamp(f64::INFINITY);
        let d = required_cop_offset(&TrayState::level(), -a, 0.4, &obj).unwrap();
        assert!((d + obj.base_radius()).abs() < 1e-9, "{d}");
    }

    #[test]
    fn weightless_configuration_is_singular() {
        let obj = cylinder();
        // Accelerating straight down at g removes the normal force.
        let err = required_cop_offset(&TrayState::level(), GRAVITY, -PI / 2.0, &obj);
        assert!(matches!(err, Err(PlanError::SingularConfiguration(_))));
    }
}
