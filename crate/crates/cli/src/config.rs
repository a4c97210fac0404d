//! JSON run configuration.
//!
//! Every block rejects unknown keys, so a misspelled or mis-suffixed field
//! fails loudly instead of silently falling back to a default.

use crate::error::{CliError, CliResult};
use serde::Deserialize;
use std::path::{Path, PathBuf};
use waiter_core::planner::{MotionLimits, PlanRequest, DEFAULT_SAMPLE_DT};
use waiter_core::ObjectParams;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectConfig {
    pub mass_kg: f64,
    pub radius_m: f64,
    pub height_m: f64,
}

impl ObjectConfig {
    pub fn params(&self) -> CliResult<ObjectParams> {
        Ok(ObjectParams::cylinder(self.mass_kg, self.radius_m, self.height_m)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsConfig {
    pub j_max: f64,
    pub a_max: f64,
    pub v_max: f64,
    pub j_rm: f64,
    pub alpha_rm: f64,
    pub omega_rm: f64,
}

impl From<LimitsConfig> for MotionLimits {
    fn from(l: LimitsConfig) -> Self {
        MotionLimits {
            j_max: l.j_max,
            a_max: l.a_max,
            v_max: l.v_max,
            j_rm: l.j_rm,
            alpha_rm: l.alpha_rm,
            omega_rm: l.omega_rm,
        }
    }
}

/// Target either in polar form along the motion line or as a world
/// displacement (z up). Exactly one form must be given.
#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    pub distance_m: Option<f64>,
    pub theta_rad: Option<f64>,
    pub psi_rad: Option<f64>,
    pub x_m: Option<f64>,
    pub y_m: Option<f64>,
    pub z_m: Option<f64>,
}

/// Resolved target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Polar { distance: f64, theta: f64, psi: f64 },
    Cartesian([f64; 3]),
}

impl TargetConfig {
    pub fn resolve(&self) -> CliResult<Target> {
        let polar = [self.distance_m, self.theta_rad, self.psi_rad]
            .iter()
            .any(Option::is_some);
        let cartesian = [self.x_m, self.y_m, self.z_m].iter().any(Option::is_some);
        match (polar, cartesian) {
            (true, true) => Err(config_err(
                "target: give either {distance_m, theta_rad[, psi_rad]} or {x_m, y_m, z_m}, not both",
            )),
            (false, false) => Err(config_err("target: no target fields present")),
            (true, false) => {
                let (Some(distance), Some(theta)) = (self.distance_m, self.theta_rad) else {
                    return Err(config_err("target: polar form needs distance_m and theta_rad"));
                };
                Ok(Target::Polar {
                    distance,
                    theta,
                    psi: self.psi_rad.unwrap_or(0.0),
                })
            }
            (false, true) => match (self.x_m, self.y_m, self.z_m) {
                (Some(x), Some(y), Some(z)) => Ok(Target::Cartesian([x, y, z])),
                _ => Err(config_err("target: cartesian form needs x_m, y_m and z_m")),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Trajectory CSV (`plan`, `baseline`) or sweep CSV (`sweep`).
    pub csv: Option<PathBuf>,
    /// Summary or comparison JSON.
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub object: ObjectConfig,
    /// Object carried by the level-tray planner in `compare`; defaults to
    /// `object`.
    pub baseline_object: Option<ObjectConfig>,
    pub limits: LimitsConfig,
    pub target: Option<TargetConfig>,
    pub sample_dt_s: Option<f64>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.object.params()?;
        if let Some(b) = &cfg.baseline_object {
            b.params()?;
        }
        MotionLimits::from(cfg.limits).validate()?;
        if let Some(dt) = cfg.sample_dt_s {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(config_err(format!("sample_dt_s must be finite and > 0, got {dt}")));
            }
        }
        if let Some(t) = &cfg.target {
            t.resolve()?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn sample_dt(&self) -> f64 {
        self.sample_dt_s.unwrap_or(DEFAULT_SAMPLE_DT)
    }

    pub fn object_params(&self) -> CliResult<ObjectParams> {
        self.object.params()
    }

    pub fn baseline_params(&self) -> CliResult<ObjectParams> {
        self.baseline_object.as_ref().unwrap_or(&self.object).params()
    }

    pub fn motion_limits(&self) -> MotionLimits {
        self.limits.into()
    }

    /// Plan request for the configured target; `dt` overrides `sample_dt_s`.
    pub fn request(&self, dt: Option<f64>) -> CliResult<PlanRequest> {
        let target = self
            .target
            .as_ref()
            .ok_or_else(|| config_err("target: required by this command"))?
            .resolve()?;
        let object = self.object_params()?;
        let limits = self.motion_limits();
        let request = match target {
            Target::Polar { distance, theta, psi } => {
                PlanRequest::new(distance, theta, object, limits).with_azimuth(psi)
            }
            Target::Cartesian(d) => PlanRequest::toward(d, object, limits),
        }
        .with_sample_dt(dt.unwrap_or(self.sample_dt()));
        request.validate()?;
        Ok(request)
    }
}
