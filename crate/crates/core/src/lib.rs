//! Time-optimized straight-line transport of a tip-prone cylinder on a
//! robot-held tray.
//!
//! - [`physics`]: contact model, tipping-limited acceleration and the
//!   center-of-pressure inversion;
//! - [`scurve`]: jerk-limited seven-segment profiles;
//! - [`planner`]: rotating and level-tray planners, comparison and sweeps;
//! - [`validator`]: stability, limit and endpoint audits;
//! - [`par`]: data-parallel batch evaluation (`parallel` feature).

pub mod error;
pub mod par;
pub mod physics;
pub mod planner;
pub mod scurve;
pub mod validator;

pub use error::{PlanError, Result};
pub use par::Execution;
pub use physics::{ObjectParams, TippingLimit, TrayState, GRAVITY};
pub use planner::{
    assemble_trajectory, compare, compare_objects, efficiency_sweep, plan_baseline, ComparisonReport, MotionLimits,
    PlanRequest, Trajectory,
};
pub use validator::{audit_constraints, endpoint_audit, stability_audit};
