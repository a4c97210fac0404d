//! Command implementations. Each returns the text it wants on stdout; files
//! are written here.

use crate::config::RunConfig;
use crate::csv::{read_trajectory, write_sweep, write_trajectory};
use crate::error::{CliError, CliResult};
use serde::Serialize;
use std::path::{Path, PathBuf};
use waiter_core::planner::{
    assemble_trajectory, compare_objects, efficiency_sweep, plan_baseline, AxisRange, PhaseSummary, SweepGrid,
    Trajectory,
};
use waiter_core::validator::{audit_constraints, endpoint_audit, stability_audit};
use waiter_core::Execution;

/// Options shared by all commands.
#[derive(Debug, Clone, Default)]
pub struct CommonArgs {
    pub out: Option<PathBuf>,
    pub dt: Option<f64>,
}

/// Record printed after `plan` and `baseline`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanSummary {
    pub planner: &'static str,
    pub distance_m: f64,
    pub theta_rad: f64,
    pub psi_rad: f64,
    pub sample_dt_s: f64,
    pub samples: usize,
    pub t_total: f64,
    pub t_acc: f64,
    pub t_cruise: f64,
    pub t_dec: f64,
    pub t_a: f64,
    pub t_b: f64,
    pub phi_rm: f64,
    pub phi_rm_decel: f64,
    pub peak_velocity: f64,
    pub trajectory_csv: Option<String>,
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn summarize(planner: &'static str, traj: &Trajectory, csv: Option<&Path>) -> PlanSummary {
    let p: PhaseSummary = traj.phases.expect("planned trajectories carry phases");
    let r = &traj.request;
    PlanSummary {
        planner,
        distance_m: r.target_distance,
        theta_rad: r.elevation,
        psi_rad: r.azimuth,
        sample_dt_s: r.sample_dt,
        samples: traj.samples.len(),
        t_total: p.t_total,
        t_acc: p.t_acc,
        t_cruise: p.t_cruise,
        t_dec: p.t_dec,
        t_a: p.accel_rotation_end,
        t_b: p.decel_rotation_end,
        phi_rm: p.accel_tilt,
        phi_rm_decel: p.decel_tilt,
        peak_velocity: p.peak_velocity,
        trajectory_csv: csv.map(|p| p.display().to_string()),
    }
}

/// Output of a command: text for stdout and text for stderr.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
}

fn emit_trajectory(planner: &'static str, traj: &Trajectory, cfg: &RunConfig, args: &CommonArgs) -> CliResult<Output> {
    let csv = write_trajectory(&traj.samples);
    let path = args.out.clone().or_else(|| cfg.output.csv.clone());
    let summary = to_json(&summarize(planner, traj, path.as_deref()));
    if let Some(json) = &cfg.output.json {
        write_file(json, &summary)?;
    }
    Ok(match path {
        Some(p) => {
            write_file(&p, &csv)?;
            Output {
                stdout: summary,
                stderr: String::new(),
            }
        }
        None => Output {
            stdout: csv,
            stderr: summary,
        },
    })
}

pub fn cmd_plan(cfg: &RunConfig, args: &CommonArgs) -> CliResult<Output> {
    let traj = assemble_trajectory(&cfg.request(args.dt)?)?;
    emit_trajectory("rotating", &traj, cfg, args)
}

pub fn cmd_baseline(cfg: &RunConfig, args: &CommonArgs) -> CliResult<Output> {
    let traj = plan_baseline(&cfg.request(args.dt)?)?;
    emit_trajectory("level", &traj, cfg, args)
}

pub fn cmd_compare(cfg: &RunConfig, args: &CommonArgs) -> CliResult<Output> {
    let report = compare_objects(&cfg.request(args.dt)?, &cfg.baseline_params()?)?;
    let json = to_json(&report);
    if let Some(p) = args.out.clone().or_else(|| cfg.output.json.clone()) {
        write_file(&p, &json)?;
    }
    Ok(Output {
        stdout: json,
        stderr: String::new(),
    })
}

/// Parses `x0:x1:n,y0:y1:n`.
pub fn parse_grid(spec: &str) -> CliResult<SweepGrid> {
    let bad = |why: &str| CliError::Config(format!("grid `{spec}`: {why}; expected x0:x1:n,y0:y1:n"));
    let axes: Vec<&str> = spec.split(',').collect();
    let [x, y] = axes[..] else {
        return Err(bad("needs two axes"));
    };
    let axis = |text: &str| -> CliResult<AxisRange> {
        let parts: Vec<&str> = text.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(bad("each axis needs start:end:count"));
        };
        let a: f64 = a.trim().parse().map_err(|_| bad("start is not a number"))?;
        let b: f64 = b.trim().parse().map_err(|_| bad("end is not a number"))?;
        let n: usize = n.trim().parse().map_err(|_| bad("count is not a positive integer"))?;
        Ok(AxisRange::new(a, b, n)?)
    };
    Ok(SweepGrid {
        x: axis(x)?,
        y: axis(y)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub points: usize,
    pub evaluated: usize,
    pub max_improvement: Option<f64>,
    pub max_at: Option<[f64; 2]>,
    pub min_improvement: Option<f64>,
    pub sweep_csv: Option<String>,
}

pub fn cmd_sweep(cfg: &RunConfig, grid: &SweepGrid, exec: Execution, args: &CommonArgs) -> CliResult<Output> {
    let dt = args.dt.unwrap_or(cfg.sample_dt());
    let records = efficiency_sweep(grid, &cfg.object_params()?, &cfg.motion_limits(), dt, exec);
    let csv = write_sweep(&records);
    let evaluated: Vec<_> = records.iter().filter(|r| r.improvement.is_some()).collect();
    let best = evaluated
        .iter()
        .max_by(|a, b| a.improvement.partial_cmp(&b.improvement).expect("finite improvements"));
    let path = args.out.clone().or_else(|| cfg.output.csv.clone());
    let summary = to_json(&SweepSummary {
        points: records.len(),
        evaluated: evaluated.len(),
        max_improvement: best.and_then(|r| r.improvement),
        max_at: best.map(|r| [r.x, r.y]),
        min_improvement: evaluated.iter().filter_map(|r| r.improvement).reduce(f64::min),
        sweep_csv: path.as_ref().map(|p| p.display().to_string()),
    });
    if let Some(json) = &cfg.output.json {
        write_file(json, &summary)?;
    }
    Ok(match path {
        Some(p) => {
            write_file(&p, &csv)?;
            Output {
                stdout: summary,
                stderr: String::new(),
            }
        }
        None => Output {
            stdout: csv,
            stderr: summary,
        },
    })
}

/// Audits a trajectory file against the configured object, limits and
/// target. The verdict lines go to stdout either way; any failure turns into
/// a validation error that names it.
pub fn cmd_validate(cfg: &RunConfig, trajectory: &Path, args: &CommonArgs) -> CliResult<(Output, Option<CliError>)> {
    let text = std::fs::read_to_string(trajectory).map_err(|e| CliError::io(trajectory, e))?;
    let samples = read_trajectory(&text)?;
    let request = cfg.request(args.dt)?;
    let object = cfg.object_params()?;
    let traj = Trajectory {
        samples,
        phases: None,
        request,
    };

    let mut lines = Vec::new();
    let mut failures = Vec::new();
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };

    let stability = stability_audit(&traj, &object);
    match stability.first_violation_t {
        None => lines.push(format!(
            "stability: PASS min_margin={:e} m at t={} s",
            stability.min_margin, stability.min_margin_t
        )),
        Some(t) => {
            lines.push(format!(
                "stability: FAIL first violation at t={t} s, min_margin={:e} m at t={} s",
                stability.min_margin, stability.min_margin_t
            ));
            failures.push(format!("stability at t={t} s"));
        }
    }
    if !stability.singular_samples.is_empty() {
        lines.push(format!(
            "stability: {} singular samples",
            stability.singular_samples.len()
        ));
    }

    for c in audit_constraints(&traj, &cfg.motion_limits()).checks {
        lines.push(format!(
            "limit {}: {} observed={} limit={} at t={} s",
            c.name,
            verdict(c.pass),
            c.observed,
            c.limit,
            c.worst_t
        ));
        if !c.pass {
            failures.push(format!("limit {} at t={} s", c.name, c.worst_t));
        }
    }
    for c in endpoint_audit(&traj).checks {
        lines.push(format!(
            "endpoint {}: {} observed={:.3e}",
            c.name,
            verdict(c.pass),
            c.observed
        ));
        if !c.pass {
            failures.push(format!("endpoint {}", c.name));
        }
    }

    let mut stdout = lines.join("\n");
    stdout.push('\n');
    let outcome = (!failures.is_empty()).then(|| CliError::Validation(failures.join("; ")));
    if let Some(out) = &args.out {
        write_file(out, &stdout)?;
    }
    Ok((
        Output {
            stdout,
            stderr: String::new(),
        },
        outcome,
    ))
}
