//! Fixed-format CSV emission and the trajectory reader.

use crate::error::{CliError, CliResult};
use waiter_core::planner::{KinematicSample, SweepRecord};

pub const TRAJECTORY_HEADER: &str = "t,phi,omega,alpha,jerk_rot,a,v,s,x,y,z,pitch";
pub const SWEEP_HEADER: &str = "x,y,t_rot,t_norot,improvement,note";

const SIGNIFICANT: i32 = 9;

/// Formats like C's `%.9g`: nine significant digits, trailing zeros dropped,
/// exponent form outside `1e-4 <= |x| < 1e9`. Negative zero prints as `0`.
pub fn fmt_g9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", (SIGNIFICANT - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..SIGNIFICANT).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIGNIFICANT - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("formatted fields are ASCII or UTF-8 notes")
}

fn header(w: &mut csv::Writer<Vec<u8>>, header: &str) {
    w.write_record(header.split(',')).expect("in-memory write");
}

pub fn write_trajectory(samples: &[KinematicSample]) -> String {
    let mut w = writer();
    header(&mut w, TRAJECTORY_HEADER);
    for s in samples {
        let fields = [
            s.t,
            s.tilt,
            s.angular_velocity,
            s.angular_acceleration,
            s.angular_jerk,
            s.accel,
            s.velocity,
            s.arc_length,
            s.position[0],
            s.position[1],
            s.position[2],
            s.pitch,
        ];
        w.write_record(fields.map(fmt_g9)).expect("in-memory write");
    }
    finish(w)
}

/// Parses a trajectory CSV in the emitted column order.
pub fn read_trajectory(text: &str) -> CliResult<Vec<KinematicSample>> {
    let bad = |msg: String| CliError::Config(msg);
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let found = reader
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if found != TRAJECTORY_HEADER {
        return Err(bad(format!(
            "trajectory header `{found}` does not match `{TRAJECTORY_HEADER}`"
        )));
    }
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let values = record
            .iter()
            .map(str::parse::<f64>)
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| bad(format!("line {line}: {e}")))?;
        let [t, phi, omega, alpha, jerk, a, v, s, x, y, z, pitch] = values[..] else {
            return Err(bad(format!("line {line}: expected 12 columns, found {}", values.len())));
        };
        samples.push(KinematicSample {
            t,
            tilt: phi,
            angular_velocity: omega,
            angular_acceleration: alpha,
            angular_jerk: jerk,
            accel: a,
            velocity: v,
            arc_length: s,
            position: [x, y, z],
            pitch,
        });
    }
    Ok(samples)
}

pub fn write_sweep(records: &[SweepRecord]) -> String {
    let opt = |v: Option<f64>| v.map(fmt_g9).unwrap_or_default();
    let mut w = writer();
    header(&mut w, SWEEP_HEADER);
    for r in records {
        w.write_record([
            fmt_g9(r.x),
            fmt_g9(r.y),
            opt(r.t_rot),
            opt(r.t_norot),
            opt(r.improvement),
            r.note.clone().unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}
