use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anyhow::{bail, Context};
use dengue_oc::simulator::resample;
use dengue_oc::{ControlBounds, ControlSchedule, ControlVector, Trajectory};
use serde::Deserialize;

pub const TRAJECTORY_HEADER: &str = "t,S_h,I_h,R_h,A_m,S_m,I_m,c_A,c_m,alpha";
pub const SCHEDULE_HEADER: &str = "interval,t_start,t_end,c_A,c_m,alpha";

/// 12 significant digits, plain decimal notation, no grouping.
pub fn num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub fn trajectory_csv(traj: &Trajectory, grid: &[f64]) -> anyhow::Result<String> {
    let sampled = resample(traj, grid)?;
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for ((t, x), u) in sampled.times.iter().zip(&sampled.states).zip(&sampled.controls) {
        let row: Vec<String> = std::iter::once(*t)
            .chain(x.to_array())
            .chain([u.c_a, u.c_m, u.alpha])
            .map(num)
            .collect();
        writeln!(out, "{}", row.join(",")).unwrap();
    }
    Ok(out)
}

pub fn schedule_csv(sched: &ControlSchedule) -> String {
    let mut out = String::from(SCHEDULE_HEADER);
    out.push('\n');
    let edges = sched.edges();
    for (i, u) in sched.values().iter().enumerate() {
        writeln!(
            out,
            "{i},{},{},{},{},{}",
            num(edges[i]),
            num(edges[i + 1]),
            num(u.c_a),
            num(u.c_m),
            num(u.alpha)
        )
        .unwrap();
    }
    out
}

#[derive(Debug, Deserialize)]
#[allow(non_snake_case)]
struct ScheduleRow {
    #[allow(dead_code)]
    interval: usize,
    t_start: f64,
    t_end: f64,
    c_A: f64,
    c_m: f64,
    alpha: f64,
}

/// Reads a schedule in the `controls_opt.csv` layout.
pub fn read_schedule(path: &Path, bounds: &ControlBounds) -> anyhow::Result<ControlSchedule> {
    let mut reader = csv::Reader::from_path(path)
        .with_context(|| format!("cannot read schedule {}", path.display()))?;
    let mut edges = Vec::new();
    let mut values = Vec::new();
    for (line, row) in reader.deserialize::<ScheduleRow>().enumerate() {
        let row = row.with_context(|| format!("{}: row {}", path.display(), line + 1))?;
        if let Some(&last) = edges.last() {
            if row.t_start != last {
                bail!(
                    "{}: row {} starts at {} but the previous interval ends at {last}",
                    path.display(),
                    line + 1,
                    row.t_start
                );
            }
        } else {
            edges.push(row.t_start);
        }
        edges.push(row.t_end);
        values.push(ControlVector {
            c_a: row.c_A,
            c_m: row.c_m,
            alpha: row.alpha,
        });
    }
    ControlSchedule::new(edges, values, bounds).with_context(|| format!("schedule {}", path.display()))
}
