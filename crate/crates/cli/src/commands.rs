use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use dengue_oc::ocp::{compare_scenarios, evaluate_cost_with_trajectory, solve, Termination};
use dengue_oc::r0::{r0 as reproduction_number, r0_sweep as sweep, SweepAxis};
use dengue_oc::simulator::{integrate, output_grid};
use dengue_oc::{Control, ControlBounds, ControlSchedule};

use crate::config::RunConfig;
use crate::output::{num, read_schedule, schedule_csv, trajectory_csv, write_atomic};
use crate::{classify, Failure, OrIo};

/// Schedule from `[controls]`: the schedule file when set, else the constants.
fn configured_schedule(cfg: &RunConfig) -> Result<ControlSchedule, Failure> {
    let model = cfg.model().map_err(Failure::Config)?;
    match &cfg.controls.schedule_file {
        Some(path) => read_schedule(path, &model.bounds).map_err(Failure::Config),
        None => {
            let u = cfg.control().map_err(Failure::Config)?;
            ControlSchedule::constant(u, cfg.run.t_f, &model.bounds).map_err(classify)
        }
    }
}

pub fn simulate(cfg: &RunConfig, out: &Path) -> Result<u8, Failure> {
    let model = cfg.model().map_err(Failure::Config)?;
    let x0 = cfg.initial_state().map_err(Failure::Config)?;
    let sched = configured_schedule(cfg)?;
    let traj = integrate(&model, &x0, &sched, cfg.run.t_f, cfg.run.h).map_err(classify)?;
    let grid = output_grid(cfg.run.t_f, cfg.run.stride);
    write_atomic(&out.join("trajectory.csv"), &trajectory_csv(&traj, &grid).io()?).io()?;

    let (t_peak, peak) = traj.peak_infected();
    let end = traj.final_state();
    let mut summary = String::new();
    writeln!(summary, "peak_I_h = {}", num(peak)).unwrap();
    writeln!(summary, "peak_time = {}", num(t_peak)).unwrap();
    for (name, v) in dengue_oc::model::COMPARTMENTS.iter().zip(end.to_array()) {
        writeln!(summary, "final_{name} = {}", num(v)).unwrap();
    }
    writeln!(summary, "conservation_residual = {}", num(traj.conservation_residual())).unwrap();
    write_atomic(&out.join("summary.txt"), &summary).io()?;
    print!("{summary}");
    Ok(0)
}

pub fn r0(cfg: &RunConfig) -> Result<u8, Failure> {
    let u = cfg.control().map_err(Failure::Config)?;
    let res = reproduction_number(&u, &cfg.params());
    println!(
        "R0={} M={} viable={} A*={} S*={}",
        num(res.r0),
        num(res.m_factor),
        res.viable,
        num(res.dfe.a_star),
        num(res.dfe.s_star)
    );
    Ok(0)
}

/// `NAME`, `NAME:POINTS` or `NAME:FROM:TO:POINTS`.
fn parse_axis(spec: &str, bounds: &ControlBounds) -> anyhow::Result<SweepAxis> {
    let parts: Vec<&str> = spec.split(':').collect();
    let control: Control = parts[0].parse()?;
    let number = |s: &str| -> anyhow::Result<f64> {
        s.parse().with_context(|| format!("axis `{spec}`: `{s}` is not a number"))
    };
    let count = |s: &str| -> anyhow::Result<usize> {
        s.parse().with_context(|| format!("axis `{spec}`: `{s}` is not a point count"))
    };
    match parts.len() {
        1 => Ok(SweepAxis::full(control, 51, bounds)),
        2 => Ok(SweepAxis::full(control, count(parts[1])?, bounds)),
        4 => Ok(SweepAxis::new(control, number(parts[1])?, number(parts[2])?, count(parts[3])?)),
        _ => bail!("axis `{spec}`: expected NAME, NAME:POINTS or NAME:FROM:TO:POINTS"),
    }
}

pub fn r0_sweep(cfg: &RunConfig, out: &Path, axis1: &str, axis2: &str) -> Result<u8, Failure> {
    let model = cfg.model().map_err(Failure::Config)?;
    let a1 = parse_axis(axis1, &model.bounds).map_err(Failure::Config)?;
    let a2 = parse_axis(axis2, &model.bounds).map_err(Failure::Config)?;
    let fixed = cfg.control().map_err(Failure::Config)?;
    let grid = sweep(a1, a2, &fixed, &model.params, &model.bounds)
        .map_err(|e| Failure::Config(anyhow!(e)))?;

    let mut csv = String::from("axis1,axis2,r0\n");
    for (i, x) in grid.xs.iter().enumerate() {
        for (j, y) in grid.ys.iter().enumerate() {
            writeln!(csv, "{},{},{}", num(*x), num(*y), num(grid.at(i, j))).unwrap();
        }
    }
    write_atomic(&out.join("r0_grid.csv"), &csv).io()?;

    let mut contour = String::from("polyline,axis1,axis2\n");
    for (k, line) in grid.threshold_contour.iter().enumerate() {
        for (x, y) in line {
            writeln!(contour, "{k},{},{}", num(*x), num(*y)).unwrap();
        }
    }
    write_atomic(&out.join("r0_contour.csv"), &contour).io()?;
    println!(
        "{} x {} grid over ({}, {}); R0 in [{}, {}]; {} contour polyline(s) at R0 = 1",
        grid.xs.len(),
        grid.ys.len(),
        a1.control,
        a2.control,
        num(grid.r0.iter().copied().fold(f64::INFINITY, f64::min)),
        num(grid.r0.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
        grid.threshold_contour.len()
    );
    Ok(0)
}

pub fn optimize(cfg: &RunConfig, out: &Path) -> Result<u8, Failure> {
    let spec = cfg.ocp_spec().map_err(Failure::Config)?;
    let opts = cfg.solver_options();
    let sol = solve(&spec, &spec.default_guess(), &opts).map_err(classify)?;
    let none = spec.no_control();
    let (cost_none, traj_none) = evaluate_cost_with_trajectory(&none, &spec).map_err(classify)?;

    let grid = output_grid(spec.t_f, cfg.run.stride);
    write_atomic(&out.join("controls_opt.csv"), &schedule_csv(&sol.schedule)).io()?;
    write_atomic(&out.join("trajectory_opt.csv"), &trajectory_csv(&sol.trajectory, &grid).io()?).io()?;
    write_atomic(&out.join("trajectory_nocontrol.csv"), &trajectory_csv(&traj_none, &grid).io()?).io()?;

    let (t_opt, peak_opt) = sol.trajectory.peak_infected();
    let (t_none, peak_none) = traj_none.peak_infected();
    let mut report = String::new();
    writeln!(report, "J_opt = {}", num(sol.objective)).unwrap();
    writeln!(report, "J_nocontrol = {}", num(cost_none.total())).unwrap();
    writeln!(report, "J_opt_disease = {}", num(sol.cost.disease)).unwrap();
    writeln!(report, "J_opt_adulticide = {}", num(sol.cost.adulticide)).unwrap();
    writeln!(report, "J_opt_larvicide = {}", num(sol.cost.larvicide)).unwrap();
    writeln!(report, "J_opt_mechanical = {}", num(sol.cost.mechanical)).unwrap();
    writeln!(report, "peak_I_h_opt = {}", num(peak_opt)).unwrap();
    writeln!(report, "peak_time_opt = {}", num(t_opt)).unwrap();
    writeln!(report, "peak_I_h_nocontrol = {}", num(peak_none)).unwrap();
    writeln!(report, "peak_time_nocontrol = {}", num(t_none)).unwrap();
    let n = sol.schedule.len() as f64;
    let mean = |f: fn(&dengue_oc::ControlVector) -> f64| sol.schedule.values().iter().map(f).sum::<f64>() / n;
    writeln!(report, "mean_c_A = {}", num(mean(|u| u.c_a))).unwrap();
    writeln!(report, "mean_c_m = {}", num(mean(|u| u.c_m))).unwrap();
    writeln!(report, "mean_1_minus_alpha = {}", num(mean(|u| 1.0 - u.alpha))).unwrap();
    writeln!(report, "iterations = {}", sol.iterations).unwrap();
    writeln!(report, "convergence = {}", sol.convergence.termination).unwrap();
    writeln!(report, "projected_gradient_norm = {}", num(sol.convergence.projected_gradient_norm)).unwrap();
    writeln!(report, "tolerance = {}", num(sol.convergence.tolerance)).unwrap();
    write_atomic(&out.join("report.txt"), &report).io()?;
    print!("{report}");

    Ok(match sol.convergence.termination {
        Termination::Converged => 0,
        Termination::MaxIter | Termination::Stalled => {
            eprintln!("warning: optimizer stopped without convergence ({})", sol.convergence.termination);
            4
        }
    })
}

pub fn compare(cfg: &RunConfig, out: &Path, named: &[String]) -> Result<u8, Failure> {
    let spec = cfg.ocp_spec().map_err(Failure::Config)?;
    let mut scheds = vec![
        ("nocontrol".to_string(), ControlSchedule::none(spec.t_f)),
        ("config".to_string(), configured_schedule(cfg)?),
    ];
    for item in named {
        let (name, path) = item
            .split_once('=')
            .ok_or_else(|| Failure::Config(anyhow!("--schedule `{item}`: expected NAME=PATH")))?;
        let sched = read_schedule(Path::new(path), &spec.model.bounds).map_err(Failure::Config)?;
        scheds.push((name.to_string(), sched));
    }
    let rows = compare_scenarios(&spec, &scheds).map_err(classify)?;
    let mut csv = String::from("scenario,J,peak_I_h,t_peak,total_infections\n");
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{},{}",
            r.name,
            num(r.cost),
            num(r.peak_infected),
            num(r.peak_time),
            num(r.total_infections)
        )
        .unwrap();
    }
    write_atomic(&out.join("comparison.csv"), &csv).io()?;
    print!("{csv}");
    Ok(0)
}
