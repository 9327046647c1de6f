mod common;

use dengue_oc::r0::dfe_mosquito_equilibrium;
use dengue_oc::simulator::{integrate, resample, ControlSchedule};
use dengue_oc::{Control, ControlVector, DengueModel, InitialState, ModelParams, State};
use proptest::prelude::*;

use common::linspace;

fn model() -> DengueModel {
    DengueModel::default()
}

#[test]
fn disease_free_start_stays_disease_free() {
    let m = model();
    let x0 = InitialState::outbreak(&m.params, 0.0).unwrap();
    let traj = integrate(&m, &x0, &ControlSchedule::none(100.0), 100.0, 0.05).unwrap();
    assert!(traj.states.iter().all(|x| x.i_h == 0.0 && x.i_m == 0.0));
    assert!(traj.conservation_residual() <= 1e-6 * m.params.n_h);
}

/// Reference values from an independent adaptive run (DOP853, rtol 1e-12)
/// of the same system at the default parameters and no control.
const REF_PEAK: f64 = 79_391.295_176_547;
const REF_PEAK_TIME: f64 = 43.1308;

#[test]
fn epidemic_wave_is_unimodal() {
    let m = model();
    let x0 = InitialState::cape_verde(&m.params);
    let traj = integrate(&m, &x0, &ControlSchedule::none(365.0), 365.0, 0.05).unwrap();
    let i_h = traj.column(1);
    let maxima = (1..i_h.len() - 1)
        .filter(|&k| i_h[k] > i_h[k - 1] && i_h[k] >= i_h[k + 1])
        .count();
    assert_eq!(maxima, 1);
    let (t_peak, peak) = traj.peak_infected();
    assert!(peak > 10.0 && t_peak > 0.0 && t_peak < 365.0);
    assert!(*i_h.last().unwrap() < 1.0);
    assert!((t_peak - REF_PEAK_TIME).abs() <= 0.05);
}

#[test]
fn peak_is_grid_converged() {
    let m = model();
    let x0 = InitialState::cape_verde(&m.params);
    let mut h = 0.2;
    let mut last = integrate(&m, &x0, &ControlSchedule::none(120.0), 120.0, h).unwrap().peak_infected().1;
    loop {
        h *= 0.5;
        let peak = integrate(&m, &x0, &ControlSchedule::none(120.0), 120.0, h).unwrap().peak_infected().1;
        if (peak - last).abs() < 1e-3 * peak {
            assert!((peak - REF_PEAK).abs() < 1e-3 * REF_PEAK, "{peak}");
            break;
        }
        assert!(h > 1e-3, "peak did not settle");
        last = peak;
    }
}

#[test]
fn matches_reference_at_mid_horizon() {
    // DOP853 reference for I_h(182.5)
    let m = model();
    let x0 = InitialState::cape_verde(&m.params);
    let traj = integrate(&m, &x0, &ControlSchedule::none(365.0), 365.0, 0.05).unwrap();
    let x = resample(&traj, &[182.5]).unwrap().states[0];
    assert!((x.i_h - 0.036_162_810_854_653_88).abs() < 1e-6 * 0.0362, "{}", x.i_h);
}

#[test]
fn convergence_order_near_four() {
    let m = model();
    let x0 = InitialState::cape_verde(&m.params);
    // sample times fall on every grid, so no interpolation enters the comparison
    let at = |h: f64| {
        let traj = integrate(&m, &x0, &ControlSchedule::none(100.0), 100.0, h).unwrap();
        resample(&traj, &[25.0, 50.0, 75.0]).unwrap().column(1)
    };
    let (a, b, c) = (at(0.2), at(0.1), at(0.05));
    for k in 0..3 {
        let order = ((a[k] - b[k]) / (b[k] - c[k])).abs().log2();
        assert!((3.5..=4.5).contains(&order), "sample {k}: {order}");
    }
}

#[test]
fn adulticide_dominates_pointwise() {
    let m = model();
    let x0 = InitialState::cape_verde(&m.params);
    let none = integrate(&m, &x0, &ControlSchedule::none(365.0), 365.0, 0.05).unwrap();
    let sprayed = ControlSchedule::constant(ControlVector::NONE.with(Control::Adulticide, 0.3), 365.0, &m.bounds).unwrap();
    let with = integrate(&m, &x0, &sprayed, 365.0, 0.05).unwrap();
    assert_eq!(none.times, with.times);
    for (a, b) in with.states.iter().zip(&none.states) {
        assert!(a.i_h <= b.i_h + 1e-9 * m.params.n_h);
    }
}

#[test]
fn deterministic() {
    let m = model();
    let x0 = InitialState::cape_verde(&m.params);
    let s = ControlSchedule::uniform(
        200.0,
        vec![ControlVector { c_a: 0.1, c_m: 0.2, alpha: 0.9 }, ControlVector::NONE],
        &m.bounds,
    )
    .unwrap();
    let a = integrate(&m, &x0, &s, 200.0, 0.05).unwrap();
    let b = integrate(&m, &x0, &s, 200.0, 0.05).unwrap();
    assert_eq!(a, b);
}

#[test]
fn mosquitoes_settle_on_closed_form_equilibrium() {
    let m = model();
    let p = m.params;
    let x0 = InitialState::outbreak(&p, 0.0).unwrap();
    let traj = integrate(&m, &x0, &ControlSchedule::none(2000.0), 2000.0, 0.05).unwrap();
    let end = traj.final_state();
    let dfe = dfe_mosquito_equilibrium(&ControlVector::NONE, &p);
    assert!((end.a_m - dfe.a_star).abs() <= 1e-3 * dfe.a_star);
    assert!((end.s_m - dfe.s_star).abs() <= 1e-3 * dfe.s_star);
    assert!((dfe.a_star - 1_341_000.0).abs() < 1e-6);
}

#[test]
fn equilibrium_resamples_to_constants() {
    let m = model();
    let p = m.params;
    let dfe = dfe_mosquito_equilibrium(&ControlVector::NONE, &p);
    let x = State::new(p.n_h, 0.0, 0.0, dfe.a_star, dfe.s_star, 0.0).unwrap();
    let x0 = InitialState::for_population(&p, x).unwrap();
    let traj = integrate(&m, &x0, &ControlSchedule::none(30.0), 30.0, 0.5).unwrap();
    let grid = linspace(0.0, 30.0, 17);
    let r = resample(&traj, &grid).unwrap();
    for s in &r.states {
        for i in 0..6 {
            assert!((s[i] - x[i]).abs() <= 1e-9 * x[i].max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn humans_conserved_for_any_constant_control(c_a in 0.0..=1.0f64, c_m in 0.0..=1.0f64, alpha in 0.3..=1.0f64) {
        let m = model();
        let x0 = InitialState::cape_verde(&ModelParams::default());
        let s = ControlSchedule::constant(ControlVector { c_a, c_m, alpha }, 365.0, &m.bounds).unwrap();
        let traj = integrate(&m, &x0, &s, 365.0, 0.1).unwrap();
        prop_assert!(traj.conservation_residual() <= 1e-6 * m.params.n_h);
        prop_assert!(traj.states.iter().all(|x| x.to_array().iter().all(|v| *v >= 0.0)));
    }
}
