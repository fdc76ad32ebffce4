use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::field::{OuterGhost, Parity, ScalarField};
use crate::grid::Grid;
use crate::norms::{lp_norm, sobolev_norm, sobolev_norm_with};
use crate::operators::{curl_axisym, StreamSolver};
use crate::solver::{init_state, run, InitialDataSpec, PhysicalParams, RunControl, Solver, State};

fn grid(n: usize) -> Arc<Grid> {
    Arc::new(Grid::new(n, n, 8.0, 16.0).unwrap())
}

fn at(t: f64, w: f64) -> DiagnosticsRecord {
    DiagnosticsRecord {
        t,
        linf_omega_rz: w,
        ..Default::default()
    }
}

#[test]
fn zero_state_records_zeros() {
    let g = grid(16);
    let s = State::zeros(g.clone(), PhysicalParams::default());
    let rec = Recorder::new(g).unwrap().record(&s, 0.0, &[]).unwrap();
    assert!(rec.to_array().iter().all(|&v| v == 0.0), "{rec:?}");
}

#[test]
fn calibrated_swirl_is_seen_by_the_record() {
    let g = grid(64);
    let spec = InitialDataSpec {
        eps: 1e-2,
        ..Default::default()
    };
    let s = init_state(g.clone(), &spec, PhysicalParams::default()).unwrap();
    let rec = Recorder::new(g).unwrap().record(&s, 0.0, &[]).unwrap();
    assert!((0.0099..=0.0101).contains(&rec.linf_omega_rz));
    assert_eq!(rec.bootstrap_q, 0.0);
}

#[test]
fn energy_column_matches_the_order_zero_sobolev_composition() {
    let g = grid(48);
    let s = init_state(g.clone(), &InitialDataSpec::default(), PhysicalParams::default()).unwrap();
    let rec = Recorder::new(g.clone()).unwrap().record(&s, 0.0, &[]).unwrap();
    let b = Solver::new(g).unwrap().velocity(&s).unwrap();
    let u_theta = s.gamma.times_r_pow(-1);
    let h_theta = s.big_h.times_r_pow(1);
    let e = sobolev_norm(&[&b.u_r, &u_theta, &b.u_z, &h_theta], 0).unwrap();
    assert!((rec.l2_energy / e - 1.0).abs() < 1e-12, "{} {e}", rec.l2_energy);
}

#[test]
fn swirl_vorticity_agrees_with_the_full_curl() {
    let g = grid(32);
    let spec = InitialDataSpec {
        eps: 0.5,
        ..Default::default()
    };
    let s = init_state(g.clone(), &spec, PhysicalParams::default()).unwrap();
    let b = Solver::new(g).unwrap().velocity(&s).unwrap();
    let w = curl_axisym(&s.gamma.times_r_pow(-1), &b).unwrap();
    let (wr, wz) = swirl_vorticity(&s.gamma).unwrap();
    assert_eq!(wr, w.omega_r);
    assert_eq!(wz, w.omega_z);
}

#[test]
fn grad_u_of_rigid_rotation_core() {
    // u_θ = r e^{-r²}: |∇u|² = (∂_r u_θ)² + (u_θ/r)², largest on the first row
    let g = grid(128);
    let r0 = g.r_nodes()[0];
    let exact = ((1.0 - 2.0 * r0 * r0).powi(2) + 1.0).sqrt() * (-r0 * r0).exp();
    let h = g.h_max();
    let mut s = State::zeros(g.clone(), PhysicalParams::default());
    s.gamma = ScalarField::from_fn(g.clone(), Parity::Even, |r, _| r * r * (-r * r).exp()).unwrap();
    let v = linf_grad_u(&StreamSolver::new(g).unwrap(), &s);
    assert!((v - exact).abs() < 4.0 * h * h, "{v} {exact}");
}

#[test]
fn bootstrap_examples() {
    assert_eq!(bootstrap_status(&[at(0.0, 3.0)]), 0.0);
    assert_eq!(bootstrap_status(&[at(0.0, 0.2), at(0.5, 0.5), at(1.0, 0.1)]), 0.5);
    let mut h = Vec::new();
    let mut first = None;
    for k in 0..=20 {
        h.push(at(0.05 * k as f64, 2.0));
        if first.is_none() && bootstrap_violated(bootstrap_status(&h)) {
            first = Some(h.last().unwrap().t);
        }
    }
    let t = first.unwrap();
    assert!(t > 0.5 && t < 0.56, "{t}");
    assert!(!bootstrap_violated(1.0));
}

#[test]
fn breakdown_examples() {
    let h: Vec<_> = (0..5).map(|k| at(0.1 * k as f64, 0.0)).collect();
    let v = breakdown_time(&h, &[]);
    assert_eq!(v.reason, Breakdown::None);
    assert_eq!(v.t_proxy, h[4].t);

    let boot = BreakdownEvent {
        t: h[3].t,
        reason: Breakdown::BootstrapViolated,
    };
    let v = breakdown_time(&h, &[boot]);
    assert_eq!((v.t_proxy, v.reason), (h[2].t, Breakdown::BootstrapViolated));

    let nan = BreakdownEvent {
        t: 0.25,
        reason: Breakdown::NonFinite,
    };
    let v = breakdown_time(&h[..3], &[nan]);
    assert_eq!((v.t_proxy, v.reason), (h[2].t, Breakdown::NonFinite));

    let v = breakdown_time(&h, &[boot, nan]);
    assert_eq!(v.reason, Breakdown::NonFinite);
}

#[test]
fn csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    write_csv(&[], &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, format!("{}\n", COLUMNS.join(",")));
    assert!(text.starts_with("t,dt,linf_omega_rz,linf_omega_theta,l2_H,"));
    assert!(text.trim_end().ends_with("l2_J,l6_J"));

    write_csv(&[DiagnosticsRecord::default()], &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert_eq!(row, vec!["0.0"; 24].join(","));
    assert_eq!(read_csv(&path).unwrap(), vec![DiagnosticsRecord::default()]);
}

#[test]
fn csv_of_a_real_history_is_deterministic() {
    let control = RunControl {
        t_end: 0.02,
        record_every: 1,
        ..Default::default()
    };
    let a = run(grid(24), &InitialDataSpec::default(), PhysicalParams::default(), &control).unwrap();
    let b = run(grid(24), &InitialDataSpec::default(), PhysicalParams::default(), &control).unwrap();
    assert_eq!(to_csv_string(&a.records), to_csv_string(&b.records));
    for w in a.records.windows(2) {
        assert!(w[1].bootstrap_q >= w[0].bootstrap_q);
        assert!(w[1].l1linf_dz_h_running >= w[0].l1linf_dz_h_running);
    }
    assert!(a.records.iter().all(|r| r.to_array().iter().all(|v| v.is_finite() && *v >= 0.0)));
}

#[test]
fn zero_swirl_run_records_no_meridian_vorticity() {
    let control = RunControl {
        t_end: 0.02,
        record_every: 2,
        ..Default::default()
    };
    let spec = InitialDataSpec {
        eps: 0.0,
        ..Default::default()
    };
    let out = run(grid(24), &spec, PhysicalParams::default(), &control).unwrap();
    assert!(out.records.iter().all(|r| r.linf_omega_rz == 0.0 && r.bootstrap_q == 0.0));
}

#[test]
fn l6_interpolation_ratio_is_stable_under_refinement() {
    let ratio = |n: usize| {
        let g = grid(n);
        let s = init_state(g, &InitialDataSpec::default(), PhysicalParams::default()).unwrap();
        let l6 = lp_norm(&s.omega, 6.0).unwrap();
        l6 / sobolev_norm_with(&[&s.omega], 1, OuterGhost::Zero).unwrap().sqrt()
    };
    let (a, b) = (ratio(64), ratio(128));
    assert!(a.is_finite() && a > 0.0);
    assert!((a / b - 1.0).abs() < 0.2, "{a} {b}");
}

proptest! {
    #[test]
    fn running_sup_never_drops(ws in proptest::collection::vec(0.0..5.0f64, 1..40)) {
        let hist: Vec<_> = ws.iter().enumerate().map(|(k, &w)| at(0.1 * k as f64, w)).collect();
        let mut prev_sup = 0.0;
        for k in 1..=hist.len() {
            let sup = hist[..k].iter().fold(0.0_f64, |m, r| m.max(r.linf_omega_rz));
            prop_assert!(sup >= prev_sup);
            let q = bootstrap_status(&hist[..k]);
            prop_assert!((q - hist[k - 1].t * sup).abs() <= 1e-15 * q.max(1.0));
            prev_sup = sup;
        }
    }

    #[test]
    fn csv_roundtrip_is_bit_exact(vals in proptest::collection::vec(prop_oneof![
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        -1e-300..1e-300f64,
    ], 24)) {
        let rec = DiagnosticsRecord::from_array(vals.clone().try_into().unwrap());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_csv(&[rec, rec], &path).unwrap();
        let back = read_csv(&path).unwrap();
        prop_assert_eq!(back.len(), 2);
        for (a, b) in back[1].to_array().iter().zip(&vals) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
