use std::f64::consts::PI;

use super::*;
use crate::error::Error;

fn gaussian() -> Sample {
    Sample::new(0, |r, z| (-r * r - z * z).exp())
}

fn zero() -> Sample {
    Sample::new(0, |_, _| 0.0)
}

/// `‖e^{-|x|²}‖₆ / ‖∇e^{-|x|²}‖₂` in ℝ³.
fn sobolev_gaussian_oracle() -> f64 {
    (PI / 6.0).powf(0.25) / (3f64.sqrt() * (PI / 2.0).powf(0.75))
}

#[test]
fn exponent_relation_is_enforced() {
    let err = GnCheck::new(0, 1, 5.0, 2.0, 2.0, 1.0).unwrap_err();
    assert!(matches!(err, Error::Exponents(_)));
    assert!(err.to_string().contains("= "), "{err}");
    assert!(GnCheck::new(1, 2, 3.0, 2.0, 2.0, 0.4).is_err(), "alpha below j/m");
    assert!(GnCheck::new(2, 2, 2.0, 2.0, 2.0, 1.0).is_err(), "j must be below m");
    for c in GnCheck::default_cases() {
        assert!(c.id().starts_with("gn["));
    }
}

#[test]
fn degenerate_cases_are_rejected() {
    // j = 0, m r < 3, q = ∞: 1/p = α(1/r - m/3) with r = 2, m = 1, α = 1 ⇒ p = 6
    let e = GnCheck::new(0, 1, 6.0, f64::INFINITY, 2.0, 1.0).unwrap_err();
    assert!(e.to_string().contains("excluded"), "{e}");
    // m - j - 3/r = 0 with r = 3, m = 1, α = 1 ⇒ 1/p = 0
    let e = GnCheck::new(0, 1, f64::INFINITY, 2.0, 3.0, 1.0).unwrap_err();
    assert!(e.to_string().contains("excluded"), "{e}");
}

#[test]
fn vanishing_samples_are_skipped() {
    let res = Resolution::new(16);
    let checks: Vec<Box<dyn LemmaCheck>> = vec![
        Box::new(GnCheck::default_cases().remove(0)),
        Box::new(BiotSavartCheck::new(2.0)),
        Box::new(GradUrOverRCheck::new(6.0)),
        Box::new(HeatMaxRegCheck::new(0.01)),
        Box::new(NuScalingCheck::new(1.0, 0.01)),
    ];
    for c in checks {
        assert_eq!(c.ratio(&res, &zero()).unwrap(), None, "{}", c.id());
    }
}

#[test]
fn sobolev_constant_of_the_gaussian() {
    let c = GnCheck::new(0, 1, 6.0, 2.0, 2.0, 1.0).unwrap();
    let oracle = sobolev_gaussian_oracle();
    let e: Vec<f64> = [64, 128]
        .iter()
        .map(|&n| (c.ratio(&Resolution::new(n), &gaussian()).unwrap().unwrap() - oracle).abs())
        .collect();
    assert!(e[1] < 5e-3 * oracle, "{e:?}");
    assert!(e[0] / e[1] > 3.5, "{e:?}");
}

#[test]
fn biot_savart_plancherel_identity() {
    let fams = FamilyRegistry::default();
    let check = BiotSavartCheck::new(2.0);
    for n in [32, 64] {
        let res = Resolution::new(n);
        let h = res.grid().unwrap().h_max();
        for name in fams.names() {
            for k in 0..3 {
                let s = fams.get(name).unwrap().sample(5, k);
                let ratio = check.ratio(&res, &s).unwrap().unwrap();
                assert!((ratio - 1.0).abs() <= 10.0 * h * h, "{name} {k} n={n}: {ratio}");
            }
        }
    }
}

#[test]
fn grad_ur_over_r_single_bump_regression() {
    let r = GradUrOverRCheck::ratio_on(&std::sync::Arc::new(Resolution::new(256).grid().unwrap()), &gaussian(), 2.0)
        .unwrap()
        .unwrap();
    assert!((r / 0.29102568650677263 - 1.0).abs() < 1e-9, "{r:?}");
}

#[test]
fn heat_mode_matches_the_closed_form() {
    let k = 2.0 * PI * 2.0 / 16.0;
    let exact = heat_mode_ratio(k, 0.5);
    let grid = Resolution::new(128).grid().unwrap();
    let measured = heat_mode_measured(&grid, 2, 0.5, 1.0).unwrap();
    assert!((measured - exact).abs() < 1e-3, "{measured} {exact}");
    let coarse = heat_mode_measured(&Resolution::new(64).grid().unwrap(), 2, 0.5, 1.0).unwrap();
    assert!((coarse - exact).abs() / (measured - exact).abs() > 3.5);
}

#[test]
fn heat_flow_of_pure_initial_data_contracts_uniformly_in_nu() {
    // g = 0: ‖∇²v‖_{L²L²} ≤ T^{1/2} ‖∇²v₀‖, so the measured constant is at most 1
    let grid = Resolution::new(48).grid().unwrap();
    let v0 = gaussian().on_grid(&std::sync::Arc::new(grid.clone())).unwrap().into_values();
    let zeros = vec![0.0; grid.len()];
    let cs: Vec<f64> = [1.0, 0.1, 0.01]
        .iter()
        .map(|&nu| NuScalingCheck::new(nu, 0.25).constant_for(&grid, &v0, &zeros, 1.0).unwrap().unwrap())
        .collect();
    for c in &cs {
        assert!(*c > 0.0 && *c <= 1.0 + 1e-9, "{cs:?}");
    }
    let spread = cs.iter().cloned().fold(0.0, f64::max) / cs.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread < 3.0, "{cs:?}");
}

#[test]
fn halving_nu_with_fixed_forcing_changes_the_constant_less_than_threefold() {
    let grid = Resolution::new(48).grid().unwrap();
    let g = gaussian().on_grid(&std::sync::Arc::new(grid.clone())).unwrap().into_values();
    let zeros = vec![0.0; grid.len()];
    let c = |nu: f64| NuScalingCheck::new(nu, 0.25).constant_for(&grid, &zeros, &g, 1.0).unwrap().unwrap();
    let (a, b) = (c(0.2), c(0.1));
    assert!(a / b < 3.0 && b / a < 3.0, "{a} {b}");
}

#[test]
fn families_are_reproducible_from_the_seed() {
    let fams = FamilyRegistry::default();
    assert_eq!(fams.names(), vec!["gaussian_bumps", "random_bandlimited", "vortex_rings"]);
    for name in fams.names() {
        let f = fams.get(name).unwrap();
        let (a, b, c) = (f.sample(3, 4), f.sample(3, 4), f.sample(4, 4));
        let pts = [(0.1, 0.2), (1.3, -0.7), (2.5, 1.9)];
        assert!(pts.iter().all(|&(r, z)| a.eval(r, z) == b.eval(r, z)));
        assert!(pts.iter().any(|&(r, z)| a.eval(r, z) != c.eval(r, z)));
        // even in r and decayed at the truncation boundary
        assert_eq!(a.eval(0.7, 0.3), a.eval(-0.7, 0.3));
        assert!(a.eval(8.0, 0.0).abs() < 1e-6 && a.eval(0.0, 8.0).abs() < 1e-6);
    }
    assert!(matches!(fams.get("plane_waves"), Err(Error::UnknownName { .. })));
}

#[test]
fn registry_selects_by_lemma_name() {
    let reg = LemmaRegistry::standard(0.1, 0.25);
    assert_eq!(
        reg.lemma_names(),
        vec!["gn", "biot_savart", "grad_ur_over_r", "heat_maxreg", "nu_scaling"]
    );
    assert_eq!(reg.select(&["biot_savart".into()]).unwrap().len(), 3);
    assert_eq!(reg.select(&["nu_scaling".into()]).unwrap().len(), 3);
    assert!(matches!(reg.select(&["hardy".into()]), Err(Error::UnknownName { .. })));
    let mut reg = reg;
    assert!(reg.register(Box::new(BiotSavartCheck::new(2.0))).is_err());
}

#[test]
fn small_bench_is_deterministic_and_holds() {
    let cfg = BenchConfig {
        lemmas: vec!["gn".into(), "biot_savart".into(), "heat_maxreg".into()],
        count: 4,
        heat_count: 2,
        n_coarse: 24,
        n_fine: 48,
        heat_t_end: 0.02,
        nu_t_end: 0.02,
    };
    let a = run_bench(&cfg, 11).unwrap();
    let b = run_bench(&cfg, 11).unwrap();
    assert_eq!(a.to_csv_string(), b.to_csv_string());
    assert!(a.all_hold());
    assert!(a.to_csv_string().starts_with("lemma,sample,ratio\n"));
    assert_eq!(a.reports.len(), 4 + 3 + 1);
    assert!(a.nu_spread().is_none());
    assert!(a.summary().contains("biot_savart[p=6]"));
    let bad = BenchConfig { n_fine: 24, ..cfg };
    assert!(run_bench(&bad, 0).is_err());
}

#[test]
fn median_and_max_ignore_skipped_samples() {
    let v = [Some(3.0), None, Some(1.0), Some(2.0)];
    assert_eq!(max_of(&v), 3.0);
    assert_eq!(median_of(&v), 2.0);
    assert_eq!(median_of(&[Some(1.0), Some(4.0)]), 2.5);
    assert_eq!(median_of(&[None]), 0.0);
}
