use std::f64::consts::PI;

use resonant_core::delta_well::{
    anti_bound_roots, critical_ratio, local_maxima, modulus_curve_splits, parity_curves, s_matrix, siegert_function,
    siegert_roots, transmission_scan, DoubleDeltaModel, RootSearch,
};
use resonant_core::{Complex64 as C64, Parity, ResonantState, StateKind, Units};

fn roots(a_over_l: f64, parity: Parity, xi_max: f64) -> Vec<ResonantState> {
    let model = DoubleDeltaModel::with_ratio(a_over_l).unwrap();
    siegert_roots(&model, parity, &RootSearch::window(0.0, xi_max), &Units::default())
        .unwrap()
        .states
}

#[test]
fn curve_crossings_sit_on_the_roots() {
    for a_over_l in [0.1, 1.0, 3.5, 4.0, 10.0] {
        let model = DoubleDeltaModel::with_ratio(a_over_l).unwrap();
        for parity in [Parity::Even, Parity::Odd] {
            for s in roots(a_over_l, parity, 3.0 * PI) {
                let (xi, eta) = (s.k().re, -s.k().im);
                let sample = &parity_curves(&model, &[xi]).unwrap()[0];
                assert!((sample.eta_fixed_point - eta).abs() < 1e-9, "a/l={a_over_l} xi={xi}");
                let nearest = sample
                    .eta_circle
                    .iter()
                    .map(|e| (e - eta).abs())
                    .fold(f64::INFINITY, f64::min);
                assert!(nearest < 1e-9, "a/l={a_over_l} xi={xi}: {:?} vs {eta}", sample.eta_circle);
            }
        }
    }
}

#[test]
fn small_xi_limit_of_phase_curve() {
    let model = DoubleDeltaModel::with_ratio(0.7).unwrap();
    let s = &parity_curves(&model, &[1e-6]).unwrap()[0];
    assert!((s.eta_fixed_point - (1.0 / 1.4 + 0.5)).abs() < 1e-9);
}

#[test]
fn closed_branch_misses_the_phase_curve() {
    let model = DoubleDeltaModel::with_ratio(10.0).unwrap();
    assert!(modulus_curve_splits(&model));
    assert!(!modulus_curve_splits(&DoubleDeltaModel::with_ratio(3.5).unwrap()));
    // the closed branch shows up as two extra modulus-curve values at small xi
    let xs: Vec<f64> = (1..400).map(|i| 0.005 * i as f64).collect();
    let samples = parity_curves(&model, &xs).unwrap();
    let closed: Vec<_> = samples.iter().filter(|s| s.eta_circle.len() == 3).collect();
    assert!(!closed.is_empty());
    for s in &closed {
        let (lo, hi) = (s.eta_circle[0], s.eta_circle[1]);
        assert!(s.eta_fixed_point < lo || s.eta_fixed_point > hi || s.eta_fixed_point.is_nan());
    }
    let found = siegert_roots(&model, Parity::Even, &RootSearch::window(0.0, PI), &Units::default()).unwrap();
    assert!(found.states.is_empty());
    assert!(found.closed_branch);
}

#[test]
fn lowest_even_root_vanishes_at_the_critical_ratio() {
    let c = critical_ratio();
    assert!((c - 3.59112).abs() < 1e-5, "{c}");
    assert_eq!(roots(c - 1e-3, Parity::Even, PI).len(), 1);
    assert!(roots(c + 1e-3, Parity::Even, PI).is_empty());
}

#[test]
fn transmission_peaks_follow_the_roots() {
    let model = DoubleDeltaModel::with_ratio(0.1).unwrap();
    let grid: Vec<f64> = (1..=20000).map(|i| 6.0 * i as f64 / 20000.0).collect();
    let scan = transmission_scan(&model, &grid);
    assert!(scan.iter().all(|s| s.transmission <= 1.0 + 1e-12));
    let peaks: Vec<f64> = local_maxima(&scan).into_iter().map(|i| scan[i].k).collect();
    let mut all = roots(0.1, Parity::Even, 6.0);
    all.extend(roots(0.1, Parity::Odd, 6.0));
    assert_eq!(all.len(), 4);
    for s in &all {
        let d = peaks.iter().map(|p| (p - s.k().re).abs()).fold(f64::INFINITY, f64::min);
        assert!(d < 0.05, "root {} nearest peak {d}", s.k());
    }
}

#[test]
fn first_peak_without_pole_at_four() {
    let model = DoubleDeltaModel::with_ratio(4.0).unwrap();
    let grid: Vec<f64> = (1..=4000).map(|i| PI * i as f64 / 4000.0).collect();
    let scan = transmission_scan(&model, &grid);
    assert!(!local_maxima(&scan).is_empty());
    assert!(roots(4.0, Parity::Even, PI).is_empty());
}

#[test]
fn anti_bound_states_are_real_energy_zeros() {
    let model = DoubleDeltaModel::with_ratio(4.0).unwrap();
    let found = anti_bound_roots(&model, Parity::Even, 3.0, &Units::default());
    assert!(!found.is_empty());
    for s in &found {
        assert_eq!(s.kind, StateKind::AntiBound);
        assert!(s.e().im.abs() < 1e-10 && s.e().re < 0.0);
        assert!(siegert_function(&model, Parity::Even, s.k()).0.norm() < 1e-10);
    }
}

#[test]
fn transmission_vanishes_linearly_at_threshold() {
    let model = DoubleDeltaModel::with_ratio(1.0).unwrap();
    let t = |k: f64| s_matrix(&model, C64::new(k, 0.0)).unwrap().transmission.norm();
    // |t| ~ K a^2 / (a + l) as K -> 0
    for k in [1e-5, 1e-6, 1e-7] {
        assert!((t(k) / k - 0.5).abs() < 1e-4);
    }
}
