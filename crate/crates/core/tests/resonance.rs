use std::f64::consts::PI;

use deltarray_core::resonance::{
    find_perfect_tunnelling, pair_resonance_k, pair_resonances, scan, scan_energy, symmetric_phase_roots,
    Method, SearchOptions, NEAR_MISS_TOL, PERFECT_TOL,
};
use deltarray_core::transfer::{array_transmission, m21_sq};
use deltarray_core::units::{energy_from_k, k_from_energy, reduced_strength, Material};
use deltarray_core::{BarrierArray, Error};

fn opts(grid: usize) -> SearchOptions {
    SearchOptions { grid, tol: PERFECT_TOL }
}

#[test]
fn zero_strength_barrier_scans_flat() {
    let a = BarrierArray::from_pairs([(0.0, 0.0)]).unwrap();
    let s = scan(&a, 0.1, 5.0, 50).unwrap();
    assert!(s.points.iter().all(|p| p.transmission == 1.0 && p.reflection == 0.0));
}

#[test]
fn single_barrier_scan_follows_closed_form() {
    let g = 1.7;
    let a = BarrierArray::from_pairs([(0.3, g)]).unwrap();
    let s = scan(&a, 0.05, 6.0, 300).unwrap();
    assert_eq!(s.points.len(), 300);
    assert_eq!(s.points.last().unwrap().k, 6.0);
    let mut prev = 0.0;
    for p in &s.points {
        let want = 1.0 / (1.0 + g * g / (4.0 * p.k * p.k));
        assert!((p.transmission - want).abs() < 1e-14);
        assert!((p.transmission + p.reflection - 1.0).abs() < 1e-12);
        assert!(p.transmission > prev);
        prev = p.transmission;
    }
}

#[test]
fn scan_errors() {
    let a = BarrierArray::from_pairs([(0.0, 1.0)]).unwrap();
    assert!(matches!(scan(&a, 0.0, 1.0, 10), Err(Error::BadScanRange(..))));
    assert!(matches!(scan(&a, 2.0, 1.0, 10), Err(Error::BadScanRange(..))));
    assert!(matches!(scan(&a, 0.1, 1.0, 1), Err(Error::TooFewPoints { .. })));
    let empty = BarrierArray::new(vec![]).unwrap();
    assert_eq!(scan(&empty, 0.1, 1.0, 10), Err(Error::EmptyArray));
    assert!(matches!(find_perfect_tunnelling(&a, 0.1, 1.0, opts(8)), Err(Error::TooFewPoints { .. })));
}

#[test]
fn symmetric_triple_roots_via_k_scan() {
    // g chosen so that λ = g/k* = 1 at the expected root k* (spacing 1)
    for s_star in [PI / 2.0, (-0.8f64).acos()] {
        let a = BarrierArray::equally_spaced(3, s_star, 1.0).unwrap();
        let r = find_perfect_tunnelling(&a, s_star - 0.3, s_star + 0.3, opts(400)).unwrap();
        assert_eq!(r.method, Method::OracleRootFind);
        let hit = r.resonances.iter().find(|x| (x.k - s_star).abs() < 1e-8);
        assert!(hit.is_some(), "{s_star}: {:?}", r.resonances);
        assert!(hit.unwrap().transmission >= 1.0 - 1e-10);
    }
}

#[test]
fn symmetric_triple_roots_at_fixed_lambda() {
    let roots = symmetric_phase_roots(3, 1.0, 1e-6, PI - 1e-6, opts(2000)).unwrap();
    let s: Vec<f64> = roots.iter().map(|r| r.0).collect();
    assert_eq!(s.len(), 2, "{s:?}");
    assert!((s[0] - PI / 2.0).abs() < 1e-9);
    assert!((s[1] - (-0.8f64).acos()).abs() < 1e-9);
}

#[test]
fn symmetric_triple_roots_are_pi_periodic() {
    let base = symmetric_phase_roots(3, 1.0, 0.01, PI + 0.01, opts(2000)).unwrap();
    let shifted = symmetric_phase_roots(3, 1.0, PI + 0.01, 2.0 * PI + 0.01, opts(2000)).unwrap();
    assert_eq!(base.len(), shifted.len());
    for (a, b) in base.iter().zip(&shifted) {
        assert!((b.0 - a.0 - PI).abs() < 1e-9);
    }
}

#[test]
fn equal_pair_condition_is_found() {
    let (g, d) = (0.8, 3.0);
    let a = BarrierArray::from_pairs([(0.0, g), (d, g)]).unwrap();
    let r = find_perfect_tunnelling(&a, 0.2, 4.0, opts(2000)).unwrap();
    assert!(!r.resonances.is_empty());
    for res in &r.resonances {
        let lam = g / res.k;
        let lhs = 2.0 * res.k * d;
        let rhs = PI + 2.0 * (lam / 2.0).atan();
        let wrapped = ((lhs - rhs) / (2.0 * PI)).round();
        assert!((lhs - rhs - 2.0 * PI * wrapped).abs() < 1e-8);
        assert!(res.m21_sq < 1e-10);
    }
    let closed = pair_resonances(g, d, 0.2, 4.0).unwrap();
    assert_eq!(closed.method, Method::TranscendentalN2);
    assert_eq!(closed.resonances.len(), r.resonances.len());
    for (a, b) in closed.resonances.iter().zip(&r.resonances) {
        assert!((a.k - b.k).abs() < 1e-9 * a.k);
    }
}

#[test]
fn zero_sum_pair_tunnels_on_resonance_grid() {
    let (g, d) = (0.9, 2.0);
    let a = BarrierArray::from_pairs([(0.0, g), (d, -g)]).unwrap();
    let r = find_perfect_tunnelling(&a, 0.3, 6.0, opts(3000)).unwrap();
    let ks: Vec<f64> = r.resonances.iter().map(|x| x.k).collect();
    let want: Vec<f64> = (1..=3).map(|m| m as f64 * PI / d).collect();
    assert_eq!(ks.len(), want.len(), "{ks:?}");
    for (k, w) in ks.iter().zip(&want) {
        assert!((k - w).abs() < 1e-9);
    }
}

#[test]
fn no_resonance_gives_empty_report() {
    let a = BarrierArray::from_pairs([(0.0, 1.0)]).unwrap();
    let r = find_perfect_tunnelling(&a, 0.1, 2.0, opts(100)).unwrap();
    assert!(r.resonances.is_empty());
}

#[test]
fn near_misses_are_separated() {
    // unequal pair: maxima stay below T = 1
    let a = BarrierArray::from_pairs([(0.0, 0.3), (5.0, 0.33)]).unwrap();
    let r = find_perfect_tunnelling(&a, 0.5, 3.0, opts(2000)).unwrap();
    assert!(r.resonances.is_empty());
    assert!(!r.near_misses.is_empty());
    assert!(r.near_misses.iter().all(|m| m.m21_sq >= PERFECT_TOL && m.m21_sq < NEAR_MISS_TOL));
}

#[test]
fn finder_is_complete_at_grid_scale() {
    let m = Material::gaas();
    let g = reduced_strength(2.0, &m);
    let a = BarrierArray::from_pairs([(0.0, g), (100.0, g), (250.0, g), (280.0, g)]).unwrap();
    let (lo, hi) = (k_from_energy(0.1, &m).unwrap(), k_from_energy(15.0, &m).unwrap());
    let coarse = find_perfect_tunnelling(&a, lo, hi, opts(3000)).unwrap();
    let fine = find_perfect_tunnelling(&a, lo, hi, opts(6000)).unwrap();
    let count = |r: &deltarray_core::resonance::ResonanceReport| {
        r.resonances.iter().chain(&r.near_misses).filter(|x| x.transmission > 1.0 - 1e-6).count()
    };
    assert_eq!(count(&coarse), count(&fine));
}

#[test]
fn gaas_pair_resonance_branch_two() {
    let m = Material::gaas();
    let g = reduced_strength(2.0, &m);
    let k = pair_resonance_k(g, 100.0, 2).unwrap();
    assert!((k - 0.08954).abs() < 1e-4, "{k}");
    let e = energy_from_k(k, &m).unwrap();
    assert!((e - 4.56).abs() < 0.05, "{e}");
    let fixed = (PI + 2.0 * (g / (2.0 * k)).atan() + 4.0 * PI) / (2.0 * 100.0);
    assert!((k - fixed).abs() / k < 1e-12);
    let a = BarrierArray::from_pairs([(0.0, g), (100.0, g)]).unwrap();
    assert!(m21_sq(&a, k).unwrap() < 1e-20);
    assert!((1.0 - array_transmission(&a, k).unwrap()).abs() < 1e-10);
}

#[test]
fn pair_resonance_limits_and_errors() {
    let d = 10.0;
    for n in 0..4 {
        let k = pair_resonance_k(0.0, d, n).unwrap();
        assert!((k - (PI + 2.0 * PI * n as f64) / (2.0 * d)).abs() < 1e-14);
    }
    assert!(pair_resonance_k(1.0, 0.0, 0).is_err());
    assert!(pair_resonance_k(1.0, -1.0, 0).is_err());
    // wells: branch 0 exists only while d·|g| < 2
    assert_eq!(pair_resonance_k(-1.0, 3.0, 0), Err(Error::BranchEmpty(0)));
    for (g, d, n) in [(-0.5, 2.0, 0), (-1.0, 3.0, 1), (-4.0, 1.0, 2)] {
        let k = pair_resonance_k(g, d, n).unwrap();
        let a = BarrierArray::from_pairs([(0.0, g), (d, g)]).unwrap();
        assert!(m21_sq(&a, k).unwrap() < 1e-20, "{g} {d} {n}");
    }
}

#[test]
fn gaas_pair_spectrum_has_several_peaks_including_4_56() {
    let m = Material::gaas();
    let g = reduced_strength(2.0, &m);
    let a = BarrierArray::from_pairs([(0.0, g), (100.0, g)]).unwrap();
    let s = scan_energy(&a, &m, 0.1, 15.0, 4000).unwrap();
    let peaks = deltarray_core::filter::peak_analysis(&s, 0.05).unwrap();
    assert!(peaks.peaks.len() >= 4);
    assert!(peaks.peaks.iter().any(|p| (p.energy_mev.unwrap() - 4.56).abs() < 0.05 && p.t_max > 0.999));
}
