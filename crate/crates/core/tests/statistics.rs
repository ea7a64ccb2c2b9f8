mod common;

use std::f64::consts::PI;

use common::*;
use rand::Rng;
use tilted_ising::chaostats::{
    analyze_spacings, ks_distance, ks_statistic, nnsd_histogram, poisson_cdf, unfold, wigner_cdf, DEFAULT_FIT_DEGREE,
    DEFAULT_TRIM_FRACTION,
};
use tilted_ising::spectra::{solve_spectrum, SectorKind};
use tilted_ising::state::ChainParams;

#[test]
fn exponential_sample_looks_poissonian() {
    let s = exponential_sample(2024, 10_000);
    let ks = ks_statistic(&s).unwrap();
    assert!(ks.d_poisson < 0.02, "{ks:?}");
    assert!(ks.d_wigner > 0.2, "{ks:?}");
}

#[test]
fn pooled_goe_spacings_follow_the_surmise() {
    let s = pooled_goe_spacings(99, 50, 200);
    let ks = ks_statistic(&s).unwrap();
    assert!(ks.d_wigner < 0.05, "{ks:?}");
    assert!(ks.d_poisson > 0.1, "{ks:?}");
}

#[test]
fn goe_histogram_within_multinomial_error() {
    let s = pooled_goe_spacings(100, 50, 200);
    let w = 0.1;
    let hist = nnsd_histogram(&s, w).unwrap();
    let n = s.len() as f64;
    // bins with fewer than 5 expected counts are merged into one tail bin
    let (mut tail_obs, mut tail_p) = (0.0, 0.0);
    for (k, &count) in hist.counts.iter().enumerate() {
        let (a, b) = (k as f64 * w, (k + 1) as f64 * w);
        let p = wigner_cdf(b).unwrap() - wigner_cdf(a).unwrap();
        if n * p < 5.0 {
            tail_obs += count as f64;
            tail_p += p;
            continue;
        }
        let sigma = (n * p * (1.0 - p)).sqrt();
        assert!((count as f64 - n * p).abs() <= 3.0 * sigma, "bin {k}: {count} vs {}", n * p);
    }
    tail_p += 1.0 - wigner_cdf(hist.counts.len() as f64 * w).unwrap();
    let sigma = (n * tail_p * (1.0 - tail_p)).sqrt().max(1.0);
    assert!((tail_obs - n * tail_p).abs() <= 3.0 * sigma, "tail: {tail_obs} vs {}", n * tail_p);
}

#[test]
fn poisson_process_unfolds_to_poisson() {
    let mut r = rng(4000);
    let mut levels = Vec::with_capacity(4000);
    let mut e = 0.0;
    for _ in 0..4000 {
        e += r.sample::<f64, _>(rand_distr::Exp1);
        levels.push(e);
    }
    let u = unfold(&levels, 15, DEFAULT_TRIM_FRACTION).unwrap();
    let d = ks_distance(&u.spacings, |s| poisson_cdf(s).unwrap()).unwrap();
    assert!(d < 0.03, "D = {d}");
}

#[test]
fn uniform_ladder_stays_uniform() {
    let levels: Vec<f64> = (1..=1000).map(f64::from).collect();
    let u = unfold(&levels, 3, DEFAULT_TRIM_FRACTION).unwrap();
    assert!(u.spacings.iter().all(|s| (s - 1.0).abs() < 1e-6));
}

/// Lévy distance between the empirical CDF of `sample` and a point mass at 1:
/// the smallest ε with at most a fraction ε of the sample below `1−ε` and at
/// most a fraction ε above `1+ε`.
fn levy_to_unit_mass(sample: &[f64]) -> f64 {
    let n = sample.len() as f64;
    let side = |dev: Vec<f64>| {
        let mut dev = dev;
        dev.sort_by(f64::total_cmp);
        let m = dev.len();
        // ε in [dev[k−1], dev[k]) leaves m − k points outside
        (0..=m)
            .map(|k| {
                let eps = if k == 0 { 0.0 } else { dev[k - 1] };
                eps.max((m - k) as f64 / n)
            })
            .fold(f64::INFINITY, f64::min)
    };
    let below = side(sample.iter().filter(|&&s| s < 1.0).map(|s| 1.0 - s).collect());
    let above = side(sample.iter().filter(|&&s| s > 1.0).map(|s| s - 1.0).collect());
    below.max(above)
}

#[test]
fn quadratic_ladder_unfolds_to_unit_spacings() {
    let levels: Vec<f64> = (1..=1000).map(|i| f64::from(i).powi(2)).collect();
    let u = unfold(&levels, DEFAULT_FIT_DEGREE, DEFAULT_TRIM_FRACTION).unwrap();
    assert!((u.mean_spacing() - 1.0).abs() < 0.02);
    let d = levy_to_unit_mass(&u.spacings);
    assert!(d < 0.05, "Lévy distance {d}");
}

#[test]
fn levy_distance_helper() {
    assert_eq!(levy_to_unit_mass(&[1.0; 10]), 0.0);
    assert!((levy_to_unit_mass(&[1.02; 10]) - 0.02).abs() < 1e-12);
    // one wild point in ten costs at most 0.1
    let mut s = vec![1.0; 9];
    s.push(5.0);
    assert!((levy_to_unit_mass(&s) - 0.1).abs() < 1e-12);
    // the two tails are bounded separately
    let mut s = vec![1.0; 8];
    s.extend([0.0, 2.0]);
    assert!((levy_to_unit_mass(&s) - 0.1).abs() < 1e-12);
}

#[test]
fn nonintegrable_chain_prefers_wigner() {
    let p = ChainParams::unit(12, 7.0 * PI / 16.0).unwrap();
    let ev = solve_spectrum(&p, SectorKind::Even, false).unwrap().eigenvalues;
    let a = analyze_spacings(&ev, DEFAULT_FIT_DEGREE, DEFAULT_TRIM_FRACTION).unwrap();
    let ks = a.ks.unwrap();
    assert!(ks.d_wigner < ks.d_poisson, "{ks:?}");
}

#[test]
fn diagonal_chain_is_flagged_degenerate() {
    let p = ChainParams::unit(8, 0.0).unwrap();
    let ev = solve_spectrum(&p, SectorKind::Even, false).unwrap().eigenvalues;
    let a = analyze_spacings(&ev, DEFAULT_FIT_DEGREE, DEFAULT_TRIM_FRACTION).unwrap();
    assert!(a.degeneracy_fraction > 0.9);
    assert!(a.ks.is_none() && a.notice.is_some());
}
