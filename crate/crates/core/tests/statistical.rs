//! Monte Carlo checks of the GAF laws at moderate sample sizes.

use gafheat::funcs::{Analytic, TaylorFunction};
use gafheat::gaf::{
    anchor_seed, apply_ta_weighted, condition_at, covariance_pred, residual_experiment, GafSample, Vtau,
};
use gafheat::heatflow::HeatFlow;
use gafheat::metaplectic::{zero_action, GroupElement};
use gafheat::stats::{empirical_covariance, mean_se, two_sample_energy, zero_counts_in_disk};
use gafheat::zeros::{newton_polish, weyl_roots};
use gafheat::{funcs::Weighted, C64};
use rayon::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn combined(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 - b.0, (a.1 * a.1 + b.1 * b.1).sqrt())
}

#[test]
fn coefficients_are_uncorrelated_unit_variance() {
    let m = 10_000;
    let mut acc = [[c(0.0, 0.0); 4]; 4];
    for k in 0..m {
        let g = GafSample::trial(3, 11, k);
        for i in 0..4 {
            for j in 0..4 {
                acc[i][j] += g.xi()[i] * g.xi()[j].conj();
            }
        }
    }
    for (i, row) in acc.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((v / m as f64 - want).norm() < 5.0 / (m as f64).sqrt(), "({i},{j}) {v}");
        }
    }
}

#[test]
fn gaf_covariance_is_exp_zwbar() {
    let pts = [c(0.0, 0.0), c(1.0, 1.0), c(-1.5, 0.5), c(0.3, -1.8)];
    let probes: Vec<(C64, C64)> = pts.iter().flat_map(|&z| pts.iter().map(move |&w| (z, w))).collect();
    let g = empirical_covariance(|s, k| Ok(GafSample::trial(80, s, k).taylor), &probes, 4000, 1).unwrap();
    let (frac, worst) = g.fraction_within(5.0, |z, w| Ok((z * w.conj()).exp()));
    assert!(frac == 1.0, "{frac} {worst}");
}

#[test]
fn flowed_cross_covariance_matches_prediction() {
    let (tau, sigma) = (c(0.3, 0.1), c(-0.2, 0.25));
    let (z, w) = (c(0.4, -0.2), c(-0.3, 0.5));
    let m = 4000u64;
    let xs: Vec<C64> = (0..m)
        .into_par_iter()
        .map(|k| {
            let g = GafSample::trial(80, 2, k).taylor;
            g.heat(tau).unwrap().eval(z).unwrap() * g.heat(sigma).unwrap().eval(w).unwrap().conj()
        })
        .collect();
    let mean = xs.iter().sum::<C64>() / m as f64;
    let var = xs.iter().map(|x| (x - mean).norm_sqr()).sum::<f64>() / (m - 1) as f64;
    let se = (var / m as f64).sqrt();
    let want = covariance_pred(z, w, tau, sigma).unwrap();
    assert!((mean - want).norm() <= 5.0 * se, "{mean} {want} {se}");
}

#[test]
fn translation_preserves_covariance() {
    let a = c(1.5, -0.7);
    let pts = [c(0.0, 0.0), c(0.8, 0.4), c(-0.6, 1.0)];
    let probes: Vec<(C64, C64)> = pts.iter().flat_map(|&z| pts.iter().map(move |&w| (z, w))).collect();
    let g = empirical_covariance(
        |s, k| Ok(apply_ta_weighted(&Weighted::identity(GafSample::trial(100, s, k).taylor), a)),
        &probes,
        4000,
        3,
    )
    .unwrap();
    let (frac, worst) = g.fraction_within(5.0, |z, w| Ok((z * w.conj()).exp()));
    assert!(frac == 1.0, "{frac} {worst}");
}

fn zeros_of(t: &TaylorFunction) -> Vec<C64> {
    weyl_roots(t).unwrap().zeros
}

#[test]
fn vtau_preserves_zero_intensity() {
    let tau = c(0.4, 0.2);
    let s = (1.0 - tau.norm_sqr()).sqrt();
    let m = 2000u64;
    let plain: Vec<Vec<C64>> = (0..m).into_par_iter().map(|k| zeros_of(&GafSample::trial(60, 4, k).taylor)).collect();
    let moved: Vec<Vec<C64>> = (0..m)
        .into_par_iter()
        .map(|k| {
            let g = GafSample::trial(60, 5, k).taylor;
            zeros_of(&g.heat(tau).unwrap()).into_iter().map(|z| z / s).collect()
        })
        .collect();
    let a = zero_counts_in_disk(&plain, 1.0);
    let b = zero_counts_in_disk(&moved, 1.0);
    assert!((a.0 - 1.0).abs() <= 5.0 * a.1, "{a:?}");
    let (d, se) = combined(a, b);
    assert!(d.abs() <= 3.0 * se, "{a:?} {b:?}");
}

#[test]
fn rotation_spreads_zeros_evenly_over_sectors() {
    let g = GroupElement::rotation(0.7);
    let m = 1000u64;
    let counts: Vec<[f64; 4]> = (0..m)
        .into_par_iter()
        .map(|k| {
            let zs = zero_action(&g, &zeros_of(&GafSample::trial(60, 6, k).taylor));
            let mut out = [0.0; 4];
            for z in zs.iter().filter(|z| z.norm() < 2.0) {
                let q = ((z.arg() + std::f64::consts::PI) / (std::f64::consts::FRAC_PI_2)) as usize;
                out[q.min(3)] += 1.0;
            }
            out
        })
        .collect();
    let total = mean_se(&counts.iter().map(|r| r.iter().sum::<f64>()).collect::<Vec<_>>()).0;
    for q in 0..4 {
        let (mean, se) = mean_se(&counts.iter().map(|r| r[q]).collect::<Vec<_>>());
        assert!((mean - total / 4.0).abs() <= 3.0 * se, "sector {q}: {mean} vs {}", total / 4.0);
    }
}

#[test]
fn drift_law_mean_and_scale() {
    let tau = 0.3;
    let base = residual_experiment(c(0.0, 0.0), tau, 600, 100, 9).unwrap();
    let moved = residual_experiment(c(2.0, 1.0), tau, 600, 100, 9).unwrap();
    for part in [|z: &C64| z.re, |z: &C64| z.im] {
        let a = mean_se(&moved.residuals.iter().map(part).collect::<Vec<_>>());
        let b = mean_se(&base.residuals.iter().map(part).collect::<Vec<_>>());
        let (d, se) = combined(a, b);
        assert!(d.abs() <= 3.0 * se, "{a:?} {b:?}");
    }
    let median = |v: &[C64]| {
        let mut m: Vec<f64> = v.iter().map(|z| z.norm()).collect();
        m.sort_by(f64::total_cmp);
        m[m.len() / 2]
    };
    let far = residual_experiment(c(10.0, 0.0), tau, 600, 100, 9).unwrap();
    assert_eq!(far.aborted(), 0);
    assert!(median(&far.residuals) <= 2.0 * median(&base.residuals));
}

#[test]
fn conditioned_nearest_zero_law_is_translation_invariant() {
    let m = 2000u64;
    let sample = |a: C64| -> Vec<C64> {
        let seed = anchor_seed(13, a);
        (0..m)
            .into_par_iter()
            .map(|k| {
                let g = condition_at(&GafSample::trial(80, seed, k), a);
                let d = zeros_of(&g.base.taylor)
                    .into_iter()
                    .filter(|z| z.norm() > 1e-8)
                    .map(|z| newton_polish(&g.repr, z + a).unwrap_or(z + a))
                    .map(|z| (z - a).norm())
                    .fold(f64::INFINITY, f64::min);
                c(d, 0.0)
            })
            .collect()
    };
    let s0 = sample(c(0.0, 0.0));
    for (k, a) in [c(2.0, 0.0), c(0.0, 2.0)].into_iter().enumerate() {
        let r = two_sample_energy(&sample(a), &s0, 500, k as u64).unwrap();
        assert!(r.p_value >= 0.01 / 2.0, "{a}: {r:?}");
    }
}

#[test]
fn energy_test_is_calibrated_on_drift_residuals() {
    let reps = 100;
    let rejects = (0..reps)
        .filter(|&i| {
            let a = residual_experiment(c(0.0, 0.0), 0.3, 50, 60, 1000 + 2 * i).unwrap();
            let b = residual_experiment(c(0.0, 0.0), 0.3, 50, 60, 1001 + 2 * i).unwrap();
            let (xa, xb) = (&a.residuals, &b.residuals);
            xa.len() >= 50 && xb.len() >= 50 && two_sample_energy(xa, xb, 200, i).unwrap().p_value < 0.05
        })
        .count();
    assert!(rejects <= 12, "{rejects} of {reps} rejected at α = 0.05");
}

#[test]
fn vtau_sample_is_reproducible() {
    let a = GafSample::trial(60, 7, 3).taylor.vtau(c(0.3, 0.3)).unwrap();
    let b = GafSample::trial(60, 7, 3).taylor.vtau(c(0.3, 0.3)).unwrap();
    assert_eq!(a, b);
}
