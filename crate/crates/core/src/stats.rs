//! Monte Carlo estimators and two-sample tests.

use crate::funcs::Analytic;
use crate::rng::trial_rng;
use crate::{Error, Result, C64};
use rand::seq::SliceRandom;
use rayon::prelude::*;

/// Empirical `E[F(z)conj(F(w))]` at a list of probe pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceGrid {
    pub points: Vec<(C64, C64)>,
    pub estimates: Vec<C64>,
    /// Sample standard deviation of `F(z)conj(F(w))` over `√trials`.
    pub std_errors: Vec<f64>,
    pub trials: usize,
}

impl CovarianceGrid {
    /// Fraction of probes whose estimate is within `k` standard errors of
    /// `pred`, together with the largest error in SE units. Probes where the
    /// prediction fails count as misses.
    pub fn fraction_within<P>(&self, k: f64, pred: P) -> (f64, f64)
    where
        P: Fn(C64, C64) -> Result<C64>,
    {
        let mut hits = 0;
        let mut worst: f64 = 0.0;
        for ((&(z, w), est), se) in self.points.iter().zip(&self.estimates).zip(&self.std_errors) {
            let Ok(p) = pred(z, w) else { continue };
            let d = (est - p).norm();
            let units = if *se > 0.0 { d / se } else if d == 0.0 { 0.0 } else { f64::INFINITY };
            worst = worst.max(units);
            if units <= k {
                hits += 1;
            }
        }
        (hits as f64 / self.points.len().max(1) as f64, worst)
    }
}

/// All pairs `(z, w)` from a square grid of side `n` on `[−r, r]²`, with
/// `w` running over the same grid shifted by `shift`.
pub fn probe_grid(n: usize, r: f64, shift: C64) -> Vec<(C64, C64)> {
    let step = if n > 1 { 2.0 * r / (n - 1) as f64 } else { 0.0 };
    let pts: Vec<C64> = (0..n * n)
        .map(|k| C64::new(-r + step * (k % n) as f64, -r + step * (k / n) as f64))
        .collect();
    pts.iter().map(|&z| (z, z + shift)).collect()
}

/// Averages `F(z)conj(F(w))` over `trials` samples `F = sampler(seed, k)`.
///
/// Trials are evaluated in parallel and reduced in trial order, so the result
/// is bit-identical for a fixed seed regardless of thread count.
pub fn empirical_covariance<S, F>(sampler: S, probes: &[(C64, C64)], trials: usize, seed: u64) -> Result<CovarianceGrid>
where
    S: Fn(u64, u64) -> Result<F> + Sync,
    F: Analytic,
{
    collect_products(probes, trials, |k| {
        let f = sampler(seed, k)?;
        probes.iter().map(|&(z, w)| Ok(f.eval(z)? * f.eval(w)?.conj())).collect()
    })
}

/// Averages `F(z)conj(H(w))` for jointly sampled pairs `(F, H) = sampler(seed, k)`,
/// e.g. one GAF flowed to two different times.
pub fn empirical_cross_covariance<S, F, H>(
    sampler: S,
    probes: &[(C64, C64)],
    trials: usize,
    seed: u64,
) -> Result<CovarianceGrid>
where
    S: Fn(u64, u64) -> Result<(F, H)> + Sync,
    F: Analytic,
    H: Analytic,
{
    collect_products(probes, trials, |k| {
        let (f, h) = sampler(seed, k)?;
        probes.iter().map(|&(z, w)| Ok(f.eval(z)? * h.eval(w)?.conj())).collect()
    })
}

fn collect_products<T>(probes: &[(C64, C64)], trials: usize, trial: T) -> Result<CovarianceGrid>
where
    T: Fn(u64) -> Result<Vec<C64>> + Sync + Send,
{
    if trials < 100 {
        return Err(Error::SampleSize(format!("need at least 100 trials, got {trials}")));
    }
    let rows: Vec<Vec<C64>> = (0..trials as u64).into_par_iter().map(trial).collect::<Result<_>>()?;
    let m = trials as f64;
    let mut estimates = vec![C64::new(0.0, 0.0); probes.len()];
    for r in &rows {
        for (e, x) in estimates.iter_mut().zip(r) {
            *e += x;
        }
    }
    for e in estimates.iter_mut() {
        *e /= m;
    }
    let mut ss = vec![0.0; probes.len()];
    for r in &rows {
        for ((s, x), e) in ss.iter_mut().zip(r).zip(&estimates) {
            *s += (x - e).norm_sqr();
        }
    }
    let std_errors = ss.iter().map(|s| (s / (m - 1.0)).sqrt() / m.sqrt()).collect();
    Ok(CovarianceGrid { points: probes.to_vec(), estimates, std_errors, trials })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestMethod {
    EnergyPermutation,
    KsRadial,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TestReport {
    pub statistic: f64,
    pub p_value: f64,
    pub method: TestMethod,
    pub n1: usize,
    pub n2: usize,
}

/// Default number of permutations for [`two_sample_energy`].
pub const DEFAULT_PERMUTATIONS: usize = 500;

/// Energy-distance two-sample test with a permutation p-value
/// `(1 + #{T_perm ≥ T})/(n_perm + 1)`.
///
/// The statistic is `n₁n₂/(n₁+n₂)·(2E|X−Y| − E|X−X'| − E|Y−Y'|)` with
/// V-statistic means. Permutation `k` is drawn from `trial_rng(seed, k)`.
pub fn two_sample_energy(xs: &[C64], ys: &[C64], n_perm: usize, seed: u64) -> Result<TestReport> {
    let (n1, n2) = (xs.len(), ys.len());
    if n1 < 50 || n2 < 50 {
        return Err(Error::SampleSize(format!("energy test needs ≥ 50 per sample, got {n1} and {n2}")));
    }
    let pooled: Vec<C64> = xs.iter().chain(ys).copied().collect();
    let n = pooled.len();
    // Packed strict upper triangle, row i holding j > i.
    let mut dist = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            dist.push((pooled[i] - pooled[j]).norm());
        }
    }
    let stat = |labels: &[u8]| -> f64 {
        let mut sums = [0.0f64; 3];
        let mut k = 0;
        for i in 0..n {
            let li = labels[i] as usize;
            for j in i + 1..n {
                sums[li + labels[j] as usize] += dist[k];
                k += 1;
            }
        }
        let (a, b) = (n1 as f64, n2 as f64);
        let e = 2.0 * sums[1] / (a * b) - 2.0 * sums[0] / (a * a) - 2.0 * sums[2] / (b * b);
        a * b / (a + b) * e
    };
    let labels: Vec<u8> = (0..n).map(|i| u8::from(i >= n1)).collect();
    let observed = stat(&labels);
    let exceed = (0..n_perm as u64)
        .into_par_iter()
        .map(|k| {
            let mut l = labels.clone();
            l.shuffle(&mut trial_rng(seed, k));
            usize::from(stat(&l) >= observed)
        })
        .sum::<usize>();
    Ok(TestReport {
        statistic: observed,
        p_value: (1 + exceed) as f64 / (n_perm + 1) as f64,
        method: TestMethod::EnergyPermutation,
        n1,
        n2,
    })
}

/// Kolmogorov survival function `Q(λ) = 2Σ(−1)^{k−1}e^{−2k²λ²}`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let t = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        s += if k % 2 == 1 { t } else { -t };
        if t < 1e-16 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov–Smirnov test on the moduli `|x|`, `|y|`, with the
/// asymptotic p-value.
pub fn ks_radial(xs: &[C64], ys: &[C64]) -> Result<TestReport> {
    let (n1, n2) = (xs.len(), ys.len());
    if n1 == 0 || n2 == 0 {
        return Err(Error::SampleSize("KS test needs non-empty samples".into()));
    }
    let sorted = |v: &[C64]| {
        let mut r: Vec<f64> = v.iter().map(|z| z.norm()).collect();
        r.sort_by(f64::total_cmp);
        r
    };
    let (a, b) = (sorted(xs), sorted(ys));
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < n1 && j < n2 {
        let t = a[i].min(b[j]);
        while i < n1 && a[i] <= t {
            i += 1;
        }
        while j < n2 && b[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n1 as f64 - j as f64 / n2 as f64).abs());
    }
    let ne = (n1 * n2) as f64 / (n1 + n2) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok(TestReport { statistic: d, p_value: kolmogorov_q(lambda), method: TestMethod::KsRadial, n1, n2 })
}

/// Mean and standard error of the number of points with `|z| < radius` per set.
pub fn zero_counts_in_disk<S: AsRef<[C64]>>(zero_sets: &[S], radius: f64) -> (f64, f64) {
    let counts: Vec<f64> = zero_sets
        .iter()
        .map(|s| s.as_ref().iter().filter(|z| z.norm() < radius).count() as f64)
        .collect();
    mean_se(&counts)
}

/// Sample mean and `std/√n`; `(0, 0)` for empty input.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::{ComplexPoly, TaylorFunction};
    use crate::gaf::GafSample;
    use crate::heatflow::HeatFlow;
    use crate::rng::complex_normal;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constant_function_covariance() {
        let g = empirical_covariance(|_, _| Ok(ComplexPoly::one()), &probe_grid(2, 1.0, c(0.0, 0.0)), 100, 1).unwrap();
        assert!(g.estimates.iter().all(|e| *e == c(1.0, 0.0)));
        assert!(g.std_errors.iter().all(|s| *s == 0.0));
        assert!(empirical_covariance(|_, _| Ok(ComplexPoly::one()), &[], 99, 1).is_err());
    }

    #[test]
    fn gaf_covariance_at_origin_and_flowed() {
        let o = c(0.0, 0.0);
        let g = empirical_covariance(|s, k| Ok(GafSample::trial(60, s, k).taylor), &[(o, o)], 4000, 3).unwrap();
        assert!((g.estimates[0] - 1.0).norm() <= 5.0 * g.std_errors[0]);
        let t = c(0.5, 0.0);
        let g = empirical_covariance(|s, k| GafSample::trial(60, s, k).taylor.heat(t), &[(o, o)], 4000, 4).unwrap();
        let want = 1.0 / 0.75f64.sqrt();
        assert!((g.estimates[0] - want).norm() <= 5.0 * g.std_errors[0], "{g:?}");
    }

    #[test]
    fn cross_covariance_of_two_flows() {
        let (t, u) = (c(0.3, 0.0), c(-0.2, 0.1));
        let p = [(c(0.2, 0.1), c(-0.3, 0.2))];
        let g = empirical_cross_covariance(
            |s, k| {
                let f = GafSample::trial(60, s, k).taylor;
                Ok((f.heat(t)?, f.heat(u)?))
            },
            &p,
            4000,
            12,
        )
        .unwrap();
        let want = crate::gaf::covariance_pred(p[0].0, p[0].1, t, u).unwrap();
        assert!((g.estimates[0] - want).norm() <= 5.0 * g.std_errors[0]);
    }

    #[test]
    fn standard_error_scales_as_inverse_root() {
        let p = [(c(0.5, 0.5), c(-0.2, 0.3))];
        let s = |s: u64, k: u64| Ok(GafSample::trial(40, s, k).taylor);
        let a = empirical_covariance(s, &p, 1000, 5).unwrap();
        let b = empirical_covariance(s, &p, 4000, 6).unwrap();
        let r = a.std_errors[0] / b.std_errors[0];
        assert!((1.8..=2.2).contains(&r), "{r}");
    }

    #[test]
    fn covariance_is_deterministic() {
        let p = probe_grid(3, 1.0, c(0.1, 0.0));
        let s = |s: u64, k: u64| Ok(GafSample::trial(40, s, k).taylor);
        assert_eq!(empirical_covariance(s, &p, 200, 8).unwrap(), empirical_covariance(s, &p, 200, 8).unwrap());
    }

    fn planar(n: usize, shift: f64, seed: u64, index: u64) -> Vec<C64> {
        let mut r = trial_rng(seed, index);
        (0..n).map(|_| complex_normal(&mut r) * std::f64::consts::SQRT_2 + shift).collect()
    }

    #[test]
    fn energy_examples() {
        let x = planar(60, 0.0, 1, 0);
        let r = two_sample_energy(&x, &x, 500, 2).unwrap();
        assert!(r.statistic.abs() < 1e-12 && r.p_value == 1.0);
        let r = two_sample_energy(&planar(500, 0.0, 1, 1), &planar(500, 3.0, 1, 2), 200, 3).unwrap();
        assert!(r.p_value < 0.01);
        assert!(two_sample_energy(&x[..40], &x, 10, 0).is_err());
    }

    #[test]
    fn p_value_grid() {
        let r = two_sample_energy(&planar(60, 0.0, 2, 0), &planar(60, 0.0, 2, 1), 500, 1).unwrap();
        let k = r.p_value * 501.0;
        assert!((k - k.round()).abs() < 1e-9 && (1.0..=501.0).contains(&k.round()));
    }

    #[test]
    fn energy_test_calibration() {
        let runs = 200;
        let rejects = (0..runs)
            .filter(|&i| {
                let r = two_sample_energy(&planar(50, 0.0, 10, 2 * i), &planar(50, 0.0, 10, 2 * i + 1), 200, i).unwrap();
                r.p_value < 0.05
            })
            .count();
        let rate = rejects as f64 / runs as f64;
        assert!((0.02..=0.09).contains(&rate), "{rate}");
    }

    #[test]
    fn ks_radial_examples() {
        let x = planar(300, 0.0, 3, 0);
        let y = planar(300, 0.0, 3, 1);
        assert!(ks_radial(&x, &y).unwrap().p_value > 0.001);
        let big: Vec<C64> = y.iter().map(|z| z * 2.0).collect();
        assert!(ks_radial(&x, &big).unwrap().p_value < 1e-6);
        assert_eq!(ks_radial(&x, &x).unwrap().statistic, 0.0);
    }

    #[test]
    fn zero_counts() {
        let empty: Vec<Vec<C64>> = vec![];
        assert_eq!(zero_counts_in_disk(&empty, 1.0), (0.0, 0.0));
        let sets = vec![vec![c(0.1, 0.0), c(2.0, 0.0)], vec![c(0.5, 0.5)], vec![]];
        let (m, _) = zero_counts_in_disk(&sets, 1.0);
        assert!((m - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn gaf_unit_disk_intensity() {
        let sets: Vec<Vec<C64>> = (0..400u64)
            .map(|k| {
                let t: TaylorFunction = GafSample::trial(60, 77, k).taylor;
                crate::zeros::weyl_roots(&t).unwrap().zeros
            })
            .collect();
        let (m, se) = zero_counts_in_disk(&sets, 1.0);
        assert!((m - 1.0).abs() <= 5.0 * se, "{m} {se}");
    }
}
