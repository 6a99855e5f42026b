//! Gaussian analytic function samples, conditioning, `T_a`, `V_τ`, and the
//! anchored-zero drift experiment.
//!
//! `V_τF(z) = (1−|τ|²)^{1/4} e^{τ̄z²/2} (e^{−τD²/2}F)(z√(1−|τ|²))`. The
//! conjugate `τ̄` in the Gaussian factor is what makes the covariance of
//! `V_τG` equal `e^{zw̄}` for complex `τ`; for real `τ` it is immaterial.

use crate::funcs::{ExpQuadPoly, TaylorFunction, Weighted};
use crate::heatflow::{HeatDomain, HeatFlow};
use crate::rng::{complex_normal, derive_seed, trial_rng};
use crate::zeros::{track_zero, weyl_roots, TrackControl, TrackStatus};
use crate::{Error, Result, C64};
use rayon::prelude::*;

/// A truncated GAF `Σ_{n≤N} ξ_n z^n/√n!`.
#[derive(Debug, Clone, PartialEq)]
pub struct GafSample {
    pub taylor: TaylorFunction,
    pub n_max: usize,
    pub seed: u64,
}

impl GafSample {
    /// Sample number `index` of the stream keyed by `seed`.
    pub fn trial(n_max: usize, seed: u64, index: u64) -> Self {
        let mut rng = trial_rng(seed, index);
        let xi = (0..=n_max).map(|_| complex_normal(&mut rng)).collect();
        Self { taylor: TaylorFunction::with_growth(xi, 2.0, 0.5), n_max, seed }
    }

    pub fn xi(&self) -> &[C64] {
        self.taylor.weyl()
    }
}

/// Coefficients `ξ_0..ξ_N`, deterministic in `seed`.
pub fn sample_gaf(n_max: usize, seed: u64) -> GafSample {
    GafSample::trial(n_max, seed, 0)
}

/// `T_a` applied to a GAF with `ξ₀ = 0`: a GAF conditioned to vanish at `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedGaf {
    pub base: GafSample,
    pub anchor: C64,
    pub repr: Weighted<TaylorFunction>,
}

/// Sets `ξ₀ = 0` (evaluation at 0 is `ξ₀`) and translates with `T_a`.
pub fn condition_at(g: &GafSample, a: C64) -> ConditionedGaf {
    let mut w = g.taylor.weyl().to_vec();
    w[0] = C64::new(0.0, 0.0);
    let base = GafSample { taylor: TaylorFunction::with_growth(w, 2.0, 0.5), ..g.clone() };
    let repr = ta_weighted(Weighted::identity(base.taylor.clone()), a);
    ConditionedGaf { base, anchor: a, repr }
}

fn ta_weighted<T>(w: Weighted<T>, a: C64) -> Weighted<T> {
    let mut out = w.shift(-a);
    out.lin += a.conj();
    out.constant -= C64::new(a.norm_sqr() * 0.5, 0.0);
    out
}

/// `T_aF(z) = e^{−|a|²/2} e^{āz} F(z − a)`.
pub fn apply_ta(f: &ExpQuadPoly, a: C64) -> ExpQuadPoly {
    let mut out = f.shift(-a);
    out.lin += a.conj();
    out.constant -= C64::new(a.norm_sqr() * 0.5, 0.0);
    out
}

/// `T_a` on a wrapped function.
pub fn apply_ta_weighted<T: Clone>(f: &Weighted<T>, a: C64) -> Weighted<T> {
    ta_weighted(f.clone(), a)
}

fn vtau_check(tau: C64) -> Result<f64> {
    let s = 1.0 - tau.norm_sqr();
    if s <= 0.0 {
        return Err(Error::Domain { tau_abs: tau.norm(), radius: 1.0, sigma: 0.5 });
    }
    Ok(s)
}

/// Functions on which `V_τ` acts.
pub trait Vtau {
    type Output;
    fn vtau(&self, tau: C64) -> Result<Self::Output>;
}

impl Vtau for ExpQuadPoly {
    type Output = ExpQuadPoly;
    fn vtau(&self, tau: C64) -> Result<ExpQuadPoly> {
        let s = vtau_check(tau)?;
        let mut g = self.heat(tau)?.scale_argument(C64::new(s.sqrt(), 0.0));
        g.quad += tau.conj();
        g.constant += C64::new(0.25 * s.ln(), 0.0);
        Ok(g)
    }
}

impl<T: HeatFlow> Vtau for Weighted<T> {
    type Output = Weighted<T::Flowed>;
    fn vtau(&self, tau: C64) -> Result<Weighted<T::Flowed>> {
        let s = vtau_check(tau)?;
        let mut g = self.heat(tau)?.scale_argument(C64::new(s.sqrt(), 0.0));
        g.quad += tau.conj();
        g.constant += C64::new(0.25 * s.ln(), 0.0);
        Ok(g)
    }
}

impl Vtau for TaylorFunction {
    type Output = Weighted<TaylorFunction>;
    fn vtau(&self, tau: C64) -> Result<Weighted<TaylorFunction>> {
        HeatDomain::for_taylor(self).check(tau)?;
        Weighted::identity(self.clone()).vtau(tau)
    }
}

pub fn apply_vtau<F: Vtau + ?Sized>(f: &F, tau: C64) -> Result<F::Output> {
    f.vtau(tau)
}

fn check_disk(t: C64) -> Result<()> {
    if t.norm() >= 1.0 {
        return Err(Error::Domain { tau_abs: t.norm(), radius: 1.0, sigma: 0.5 });
    }
    Ok(())
}

/// `E[G_τ(z) conj(G_σ(w))]` for the flowed GAF `G_τ = e^{−τD²/2}G`:
/// `(1−τσ̄)^{−1/2} exp(−(z²σ̄ + w̄²τ)/(2(1−τσ̄))) exp(zw̄/(1−τσ̄))`.
pub fn covariance_pred(z: C64, w: C64, tau: C64, sigma: C64) -> Result<C64> {
    check_disk(tau)?;
    check_disk(sigma)?;
    let den = C64::new(1.0, 0.0) - tau * sigma.conj();
    if den.norm() < 1e-14 {
        return Err(Error::SingularFlow(den.norm()));
    }
    let wb = w.conj();
    Ok(den.sqrt().inv() * (-(z * z * sigma.conj() + wb * wb * tau) / (den * 2.0) + z * wb / den).exp())
}

/// `E[V_τG(z) conj(V_σG(w))]`:
/// `R^{1/2} exp(zw̄R) exp(½z²(τ̄−σ̄)/(1−τσ̄) + ½w̄²(σ−τ)/(1−τσ̄))` with
/// `R = √(1−|τ|²)√(1−|σ|²)/(1−τσ̄)`.
pub fn covariance_q_pred(z: C64, w: C64, tau: C64, sigma: C64) -> Result<C64> {
    check_disk(tau)?;
    check_disk(sigma)?;
    let den = C64::new(1.0, 0.0) - tau * sigma.conj();
    if den.norm() < 1e-14 {
        return Err(Error::SingularFlow(den.norm()));
    }
    let r = C64::new((1.0 - tau.norm_sqr()).sqrt() * (1.0 - sigma.norm_sqr()).sqrt(), 0.0) / den;
    let wb = w.conj();
    let e = z * wb * r + (z * z * (tau.conj() - sigma.conj()) + wb * wb * (sigma - tau)) / (den * 2.0);
    Ok(r.sqrt() * e.exp())
}

/// Outcome of [`residual_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub anchor: C64,
    pub tau: f64,
    /// `z^a(τ) − a − τā` for every completed trial, in trial order.
    pub residuals: Vec<C64>,
    /// Status of every trial; trials that did not complete are excluded
    /// from `residuals`.
    pub statuses: Vec<TrackStatus>,
}

impl ResidualReport {
    pub fn aborted(&self) -> usize {
        self.statuses.iter().filter(|s| **s != TrackStatus::Completed).count()
    }
}

/// Seed of the sample stream used for anchor `a`.
pub fn anchor_seed(seed: u64, a: C64) -> u64 {
    derive_seed(derive_seed(seed, a.re.to_bits()), a.im.to_bits())
}

/// Tracks the zero of `e^{−τD²/2}G^a` starting at `a` over `M` conditioned
/// GAFs and returns the residuals `z^a(τ) − a − τā`.
///
/// Each anchor draws from its own stream ([`anchor_seed`]), so samples for
/// different anchors are independent. Trials run in parallel; results are in
/// trial order.
pub fn residual_experiment(a: C64, tau: f64, trials: usize, n_max: usize, seed: u64) -> Result<ResidualReport> {
    if tau.abs() >= 1.0 {
        return Err(Error::Domain { tau_abs: tau.abs(), radius: 1.0, sigma: 0.5 });
    }
    let s = anchor_seed(seed, a);
    let path = [C64::new(0.0, 0.0), C64::new(tau, 0.0)];
    let ctrl = TrackControl::default();
    let out: Vec<(TrackStatus, C64)> = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let g = condition_at(&GafSample::trial(n_max, s, k), a);
            match track_zero(&g.repr, a, &path, &ctrl) {
                Ok(t) => (t.status, t.last().1),
                Err(_) => (TrackStatus::NewtonFail, C64::new(f64::NAN, f64::NAN)),
            }
        })
        .collect();
    let drift = a + a.conj() * tau;
    Ok(ResidualReport {
        anchor: a,
        tau,
        residuals: out
            .iter()
            .filter(|(st, _)| *st == TrackStatus::Completed)
            .map(|(_, z)| z - drift)
            .collect(),
        statuses: out.iter().map(|(st, _)| *st).collect(),
    })
}

/// Comparison of zeros of two flowed truncations inside `|z| ≤ K`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationReport {
    pub count_small: usize,
    pub count_large: usize,
    pub max_displacement: f64,
    /// Zeros in the disk without a partner within `match_tol`.
    pub unmatched: Vec<C64>,
}

/// Zeros of `e^{−τD²/2}W_N` for `N ∈ {n_small, n_large}` inside `|z| ≤ k`,
/// each paired with its nearest neighbour in the other set.
pub fn truncation_zero_agreement(
    g: &GafSample,
    tau: C64,
    k: f64,
    n_small: usize,
    n_large: usize,
) -> Result<TruncationReport> {
    if n_small > n_large || n_large > g.n_max {
        return Err(Error::InvalidArgument(format!(
            "need n_small ≤ n_large ≤ n_max, got {n_small}, {n_large}, {}",
            g.n_max
        )));
    }
    let zeros_at = |n: usize| -> Result<Vec<C64>> {
        let t = g.taylor.truncate(n);
        let f = heat_truncation(&t, tau)?;
        Ok(weyl_roots(&f)?.zeros)
    };
    let zs = zeros_at(n_small)?;
    let zl = zeros_at(n_large)?;
    let match_tol = 1e-3;
    let mut max_d: f64 = 0.0;
    let mut unmatched = Vec::new();
    let mut pair = |from: &[C64], to: &[C64]| {
        for &z in from.iter().filter(|z| z.norm() <= k) {
            let d = to.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
            if d <= match_tol {
                max_d = max_d.max(d);
            } else {
                unmatched.push(z);
            }
        }
    };
    pair(&zs, &zl);
    pair(&zl, &zs);
    Ok(TruncationReport {
        count_small: zs.iter().filter(|z| z.norm() <= k).count(),
        count_large: zl.iter().filter(|z| z.norm() <= k).count(),
        max_displacement: max_d,
        unmatched,
    })
}

/// A truncation is a polynomial, but its flow is admitted only inside the
/// GAF radius so that the result approximates the flowed GAF.
fn heat_truncation(t: &TaylorFunction, tau: C64) -> Result<TaylorFunction> {
    crate::heatflow::heat_taylor(t, tau, &HeatDomain::new(0.5))
}
