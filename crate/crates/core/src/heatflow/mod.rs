//! The heat operator `e^{−τD²/2}`.
//!
//! Closed forms act on [`ComplexPoly`], [`ExpQuadPoly`] and their sums; the
//! termwise series acts on [`TaylorFunction`]. No `√τ` is ever formed: all
//! series are grouped as polynomials in `τ`.

mod oracles;
mod series;

pub use oracles::{
    exp_sine_sum, exp_sine_taylor, exp_sine_zero, mehler_check, sin_pi_z2_sum, sin_pi_z2_taylor,
    sinpisq_zero, theta_coeffs, theta_eval, theta_lattice_point,
};
pub use series::HeatedSeries;

use crate::funcs::{ComplexPoly, ExpQuadPoly, ExpQuadSum, TaylorFunction, Weighted};
use crate::{Error, Result, C64};
use std::f64::consts::PI;

/// Admissible flow times for a function of type `sigma0` (order 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatDomain {
    pub sigma0: f64,
    pub tau_max: f64,
    pub safety: f64,
}

impl HeatDomain {
    pub const DEFAULT_SAFETY: f64 = 0.95;

    pub fn new(sigma0: f64) -> Self {
        Self::with_safety(sigma0, Self::DEFAULT_SAFETY)
    }

    pub fn with_safety(sigma0: f64, safety: f64) -> Self {
        let tau_max = if sigma0 == 0.0 { f64::INFINITY } else { 1.0 / (2.0 * sigma0) };
        Self { sigma0, tau_max, safety }
    }

    pub fn for_taylor(f: &TaylorFunction) -> Self {
        Self::new(f.heat_sigma())
    }

    /// `safety · tau_max`.
    pub fn radius(&self) -> f64 {
        self.safety * self.tau_max
    }

    pub fn admits(&self, tau: C64) -> bool {
        tau.norm() < self.radius()
    }

    pub fn check(&self, tau: C64) -> Result<()> {
        if self.admits(tau) {
            Ok(())
        } else {
            Err(Error::Domain { tau_abs: tau.norm(), radius: self.radius(), sigma: self.sigma0 })
        }
    }
}

/// Functions that can be pushed through the heat flow.
pub trait HeatFlow {
    type Flowed;
    fn heat(&self, tau: C64) -> Result<Self::Flowed>;
    /// Radius in `|τ|` inside which [`HeatFlow::heat`] is admitted.
    fn flow_radius(&self) -> f64;
}

/// `Σ_n a_n Σ_m (−τ/2)^m n!/(m!(n−2m)!) z^{n−2m}`; exact for polynomials.
pub fn heat_poly(p: &ComplexPoly, tau: C64) -> ComplexPoly {
    let a = p.coeffs();
    let n = a.len();
    let half = -tau * 0.5;
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut w = C64::new(1.0, 0.0);
        let mut m = 0;
        while k + 2 * m < n {
            *slot += a[k + 2 * m] * w;
            let j = (k + 2 * m) as f64;
            w *= half * ((j + 1.0) * (j + 2.0) / (m + 1) as f64);
            m += 1;
        }
    }
    ComplexPoly::new(out)
}

fn flow_denominator(quad: C64, tau: C64) -> Result<C64> {
    if (quad * tau).norm() >= 1.0 {
        return Err(Error::Domain {
            tau_abs: tau.norm(),
            radius: 1.0 / quad.norm(),
            sigma: quad.norm() * 0.5,
        });
    }
    let d = C64::new(1.0, 0.0) + quad * tau;
    if d.norm() < 1e-12 {
        return Err(Error::SingularFlow(d.norm()));
    }
    Ok(d)
}

fn heat_expquad_with_log(f: &ExpQuadPoly, tau: C64, d: C64, log_d: C64) -> ExpQuadPoly {
    let (a, b) = (f.quad, f.lin);
    let inner = heat_poly(&f.poly, tau / d);
    ExpQuadPoly {
        quad: a / d,
        lin: b / d,
        constant: f.constant - tau * b * b / (d * 2.0) - log_d * 0.5,
        poly: inner.compose_affine(d.inv(), -b * tau / d),
    }
}

/// Closed-form flow of `exp(az²/2 + bz + c)·p(z)`.
///
/// With `d = 1 + aτ`: quad `a/d`, lin `b/d`, constant gains
/// `−τb²/(2d) − ½ log d` (principal branch), and the polynomial becomes
/// `heat_poly(p, τ/d)` evaluated at `(z − bτ)/d`.
pub fn heat_expquadpoly(f: &ExpQuadPoly, tau: C64) -> Result<ExpQuadPoly> {
    let d = flow_denominator(f.quad, tau)?;
    Ok(heat_expquad_with_log(f, tau, d, d.ln()))
}

/// Flows along a path of `τ` values, continuing `log(1 + aτ)` across the
/// branch cut so the constant term varies continuously. The branch at the
/// first point is the principal one.
pub fn heat_expquadpoly_path(f: &ExpQuadPoly, taus: &[C64]) -> Result<Vec<ExpQuadPoly>> {
    let mut out = Vec::with_capacity(taus.len());
    let mut prev: Option<C64> = None;
    for &tau in taus {
        let d = flow_denominator(f.quad, tau)?;
        let mut l = d.ln();
        if let Some(p) = prev {
            let k = ((p.im - l.im) / (2.0 * PI)).round();
            l.im += 2.0 * PI * k;
        }
        prev = Some(l);
        out.push(heat_expquad_with_log(f, tau, d, l));
    }
    Ok(out)
}

/// Termwise flow in the Weyl basis:
/// `b_k = Σ_m c_{k+2m} (−τ/2)^m √((k+2m)!/k!)/m!`.
///
/// Each inner sum stops once the weights are decreasing and the remaining
/// terms fall below `1e−18` of the accumulated absolute sum. The output type
/// is `σ/(1 − 2σ|τ|)`.
pub fn heat_taylor(f: &TaylorFunction, tau: C64, domain: &HeatDomain) -> Result<TaylorFunction> {
    domain.check(tau)?;
    let c = f.weyl();
    let n = c.len();
    let cmax = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let half = -tau * 0.5;
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut w = C64::new(1.0, 0.0);
        let mut acc = C64::new(0.0, 0.0);
        let mut abs_acc = 0.0;
        let mut m = 0;
        while k + 2 * m < n {
            let term = c[k + 2 * m] * w;
            acc += term;
            abs_acc += term.norm();
            let j = (k + 2 * m) as f64;
            let ratio = half * (((j + 1.0) * (j + 2.0)).sqrt() / (m + 1) as f64);
            w *= ratio;
            m += 1;
            if ratio.norm() < 1.0 && w.norm() * cmax <= 1e-18 * abs_acc {
                break;
            }
        }
        *slot = acc;
    }
    let sigma = f.est_type();
    let new_type = if f.heat_sigma() == 0.0 {
        sigma
    } else {
        sigma / (1.0 - 2.0 * sigma * tau.norm())
    };
    Ok(TaylorFunction::with_growth(out, f.est_order(), new_type))
}

impl HeatFlow for ComplexPoly {
    type Flowed = ComplexPoly;
    fn heat(&self, tau: C64) -> Result<ComplexPoly> {
        Ok(heat_poly(self, tau))
    }
    fn flow_radius(&self) -> f64 {
        f64::INFINITY
    }
}

impl HeatFlow for ExpQuadPoly {
    type Flowed = ExpQuadPoly;
    fn heat(&self, tau: C64) -> Result<ExpQuadPoly> {
        heat_expquadpoly(self, tau)
    }
    fn flow_radius(&self) -> f64 {
        1.0 / self.quad.norm()
    }
}

impl HeatFlow for ExpQuadSum {
    type Flowed = ExpQuadSum;
    fn heat(&self, tau: C64) -> Result<ExpQuadSum> {
        Ok(ExpQuadSum::new(
            self.terms.iter().map(|t| heat_expquadpoly(t, tau)).collect::<Result<_>>()?,
        ))
    }
    fn flow_radius(&self) -> f64 {
        self.terms.iter().map(|t| t.flow_radius()).fold(f64::INFINITY, f64::min)
    }
}

impl HeatFlow for TaylorFunction {
    type Flowed = TaylorFunction;
    fn heat(&self, tau: C64) -> Result<TaylorFunction> {
        heat_taylor(self, tau, &HeatDomain::for_taylor(self))
    }
    fn flow_radius(&self) -> f64 {
        HeatDomain::for_taylor(self).radius()
    }
}

/// The Gaussian factor moves exactly as in the closed form and the inner
/// function is flowed to `τλ²/(1 + aτ)` with argument `λ(z − bτ)/(1 + aτ) + μ`.
impl<T: HeatFlow> HeatFlow for Weighted<T> {
    type Flowed = Weighted<T::Flowed>;
    fn heat(&self, tau: C64) -> Result<Weighted<T::Flowed>> {
        let r = self.flow_radius();
        if tau.norm() >= r {
            return Err(Error::Domain {
                tau_abs: tau.norm(),
                radius: r,
                sigma: if r.is_finite() { 0.5 / r } else { 0.0 },
            });
        }
        let (a, b, lam) = (self.quad, self.lin, self.scale);
        let d = C64::new(1.0, 0.0) + a * tau;
        if d.norm() < 1e-12 {
            return Err(Error::SingularFlow(d.norm()));
        }
        let inner = self.inner.heat(tau * lam * lam / d)?;
        Ok(Weighted {
            quad: a / d,
            lin: b / d,
            constant: self.constant - tau * b * b / (d * 2.0) - d.ln() * 0.5,
            scale: lam / d,
            offset: self.offset - lam * b * tau / d,
            inner,
        })
    }

    /// `min(1/|a|, R/(|λ|² + |a|R))`, which keeps both the Gaussian factor
    /// and the inner flow time `τλ²/(1+aτ)` inside their radii.
    fn flow_radius(&self) -> f64 {
        let a = self.quad.norm();
        let r_in = self.inner.flow_radius();
        let l2 = self.scale.norm_sqr();
        let gauss = if a == 0.0 { f64::INFINITY } else { 1.0 / a };
        let inner = if r_in.is_infinite() {
            gauss
        } else {
            r_in / (l2 + a * r_in)
        };
        gauss.min(inner)
    }
}
