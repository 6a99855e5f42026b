//! Closed-form reference families.

use crate::funcs::{ln_factorial, taylor_of_expquadpoly, ComplexPoly, ExpQuadPoly, ExpQuadSum, TaylorFunction};
use crate::{Error, Result, C64};
use std::f64::consts::PI;

/// Partial Mehler sum `Σ_{n<N} ρ^n He_n(x)He_n(y)/n!` and its closed form
/// `(1−ρ²)^{−1/2} exp(−(ρ²(x²+y²) − 2ρxy)/(2(1−ρ²)))`.
///
/// The sum runs over normalised `He_n/√n!` so large `N` does not overflow.
pub fn mehler_check(x: C64, y: C64, rho: C64, n_terms: usize) -> (C64, C64) {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let (mut hx_prev, mut hx) = (zero, one);
    let (mut hy_prev, mut hy) = (zero, one);
    let mut pw = one;
    let mut lhs = zero;
    for n in 0..n_terms {
        lhs += pw * hx * hy;
        pw *= rho;
        let (sn, s1) = ((n as f64).sqrt(), 1.0 / ((n + 1) as f64).sqrt());
        let nx = (x * hx - hx_prev * sn) * s1;
        let ny = (y * hy - hy_prev * sn) * s1;
        (hx_prev, hx) = (hx, nx);
        (hy_prev, hy) = (hy, ny);
    }
    let r2 = rho * rho;
    let den = one - r2;
    let rhs = den.sqrt().inv() * (-(r2 * (x * x + y * y) - rho * x * y * 2.0) / (den * 2.0)).exp();
    (lhs, rhs)
}

/// Zero of `e^{−τD²/2} sin πz²` continuing `±√n`:
/// `±√((arctan(2πτ)/(2π) + n)(1 + 4π²τ²))`.
pub fn sinpisq_zero(n: i64, sign: i32, tau: C64) -> Result<C64> {
    let radius = 1.0 / (2.0 * PI);
    if tau.norm() >= radius {
        return Err(Error::Domain { tau_abs: tau.norm(), radius, sigma: PI });
    }
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument(format!("sign must be ±1, got {sign}")));
    }
    let t = tau * (2.0 * PI);
    let base = (t.atan() / (2.0 * PI) + n as f64) * (C64::new(1.0, 0.0) + t * t);
    Ok(base.sqrt() * sign as f64)
}

/// Zero `n + τa₁` of the flowed `e^{a₁z} sin πz`.
pub fn exp_sine_zero(n: i64, a1: C64, tau: C64) -> C64 {
    C64::new(n as f64, 0.0) + tau * a1
}

/// `sin πz² = (e^{iπz²} − e^{−iπz²})/(2i)` in the closed class.
pub fn sin_pi_z2_sum() -> ExpQuadSum {
    let half_over_i = C64::new(0.0, -0.5);
    let zero = C64::new(0.0, 0.0);
    ExpQuadSum::new(vec![
        ExpQuadPoly::new(C64::new(0.0, 2.0 * PI), zero, zero, ComplexPoly::constant(half_over_i)),
        ExpQuadPoly::new(C64::new(0.0, -2.0 * PI), zero, zero, ComplexPoly::constant(-half_over_i)),
    ])
}

/// Taylor expansion of `sin πz²`: `a_{4m+2} = (−1)^m π^{2m+1}/(2m+1)!`.
pub fn sin_pi_z2_taylor(n_max: usize) -> TaylorFunction {
    let mut w = vec![C64::new(0.0, 0.0); n_max + 1];
    let mut m = 0usize;
    while 4 * m + 2 <= n_max {
        let n = 4 * m + 2;
        let k = 2 * m + 1;
        let log = k as f64 * PI.ln() - ln_factorial(k) + 0.5 * ln_factorial(n);
        let s = if m % 2 == 0 { 1.0 } else { -1.0 };
        w[n] = C64::new(s * log.exp(), 0.0);
        m += 1;
    }
    TaylorFunction::with_growth(w, 2.0, PI)
}

/// `e^{a₁z} sin πz = (e^{(a₁+iπ)z} − e^{(a₁−iπ)z})/(2i)`.
pub fn exp_sine_sum(a1: C64) -> ExpQuadSum {
    let half_over_i = C64::new(0.0, -0.5);
    let zero = C64::new(0.0, 0.0);
    let ipi = C64::new(0.0, PI);
    ExpQuadSum::new(vec![
        ExpQuadPoly::new(zero, a1 + ipi, zero, ComplexPoly::constant(half_over_i)),
        ExpQuadPoly::new(zero, a1 - ipi, zero, ComplexPoly::constant(-half_over_i)),
    ])
}

/// Taylor expansion of `e^{a₁z} sin πz` to degree `n_max`.
pub fn exp_sine_taylor(a1: C64, n_max: usize) -> Result<TaylorFunction> {
    let terms = exp_sine_sum(a1)
        .terms
        .iter()
        .map(|t| taylor_of_expquadpoly(t, n_max))
        .collect::<Result<Vec<_>>>()?;
    let w = (0..=n_max).map(|n| terms[0].weyl()[n] + terms[1].weyl()[n]).collect();
    Ok(TaylorFunction::with_growth(w, 1.0, (a1 + C64::new(0.0, PI)).norm().max((a1 - C64::new(0.0, PI)).norm())))
}

/// Taylor coefficients of `ϑ(z;σ) = Σ_{n∈ℤ} e^{πiσn²} e^{2πinz}`.
///
/// `c_{2j} = δ_{j0} + 2(−1)^j Σ_{n≥1} exp(πiσn² + 2j log(2πn) − ½ log (2j)!)`.
/// For each `j` the `n`-sum runs past the peak of its summand until terms are
/// below `1e−18` of the largest one and `|q|^{n²} < 1e−18`.
pub fn theta_coeffs(sigma: C64, n_max: usize) -> Result<TaylorFunction> {
    if sigma.im <= 0.0 {
        return Err(Error::InvalidArgument(format!("theta needs Im σ > 0, got {sigma}")));
    }
    let cut = 1e-18f64.ln();
    let mut w = vec![C64::new(0.0, 0.0); n_max + 1];
    for j in 0..=n_max / 2 {
        let jf = j as f64;
        let lf = 0.5 * ln_factorial(2 * j);
        let mut s = C64::new(0.0, 0.0);
        let mut peak = f64::NEG_INFINITY;
        let mut n = 1u64;
        loop {
            let nf = n as f64;
            let e = C64::new(0.0, PI) * sigma * (nf * nf) + 2.0 * jf * (2.0 * PI * nf).ln() - lf;
            peak = peak.max(e.re);
            s += e.exp();
            let gauss_small = -PI * sigma.im * nf * nf < cut;
            if gauss_small && e.re < peak + cut && n > 1 {
                break;
            }
            n += 1;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        w[2 * j] = s * (2.0 * sign) + if j == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    }
    Ok(TaylorFunction::with_growth(w, 2.0, PI / sigma.im))
}

/// Direct evaluation of `ϑ(z;σ)` from the defining series.
pub fn theta_eval(z: C64, sigma: C64) -> Result<C64> {
    if sigma.im <= 0.0 {
        return Err(Error::InvalidArgument(format!("theta needs Im σ > 0, got {sigma}")));
    }
    let mut s = C64::new(1.0, 0.0);
    let mut n = 1i64;
    loop {
        let nf = n as f64;
        let q = (C64::new(0.0, PI) * sigma * (nf * nf)).exp();
        let arg = C64::new(0.0, 2.0 * PI * nf) * z;
        let term = q * (arg.exp() + (-arg).exp());
        s += term;
        if term.norm() < 1e-18 * s.norm().max(1e-300) && n > 2 {
            break;
        }
        n += 1;
        if n > 10_000 {
            break;
        }
    }
    Ok(s)
}

/// Lattice zero `m + nσ + ½ + σ/2` of `ϑ(·;σ)`.
pub fn theta_lattice_point(m: i64, n: i64, sigma: C64) -> C64 {
    C64::new(m as f64 + 0.5, 0.0) + sigma * (n as f64 + 0.5)
}
