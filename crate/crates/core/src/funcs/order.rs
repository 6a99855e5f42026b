use super::{ln_factorial, TaylorFunction};
use crate::{Error, Result};

/// Order and type `(ρ̂, σ̂)` from the coefficient tail `n ∈ [n_max/2, n_max]`.
///
/// With `y_n = log(1/|a_n|)/n` and `x_n = log(n!)/n`, an entire function of
/// order `ρ` and type `σ` has `y_n ≈ x_n/ρ − log(σρ)/ρ` along the extremal
/// subsequence. The least-squares line through the window gives `1/ρ` as its
/// slope and `σ = e^{−ρ·intercept}/ρ`. Zero coefficients are skipped; an empty
/// tail on a nonzero function means a polynomial and yields `(0, 0)`.
pub fn estimate_order_type(f: &TaylorFunction) -> Result<(f64, f64)> {
    let n_max = f.n_max();
    if f.weyl().iter().all(|c| c.norm() == 0.0) {
        return Err(Error::Degenerate("all coefficients are zero".into()));
    }
    let lo = (n_max / 2).max(1);
    let pts: Vec<(f64, f64)> = (lo..=n_max)
        .filter_map(|n| {
            let la = f.ln_abs_ordinary(n);
            la.is_finite().then(|| {
                let nf = n as f64;
                (ln_factorial(n) / nf, -la / nf)
            })
        })
        .collect();
    if pts.is_empty() {
        return Ok((0.0, 0.0));
    }
    if pts.len() < 8 {
        return Err(Error::Degenerate(format!(
            "only {} nonzero coefficients in the tail window",
            pts.len()
        )));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    if !(slope > 0.0) {
        return Err(Error::Degenerate("coefficients do not decay superexponentially".into()));
    }
    let intercept = my - slope * mx;
    let rho = 1.0 / slope;
    let sigma = (-rho * intercept).exp() / rho;
    Ok((rho, sigma))
}
