//! Covariance of `V_τG` and `V_σG` under the disk isometry `φ(τ) = (pτ+q)/(q̄τ+p̄)`.

use gafheat::gaf::covariance_q_pred;
use gafheat::metaplectic::hyperbolic_phi_psi;
use gafheat::C64;

fn main() -> gafheat::Result<()> {
    let s: f64 = 0.8;
    let p = C64::from_polar(s.cosh(), 0.3);
    let q = C64::from_polar(s.sinh(), -1.2);
    let (z, w) = (C64::new(0.4, -0.3), C64::new(-0.7, 0.5));
    for (tau, sigma) in [
        (C64::new(0.0, 0.0), C64::new(0.5, 0.0)),
        (C64::new(0.3, 0.4), C64::new(-0.2, 0.6)),
        (C64::new(-0.8, 0.1), C64::new(0.1, -0.85)),
    ] {
        let (pt, st) = hyperbolic_phi_psi(p, q, tau);
        let (ps, ss) = hyperbolic_phi_psi(p, q, sigma);
        let lhs = covariance_q_pred(st * z, ss * w, pt, ps)?;
        let rhs = (ss / st).sqrt() * covariance_q_pred(z, w, tau, sigma)?;
        println!("tau {tau:.2} -> {pt:.3}, sigma {sigma:.2} -> {ps:.3}: |lhs − rhs| = {:.1e}", (lhs - rhs).norm());
    }
    Ok(())
}
