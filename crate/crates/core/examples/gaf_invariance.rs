//! `V_τG(z) = (1−|τ|²)^{1/4} e^{τ̄z²/2} (e^{−τD²/2}G)(√(1−|τ|²) z)` is again a
//! GAF: its empirical covariance matches `e^{zw̄}` for every `|τ| < 1`.

use gafheat::gaf::{GafSample, Vtau};
use gafheat::stats::empirical_covariance;
use gafheat::C64;

fn main() -> gafheat::Result<()> {
    let pts = [C64::new(0.0, 0.0), C64::new(0.8, 0.0), C64::new(-0.5, 0.6)];
    let probes: Vec<(C64, C64)> = pts.iter().flat_map(|&z| pts.iter().map(move |&w| (z, w))).collect();
    for tau in [C64::new(0.0, 0.0), C64::new(0.5, 0.0), C64::new(0.3, -0.6)] {
        let grid = empirical_covariance(|s, k| GafSample::trial(100, s, k).taylor.vtau(tau), &probes, 3000, 42)?;
        let (frac, worst) = grid.fraction_within(5.0, |z, w| Ok((z * w.conj()).exp()));
        println!("tau = {tau}: {:.0}% of probes within 5 SE, worst {worst:.2} SE", 100.0 * frac);
    }
    Ok(())
}
