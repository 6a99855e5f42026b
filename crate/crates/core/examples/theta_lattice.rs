//! The flow moves `ϑ(·;σ)` to `ϑ(·;σ − 2πiτ)`, so its zeros stay on the
//! lattice `m + ½ + (n + ½)σ'` with the sheared period `σ' = σ − 2πiτ`.

use gafheat::heatflow::{theta_coeffs, theta_lattice_point, HeatFlow};
use gafheat::zeros::weyl_roots;
use gafheat::C64;
use std::f64::consts::PI;

fn main() -> gafheat::Result<()> {
    let sigma = C64::new(0.0, 1.0);
    let f = theta_coeffs(sigma, 250)?;
    for tau in [0.0, 0.02, 0.04] {
        let shifted = sigma - C64::new(0.0, 2.0 * PI * tau);
        let zeros = weyl_roots(&f.heat(C64::new(tau, 0.0))?)?.zeros;
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for z in zeros.iter().filter(|z| z.norm() <= 1.8) {
            let d = (-3..=3)
                .flat_map(|m| (-3..=3).map(move |n| theta_lattice_point(m, n, shifted)))
                .map(|p| (z - p).norm())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
            count += 1;
        }
        println!("tau {tau:.2}: sigma' = {shifted:.4}, {count} zeros in |z| <= 1.8, max lattice distance {worst:.1e}");
    }
    Ok(())
}
