//! Zeros of `e^{−τD²/2} sin πz²` tracked numerically and compared with
//! `±√((arctan(2πτ)/(2π) + n)(1 + 4π²τ²))`.

use gafheat::heatflow::{sin_pi_z2_sum, sinpisq_zero};
use gafheat::zeros::{track_zero, TrackControl};
use gafheat::C64;

fn main() -> gafheat::Result<()> {
    let f = sin_pi_z2_sum();
    let nodes: Vec<C64> = (0..=10).map(|k| C64::new(0.014 * k as f64, 0.0)).collect();
    for n in 1..=4i64 {
        let start = C64::new((n as f64).sqrt(), 0.0);
        let t = track_zero(&f, start, &nodes, &TrackControl::default())?;
        let worst = t
            .at_nodes()
            .iter()
            .map(|&(tau, z)| (z - sinpisq_zero(n, 1, tau).unwrap()).norm())
            .fold(0.0, f64::max);
        let (tau, z) = t.last();
        println!("n = {n}: z({:.3}) = {z:.6}  [{}]  max deviation {worst:.1e}", tau.re, t.status.as_str());
    }
    Ok(())
}
