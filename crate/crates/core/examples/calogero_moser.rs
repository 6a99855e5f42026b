//! Zeros of a flowed polynomial move with velocity `Σ_{k≠j} 1/(z_j − z_k)` and
//! acceleration `−2Σ_{k≠j} (z_j − z_k)^{−3}`. Both are compared against
//! finite differences of tracked zeros.

use gafheat::funcs::ComplexPoly;
use gafheat::zeros::{acceleration, track_zero, velocity_poly, TrackControl};
use gafheat::C64;

fn main() -> gafheat::Result<()> {
    let roots = [
        C64::new(1.0, 0.5),
        C64::new(-1.2, 0.3),
        C64::new(0.2, -1.4),
        C64::new(2.0, -0.8),
        C64::new(-0.4, 1.9),
    ];
    let p = ComplexPoly::from_roots(&roots);
    let h = 1e-3;
    let at = |z0: C64, t: f64| -> gafheat::Result<C64> {
        let path = [C64::new(0.0, 0.0), C64::new(t, 0.0)];
        Ok(track_zero(&p, z0, &path, &TrackControl::default())?.last().1)
    };
    println!("{:>3} {:>24} {:>10} {:>10}", "j", "z''", "|dv|", "|da|");
    for (j, &z0) in roots.iter().enumerate() {
        let (zp, zm) = (at(z0, h)?, at(z0, -h)?);
        let v_fd = (zp - zm) / (2.0 * h);
        let a_fd = (zp - z0 * 2.0 + zm) / (h * h);
        let a = acceleration(&roots, j)?;
        let dv = (v_fd - velocity_poly(&roots, j)?).norm();
        println!("{j:>3} {:>24.6} {dv:>10.1e} {:>10.1e}", a, (a_fd - a).norm());
    }
    Ok(())
}
