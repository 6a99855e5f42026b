//! Velocity formulas for zeros of functions with a Gaussian or exponential
//! factor, and the third `τ`-derivative from moment sums.

use gafheat::funcs::{ComplexPoly, ExpQuadPoly};
use gafheat::zeros::{
    aux_from_function, find_roots, third_derivative, track_zero, velocity_poly, velocity_s1, velocity_s2,
    zero_velocity_simple, Case, MomentTable, TrackControl,
};
use gafheat::C64;

fn main() -> gafheat::Result<()> {
    let c = |re, im| C64::new(re, im);
    let roots = [c(0.6, 0.2), c(-0.9, 0.7), c(0.1, -1.1), c(1.4, 1.0)];
    let p = ComplexPoly::from_roots(&roots);
    let base = c(0.3, 0.9);

    // exp(bz)·p has genus 1, exp(az²/2 + bz)·p genus 2.
    let g1 = ExpQuadPoly::new(c(0.0, 0.0), c(0.4, -0.2), c(0.0, 0.0), p.clone());
    let g2 = ExpQuadPoly::new(c(0.3, 0.1), c(0.4, -0.2), c(0.0, 0.0), p.clone());
    let (a1, _) = aux_from_function(&g1, base)?;
    let (b1, b2) = aux_from_function(&g2, base)?;
    println!("{:>3} {:>10} {:>10} {:>10}", "j", "S0", "S1", "S2");
    for j in 0..roots.len() {
        let e0 = (velocity_poly(&roots, j)? - zero_velocity_simple(&p, roots[j])?).norm();
        let e1 = (velocity_s1(&roots, j, a1, base)? - zero_velocity_simple(&g1, roots[j])?).norm();
        let e2 = (velocity_s2(&roots, j, b1, b2, base)? - zero_velocity_simple(&g2, roots[j])?).norm();
        println!("{j:>3} {e0:>10.1e} {e1:>10.1e} {e2:>10.1e}");
    }

    // z''' = 18M(5) − 6M(2)M(3) for a polynomial, against a centred difference.
    let j = 0;
    let zero = c(0.0, 0.0);
    let mt = MomentTable::from_zeros(&roots, j, 5, Case::S0, zero, zero)?;
    let exact = third_derivative(Case::S0, &mt, zero)?;
    let h = 2e-3;
    let z = |t: f64| -> gafheat::Result<C64> {
        let path = [zero, c(t, 0.0)];
        Ok(track_zero(&p, roots[j], &path, &TrackControl::default())?.last().1)
    };
    let fd = (z(2.0 * h)? - z(h)? * 2.0 + z(-h)? * 2.0 - z(-2.0 * h)?) / (2.0 * h * h * h);
    println!("z''' = {exact:.6}, finite difference {fd:.6}");
    println!("zeros recovered: {}", find_roots(&p)?.total());
    Ok(())
}
