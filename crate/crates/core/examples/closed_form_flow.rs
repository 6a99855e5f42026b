//! Flowing members of the closed class `exp(az²/2 + bz + c)·p(z)`.
//!
//! `e^{z²/2}` at `τ = −3/4` becomes `2e^{2z²}`; the flow of `z³` at `τ = 1`
//! is the Hermite polynomial `He₃ = z³ − 3z`.

use gafheat::funcs::{ComplexPoly, ExpQuadPoly};
use gafheat::heatflow::{heat_poly, HeatFlow};
use gafheat::C64;

fn main() -> gafheat::Result<()> {
    let c = |re, im| C64::new(re, im);

    let f = ExpQuadPoly::gaussian(c(1.0, 0.0), c(0.0, 0.0));
    for t in [0.0, -0.25, -0.5, -0.75, 0.5] {
        let g = f.heat(c(t, 0.0))?;
        let amp = g.constant.exp() * g.poly.coeffs()[0];
        println!("tau {t:>5}: quad {:.4}  amplitude {:.4}", g.quad.re, amp.re);
    }

    let cubic = heat_poly(&ComplexPoly::monomial(3), c(1.0, 0.0));
    println!("heat(z^3, 1) coefficients: {:?}", cubic.coeffs().iter().map(|z| z.re).collect::<Vec<_>>());

    // Semigroup: two steps agree with one.
    let h = ExpQuadPoly::new(c(0.3, 0.1), c(0.2, -0.4), c(0.0, 0.0), ComplexPoly::from_real(&[1.0, -0.5, 0.0, 0.25]));
    let (t1, t2) = (c(0.2, 0.15), c(-0.1, 0.3));
    let z = c(0.7, -0.4);
    let two = h.heat(t1)?.heat(t2)?.eval(z)?;
    let one = h.heat(t1 + t2)?.eval(z)?;
    println!("semigroup at z = {z}: {two:.12} vs {one:.12}");
    Ok(())
}
