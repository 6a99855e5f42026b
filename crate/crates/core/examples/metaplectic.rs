//! The action `V(A)` of `SL(2;ℝ)` on the closed class is a representation up
//! to sign. A rotation by `2π` acts as `−1`.

use gafheat::funcs::{ComplexPoly, ExpQuadPoly};
use gafheat::metaplectic::{atau_matrix, compose_check, GroupElement};
use gafheat::C64;
use std::f64::consts::PI;

fn main() -> gafheat::Result<()> {
    let f = ExpQuadPoly::new(
        C64::new(0.1, 0.05),
        C64::new(0.3, -0.2),
        C64::new(0.0, 0.0),
        ComplexPoly::from_real(&[1.0, 0.5, -0.3]),
    );

    for theta in [0.0, PI, 2.0 * PI, 4.0 * PI] {
        println!("R({:.2}) sign {:+}", theta, GroupElement::rotation(theta).sign);
    }

    let half = GroupElement::rotation(PI);
    let r = compose_check(&half, &half, &f)?;
    println!("V(R(pi))V(R(pi)) = {:+}·V(R(2pi) principal), rel. error {:.1e}", r.sign, r.rel_error);

    let g1 = GroupElement::rotation(0.7).mul(&atau_matrix(C64::new(0.3, 0.2))?);
    let g2 = GroupElement::rotation(-1.9).mul(&atau_matrix(C64::new(-0.4, 0.1))?);
    let r = compose_check(&g1, &g2, &f)?;
    println!("random pair: matches {} sign {:+} rel. error {:.1e}", r.matches, r.sign, r.rel_error);

    let fac = g1.mul(&g2).factor();
    let back = fac.reconstruct()?;
    let m = g1.mul(&g2).mat;
    let err = (0..4).map(|k| (back[k / 2][k % 2] - m[k / 2][k % 2]).abs()).fold(0.0, f64::max);
    println!("factor: theta {:.4}, tau {:.4}; reconstruction error {err:.1e}", fac.theta, fac.tau);
    Ok(())
}
