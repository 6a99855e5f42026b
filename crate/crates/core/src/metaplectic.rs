//! SL(2;ℝ) in SU(1,1) form and its metaplectic action on the closed class.
//!
//! A matrix `(a, b; c, d)` corresponds to `p = (a−ib+ic+d)/2`,
//! `q = (a+ib+ic−d)/2` with `|p|² − |q|² = 1`. Every element factors as a
//! rotation by `θ = arg p` after the positive symmetric `A_τ`, `τ = q/p`, and
//!
//! ```text
//! V(A)F(z) = ±e^{−iθ/2} [V_τF](e^{−iθ}z).
//! ```
//!
//! The sign is stored per element: it is `+1` for the principal branch of
//! `e^{−iθ/2}` and `−1` for the other one, so that `rotation(2π)` acts as `−I`.

use crate::funcs::{ExpQuadPoly, TaylorFunction, Weighted};
use crate::gaf::Vtau;
use crate::heatflow::HeatFlow;
use crate::{Error, Result, C64};
use std::f64::consts::PI;

pub type Mat2 = [[f64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub mat: Mat2,
    pub p: C64,
    pub q: C64,
    /// Branch of `e^{−iθ/2}` relative to the principal one.
    pub sign: i8,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factorization {
    pub theta: f64,
    pub tau: C64,
}

impl Factorization {
    /// `R_θ · A_τ`.
    pub fn reconstruct(&self) -> Result<Mat2> {
        let a = atau_matrix(self.tau)?;
        Ok(mat_mul(&rotation_matrix(self.theta), &a.mat))
    }
}

pub fn to_su11(mat: &Mat2) -> Result<(C64, C64)> {
    let [[a, b], [c, d]] = *mat;
    let det = a * d - b * c;
    if (det - 1.0).abs() > 1e-10 {
        return Err(Error::Determinant(det));
    }
    let p = C64::new(a + d, c - b) * 0.5;
    let q = C64::new(a - d, b + c) * 0.5;
    debug_assert!((p.norm_sqr() - q.norm_sqr() - 1.0).abs() < 1e-9 * (1.0 + p.norm_sqr()));
    Ok((p, q))
}

fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

fn rotation_matrix(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

impl GroupElement {
    /// Element with sign `+1`.
    pub fn from_matrix(mat: Mat2) -> Result<Self> {
        let (p, q) = to_su11(&mat)?;
        Ok(Self { mat, p, q, sign: 1 })
    }

    pub fn identity() -> Self {
        Self { mat: [[1.0, 0.0], [0.0, 1.0]], p: C64::new(1.0, 0.0), q: C64::new(0.0, 0.0), sign: 1 }
    }

    /// Rotation by `θ`, with the sign of `e^{−iθ/2}` taken from `θ` itself
    /// rather than from the principal `arg p`.
    pub fn rotation(theta: f64) -> Self {
        let mat = rotation_matrix(theta);
        let p = C64::from_polar(1.0, theta);
        let principal = C64::from_polar(1.0, -p.arg() / 2.0);
        let actual = C64::from_polar(1.0, -theta / 2.0);
        let sign = if (principal - actual).norm() < 1.0 { 1 } else { -1 };
        Self { mat, p, q: C64::new(0.0, 0.0), sign }
    }

    /// `diag(e^s, e^{−s})`, i.e. `(p, q) = (cosh s, sinh s)`.
    pub fn diag(s: f64) -> Self {
        Self {
            mat: [[s.exp(), 0.0], [0.0, (-s).exp()]],
            p: C64::new(s.cosh(), 0.0),
            q: C64::new(s.sinh(), 0.0),
            sign: 1,
        }
    }

    /// Matrix product; the result carries sign `+1`.
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        let mat = mat_mul(&self.mat, &other.mat);
        let p = self.p * other.p + self.q * other.q.conj();
        let q = self.p * other.q + self.q * other.p.conj();
        GroupElement { mat, p, q, sign: 1 }
    }

    pub fn factor(&self) -> Factorization {
        Factorization { theta: self.p.arg(), tau: self.q / self.p }
    }

    /// Same element with the opposite branch.
    pub fn negated(&self) -> Self {
        Self { sign: -self.sign, ..*self }
    }
}

pub fn factor(g: &GroupElement) -> Factorization {
    g.factor()
}

/// The positive symmetric element with `q/p = τ`.
pub fn atau_matrix(tau: C64) -> Result<GroupElement> {
    let s2 = 1.0 - tau.norm_sqr();
    if s2 <= 0.0 {
        return Err(Error::Domain { tau_abs: tau.norm(), radius: 1.0, sigma: 0.5 });
    }
    let s = s2.sqrt().recip();
    let mat = [[s * (1.0 + tau.re), s * tau.im], [s * tau.im, s * (1.0 - tau.re)]];
    Ok(GroupElement { mat, p: C64::new(s, 0.0), q: tau * s, sign: 1 })
}

/// Functions the metaplectic operators act on.
pub trait Metaplectic {
    type Output;
    fn apply_va(&self, g: &GroupElement) -> Result<Self::Output>;
}

fn phase(g: &GroupElement) -> (C64, C64) {
    let f = g.factor();
    let mut c = C64::new(0.0, -f.theta / 2.0);
    if g.sign < 0 {
        c += C64::new(0.0, PI);
    }
    (C64::from_polar(1.0, -f.theta), c)
}

impl Metaplectic for ExpQuadPoly {
    type Output = ExpQuadPoly;
    fn apply_va(&self, g: &GroupElement) -> Result<ExpQuadPoly> {
        let (rot, c) = phase(g);
        let mut out = self.vtau(g.factor().tau)?.scale_argument(rot);
        out.constant += c;
        Ok(out)
    }
}

impl<T: HeatFlow> Metaplectic for Weighted<T> {
    type Output = Weighted<T::Flowed>;
    fn apply_va(&self, g: &GroupElement) -> Result<Weighted<T::Flowed>> {
        let (rot, c) = phase(g);
        let mut out = self.vtau(g.factor().tau)?.scale_argument(rot);
        out.constant += c;
        Ok(out)
    }
}

impl Metaplectic for TaylorFunction {
    type Output = Weighted<TaylorFunction>;
    fn apply_va(&self, g: &GroupElement) -> Result<Weighted<TaylorFunction>> {
        let (rot, c) = phase(g);
        let mut out = self.vtau(g.factor().tau)?.scale_argument(rot);
        out.constant += c;
        Ok(out)
    }
}

pub fn apply_va<F: Metaplectic + ?Sized>(f: &F, g: &GroupElement) -> Result<F::Output> {
    f.apply_va(g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionReport {
    pub matches: bool,
    /// `s` with `V(g1)V(g2)F = s·V(g1g2)F`.
    pub sign: i8,
    pub rel_error: f64,
}

/// Tolerance used by [`compose_check`].
pub const COMPOSE_TOL: f64 = 1e-9;

/// Compares `V(g1)V(g2)F` with `V(g1·g2)F` up to a global sign.
///
/// Quadratic and linear exponents are compared directly; the polynomial parts
/// are compared as `e^{const}·poly`, so a constant moved between the two does
/// not count as a mismatch. Domain errors of any intermediate flow propagate.
pub fn compose_check(g1: &GroupElement, g2: &GroupElement, f: &ExpQuadPoly) -> Result<CompositionReport> {
    let lhs = f.apply_va(g2)?.apply_va(g1)?;
    let rhs = f.apply_va(&g1.mul(g2))?;
    let rel = |x: C64, y: C64| (x - y).norm() / (1.0 + y.norm());
    let exp_err = rel(lhs.quad, rhs.quad).max(rel(lhs.lin, rhs.lin));
    let scaled = |e: &ExpQuadPoly| -> Vec<C64> {
        let k = e.constant.exp();
        e.poly.coeffs().iter().map(|c| c * k).collect()
    };
    let (a, b) = (scaled(&lhs), scaled(&rhs));
    let norm = b.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let diff = |s: f64| -> f64 {
        let n = a.len().max(b.len());
        let zero = C64::new(0.0, 0.0);
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(zero) - b.get(i).copied().unwrap_or(zero) * s).norm())
            .fold(0.0, f64::max)
            / norm.max(f64::MIN_POSITIVE)
    };
    let (dp, dm) = (diff(1.0), diff(-1.0));
    let (sign, perr) = if dp <= dm { (1, dp) } else { (-1, dm) };
    let rel_error = perr.max(exp_err);
    Ok(CompositionReport { matches: rel_error < COMPOSE_TOL, sign, rel_error })
}

/// The disk isometry `φ(τ) = (pτ+q)/(q̄τ+p̄)` and the unimodular factor
/// `ψ = (qτ̄+p)/|qτ̄+p|`.
pub fn hyperbolic_phi_psi(p: C64, q: C64, tau: C64) -> (C64, C64) {
    let phi = (p * tau + q) / (q.conj() * tau + p.conj());
    let w = q * tau.conj() + p;
    (phi, w / w.norm())
}

/// Zeros of `V(g)F` from the zeros of `e^{−τD²/2}F` at the factor's `τ`:
/// `z ↦ e^{iθ}z/√(1−|τ|²)`.
pub fn zero_action(g: &GroupElement, zeros: &[C64]) -> Vec<C64> {
    let f = g.factor();
    let k = C64::from_polar((1.0 - f.tau.norm_sqr()).sqrt().recip(), f.theta);
    zeros.iter().map(|z| z * k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::{Analytic, ComplexPoly};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_sl2(rng: &mut ChaCha8Rng, spread: f64) -> GroupElement {
        let th = rng.gen_range(-PI..PI);
        let r = rng.gen_range(0.0..spread);
        let ph = rng.gen_range(-PI..PI);
        let a = atau_matrix(C64::from_polar(r, ph)).unwrap();
        GroupElement::rotation(th).mul(&a)
    }

    #[test]
    fn su11_examples() {
        assert_eq!(to_su11(&[[1.0, 0.0], [0.0, 1.0]]).unwrap(), (c(1.0, 0.0), c(0.0, 0.0)));
        let (p, q) = to_su11(&rotation_matrix(0.7)).unwrap();
        assert!((p - C64::from_polar(1.0, 0.7)).norm() < 1e-15 && q.norm() < 1e-15);
        let s = 0.4f64;
        let (p, q) = to_su11(&[[s.exp(), 0.0], [0.0, (-s).exp()]]).unwrap();
        assert!((p.re - s.cosh()).abs() < 1e-15 && (q.re - s.sinh()).abs() < 1e-15);
        assert!(matches!(to_su11(&[[1.0, 1.0], [0.0, 2.0]]), Err(Error::Determinant(_))));
    }

    #[test]
    fn product_is_homomorphic_and_factor_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let g = random_sl2(&mut rng, 0.9);
            let (p, q) = to_su11(&g.mat).unwrap();
            assert!((p - g.p).norm() < 1e-10 && (q - g.q).norm() < 1e-10);
            assert!((g.p.norm_sqr() - g.q.norm_sqr() - 1.0).abs() < 1e-10);
            let back = g.factor().reconstruct().unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((back[i][j] - g.mat[i][j]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn atau_examples() {
        let a = atau_matrix(c(0.0, 0.0)).unwrap();
        assert_eq!(a.mat, [[1.0, 0.0], [0.0, 1.0]]);
        let s = 0.3f64;
        let a = atau_matrix(c(s.tanh(), 0.0)).unwrap();
        assert!((a.p.re - s.cosh()).abs() < 1e-14 && (a.q.re - s.sinh()).abs() < 1e-14);
        let t = c(0.3, -0.5);
        let m = atau_matrix(t).unwrap().mat;
        let (tr, det) = (m[0][0] + m[1][1], m[0][0] * m[1][1] - m[0][1] * m[1][0]);
        let disc = (tr * tr / 4.0 - det).sqrt();
        let want = ((1.0 + t.norm()) / (1.0 - t.norm())).sqrt();
        assert!((tr / 2.0 + disc - want).abs() < 1e-12 && (tr / 2.0 - disc - 1.0 / want).abs() < 1e-12);
        let f = atau_matrix(t).unwrap().factor();
        assert!(f.theta.abs() < 1e-15 && (f.tau - t).norm() < 1e-15);
        assert!(atau_matrix(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn rotation_action() {
        let f = ExpQuadPoly::from_poly(ComplexPoly::monomial(1));
        let th = 0.9;
        let g = f.apply_va(&GroupElement::rotation(th)).unwrap();
        for k in 0..5 {
            let z = C64::from_polar(0.5 + k as f64, 0.3 * k as f64);
            let want = C64::from_polar(1.0, -th / 2.0) * C64::from_polar(1.0, -th) * z;
            assert!((g.eval(z).unwrap() - want).norm() < 1e-13 * (1.0 + want.norm()));
        }
        assert_eq!(GroupElement::rotation(2.0 * PI).sign, -1);
        assert_eq!(GroupElement::rotation(4.0 * PI).sign, 1);
        let minus = f.apply_va(&GroupElement::rotation(2.0 * PI)).unwrap();
        let z = c(0.4, 0.2);
        assert!((minus.eval(z).unwrap() + z).norm() < 1e-13);
    }

    #[test]
    fn atau_acts_as_vtau() {
        let f = ExpQuadPoly::new(c(0.1, 0.0), c(0.2, 0.1), c(0.0, 0.0), ComplexPoly::from_real(&[0.0, 0.0, 1.0]));
        let t = c(0.35, 0.4);
        let a = f.apply_va(&atau_matrix(t).unwrap()).unwrap();
        let b = f.vtau(t).unwrap();
        assert!((a.quad - b.quad).norm() < 1e-12 && (a.lin - b.lin).norm() < 1e-12);
        assert!((a.constant - b.constant).norm() < 1e-12);
        for (x, y) in a.poly.coeffs().iter().zip(b.poly.coeffs()) {
            assert!((x - y).norm() < 1e-12);
        }
        assert_eq!(f.apply_va(&GroupElement::identity()).unwrap(), f);
    }

    #[test]
    fn composition_up_to_sign() {
        let f = ExpQuadPoly::new(c(0.1, 0.0), c(0.0, 0.0), c(0.0, 0.0), ComplexPoly::monomial(2));
        let id = GroupElement::identity();
        let r = compose_check(&id, &id, &f).unwrap();
        assert!(r.matches && r.sign == 1);
        let r = compose_check(&GroupElement::rotation(2.0 * PI), &id, &f).unwrap();
        assert!(r.matches && r.sign == -1);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let (g1, g2) = (random_sl2(&mut rng, 0.6), random_sl2(&mut rng, 0.6));
            let r = compose_check(&g1, &g2, &f).unwrap();
            assert!(r.matches, "{r:?}");
        }
    }

    #[test]
    fn taylor_action_matches_closed_form() {
        let f = ExpQuadPoly::new(c(0.1, 0.0), c(0.0, 0.0), c(0.0, 0.0), ComplexPoly::monomial(2));
        let t = crate::funcs::taylor_of_expquadpoly(&f, 120).unwrap();
        let g = GroupElement::rotation(1.1).mul(&atau_matrix(c(0.2, 0.3)).unwrap());
        let a = t.apply_va(&g).unwrap();
        let b = f.apply_va(&g).unwrap();
        for k in 0..6 {
            let z = C64::from_polar(0.4 * k as f64, 1.3 * k as f64);
            let want = b.eval(z).unwrap();
            assert!((a.eval(z).unwrap() - want).norm() < 1e-9 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn phi_psi_examples() {
        let (phi, psi) = hyperbolic_phi_psi(c(1.0, 0.0), c(0.0, 0.0), c(0.3, 0.2));
        assert!((phi - c(0.3, 0.2)).norm() < 1e-15 && (psi - c(1.0, 0.0)).norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let g = random_sl2(&mut rng, 0.95);
            let t = C64::from_polar(rng.gen_range(0.0..0.99), rng.gen_range(-PI..PI));
            let (phi, _) = hyperbolic_phi_psi(g.p, g.q, t);
            assert!(phi.norm() < 1.0);
            let lhs = 1.0 - phi.norm_sqr();
            let rhs = (1.0 - t.norm_sqr()) / (g.q * t.conj() + g.p).norm_sqr();
            assert!((lhs - rhs).abs() < 1e-10 * rhs.max(1e-3));
        }
    }

    #[test]
    fn zero_action_examples() {
        let zs = [c(1.0, 0.5), c(-0.3, 2.0)];
        assert_eq!(zero_action(&GroupElement::identity(), &zs), zs.to_vec());
        let t = c(0.6, 0.0);
        let out = zero_action(&atau_matrix(t).unwrap(), &zs);
        assert!((out[0] - zs[0] / 0.8).norm() < 1e-14);
        // zeros of V(g)F from zeros of the flowed F
        let f = ExpQuadPoly::from_poly(ComplexPoly::from_roots(&zs));
        let g = GroupElement::rotation(0.7).mul(&atau_matrix(c(0.2, -0.3)).unwrap());
        let flowed = f.heat(g.factor().tau).unwrap();
        let hz = crate::zeros::find_roots(&flowed.poly).unwrap();
        let v = f.apply_va(&g).unwrap();
        for z in zero_action(&g, &hz.zeros) {
            assert!(v.eval(z).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn quadrature_of_integral_kernel() {
        // V(A)F(z) = ∫ p^{−1/2} exp(½(q̄/p)z² − ½(q/p)w̄² + zw̄/p) F(w) e^{−|w|²} dA(w)/π
        let f = ExpQuadPoly::new(c(0.1, 0.0), c(0.0, 0.0), c(0.0, 0.0), ComplexPoly::monomial(2));
        let g = GroupElement::rotation(0.5).mul(&atau_matrix(c(0.25, 0.15)).unwrap());
        let v = f.apply_va(&g).unwrap();
        let (p, q) = (g.p, g.q);
        let h = 0.05;
        let n = 160i32;
        for z in [c(0.3, -0.2), c(-0.5, 0.4)] {
            let mut acc = C64::new(0.0, 0.0);
            for i in -n..=n {
                for j in -n..=n {
                    let w = c(i as f64 * h, j as f64 * h);
                    let wb = w.conj();
                    let k = (q.conj() / p * z * z * 0.5 - q / p * wb * wb * 0.5 + z * wb / p).exp();
                    acc += k * f.eval(w).unwrap() * (-w.norm_sqr()).exp();
                }
            }
            let got = acc * h * h / PI / p.sqrt();
            let want = v.eval(z).unwrap();
            assert!((got - want).norm() < 1e-3 * want.norm().max(1e-3), "{got} {want}");
        }
    }
}
