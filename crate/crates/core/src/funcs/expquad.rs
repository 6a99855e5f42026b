use super::{sqrt_fact_ratio, Analytic, ComplexPoly, Derivs, TaylorFunction};
use crate::{Error, Result, C64};

/// Largest admissible `|Re|` of an exponent before evaluation reports overflow.
pub const EXP_CAP: f64 = 700.0;

/// `exp(quad·z²/2 + lin·z + constant)·poly(z)`.
///
/// Closed under the heat flow, argument scaling, translations and the
/// metaplectic action, so every operation on it is exact up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpQuadPoly {
    pub quad: C64,
    pub lin: C64,
    pub constant: C64,
    pub poly: ComplexPoly,
}

impl ExpQuadPoly {
    pub fn new(quad: C64, lin: C64, constant: C64, poly: ComplexPoly) -> Self {
        Self { quad, lin, constant, poly }
    }

    pub fn from_poly(poly: ComplexPoly) -> Self {
        let zero = C64::new(0.0, 0.0);
        Self::new(zero, zero, zero, poly)
    }

    /// `exp(quad·z²/2 + lin·z)`.
    pub fn gaussian(quad: C64, lin: C64) -> Self {
        Self::new(quad, lin, C64::new(0.0, 0.0), ComplexPoly::one())
    }

    pub fn exponent(&self, z: C64) -> C64 {
        self.quad * z * z * 0.5 + self.lin * z + self.constant
    }

    fn checked_exp(&self, z: C64) -> Result<C64> {
        let e = self.exponent(z);
        if !(e.re.abs() <= EXP_CAP) {
            return Err(Error::Overflow { re: e.re.abs(), cap: EXP_CAP });
        }
        Ok(e.exp())
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        Ok(self.checked_exp(z)? * self.poly.eval(z))
    }

    /// `G(z) = F(λz)`.
    pub fn scale_argument(&self, lambda: C64) -> Self {
        Self {
            quad: self.quad * lambda * lambda,
            lin: self.lin * lambda,
            constant: self.constant,
            poly: self.poly.scale_arg(lambda),
        }
    }

    /// `G(z) = F(z + β)`.
    pub fn shift(&self, beta: C64) -> Self {
        Self {
            quad: self.quad,
            lin: self.lin + self.quad * beta,
            constant: self.constant + self.quad * beta * beta * 0.5 + self.lin * beta,
            poly: self.poly.shift(beta),
        }
    }

    /// Multiplies by `e^{s}`.
    pub fn times_exp(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.constant += s;
        out
    }

    /// Zeros of the function are exactly the zeros of `poly`.
    pub fn poly(&self) -> &ComplexPoly {
        &self.poly
    }

    /// Growth of the function as an entire function: order 2 with type
    /// `|quad|/2`, order 1 with type `|lin|`, or a polynomial.
    pub fn growth(&self) -> (f64, f64) {
        if self.quad.norm() > 0.0 {
            (2.0, self.quad.norm() * 0.5)
        } else if self.lin.norm() > 0.0 {
            (1.0, self.lin.norm())
        } else {
            (0.0, 0.0)
        }
    }
}

pub fn eval_expquadpoly(f: &ExpQuadPoly, z: C64) -> Result<C64> {
    f.eval(z)
}

pub fn scale_argument(f: &ExpQuadPoly, lambda: C64) -> ExpQuadPoly {
    f.scale_argument(lambda)
}

impl Analytic for ExpQuadPoly {
    fn derivs(&self, z: C64) -> Result<Derivs> {
        let e = self.checked_exp(z)?;
        let p = self.poly.eval_derivs(z);
        let g = self.quad * z + self.lin;
        Ok(Derivs {
            value: e * p.value,
            d1: e * (p.d1 + g * p.value),
            d2: e * (p.d2 + g * p.d1 * 2.0 + (g * g + self.quad) * p.value),
        })
    }

    fn magnitude(&self, z: C64) -> f64 {
        let re = self.exponent(z).re.min(EXP_CAP);
        re.exp() * self.poly.abs_sum(z)
    }
}

/// Weyl-basis Taylor coefficients `c_0..c_{n_max}` of `F`.
///
/// The Gaussian factor obeys `c_{n+1} = (b c_n + a √n c_{n−1})/√(n+1)`; the
/// product with `poly` uses `c_n(F) = Σ_k p_k c_{n−k} √(n!/(n−k)!)`, and
/// `e^{constant}` is applied last in log form so large constants fail with
/// the offending index instead of producing infinities.
pub fn taylor_of_expquadpoly(f: &ExpQuadPoly, n_max: usize) -> Result<TaylorFunction> {
    let deg = f.poly.degree();
    if n_max < deg {
        return Err(Error::InvalidArgument(format!(
            "n_max = {n_max} is below the polynomial degree {deg}"
        )));
    }
    let (a, b) = (f.quad, f.lin);
    let mut g = vec![C64::new(0.0, 0.0); n_max + 1];
    g[0] = C64::new(1.0, 0.0);
    for n in 0..n_max {
        let prev = if n > 0 { g[n - 1] * (n as f64).sqrt() } else { C64::new(0.0, 0.0) };
        g[n + 1] = (b * g[n] + a * prev) / ((n + 1) as f64).sqrt();
        if !g[n + 1].is_finite() {
            return Err(Error::CoefficientOverflow { index: n + 1 });
        }
    }
    let p = f.poly.coeffs();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut s = C64::new(0.0, 0.0);
        for (k, &pk) in p.iter().enumerate().take(n + 1) {
            if pk != C64::new(0.0, 0.0) {
                s += pk * g[n - k] * sqrt_fact_ratio(n, n - k);
            }
        }
        if s == C64::new(0.0, 0.0) {
            out.push(s);
            continue;
        }
        let log_mag = f.constant.re + s.norm().ln();
        if !log_mag.is_finite() || log_mag > EXP_CAP {
            return Err(Error::CoefficientOverflow { index: n });
        }
        out.push(s * f.constant.exp());
    }
    let (order, ty) = f.growth();
    Ok(TaylorFunction::with_growth(out, order, ty))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constant_function_is_one() {
        let f = ExpQuadPoly::from_poly(ComplexPoly::one());
        assert_eq!(f.eval(c(5.0, 1.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn gaussian_at_one() {
        let f = ExpQuadPoly::gaussian(c(1.0, 0.0), c(0.0, 0.0));
        assert!((f.eval(c(1.0, 0.0)).unwrap() - c(0.5f64.exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn overflow_is_an_error() {
        let f = ExpQuadPoly::gaussian(c(2.0, 0.0), c(0.0, 0.0));
        assert!(matches!(f.eval(c(30.0, 0.0)), Err(Error::Overflow { .. })));
    }

    #[test]
    fn scale_argument_examples() {
        let z2 = ExpQuadPoly::from_poly(ComplexPoly::monomial(2));
        let g = z2.scale_argument(c(2.0, 0.0));
        assert_eq!(g.poly.coeffs(), &[c(0.0, 0.0), c(0.0, 0.0), c(4.0, 0.0)]);
        let e = ExpQuadPoly::gaussian(c(1.0, 0.0), c(0.0, 0.0)).scale_argument(c(0.0, 1.0));
        assert!((e.quad - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let f = ExpQuadPoly::new(
            c(0.3, -0.2),
            c(-0.5, 0.1),
            c(0.2, 0.4),
            ComplexPoly::from_real(&[1.0, -2.0, 0.5]),
        );
        let z = c(0.4, 0.7);
        let h = 1e-5;
        let d = f.derivs(z).unwrap();
        let fd1 = (f.eval(z + h).unwrap() - f.eval(z - h).unwrap()) / (2.0 * h);
        let fd2 = (f.eval(z + h).unwrap() - 2.0 * d.value + f.eval(z - h).unwrap()) / (h * h);
        assert!((d.d1 - fd1).norm() < 1e-8);
        assert!((d.d2 - fd2).norm() < 1e-4);
    }

    #[test]
    fn shift_matches_pointwise() {
        let f = ExpQuadPoly::new(c(0.2, 0.3), c(1.0, -1.0), c(0.0, 0.5), ComplexPoly::from_real(&[0.0, 1.0, 1.0]));
        let beta = c(-0.7, 0.2);
        let g = f.shift(beta);
        for k in 0..8 {
            let z = c(0.25 * k as f64 - 1.0, 0.5 - 0.1 * k as f64);
            let want = f.eval(z + beta).unwrap();
            assert!((g.eval(z).unwrap() - want).norm() < 1e-12 * want.norm());
        }
    }

    #[test]
    fn taylor_of_linear_poly() {
        let f = ExpQuadPoly::from_poly(ComplexPoly::from_real(&[1.0, 1.0]));
        let t = taylor_of_expquadpoly(&f, 10).unwrap();
        assert_eq!(t.weyl()[0], c(1.0, 0.0));
        assert!((t.weyl()[1] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(t.weyl()[2..].iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn taylor_of_gaussian_has_even_terms() {
        let f = ExpQuadPoly::gaussian(c(1.0, 0.0), c(0.0, 0.0));
        let t = taylor_of_expquadpoly(&f, 8).unwrap();
        let mut fact = 1.0;
        for m in 0..=4usize {
            if m > 0 {
                fact *= m as f64;
            }
            let want = 1.0 / (2f64.powi(m as i32) * fact);
            assert!((t.ordinary(2 * m) - c(want, 0.0)).norm() < 1e-15);
            if m < 4 {
                assert_eq!(t.ordinary(2 * m + 1), c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn taylor_round_trip() {
        let f = ExpQuadPoly::new(
            c(0.4, 0.2),
            c(-0.3, 0.6),
            c(0.1, -0.2),
            ComplexPoly::from_real(&[2.0, 0.0, -1.0, 0.3]),
        );
        let t = taylor_of_expquadpoly(&f, 80).unwrap();
        for k in 0..12 {
            let th = k as f64 * 0.5;
            let z = c(th.cos(), th.sin()) * (0.08 * k as f64);
            let want = f.eval(z).unwrap();
            assert!((t.eval_sum(z) - want).norm() < 1e-10 * want.norm());
        }
    }

    #[test]
    fn taylor_overflow_names_index() {
        let f = ExpQuadPoly::new(c(0.0, 0.0), c(0.0, 0.0), c(699.0, 0.0), ComplexPoly::from_real(&[0.0, 0.0, 1e5]));
        match taylor_of_expquadpoly(&f, 4) {
            Err(Error::CoefficientOverflow { index }) => assert_eq!(index, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
