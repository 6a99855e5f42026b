use super::{Analytic, Derivs, EXP_CAP};
use crate::{Error, Result, C64};

/// `exp(quad·z²/2 + lin·z + constant) · inner(scale·z + offset)`.
///
/// Carries Gaussian prefactors and affine changes of variable on top of a
/// function that is not itself in the closed class (a truncated GAF, say).
#[derive(Debug, Clone, PartialEq)]
pub struct Weighted<T> {
    pub quad: C64,
    pub lin: C64,
    pub constant: C64,
    pub scale: C64,
    pub offset: C64,
    pub inner: T,
}

impl<T> Weighted<T> {
    pub fn identity(inner: T) -> Self {
        let zero = C64::new(0.0, 0.0);
        Self { quad: zero, lin: zero, constant: zero, scale: C64::new(1.0, 0.0), offset: zero, inner }
    }

    pub fn inner_arg(&self, z: C64) -> C64 {
        self.scale * z + self.offset
    }

    pub fn exponent(&self, z: C64) -> C64 {
        self.quad * z * z * 0.5 + self.lin * z + self.constant
    }

    /// `G(z) = F(λz)`.
    pub fn scale_argument(mut self, lambda: C64) -> Self {
        self.quad *= lambda * lambda;
        self.lin *= lambda;
        self.scale *= lambda;
        self
    }

    /// `G(z) = F(z + β)`.
    pub fn shift(mut self, beta: C64) -> Self {
        self.constant += self.quad * beta * beta * 0.5 + self.lin * beta;
        self.lin += self.quad * beta;
        self.offset += self.scale * beta;
        self
    }
}

impl<T: Analytic> Analytic for Weighted<T> {
    fn derivs(&self, z: C64) -> Result<Derivs> {
        let e = self.exponent(z);
        if !(e.re.abs() <= EXP_CAP) {
            return Err(Error::Overflow { re: e.re.abs(), cap: EXP_CAP });
        }
        let e = e.exp();
        let h = self.inner.derivs(self.inner_arg(z))?;
        let (v, v1, v2) = (h.value, h.d1 * self.scale, h.d2 * self.scale * self.scale);
        let g = self.quad * z + self.lin;
        Ok(Derivs {
            value: e * v,
            d1: e * (v1 + g * v),
            d2: e * (v2 + g * v1 * 2.0 + (g * g + self.quad) * v),
        })
    }

    fn magnitude(&self, z: C64) -> f64 {
        let re = self.exponent(z).re.min(EXP_CAP);
        re.exp() * self.inner.magnitude(self.inner_arg(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::ComplexPoly;

    #[test]
    fn matches_direct_formula() {
        let p = ComplexPoly::from_real(&[1.0, 2.0, -1.0]);
        let mut w = Weighted::identity(p.clone());
        w.quad = C64::new(0.2, 0.1);
        w.lin = C64::new(-0.3, 0.4);
        w.constant = C64::new(0.1, 0.0);
        w.scale = C64::new(0.8, -0.6);
        w.offset = C64::new(1.0, 1.0);
        let w2 = w.clone().shift(C64::new(0.3, -0.2)).scale_argument(C64::new(1.1, 0.2));
        for k in 0..6 {
            let z = C64::new(0.3 * k as f64 - 0.7, 0.2 * k as f64 - 0.4);
            let direct = w.exponent(z).exp() * p.eval(w.scale * z + w.offset);
            assert!((w.eval(z).unwrap() - direct).norm() < 1e-12 * direct.norm());
            let moved = w.eval(C64::new(1.1, 0.2) * z + C64::new(0.3, -0.2)).unwrap();
            assert!((w2.eval(z).unwrap() - moved).norm() < 1e-12 * moved.norm());
        }
    }
}
