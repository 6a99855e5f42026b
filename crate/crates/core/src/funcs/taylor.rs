use super::{estimate_order_type, ln_factorial, Analytic, ComplexPoly, Derivs};
use crate::{Result, C64};

/// Truncated power series `Σ_{n ≤ n_max} c_n z^n/√n!` in the Weyl basis,
/// with order/type metadata of the underlying entire function.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorFunction {
    weyl: Vec<C64>,
    est_order: f64,
    est_type: f64,
}

impl TaylorFunction {
    /// Builds from Weyl coefficients and estimates order and type from the
    /// tail. Short or all-zero inputs are treated as polynomials.
    pub fn from_weyl(weyl: Vec<C64>) -> Self {
        let mut f = Self::with_growth(weyl, 0.0, 0.0);
        if f.n_max() >= 32 {
            if let Ok((rho, sigma)) = estimate_order_type(&f) {
                f.est_order = rho;
                f.est_type = sigma;
            }
        }
        f
    }

    /// Builds with known order and type (used for families whose growth is
    /// known exactly, such as GAF samples and theta functions).
    pub fn with_growth(mut weyl: Vec<C64>, order: f64, ty: f64) -> Self {
        if weyl.is_empty() {
            weyl.push(C64::new(0.0, 0.0));
        }
        Self { weyl, est_order: order.max(0.0), est_type: ty.max(0.0) }
    }

    /// From ordinary coefficients `a_n` (`c_n = a_n √n!`).
    pub fn from_ordinary(coeffs: &[C64], order: f64, ty: f64) -> Self {
        let weyl = coeffs
            .iter()
            .enumerate()
            .map(|(n, &a)| a * (0.5 * ln_factorial(n)).exp())
            .collect();
        Self::with_growth(weyl, order, ty)
    }

    pub fn from_poly(p: &ComplexPoly) -> Self {
        Self::from_ordinary(p.coeffs(), 0.0, 0.0)
    }

    pub fn weyl(&self) -> &[C64] {
        &self.weyl
    }

    pub fn n_max(&self) -> usize {
        self.weyl.len() - 1
    }

    pub fn est_order(&self) -> f64 {
        self.est_order
    }

    pub fn est_type(&self) -> f64 {
        self.est_type
    }

    /// Type relevant to the heat flow: zero below order 2, infinite above.
    pub fn heat_sigma(&self) -> f64 {
        if self.est_order < 1.9 {
            0.0
        } else if self.est_order > 2.1 {
            f64::INFINITY
        } else {
            self.est_type
        }
    }

    /// Copy with replaced growth metadata.
    pub fn set_growth(mut self, order: f64, ty: f64) -> Self {
        self.est_order = order.max(0.0);
        self.est_type = ty.max(0.0);
        self
    }

    /// Copy truncated (or zero-padded) to degree `n`.
    pub fn truncate(&self, n: usize) -> Self {
        let mut w = self.weyl.clone();
        w.resize(n + 1, C64::new(0.0, 0.0));
        Self { weyl: w, ..*self }
    }

    /// `ln|a_n|`, or `−∞` for a zero coefficient.
    pub fn ln_abs_ordinary(&self, n: usize) -> f64 {
        match self.weyl.get(n) {
            Some(c) if c.norm() > 0.0 => c.norm().ln() - 0.5 * ln_factorial(n),
            _ => f64::NEG_INFINITY,
        }
    }

    /// Ordinary coefficient `a_n`; underflows to zero rather than overflowing.
    pub fn ordinary(&self, n: usize) -> C64 {
        match self.weyl.get(n) {
            Some(c) if c.norm() > 0.0 => {
                C64::from_polar(self.ln_abs_ordinary(n).exp(), c.arg())
            }
            _ => C64::new(0.0, 0.0),
        }
    }

    /// Plain partial sum at `z`.
    pub fn eval_sum(&self, z: C64) -> C64 {
        let mut t = C64::new(1.0, 0.0);
        let mut s = C64::new(0.0, 0.0);
        for (n, &c) in self.weyl.iter().enumerate() {
            s += c * t;
            t = t * z / ((n + 1) as f64).sqrt();
        }
        s
    }

    /// The truncated function as an explicit polynomial (for moderate degree).
    pub fn to_poly(&self) -> ComplexPoly {
        ComplexPoly::new((0..=self.n_max()).map(|n| self.ordinary(n)).collect())
    }
}

impl Analytic for TaylorFunction {
    /// Derivatives by coefficient shift: the Weyl coefficients of `F'` are
    /// `c_{m+1}√(m+1)` and of `F''` are `c_{m+2}√((m+1)(m+2))`.
    fn derivs(&self, z: C64) -> Result<Derivs> {
        let w = &self.weyl;
        let zero = C64::new(0.0, 0.0);
        let (mut v, mut d1, mut d2) = (zero, zero, zero);
        let mut t = C64::new(1.0, 0.0);
        for m in 0..w.len() {
            let s1 = ((m + 1) as f64).sqrt();
            v += w[m] * t;
            if m + 1 < w.len() {
                d1 += w[m + 1] * s1 * t;
            }
            if m + 2 < w.len() {
                d2 += w[m + 2] * (s1 * ((m + 2) as f64).sqrt()) * t;
            }
            t = t * z / s1;
        }
        Ok(Derivs { value: v, d1, d2 })
    }

    fn magnitude(&self, z: C64) -> f64 {
        let r = z.norm();
        let mut t = 1.0;
        let mut s = 0.0;
        for (n, c) in self.weyl.iter().enumerate() {
            s += c.norm() * t;
            t *= r / ((n + 1) as f64).sqrt();
        }
        s
    }
}
