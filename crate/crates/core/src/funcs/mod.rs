//! Function representations shared by every other module.

mod expquad;
mod hermite;
mod order;
mod poly;
mod sum;
mod taylor;
mod weighted;

pub use expquad::{eval_expquadpoly, scale_argument, taylor_of_expquadpoly, ExpQuadPoly, EXP_CAP};
pub use hermite::{hermite_eval, HermiteCache};
pub use order::estimate_order_type;
pub use poly::ComplexPoly;
pub use sum::ExpQuadSum;
pub use taylor::TaylorFunction;
pub use weighted::Weighted;

use crate::{Result, C64};
use std::sync::OnceLock;

/// Value and first two derivatives of a holomorphic function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivs {
    pub value: C64,
    pub d1: C64,
    pub d2: C64,
}

/// A holomorphic function that can be evaluated together with `F'` and `F''`.
///
/// `magnitude` is a reference size at `z` (e.g. `Σ|a_k||z|^k`): residuals and
/// simplicity thresholds are taken relative to it.
pub trait Analytic {
    fn derivs(&self, z: C64) -> Result<Derivs>;
    fn magnitude(&self, z: C64) -> f64;
    fn eval(&self, z: C64) -> Result<C64> {
        Ok(self.derivs(z)?.value)
    }
}

impl<T: Analytic + ?Sized> Analytic for &T {
    fn derivs(&self, z: C64) -> Result<Derivs> {
        (**self).derivs(z)
    }
    fn magnitude(&self, z: C64) -> f64 {
        (**self).magnitude(z)
    }
}

const LN_FACT_TABLE: usize = 8192;

fn ln_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACT_TABLE);
        let mut acc = 0.0;
        t.push(0.0);
        for k in 1..LN_FACT_TABLE {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln n!`, tabulated below 8192 and from Stirling's series above.
pub fn ln_factorial(n: usize) -> f64 {
    if n < LN_FACT_TABLE {
        return ln_fact_table()[n];
    }
    let x = n as f64 + 1.0;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
}

/// `√(n!/k!)` for `k ≤ n`, via logarithms.
pub(crate) fn sqrt_fact_ratio(n: usize, k: usize) -> f64 {
    (0.5 * (ln_factorial(n) - ln_factorial(k))).exp()
}
