use super::{HeatDomain, HeatFlow};
use crate::funcs::{Analytic, Derivs, TaylorFunction};
use crate::{Error, Result, C64};

/// `e^{−τD²/2}` of a truncated series, kept as the pair `(F, τ)` and summed
/// as `Σ c_n P_n(z)/√n!` with `P_n = e^{−τD²/2}zⁿ = τ^{n/2}He_n(z/√τ)`.
///
/// The same polynomial as [`super::heat_taylor`] on the same coefficients,
/// but evaluated through `P_{n+1} = zP_n − nτP_{n−1}` instead of from
/// expanded Weyl coefficients. For `|τ|` near the radius the expanded
/// coefficients grow like `(1−|τ|²)^{−n/2}` and their sum cancels to far
/// below double precision away from the origin; the termwise sum has no such
/// cancellation. Flowing again adds flow times.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatedSeries {
    pub base: TaylorFunction,
    pub tau: C64,
}

impl HeatedSeries {
    pub fn new(base: TaylorFunction) -> Self {
        Self { base, tau: C64::new(0.0, 0.0) }
    }

    /// Calls `visit(n, q_n)` with `q_n = P_n(z)/√n!` for `n = 0..=N`.
    fn scan(&self, z: C64, mut visit: impl FnMut(usize, C64)) {
        let n = self.base.weyl().len();
        let mut prev = C64::new(0.0, 0.0);
        let mut cur = C64::new(1.0, 0.0);
        for k in 0..n {
            visit(k, cur);
            let next = (z * cur - self.tau * (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
            prev = cur;
            cur = next;
        }
    }
}

impl Analytic for HeatedSeries {
    /// `D P_n = nP_{n−1}`, so `F'` has weights `c_n√n` on `q_{n−1}` and
    /// `F''` weights `c_n√(n(n−1))` on `q_{n−2}`.
    fn derivs(&self, z: C64) -> Result<Derivs> {
        let c = self.base.weyl();
        let zero = C64::new(0.0, 0.0);
        let (mut v, mut d1, mut d2) = (zero, zero, zero);
        self.scan(z, |k, q| {
            v += c[k] * q;
            if k + 1 < c.len() {
                d1 += c[k + 1] * ((k + 1) as f64).sqrt() * q;
            }
            if k + 2 < c.len() {
                d2 += c[k + 2] * (((k + 1) * (k + 2)) as f64).sqrt() * q;
            }
        });
        if !(v.is_finite() && d1.is_finite() && d2.is_finite()) {
            return Err(Error::Overflow { re: f64::INFINITY, cap: crate::funcs::EXP_CAP });
        }
        Ok(Derivs { value: v, d1, d2 })
    }

    fn magnitude(&self, z: C64) -> f64 {
        let c = self.base.weyl();
        let mut s = 0.0;
        self.scan(z, |k, q| s += c[k].norm() * q.norm());
        s
    }
}

impl HeatFlow for HeatedSeries {
    type Flowed = HeatedSeries;
    fn heat(&self, tau: C64) -> Result<HeatedSeries> {
        let total = self.tau + tau;
        HeatDomain::for_taylor(&self.base).check(total)?;
        Ok(Self { base: self.base.clone(), tau: total })
    }

    /// Radius for the additional flow time, measured from `self.tau`.
    fn flow_radius(&self) -> f64 {
        (HeatDomain::for_taylor(&self.base).radius() - self.tau.norm()).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaf::sample_gaf;
    use crate::zeros::{newton_polish, track_zero, TrackControl};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn agrees_with_expanded_coefficients() {
        let g = sample_gaf(60, 4).taylor;
        let tau = c(0.3, -0.2);
        let a = g.heat(tau).unwrap();
        let b = HeatedSeries::new(g).heat(tau).unwrap();
        for k in 0..10 {
            let z = C64::from_polar(0.25 * k as f64, 0.9 * k as f64);
            let (x, y) = (a.derivs(z).unwrap(), b.derivs(z).unwrap());
            let s = a.magnitude(z);
            assert!((x.value - y.value).norm() < 1e-12 * s);
            assert!((x.d1 - y.d1).norm() < 1e-11 * s * (1.0 + z.norm()));
            assert!((x.d2 - y.d2).norm() < 1e-10 * s * (1.0 + z.norm()).powi(2));
        }
    }

    #[test]
    fn flow_times_add() {
        let g = HeatedSeries::new(sample_gaf(20, 1).taylor);
        let a = g.heat(c(0.1, 0.0)).unwrap().heat(c(0.2, 0.1)).unwrap();
        assert!((a.tau - c(0.3, 0.1)).norm() < 1e-15);
        assert!(g.heat(c(0.96, 0.0)).is_err());
    }

    #[test]
    fn hermite_at_unit_time() {
        let f = TaylorFunction::from_weyl(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(6f64.sqrt(), 0.0)]);
        // A cubic has order 0, so every τ is admitted.
        let g = HeatedSeries::new(f).heat(c(1.0, 0.0));
        let z = c(0.4, 0.7);
        let v = g.unwrap().eval(z).unwrap();
        assert!((v - (z * z * z - z * 3.0)).norm() < 1e-14);
    }

    #[test]
    fn tracks_where_expanded_coefficients_lose_precision() {
        let g = sample_gaf(300, 1).taylor;
        let z0 = newton_polish(&g, c(2.37781902343613, -0.3074717730538279)).unwrap();
        let path: Vec<C64> = (0..=90).map(|k| c(0.01 * k as f64, 0.0)).collect();
        let h = HeatedSeries::new(g);
        let t = track_zero(&h, z0, &path, &TrackControl::default()).unwrap();
        assert!(t.completed(), "{:?} at {:?}", t.status, t.last());
        assert!(t.last().1.im.abs() < 0.2);
    }
}
