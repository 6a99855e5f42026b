use crate::funcs::{ComplexPoly, TaylorFunction};
use crate::{Error, Result, C64};
use std::f64::consts::PI;

/// Zeros of a function with multiplicities, at flow time `source_tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    pub zeros: Vec<C64>,
    pub multiplicities: Vec<usize>,
    pub source_tau: C64,
}

impl ZeroSet {
    /// Groups raw roots whose distance is below `tol·(1 + |z|)`.
    pub fn cluster(roots: &[C64], tol: f64, source_tau: C64) -> Self {
        let mut zeros: Vec<C64> = Vec::new();
        let mut mult: Vec<usize> = Vec::new();
        let mut sums: Vec<C64> = Vec::new();
        for &r in roots {
            match zeros.iter().position(|&z| (z - r).norm() <= tol * (1.0 + z.norm())) {
                Some(i) => {
                    mult[i] += 1;
                    sums[i] += r;
                    zeros[i] = sums[i] / mult[i] as f64;
                }
                None => {
                    zeros.push(r);
                    mult.push(1);
                    sums.push(r);
                }
            }
        }
        let mut idx: Vec<usize> = (0..zeros.len()).collect();
        idx.sort_by(|&a, &b| {
            zeros[a]
                .norm()
                .total_cmp(&zeros[b].norm())
                .then(zeros[a].arg().total_cmp(&zeros[b].arg()))
        });
        Self {
            zeros: idx.iter().map(|&i| zeros[i]).collect(),
            multiplicities: idx.iter().map(|&i| mult[i]).collect(),
            source_tau,
        }
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// Total count including multiplicity.
    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Zeros (with multiplicity) inside the closed disk `|z − center| ≤ r`.
    pub fn count_in_disk(&self, center: C64, r: f64) -> usize {
        self.zeros
            .iter()
            .zip(&self.multiplicities)
            .filter(|(z, _)| (**z - center).norm() <= r)
            .map(|(_, m)| *m)
            .sum()
    }

    pub fn within(&self, r: f64) -> Vec<C64> {
        self.zeros.iter().copied().filter(|z| z.norm() <= r).collect()
    }

    /// Index of the zero closest to `w`.
    pub fn nearest(&self, w: C64) -> Option<usize> {
        (0..self.zeros.len()).min_by(|&a, &b| {
            (self.zeros[a] - w).norm().total_cmp(&(self.zeros[b] - w).norm())
        })
    }
}

/// Value and Newton ratio `p/p'` evaluated without overflow: for `|z| > 1`
/// the reversed polynomial in `1/z` is used. Returns `(ratio, |p|/bound)`
/// where `bound = Σ|a_k||z|^k` (both scaled consistently).
fn newton_ratio(c: &[C64], z: C64) -> (C64, f64, f64) {
    let n = c.len() - 1;
    let zero = C64::new(0.0, 0.0);
    if z.norm() <= 1.0 {
        let (mut p, mut d, mut b) = (zero, zero, 0.0);
        let r = z.norm();
        for &a in c.iter().rev() {
            d = d * z + p;
            p = p * z + a;
            b = b * r + a.norm();
        }
        (p / d, p.norm(), b)
    } else {
        let y = z.inv();
        let r = y.norm();
        let (mut q, mut dq, mut b) = (zero, zero, 0.0);
        for &a in c.iter() {
            dq = dq * y + q;
            q = q * y + a;
            b = b * r + a.norm();
        }
        // p(z) = z^n q(y), p'(z) = z^{n-1}(n q − y q')
        let ratio = z * q / (q * n as f64 - y * dq);
        (ratio, q.norm(), b)
    }
}

/// Initial radii from the upper convex hull of `(k, log|a_k|)`.
fn initial_guesses(c: &[C64]) -> Vec<C64> {
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(k, a)| (k, a.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(c.len() - 1);
    for (e, w) in hull.windows(2).enumerate() {
        let (i, j) = (w[0].0, w[1].0);
        let m = j - i;
        let r = ((w[0].1 - w[1].1) / m as f64).exp();
        for t in 0..m {
            let ang = 2.0 * PI * t as f64 / m as f64 + 0.4 + 1.3 * e as f64;
            out.push(C64::from_polar(r, ang));
        }
    }
    out
}

/// All roots of `p` by Aberth–Ehrlich iteration.
///
/// Gauss–Seidel sweeps (at most 200); a root is frozen once `|p(z)|` is below
/// the rounding bound `4ε·Σ|a_k||z|^k` or its correction is below
/// `1e−13·(1 + |z|)`. Roots closer than `1e−9` are reported as one zero with
/// multiplicity.
pub fn find_roots(p: &ComplexPoly) -> Result<ZeroSet> {
    Ok(ZeroSet::cluster(&raw_roots(p.coeffs())?, 1e-9, C64::new(0.0, 0.0)))
}

pub(crate) fn raw_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c[c.len() - 1].norm() == 0.0 {
        c.pop();
    }
    if c.len() < 2 {
        return Err(Error::InvalidArgument("root finding needs degree ≥ 1".into()));
    }
    let lead = c[c.len() - 1];
    for a in c.iter_mut() {
        *a /= lead;
    }
    // Exact zeros at the origin.
    let n0 = c.iter().take_while(|a| a.norm() == 0.0).count();
    let c = c[n0..].to_vec();
    let mut roots = vec![C64::new(0.0, 0.0); n0];
    let n = c.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    let mut z = initial_guesses(&c);
    let mut frozen = vec![false; n];
    let eps = f64::EPSILON;
    let mut sweeps = 0;
    while sweeps < 200 && frozen.iter().any(|f| !f) {
        sweeps += 1;
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let (ratio, pv, bound) = newton_ratio(&c, z[i]);
            if pv <= 4.0 * eps * bound {
                frozen[i] = true;
                continue;
            }
            let mut s = C64::new(0.0, 0.0);
            for k in 0..n {
                if k != i {
                    s += (z[i] - z[k]).inv();
                }
            }
            let w = ratio / (C64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                if w.norm() <= 1e-13 * (1.0 + z[i].norm()) {
                    frozen[i] = true;
                }
            } else {
                let bump = C64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += bump;
            }
        }
    }
    if frozen.iter().any(|f| !f) {
        let worst = z
            .iter()
            .map(|&x| {
                let (_, pv, b) = newton_ratio(&c, x);
                pv / b
            })
            .fold(0.0, f64::max);
        return Err(Error::NoConvergence { sweeps, residual: worst });
    }
    // Newton polish, kept only when it does not increase the residual.
    for zi in z.iter_mut() {
        for _ in 0..2 {
            let (ratio, pv, b) = newton_ratio(&c, *zi);
            let cand = *zi - ratio;
            let (_, pv2, b2) = newton_ratio(&c, cand);
            if cand.is_finite() && pv2 / b2 < pv / b {
                *zi = cand;
            } else {
                break;
            }
        }
    }
    roots.extend(z);
    Ok(roots)
}

/// Roots of a truncated Weyl-basis series.
///
/// Ordinary coefficients can underflow (`1/√400!` ≈ 1e−434), so the
/// polynomial is rescaled as `a_n R^n` in log space with
/// `R = exp((L_first − L_last)/(n_last − n_first))`, making the extreme
/// coefficients equal in size; roots are mapped back by `R`.
pub fn weyl_roots(f: &TaylorFunction) -> Result<ZeroSet> {
    let logs: Vec<f64> = (0..=f.n_max()).map(|n| f.ln_abs_ordinary(n)).collect();
    let first = logs.iter().position(|l| l.is_finite());
    let last = logs.iter().rposition(|l| l.is_finite());
    let (first, last) = match (first, last) {
        (Some(a), Some(b)) if b > a => (a, b),
        _ => return Err(Error::InvalidArgument("series has degree < 1".into())),
    };
    let ln_r = (logs[first] - logs[last]) / (last - first) as f64;
    let base = logs[first];
    let coeffs: Vec<C64> = (0..=last)
        .map(|n| {
            if logs[n].is_finite() {
                let arg = f.weyl()[n].arg();
                let l = logs[n] + n as f64 * ln_r - base - first as f64 * ln_r;
                C64::from_polar(l.exp(), arg)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    let r = ln_r.exp();
    // The rescaled polynomial balances the extreme coefficients, which leaves
    // interior roots with a relative error near ε·(coefficient spread); a
    // Newton pass on the series itself restores them.
    let roots: Vec<C64> = raw_roots(&coeffs)?
        .into_iter()
        .map(|z| z * r)
        .map(|z| super::track::newton_polish(f, z).filter(|p| (p - z).norm() <= 1e-3 * (1.0 + z.norm())).unwrap_or(z))
        .collect();
    Ok(ZeroSet::cluster(&roots, 1e-9, C64::new(0.0, 0.0)))
}
