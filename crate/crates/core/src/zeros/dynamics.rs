//! Exact formulas for moving zeros.
//!
//! A function in the genus-`g` product form around a base point `c`,
//!
//! ```text
//! log F(z) = a₀ + a₁(z−c) + a₂(z−c)²/2
//!          + Σ_k [log(1 − (z−c)/(z_k−c)) + (z−c)/(z_k−c) + (z−c)²/(2(z_k−c)²)]
//! ```
//!
//! (case S2; S1 drops every quadratic term, S0 is a plain polynomial) has
//! `a₁ = (log F)'(c)` and `a₂ = (log F)''(c)`. Under the heat flow the zeros and
//! these coefficients obey a closed system of ODEs, implemented here on
//! finite (truncated) zero lists.

use crate::funcs::Analytic;
use crate::{Error, Result, C64};

/// Genus of the product representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Case {
    S0,
    S1,
    S2,
}

const COLLIDE: f64 = 1e-12;

fn check_pair(zeros: &[C64], j: usize, k: usize) -> Result<C64> {
    let d = zeros[j] - zeros[k];
    if d.norm() < COLLIDE {
        return Err(Error::Collision { j, k, distance: d.norm() });
    }
    Ok(d.inv())
}

fn check_base(zeros: &[C64], c: C64) -> Result<()> {
    match zeros.iter().find(|z| (**z - c).norm() < COLLIDE) {
        Some(&z) => Err(Error::BasePointAtZero(z)),
        None => Ok(()),
    }
}

fn check_index(zeros: &[C64], j: usize) -> Result<()> {
    if j >= zeros.len() {
        return Err(Error::InvalidArgument(format!("index {j} out of range for {} zeros", zeros.len())));
    }
    Ok(())
}

/// `dz/dτ = ½ F''/F'` at a simple zero.
pub fn zero_velocity_simple<F: Analytic + ?Sized>(f: &F, z: C64) -> Result<C64> {
    let d = f.derivs(z)?;
    let scale = f.magnitude(z);
    if d.d1.norm() <= 1e-12 * scale {
        return Err(Error::NonSimpleZero { z, d1: d.d1.norm(), scale });
    }
    Ok(d.d2 / d.d1 * 0.5)
}

/// `Σ_{k≠j} 1/(z_j − z_k)`: the velocity of zero `j` of a polynomial.
pub fn velocity_poly(zeros: &[C64], j: usize) -> Result<C64> {
    check_index(zeros, j)?;
    let mut s = C64::new(0.0, 0.0);
    for k in (0..zeros.len()).filter(|&k| k != j) {
        s += check_pair(zeros, j, k)?;
    }
    Ok(s)
}

/// Calogero–Moser acceleration `−2 Σ_{k≠j} (z_j − z_k)^{−3}`.
pub fn acceleration(zeros: &[C64], j: usize) -> Result<C64> {
    check_index(zeros, j)?;
    let mut s = C64::new(0.0, 0.0);
    for k in (0..zeros.len()).filter(|&k| k != j) {
        s += check_pair(zeros, j, k)?.powu(3);
    }
    Ok(s * -2.0)
}

/// Genus-1 velocity `a₁ + Σ_k [𝟙_{k≠j}/(z_j − z_k) + 1/(z_k − c)]`.
pub fn velocity_s1(zeros: &[C64], j: usize, a1: C64, c: C64) -> Result<C64> {
    check_index(zeros, j)?;
    check_base(zeros, c)?;
    let mut s = a1;
    for k in 0..zeros.len() {
        if k != j {
            s += check_pair(zeros, j, k)?;
        }
        s += (zeros[k] - c).inv();
    }
    Ok(s)
}

/// Genus-2 velocity
/// `a₁ + a₂(z_j − c) + Σ_k [𝟙_{k≠j}/(z_j − z_k) + 1/(z_k − c) + (z_j − c)/(z_k − c)²]`.
pub fn velocity_s2(zeros: &[C64], j: usize, a1: C64, a2: C64, c: C64) -> Result<C64> {
    check_index(zeros, j)?;
    check_base(zeros, c)?;
    let u = zeros[j] - c;
    let mut s = a1 + a2 * u;
    for k in 0..zeros.len() {
        if k != j {
            s += check_pair(zeros, j, k)?;
        }
        let w = (zeros[k] - c).inv();
        s += w + u * w * w;
    }
    Ok(s)
}

fn inverse_power_sums(zeros: &[C64], c: C64) -> Result<[C64; 5]> {
    check_base(zeros, c)?;
    let mut s = [C64::new(0.0, 0.0); 5];
    for &z in zeros {
        let w = (z - c).inv();
        let mut p = w;
        for item in s.iter_mut().skip(1) {
            *item += p;
            p *= w;
        }
    }
    Ok(s)
}

/// `(a₁′, a₂′)`.
///
/// S1: `a₁′ = a₁ Σ(w−c)^{−2} + Σ(w−c)^{−3}`.
/// S2: `a₁′ = −a₁a₂ + Σ(w−c)^{−3}`, `a₂′ = −a₂² + 2a₁Σ(w−c)^{−3} + 3Σ(w−c)^{−4}`.
/// S0 has no auxiliary coefficients and returns zeros.
pub fn aux_derivatives(case: Case, zeros: &[C64], a1: C64, a2: C64, c: C64) -> Result<(C64, C64)> {
    let zero = C64::new(0.0, 0.0);
    match case {
        Case::S0 => Ok((zero, zero)),
        Case::S1 => {
            let s = inverse_power_sums(zeros, c)?;
            Ok((a1 * s[2] + s[3], zero))
        }
        Case::S2 => {
            let s = inverse_power_sums(zeros, c)?;
            Ok((-a1 * a2 + s[3], -a2 * a2 + a1 * s[3] * 2.0 + s[4] * 3.0))
        }
    }
}

/// `a₁ = F'/F` and `a₂ = F''/F − (F'/F)²` at `c`.
pub fn aux_from_function<F: Analytic + ?Sized>(f: &F, c: C64) -> Result<(C64, C64)> {
    let d = f.derivs(c)?;
    if d.value.norm() <= 1e-14 * f.magnitude(c) {
        return Err(Error::BasePointAtZero(c));
    }
    let l1 = d.d1 / d.value;
    Ok((l1, d.d2 / d.value - l1 * l1))
}

/// Moments `M(j,p) = Σ_{k≠j} (z_j − z_k)^{−p}` for `2 ≤ p ≤ p_max`, together
/// with the auxiliary coefficients of the chosen case.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    pub j: usize,
    pub case: Case,
    pub a1: C64,
    pub a2: C64,
    m: Vec<Option<C64>>,
}

impl MomentTable {
    pub fn from_zeros(zeros: &[C64], j: usize, p_max: usize, case: Case, a1: C64, a2: C64) -> Result<Self> {
        check_index(zeros, j)?;
        let mut m = vec![None; p_max + 1];
        let mut inv = Vec::with_capacity(zeros.len());
        for k in (0..zeros.len()).filter(|&k| k != j) {
            inv.push(check_pair(zeros, j, k)?);
        }
        for (p, slot) in m.iter_mut().enumerate().skip(2) {
            *slot = Some(inv.iter().map(|w| w.powu(p as u32)).sum());
        }
        Ok(Self { j, case, a1, a2, m })
    }

    /// Table from explicit values; `values[i]` is `M(i + 2)`.
    pub fn from_values(j: usize, case: Case, a1: C64, a2: C64, values: &[C64]) -> Self {
        let mut m = vec![None, None];
        m.extend(values.iter().map(|&v| Some(v)));
        Self { j, case, a1, a2, m }
    }

    pub fn get(&self, p: usize) -> Result<C64> {
        self.m.get(p).copied().flatten().ok_or(Error::MissingMoment(p))
    }

    pub fn p_max(&self) -> usize {
        self.m.len().saturating_sub(1)
    }
}

/// `dM(j,p)/dτ = −(p/2)[(p+3)M(j,p+2) − Σ_{n=2}^{p} M(j,p+2−n)M(j,n)]`.
///
/// Valid for cases S0 and S1, where the index-independent part of the
/// velocity cancels in differences `z_j′ − z_k′`.
pub fn moment_derivative(mt: &MomentTable, p: usize) -> Result<C64> {
    if mt.case == Case::S2 {
        return Err(Error::InvalidArgument("moment recursion needs case S0 or S1".into()));
    }
    if p < 2 {
        return Err(Error::InvalidArgument(format!("moment order {p} < 2")));
    }
    let mut conv = C64::new(0.0, 0.0);
    for n in 2..=p {
        conv += mt.get(p + 2 - n)? * mt.get(n)?;
    }
    Ok(-(p as f64) * 0.5 * (mt.get(p + 2)? * (p + 3) as f64 - conv))
}

/// `M(j,2) − Σ_k (z_k − c)^{−2}`, the sum running over all zeros including `j`.
pub fn regularized_m2(zeros: &[C64], j: usize, c: C64) -> Result<C64> {
    let s = inverse_power_sums(zeros, c)?;
    Ok(MomentTable::from_zeros(zeros, j, 2, Case::S0, C64::new(0.0, 0.0), C64::new(0.0, 0.0))?.get(2)? - s[2])
}

/// Third `τ`-derivative of zero `j`.
///
/// S0/S1: `18M(5) − 6M(2)M(3)`.
/// S2: `18M(5) + 6a₂M(3) − 6R·M(3)` with `R` from [`regularized_m2`].
pub fn third_derivative(case: Case, mt: &MomentTable, regularized: C64) -> Result<C64> {
    let m3 = mt.get(3)?;
    let m5 = mt.get(5)?;
    match case {
        Case::S0 | Case::S1 => Ok(m5 * 18.0 - mt.get(2)? * m3 * 6.0),
        Case::S2 => Ok(m5 * 18.0 + mt.a2 * m3 * 6.0 - regularized * m3 * 6.0),
    }
}

/// `s`-derivative of the rescaled zero `y_j(s) = z_j(tanh s)·cosh s` (base point 0):
/// `a₁/cosh s + y_j(a₂/cosh²s + tanh s) + Σ_k [𝟙_{k≠j}/(y_j − y_k) + 1/y_k + y_j/y_k²]`,
/// where `a₁, a₂` are the coefficients at `τ = tanh s`.
pub fn rescaled_velocity(ys: &[C64], j: usize, a1: C64, a2: C64, s: f64) -> Result<C64> {
    check_index(ys, j)?;
    check_base(ys, C64::new(0.0, 0.0))?;
    let (ch, th) = (s.cosh(), s.tanh());
    let y = ys[j];
    let mut v = a1 / ch + y * (a2 / (ch * ch) + th);
    for k in 0..ys.len() {
        if k != j {
            v += check_pair(ys, j, k)?;
        }
        let w = ys[k].inv();
        v += w + y * w * w;
    }
    Ok(v)
}

/// State of the truncated genus-2 system: zeros, `a₁`, `a₂` and base point `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSystem {
    pub zeros: Vec<C64>,
    pub a1: C64,
    pub a2: C64,
    pub c: C64,
}

/// Right-hand side of the truncated system.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemDerivatives {
    pub dz: Vec<C64>,
    pub da1: C64,
    pub da2: C64,
}

/// Derivatives of all tracked quantities for the system truncated to the
/// first `n` zeros of `state.zeros`.
pub fn truncated_system_step(state: &TruncatedSystem, n: usize) -> Result<SystemDerivatives> {
    if n > state.zeros.len() {
        return Err(Error::InvalidArgument(format!("N = {n} exceeds {} zeros", state.zeros.len())));
    }
    let zs = &state.zeros[..n];
    let dz = (0..n)
        .map(|j| velocity_s2(zs, j, state.a1, state.a2, state.c))
        .collect::<Result<Vec<_>>>()?;
    let (da1, da2) = aux_derivatives(Case::S2, zs, state.a1, state.a2, state.c)?;
    Ok(SystemDerivatives { dz, da1, da2 })
}

impl TruncatedSystem {
    fn axpy(&self, d: &SystemDerivatives, h: f64) -> Self {
        Self {
            zeros: self.zeros.iter().zip(&d.dz).map(|(z, v)| z + v * h).collect(),
            a1: self.a1 + d.da1 * h,
            a2: self.a2 + d.da2 * h,
            c: self.c,
        }
    }

    /// One classical Runge–Kutta step of size `h` (real flow time).
    pub fn rk4(&self, h: f64) -> Result<Self> {
        let n = self.zeros.len();
        let k1 = truncated_system_step(self, n)?;
        let k2 = truncated_system_step(&self.axpy(&k1, h / 2.0), n)?;
        let k3 = truncated_system_step(&self.axpy(&k2, h / 2.0), n)?;
        let k4 = truncated_system_step(&self.axpy(&k3, h), n)?;
        let comb = |a: C64, b: C64, c: C64, d: C64| (a + b * 2.0 + c * 2.0 + d) * (h / 6.0);
        Ok(Self {
            zeros: (0..n)
                .map(|i| self.zeros[i] + comb(k1.dz[i], k2.dz[i], k3.dz[i], k4.dz[i]))
                .collect(),
            a1: self.a1 + comb(k1.da1, k2.da1, k3.da1, k4.da1),
            a2: self.a2 + comb(k1.da2, k2.da2, k3.da2, k4.da2),
            c: self.c,
        })
    }
}
