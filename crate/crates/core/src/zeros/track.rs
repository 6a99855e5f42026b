use crate::funcs::Analytic;
use crate::heatflow::HeatFlow;
use crate::{Error, Result, C64};
use rayon::prelude::*;

/// Step control for [`track_zero`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackControl {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_newton: usize,
    pub collision_radius: f64,
    /// Relative residual a start point must meet.
    pub start_tol: f64,
    /// Relative residual every accepted sample must meet.
    pub residual_tol: f64,
}

impl Default for TrackControl {
    fn default() -> Self {
        Self {
            initial_step: 1e-2,
            min_step: 1e-7,
            max_newton: 12,
            collision_radius: 1e-6,
            start_tol: 1e-8,
            residual_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackStatus {
    Completed,
    CollisionAbort,
    NewtonFail,
    DomainBoundary,
}

impl TrackStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrackStatus::Completed => "completed",
            TrackStatus::CollisionAbort => "collision_abort",
            TrackStatus::NewtonFail => "newton_fail",
            TrackStatus::DomainBoundary => "domain_boundary",
        }
    }
}

/// Path `τ ↦ z(τ)` of one zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTrajectory {
    /// Accepted `(τ, z)` samples in path order; the first is the start.
    pub samples: Vec<(C64, C64)>,
    pub status: TrackStatus,
    pub start: C64,
    /// `node_indices[i]` is the sample at the `i`-th requested path node.
    pub node_indices: Vec<usize>,
}

impl ZeroTrajectory {
    pub fn last(&self) -> (C64, C64) {
        *self.samples.last().expect("trajectory has a start sample")
    }

    /// Samples at the requested path nodes that were reached.
    pub fn at_nodes(&self) -> Vec<(C64, C64)> {
        self.node_indices.iter().map(|&i| self.samples[i]).collect()
    }

    pub fn completed(&self) -> bool {
        self.status == TrackStatus::Completed
    }
}

/// `|value|/scale`, with an exact zero counting as residual 0 even where the
/// scale vanishes too.
fn rel_residual(value: C64, scale: f64) -> f64 {
    if value.norm() == 0.0 {
        0.0
    } else {
        value.norm() / scale
    }
}

struct NewtonOutcome {
    z: C64,
    iterations: usize,
}

/// Newton iteration on `f` from `z`.
///
/// Converges when the step is below `1e−14(1+|z|)`, or when it stagnates
/// with a relative residual below `residual_tol`. Fails on divergence
/// (growing steps after the second iteration), on exhausting `max_iter`, or
/// if the final relative residual exceeds `residual_tol`.
fn newton<F: Analytic + ?Sized>(f: &F, z0: C64, max_iter: usize, residual_tol: f64) -> Option<NewtonOutcome> {
    let mut z = z0;
    let mut prev_step = f64::INFINITY;
    for it in 1..=max_iter {
        let d = f.derivs(z).ok()?;
        if d.d1.norm() == 0.0 {
            return None;
        }
        let step = d.value / d.d1;
        if !step.is_finite() {
            return None;
        }
        z -= step;
        let s = step.norm();
        let small = s <= 1e-14 * (1.0 + z.norm());
        let stagnant = it > 2 && s >= 0.5 * prev_step;
        if small || stagnant {
            let r = rel_residual(f.derivs(z).ok()?.value, f.magnitude(z));
            if r <= residual_tol {
                return Some(NewtonOutcome { z, iterations: it });
            }
            if small || s > prev_step {
                return None;
            }
        }
        prev_step = s;
    }
    None
}

/// Newton-polishes an approximate zero of `f`; returns `None` when Newton
/// does not converge to relative residual `1e−10`.
pub fn newton_polish<F: Analytic + ?Sized>(f: &F, z: C64) -> Option<C64> {
    newton(f, z, 30, 1e-10).map(|o| o.z)
}

/// Continues the zero of `e^{−τD²/2}F` starting at `z0` along the polygonal
/// `τ`-path through `tau_path` (first node is the start time).
///
/// Euler predictor with `½F''/F'`, Newton corrector on the flowed function.
/// A step is rejected and halved when Newton fails or the corrected point
/// lands farther than `0.1|F'/F''|` from the prediction (a jump to another
/// zero). Steps below `min_step` end the path with `newton_fail`; `|2F'/F''|`
/// below `collision_radius` ends it with `collision_abort`; leaving the
/// admissible flow radius ends it with `domain_boundary`.
pub fn track_zero<F>(f: &F, z0: C64, tau_path: &[C64], ctrl: &TrackControl) -> Result<ZeroTrajectory>
where
    F: HeatFlow + ?Sized,
    F::Flowed: Analytic,
{
    let tau0 = *tau_path
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty tau path".into()))?;
    let g0 = f.heat(tau0)?;
    let d0 = g0.derivs(z0)?;
    let scale0 = g0.magnitude(z0);
    let res0 = rel_residual(d0.value, scale0);
    if !(res0 <= ctrl.start_tol) {
        return Err(Error::NotAZero { z: z0, residual: res0 });
    }
    if d0.d1.norm() <= 1e-12 * scale0 {
        return Err(Error::NonSimpleZero { z: z0, d1: d0.d1.norm(), scale: scale0 });
    }
    let z_start = newton(&g0, z0, ctrl.max_newton, ctrl.residual_tol).map(|o| o.z).unwrap_or(z0);

    let mut samples = vec![(tau0, z_start)];
    let mut node_indices = vec![0];
    let mut status = TrackStatus::Completed;
    let (mut tau, mut z) = (tau0, z_start);
    let mut d = g0.derivs(z)?;
    let mut h = ctrl.initial_step;
    let radius = f.flow_radius();

    'path: for &node in &tau_path[1..] {
        loop {
            let remaining = node - tau;
            let dist = remaining.norm();
            if dist == 0.0 {
                break;
            }
            let step = if dist <= h * (1.0 + 1e-12) { remaining } else { remaining * (h / dist) };
            let tau_new = tau + step;
            if tau_new.norm() >= radius {
                status = TrackStatus::DomainBoundary;
                break 'path;
            }
            let g = match f.heat(tau_new) {
                Ok(g) => g,
                Err(Error::Domain { .. }) | Err(Error::SingularFlow(_)) => {
                    status = TrackStatus::DomainBoundary;
                    break 'path;
                }
                Err(e) => return Err(e),
            };
            let v = d.d2 / d.d1 * 0.5;
            let z_pred = z + v * step;
            let sep = if d.d2.norm() > 0.0 { (d.d1 / d.d2).norm() } else { f64::INFINITY };
            let accepted = newton(&g, z_pred, ctrl.max_newton, ctrl.residual_tol)
                .filter(|o| (o.z - z_pred).norm() <= 0.1 * sep);
            match accepted {
                Some(o) => {
                    let dn = g.derivs(o.z)?;
                    tau = tau_new;
                    z = o.z;
                    d = dn;
                    samples.push((tau, z));
                    let r = if dn.d2.norm() > 0.0 { 2.0 * (dn.d1 / dn.d2).norm() } else { f64::INFINITY };
                    if r < ctrl.collision_radius {
                        status = TrackStatus::CollisionAbort;
                        break 'path;
                    }
                    if o.iterations <= 3 {
                        h = (h * 2.0).min(ctrl.initial_step);
                    }
                }
                None => {
                    h *= 0.5;
                    if h < ctrl.min_step {
                        status = TrackStatus::NewtonFail;
                        break 'path;
                    }
                }
            }
        }
        node_indices.push(samples.len() - 1);
    }
    Ok(ZeroTrajectory { samples, status, start: z0, node_indices })
}

/// Tracks several starting zeros in parallel; results are in input order.
pub fn track_zeros<F>(f: &F, starts: &[C64], tau_path: &[C64], ctrl: &TrackControl) -> Vec<Result<ZeroTrajectory>>
where
    F: HeatFlow + Sync + ?Sized,
    F::Flowed: Analytic,
{
    starts.par_iter().map(|&z0| track_zero(f, z0, tau_path, ctrl)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::{ComplexPoly, ExpQuadPoly};
    use crate::heatflow::{sin_pi_z2_sum, sin_pi_z2_taylor, sinpisq_zero};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn real_path(a: f64, b: f64, n: usize) -> Vec<C64> {
        (0..=n).map(|k| c(a + (b - a) * k as f64 / n as f64, 0.0)).collect()
    }

    #[test]
    fn quadratic_flow() {
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 1.0]);
        let t = track_zero(&p, c(1.0, 0.0), &real_path(0.0, 0.5, 1), &TrackControl::default()).unwrap();
        assert!(t.completed());
        assert!((t.last().1 - c(1.5f64.sqrt(), 0.0)).norm() < 1e-10);
    }

    #[test]
    fn sine_square_zero_closed_and_taylor() {
        let ctrl = TrackControl::default();
        let path = real_path(0.0, 0.1, 10);
        let a = track_zero(&sin_pi_z2_sum(), c(1.0, 0.0), &path, &ctrl).unwrap();
        let b = track_zero(&sin_pi_z2_taylor(160), c(1.0, 0.0), &path, &ctrl).unwrap();
        let want = sinpisq_zero(1, 1, c(0.1, 0.0)).unwrap();
        assert!((a.last().1 - want).norm() < 1e-9);
        assert!((b.last().1 - want).norm() < 1e-6);
        assert_eq!(a.at_nodes().len(), 11);
    }

    #[test]
    fn double_zero_is_rejected() {
        let r = track_zero(&sin_pi_z2_sum(), c(0.0, 0.0), &real_path(0.0, 0.1, 1), &TrackControl::default());
        assert!(matches!(r, Err(Error::NonSimpleZero { .. })));
        let r = track_zero(&sin_pi_z2_sum(), c(0.9, 0.0), &real_path(0.0, 0.1, 1), &TrackControl::default());
        assert!(matches!(r, Err(Error::NotAZero { .. })));
    }

    #[test]
    fn collision_aborts() {
        // z² − 1 − τ: the zeros ±√(1+τ) meet at τ = −1.
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 1.0]);
        let t = track_zero(&p, c(1.0, 0.0), &real_path(0.0, -1.5, 1), &TrackControl::default()).unwrap();
        assert_ne!(t.status, TrackStatus::Completed);
        assert!((t.last().0.re + 1.0).abs() < 1e-3);
    }

    #[test]
    fn domain_boundary_stops() {
        let f = ExpQuadPoly::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), ComplexPoly::from_real(&[-1.0, 1.0]));
        let t = track_zero(&f, c(1.0, 0.0), &real_path(0.0, -1.2, 1), &TrackControl::default()).unwrap();
        assert_eq!(t.status, TrackStatus::DomainBoundary);
    }

    #[test]
    fn reversible() {
        let p = ComplexPoly::from_roots(&[c(1.0, 0.5), c(-1.2, 0.3), c(0.2, -1.4), c(2.0, 1.0)]);
        let path = vec![c(0.0, 0.0), c(0.3, 0.1), c(0.0, 0.0)];
        let t = track_zero(&p, c(1.0, 0.5), &path, &TrackControl::default()).unwrap();
        assert!(t.completed());
        assert!((t.last().1 - c(1.0, 0.5)).norm() < 1e-8);
    }
}
