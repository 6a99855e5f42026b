//! One function per subcommand, each returning a [`Report`].

use crate::args::Process;
use crate::config::ExperimentConfig;
use crate::output::{Cell, Report, Table};
use crate::row;
use crate::spec::{parse_complex_list, parse_function, Function};
use crate::CliError;
use gafheat::funcs::{Analytic, ComplexPoly, ExpQuadPoly};
use gafheat::gaf::{covariance_pred, covariance_q_pred, residual_experiment, GafSample, Vtau};
use gafheat::heatflow::{HeatFlow, HeatedSeries};
use gafheat::metaplectic::{apply_va, atau_matrix, compose_check, hyperbolic_phi_psi, GroupElement};
use gafheat::rng::{derive_seed, trial_rng};
use gafheat::stats::{empirical_covariance, empirical_cross_covariance, two_sample_energy, CovarianceGrid};
use gafheat::zeros::{find_roots, newton_polish, track_zeros, weyl_roots, TrackControl, ZeroTrajectory};
use gafheat::C64;
use rand::Rng;
use serde_json::json;
use std::collections::BTreeMap;
use std::f64::consts::PI;

const FLOW_COLUMNS: &[&str] = &["kind", "term", "index", "z_re", "z_im", "re", "im"];

fn push_expquad(t: &mut Table, term: usize, f: &ExpQuadPoly) {
    for (kind, v) in [("quad", f.quad), ("lin", f.lin), ("const", f.constant)] {
        t.push(row![kind, term, 0usize, Cell::Empty, Cell::Empty, v.re, v.im]);
    }
    for (k, c) in f.poly.coeffs().iter().enumerate() {
        t.push(row!["poly", term, k, Cell::Empty, Cell::Empty, c.re, c.im]);
    }
}

fn grid_points(n: usize, r: f64) -> Vec<C64> {
    let step = if n > 1 { 2.0 * r / (n - 1) as f64 } else { 0.0 };
    let lo = if n > 1 { -r } else { 0.0 };
    (0..n * n).map(|k| C64::new(lo + step * (k % n) as f64, lo + step * (k / n) as f64)).collect()
}

fn push_values<F: Analytic>(t: &mut Table, f: &F, pts: &[C64]) {
    for (k, &z) in pts.iter().enumerate() {
        // Overflowing points are written as NaN rather than aborting the run.
        let v = f.eval(z).unwrap_or(C64::new(f64::NAN, f64::NAN));
        t.push(row!["value", Cell::Empty, k, z.re, z.im, v.re, v.im]);
    }
}

/// Flowed coefficients (closed-form parameters or Weyl coefficients) and
/// values on a square grid.
pub fn flow(cfg: &ExperimentConfig, spec: &str, grid: usize, radius: f64) -> Result<Report, CliError> {
    let tau = cfg.tau().ok_or_else(|| CliError::Usage("flow needs --tau".into()))?;
    let f = parse_function(spec, cfg.n_max, cfg.seed)?;
    let mut t = Table::new("", FLOW_COLUMNS);
    let pts = grid_points(grid, radius);
    let (form, flow_radius) = match &f {
        Function::Closed(e) => {
            let g = e.heat(tau)?;
            push_expquad(&mut t, 0, &g);
            push_values(&mut t, &g, &pts);
            ("expquad", e.flow_radius())
        }
        Function::Sum(s) => {
            let g = s.heat(tau)?;
            for (k, term) in g.terms.iter().enumerate() {
                push_expquad(&mut t, k, term);
            }
            push_values(&mut t, &g, &pts);
            ("expquad_sum", s.flow_radius())
        }
        Function::Taylor(tf) => {
            let g = tf.heat(tau)?;
            for (k, c) in g.weyl().iter().enumerate() {
                t.push(row!["weyl", 0usize, k, Cell::Empty, Cell::Empty, c.re, c.im]);
            }
            push_values(&mut t, &g, &pts);
            ("taylor", tf.flow_radius())
        }
    };
    let summary = json!({ "form": form, "flow_radius": flow_radius, "rows": t.rows.len() });
    Ok(Report { tables: vec![t], summary, statistical_pass: true })
}

fn tau_nodes(cfg: &ExperimentConfig) -> Result<Vec<C64>, CliError> {
    if !cfg.tau_path.is_empty() {
        return Ok(cfg.tau_path.iter().map(|&[re, im]| C64::new(re, im)).collect());
    }
    let tau = cfg
        .tau()
        .ok_or_else(|| CliError::Usage("trajectories needs --tau-path or --tau".into()))?;
    Ok((0..=50).map(|k| tau * (k as f64 / 50.0)).collect())
}

type Tracked = Vec<(C64, Option<ZeroTrajectory>)>;

fn track_smallest<F>(f: &F, raw: Vec<C64>, path: &[C64], count: usize, radius: Option<f64>) -> Result<Tracked, CliError>
where
    F: HeatFlow + Sync,
    F::Flowed: Analytic,
{
    let g0 = f.heat(path[0])?;
    let mut starts: Vec<C64> = raw.into_iter().map(|z| newton_polish(&g0, z).unwrap_or(z)).collect();
    starts.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
    starts.retain(|z| radius.map_or(true, |r| z.norm() <= r));
    starts.truncate(count);
    let res = track_zeros(f, &starts, path, &TrackControl::default());
    Ok(starts.into_iter().zip(res.into_iter().map(|r| r.ok())).collect())
}

/// Zero paths along the τ path, with the straight-line reference
/// `z₀ + (τ − τ₀)z̄₀` and the fluctuation `z − (τ − τ₀)z̄₀`.
pub fn trajectories(cfg: &ExperimentConfig, spec: &str, count: usize, radius: Option<f64>) -> Result<Report, CliError> {
    let path = tau_nodes(cfg)?;
    let f = parse_function(spec, cfg.n_max, cfg.seed)?;
    let tau0 = path[0];
    let tracked = match &f {
        Function::Closed(e) => {
            let raw = find_roots(&e.heat(tau0)?.poly)?.zeros;
            track_smallest(e, raw, &path, count, radius)?
        }
        Function::Sum(s) => {
            let raw = weyl_roots(&f.to_taylor(cfg.n_max)?.heat(tau0)?)?.zeros;
            track_smallest(s, raw, &path, count, radius)?
        }
        Function::Taylor(tf) => {
            let raw = weyl_roots(&tf.heat(tau0)?)?.zeros;
            track_smallest(&HeatedSeries::new(tf.clone()), raw, &path, count, radius)?
        }
    };
    let mut t = Table::new(
        "",
        &["traj_id", "tau", "tau_im", "re", "im", "status", "ref_re", "ref_im", "fluct_re", "fluct_im"],
    );
    let mut status_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for (id, (z0, traj)) in tracked.iter().enumerate() {
        let Some(traj) = traj else {
            *status_counts.entry("start_rejected").or_default() += 1;
            let nan = f64::NAN;
            t.push(row![id, tau0.re, tau0.im, z0.re, z0.im, "start_rejected", z0.re, z0.im, nan, nan]);
            continue;
        };
        let status = traj.status.as_str();
        *status_counts.entry(status).or_default() += 1;
        let a = traj.start;
        for &(tau, z) in &traj.samples {
            let drift = (tau - tau0) * a.conj();
            let (r, fl) = (a + drift, z - drift);
            t.push(row![id, tau.re, tau.im, z.re, z.im, status, r.re, r.im, fl.re, fl.im]);
        }
    }
    let summary = json!({ "trajectories": tracked.len(), "status_counts": status_counts });
    Ok(Report { tables: vec![t], summary, statistical_pass: true })
}

/// Residuals `z^a(τ) − a − τā` per anchor; when `0` is among the anchors,
/// every other anchor is tested against it at level `0.01/(#tests)`.
pub fn residuals(cfg: &ExperimentConfig, anchors: &str, permutations: usize) -> Result<Report, CliError> {
    let tau = cfg.tau().ok_or_else(|| CliError::Usage("residuals needs --tau".into()))?;
    if tau.im != 0.0 {
        return Err(CliError::Usage("residuals needs a real --tau".into()));
    }
    let anchors = parse_complex_list(anchors)?;
    if anchors.is_empty() {
        return Err(CliError::Usage("no anchors given".into()));
    }
    let reports = anchors
        .iter()
        .map(|&a| residual_experiment(a, tau.re, cfg.trials, cfg.n_max, cfg.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let mut samples = Table::new("", &["anchor_re", "anchor_im", "index", "re", "im"]);
    let mut per_anchor = Table::new("anchors", &["anchor_re", "anchor_im", "completed", "aborted", "mean_re", "mean_im"]);
    for r in &reports {
        for (k, z) in r.residuals.iter().enumerate() {
            samples.push(row![r.anchor.re, r.anchor.im, k, z.re, z.im]);
        }
        let n = r.residuals.len();
        let mean = r.residuals.iter().sum::<C64>() / n.max(1) as f64;
        per_anchor.push(row![r.anchor.re, r.anchor.im, n, r.aborted(), mean.re, mean.im]);
    }
    let mut tests = Table::new(
        "tests",
        &["anchor_re", "anchor_im", "statistic", "p_value", "alpha", "method", "n1", "n2", "pass"],
    );
    let base = reports.iter().position(|r| r.anchor == C64::new(0.0, 0.0));
    let mut all_pass = true;
    if let Some(b) = base {
        let others: Vec<usize> = (0..reports.len()).filter(|&i| i != b).collect();
        let alpha = 0.01 / others.len().max(1) as f64;
        for (j, &i) in others.iter().enumerate() {
            let (x, y) = (&reports[i].residuals, &reports[b].residuals);
            let a = reports[i].anchor;
            match two_sample_energy(x, y, permutations, derive_seed(cfg.seed, j as u64)) {
                Ok(rep) => {
                    let pass = rep.p_value >= alpha;
                    all_pass &= pass;
                    tests.push(row![a.re, a.im, rep.statistic, rep.p_value, alpha, "energy_permutation", rep.n1, rep.n2, pass]);
                }
                Err(e) => {
                    all_pass = false;
                    let nan = f64::NAN;
                    tests.push(row![a.re, a.im, nan, nan, alpha, e.to_string(), x.len(), y.len(), false]);
                }
            }
        }
    }
    let summary = json!({
        "tau": tau.re,
        "anchors": anchors.len(),
        "aborted": reports.iter().map(|r| r.aborted()).sum::<usize>(),
        "tests": tests.rows.len(),
        "all_pass": all_pass,
    });
    Ok(Report { tables: vec![samples, per_anchor, tests], summary, statistical_pass: all_pass })
}

fn in_disk<R: Rng>(rng: &mut R, r: f64) -> C64 {
    C64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI))
}

fn random_element<R: Rng>(rng: &mut R) -> Result<(f64, C64, GroupElement), CliError> {
    let theta = rng.gen_range(-PI..PI);
    let tau = in_disk(rng, 0.6);
    Ok((theta, tau, GroupElement::rotation(theta).mul(&atau_matrix(tau)?)))
}

fn random_expquad<R: Rng>(rng: &mut R) -> ExpQuadPoly {
    let coeffs = (0..4).map(|_| in_disk(rng, 1.0)).collect();
    ExpQuadPoly::new(in_disk(rng, 0.2), in_disk(rng, 0.5), C64::new(0.0, 0.0), ComplexPoly::new(coeffs))
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

/// Composition checks on random pairs, the rotation sign table,
/// `V(A_τ) = V_τ`, and the hyperbolic covariance identity.
pub fn metaplectic_check(cfg: &ExperimentConfig, pairs: usize) -> Result<Report, CliError> {
    let mut rng = trial_rng(cfg.seed, 0);
    let mut t = Table::new(
        "",
        &["pair", "kind", "theta1", "tau1_re", "tau1_im", "theta2", "tau2_re", "tau2_im", "sign", "rel_error", "matches", "error"],
    );
    let (mut matched, mut failed, mut skipped, mut worst) = (0usize, 0usize, 0usize, 0.0f64);
    let mut record = |t: &mut Table, idx: usize, kind: &str, e1: (f64, C64), e2: (f64, C64), r: Result<_, gafheat::Error>| {
        let nan = f64::NAN;
        match r {
            Ok(gafheat::metaplectic::CompositionReport { matches, sign, rel_error }) => {
                if matches {
                    matched += 1;
                } else {
                    failed += 1;
                }
                worst = worst.max(rel_error);
                t.push(row![idx, kind, e1.0, e1.1.re, e1.1.im, e2.0, e2.1.re, e2.1.im, sign as i64, rel_error, matches, ""]);
            }
            Err(e) => {
                skipped += 1;
                t.push(row![idx, kind, e1.0, e1.1.re, e1.1.im, e2.0, e2.1.re, e2.1.im, Cell::Empty, nan, false, e.to_string()]);
            }
        }
    };
    let f0 = random_expquad(&mut rng);
    let zero = (0.0, C64::new(0.0, 0.0));
    let id = GroupElement::identity();
    record(&mut t, 0, "identity", zero, zero, compose_check(&id, &id, &f0));
    for k in 0..pairs {
        let (th1, ta1, g1) = random_element(&mut rng)?;
        let (th2, ta2, g2) = random_element(&mut rng)?;
        let f = random_expquad(&mut rng);
        record(&mut t, k + 1, "random", (th1, ta1), (th2, ta2), compose_check(&g1, &g2, &f));
    }

    let mut signs = Table::new("signs", &["element", "theta", "sign"]);
    for (name, th) in [("R(0)", 0.0), ("R(pi/2)", PI / 2.0), ("R(pi)", PI), ("R(3pi/2)", 1.5 * PI), ("R(2pi)", 2.0 * PI), ("R(3pi)", 3.0 * PI), ("R(4pi)", 4.0 * PI)] {
        signs.push(row![name, th, GroupElement::rotation(th).sign as i64]);
    }
    let half = GroupElement::rotation(PI);
    let sq = compose_check(&half, &half, &f0)?;
    signs.push(row!["R(pi)R(pi)", 2.0 * PI, sq.sign as i64]);

    let mut vt = Table::new("vtau", &["tau_re", "tau_im", "rel_error"]);
    let probes: Vec<C64> = (0..6).map(|k| C64::from_polar(0.3 * k as f64, 1.1 * k as f64)).collect();
    let mut vt_worst: f64 = 0.0;
    for _ in 0..20 {
        let tau = in_disk(&mut rng, 0.9);
        let f = random_expquad(&mut rng);
        let a = apply_va(&f, &atau_matrix(tau)?)?;
        let b = f.vtau(tau)?;
        let mut err: f64 = 0.0;
        for &z in &probes {
            err = err.max(rel(a.eval(z)?, b.eval(z)?));
        }
        vt_worst = vt_worst.max(err);
        vt.push(row![tau.re, tau.im, err]);
    }

    let mut hyp = Table::new("hyperbolic", &["s", "tau_re", "tau_im", "sigma_re", "sigma_im", "rel_error"]);
    let mut hyp_worst: f64 = 0.0;
    for _ in 0..100 {
        let s: f64 = rng.gen_range(0.0..1.5);
        let p = C64::from_polar(s.cosh(), rng.gen_range(-PI..PI));
        let q = C64::from_polar(s.sinh(), rng.gen_range(-PI..PI));
        let (tau, sigma) = (in_disk(&mut rng, 0.9), in_disk(&mut rng, 0.9));
        let (z, w) = (in_disk(&mut rng, 1.5), in_disk(&mut rng, 1.5));
        let (pt, st) = hyperbolic_phi_psi(p, q, tau);
        let (ps, ss) = hyperbolic_phi_psi(p, q, sigma);
        let lhs = covariance_q_pred(st * z, ss * w, pt, ps)?;
        let rhs = (ss / st).sqrt() * covariance_q_pred(z, w, tau, sigma)?;
        let err = rel(lhs, rhs);
        hyp_worst = hyp_worst.max(err);
        hyp.push(row![s, tau.re, tau.im, sigma.re, sigma.im, err]);
    }

    let pass = failed == 0 && vt_worst < 1e-9 && hyp_worst < 1e-10;
    let summary = json!({
        "pairs": pairs + 1,
        "matched": matched,
        "mismatched": failed,
        "skipped": skipped,
        "max_rel_error": worst,
        "rotation_2pi_sign": GroupElement::rotation(2.0 * PI).sign,
        "vtau_max_rel_error": vt_worst,
        "hyperbolic_max_rel_error": hyp_worst,
        "all_pass": pass,
    });
    Ok(Report { tables: vec![t, signs, vt, hyp], summary, statistical_pass: pass })
}

/// `n` probe points on a spiral from `0` to `radius`.
fn spiral(n: usize, radius: f64) -> Vec<C64> {
    (0..n)
        .map(|k| {
            let s = if n > 1 { k as f64 / (n - 1) as f64 } else { 0.0 };
            C64::from_polar(radius * s, 2.0 * PI * k as f64 / n as f64)
        })
        .collect()
}

/// Empirical `E[F_τ(z) conj(F_σ(w))]` over all pairs of probe points against
/// the closed-form covariance, for `F = e^{−τD²/2}G` or `F = V_τG`.
pub fn covariance(
    cfg: &ExperimentConfig,
    sigma: Option<C64>,
    grid: usize,
    radius: f64,
    process: Process,
) -> Result<Report, CliError> {
    let tau = cfg.tau().ok_or_else(|| CliError::Usage("covariance needs --tau".into()))?;
    let sigma = sigma.unwrap_or(tau);
    let pts = spiral(grid, radius);
    let probes: Vec<(C64, C64)> = pts.iter().flat_map(|&z| pts.iter().map(move |&w| (z, w))).collect();
    let n = cfg.n_max;
    let pred = |z: C64, w: C64| match process {
        Process::Heat => covariance_pred(z, w, tau, sigma),
        Process::Vtau => covariance_q_pred(z, w, tau, sigma),
    };
    pred(C64::new(0.0, 0.0), C64::new(0.0, 0.0))?;
    let est: CovarianceGrid = match (process, sigma == tau) {
        (Process::Heat, true) => empirical_covariance(
            |s, k| GafSample::trial(n, s, k).taylor.heat(tau),
            &probes,
            cfg.trials,
            cfg.seed,
        )?,
        (Process::Heat, false) => empirical_cross_covariance(
            |s, k| {
                let g = GafSample::trial(n, s, k).taylor;
                Ok((g.heat(tau)?, g.heat(sigma)?))
            },
            &probes,
            cfg.trials,
            cfg.seed,
        )?,
        (Process::Vtau, true) => empirical_covariance(
            |s, k| GafSample::trial(n, s, k).taylor.vtau(tau),
            &probes,
            cfg.trials,
            cfg.seed,
        )?,
        (Process::Vtau, false) => empirical_cross_covariance(
            |s, k| {
                let g = GafSample::trial(n, s, k).taylor;
                Ok((g.vtau(tau)?, g.vtau(sigma)?))
            },
            &probes,
            cfg.trials,
            cfg.seed,
        )?,
    };
    let mut t = Table::new(
        "",
        &["z_re", "z_im", "w_re", "w_im", "est_re", "est_im", "pred_re", "pred_im", "se", "within_5se"],
    );
    let mut within = 0usize;
    for (i, &(z, w)) in est.points.iter().enumerate() {
        let (e, se) = (est.estimates[i], est.std_errors[i]);
        let p = pred(z, w)?;
        let ok = (e - p).norm() <= 5.0 * se;
        within += ok as usize;
        t.push(row![z.re, z.im, w.re, w.im, e.re, e.im, p.re, p.im, se, ok]);
    }
    let frac = within as f64 / probes.len() as f64;
    let pass = frac >= 0.95;
    let summary = json!({
        "tau": [tau.re, tau.im],
        "sigma": [sigma.re, sigma.im],
        "probes": probes.len(),
        "fraction_within_5se": frac,
        "pass": pass,
    });
    Ok(Report { tables: vec![t], summary, statistical_pass: pass })
}
