//! Parsing of complex literals, τ paths and function specs.

use crate::CliError;
use gafheat::funcs::{taylor_of_expquadpoly, ComplexPoly, ExpQuadPoly, ExpQuadSum, TaylorFunction};
use gafheat::gaf::sample_gaf;
use gafheat::heatflow::{exp_sine_sum, sin_pi_z2_sum, theta_coeffs};
use gafheat::C64;
use std::path::Path;

fn bad(s: &str, what: &str) -> CliError {
    CliError::Parse(format!("cannot parse {what} from {s:?}"))
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` (also with `j`).
pub fn parse_complex(s: &str) -> Result<C64, CliError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad(s, "a complex number"));
    }
    let imag_unit = t.ends_with('i') || t.ends_with('j');
    if !imag_unit {
        return t.parse::<f64>().map(|x| C64::new(x, 0.0)).map_err(|_| bad(s, "a complex number"));
    }
    let body = &t[..t.len() - 1];
    // Split at the last sign that is not a leading sign or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let coef = |x: &str| -> Result<f64, CliError> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad(s, "a complex number")),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad(s, "a complex number"))?;
            Ok(C64::new(re, coef(&body[k..])?))
        }
        None => Ok(C64::new(0.0, coef(body)?)),
    }
}

pub fn parse_complex_list(s: &str) -> Result<Vec<C64>, CliError> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse_complex).collect()
}

/// `a:b:steps` → `steps + 1` equally spaced real nodes.
pub fn parse_tau_path(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad(s, "a tau path a:b:steps"));
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad(s, "a tau path a:b:steps"))?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad(s, "a tau path a:b:steps"))?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad(s, "a tau path a:b:steps"))?;
    if n == 0 {
        return Err(CliError::Parse("tau path needs at least one step".into()));
    }
    Ok((0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect())
}

/// A function the commands can flow.
#[derive(Debug, Clone, PartialEq)]
pub enum Function {
    Closed(ExpQuadPoly),
    Sum(ExpQuadSum),
    Taylor(TaylorFunction),
}

impl Function {
    /// Taylor expansion used to locate initial zeros of non-polynomial inputs.
    pub fn to_taylor(&self, n_max: usize) -> Result<TaylorFunction, CliError> {
        match self {
            Function::Taylor(t) => Ok(t.clone()),
            Function::Closed(f) => Ok(taylor_of_expquadpoly(f, n_max)?),
            Function::Sum(s) => {
                let mut acc = vec![C64::new(0.0, 0.0); n_max + 1];
                for term in &s.terms {
                    let t = taylor_of_expquadpoly(term, n_max)?;
                    for (a, c) in acc.iter_mut().zip(t.weyl()) {
                        *a += c;
                    }
                }
                let (rho, sigma) = s.growth();
                Ok(TaylorFunction::with_growth(acc, rho, sigma))
            }
        }
    }
}

fn expquad_literal(body: &str, spec: &str) -> Result<ExpQuadPoly, CliError> {
    let parts: Vec<&str> = body.split(';').collect();
    if parts.len() != 4 {
        return Err(CliError::Parse(format!("expquad spec needs quad;lin;const;c0,c1,.. in {spec:?}")));
    }
    let poly = ComplexPoly::new(parse_complex_list(parts[3])?);
    Ok(ExpQuadPoly::new(parse_complex(parts[0])?, parse_complex(parts[1])?, parse_complex(parts[2])?, poly))
}

fn read_weyl_file(path: &Path) -> Result<TaylorFunction, CliError> {
    let text = std::fs::read_to_string(path)?;
    let coeffs = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_complex)
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs.is_empty() {
        return Err(CliError::Parse(format!("no coefficients in {}", path.display())));
    }
    Ok(TaylorFunction::from_weyl(coeffs))
}

/// Parses a function spec:
///
/// * `poly:c0,c1,...` (ascending ordinary coefficients)
/// * `expquad:quad;lin;const;c0,c1,...` for `exp(quad z²/2 + lin z + const)·p(z)`
/// * `taylor:FILE` with one Weyl coefficient per line
/// * `builtin:sin_pi_z2`, `builtin:theta[:σ]` (σ defaults to i),
///   `builtin:exp_sine[:a1]` (a1 defaults to 1)
/// * `gaf` for a GAF sample drawn from `(seed, 0)`
pub fn parse_function(spec: &str, n_max: usize, seed: u64) -> Result<Function, CliError> {
    let (kind, body) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "poly" => Ok(Function::Closed(ExpQuadPoly::from_poly(ComplexPoly::new(parse_complex_list(body)?)))),
        "expquad" => Ok(Function::Closed(expquad_literal(body, spec)?)),
        "taylor" => Ok(Function::Taylor(read_weyl_file(Path::new(body))?)),
        "gaf" => Ok(Function::Taylor(sample_gaf(n_max, seed).taylor)),
        "builtin" => {
            let (name, arg) = body.split_once(':').unwrap_or((body, ""));
            match name {
                "sin_pi_z2" => Ok(Function::Sum(sin_pi_z2_sum())),
                "theta" => {
                    let sigma = if arg.is_empty() { C64::new(0.0, 1.0) } else { parse_complex(arg)? };
                    Ok(Function::Taylor(theta_coeffs(sigma, n_max)?))
                }
                "exp_sine" => {
                    let a1 = if arg.is_empty() { C64::new(1.0, 0.0) } else { parse_complex(arg)? };
                    Ok(Function::Sum(exp_sine_sum(a1)))
                }
                _ => Err(CliError::Parse(format!("unknown builtin {name:?} (sin_pi_z2, theta, exp_sine)"))),
            }
        }
        _ => Err(CliError::Parse(format!("unknown function spec {spec:?}"))),
    }
}
