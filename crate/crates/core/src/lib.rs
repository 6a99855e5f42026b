//! Heat flow `e^{-τD²/2}` on entire functions and on the Gaussian analytic
//! function (GAF).
//!
//! The crate is organised bottom-up:
//!
//! * [`funcs`]: polynomials, the closed class `exp(az²/2 + bz + c)·p(z)`,
//!   truncated Taylor series in the Weyl basis `z^n/√n!`, Hermite polynomials
//!   and order/type estimation.
//! * [`heatflow`]: the heat operator in closed form and termwise, a
//!   well-conditioned Hermite-sum evaluator for flowed series, and exact
//!   reference families (Mehler kernel, `sin πz²`, `e^{az} sin πz`, Jacobi theta).
//! * [`zeros`]: Aberth root finding, zero continuation in `τ`, and the
//!   velocity / Calogero–Moser / moment formulas for moving zeros.
//! * [`gaf`]: sampling, conditioning, the translations `T_a`, the normalised
//!   flow `V_τ` and the zero-drift experiment.
//! * [`metaplectic`]: `SL(2;ℝ)` ↔ `SU(1,1)`, the rotation/positive
//!   factorisation and the projective action `V(A)`.
//! * [`stats`]: Monte Carlo covariance estimates and two-sample tests.
//!
//! Runnable walkthroughs live in `crates/core/examples/`:
//!
//! | example | shows |
//! |---|---|
//! | `closed_form_flow` | flowing `e^{z²/2}` to `τ = −3/4`, semigroup checks |
//! | `mehler` | Hermite partial sums against the Mehler kernel |
//! | `sine_square_zeros` | tracking zeros of `sin πz²` against the closed form |
//! | `theta_lattice` | zeros of a flowed theta function on the sheared lattice |
//! | `calogero_moser` | polynomial zeros obeying `z'' = −2Σ(z_j−z_k)^{-3}` |
//! | `derivative_formulas` | genus-1/2 velocities, moments and third derivatives |
//! | `gaf_invariance` | covariance of `V_τG` against `e^{zw̄}` |
//! | `zero_drift` | anchored zeros drifting along `a + τā` |
//! | `metaplectic` | composition signs, rotation by `2π`, factorisation |
//! | `hyperbolic` | invariance of the flowed-GAF covariance under disk isometries |

pub mod error;
pub mod funcs;
pub mod gaf;
pub mod heatflow;
pub mod metaplectic;
pub mod rng;
pub mod stats;
pub mod zeros;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Library version embedded in experiment outputs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
