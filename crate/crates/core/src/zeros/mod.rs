//! Root finding, zero continuation in `τ`, and the ODEs governing moving zeros.

mod dynamics;
mod roots;
mod track;

pub use dynamics::{
    acceleration, aux_derivatives, aux_from_function, moment_derivative, regularized_m2,
    rescaled_velocity, third_derivative, truncated_system_step, velocity_poly, velocity_s1,
    velocity_s2, zero_velocity_simple, Case, MomentTable, SystemDerivatives, TruncatedSystem,
};
pub use roots::{find_roots, weyl_roots, ZeroSet};
pub use track::{newton_polish, track_zero, track_zeros, TrackControl, TrackStatus, ZeroTrajectory};
