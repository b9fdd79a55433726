//! Attractor points of a charge.
//!
//! The analytic solutions of `γ = Re(C̄ e^{B+iJ})` for positive rank and for
//! sheaves pushed forward from a divisor, the `c3` bounds that follow from
//! them, the existence predicates built on those bounds, and a derivative-free
//! minimizer of `|Z|²/∫J³` used as an independent check.

mod bounds;
mod central;
mod minimize;
mod newton;
pub mod numeric;
mod solve;

pub use bounds::{c3_bound, c3_bound_ample, surface_existence_check, threefold_existence_check};
pub use central::{central_charge, charge_map, z_norm_sq, ChargeVector, ZETA3};
pub use minimize::{minimize_z_norm, z_norm_gradient, MinimizeOptions, MinimizeOutcome, MinimizeStatus};
pub use newton::{solve_h_tilde, HTildeRoot};
pub use solve::{
    solve_positive_rank, solve_rank_zero, solve_rank_zero_signed, AttVerdict, AttractorError, AttractorSolution,
    Branch, RESIDUAL_LIMIT, SATURATION_TOL,
};
