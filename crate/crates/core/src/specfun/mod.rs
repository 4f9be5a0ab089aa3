//! Special functions and generic numeric kernels.

mod bessel;
mod config;
mod gamma;
mod lambert;
mod quadrature;
mod roots;

pub use bessel::{bessel_i_scaled, ln_bessel_i_scaled};
pub use config::NumericConfig;
pub use gamma::{factorial, ln_factorial, lower_gamma_regularized, upper_gamma_regularized};
pub use lambert::{lambert_w0, lambert_wm1, BRANCH_POINT_GUARD};
pub use quadrature::{
    integrate_finite, integrate_finite_estimate, integrate_semi_infinite,
    integrate_semi_infinite_estimate, integrate_semi_infinite_scaled, QuadEstimate,
};
pub use roots::solve_monotone_decreasing;
