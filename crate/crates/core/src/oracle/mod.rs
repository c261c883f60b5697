//! Independent reference engines used to check the series evaluators.

pub mod contour;
pub mod epsilon;
pub mod integrals;
pub mod quadrature;

pub use contour::{fpi_contour_oracle, fpi_contour_simpson};
pub use epsilon::fpi_epsilon_oracle;
pub use integrals::{gauss2f1_branch_euler, gauss2f1_integer_euler, kummer_u_laplace};
pub use quadrature::{quad_adaptive, quad_with, QuadOptions, QuadratureResult};
