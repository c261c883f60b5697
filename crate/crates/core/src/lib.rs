//! Hadamard finite-part integrals of entire functions and their use in exact
//! small-parameter evaluation of generalized Stieltjes transforms
//! `int_0^a x^{-nu} f(x) / (omega + x)^n dx`.
//!
//! The transform is split into a "naive" series of finite-part integrals and
//! a singular contribution from the pole at `x = -omega`; both are reported.

// `!(x < y)` is how NaN gets rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotic;
pub mod entire_fn;
pub mod error;
pub mod finite_part;
pub mod oracle;
pub mod specfun;
pub mod special;
pub mod stieltjes;
pub mod sweep;

pub use asymptotic::{classify, leading_term, LeadingBehavior, LeadingKind};
pub use entire_fn::{CustomFn, Descriptor, TaylorFunction, ZeroOrder};
pub use error::{Error, Result};
pub use finite_part::{fpi, FpiMethod, FpiRequest, FpiValue, SeriesOptions};
pub use oracle::quadrature::{quad_adaptive, QuadratureResult};
pub use stieltjes::{ExpansionResult, TransformOptions, TransformSpec};
