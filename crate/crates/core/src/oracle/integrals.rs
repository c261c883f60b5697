//! Defining integrals of the special functions in [`crate::specfun`],
//! evaluated by adaptive quadrature.

use crate::error::Result;
use crate::oracle::quadrature::{quad_with, QuadOptions};
use crate::specfun::{Gauss2F1BranchParams, Gauss2F1IntParams, KummerParams};
use crate::special::{factorial, gamma};

/// Euler integral of `2F1(n, r; s; -zeta)`.
pub fn gauss2f1_integer_euler(p: &Gauss2F1IntParams, tol: f64) -> Result<f64> {
    p.validate()?;
    let Gauss2F1IntParams { n, r, s, zeta } = *p;
    let g = |t: f64| t.powi(r as i32 - 1) * (1.0 - t).powi((s - r - 1) as i32) / (1.0 + zeta * t).powi(n as i32);
    let q = quad_with(g, 0.0, 1.0, &QuadOptions::with_tol(tol))?;
    Ok(factorial(s - 1) / (factorial(r - 1) * factorial(s - r - 1)) * q.value)
}

/// Euler integral of `2F1(n, 1 - mu; s - mu + 2; -zeta)`.
pub fn gauss2f1_branch_euler(p: &Gauss2F1BranchParams, tol: f64) -> Result<f64> {
    p.validate()?;
    let Gauss2F1BranchParams { n, s, mu, zeta } = *p;
    let g = |t: f64| t.powf(-mu) * (1.0 - t).powi(s as i32) / (1.0 + zeta * t).powi(n as i32);
    let q = quad_with(g, 0.0, 1.0, &QuadOptions::with_tol(tol).endpoint_power(mu))?;
    Ok(gamma(s as f64 - mu + 2.0) / (gamma(1.0 - mu) * factorial(s)) * q.value)
}

/// `U(a, b, w) = 1/Gamma(a) int_0^inf e^{-wt} t^{a-1} (1+t)^{b-a-1} dt`.
pub fn kummer_u_laplace(p: &KummerParams, tol: f64) -> Result<f64> {
    p.validate()?;
    let (a, b) = p.ab();
    let w = p.omega;
    let g = |t: f64| (-w * t).exp() * t.powf(a - 1.0) * (1.0 + t).powf(b - a - 1.0);
    let mut opts = QuadOptions::with_tol(tol);
    if a < 1.0 {
        opts = opts.endpoint_power(1.0 - a);
    }
    Ok(quad_with(g, 0.0, f64::INFINITY, &opts)?.value / gamma(a))
}
