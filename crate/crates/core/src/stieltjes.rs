//! Generalized Stieltjes transforms `S = int_0^a x^{-nu} f(x) / (omega + x)^n dx`
//! evaluated exactly as a naive series of finite-part integrals plus the
//! singular contribution of the pole at `x = -omega`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entire_fn::TaylorFunction;
use crate::error::{Error, Result};
use crate::finite_part::{check_nu, fpi, SeriesOptions, Truncation};
use crate::oracle::quadrature::{quad_with, QuadOptions, QuadratureResult};
use crate::special::{binom_neg, factorial, pochhammer, sign_pow};

/// One generalized Stieltjes evaluation.
#[derive(Debug, Clone)]
pub struct TransformSpec {
    pub f: TaylorFunction,
    pub n: usize,
    pub nu: f64,
    pub omega: f64,
    pub a: f64,
}

impl TransformSpec {
    pub fn new(f: TaylorFunction, n: usize, nu: f64, omega: f64, a: f64) -> Result<Self> {
        let spec = TransformSpec { f, n, nu, omega, a };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::domain("transform order n must be at least 1"));
        }
        check_nu(self.nu, true)?;
        check_omega(self.omega, self.a)
    }
}

fn check_omega(omega: f64, a: f64) -> Result<()> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::domain(format!("omega must be positive, got {omega}")));
    }
    if !(omega < a) {
        return Err(Error::domain(format!(
            "expansion requires omega < a (omega = {omega}, a = {a})"
        )));
    }
    Ok(())
}

/// `(k, binom(-n, k) omega^k, FP integral)` for one naive-series term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub k: usize,
    pub weight: f64,
    pub fpi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionResult {
    pub naive_sum: f64,
    pub singular: f64,
    pub total: f64,
    pub k_used: usize,
    pub tail_estimate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_term: Option<Vec<TermRecord>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformOptions {
    /// Relative truncation tolerance of the naive series.
    pub tol: f64,
    /// Largest naive-series index `k` tried before giving up.
    pub k_max: usize,
    pub keep_terms: bool,
    /// Controls for the finite-part integrals inside each term.
    pub fpi: SeriesOptions,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions {
            tol: 1e-12,
            k_max: 10_000,
            keep_terms: false,
            fpi: SeriesOptions::default(),
        }
    }
}

impl TransformOptions {
    pub fn with_tol(tol: f64) -> Self {
        TransformOptions {
            tol,
            ..Default::default()
        }
    }
}

/// `-f(-w) ln w` for `n = 1`; otherwise
/// `-f^{(n-1)}(-w) ln w/(n-1)! + sum_{k<n-1} f^{(k)}(-w) / (k! (n-1-k) w^{n-k-1})`.
pub fn singular_term_integer(f: &TaylorFunction, n: usize, omega: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("transform order n must be at least 1"));
    }
    let x = -omega;
    let mut s = -f.derivative_at(n - 1, x)? * omega.ln() / factorial(n - 1);
    for k in 0..n - 1 {
        s += f.derivative_at(k, x)? / (factorial(k) * (n - 1 - k) as f64 * omega.powi((n - k - 1) as i32));
    }
    Ok(s)
}

/// `pi/(sin(pi nu) w^nu) sum_{k<n} f^{(n-1-k)}(-w) (nu)_k / (k! (n-1-k)! w^k)`.
pub fn singular_term_branch(f: &TaylorFunction, n: usize, nu: f64, omega: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("transform order n must be at least 1"));
    }
    check_nu(nu, false)?;
    let x = -omega;
    let mut s = 0.0;
    for k in 0..n {
        s += f.derivative_at(n - 1 - k, x)? * pochhammer(nu, k)
            / (factorial(k) * factorial(n - 1 - k) * omega.powi(k as i32));
    }
    Ok(PI / ((PI * nu).sin() * omega.powf(nu)) * s)
}

/// `|t| rho / (1 - rho)` from the last two nonzero term sizes.
fn observed_tail(last: f64, prev: f64) -> f64 {
    if last == 0.0 {
        return 0.0;
    }
    let rho = if prev > 0.0 { last / prev } else { 0.0 };
    if rho < 1.0 {
        last * rho / (1.0 - rho)
    } else {
        f64::INFINITY
    }
}

const MAJORANT_TERMS: usize = 10_000;

/// `sum_k |c_k| a^k`, which dominates `|f|` on `|z| <= a`.
fn majorant(f: &TaylorFunction, a: f64) -> f64 {
    let end = f.coeff_end().unwrap_or(MAJORANT_TERMS);
    let (mut sum, mut small) = (0.0, 0);
    for k in 0..end {
        let c = f.coeff(k);
        if c == 0.0 {
            continue;
        }
        let t = c.abs() * a.powi(k as i32);
        sum += t;
        if !sum.is_finite() {
            return f64::INFINITY;
        }
        small = if t <= 1e-17 * sum { small + 1 } else { 0 };
        if small >= 4 {
            return sum;
        }
    }
    if f.coeff_end().is_some() {
        sum
    } else {
        f64::INFINITY
    }
}

/// Bound on `|FP int_0^a f x^{-N-nu} dx| * a^{N+nu-1}`, uniform in `N`.
///
/// Each term `c_k a^{k+1-N-nu}/(k+1-N-nu)` has a denominator of size at
/// least `min(nu, 1-nu)`, or 1 for poles, where the log term adds `|ln a|`.
fn fp_bound_constant(f: &TaylorFunction, nu: f64, a: f64) -> f64 {
    let spread = if nu == 0.0 {
        1.0 + a.ln().abs()
    } else {
        1.0 / nu.min(1.0 - nu)
    };
    majorant(f, a) * spread
}

/// `sum_{k > after} binom(n+k-1, k) rho^k`.
fn binomial_tail(n: usize, rho: f64, after: usize) -> f64 {
    if !(rho < 1.0) {
        return f64::INFINITY;
    }
    let mut term = 1.0;
    for k in 1..=after {
        term *= (n + k - 1) as f64 / k as f64 * rho;
    }
    let mut sum = 0.0;
    for k in after + 1..after + 1_000_000 {
        let ratio = (n + k - 1) as f64 / k as f64 * rho;
        term *= ratio;
        sum += term;
        if ratio < 1.0 && term <= 1e-17 * sum || sum == 0.0 {
            return sum;
        }
    }
    f64::INFINITY
}

/// Sums `weight(k) * fpi(f, order(k), nu, a)` with the transform truncation rule.
///
/// `remainder(k)` bounds everything after term `k`; where it is `None`
/// (infinite `a`) the tail is estimated from the observed term ratio.
#[allow(clippy::too_many_arguments)]
fn naive_series(
    f: &TaylorFunction,
    nu: f64,
    a: f64,
    singular: f64,
    remainder: &dyn Fn(usize) -> Option<f64>,
    opts: &TransformOptions,
    weight: impl Fn(usize) -> f64,
    order: impl Fn(usize) -> usize,
) -> Result<ExpansionResult> {
    let mut naive = 0.0;
    let mut rule = Truncation::new(opts.tol);
    let mut per_term = opts.keep_terms.then(Vec::new);
    let (mut last, mut prev) = (0.0, 0.0);
    for k in 0..=opts.k_max {
        let w = weight(k);
        let value = fpi(f, order(k), nu, a, &opts.fpi)?.value;
        let term = w * value;
        naive += term;
        if term != 0.0 || last == 0.0 {
            prev = last;
            last = term.abs();
        }
        if let Some(list) = per_term.as_mut() {
            list.push(TermRecord {
                k,
                weight: w,
                fpi: value,
            });
        }
        let result = |k_used| ExpansionResult {
            naive_sum: naive,
            singular,
            total: naive + singular,
            k_used,
            tail_estimate: remainder(k_used).unwrap_or_else(|| observed_tail(last, prev)),
            per_term: per_term.clone(),
        };
        if !naive.is_finite() {
            return Err(Error::ExpansionNonConvergence(Box::new(result(k))));
        }
        if rule.accept(term, false, naive + singular) {
            return Ok(result(k));
        }
    }
    Err(Error::ExpansionNonConvergence(Box::new(ExpansionResult {
        naive_sum: naive,
        singular,
        total: naive + singular,
        k_used: opts.k_max,
        tail_estimate: remainder(opts.k_max).unwrap_or_else(|| observed_tail(last, prev)),
        per_term,
    })))
}

/// `|binom(-n,k) w^k FP_{n+k}| <= C a^{1-n-nu} binom(n+k-1,k) (w/a)^k`.
fn linear_remainder(spec: &TransformSpec) -> impl Fn(usize) -> Option<f64> + '_ {
    let a = spec.a;
    let scale = a
        .is_finite()
        .then(|| fp_bound_constant(&spec.f, spec.nu, a) * a.powf(1.0 - spec.n as f64 - spec.nu));
    move |k| scale.map(|c| c * binomial_tail(spec.n, spec.omega / a, k))
}

/// Exact expansion for `nu = 0`.
pub fn eval_integer(spec: &TransformSpec, opts: &TransformOptions) -> Result<ExpansionResult> {
    spec.validate()?;
    if spec.nu != 0.0 {
        return Err(Error::domain("eval_integer needs nu = 0"));
    }
    let singular = singular_term_integer(&spec.f, spec.n, spec.omega)?;
    let (n, w) = (spec.n, spec.omega);
    let remainder = linear_remainder(spec);
    naive_series(
        &spec.f,
        0.0,
        spec.a,
        singular,
        &remainder,
        opts,
        |k| binom_neg(n, k) * w.powi(k as i32),
        |k| n + k,
    )
}

/// Exact expansion for `0 < nu < 1`.
pub fn eval_branch(spec: &TransformSpec, opts: &TransformOptions) -> Result<ExpansionResult> {
    spec.validate()?;
    check_nu(spec.nu, false)?;
    let singular = singular_term_branch(&spec.f, spec.n, spec.nu, spec.omega)?;
    let (n, w) = (spec.n, spec.omega);
    let remainder = linear_remainder(spec);
    naive_series(
        &spec.f,
        spec.nu,
        spec.a,
        singular,
        &remainder,
        opts,
        |k| binom_neg(n, k) * w.powi(k as i32),
        |k| n + k,
    )
}

/// Dispatches on `spec.nu`.
pub fn eval(spec: &TransformSpec, opts: &TransformOptions) -> Result<ExpansionResult> {
    if spec.nu == 0.0 {
        eval_integer(spec, opts)
    } else {
        eval_branch(spec, opts)
    }
}

/// `int_0^a f(x) / (w^2 + x^2) dx` as
/// `sum_k (-1)^k w^{2k} FP int f/x^{2k+2} + pi/(2w) Re f(iw) - ln(w)/w Im f(iw)`.
pub fn eval_quadratic(f: &TaylorFunction, omega: f64, a: f64, opts: &TransformOptions) -> Result<ExpansionResult> {
    check_omega(omega, a)?;
    let fi = f.eval_complex(Complex64::new(0.0, omega))?;
    let singular = PI / (2.0 * omega) * fi.re - omega.ln() / omega * fi.im;
    let w2 = omega * omega;
    let remainder = |k: usize| {
        a.is_finite().then(|| {
            let rho = w2 / (a * a);
            fp_bound_constant(f, 0.0, a) / a * rho.powi(k as i32 + 1) / (1.0 - rho)
        })
    };
    naive_series(
        f,
        0.0,
        a,
        singular,
        &remainder,
        opts,
        |k| sign_pow(k as i64) * w2.powi(k as i32),
        |k| 2 * k + 2,
    )
}

/// `kappa [1 + Q(g_plus) + Q(g_minus)]` with `Q` the quadratic-kernel
/// transform over `[0, inf)` at `omega = 1/Pe`.
pub fn effective_diffusivity(g_plus: &TaylorFunction, g_minus: &TaylorFunction, pe: f64, kappa: f64) -> Result<f64> {
    if !(pe > 0.0 && pe.is_finite()) {
        return Err(Error::domain(format!("Peclet number must be positive, got {pe}")));
    }
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::domain(format!("kappa must be positive, got {kappa}")));
    }
    let opts = TransformOptions::default();
    let omega = 1.0 / pe;
    let plus = eval_quadratic(g_plus, omega, f64::INFINITY, &opts)?.total;
    let minus = eval_quadratic(g_minus, omega, f64::INFINITY, &opts)?.total;
    Ok(kappa * (1.0 + plus + minus))
}

fn oracle_options(tol: f64, nu: f64) -> QuadOptions {
    let opts = QuadOptions::with_tol(tol);
    if nu > 0.0 {
        opts.endpoint_power(nu)
    } else {
        opts
    }
}

/// Direct quadrature of the transform, for comparison with [`eval`].
pub fn transform_quadrature(spec: &TransformSpec, tol: f64) -> Result<QuadratureResult> {
    let (n, nu, w) = (spec.n as i32, spec.nu, spec.omega);
    let f = &spec.f;
    let g = |x: f64| f.eval(x) * x.powf(-nu) / (w + x).powi(n);
    quad_with(g, 0.0, spec.a, &oracle_options(tol, nu))
}

/// Direct quadrature of `int_0^a f(x) / (w^2 + x^2) dx`.
pub fn quadratic_quadrature(f: &TaylorFunction, omega: f64, a: f64, tol: f64) -> Result<QuadratureResult> {
    let w2 = omega * omega;
    quad_with(|x: f64| f.eval(x) / (w2 + x * x), 0.0, a, &oracle_options(tol, 0.0))
}
