//! Hadamard finite-part integrals `FP int_0^a f(x) x^{-m-nu} dx` of entire `f`.
//!
//! Finite upper limits are summed from the Maclaurin coefficients of `f`.
//! Infinite upper limits use a registered closed form when one exists and
//! otherwise split the range at `a0 = 1`: the finite part over `[0, a0]` plus an
//! ordinary integral over `[a0, inf)`. The finite part only concerns the origin,
//! so the split is exact.

use serde::{Deserialize, Serialize};

use crate::entire_fn::{Descriptor, TaylorFunction};
use crate::error::{Error, Result};
use crate::oracle::quadrature::{quad_with, QuadOptions};
use crate::special::{digamma_int, factorial, gamma, sign_pow, PI};

/// Branch exponents this close to 0 or 1 are rejected.
pub const NU_GUARD: f64 = 1e-12;

/// Split point used for infinite upper limits without a closed form.
pub const SPLIT_POINT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FpiMethod {
    SeriesFinite,
    ClosedForm,
    SplitInfinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FpiValue {
    pub value: f64,
    pub method: FpiMethod,
    pub terms_used: usize,
    pub tail_bound: f64,
}

impl FpiValue {
    fn closed(value: f64) -> Self {
        FpiValue {
            value,
            method: FpiMethod::ClosedForm,
            terms_used: 0,
            tail_bound: 0.0,
        }
    }
}

/// Truncation controls for coefficient series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesOptions {
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            tol: 1e-15,
            max_terms: 10_000,
        }
    }
}

/// A finite-part query `FP int_0^a f(x) x^{-m-nu} dx`; `a` may be infinite.
#[derive(Debug, Clone)]
pub struct FpiRequest {
    pub f: TaylorFunction,
    pub m: usize,
    pub nu: f64,
    pub a: f64,
}

impl FpiRequest {
    pub fn new(f: TaylorFunction, m: usize, nu: f64, a: f64) -> Result<Self> {
        let req = FpiRequest { f, m, nu, a };
        req.validate()?;
        Ok(req)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::domain("pole order m must be at least 1"));
        }
        check_nu(self.nu, true)?;
        if !(self.a > 0.0) {
            return Err(Error::domain(format!("upper limit must be positive, got {}", self.a)));
        }
        Ok(())
    }

    pub fn evaluate(&self, opts: &SeriesOptions) -> Result<FpiValue> {
        self.validate()?;
        fpi(&self.f, self.m, self.nu, self.a, opts)
    }
}

pub(crate) fn check_nu(nu: f64, allow_zero: bool) -> Result<()> {
    if allow_zero && nu == 0.0 {
        return Ok(());
    }
    if !(nu > NU_GUARD && nu < 1.0 - NU_GUARD) {
        return Err(Error::domain(format!(
            "branch exponent must lie in (0, 1) away from the ends, got {nu}"
        )));
    }
    Ok(())
}

fn check_finite_limit(a: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("finite upper limit must be positive, got {a}")));
    }
    Ok(())
}

/// Accumulates a series and applies the two-consecutive-small-terms rule.
///
/// Terms whose coefficient is exactly zero neither count toward nor reset
/// the run, unless a run of 64 structural zeros has been seen.
pub(crate) struct Truncation {
    tol: f64,
    small: usize,
    zero_run: usize,
}

impl Truncation {
    pub(crate) fn new(tol: f64) -> Self {
        Truncation {
            tol,
            small: 0,
            zero_run: 0,
        }
    }

    /// Returns true once the series may stop after this term.
    pub(crate) fn accept(&mut self, term: f64, structural_zero: bool, total: f64) -> bool {
        if structural_zero {
            self.zero_run += 1;
            if self.zero_run < 64 {
                return false;
            }
        } else {
            self.zero_run = 0;
        }
        if term.abs() <= self.tol * total.abs() || (term == 0.0 && total == 0.0) {
            self.small += 1;
        } else {
            self.small = 0;
        }
        self.small >= 2
    }
}

/// `c * a^e` for real `e`, guarding against overflow of `a^e` alone.
fn scaled_powf(c: f64, a: f64, e: f64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    let p = a.powf(e);
    if p.is_finite() && p != 0.0 {
        c * p
    } else {
        c.signum() * (c.abs().ln() + e * a.ln()).exp()
    }
}

/// Finite part with a pole of order `m` at the origin and finite upper limit `a`.
pub fn fpi_pole_finite(f: &TaylorFunction, m: usize, a: f64, opts: &SeriesOptions) -> Result<FpiValue> {
    if m < 1 {
        return Err(Error::domain("pole order m must be at least 1"));
    }
    check_finite_limit(a)?;
    let ln_a = a.ln();
    let mut total = f.coeff(m - 1) * ln_a;
    for k in 0..m.saturating_sub(1) {
        let c = f.coeff(k);
        if c != 0.0 {
            total -= scaled_powf(c / (m - k - 1) as f64, a, -((m - k - 1) as f64));
        }
    }
    let term_at = |k: usize, c: f64| scaled_powf(c / (k - m + 1) as f64, a, (k - m + 1) as f64);
    sum_tail(f, m, total, term_at, opts, "finite-part series")
}

/// Finite part with a branch point `x^{-m-nu}`, `0 < nu < 1`, finite `a`.
pub fn fpi_branch_finite(f: &TaylorFunction, m: usize, nu: f64, a: f64, opts: &SeriesOptions) -> Result<FpiValue> {
    if m < 1 {
        return Err(Error::domain("pole order m must be at least 1"));
    }
    check_nu(nu, false)?;
    check_finite_limit(a)?;
    let exponent = |k: usize| k as f64 + 1.0 - m as f64 - nu;
    let mut total = 0.0;
    for k in 0..m {
        let c = f.coeff(k);
        if c != 0.0 {
            total += scaled_powf(c / exponent(k), a, exponent(k));
        }
    }
    let term_at = |k: usize, c: f64| scaled_powf(c / exponent(k), a, exponent(k));
    sum_tail(f, m, total, term_at, opts, "finite-part series")
}

/// Sum `term_at(k, c_k)` for `k >= start` onto `head`.
fn sum_tail<T: Fn(usize, f64) -> f64>(
    f: &TaylorFunction,
    start: usize,
    head: f64,
    term_at: T,
    opts: &SeriesOptions,
    what: &'static str,
) -> Result<FpiValue> {
    let mut total = head;
    if let Some(end) = f.coeff_end() {
        for k in start..end.max(start) {
            let c = f.coeff(k);
            if c != 0.0 {
                total += term_at(k, c);
            }
        }
        return Ok(FpiValue {
            value: total,
            method: FpiMethod::SeriesFinite,
            terms_used: end.saturating_sub(start),
            tail_bound: 0.0,
        });
    }
    let mut rule = Truncation::new(opts.tol);
    let mut last = 0.0;
    for (i, k) in (start..start + opts.max_terms).enumerate() {
        let c = f.coeff(k);
        let term = if c == 0.0 { 0.0 } else { term_at(k, c) };
        total += term;
        if term != 0.0 {
            last = term.abs();
        }
        if !total.is_finite() {
            break;
        }
        if rule.accept(term, c == 0.0, total) {
            return Ok(FpiValue {
                value: total,
                method: FpiMethod::SeriesFinite,
                terms_used: i + 1,
                tail_bound: last,
            });
        }
    }
    Err(Error::NonConvergence {
        what,
        partial: total,
        terms: opts.max_terms,
    })
}

/// `FP int_0^inf e^{-bx} x^{-m} dx = (-1)^m b^{m-1} (ln b - psi(m)) / (m-1)!`.
pub fn exp_pole_closed_form(b: f64, m: usize) -> f64 {
    sign_pow(m as i64) * b.powi(m as i32 - 1) * (b.ln() - digamma_int(m)) / factorial(m - 1)
}

/// `FP int_0^inf e^{-bx} x^{-m-nu} dx = (-1)^m b^{m+nu-1} pi / (sin(pi nu) Gamma(m+nu))`.
pub fn exp_branch_closed_form(b: f64, m: usize, nu: f64) -> f64 {
    sign_pow(m as i64) * b.powf(m as f64 + nu - 1.0) * PI / ((PI * nu).sin() * gamma(m as f64 + nu))
}

/// Closed form at an infinite upper limit, when one is registered.
fn closed_form_infinite(f: &TaylorFunction, m: usize, nu: f64) -> Option<f64> {
    let s = f.scale();
    match f.descriptor() {
        Descriptor::Exponential { b } => Some(
            s * if nu == 0.0 {
                exp_pole_closed_form(*b, m)
            } else {
                exp_branch_closed_form(*b, m, nu)
            },
        ),
        // x^p e^{-bx} x^{-m-nu} = e^{-bx} x^{-(m-p)-nu}
        Descriptor::MonomialExp { p, b } => Some(
            s * if m > *p {
                let order = m - p;
                if nu == 0.0 {
                    exp_pole_closed_form(*b, order)
                } else {
                    exp_branch_closed_form(*b, order, nu)
                }
            } else {
                // convergent: int_0^inf x^{p-m-nu} e^{-bx} dx
                let shape = (p - m) as f64 + 1.0 - nu;
                gamma(shape) / b.powf(shape)
            },
        ),
        // Integrable polynomials have only the a^{-j} head terms, which vanish.
        Descriptor::Polynomial { .. } => Some(0.0),
        _ => None,
    }
}

fn check_integrable(f: &TaylorFunction, m: usize, nu: f64) -> Result<()> {
    let order = m as f64 + nu;
    if f.integrable_at_infinity(order) {
        Ok(())
    } else {
        Err(Error::DivergentAtInfinity { order })
    }
}

/// `FP int_0^inf f(x) x^{-m} dx`.
pub fn fpi_pole_infinite(f: &TaylorFunction, m: usize, opts: &SeriesOptions) -> Result<FpiValue> {
    if m < 1 {
        return Err(Error::domain("pole order m must be at least 1"));
    }
    check_integrable(f, m, 0.0)?;
    match closed_form_infinite(f, m, 0.0) {
        Some(v) => Ok(FpiValue::closed(v)),
        None => fpi_split_infinite(f, m, 0.0, SPLIT_POINT, opts),
    }
}

/// `FP int_0^inf f(x) x^{-m-nu} dx`, `0 < nu < 1`.
pub fn fpi_branch_infinite(f: &TaylorFunction, m: usize, nu: f64, opts: &SeriesOptions) -> Result<FpiValue> {
    if m < 1 {
        return Err(Error::domain("pole order m must be at least 1"));
    }
    check_nu(nu, false)?;
    check_integrable(f, m, nu)?;
    match closed_form_infinite(f, m, nu) {
        Some(v) => Ok(FpiValue::closed(v)),
        None => fpi_split_infinite(f, m, nu, SPLIT_POINT, opts),
    }
}

/// Infinite-range finite part by splitting at `a0`, bypassing closed forms.
pub fn fpi_split_infinite(f: &TaylorFunction, m: usize, nu: f64, a0: f64, opts: &SeriesOptions) -> Result<FpiValue> {
    check_nu(nu, true)?;
    check_integrable(f, m, nu)?;
    let head = fpi_finite(f, m, nu, a0, opts)?;
    let order = m as f64 + nu;
    let g = f.clone();
    let integrand = move |x: f64| g.eval(x) * x.powf(-order);
    let qopts = QuadOptions {
        rel_tol: 1e-14,
        abs_tol: 1e-16 * head.value.abs().max(1e-300),
        ..QuadOptions::default()
    };
    let tail = quad_with(integrand, a0, f64::INFINITY, &qopts)?;
    Ok(FpiValue {
        value: head.value + tail.value,
        method: FpiMethod::SplitInfinite,
        terms_used: head.terms_used,
        tail_bound: head.tail_bound + tail.abs_err_estimate,
    })
}

fn fpi_finite(f: &TaylorFunction, m: usize, nu: f64, a: f64, opts: &SeriesOptions) -> Result<FpiValue> {
    if nu == 0.0 {
        fpi_pole_finite(f, m, a, opts)
    } else {
        fpi_branch_finite(f, m, nu, a, opts)
    }
}

/// Dispatches on `nu` and on whether `a` is finite.
pub fn fpi(f: &TaylorFunction, m: usize, nu: f64, a: f64, opts: &SeriesOptions) -> Result<FpiValue> {
    check_nu(nu, true)?;
    if a == f64::INFINITY {
        if nu == 0.0 {
            fpi_pole_infinite(f, m, opts)
        } else {
            fpi_branch_infinite(f, m, nu, opts)
        }
    } else {
        fpi_finite(f, m, nu, a, opts)
    }
}

/// Closed-form finite sums for polynomial `f` (including binomial polynomials).
///
/// The three `nu = 0` regimes are `m <= r` (an ordinary integral),
/// `m >= s + 2` (only the `a^{-j}` terms), and `r + 1 <= m <= s + 1`, where
/// `r` is the zero order and `s` the degree.
pub fn fpi_polynomial(f: &TaylorFunction, m: usize, nu: f64, a: f64) -> Result<FpiValue> {
    let s = f
        .degree()
        .ok_or_else(|| Error::domain("fpi_polynomial needs a polynomial descriptor"))?;
    if m < 1 {
        return Err(Error::domain("pole order m must be at least 1"));
    }
    check_nu(nu, true)?;
    if a == f64::INFINITY {
        if let Descriptor::BinomialPoly { .. } = f.descriptor() {
            return Err(Error::DivergentAtInfinity { order: m as f64 + nu });
        }
        check_integrable(f, m, nu)?;
        return Ok(FpiValue::closed(0.0));
    }
    check_finite_limit(a)?;
    let r = f.zero_order()?.0;
    let coeff = |k: usize| f.coeff(k);
    let convergent = |k: usize| coeff(k) * a.powi((k + 1 - m) as i32) / (k + 1 - m) as f64;
    let head = |k: usize| coeff(k) / ((m - k - 1) as f64 * a.powi((m - k - 1) as i32));
    let value = if nu != 0.0 {
        (r..=s)
            .map(|k| {
                let e = k as f64 + 1.0 - m as f64 - nu;
                coeff(k) * a.powf(e) / e
            })
            .sum()
    } else if m <= r {
        (r..=s).map(convergent).sum()
    } else if m >= s + 2 {
        -(r..=s).map(head).sum::<f64>()
    } else {
        let below: f64 = (r..m - 1).map(head).sum();
        let above: f64 = (m..=s).map(convergent).sum();
        coeff(m - 1) * a.ln() - below + above
    };
    Ok(FpiValue::closed(value))
}
