//! Dominant small-`omega` behavior of `S_n^a[f]`, read off from the zero
//! order `m` of `f` at the origin and its first non-zero coefficient `d0`.

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::entire_fn::TaylorFunction;
use crate::error::{Error, Result};
use crate::finite_part::{check_nu, fpi, SeriesOptions};
use crate::special::{factorial, inv_factorial, pochhammer, sign_pow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LeadingKind {
    /// `S ~ coefficient * ln(omega)`.
    LogDominant,
    /// `S ~ coefficient * omega^exponent`, `exponent < 0`.
    PowerDominant,
    /// `S ~ FP int_0^a f(x) x^{-n-nu} dx`.
    NaiveDominant,
    /// `S ~ coefficient * omega^{m-n+1-nu}`.
    BranchPowerDominant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadingBehavior {
    pub kind: LeadingKind,
    pub coefficient: f64,
    pub exponent: f64,
    pub carries_log: bool,
}

impl LeadingBehavior {
    pub fn value_at(&self, omega: f64) -> f64 {
        let v = self.coefficient * omega.powf(self.exponent);
        if self.carries_log {
            v * omega.ln()
        } else {
            v
        }
    }
}

fn rational_factorial(n: usize) -> BigRational {
    (1..=n).fold(BigRational::one(), |acc, k| acc * BigRational::from_integer(k.into()))
}

/// `sum_{k=0}^{n-s} (-1)^{n-s-k} (n-s)! / (k! (n-1-k) (n-s-k)!)`, exactly.
fn power_case_sum(n: usize, s: usize) -> f64 {
    let top = n - s;
    let top_fact = rational_factorial(top);
    let mut sum = BigRational::zero();
    for k in 0..=top {
        let denom = rational_factorial(k) * BigRational::from_integer((n - 1 - k).into()) * rational_factorial(top - k);
        let term = &top_fact / denom;
        if (top - k).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum.to_f64().unwrap_or(f64::NAN)
}

/// Leading coefficient of the singular contribution for `0 < nu < 1`, `m <= n - 1`.
fn branch_case_coefficient(d0: f64, m: usize, n: usize, nu: f64) -> f64 {
    let shift = m as i64 - n as i64 + 1;
    let sum: f64 = (0..n)
        .map(|k| {
            sign_pow(k as i64) * pochhammer(nu, k) * inv_factorial(shift + k as i64)
                / (factorial(k) * factorial(n - 1 - k))
        })
        .sum();
    PI * d0 * factorial(m) * sign_pow(shift) / (PI * nu).sin() * sum
}

/// Classifies the leading behavior of `int_0^a x^{-nu} f(x)/(omega+x)^n dx` as `omega -> 0`.
///
/// `a` only enters the naive-dominant case, where the coefficient is the
/// finite-part integral itself.
pub fn classify(f: &TaylorFunction, n: usize, nu: f64, a: f64) -> Result<LeadingBehavior> {
    if n < 1 {
        return Err(Error::domain("transform order n must be at least 1"));
    }
    check_nu(nu, true)?;
    let m = f.zero_order()?.0;
    let d0 = f.coeff(m);
    let naive = || -> Result<LeadingBehavior> {
        Ok(LeadingBehavior {
            kind: LeadingKind::NaiveDominant,
            coefficient: fpi(f, n, nu, a, &SeriesOptions::default())?.value,
            exponent: 0.0,
            carries_log: false,
        })
    };
    if m >= n {
        return naive();
    }
    if nu != 0.0 {
        return Ok(LeadingBehavior {
            kind: LeadingKind::BranchPowerDominant,
            coefficient: branch_case_coefficient(d0, m, n, nu),
            exponent: m as f64 - n as f64 + 1.0 - nu,
            carries_log: false,
        });
    }
    if m == n - 1 {
        return Ok(LeadingBehavior {
            kind: LeadingKind::LogDominant,
            coefficient: -d0,
            exponent: 0.0,
            carries_log: true,
        });
    }
    let s = n - m;
    Ok(LeadingBehavior {
        kind: LeadingKind::PowerDominant,
        coefficient: d0 * power_case_sum(n, s),
        exponent: -((s - 1) as f64),
        carries_log: false,
    })
}

/// The classified leading term evaluated at `omega`.
pub fn leading_term(f: &TaylorFunction, n: usize, nu: f64, a: f64, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::domain(format!("omega must be positive, got {omega}")));
    }
    Ok(classify(f, n, nu, a)?.value_at(omega))
}
