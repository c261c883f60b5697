//! Convergent series for two families of special functions that arise as
//! Stieltjes transforms of entire functions:
//!
//! * Gauss `2F1(n, r; s; -zeta)` for integer `r + 1 < s < n + 1`, and
//!   `2F1(n, 1 - mu; s - mu + 2; -zeta)` for `0 < mu < 1`, both for `zeta > 1`;
//! * Kummer `U(s, s + 1 - n, omega)` for integer `s` and
//!   `U(a, a - n + 1, omega)` for `0 < a < 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_part::{Truncation, NU_GUARD};
use crate::special::{digamma_int, factorial, gamma, inv_factorial, multiset_binomial, sign_pow, EULER_GAMMA};

const SERIES_TOL: f64 = 1e-16;
const MAX_TERMS: usize = 100_000;

/// `2F1(n, r; s; -zeta)` with integer parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gauss2F1IntParams {
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub zeta: f64,
}

impl Gauss2F1IntParams {
    pub fn validate(&self) -> Result<()> {
        let Gauss2F1IntParams { n, r, s, zeta } = *self;
        if r < 1 || !(r + 1 < s && s < n + 1) {
            return Err(Error::domain(format!(
                "need 1 <= r, r + 1 < s < n + 1; got n={n} r={r} s={s}"
            )));
        }
        if !(zeta > 1.0 && zeta.is_finite()) {
            return Err(Error::domain(format!("need zeta > 1, got {zeta}")));
        }
        Ok(())
    }
}

/// `2F1(n, 1 - mu; s - mu + 2; -zeta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gauss2F1BranchParams {
    pub n: usize,
    pub s: usize,
    pub mu: f64,
    pub zeta: f64,
}

impl Gauss2F1BranchParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.s < 1 {
            return Err(Error::domain("need n, s >= 1"));
        }
        if !(self.mu > NU_GUARD && self.mu < 1.0 - NU_GUARD) {
            return Err(Error::domain(format!(
                "need 0 < mu < 1 away from the ends, got {}",
                self.mu
            )));
        }
        if !(self.zeta > 1.0 && self.zeta.is_finite()) {
            return Err(Error::domain(format!("need zeta > 1, got {}", self.zeta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KummerRegime {
    /// Integer `s <= n`.
    IntOrderNGeS,
    /// Integer `s > n`.
    IntOrderNLtS,
    /// Real `a` in `(0, 1)`.
    FracOrder,
}

/// `U(s, s + 1 - n, omega)` or, for [`KummerRegime::FracOrder`], `U(a, a - n + 1, omega)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KummerParams {
    pub regime: KummerRegime,
    /// `s` for the integer regimes, `a` for the fractional one.
    pub order: f64,
    pub n: usize,
    pub omega: f64,
}

impl KummerParams {
    /// Integer first parameter, with the regime taken from `s` and `n`.
    pub fn integer(s: usize, n: usize, omega: f64) -> Self {
        let regime = if s <= n {
            KummerRegime::IntOrderNGeS
        } else {
            KummerRegime::IntOrderNLtS
        };
        KummerParams {
            regime,
            order: s as f64,
            n,
            omega,
        }
    }

    pub fn fractional(a: f64, n: usize, omega: f64) -> Self {
        KummerParams {
            regime: KummerRegime::FracOrder,
            order: a,
            n,
            omega,
        }
    }

    /// First and second Kummer parameters `(a, b)`.
    pub fn ab(&self) -> (f64, f64) {
        (self.order, self.order + 1.0 - self.n as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::domain("need n >= 1"));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::domain(format!("need omega > 0, got {}", self.omega)));
        }
        let s = self.order;
        let integral = s >= 1.0 && s.fract() == 0.0;
        let consistent = match self.regime {
            KummerRegime::IntOrderNGeS => integral && s as usize <= self.n,
            KummerRegime::IntOrderNLtS => integral && s as usize > self.n,
            KummerRegime::FracOrder => s > NU_GUARD && s < 1.0 - NU_GUARD,
        };
        if !consistent {
            return Err(Error::domain(format!(
                "regime {:?} is inconsistent with order {} and n = {}",
                self.regime, s, self.n
            )));
        }
        Ok(())
    }
}

/// Sums `term(k)` for `k = start, start + 1, ...` until two consecutive terms are negligible.
fn sum_series(start: usize, mut term: impl FnMut(usize) -> f64, what: &'static str) -> Result<f64> {
    let mut total = 0.0;
    let mut rule = Truncation::new(SERIES_TOL);
    for k in start..start + MAX_TERMS {
        let t = term(k);
        total += t;
        if rule.accept(t, false, total) {
            return Ok(total);
        }
    }
    Err(Error::NonConvergence {
        what,
        partial: total,
        terms: MAX_TERMS,
    })
}

fn gauss_int_a(n: usize, r: usize, s: usize, k: usize) -> f64 {
    (0..s - r)
        .map(|l| {
            let denom = (l + r) as f64 - (k + n) as f64;
            sign_pow(l as i64) / (factorial(l) * factorial(s - r - 1 - l) * denom)
        })
        .sum()
}

fn gauss_int_c(n: usize, r: usize, m: usize) -> f64 {
    (m..n.saturating_sub(1))
        .map(|j| {
            sign_pow(j as i64) * inv_factorial(r as i64 + m as i64 - j as i64 - 1)
                / ((n - 1 - j) as f64 * factorial(j - m))
        })
        .sum()
}

/// `2F1(n, r; s; -zeta)` from its series in `1/zeta`.
pub fn gauss2f1_integer(p: &Gauss2F1IntParams) -> Result<f64> {
    p.validate()?;
    let Gauss2F1IntParams { n, r, s, zeta } = *p;
    let inv = 1.0 / zeta;
    let mut power = inv.powi(n as i32);
    let series = sum_series(
        0,
        |k| {
            let t = sign_pow(k as i64) * multiset_binomial(n, k) * gauss_int_a(n, r, s, k) * power;
            power *= inv;
            t
        },
        "2F1 series",
    )?;
    let head = factorial(s - 1) / factorial(r - 1) * series;
    let mut tail = 0.0;
    for m in 0..n.saturating_sub(1) {
        tail += gauss_int_c(n, r, m) * inv_factorial(s as i64 - r as i64 - m as i64 - 1)
            / (factorial(m) * (1.0 + zeta).powi(m as i32));
    }
    let prefactor = sign_pow(r as i64 - 1) * factorial(s - 1)
        / (zeta.powi(s as i32 - 1) * (zeta + 1.0).powi(r as i32 + 1 - s as i32));
    Ok(head + prefactor * tail)
}

/// `Gamma(1-mu-n-k) / Gamma(s-mu+2-n-k)` as the reciprocal of a finite product.
fn gauss_branch_b(n: usize, s: usize, mu: f64, k: usize) -> f64 {
    let x = 1.0 - mu - (n + k) as f64;
    1.0 / (0..=s).map(|j| x + j as f64).product::<f64>()
}

/// `2F1(n, 1 - mu; s - mu + 2; -zeta)` from its series in `1/zeta`.
pub fn gauss2f1_branch(p: &Gauss2F1BranchParams) -> Result<f64> {
    p.validate()?;
    let Gauss2F1BranchParams { n, s, mu, zeta } = *p;
    let inv = 1.0 / zeta;
    let mut power = 1.0;
    let series = sum_series(
        0,
        |k| {
            let t = sign_pow(k as i64) * multiset_binomial(n, k) * gauss_branch_b(n, s, mu, k) * power;
            power *= inv;
            t
        },
        "2F1 series",
    )?;
    let g = gamma(s as f64 - mu + 2.0);
    let head = g / (gamma(1.0 - mu) * zeta.powi(n as i32)) * series;
    let mut tail = 0.0;
    for k in 0..n {
        tail += sign_pow(k as i64) * gamma(mu + k as f64) * inv_factorial(s as i64 - n as i64 + k as i64 + 1)
            / (factorial(k) * factorial(n - k - 1) * (1.0 + zeta).powi((n - k) as i32));
    }
    let prefactor = sign_pow(n as i64 + 1) * g * (1.0 + zeta).powi(s as i32 + 1) / zeta.powf(s as f64 - mu + 1.0);
    Ok(head + prefactor * tail)
}

/// Leading large-`zeta` form of [`gauss2f1_integer`].
pub fn gauss2f1_integer_leading(p: &Gauss2F1IntParams) -> Result<f64> {
    p.validate()?;
    let Gauss2F1IntParams { n, r, s, zeta } = *p;
    let first = factorial(s - 1) * gauss_int_a(n, r, s, 0) / (factorial(r - 1) * zeta.powi(n as i32));
    let second =
        sign_pow(r as i64 - 1) * factorial(s - 1) * gauss_int_c(n, r, 0) * inv_factorial(s as i64 - r as i64 - 1)
            / (zeta.powi(s as i32 - 1) * (zeta + 1.0).powi(r as i32 + 1 - s as i32));
    Ok(first + second)
}

/// Leading large-`zeta` form of [`gauss2f1_branch`].
pub fn gauss2f1_branch_leading(p: &Gauss2F1BranchParams) -> Result<f64> {
    p.validate()?;
    let Gauss2F1BranchParams { n, s, mu, zeta } = *p;
    let g = gamma(s as f64 - mu + 2.0);
    let first = g * gauss_branch_b(n, s, mu, 0) / (gamma(1.0 - mu) * zeta.powi(n as i32));
    let second = g * gamma(mu + n as f64 - 1.0) * (1.0 + zeta).powi(s as i32)
        / (factorial(s) * factorial(n - 1) * zeta.powf(s as f64 - mu + 1.0));
    Ok(first + second)
}

fn kummer_d(s: usize, n: usize, m: usize) -> f64 {
    (0..=(n - 2 - m))
        .map(|l| {
            sign_pow((l + m) as i64) * inv_factorial(s as i64 - l as i64 - 1) / (factorial(l) * (n - 1 - l - m) as f64)
        })
        .sum()
}

/// The `e^w ln w` and `e^w` groups shared by both integer regimes.
fn kummer_singular(s: usize, n: usize, omega: f64) -> f64 {
    let ew = omega.exp();
    let log_sum: f64 = (0..n)
        .map(|j| {
            omega.powi((n - 1 - j) as i32) * inv_factorial(s as i64 - j as i64 - 1)
                / (factorial(j) * factorial(n - 1 - j))
        })
        .sum();
    let d_sum: f64 = (0..n.saturating_sub(1))
        .map(|m| omega.powi(m as i32) / factorial(m) * kummer_d(s, n, m))
        .sum();
    sign_pow((n + s + 1) as i64) * ew * omega.ln() * log_sum + sign_pow(s as i64 - 1) * ew * d_sum
}

fn kummer_integer(s: usize, n: usize, omega: f64) -> Result<f64> {
    // psi-series over j = k + n - s >= 0:
    // (j+s-1)! psi(j+1) w^{j+s-n} / (j! (j+s-n)!), times (-1)^{n-s}/((s-1)!(n-1)!).
    let j_shift = n as i64 - s as i64;
    let k0 = (-j_shift).max(0) as usize;
    // u_k = (n+k-1)! w^k / ((k+n-s)! k!), started at k0.
    let mut u =
        factorial(n + k0 - 1) * omega.powi(k0 as i32) / (factorial((k0 as i64 + j_shift) as usize) * factorial(k0));
    let psi_sum = sum_series(
        k0,
        |k| {
            let j = (k as i64 + j_shift) as usize;
            let t = u * digamma_int(j + 1);
            u *= (n + k) as f64 * omega / ((j + 1) as f64 * (k + 1) as f64);
            t
        },
        "Kummer U series",
    )?;
    let pre = sign_pow(j_shift) * omega.powi(j_shift as i32) / (factorial(s - 1) * factorial(n - 1));
    let mut value = pre * psi_sum + kummer_singular(s, n, omega);
    if s > n {
        let head: f64 = (0..s - n)
            .map(|k| factorial(n + k - 1) * factorial(s - n - k - 1) * (-omega).powi(k as i32) / factorial(k))
            .sum();
        value += omega.powi(j_shift as i32) / (factorial(s - 1) * factorial(n - 1)) * head;
    }
    Ok(value)
}

fn kummer_fractional(a: f64, n: usize, omega: f64) -> Result<f64> {
    let mut u = factorial(n - 1) / gamma(n as f64 + 1.0 - a);
    let series = sum_series(
        0,
        |k| {
            let t = u;
            u *= (n + k) as f64 * omega / ((n + k) as f64 + 1.0 - a) / (k + 1) as f64;
            t
        },
        "Kummer U series",
    )?;
    let first = sign_pow(n as i64) * gamma(1.0 - a) * omega.powf(n as f64 - a) / factorial(n - 1) * series;
    let tail: f64 = (0..n)
        .map(|k| gamma(k as f64 + 1.0 - a) / (factorial(k) * factorial(n - 1 - k) * (-omega).powi(k as i32)))
        .sum();
    let second = sign_pow(n as i64 + 1) * omega.exp() * omega.powi(n as i32 - 1) * tail;
    Ok(first + second)
}

/// Kummer `U` in the regime selected by `p.regime`.
pub fn kummer_u(p: &KummerParams) -> Result<f64> {
    p.validate()?;
    match p.regime {
        KummerRegime::FracOrder => kummer_fractional(p.order, p.n, p.omega),
        _ => kummer_integer(p.order as usize, p.n, p.omega),
    }
}

/// Leading small-`omega` form of [`kummer_u`].
pub fn kummer_u_leading(p: &KummerParams) -> Result<f64> {
    p.validate()?;
    let (n, w) = (p.n, p.omega);
    let ew = w.exp();
    if p.regime == KummerRegime::FracOrder {
        let a = p.order;
        return Ok(
            sign_pow(n as i64) * gamma(1.0 - a) * w.powf(n as f64 - a) / gamma(n as f64 + 1.0 - a)
                + ew * gamma(n as f64 - a) / factorial(n - 1),
        );
    }
    let s = p.order as usize;
    let d0 = if n >= 2 { kummer_d(s, n, 0) } else { 0.0 };
    let log_part = sign_pow((n + s + 1) as i64) * ew * w.ln() * inv_factorial(s as i64 - n as i64) / factorial(n - 1);
    let const_part = sign_pow(s as i64 - 1) * ew * d0;
    let lead = if s <= n {
        sign_pow((n - s) as i64) * digamma_int(n + 1 - s) * w.powi((n - s) as i32)
            / (factorial(s - 1) * factorial(n - s))
    } else {
        factorial(s - n - 1) / (factorial(s - 1) * w.powi((s - n) as i32))
            + sign_pow(n as i64 - s as i64 + 1) * EULER_GAMMA / (factorial(s - n) * factorial(n - 1))
    };
    Ok(lead + log_part + const_part)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_integer_closed_form() {
        for &z in &[1.5, 2.0, 5.0, 10.0] {
            let v = gauss2f1_integer(&Gauss2F1IntParams {
                n: 5,
                r: 2,
                s: 4,
                zeta: z,
            })
            .unwrap();
            assert_relative_eq!(v, (z + 2.0) / (2.0 * (z + 1.0).powi(3)), max_relative = 1e-10);
        }
    }

    #[test]
    fn gauss_branch_eke() {
        let z: f64 = 4.0;
        let v = gauss2f1_branch(&Gauss2F1BranchParams {
            n: 2,
            s: 1,
            mu: 0.5,
            zeta: z,
        })
        .unwrap();
        let want = 3.0 * (z.sqrt() + (z - 1.0) * z.sqrt().atan()) / (4.0 * z.powf(1.5));
        assert_relative_eq!(v, want, max_relative = 1e-10);
        assert!((v - 0.498_886_4).abs() < 1e-6);
    }

    #[test]
    fn gauss_branch_baba2() {
        let z: f64 = 4.0;
        let v = gauss2f1_branch(&Gauss2F1BranchParams {
            n: 3,
            s: 3,
            mu: 0.5,
            zeta: z,
        })
        .unwrap();
        let rz = z.sqrt();
        let want = 35.0 * ((z - 3.0) * rz * (3.0 * z + 5.0) + 3.0 * (z + 1.0) * ((z - 2.0) * z + 5.0) * rz.atan())
            / (128.0 * z.powf(3.5));
        assert_relative_eq!(v, want, max_relative = 1e-10);
    }

    #[test]
    fn branch_b_matches_gamma_ratio() {
        let (n, s, mu) = (2, 3, 0.3);
        for k in 0..4 {
            let x = 1.0 - mu - (n + k) as f64;
            let want = gamma(x) / gamma(x + s as f64 + 1.0);
            assert_relative_eq!(gauss_branch_b(n, s, mu, k), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn kummer_half_order() {
        let v = kummer_u(&KummerParams::fractional(0.5, 3, 1.0)).unwrap();
        let w: f64 = 1.0;
        let want = (2.0 * w.sqrt() * (3.0 - 2.0 * w)
            + w.exp()
                * std::f64::consts::PI.sqrt()
                * (4.0 * w * (w - 1.0) + 3.0)
                * statrs::function::erf::erfc(w.sqrt()))
            / 8.0;
        // statrs erfc is good to about 1e-11 here.
        assert_relative_eq!(v, want, max_relative = 1e-10);
        assert!((v - 0.534_202_058_552_992).abs() < 1e-13);
    }

    #[test]
    fn kummer_u11_is_e1() {
        // U(1, 1, w) = e^w E1(w); E1(1) = 0.219383934395520...
        let v = kummer_u(&KummerParams::integer(1, 1, 1.0)).unwrap();
        assert_relative_eq!(v, std::f64::consts::E * 0.219_383_934_395_520_3, max_relative = 1e-13);
    }

    #[test]
    fn regime_consistency() {
        let mut p = KummerParams::integer(2, 7, 1.0);
        assert_eq!(p.regime, KummerRegime::IntOrderNGeS);
        p.regime = KummerRegime::IntOrderNLtS;
        assert!(kummer_u(&p).is_err());
        assert!(kummer_u(&KummerParams::fractional(1.5, 2, 1.0)).is_err());
        assert!(gauss2f1_integer(&Gauss2F1IntParams {
            n: 3,
            r: 2,
            s: 3,
            zeta: 2.0
        })
        .is_err());
        assert!(gauss2f1_integer(&Gauss2F1IntParams {
            n: 5,
            r: 2,
            s: 4,
            zeta: 1.0
        })
        .is_err());
    }

    #[test]
    fn leading_forms() {
        let p = KummerParams::integer(2, 2, 1e-3);
        let ratio = kummer_u_leading(&p).unwrap() / kummer_u(&p).unwrap();
        assert!((ratio - 1.0).abs() < 0.01, "{ratio}");
        let p = KummerParams::fractional(0.5, 1, 1e-4);
        let ratio = kummer_u_leading(&p).unwrap() / kummer_u(&p).unwrap();
        assert!((0.99..=1.01).contains(&ratio), "{ratio}");
        let g = Gauss2F1IntParams {
            n: 5,
            r: 2,
            s: 4,
            zeta: 100.0,
        };
        let ratio = gauss2f1_integer_leading(&g).unwrap() / gauss2f1_integer(&g).unwrap();
        assert!((ratio - 1.0).abs() < 0.05, "{ratio}");
    }
}
