//! Scalar special-function helpers shared by the series evaluators.
//!
//! Gamma-function values come from `statrs`; digamma is only ever needed at
//! positive integers and is accumulated exactly from `psi(1) = -gamma`.

pub use std::f64::consts::PI;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

const FACTORIAL_MAX: usize = 170;

/// `n!` as a float; `inf` beyond 170.
pub fn factorial(n: usize) -> f64 {
    if n > FACTORIAL_MAX {
        return f64::INFINITY;
    }
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `1/n!` extended to negative integers, where the reciprocal gamma vanishes.
pub fn inv_factorial(n: i64) -> f64 {
    if n < 0 {
        0.0
    } else {
        1.0 / factorial(n as usize)
    }
}

/// `psi(n)` for a positive integer `n`.
pub fn digamma_int(n: usize) -> f64 {
    assert!(n >= 1, "digamma_int requires n >= 1");
    let mut psi = -EULER_GAMMA;
    for k in 1..n {
        psi += 1.0 / k as f64;
    }
    psi
}

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Rising factorial `(x)_k = x (x+1) ... (x+k-1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (x + j as f64))
}

/// `C(n + k - 1, k)` in exact integer arithmetic while it fits in a `u128`,
/// falling back to a floating recurrence afterwards.
pub fn multiset_binomial(n: usize, k: usize) -> f64 {
    let mut exact: u128 = 1;
    for j in 1..=k {
        let num = (n + j - 1) as u128;
        match exact.checked_mul(num) {
            Some(p) => exact = p / j as u128,
            None => {
                let mut approx = exact as f64;
                for i in j..=k {
                    approx *= (n + i - 1) as f64 / i as f64;
                }
                return approx;
            }
        }
    }
    exact as f64
}

/// `binom(-n, k) = (-1)^k C(n + k - 1, k)`.
pub fn binom_neg(n: usize, k: usize) -> f64 {
    let magnitude = multiset_binomial(n, k);
    if k.is_multiple_of(2) {
        magnitude
    } else {
        -magnitude
    }
}

/// `C(n, k)` for small arguments.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    multiset_binomial(n - k + 1, k)
}

/// `(-1)^k` as a float.
pub fn sign_pow(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `c * x^j` without intermediate overflow when `x^j` alone would not fit.
pub fn scaled_power(c: f64, x: f64, j: i32) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    let p = x.powi(j);
    if p.is_finite() && p != 0.0 {
        return c * p;
    }
    let ln = c.abs().ln() + j as f64 * x.ln();
    c.signum() * ln.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn digamma_small_integers() {
        assert_relative_eq!(digamma_int(1), -EULER_GAMMA);
        assert_relative_eq!(digamma_int(2), 1.0 - EULER_GAMMA);
        assert_relative_eq!(digamma_int(4), 1.0 + 0.5 + 1.0 / 3.0 - EULER_GAMMA);
    }

    #[test]
    fn digamma_matches_statrs() {
        for n in 1..40 {
            let reference = statrs::function::gamma::digamma(n as f64);
            assert_relative_eq!(digamma_int(n), reference, max_relative = 1e-13);
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binom_neg(1, 5), -1.0);
        assert_eq!(binom_neg(2, 3), -4.0);
        assert_eq!(binom_neg(3, 2), 6.0);
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(2, 3), 0.0);
        // C(1003, 1000) = 1003*1002*1001/6
        assert_eq!(multiset_binomial(4, 1000), 167_668_501.0);
    }

    #[test]
    fn inverse_factorial_vanishes_at_negative_integers() {
        assert_eq!(inv_factorial(-1), 0.0);
        assert_eq!(inv_factorial(-7), 0.0);
        assert_eq!(inv_factorial(3), 1.0 / 6.0);
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(0.5, 0), 1.0);
        assert_relative_eq!(pochhammer(0.5, 3), 0.5 * 1.5 * 2.5);
    }

    #[test]
    fn scaled_power_avoids_overflow() {
        let v = scaled_power(1e-300, 10.0, 400);
        assert_relative_eq!(v, 1e100, max_relative = 1e-12);
    }
}
