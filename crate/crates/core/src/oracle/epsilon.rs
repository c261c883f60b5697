//! Finite part by brute force: integrate over `[eps, a]`, remove the exactly
//! known divergent part, and extrapolate `eps -> 0`.
//!
//! After the subtraction the remainder is a power series in `eps` with
//! exponents `j - nu`, `j = 1, 2, ...`, so Richardson extrapolation can use
//! those exponents directly instead of fitting them.

use crate::entire_fn::TaylorFunction;
use crate::error::{Error, Result};
use crate::oracle::quadrature::{quad_with, QuadOptions};

/// The divergent group `D_eps` of `int_eps^a f x^{-m-nu} dx`.
fn divergent_part(f: &TaylorFunction, m: usize, nu: f64, eps: f64) -> f64 {
    if nu == 0.0 {
        let mut d = -f.coeff(m - 1) * eps.ln();
        for k in 0..m - 1 {
            d += f.coeff(k) / ((m - k - 1) as f64 * eps.powi((m - k - 1) as i32));
        }
        d
    } else {
        -(0..m)
            .map(|k| {
                let e = k as f64 + 1.0 - m as f64 - nu;
                f.coeff(k) * eps.powf(e) / e
            })
            .sum::<f64>()
    }
}

/// `FP int_0^a f(x) x^{-m-nu} dx` from regularized quadrature.
///
/// `eps_list` must be decreasing, geometric and below `a`; the whole list is
/// extrapolated. With `None`, twelve halvings of `a` are sampled and the
/// contiguous window with the smallest truncation-plus-rounding estimate is used.
pub fn fpi_epsilon_oracle(f: &TaylorFunction, m: usize, nu: f64, a: f64, eps_list: Option<&[f64]>) -> Result<f64> {
    if m < 1 {
        return Err(Error::domain("pole order m must be at least 1"));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain("the epsilon oracle needs a finite upper limit"));
    }
    if !(0.0..1.0).contains(&nu) {
        return Err(Error::domain(format!("branch exponent {nu} outside [0, 1)")));
    }
    let order = m as f64 + nu;
    let g = |x: f64| f.eval(x) * x.powf(-order);
    let opts = QuadOptions {
        rel_tol: 1e-15,
        abs_tol: 0.0,
        ..QuadOptions::default()
    };
    // Accumulate from a downwards so each piece is a short, smooth integral.
    // `noise` bounds the rounding carried by each regularized value.
    let sample = |eps: &[f64]| -> Result<(Vec<f64>, Vec<f64>)> {
        let (mut values, mut noise) = (Vec::with_capacity(eps.len()), Vec::with_capacity(eps.len()));
        let (mut integral, mut magnitude, mut upper) = (0.0, 0.0, a);
        for &e in eps {
            let piece = quad_with(g, e, upper, &opts)?.value;
            integral += piece;
            magnitude += piece.abs();
            upper = e;
            let d = divergent_part(f, m, nu, e);
            values.push(integral - d);
            noise.push(ROUNDING * (magnitude + d.abs()));
        }
        Ok((values, noise))
    };

    match eps_list {
        Some(eps) => {
            let ratio = check_list(eps, a)?;
            Ok(richardson(&sample(eps)?.0, ratio, nu))
        }
        None => {
            let eps = adaptive_eps_list(a);
            let (values, noise) = sample(&eps)?;
            Ok(best_window(&values, &noise, 2.0, nu))
        }
    }
}

/// Relative rounding assumed for each quadrature piece and divergent group.
const ROUNDING: f64 = 1e-15;
const ADAPTIVE_LEVELS: i32 = 12;

/// `a/2, ..., a/2^12`; [`best_window`] picks the usable part.
fn adaptive_eps_list(a: f64) -> Vec<f64> {
    (1..=ADAPTIVE_LEVELS).map(|i| a / f64::powi(2.0, i)).collect()
}

/// Returns the common ratio of a valid list.
fn check_list(eps: &[f64], a: f64) -> Result<f64> {
    if eps.is_empty() || eps.iter().any(|&e| !(e > 0.0 && e < a)) {
        return Err(Error::domain("epsilon values must lie in (0, a)"));
    }
    let ratio = if eps.len() > 1 { eps[0] / eps[1] } else { 2.0 };
    let geometric = eps
        .windows(2)
        .all(|w| w[0] > w[1] && ((w[0] / w[1]) / ratio - 1.0).abs() < 1e-9);
    if !geometric {
        return Err(Error::domain("epsilon list must be decreasing with a constant ratio"));
    }
    Ok(ratio)
}

/// Linear weights of the Richardson tableau over `len` samples.
fn richardson_weights(len: usize, ratio: f64, nu: f64) -> Vec<f64> {
    (0..len)
        .map(|k| {
            let mut unit = vec![0.0; len];
            unit[k] = 1.0;
            richardson(&unit, ratio, nu)
        })
        .collect()
}

/// Extrapolates over the contiguous window with the smallest estimated error.
///
/// Truncation is estimated by dropping the window's last sample; rounding by
/// pushing each sample's noise through the tableau weights.
fn best_window(values: &[f64], noise: &[f64], ratio: f64, nu: f64) -> f64 {
    let n = values.len();
    let weights: Vec<Vec<f64>> = (0..=n).map(|len| richardson_weights(len.max(1), ratio, nu)).collect();
    let extrapolate = |s: usize, len: usize| -> (f64, f64) {
        let w = &weights[len];
        let value = (0..len).map(|k| w[k] * values[s + k]).sum();
        let rounding = (0..len).map(|k| (w[k] * noise[s + k]).abs()).sum();
        (value, rounding)
    };
    let mut best = (f64::INFINITY, values[n - 1]);
    for s in 0..n {
        for len in 3..=n - s {
            let (v, rounding) = extrapolate(s, len);
            let (shorter, _) = extrapolate(s, len - 1);
            let (later, _) = extrapolate(s + 1, len - 1);
            let est = (v - shorter).abs().max((v - later).abs()) + rounding;
            if est < best.0 {
                best = (est, v);
            }
        }
    }
    best.1
}

/// Richardson tableau for `T(eps) = T0 + sum_j alpha_j eps^{j - nu}` sampled
/// at `eps_i = eps_0 / ratio^i`.
fn richardson(values: &[f64], ratio: f64, nu: f64) -> f64 {
    let mut row = values.to_vec();
    for j in 1..values.len() {
        let factor = ratio.powf(j as f64 - nu);
        row = row
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_removes_known_powers() {
        let t = |e: f64| 3.0 + 2.0 * e.powf(0.5) - e.powf(1.5);
        let vals: Vec<f64> = (1..=4).map(|i| t(0.5f64.powi(i))).collect();
        assert!((richardson(&vals, 2.0, 0.5) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn constant_double_pole() {
        let one = TaylorFunction::constant(1.0).unwrap();
        let v = fpi_epsilon_oracle(&one, 2, 0.0, 1.0, None).unwrap();
        assert!((v + 1.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn exponential_examples() {
        let e = TaylorFunction::exponential(1.0).unwrap();
        let v = fpi_epsilon_oracle(&e, 1, 0.0, 1.0, None).unwrap();
        assert!((v + 0.796_599_6).abs() < 1e-6, "{v}");
        let w = fpi_epsilon_oracle(&e, 1, 0.5, 1.0, None).unwrap();
        assert!((w + 3.723_055).abs() < 1e-5, "{w}");
    }

    #[test]
    fn spec_default_list_is_accepted() {
        let e = TaylorFunction::exponential(1.0).unwrap();
        let v = fpi_epsilon_oracle(&e, 1, 0.0, 1.0, Some(&[1e-2, 1e-3, 1e-4])).unwrap();
        assert!((v + 0.796_599_6).abs() < 1e-6, "{v}");
    }

    #[test]
    fn rejects_bad_lists() {
        let e = TaylorFunction::exponential(1.0).unwrap();
        assert!(fpi_epsilon_oracle(&e, 1, 0.0, 1.0, Some(&[1e-2, 1e-3, 1e-5])).is_err());
        assert!(fpi_epsilon_oracle(&e, 1, 0.0, 1.0, Some(&[2.0])).is_err());
        assert!(fpi_epsilon_oracle(&e, 1, 0.0, f64::INFINITY, None).is_err());
    }
}
