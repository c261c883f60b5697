//! Finite part of a pole-type integral from its circular-contour
//! representation on `z = a e^{i theta}`:
//!
//! `FP int_0^a f/x^m = 1/(2 pi a^{m-1}) int_0^{2pi} f(a e^{it}) [ln a + i(t - pi)] e^{i(1-m)t} dt`.
//!
//! The periodic factor `g(t) = f(a e^{it}) e^{i(1-m)t}` is sampled on an
//! equispaced grid. `int g` is the trapezoid sum. `int t g` is taken against
//! the trigonometric interpolant of `g`, whose moments are exact.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::entire_fn::TaylorFunction;
use crate::error::{Error, Result};

const MIN_POINTS: usize = 64;
const MAX_POINTS: usize = 1 << 16;
const DOUBLING_TOL: f64 = 1e-10;

fn check(m: usize, a: f64) -> Result<()> {
    if m < 1 {
        return Err(Error::domain("pole order m must be at least 1"));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain("the contour oracle needs a finite radius"));
    }
    Ok(())
}

fn samples(f: &TaylorFunction, m: usize, a: f64, n: usize) -> Result<Vec<Complex64>> {
    (0..n)
        .map(|l| {
            let t = 2.0 * PI * l as f64 / n as f64;
            let z = Complex64::from_polar(a, t);
            Ok(f.eval_complex(z)? * Complex64::from_polar(1.0, (1.0 - m as f64) * t))
        })
        .collect()
}

fn combine(i1: Complex64, i2: Complex64, m: usize, a: f64) -> f64 {
    let i = Complex64::i();
    let v = a.ln() * i1 + i * i2 - i * PI * i1;
    v.re / (2.0 * PI * a.powi(m as i32 - 1))
}

fn spectral_value(f: &TaylorFunction, m: usize, a: f64, n: usize) -> Result<f64> {
    let mut buf = samples(f, m, a, n)?;
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let i1 = 2.0 * PI * buf[0] * scale;
    // int_0^{2pi} t e^{ijt} dt = -2 pi i / j for j != 0, and 2 pi^2 for j = 0.
    let mut i2 = 2.0 * PI * PI * buf[0] * scale;
    // The Nyquist mode, split evenly between j = +-n/2, contributes nothing.
    for (idx, c) in buf.iter().enumerate().skip(1) {
        if idx == n / 2 {
            continue;
        }
        let j = if idx < n / 2 { idx as f64 } else { idx as f64 - n as f64 };
        i2 += c * scale * Complex64::new(0.0, -2.0 * PI / j);
    }
    Ok(combine(i1, i2, m, a))
}

/// Contour-integral value of `FP int_0^a f(x) x^{-m} dx`, doubling the
/// number of nodes from `n_theta` (at least 64, rounded up to a power of two)
/// until successive values agree to `1e-10`.
pub fn fpi_contour_oracle(f: &TaylorFunction, m: usize, a: f64, n_theta: usize) -> Result<f64> {
    check(m, a)?;
    let mut n = n_theta.max(MIN_POINTS).next_power_of_two();
    let mut prev = spectral_value(f, m, a, n)?;
    while n < MAX_POINTS {
        n *= 2;
        let next = spectral_value(f, m, a, n)?;
        if (next - prev).abs() <= DOUBLING_TOL * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence {
        what: "contour oracle",
        partial: prev,
        terms: n,
    })
}

/// Reference path: composite Simpson's rule with `panels` (even) panels.
pub fn fpi_contour_simpson(f: &TaylorFunction, m: usize, a: f64, panels: usize) -> Result<f64> {
    check(m, a)?;
    let panels = panels.max(2) + panels % 2;
    let h = 2.0 * PI / panels as f64;
    let g = samples(f, m, a, panels)?;
    let mut i1 = Complex64::new(0.0, 0.0);
    let mut i2 = Complex64::new(0.0, 0.0);
    for l in 0..=panels {
        let w = if l == 0 || l == panels {
            1.0
        } else if l % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let v = g[l % panels];
        let t = l as f64 * h;
        i1 += w * v;
        i2 += w * t * v;
    }
    Ok(combine(i1 * h / 3.0, i2 * h / 3.0, m, a))
}
