//! Evaluation over grids of `omega`.
//!
//! With the `parallel` feature (on by default) grid points are mapped with
//! rayon; otherwise, and always through the `*_sequential` functions, they are
//! evaluated in order. Results are returned in grid order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::entire_fn::TaylorFunction;
use crate::error::{Error, Result};
use crate::stieltjes::{eval, eval_quadratic, ExpansionResult, TransformOptions, TransformSpec};

fn check_grid(lo: f64, hi: f64, count: usize) -> Result<()> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(format!("grid needs finite lo < hi, got {lo}:{hi}")));
    }
    if count < 2 {
        return Err(Error::domain(format!("grid needs at least 2 points, got {count}")));
    }
    Ok(())
}

/// `count` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    check_grid(lo, hi, count)?;
    if lo <= 0.0 {
        return Err(Error::domain("a logarithmic grid needs lo > 0"));
    }
    let (l, h) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|i| match i {
            0 => lo,
            _ if i == count - 1 => hi,
            _ => (l + (h - l) * i as f64 / (count - 1) as f64).exp(),
        })
        .collect())
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    check_grid(lo, hi, count)?;
    Ok((0..count)
        .map(|i| match i {
            _ if i == count - 1 => hi,
            _ => lo + (hi - lo) * i as f64 / (count - 1) as f64,
        })
        .collect())
}

/// Maps `op` over `grid` in order on the calling thread.
pub fn map_grid_sequential<T, F: Fn(f64) -> T>(grid: &[f64], op: F) -> Vec<T> {
    grid.iter().map(|&w| op(w)).collect()
}

/// Maps `op` over `grid`, in parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn map_grid<T: Send, F: Fn(f64) -> T + Sync + Send>(grid: &[f64], op: F) -> Vec<T> {
    grid.par_iter().map(|&w| op(w)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_grid<T: Send, F: Fn(f64) -> T + Sync + Send>(grid: &[f64], op: F) -> Vec<T> {
    map_grid_sequential(grid, op)
}

fn transform_at(
    f: &TaylorFunction,
    n: usize,
    nu: f64,
    a: f64,
    opts: &TransformOptions,
    w: f64,
) -> Result<ExpansionResult> {
    eval(&TransformSpec::new(f.clone(), n, nu, w, a)?, opts)
}

/// `S_n^a[f]` at every grid point.
pub fn transform_sweep(
    f: &TaylorFunction,
    n: usize,
    nu: f64,
    a: f64,
    grid: &[f64],
    opts: &TransformOptions,
) -> Vec<Result<ExpansionResult>> {
    map_grid(grid, |w| transform_at(f, n, nu, a, opts, w))
}

pub fn transform_sweep_sequential(
    f: &TaylorFunction,
    n: usize,
    nu: f64,
    a: f64,
    grid: &[f64],
    opts: &TransformOptions,
) -> Vec<Result<ExpansionResult>> {
    map_grid_sequential(grid, |w| transform_at(f, n, nu, a, opts, w))
}

/// The quadratic-kernel transform at every grid point.
pub fn quadratic_sweep(
    f: &TaylorFunction,
    a: f64,
    grid: &[f64],
    opts: &TransformOptions,
) -> Vec<Result<ExpansionResult>> {
    map_grid(grid, |w| eval_quadratic(f, w, a, opts))
}
