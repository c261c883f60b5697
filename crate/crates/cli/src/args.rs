use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Finite-part integrals and exact small-omega Stieltjes transforms.
#[derive(Debug, Parser)]
#[command(name = "fpi", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Re-run the configuration stored in a JSON document written by this tool.
    #[arg(long, global = true, value_name = "FILE")]
    pub replay: Option<PathBuf>,

    /// Write the document here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Relative truncation tolerance of the transform series.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Largest naive-series index tried (default: FPI_MAX_TERMS or 10000).
    #[arg(long = "k-max", global = true)]
    pub k_max: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Fully resolved run; this is what `--replay` reads back.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub tol: f64,
    pub k_max: usize,
    /// Term cap of the finite-part series.
    pub max_terms: usize,
    pub format: Format,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// FP int_0^a f(x) x^(-m-nu) dx
    Fpi(FpiArgs),
    /// int_0^a x^(-nu) f(x) / (omega + x)^n dx as naive series plus singular part
    Stieltjes(TransformArgs),
    /// int_0^a f(x) / (omega^2 + x^2) dx, or the effective diffusivity with --f-minus
    Quadratic(QuadraticArgs),
    /// Gauss 2F1 and Kummer U from their finite-part series
    Specfun(SpecfunArgs),
    /// Leading small-omega behavior of the transform
    Asym(AsymArgs),
    /// Transform against direct quadrature over an omega grid
    Compare(GridArgs),
    /// Naive, singular and total parts over an omega grid
    Sweep(GridArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FpiArgs {
    /// Function: exp(b), poly(a_r:...:a_s@r), monexp(p,b), binpoly(p,q), with optional c* prefix.
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    /// Upper limit; `inf` for an unbounded range.
    #[arg(long)]
    pub a: String,
    /// Add an independent oracle value.
    #[arg(long)]
    pub compare: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct TransformArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long)]
    pub omega: f64,
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub compare: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct QuadraticArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long, conflicts_with = "pe", required_unless_present = "pe")]
    pub omega: Option<f64>,
    /// Peclet number; sets omega = 1/Pe.
    #[arg(long)]
    pub pe: Option<f64>,
    #[arg(long, default_value = "inf")]
    pub a: String,
    /// g(-tau) for the effective diffusivity; `--f` is then g(tau).
    #[arg(long = "f-minus", requires = "pe")]
    pub f_minus: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long)]
    pub compare: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SpecfunArgs {
    #[command(subcommand)]
    pub kind: SpecKind,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpecKind {
    /// 2F1(n, r; s; -zeta), r + 1 < s < n + 1, zeta > 1
    GaussInt {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        zeta: f64,
        #[command(flatten)]
        #[serde(flatten)]
        flags: SpecFlags,
    },
    /// 2F1(n, 1 - mu; s - mu + 2; -zeta), 0 < mu < 1, zeta > 1
    GaussBranch {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        zeta: f64,
        #[command(flatten)]
        #[serde(flatten)]
        flags: SpecFlags,
    },
    /// U(s, s + 1 - n, omega) for integer s, or U(a, a - n + 1, omega) for 0 < a < 1
    Kummer {
        /// Integer s >= 1 or fractional a in (0, 1).
        #[arg(long)]
        order: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        omega: f64,
        #[command(flatten)]
        #[serde(flatten)]
        flags: SpecFlags,
    },
}

#[derive(Debug, Clone, Copy, Args, Serialize, Deserialize)]
pub struct SpecFlags {
    /// Also print the leading asymptotic form.
    #[arg(long)]
    pub leading: bool,
    /// Add the defining-integral quadrature value.
    #[arg(long)]
    pub compare: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct AsymArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long, default_value = "1")]
    pub a: String,
    /// Evaluate the leading term and the exact transform here.
    #[arg(long)]
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GridArgs {
    #[arg(long)]
    pub f: String,
    /// Transform order; ignored with --quadratic.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long)]
    pub a: String,
    /// lo:hi:count, logarithmically spaced unless --linear.
    #[arg(long = "omega-grid")]
    pub omega_grid: String,
    #[arg(long)]
    pub linear: bool,
    /// Use the omega^2 + x^2 kernel.
    #[arg(long)]
    pub quadratic: bool,
    /// Add quadrature oracle columns (always on for `compare`).
    #[arg(long)]
    pub compare: bool,
}
