use fpi_core::finite_part::SPLIT_POINT;
use fpi_core::oracle::{
    fpi_contour_oracle, fpi_epsilon_oracle, gauss2f1_branch_euler, gauss2f1_integer_euler, kummer_u_laplace, quad_with,
    QuadOptions,
};
use fpi_core::specfun::{
    gauss2f1_branch, gauss2f1_branch_leading, gauss2f1_integer, gauss2f1_integer_leading, kummer_u, kummer_u_leading,
    Gauss2F1BranchParams, Gauss2F1IntParams, KummerParams,
};
use fpi_core::stieltjes::{
    effective_diffusivity, eval, eval_quadratic, quadratic_quadrature, transform_quadrature, TransformOptions,
};
use fpi_core::sweep::{linear_grid, log_grid, map_grid};
use fpi_core::{classify, fpi, Error, ExpansionResult, FpiMethod, SeriesOptions, TaylorFunction, TransformSpec};

use crate::args::{AsymArgs, Command, FpiArgs, GridArgs, QuadraticArgs, RunConfig, SpecKind, TransformArgs};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Report};

/// Relative tolerance of every quadrature oracle.
const ORACLE_TOL: f64 = 1e-13;
const CONTOUR_NODES: usize = 256;

pub fn run(config: &RunConfig) -> CliResult<Report> {
    let opts = TransformOptions {
        tol: config.tol,
        k_max: config.k_max,
        keep_terms: false,
        fpi: SeriesOptions {
            max_terms: config.max_terms,
            ..SeriesOptions::default()
        },
    };
    match &config.command {
        Command::Fpi(a) => run_fpi(a, &opts.fpi),
        Command::Stieltjes(a) => run_stieltjes(a, &opts),
        Command::Quadratic(a) => run_quadratic(a, &opts),
        Command::Specfun(a) => run_specfun(&a.kind),
        Command::Asym(a) => run_asym(a, &opts),
        Command::Compare(a) => run_grid(a, &opts, true),
        Command::Sweep(a) => run_grid(a, &opts, false),
    }
}

fn parse_fn(s: &str) -> CliResult<TaylorFunction> {
    s.parse().map_err(|e: Error| CliError::usage(e.to_string()))
}

pub fn parse_limit(s: &str) -> CliResult<f64> {
    let t = s.trim();
    if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "+inf") {
        return Ok(f64::INFINITY);
    }
    let a: f64 = t
        .parse()
        .map_err(|_| CliError::usage(format!("upper limit `{s}` is neither a number nor `inf`")))?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(CliError::usage(format!("upper limit must be positive, got {s}")));
    }
    Ok(a)
}

/// `lo:hi:count`.
pub fn parse_grid(s: &str, linear: bool) -> CliResult<Vec<f64>> {
    let bad = || CliError::usage(format!("omega grid `{s}` is not lo:hi:count"));
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts[..] else {
        return Err(bad());
    };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    let grid = if linear {
        linear_grid(lo, hi, count)
    } else {
        log_grid(lo, hi, count)
    };
    grid.map_err(|e| CliError::usage(e.to_string()))
}

/// Domain errors are usage errors; truncation caps are reported in-band.
fn numeric<T>(r: fpi_core::Result<T>) -> CliResult<Result<T, Error>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if e.is_nonconvergence() => Ok(Err(e)),
        Err(e) => Err(CliError::usage(e.to_string())),
    }
}

fn rel_diff(value: f64, oracle: f64) -> f64 {
    (value - oracle).abs() / oracle.abs().max(f64::MIN_POSITIVE)
}

/// An expansion, or its partial state when the naive series hit `k_max`.
fn expansion(r: fpi_core::Result<ExpansionResult>) -> CliResult<(ExpansionResult, bool)> {
    match numeric(r)? {
        Ok(e) => Ok((e, true)),
        Err(Error::ExpansionNonConvergence(partial)) => Ok((*partial, false)),
        Err(e) => Err(e.into()),
    }
}

/// A quadrature oracle value; a subdivision-limited estimate is kept but flagged.
fn oracle_value(r: fpi_core::Result<f64>) -> CliResult<(f64, bool)> {
    match numeric(r)? {
        Ok(v) => Ok((v, true)),
        Err(Error::QuadratureLimit { value, .. }) => Ok((value, false)),
        Err(Error::NonConvergence { partial, .. }) => Ok((partial, false)),
        Err(e) => Err(e.into()),
    }
}

fn method_name(m: FpiMethod) -> &'static str {
    match m {
        FpiMethod::SeriesFinite => "series",
        FpiMethod::ClosedForm => "closed-form",
        FpiMethod::SplitInfinite => "split",
    }
}

/// Independent value of the finite part: contour for poles, regularized
/// quadrature for branch points, and `[0, 1]` plus a direct tail for `a = inf`.
fn fpi_oracle(f: &TaylorFunction, m: usize, nu: f64, a: f64) -> fpi_core::Result<f64> {
    if a.is_infinite() {
        let head = fpi_oracle(f, m, nu, SPLIT_POINT)?;
        let order = m as f64 + nu;
        let tail = quad_with(
            |x: f64| f.eval(x) * x.powf(-order),
            SPLIT_POINT,
            a,
            &QuadOptions::with_tol(ORACLE_TOL),
        )?;
        return Ok(head + tail.value);
    }
    if nu == 0.0 {
        fpi_contour_oracle(f, m, a, CONTOUR_NODES)
    } else {
        fpi_epsilon_oracle(f, m, nu, a, None)
    }
}

fn run_fpi(args: &FpiArgs, opts: &SeriesOptions) -> CliResult<Report> {
    let f = parse_fn(&args.f)?;
    let a = parse_limit(&args.a)?;
    if args.m < 1 {
        return Err(CliError::usage("pole order m must be at least 1"));
    }
    let mut cols = vec!["m", "nu", "a", "value", "method", "terms_used", "tail_bound"];
    if args.compare {
        cols.extend(["oracle", "abs_diff", "rel_diff"]);
    }
    cols.push("converged");
    let mut report = Report::new(cols);
    let (value, method, terms, tail, mut converged) = match numeric(fpi(&f, args.m, args.nu, a, opts))? {
        Ok(v) => (v.value, method_name(v.method), v.terms_used, v.tail_bound, true),
        Err(Error::NonConvergence { partial, terms, .. }) => (partial, "series", terms, f64::NAN, false),
        Err(e) => return Err(e.into()),
    };
    let mut row = vec![
        Cell::from(args.m),
        Cell::from(args.nu),
        Cell::from(a),
        Cell::from(value),
        Cell::from(method),
        Cell::from(terms),
        Cell::from(tail),
    ];
    if args.compare {
        let (o, ok) = oracle_value(fpi_oracle(&f, args.m, args.nu, a))?;
        converged &= ok;
        row.extend([
            Cell::from(o),
            Cell::from((value - o).abs()),
            Cell::from(rel_diff(value, o)),
        ]);
    }
    row.push(Cell::from(converged));
    report.nonconverged = !converged;
    report.push(row);
    Ok(report)
}

const EXPANSION_COLUMNS: [&str; 6] = ["omega", "naive_sum", "singular", "total", "k_used", "tail_estimate"];

fn expansion_cells(omega: f64, e: &ExpansionResult) -> Vec<Cell> {
    vec![
        Cell::from(omega),
        Cell::from(e.naive_sum),
        Cell::from(e.singular),
        Cell::from(e.total),
        Cell::from(e.k_used),
        Cell::from(e.tail_estimate),
    ]
}

fn expansion_report(compare: bool) -> Report {
    let mut cols = EXPANSION_COLUMNS.to_vec();
    if compare {
        cols.extend(["oracle", "rel_diff"]);
    }
    cols.push("converged");
    Report::new(cols)
}

fn push_expansion(report: &mut Report, omega: f64, e: &ExpansionResult, ok: bool, oracle: Option<(f64, bool)>) {
    let mut row = expansion_cells(omega, e);
    let mut converged = ok;
    if let Some((o, oracle_ok)) = oracle {
        converged &= oracle_ok;
        row.extend([Cell::from(o), Cell::from(rel_diff(e.total, o))]);
    }
    row.push(Cell::from(converged));
    report.nonconverged |= !converged;
    report.push(row);
}

fn run_stieltjes(args: &TransformArgs, opts: &TransformOptions) -> CliResult<Report> {
    let f = parse_fn(&args.f)?;
    let a = parse_limit(&args.a)?;
    let spec = TransformSpec::new(f, args.n, args.nu, args.omega, a).map_err(|e| CliError::usage(e.to_string()))?;
    let (e, ok) = expansion(eval(&spec, opts))?;
    let oracle = if args.compare {
        Some(oracle_value(transform_quadrature(&spec, ORACLE_TOL).map(|q| q.value))?)
    } else {
        None
    };
    let mut report = expansion_report(args.compare);
    push_expansion(&mut report, args.omega, &e, ok, oracle);
    Ok(report)
}

fn run_quadratic(args: &QuadraticArgs, opts: &TransformOptions) -> CliResult<Report> {
    let f = parse_fn(&args.f)?;
    let a = parse_limit(&args.a)?;
    let omega = match (args.omega, args.pe) {
        (Some(w), _) => w,
        (None, Some(pe)) if pe > 0.0 && pe.is_finite() => 1.0 / pe,
        (None, Some(pe)) => return Err(CliError::usage(format!("Peclet number must be positive, got {pe}"))),
        (None, None) => return Err(CliError::usage("one of --omega or --pe is required")),
    };
    if let Some(g_minus) = &args.f_minus {
        return run_diffusivity(&f, &parse_fn(g_minus)?, args);
    }
    let (e, ok) = expansion(eval_quadratic(&f, omega, a, opts))?;
    let oracle = if args.compare {
        Some(oracle_value(
            quadratic_quadrature(&f, omega, a, ORACLE_TOL).map(|q| q.value),
        )?)
    } else {
        None
    };
    let mut report = expansion_report(args.compare);
    push_expansion(&mut report, omega, &e, ok, oracle);
    Ok(report)
}

fn run_diffusivity(g_plus: &TaylorFunction, g_minus: &TaylorFunction, args: &QuadraticArgs) -> CliResult<Report> {
    let pe = args.pe.expect("clap requires --pe with --f-minus");
    if args.a.trim() != "inf" {
        return Err(CliError::usage(
            "the effective diffusivity integrates over [0, inf); drop --a",
        ));
    }
    let mut cols = vec!["pe", "kappa", "kappa_eff"];
    if args.compare {
        cols.extend(["oracle", "rel_diff"]);
    }
    cols.push("converged");
    let mut report = Report::new(cols);
    let value = numeric(effective_diffusivity(g_plus, g_minus, pe, args.kappa))??;
    let mut row = vec![Cell::from(pe), Cell::from(args.kappa), Cell::from(value)];
    let mut converged = true;
    if args.compare {
        let w = 1.0 / pe;
        let q = |g: &TaylorFunction| quadratic_quadrature(g, w, f64::INFINITY, ORACLE_TOL).map(|q| q.value);
        let (qp, ok_p) = oracle_value(q(g_plus))?;
        let (qm, ok_m) = oracle_value(q(g_minus))?;
        let o = args.kappa * (1.0 + qp + qm);
        converged = ok_p && ok_m;
        row.extend([Cell::from(o), Cell::from(rel_diff(value, o))]);
    }
    row.push(Cell::from(converged));
    report.nonconverged = !converged;
    report.push(row);
    Ok(report)
}

fn run_specfun(kind: &SpecKind) -> CliResult<Report> {
    let usage = |e: Error| CliError::usage(e.to_string());
    let (label, value, leading, oracle, flags) = match *kind {
        SpecKind::GaussInt { n, r, s, zeta, flags } => {
            let p = Gauss2F1IntParams { n, r, s, zeta };
            p.validate().map_err(usage)?;
            (
                format!("2F1({n},{r};{s};-{zeta})"),
                numeric(gauss2f1_integer(&p))?,
                flags.leading.then(|| gauss2f1_integer_leading(&p)),
                flags.compare.then(|| gauss2f1_integer_euler(&p, ORACLE_TOL)),
                flags,
            )
        }
        SpecKind::GaussBranch { n, s, mu, zeta, flags } => {
            let p = Gauss2F1BranchParams { n, s, mu, zeta };
            p.validate().map_err(usage)?;
            (
                format!("2F1({n},{};{};-{zeta})", 1.0 - mu, s as f64 - mu + 2.0),
                numeric(gauss2f1_branch(&p))?,
                flags.leading.then(|| gauss2f1_branch_leading(&p)),
                flags.compare.then(|| gauss2f1_branch_euler(&p, ORACLE_TOL)),
                flags,
            )
        }
        SpecKind::Kummer { order, n, omega, flags } => {
            let p = if order >= 1.0 && order.fract() == 0.0 {
                KummerParams::integer(order as usize, n, omega)
            } else {
                KummerParams::fractional(order, n, omega)
            };
            p.validate().map_err(usage)?;
            let (ka, kb) = p.ab();
            (
                format!("U({ka},{kb},{omega})"),
                numeric(kummer_u(&p))?,
                flags.leading.then(|| kummer_u_leading(&p)),
                flags.compare.then(|| kummer_u_laplace(&p, ORACLE_TOL)),
                flags,
            )
        }
    };
    let mut cols = vec!["function", "value"];
    if flags.leading {
        cols.push("leading");
    }
    if flags.compare {
        cols.extend(["oracle", "rel_diff"]);
    }
    cols.push("converged");
    let mut report = Report::new(cols);
    let (value, mut converged) = match value {
        Ok(v) => (v, true),
        Err(Error::NonConvergence { partial, .. }) => (partial, false),
        Err(e) => return Err(e.into()),
    };
    let mut row = vec![Cell::Text(label), Cell::from(value)];
    if let Some(l) = leading {
        row.push(Cell::from(l.map_err(usage)?));
    }
    if let Some(o) = oracle {
        let (o, ok) = oracle_value(o)?;
        converged &= ok;
        row.extend([Cell::from(o), Cell::from(rel_diff(value, o))]);
    }
    row.push(Cell::from(converged));
    report.nonconverged = !converged;
    report.push(row);
    Ok(report)
}

fn run_asym(args: &AsymArgs, opts: &TransformOptions) -> CliResult<Report> {
    let f = parse_fn(&args.f)?;
    let a = parse_limit(&args.a)?;
    let lb = classify(&f, args.n, args.nu, a).map_err(|e| CliError::usage(e.to_string()))?;
    let mut cols = vec!["kind", "coefficient", "exponent", "carries_log"];
    if args.omega.is_some() {
        cols.extend(["omega", "leading", "exact", "ratio", "converged"]);
    }
    let mut report = Report::new(cols);
    let kind = match lb.kind {
        fpi_core::LeadingKind::LogDominant => "log",
        fpi_core::LeadingKind::PowerDominant => "power",
        fpi_core::LeadingKind::NaiveDominant => "naive",
        fpi_core::LeadingKind::BranchPowerDominant => "branch-power",
    };
    let mut row = vec![
        Cell::from(kind),
        Cell::from(lb.coefficient),
        Cell::from(lb.exponent),
        Cell::from(lb.carries_log),
    ];
    if let Some(w) = args.omega {
        let spec = TransformSpec::new(f, args.n, args.nu, w, a).map_err(|e| CliError::usage(e.to_string()))?;
        let (e, ok) = expansion(eval(&spec, opts))?;
        let lead = lb.value_at(w);
        row.extend([
            Cell::from(w),
            Cell::from(lead),
            Cell::from(e.total),
            Cell::from(e.total / lead),
            Cell::from(ok),
        ]);
        report.nonconverged = !ok;
    }
    report.push(row);
    Ok(report)
}

struct GridPoint {
    omega: f64,
    expansion: fpi_core::Result<ExpansionResult>,
    oracle: Option<fpi_core::Result<f64>>,
}

fn run_grid(args: &GridArgs, opts: &TransformOptions, is_compare: bool) -> CliResult<Report> {
    let f = parse_fn(&args.f)?;
    let a = parse_limit(&args.a)?;
    let grid = parse_grid(&args.omega_grid, args.linear)?;
    let with_oracle = is_compare || args.compare;
    let point = |w: f64| -> GridPoint {
        if args.quadratic {
            GridPoint {
                omega: w,
                expansion: eval_quadratic(&f, w, a, opts),
                oracle: with_oracle.then(|| quadratic_quadrature(&f, w, a, ORACLE_TOL).map(|q| q.value)),
            }
        } else {
            let spec = TransformSpec::new(f.clone(), args.n, args.nu, w, a);
            let oracle = match (&spec, with_oracle) {
                (Ok(s), true) => Some(transform_quadrature(s, ORACLE_TOL).map(|q| q.value)),
                _ => None,
            };
            GridPoint {
                omega: w,
                expansion: spec.and_then(|s| eval(&s, opts)),
                oracle,
            }
        }
    };
    // Evaluation order is free; `map_grid` returns results in grid order.
    let points = map_grid(&grid, point);

    let mut report = if is_compare {
        Report::new(vec![
            "omega",
            "method",
            "oracle",
            "abs_diff",
            "rel_diff",
            "k_used",
            "tail_estimate",
            "converged",
        ])
    } else {
        expansion_report(args.compare)
    };
    for p in points {
        let (e, ok) = expansion(p.expansion)?;
        let oracle = p.oracle.map(oracle_value).transpose()?;
        if is_compare {
            let (o, oracle_ok) = oracle.expect("compare always evaluates the oracle");
            let converged = ok && oracle_ok;
            report.nonconverged |= !converged;
            report.push(vec![
                Cell::from(p.omega),
                Cell::from(e.total),
                Cell::from(o),
                Cell::from((e.total - o).abs()),
                Cell::from(rel_diff(e.total, o)),
                Cell::from(e.k_used),
                Cell::from(e.tail_estimate),
                Cell::from(converged),
            ]);
        } else {
            push_expansion(&mut report, p.omega, &e, ok, oracle);
        }
    }
    Ok(report)
}
