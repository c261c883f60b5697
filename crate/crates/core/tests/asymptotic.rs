use fpi_core::stieltjes::{eval, transform_quadrature, TransformOptions};
use fpi_core::{classify, leading_term, LeadingKind, TaylorFunction, TransformSpec};

const INF: f64 = f64::INFINITY;

fn f(s: &str) -> TaylorFunction {
    s.parse().unwrap()
}

fn exact(s: &str, n: usize, nu: f64, a: f64, omega: f64) -> f64 {
    let spec = TransformSpec::new(f(s), n, nu, omega, a).unwrap();
    eval(&spec, &TransformOptions::default()).unwrap().total
}

/// One fixture per classified case, plus higher zero orders.
const CASES: [(&str, usize, f64, f64, LeadingKind); 9] = [
    ("exp(1)", 1, 0.0, INF, LeadingKind::LogDominant),
    ("monexp(1,1)", 2, 0.0, 1.0, LeadingKind::LogDominant),
    ("monexp(2,1)", 1, 0.0, 1.0, LeadingKind::NaiveDominant),
    ("binpoly(2,1)", 2, 0.5, 1.0, LeadingKind::NaiveDominant),
    ("poly(1)", 3, 0.0, 1.0, LeadingKind::PowerDominant),
    ("exp(1)", 4, 0.0, INF, LeadingKind::PowerDominant),
    ("poly(1)", 1, 0.5, 1.0, LeadingKind::BranchPowerDominant),
    ("exp(2)", 2, 0.25, INF, LeadingKind::BranchPowerDominant),
    ("monexp(1,1)", 3, 0.75, 1.0, LeadingKind::BranchPowerDominant),
];

#[test]
fn classification_kinds() {
    for (s, n, nu, a, kind) in CASES {
        assert_eq!(classify(&f(s), n, nu, a).unwrap().kind, kind, "{s} n={n} nu={nu}");
    }
}

#[test]
fn ratio_to_leading_term_shrinks_monotonically() {
    for (s, n, nu, a, kind) in CASES {
        let errs: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&w| (exact(s, n, nu, a, w) / leading_term(&f(s), n, nu, a, w).unwrap() - 1.0).abs())
            .collect();
        assert!(
            errs[1] < errs[0] && errs[2] < errs[1],
            "{s} n={n} nu={nu} a={a}: {errs:?}"
        );
        if kind == LeadingKind::LogDominant {
            // Only C/ln(w) decay here, so err * |ln w| must settle on C.
            let c: Vec<f64> = errs
                .iter()
                .zip([1e-2f64, 1e-3, 1e-4])
                .map(|(e, w)| e * w.ln().abs())
                .collect();
            assert!((c[2] - c[1]).abs() < 0.1 * c[2], "{s} n={n} a={a}: {c:?}");
        } else {
            assert!(errs[2] < 0.05, "{s} n={n} nu={nu} a={a}: {errs:?}");
        }
    }
}

#[test]
fn log_coefficient_fit() {
    let pts: Vec<(f64, f64)> = [1e-3f64, 1e-4, 1e-5, 1e-6]
        .iter()
        .map(|&w| (w.ln(), exact("exp(1)", 1, 0.0, INF, w)))
        .collect();
    let k = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (sxx, sxy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x * x, b + x * y));
    let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    let intercept = (sy - slope * sx) / k;
    assert!((slope + 1.0).abs() < 0.02, "{slope}");
    // The constant is the finite part of the naive integral, here -gamma.
    assert!((intercept + 0.577_215_664_9).abs() < 2e-2, "{intercept}");
}

/// Brute-force quadrature fixes the power case independently of the classifier.
#[test]
fn power_case_exponent_from_quadrature() {
    let q = |w: f64| {
        let spec = TransformSpec::new(f("poly(1)"), 3, 0.0, w, 1.0).unwrap();
        transform_quadrature(&spec, 1e-13).unwrap().value
    };
    let (w1, w2): (f64, f64) = (1e-2, 1e-3);
    let slope = (q(w2).ln() - q(w1).ln()) / (w2.ln() - w1.ln());
    let lead = classify(&f("poly(1)"), 3, 0.0, 1.0).unwrap();
    assert!((slope - lead.exponent).abs() < 0.01, "{slope}");
    assert!((q(w2) * w2 * w2 - lead.coefficient).abs() < 1e-2);
}

#[test]
fn naive_coefficient_is_the_finite_part() {
    let lead = classify(&f("binpoly(2,1)"), 2, 0.5, 1.0).unwrap();
    // int_0^1 x^{-1/2} (1 - x) dx = 2 - 2/3
    assert!((lead.coefficient - 4.0 / 3.0).abs() < 1e-14);
    assert_eq!(lead.exponent, 0.0);
    assert!(!lead.carries_log);
}
