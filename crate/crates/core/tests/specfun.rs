use statrs::function::gamma::gamma;

use fpi_core::oracle::{gauss2f1_branch_euler, gauss2f1_integer_euler, kummer_u_laplace};
use fpi_core::specfun::{
    gauss2f1_branch, gauss2f1_integer, gauss2f1_integer_leading, kummer_u, kummer_u_leading, Gauss2F1BranchParams,
    Gauss2F1IntParams, KummerParams,
};
use fpi_core::stieltjes::{eval, TransformOptions};
use fpi_core::{TaylorFunction, TransformSpec};

const INF: f64 = f64::INFINITY;
const ORACLE_TOL: f64 = 1e-13;

fn fact(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

fn rel(v: f64, o: f64) -> f64 {
    ((v - o) / o).abs()
}

fn transform(f: TaylorFunction, n: usize, nu: f64, omega: f64, a: f64) -> f64 {
    eval(
        &TransformSpec::new(f, n, nu, omega, a).unwrap(),
        &TransformOptions::default(),
    )
    .unwrap()
    .total
}

#[test]
fn gauss_integer_matches_euler_integral() {
    for (n, r, s) in [(5, 2, 4), (3, 1, 3), (6, 2, 5)] {
        for zeta in [1.5, 4.0, 30.0] {
            let p = Gauss2F1IntParams { n, r, s, zeta };
            let v = gauss2f1_integer(&p).unwrap();
            let o = gauss2f1_integer_euler(&p, ORACLE_TOL).unwrap();
            assert!(rel(v, o) <= 1e-9, "{p:?}: {v} vs {o}");
        }
    }
}

#[test]
fn gauss_branch_matches_euler_integral() {
    for (n, s, mu) in [(2, 1, 0.5), (3, 3, 0.25), (1, 2, 0.75)] {
        for zeta in [1.5, 4.0, 30.0] {
            let p = Gauss2F1BranchParams { n, s, mu, zeta };
            let v = gauss2f1_branch(&p).unwrap();
            let o = gauss2f1_branch_euler(&p, ORACLE_TOL).unwrap();
            assert!(rel(v, o) <= 1e-9, "{p:?}: {v} vs {o}");
        }
    }
}

#[test]
fn kummer_matches_laplace_integral() {
    let cases = [
        KummerParams::integer(2, 5, 0.0),
        KummerParams::integer(4, 2, 0.0),
        KummerParams::fractional(0.3, 2, 0.0),
    ];
    for base in cases {
        for omega in [0.05, 0.7, 3.0] {
            let p = KummerParams { omega, ..base };
            let v = kummer_u(&p).unwrap();
            let o = kummer_u_laplace(&p, ORACLE_TOL).unwrap();
            assert!(rel(v, o) <= 1e-9, "{p:?}: {v} vs {o}");
        }
    }
}

#[test]
fn closed_forms() {
    for zeta in [1.5, 3.0, 25.0] {
        let v = gauss2f1_integer(&Gauss2F1IntParams { n: 5, r: 2, s: 4, zeta }).unwrap();
        assert!(rel(v, (zeta + 2.0) / (2.0 * (zeta + 1.0).powi(3))) <= 1e-12);
        let v = gauss2f1_branch(&Gauss2F1BranchParams {
            n: 2,
            s: 1,
            mu: 0.5,
            zeta,
        })
        .unwrap();
        let r = zeta.sqrt();
        assert!(rel(v, 3.0 * (r + (zeta - 1.0) * r.atan()) / (4.0 * zeta.powf(1.5))) <= 1e-12);
    }
}

#[test]
fn gauss_integer_is_a_stieltjes_transform() {
    for (n, r, s) in [(5, 2, 4), (4, 1, 4), (6, 3, 6)] {
        for zeta in [2.0, 5.0, 12.0] {
            let v = gauss2f1_integer(&Gauss2F1IntParams { n, r, s, zeta }).unwrap();
            let g = TaylorFunction::binomial_poly(r - 1, s - r - 1);
            let beta = fact(s - 1) / (fact(r - 1) * fact(s - r - 1));
            let via = beta / zeta.powi(n as i32) * transform(g, n, 0.0, 1.0 / zeta, 1.0);
            assert!(rel(v, via) <= 1e-10, "n={n} r={r} s={s} zeta={zeta}: {v} vs {via}");
        }
    }
}

#[test]
fn gauss_branch_is_a_stieltjes_transform() {
    for (n, s, mu) in [(2, 1, 0.5), (3, 2, 0.25), (2, 4, 0.75)] {
        for zeta in [2.0, 5.0, 12.0] {
            let v = gauss2f1_branch(&Gauss2F1BranchParams { n, s, mu, zeta }).unwrap();
            let g = TaylorFunction::binomial_poly(0, s);
            let c = gamma(s as f64 - mu + 2.0) / (gamma(1.0 - mu) * fact(s) * zeta.powi(n as i32));
            let via = c * transform(g, n, mu, 1.0 / zeta, 1.0);
            assert!(rel(v, via) <= 1e-10, "n={n} s={s} mu={mu} zeta={zeta}: {v} vs {via}");
        }
    }
}

#[test]
fn kummer_is_a_stieltjes_transform() {
    for (s, n) in [(2, 3), (3, 3), (4, 2)] {
        for omega in [0.05, 0.3, 0.8] {
            let v = kummer_u(&KummerParams::integer(s, n, omega)).unwrap();
            let g = TaylorFunction::monomial_exp(s - 1, 1.0).unwrap();
            let via = omega.powi(n as i32 - s as i32) / fact(s - 1) * transform(g, n, 0.0, omega, INF);
            assert!(rel(v, via) <= 1e-10, "s={s} n={n} w={omega}: {v} vs {via}");
        }
    }
    for (a, n) in [(0.5, 1), (0.25, 3)] {
        for omega in [0.05, 0.3, 0.8] {
            let v = kummer_u(&KummerParams::fractional(a, n, omega)).unwrap();
            let g = TaylorFunction::exponential(1.0).unwrap();
            let via = omega.powf(n as f64 - a) / gamma(a) * transform(g, n, 1.0 - a, omega, INF);
            assert!(rel(v, via) <= 1e-10, "a={a} n={n} w={omega}: {v} vs {via}");
        }
    }
}

#[test]
fn leading_forms() {
    let p = Gauss2F1IntParams {
        n: 5,
        r: 2,
        s: 4,
        zeta: 100.0,
    };
    let ratio = gauss2f1_integer_leading(&p).unwrap() / gauss2f1_integer(&p).unwrap();
    assert!((ratio - 1.0).abs() < 0.05, "{ratio}");

    let p = KummerParams::fractional(0.5, 1, 1e-4);
    let ratio = kummer_u_leading(&p).unwrap() / kummer_u(&p).unwrap();
    assert!((0.99..=1.01).contains(&ratio), "{ratio}");
}

#[test]
fn out_of_domain_parameters_are_rejected() {
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
        zeta: 0.5
    })
    .is_err());
    assert!(gauss2f1_branch(&Gauss2F1BranchParams {
        n: 2,
        s: 1,
        mu: 1.0,
        zeta: 2.0
    })
    .is_err());
    assert!(kummer_u(&KummerParams::integer(2, 2, -1.0)).is_err());
    assert!(kummer_u(&KummerParams {
        order: 0.5,
        ..KummerParams::integer(2, 2, 1.0)
    })
    .is_err());
}
