//! Entire functions represented by their Maclaurin coefficients.
//!
//! A [`TaylorFunction`] pairs a closed-form [`Descriptor`] with a lazily
//! filled, per-instance coefficient cache. The built-in descriptors evaluate
//! values and derivatives in closed form; [`Descriptor::Custom`] functions are
//! supplied by the caller as a coefficient stream plus a real point evaluator,
//! and their complex values and derivatives are summed from the stream.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{binomial, factorial};

/// Largest index scanned when looking for the first non-zero coefficient of
/// a custom function.
pub const ZERO_ORDER_SCAN_CAP: usize = 256;

/// Default cap on partial sums used for custom functions.
pub const DEFAULT_TERM_CAP: usize = 10_000;

/// Multiplicity of the zero of `f` at the origin (`0` when `f(0) != 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ZeroOrder(pub usize);

type CoeffFn = dyn Fn(usize) -> f64 + Send + Sync;
type EvalFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Caller-provided entire function.
///
/// The caller owns the promise that the coefficient stream has infinite radius
/// of convergence; nothing here can verify it.
#[derive(Clone)]
pub struct CustomFn {
    label: String,
    coeff: Arc<CoeffFn>,
    eval: Arc<EvalFn>,
    decays: bool,
}

impl CustomFn {
    pub fn new<C, E>(label: impl Into<String>, coeff: C, eval: E) -> Self
    where
        C: Fn(usize) -> f64 + Send + Sync + 'static,
        E: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        CustomFn {
            label: label.into(),
            coeff: Arc::new(coeff),
            eval: Arc::new(eval),
            decays: false,
        }
    }

    /// Declare that `f(x)` decays faster than any power of `x` as `x -> inf`,
    /// so that `f(x) x^-p` is integrable at infinity for every `p`.
    pub fn rapidly_decaying(mut self) -> Self {
        self.decays = true;
        self
    }
}

impl fmt::Debug for CustomFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFn")
            .field("label", &self.label)
            .field("decays", &self.decays)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum Descriptor {
    /// `e^{-b x}`, `b > 0`.
    Exponential {
        b: f64,
    },
    /// `sum_{k=low}^{low+len-1} coeffs[k-low] x^k` with non-zero end coefficients.
    Polynomial {
        low: usize,
        coeffs: Vec<f64>,
    },
    /// `x^p e^{-b x}`.
    MonomialExp {
        p: usize,
        b: f64,
    },
    /// `x^p (1 - x)^q`.
    BinomialPoly {
        p: usize,
        q: usize,
    },
    Custom(CustomFn),
}

/// An entire function `scale * g(x)` where `g` is described by a [`Descriptor`].
#[derive(Clone)]
pub struct TaylorFunction {
    descriptor: Descriptor,
    scale: f64,
    /// Unscaled coefficients of `g`, memoized on demand.
    cache: Arc<RwLock<Vec<f64>>>,
    term_cap: usize,
}

impl fmt::Debug for TaylorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TaylorFunction")
            .field("descriptor", &self.descriptor)
            .field("scale", &self.scale)
            .finish()
    }
}

impl TaylorFunction {
    fn from_descriptor(descriptor: Descriptor) -> Self {
        TaylorFunction {
            descriptor,
            scale: 1.0,
            cache: Arc::new(RwLock::new(Vec::new())),
            term_cap: DEFAULT_TERM_CAP,
        }
    }

    pub fn exponential(b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::domain(format!("exp(b) needs finite b > 0, got {b}")));
        }
        Ok(Self::from_descriptor(Descriptor::Exponential { b }))
    }

    /// `sum_k coeffs[k] x^{low+k}`; the first and last coefficient must be non-zero.
    pub fn polynomial(low: usize, coeffs: Vec<f64>) -> Result<Self> {
        match (coeffs.first(), coeffs.last()) {
            (Some(&first), Some(&last)) if first != 0.0 && last != 0.0 => {}
            _ => {
                return Err(Error::domain(
                    "polynomial needs non-zero lowest and highest coefficients",
                ))
            }
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("polynomial coefficients must be finite"));
        }
        Ok(Self::from_descriptor(Descriptor::Polynomial { low, coeffs }))
    }

    /// The constant function `c`.
    pub fn constant(c: f64) -> Result<Self> {
        Self::polynomial(0, vec![c])
    }

    pub fn monomial_exp(p: usize, b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::domain(format!("monexp(p, b) needs finite b > 0, got {b}")));
        }
        Ok(Self::from_descriptor(Descriptor::MonomialExp { p, b }))
    }

    pub fn binomial_poly(p: usize, q: usize) -> Self {
        Self::from_descriptor(Descriptor::BinomialPoly { p, q })
    }

    pub fn custom(f: CustomFn) -> Self {
        Self::from_descriptor(Descriptor::Custom(f))
    }

    /// `c * self`. The coefficient cache holds unscaled values and is shared.
    pub fn scaled(&self, c: f64) -> Self {
        TaylorFunction {
            scale: self.scale * c,
            ..self.clone()
        }
    }

    pub fn with_term_cap(mut self, cap: usize) -> Self {
        self.term_cap = cap.max(1);
        self
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Degree for polynomial descriptors.
    pub fn degree(&self) -> Option<usize> {
        match &self.descriptor {
            Descriptor::Polynomial { low, coeffs } => Some(low + coeffs.len() - 1),
            Descriptor::BinomialPoly { p, q } => Some(p + q),
            _ => None,
        }
    }

    /// Whether `f(x) x^{-power}` is known to be integrable on `[1, inf)`.
    ///
    /// Binomial polynomials are always rejected; custom functions qualify
    /// only when declared rapidly decaying.
    pub fn integrable_at_infinity(&self, power: f64) -> bool {
        match &self.descriptor {
            Descriptor::Exponential { .. } | Descriptor::MonomialExp { .. } => true,
            Descriptor::Polynomial { .. } => {
                let deg = self.degree().unwrap_or(0) as f64;
                deg - power < -1.0
            }
            Descriptor::BinomialPoly { .. } => false,
            Descriptor::Custom(c) => c.decays,
        }
    }

    fn raw_coeff_closed(&self, k: usize, prev: Option<f64>) -> f64 {
        match &self.descriptor {
            Descriptor::Exponential { b } => match prev {
                Some(p) if k > 0 => p * (-b) / k as f64,
                _ => exp_coeff(*b, k),
            },
            Descriptor::MonomialExp { p, b } => {
                if k < *p {
                    0.0
                } else if k == *p {
                    1.0
                } else {
                    match prev {
                        Some(c) => c * (-b) / (k - p) as f64,
                        None => exp_coeff(*b, k - p),
                    }
                }
            }
            Descriptor::Polynomial { low, coeffs } => {
                if k < *low {
                    0.0
                } else {
                    coeffs.get(k - low).copied().unwrap_or(0.0)
                }
            }
            Descriptor::BinomialPoly { p, q } => {
                if k < *p || k > p + q {
                    0.0
                } else {
                    let j = k - p;
                    let c = binomial(*q, j);
                    if j.is_multiple_of(2) {
                        c
                    } else {
                        -c
                    }
                }
            }
            Descriptor::Custom(c) => (c.coeff)(k),
        }
    }

    fn fill_cache(&self, upto: usize) {
        {
            let cache = self.cache.read().expect("coefficient cache poisoned");
            if cache.len() > upto {
                return;
            }
        }
        let mut cache = self.cache.write().expect("coefficient cache poisoned");
        while cache.len() <= upto {
            let k = cache.len();
            let prev = cache.last().copied();
            let c = self.raw_coeff_closed(k, prev);
            cache.push(c);
        }
    }

    /// Maclaurin coefficient `c_k`.
    pub fn coeff(&self, k: usize) -> f64 {
        self.fill_cache(k);
        let cache = self.cache.read().expect("coefficient cache poisoned");
        self.scale * cache[k]
    }

    /// Coefficients `c_0 ..= c_upto`.
    pub fn coeffs(&self, upto: usize) -> Vec<f64> {
        self.fill_cache(upto);
        let cache = self.cache.read().expect("coefficient cache poisoned");
        cache[..=upto].iter().map(|c| c * self.scale).collect()
    }

    /// Real point value `f(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let g = match &self.descriptor {
            Descriptor::Exponential { b } => (-b * x).exp(),
            Descriptor::MonomialExp { p, b } => x.powi(*p as i32) * (-b * x).exp(),
            Descriptor::Polynomial { low, coeffs } => horner(coeffs, x) * x.powi(*low as i32),
            Descriptor::BinomialPoly { p, q } => x.powi(*p as i32) * (1.0 - x).powi(*q as i32),
            Descriptor::Custom(c) => (c.eval)(x),
        };
        self.scale * g
    }

    /// Value of the entire extension at a complex point.
    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64> {
        let g = match &self.descriptor {
            Descriptor::Exponential { b } => (-*b * z).exp(),
            Descriptor::MonomialExp { p, b } => z.powu(*p as u32) * (-*b * z).exp(),
            Descriptor::Polynomial { low, coeffs } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in coeffs.iter().rev() {
                    acc = acc * z + c;
                }
                acc * z.powu(*low as u32)
            }
            Descriptor::BinomialPoly { p, q } => z.powu(*p as u32) * (Complex64::new(1.0, 0.0) - z).powu(*q as u32),
            Descriptor::Custom(_) => return self.derivative_series(0, z),
        };
        Ok(self.scale * g)
    }

    /// `f^{(k)}(x)`.
    pub fn derivative_at(&self, k: usize, x: f64) -> Result<f64> {
        if k == 0 && !matches!(self.descriptor, Descriptor::Custom(_)) {
            return Ok(self.eval(x));
        }
        let g = match &self.descriptor {
            Descriptor::Exponential { b } => (-b).powi(k as i32) * (-b * x).exp(),
            Descriptor::MonomialExp { p, b } => {
                let mut acc = 0.0;
                for j in 0..=k.min(*p) {
                    let falling = factorial(*p) / factorial(p - j);
                    acc += binomial(k, j) * falling * x.powi((p - j) as i32) * (-b).powi((k - j) as i32);
                }
                acc * (-b * x).exp()
            }
            Descriptor::Polynomial { .. } | Descriptor::BinomialPoly { .. } => {
                let deg = self.degree().unwrap_or(0);
                if k > deg {
                    0.0
                } else {
                    let dcoeffs: Vec<f64> = (k..=deg)
                        .map(|j| self.raw_coeff_closed(j, None) * falling_factorial(j, k))
                        .collect();
                    horner(&dcoeffs, x)
                }
            }
            Descriptor::Custom(_) => return self.derivative_series(k, Complex64::new(x, 0.0)).map(|v| v.re),
        };
        Ok(self.scale * g)
    }

    /// `sum_{j>=k} c_j j!/(j-k)! z^{j-k}` summed until two consecutive terms
    /// fall below `1e-15` of the running sum.
    fn derivative_series(&self, k: usize, z: Complex64) -> Result<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut small = 0;
        let mut zpow = Complex64::new(1.0, 0.0);
        let mut last_nonzero = 0usize;
        for j in k..k + self.term_cap {
            let c = self.coeff(j);
            let term = c * falling_factorial(j, k) * zpow;
            sum += term;
            if c != 0.0 {
                last_nonzero = j;
            }
            let tiny = term.norm() <= 1e-15 * sum.norm() || (term.norm() == 0.0 && sum.norm() == 0.0);
            // Runs of structural zeros in the stream do not count as convergence.
            if tiny && (c != 0.0 || j > last_nonzero + 64) {
                small += 1;
                if small >= 2 {
                    return Ok(sum);
                }
            } else if !tiny {
                small = 0;
            }
            zpow *= z;
            if !zpow.is_finite() {
                break;
            }
        }
        Err(Error::NonConvergence {
            what: "Taylor series evaluation",
            partial: sum.re,
            terms: self.term_cap,
        })
    }

    /// Order of the zero at the origin.
    pub fn zero_order(&self) -> Result<ZeroOrder> {
        if self.scale == 0.0 {
            return Err(Error::IndeterminateOrder(0));
        }
        match &self.descriptor {
            Descriptor::Exponential { .. } => Ok(ZeroOrder(0)),
            Descriptor::MonomialExp { p, .. } | Descriptor::BinomialPoly { p, .. } => Ok(ZeroOrder(*p)),
            Descriptor::Polynomial { low, .. } => Ok(ZeroOrder(*low)),
            Descriptor::Custom(_) => (0..=ZERO_ORDER_SCAN_CAP)
                .find(|&k| self.coeff(k) != 0.0)
                .map(ZeroOrder)
                .ok_or(Error::IndeterminateOrder(ZERO_ORDER_SCAN_CAP + 1)),
        }
    }

    /// Index past which every coefficient is zero, for polynomial descriptors.
    pub(crate) fn coeff_end(&self) -> Option<usize> {
        self.degree().map(|d| d + 1)
    }
}

fn exp_coeff(b: f64, k: usize) -> f64 {
    let mut c = 1.0;
    for j in 1..=k {
        c *= -b / j as f64;
    }
    c
}

fn falling_factorial(j: usize, k: usize) -> f64 {
    ((j - k + 1)..=j).fold(1.0, |acc, i| acc * i as f64)
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

impl fmt::Display for TaylorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale != 1.0 {
            write!(f, "{}*", fmt_num(self.scale))?;
        }
        match &self.descriptor {
            Descriptor::Exponential { b } => write!(f, "exp({})", fmt_num(*b)),
            Descriptor::MonomialExp { p, b } => write!(f, "monexp({p},{})", fmt_num(*b)),
            Descriptor::BinomialPoly { p, q } => write!(f, "binpoly({p},{q})"),
            Descriptor::Polynomial { low, coeffs } => {
                let body: Vec<String> = coeffs.iter().map(|c| fmt_num(*c)).collect();
                write!(f, "poly({}@{low})", body.join(":"))
            }
            Descriptor::Custom(c) => write!(f, "custom({})", c.label),
        }
    }
}

/// Parses the function mini-language: `exp(b)`, `poly(a_r:...:a_s@r)`,
/// `monexp(p,b)`, `binpoly(p,q)`, each optionally prefixed by `c*`.
impl FromStr for TaylorFunction {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let (scale, body) = match text.find('*') {
            Some(pos) => {
                let s: f64 = text[..pos].parse().map_err(|_| err("bad scale factor"))?;
                if !s.is_finite() {
                    return Err(err("scale factor must be finite"));
                }
                (s, &text[pos + 1..])
            }
            None => (1.0, text.as_str()),
        };
        let open = body.find('(').ok_or_else(|| err("expected `name(...)`"))?;
        if !body.ends_with(')') {
            return Err(err("missing closing parenthesis"));
        }
        let name = &body[..open];
        let args = &body[open + 1..body.len() - 1];
        let parse_f = |s: &str| -> Result<f64> { s.parse::<f64>().map_err(|_| err("bad number")) };
        let parse_u =
            |s: &str| -> Result<usize> { s.parse::<usize>().map_err(|_| err("expected a non-negative integer")) };
        let wrap = |r: Result<TaylorFunction>| {
            r.map_err(|e| match e {
                Error::Domain(msg) => err(&msg),
                other => other,
            })
        };
        let f = match name {
            "exp" => wrap(TaylorFunction::exponential(parse_f(args)?))?,
            "monexp" => {
                let parts: Vec<&str> = args.split(',').collect();
                if parts.len() != 2 {
                    return Err(err("monexp takes (p,b)"));
                }
                wrap(TaylorFunction::monomial_exp(parse_u(parts[0])?, parse_f(parts[1])?))?
            }
            "binpoly" => {
                let parts: Vec<&str> = args.split(',').collect();
                if parts.len() != 2 {
                    return Err(err("binpoly takes (p,q)"));
                }
                TaylorFunction::binomial_poly(parse_u(parts[0])?, parse_u(parts[1])?)
            }
            "poly" => {
                let (list, low) = match args.split_once('@') {
                    Some((l, r)) => (l, parse_u(r)?),
                    None => (args, 0),
                };
                let coeffs = list.split(':').map(parse_f).collect::<Result<Vec<f64>>>()?;
                wrap(TaylorFunction::polynomial(low, coeffs))?
            }
            _ => return Err(err("unknown function name")),
        };
        Ok(f.scaled(scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn coefficient_examples() {
        let e = TaylorFunction::exponential(1.0).unwrap();
        assert_relative_eq!(e.coeff(3), -1.0 / 6.0, max_relative = 1e-15);
        let bp = TaylorFunction::binomial_poly(1, 2);
        assert_eq!(bp.coeff(2), -2.0);
        let p = TaylorFunction::polynomial(2, vec![5.0]).unwrap();
        assert_eq!(p.coeff(1), 0.0);
        assert_eq!(p.coeff(2), 5.0);
    }

    #[test]
    fn complex_evaluation_examples() {
        let e = TaylorFunction::exponential(1.0).unwrap();
        let v = e.eval_complex(Complex64::new(0.0, 0.5)).unwrap();
        assert_relative_eq!(v.re, 0.5f64.cos(), max_relative = 1e-15);
        assert_relative_eq!(v.im, -(0.5f64.sin()), max_relative = 1e-15);
        let bp = TaylorFunction::binomial_poly(0, 2);
        assert_relative_eq!(bp.eval_complex(Complex64::new(-0.5, 0.0)).unwrap().re, 2.25);
        let e2 = TaylorFunction::exponential(2.0).unwrap();
        assert_relative_eq!(
            e2.eval_complex(Complex64::new(1.0, 0.0)).unwrap().re,
            (-2.0f64).exp(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn derivative_examples() {
        let e = TaylorFunction::exponential(1.0).unwrap();
        assert_relative_eq!(e.derivative_at(2, -0.5).unwrap(), 0.5f64.exp(), max_relative = 1e-15);
        let bp = TaylorFunction::binomial_poly(1, 2);
        assert_eq!(bp.derivative_at(1, 0.0).unwrap(), 1.0);
        let c = TaylorFunction::constant(7.0).unwrap();
        assert_eq!(c.derivative_at(3, 10.0).unwrap(), 0.0);
    }

    #[test]
    fn monomial_exp_derivative_matches_custom_series() {
        let f = TaylorFunction::monomial_exp(3, 2.0).unwrap();
        let g = f.clone();
        let custom = TaylorFunction::custom(CustomFn::new(
            "x^3 e^-2x",
            move |k| g.coeff(k),
            |x| x.powi(3) * (-2.0 * x).exp(),
        ));
        for k in 0..6 {
            for &x in &[-0.7, 0.0, 0.4, 1.3] {
                let a = f.derivative_at(k, x).unwrap();
                let b = custom.derivative_at(k, x).unwrap();
                assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "k={k} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn zero_order_examples() {
        assert_eq!(
            TaylorFunction::exponential(1.0).unwrap().zero_order().unwrap(),
            ZeroOrder(0)
        );
        assert_eq!(
            TaylorFunction::monomial_exp(4, 1.0).unwrap().zero_order().unwrap(),
            ZeroOrder(4)
        );
        assert_eq!(TaylorFunction::binomial_poly(1, 3).zero_order().unwrap(), ZeroOrder(1));
    }

    #[test]
    fn custom_zero_order_scan_is_capped() {
        let zero = TaylorFunction::custom(CustomFn::new("zero", |_| 0.0, |_| 0.0));
        assert!(matches!(zero.zero_order(), Err(Error::IndeterminateOrder(_))));
        let late = TaylorFunction::custom(CustomFn::new("x^9", |k| if k == 9 { 1.0 } else { 0.0 }, |x| x.powi(9)));
        assert_eq!(late.zero_order().unwrap(), ZeroOrder(9));
    }

    #[test]
    fn polynomial_rejects_zero_ends() {
        assert!(TaylorFunction::polynomial(0, vec![0.0, 1.0]).is_err());
        assert!(TaylorFunction::polynomial(0, vec![1.0, 0.0]).is_err());
        assert!(TaylorFunction::polynomial(0, vec![]).is_err());
        assert!(TaylorFunction::exponential(0.0).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "exp(1)",
            "poly(1:-2:1@0)",
            "monexp(2,1.5)",
            "binpoly(1,2)",
            "0.5*exp(1)",
            "poly(5@2)",
        ] {
            let f: TaylorFunction = s.parse().unwrap();
            let again: TaylorFunction = f.to_string().parse().unwrap();
            for k in 0..8 {
                assert_eq!(f.coeff(k), again.coeff(k), "{s}");
            }
        }
        let p: TaylorFunction = "poly(1:-2:1)".parse().unwrap();
        assert_eq!(p.eval(3.0), 4.0);
        let h: TaylorFunction = "0.5*exp(1)".parse().unwrap();
        assert_relative_eq!(h.eval(0.0), 0.5);
    }

    #[test]
    fn parse_errors() {
        for s in [
            "",
            "exp",
            "exp(-1)",
            "sin(1)",
            "poly(0:1)",
            "monexp(1)",
            "binpoly(a,2)",
            "x*exp(1)",
        ] {
            assert!(matches!(s.parse::<TaylorFunction>(), Err(Error::Parse { .. })), "{s}");
        }
    }

    #[test]
    fn custom_complex_eval_uses_stream() {
        let cos = TaylorFunction::custom(CustomFn::new(
            "cos",
            |k| {
                if k % 2 == 1 {
                    0.0
                } else {
                    crate::special::sign_pow((k / 2) as i64) / factorial(k)
                }
            },
            f64::cos,
        ));
        let z = Complex64::new(0.3, 1.1);
        let v = cos.eval_complex(z).unwrap();
        let w = z.cos();
        assert!((v - w).norm() < 1e-14);
    }

    #[test]
    fn custom_nonconvergence_is_reported() {
        // Coefficients of 1/(1-x): not entire, partial sums diverge at |z| > 1.
        let bad = TaylorFunction::custom(CustomFn::new("geom", |_| 1.0, |x| 1.0 / (1.0 - x))).with_term_cap(200);
        assert!(matches!(
            bad.eval_complex(Complex64::new(2.0, 0.0)),
            Err(Error::NonConvergence { .. })
        ));
    }
}
