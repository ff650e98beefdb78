//! Evaluation of the transform psi(x) = integral of cosh(xu) dnu(u) and
//! its relatives: the built-in catalog, series access, growth-rate
//! estimation, and classification of nonnegative-coefficient series.

use crate::error::{Error, Result};
use crate::measure::{MeasureSpec, MomentSequence};
use crate::special::{erf, ln_factorial, log_cosh, log_sinh, sinhc};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

const SQRT_PI: f64 = 1.772_453_850_905_515_9;
const LN_2: f64 = std::f64::consts::LN_2;

/// Built-in closed-form transforms.
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogPsi {
    /// psi = c; the transform of c * delta_0.
    Const { c: f64 },
    /// cosh x; the transform of delta_1.
    Cosh,
    /// sinh(x)/x; the transform of Lebesgue measure on [0, 1].
    Sinhc,
    /// 1 + (sqrt(pi)/2) x erf(x/2) e^{x^2/4}; the transform of 2u e^{-u^2} du.
    ErfGauss,
    /// cosh(sqrt(xi x^2 + eta)); exponentially convex for xi > 0, eta >= 0.
    Bmv { xi: f64, eta: f64 },
    /// cosh x + cos x + delta; in class H_4, not a transform.
    CoshCos { delta: f64 },
    /// e^{x^2}; exponentially convex but superexponential.
    ExpSq,
    /// e^x; not even, usable only where evenness is not required.
    Exp,
}

/// delta at which cosh + cos + delta becomes log-convex on the whole line.
pub fn coshcos_logconvex_threshold() -> f64 {
    2.0 * std::f64::consts::PI.cosh() / (std::f64::consts::PI.cosh() - 1.0)
}

impl CatalogPsi {
    pub fn name(&self) -> &'static str {
        match self {
            CatalogPsi::Const { .. } => "const",
            CatalogPsi::Cosh => "cosh",
            CatalogPsi::Sinhc => "sinhc",
            CatalogPsi::ErfGauss => "erf-gauss",
            CatalogPsi::Bmv { .. } => "bmv",
            CatalogPsi::CoshCos { .. } => "coshcos",
            CatalogPsi::ExpSq => "expsq",
            CatalogPsi::Exp => "exp",
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        match self {
            CatalogPsi::Const { c } => {
                m.insert("c".into(), *c);
            }
            CatalogPsi::Bmv { xi, eta } => {
                m.insert("xi".into(), *xi);
                m.insert("eta".into(), *eta);
            }
            CatalogPsi::CoshCos { delta } => {
                m.insert("delta".into(), *delta);
            }
            _ => {}
        }
        m
    }

    fn eval(&self, x: f64) -> f64 {
        match self {
            CatalogPsi::Const { c } => *c,
            CatalogPsi::Cosh => x.cosh(),
            CatalogPsi::Sinhc => sinhc(x),
            CatalogPsi::ErfGauss => 1.0 + 0.5 * SQRT_PI * x * erf(0.5 * x) * (0.25 * x * x).exp(),
            CatalogPsi::Bmv { xi, eta } => (xi * x * x + eta).sqrt().cosh(),
            CatalogPsi::CoshCos { delta } => x.cosh() + x.cos() + delta,
            CatalogPsi::ExpSq => (x * x).exp(),
            CatalogPsi::Exp => x.exp(),
        }
    }

    fn eval_log(&self, x: f64) -> f64 {
        match self {
            CatalogPsi::Const { c } => c.ln(),
            CatalogPsi::Cosh => log_cosh(x),
            CatalogPsi::Sinhc => {
                if x < 1e-4 {
                    sinhc(x).ln()
                } else {
                    log_sinh(x) - x.ln()
                }
            }
            CatalogPsi::ErfGauss => {
                if x < 2.0 {
                    self.eval(x).ln()
                } else {
                    // psi = e^{x^2/4} ((sqrt(pi)/2) x erf(x/2) + e^{-x^2/4})
                    0.25 * x * x + (0.5 * SQRT_PI * x * erf(0.5 * x) + (-0.25 * x * x).exp()).ln()
                }
            }
            CatalogPsi::Bmv { xi, eta } => log_cosh((xi * x * x + eta).sqrt()),
            CatalogPsi::CoshCos { delta } => {
                if x < 30.0 {
                    self.eval(x).ln()
                } else {
                    // factor out e^x / 2
                    let t = (-2.0 * x).exp() + 2.0 * (-x).exp() * (x.cos() + delta);
                    x - LN_2 + t.ln_1p()
                }
            }
            CatalogPsi::ExpSq => x * x,
            CatalogPsi::Exp => x,
        }
    }

    fn eval_prime(&self, x: f64) -> f64 {
        match self {
            CatalogPsi::Const { .. } => 0.0,
            CatalogPsi::Cosh => x.sinh(),
            CatalogPsi::Sinhc => {
                if x.abs() < 1e-4 {
                    // x/3 + x^3/30 + ...
                    x / 3.0 + x * x * x / 30.0
                } else {
                    (x * x.cosh() - x.sinh()) / (x * x)
                }
            }
            CatalogPsi::ErfGauss => {
                0.5 * SQRT_PI * erf(0.5 * x) * (0.25 * x * x).exp() * (1.0 + 0.5 * x * x) + 0.5 * x
            }
            CatalogPsi::Bmv { xi, eta } => {
                // psi' = xi x sinh(t)/t with t = sqrt(xi x^2 + eta)
                let t = (xi * x * x + eta).sqrt();
                xi * x * sinhc(t)
            }
            CatalogPsi::CoshCos { .. } => x.sinh() - x.sin(),
            CatalogPsi::ExpSq => 2.0 * x * (x * x).exp(),
            CatalogPsi::Exp => x.exp(),
        }
    }

    fn eval_second(&self, x: f64) -> f64 {
        match self {
            CatalogPsi::Const { .. } => 0.0,
            CatalogPsi::Cosh => x.cosh(),
            CatalogPsi::Sinhc => {
                if x.abs() < 1e-3 {
                    // 1/3 + x^2/10 + x^4/168
                    1.0 / 3.0 + x * x / 10.0
                } else {
                    ((x * x + 2.0) * x.sinh() - 2.0 * x * x.cosh()) / (x * x * x)
                }
            }
            CatalogPsi::ErfGauss => {
                0.5 * SQRT_PI
                    * erf(0.5 * x)
                    * (0.25 * x * x).exp()
                    * (0.5 * x)
                    * (3.0 + 0.5 * x * x)
                    + 1.0
                    + 0.25 * x * x
            }
            CatalogPsi::Bmv { xi, eta } => {
                let t = (xi * x * x + eta).sqrt();
                // d/dx [xi x sinh(t)/t] = xi sinh(t)/t + xi^2 x^2 (t cosh t - sinh t)/t^3
                let s = sinhc(t);
                let tail = if t < 1e-4 {
                    // (t cosh t - sinh t)/t^3 = 1/3 + t^2/30 + ...
                    1.0 / 3.0 + t * t / 30.0
                } else {
                    (t * t.cosh() - t.sinh()) / (t * t * t)
                };
                xi * s + xi * xi * x * x * tail
            }
            CatalogPsi::CoshCos { .. } => x.cosh() - x.cos(),
            CatalogPsi::ExpSq => (2.0 + 4.0 * x * x) * (x * x).exp(),
            CatalogPsi::Exp => x.exp(),
        }
    }

    /// Logarithmic derivative psi'/psi, stable for large x.
    fn log_deriv(&self, x: f64) -> f64 {
        match self {
            CatalogPsi::Const { .. } => 0.0,
            CatalogPsi::Cosh => x.tanh(),
            CatalogPsi::Sinhc => {
                if x.abs() < 1e-4 {
                    x / 3.0
                } else {
                    1.0 / x.tanh() - 1.0 / x
                }
            }
            CatalogPsi::ErfGauss => {
                if x < 25.0 {
                    self.eval_prime(x) / self.eval(x)
                } else {
                    // divide numerator and denominator by (sqrt(pi)/2) erf(x/2) e^{x^2/4}
                    let inv_p = 2.0 / (SQRT_PI * erf(0.5 * x)) * (-0.25 * x * x).exp();
                    ((1.0 + 0.5 * x * x) + 0.5 * x * inv_p) / (inv_p + x)
                }
            }
            CatalogPsi::Bmv { xi, eta } => {
                let t = (xi * x * x + eta).sqrt();
                if t < 1e-8 {
                    0.0
                } else {
                    xi * x * t.tanh() / t
                }
            }
            CatalogPsi::CoshCos { delta } => {
                if x < 30.0 {
                    self.eval_prime(x) / self.eval(x)
                } else {
                    let e = (-x).exp();
                    (1.0 - e * e - 2.0 * e * x.sin()) / (1.0 + e * e + 2.0 * e * (x.cos() + delta))
                }
            }
            CatalogPsi::ExpSq => 2.0 * x,
            CatalogPsi::Exp => 1.0,
        }
    }

    /// gamma_n = (2n)! * [x^{2n}] psi, when the series in x^2 exists.
    fn gamma(&self, n: usize) -> Result<f64> {
        let val = match self {
            CatalogPsi::Const { c } => {
                if n == 0 {
                    *c
                } else {
                    0.0
                }
            }
            CatalogPsi::Cosh => 1.0,
            CatalogPsi::Sinhc => 1.0 / (2.0 * n as f64 + 1.0),
            CatalogPsi::ErfGauss => factorial(n)?,
            CatalogPsi::Bmv { xi, eta } => {
                let coeff = bmv_even_coeff(*xi, *eta, n);
                coeff * factorial(2 * n)?
            }
            CatalogPsi::CoshCos { delta } => {
                if n == 0 {
                    2.0 + delta
                } else if n.is_multiple_of(2) {
                    2.0
                } else {
                    0.0
                }
            }
            CatalogPsi::ExpSq => {
                // (2n)!/n!
                let mut v = 1.0;
                for k in (n + 1)..=(2 * n) {
                    v *= k as f64;
                }
                if !v.is_finite() {
                    return Err(Error::DivergentMoment {
                        order: n,
                        detail: "series coefficient exceeds double range".into(),
                    });
                }
                v
            }
            CatalogPsi::Exp => {
                return Err(Error::InvalidInput(
                    "exp is not even and has no series in x^2".into(),
                ))
            }
        };
        Ok(val)
    }

    /// Full Taylor coefficient alpha_n at 0 (odd entries included).
    fn taylor(&self, n: usize) -> f64 {
        match self {
            CatalogPsi::Exp => (-ln_factorial(n)).exp(),
            CatalogPsi::Const { c } => {
                if n == 0 {
                    *c
                } else {
                    0.0
                }
            }
            CatalogPsi::Bmv { xi, eta } => {
                if n % 2 == 1 {
                    0.0
                } else {
                    bmv_even_coeff(*xi, *eta, n / 2)
                }
            }
            CatalogPsi::CoshCos { delta } => {
                if n == 0 {
                    2.0 + delta
                } else if n % 2 == 1 {
                    0.0
                } else if (n / 2).is_multiple_of(2) {
                    2.0 * (-ln_factorial(n)).exp()
                } else {
                    0.0
                }
            }
            _ => {
                if n % 2 == 1 {
                    0.0
                } else {
                    let m = n / 2;
                    match self.gamma(m) {
                        Ok(g) => g * (-ln_factorial(n)).exp(),
                        Err(_) => 0.0,
                    }
                }
            }
        }
    }

    fn is_even(&self) -> bool {
        !matches!(self, CatalogPsi::Exp)
    }
}

fn factorial(n: usize) -> Result<f64> {
    let mut v = 1.0f64;
    for k in 2..=n {
        v *= k as f64;
    }
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::DivergentMoment {
            order: n,
            detail: "factorial exceeds double range".into(),
        })
    }
}

/// [x^{2n}] cosh(sqrt(xi x^2 + eta)) = sum_{k>=n} C(k,n) xi^n eta^{k-n} / (2k)!.
fn bmv_even_coeff(xi: f64, eta: f64, n: usize) -> f64 {
    // first term k = n: xi^n / (2n)!
    let mut term = (n as f64 * xi.max(f64::MIN_POSITIVE).ln() - ln_factorial(2 * n)).exp();
    if xi == 0.0 && n > 0 {
        return 0.0;
    }
    let mut sum = term;
    if eta == 0.0 {
        return sum;
    }
    let mut k = n;
    loop {
        // t_{k+1}/t_k = ((k+1)/(k+1-n)) * eta / ((2k+1)(2k+2))
        let kf = k as f64;
        term *= (kf + 1.0) / (kf + 1.0 - n as f64) * eta / ((2.0 * kf + 1.0) * (2.0 * kf + 2.0));
        sum += term;
        k += 1;
        if term < 1e-18 * sum || k > n + 400 {
            break;
        }
    }
    sum
}

/// Where a transform's values come from.
#[derive(Debug, Clone)]
pub enum PsiSource {
    Measure(MeasureSpec),
    Catalog(CatalogPsi),
    /// psi(x) = sum c_n x^{2n}.
    Series(Vec<f64>),
}

/// An evaluatable even positive function on the line, with a log-domain
/// evaluation path where one exists.
#[derive(Debug, Clone)]
pub struct PsiFunction {
    source: PsiSource,
    eval_log_capable: bool,
    even: bool,
    warnings: Vec<String>,
}

const POSITIVITY_PROBE: [f64; 7] = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0];

impl PsiFunction {
    pub fn from_measure(measure: MeasureSpec) -> Result<Self> {
        if measure.is_empty() {
            return Err(Error::InvalidInput(
                "the transform of the empty measure is identically zero".into(),
            ));
        }
        let capable = measure.support_sup().is_finite();
        let p = PsiFunction {
            source: PsiSource::Measure(measure),
            eval_log_capable: capable,
            even: true,
            warnings: vec![],
        };
        p.check_positive()?;
        Ok(p)
    }

    pub fn from_catalog(entry: CatalogPsi) -> Result<Self> {
        let mut warnings = vec![];
        match &entry {
            CatalogPsi::Const { c } => {
                if !(c.is_finite() && *c > 0.0) {
                    return Err(Error::BadParams {
                        name: "const".into(),
                        detail: format!("c must be finite and > 0, got {c}"),
                    });
                }
            }
            CatalogPsi::Bmv { xi, eta } => {
                if !(xi.is_finite() && eta.is_finite() && *xi >= 0.0 && *eta >= 0.0) {
                    return Err(Error::BadParams {
                        name: "bmv".into(),
                        detail: format!("need xi >= 0 and eta >= 0, got xi={xi}, eta={eta}"),
                    });
                }
            }
            CatalogPsi::CoshCos { delta } => {
                if !delta.is_finite() || *delta <= -2.0 {
                    return Err(Error::BadParams {
                        name: "coshcos".into(),
                        detail: format!("delta must be > -2 for positivity, got {delta}"),
                    });
                }
                let threshold = coshcos_logconvex_threshold();
                if *delta < threshold {
                    warnings.push(format!(
                        "delta = {delta} is below the log-convexity threshold {threshold:.6}; \
                         cosh + cos + delta is not log-convex on all of R"
                    ));
                }
            }
            CatalogPsi::Exp => {
                warnings.push(
                    "exp is not an even function; usable only where evenness is not required"
                        .into(),
                );
            }
            _ => {}
        }
        let even = entry.is_even();
        let p = PsiFunction {
            source: PsiSource::Catalog(entry),
            eval_log_capable: true,
            even,
            warnings,
        };
        p.check_positive()?;
        Ok(p)
    }

    pub fn from_series(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || !coeffs[0].is_finite() || coeffs[0] <= 0.0 {
            return Err(Error::InvalidInput(
                "series transform needs finite coefficients with c_0 > 0".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(
                "series coefficients must be finite".into(),
            ));
        }
        let p = PsiFunction {
            source: PsiSource::Series(coeffs),
            eval_log_capable: false,
            even: true,
            warnings: vec![],
        };
        p.check_positive()?;
        Ok(p)
    }

    fn check_positive(&self) -> Result<()> {
        for &x in &POSITIVITY_PROBE {
            match self.eval(x) {
                Ok(v) if v > 0.0 => {}
                Ok(v) => {
                    return Err(Error::InvalidInput(format!(
                        "psi({x}) = {v} is not positive"
                    )))
                }
                Err(Error::Overflow { .. }) => {} // positive but huge; fine
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &PsiSource {
        &self.source
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn eval_log_capable(&self) -> bool {
        self.eval_log_capable
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    // a divergent transform quadrature means the value left the double
    // range; report it as an overflow of psi at x
    fn as_overflow(what: &'static str, x: f64) -> impl FnOnce(Error) -> Error {
        move |e| match e {
            Error::DivergentMoment { .. } => Error::Overflow {
                what: what.into(),
                x,
            },
            other => other,
        }
    }

    fn arg(&self, x: f64) -> f64 {
        if self.even {
            x.abs()
        } else {
            x
        }
    }

    /// psi(x).
    pub fn eval(&self, x: f64) -> Result<f64> {
        let x = self.arg(x);
        let v = match &self.source {
            PsiSource::Catalog(c) => c.eval(x),
            PsiSource::Measure(m) => m.cosh_transform(x).map_err(Self::as_overflow("psi", x))?,
            PsiSource::Series(c) => series_eval(c, x),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow {
                what: "psi".into(),
                x,
            })
        }
    }

    /// log psi(x), overflow-safe where a log path exists.
    pub fn eval_log(&self, x: f64) -> Result<f64> {
        let x = self.arg(x);
        match &self.source {
            PsiSource::Catalog(c) => Ok(c.eval_log(x)),
            PsiSource::Measure(m) => {
                let c = m.support_sup();
                if c.is_finite() && x * c > 500.0 {
                    // psi(x) = (e^{xc}/2) * int e^{-x(c-u)} (1 + e^{-2xu}) dnu
                    let scaled = m.integrate(
                        &|u: f64| (-x * (c - u)).exp() * (1.0 + (-2.0 * x * u).exp()),
                        0,
                    )?;
                    Ok(x * c - LN_2 + scaled.ln())
                } else {
                    Ok(self.eval(x)?.ln())
                }
            }
            PsiSource::Series(_) => Ok(self.eval(x)?.ln()),
        }
    }

    /// psi'(x); odd in x.
    pub fn eval_prime(&self, x: f64) -> Result<f64> {
        let sign = if self.even && x < 0.0 { -1.0 } else { 1.0 };
        let x = self.arg(x);
        let v = match &self.source {
            PsiSource::Catalog(c) => c.eval_prime(x),
            PsiSource::Measure(m) => m
                .cosh_transform_prime(x)
                .map_err(Self::as_overflow("psi'", x))?,
            PsiSource::Series(c) => series_eval_prime(c, x),
        };
        if v.is_finite() {
            Ok(sign * v)
        } else {
            Err(Error::Overflow {
                what: "psi'".into(),
                x,
            })
        }
    }

    /// psi''(x): analytic for catalog entries, a second difference with
    /// h = 1e-4 otherwise.
    pub fn eval_second(&self, x: f64) -> Result<f64> {
        let x = self.arg(x);
        match &self.source {
            PsiSource::Catalog(c) => Ok(c.eval_second(x)),
            _ => {
                let h = 1e-4;
                let hi = self.eval(x + h)?;
                let mid = self.eval(x)?;
                let lo = self.eval((x - h).abs())?;
                Ok((hi - 2.0 * mid + lo) / (h * h))
            }
        }
    }

    /// The logarithmic derivative psi'(x)/psi(x), stable for large x.
    pub fn log_deriv(&self, x: f64) -> Result<f64> {
        let x = self.arg(x);
        match &self.source {
            PsiSource::Catalog(c) => Ok(c.log_deriv(x)),
            PsiSource::Measure(m) => {
                let c = m.support_sup();
                if c.is_finite() && x * c > 500.0 {
                    let denom = m.integrate(
                        &|u: f64| (-x * (c - u)).exp() * (1.0 + (-2.0 * x * u).exp()),
                        0,
                    )?;
                    let numer = m.integrate(
                        &|u: f64| u * (-x * (c - u)).exp() * (1.0 - (-2.0 * x * u).exp()),
                        0,
                    )?;
                    Ok(numer / denom)
                } else {
                    Ok(self.eval_prime(x)? / self.eval(x)?)
                }
            }
            PsiSource::Series(_) => Ok(self.eval_prime(x)? / self.eval(x)?),
        }
    }

    /// phi(x) = psi(sqrt x) for x >= 0.
    pub fn eval_phi(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Err(Error::InvalidInput(format!(
                "phi is defined on [0, inf), got {x}"
            )));
        }
        self.eval(x.sqrt())
    }

    /// gamma_0..gamma_n: the even-moment series of the transform.
    pub fn series_coeffs(&self, n: usize) -> Result<MomentSequence> {
        if n < 2 {
            return Err(Error::InvalidInput("need at least order N = 2".into()));
        }
        let mut values = Vec::with_capacity(n + 1);
        match &self.source {
            PsiSource::Measure(m) => {
                for k in 0..=n {
                    values.push(m.moment(k)?);
                }
            }
            PsiSource::Series(c) => {
                for (k, coeff) in c
                    .iter()
                    .chain(std::iter::repeat(&0.0))
                    .take(n + 1)
                    .enumerate()
                {
                    let fac = factorial(2 * k)?;
                    let v = coeff * fac;
                    if !v.is_finite() {
                        return Err(Error::DivergentMoment {
                            order: k,
                            detail: "series coefficient times (2n)! overflows".into(),
                        });
                    }
                    values.push(v);
                }
            }
            PsiSource::Catalog(c) => {
                for k in 0..=n {
                    values.push(c.gamma(k)?);
                }
            }
        }
        MomentSequence::new(values, format!("series of {}", self.describe()))
    }

    /// Full Taylor coefficients alpha_0..alpha_n of the entire extension
    /// (odd entries are zero for even transforms).
    pub fn taylor_coeffs(&self, n: usize) -> Result<Vec<f64>> {
        match &self.source {
            PsiSource::Catalog(c) => Ok((0..=n).map(|k| c.taylor(k)).collect()),
            PsiSource::Series(coeffs) => Ok((0..=n)
                .map(|k| {
                    if k % 2 == 0 {
                        coeffs.get(k / 2).copied().unwrap_or(0.0)
                    } else {
                        0.0
                    }
                })
                .collect()),
            PsiSource::Measure(m) => {
                let mut out = Vec::with_capacity(n + 1);
                for k in 0..=n {
                    if k % 2 == 1 {
                        out.push(0.0);
                    } else {
                        let g = m.moment(k / 2)?;
                        let a = if g == 0.0 {
                            0.0
                        } else {
                            (g.ln() - ln_factorial(k)).exp()
                        };
                        out.push(a);
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn describe(&self) -> String {
        match &self.source {
            PsiSource::Catalog(c) => {
                let params = c.params();
                if params.is_empty() {
                    c.name().to_string()
                } else {
                    let ps: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    format!("{}({})", c.name(), ps.join(","))
                }
            }
            PsiSource::Measure(_) => "measure-induced".into(),
            PsiSource::Series(_) => "series".into(),
        }
    }
}

/// Horner evaluation of sum c_n t^n at t = x^2, stopping once the next
/// term falls below 1e-17 of the partial sum (cap 500 terms).
fn series_eval(coeffs: &[f64], x: f64) -> f64 {
    let t = x * x;
    let mut sum = 0.0;
    let mut power = 1.0;
    for (k, &c) in coeffs.iter().enumerate() {
        let term = c * power;
        sum += term;
        if k > 0 && term.abs() < 1e-17 * sum.abs() || k >= 500 {
            break;
        }
        power *= t;
        if !power.is_finite() {
            return f64::INFINITY;
        }
    }
    sum
}

fn series_eval_prime(coeffs: &[f64], x: f64) -> f64 {
    let t = x * x;
    let mut sum = 0.0;
    let mut power = 1.0; // x^(2n-1) built as x * t^(n-1)
    for (k, &c) in coeffs.iter().enumerate().skip(1) {
        let term = 2.0 * k as f64 * c * x * power;
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(f64::MIN_POSITIVE) && k > 1 || k >= 500 {
            break;
        }
        power *= t;
        if !power.is_finite() {
            return f64::INFINITY;
        }
    }
    sum
}

/// Look up a catalog transform by name with a parameter map.
pub fn catalog_get(name: &str, params: &BTreeMap<String, f64>) -> Result<PsiFunction> {
    let get = |key: &str| -> Result<f64> {
        params.get(key).copied().ok_or_else(|| Error::BadParams {
            name: name.to_string(),
            detail: format!("missing parameter `{key}`"),
        })
    };
    let entry = match name {
        "const" => CatalogPsi::Const { c: get("c")? },
        "cosh" => CatalogPsi::Cosh,
        "sinhc" => CatalogPsi::Sinhc,
        "erf-gauss" => CatalogPsi::ErfGauss,
        "bmv" => CatalogPsi::Bmv {
            xi: get("xi")?,
            eta: params.get("eta").copied().unwrap_or(0.0),
        },
        "coshcos" => CatalogPsi::CoshCos {
            delta: get("delta")?,
        },
        "expsq" => CatalogPsi::ExpSq,
        "exp" => CatalogPsi::Exp,
        other => return Err(Error::UnknownCatalogEntry(other.to_string())),
    };
    for key in params.keys() {
        let known = match name {
            "const" => key == "c",
            "bmv" => key == "xi" || key == "eta",
            "coshcos" => key == "delta",
            _ => false,
        };
        if !known {
            return Err(Error::BadParams {
                name: name.to_string(),
                detail: format!("unknown parameter `{key}`"),
            });
        }
    }
    PsiFunction::from_catalog(entry)
}

/// Exponential growth estimate of a transform.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GrowthRate {
    /// limsup log psi(x) / x; `f64::INFINITY` flags superexponential growth.
    #[serde(with = "crate::json::ext_real")]
    pub b0: f64,
    /// exp of the regression intercept.
    pub a0: f64,
}

/// Estimate b0 by regressing log psi on the top half of the grid, with a
/// superexponential flag when log psi(x)/x still grows more than 5%
/// across the last doubling.
pub fn growth_rate(p: &PsiFunction, x_grid: &[f64]) -> Result<GrowthRate> {
    if x_grid.len() < 4
        || x_grid.windows(2).any(|w| w[0] >= w[1])
        || x_grid[0] <= 0.0
        || *x_grid.last().unwrap() < 20.0
    {
        return Err(Error::InvalidInput(
            "growth grid must be increasing, positive, with max >= 20".into(),
        ));
    }
    let logs: Vec<f64> = x_grid
        .iter()
        .map(|&x| p.eval_log(x))
        .collect::<Result<_>>()?;
    let x_max = *x_grid.last().unwrap();

    let fit = |lo: f64, hi: f64| -> (f64, f64) {
        let pts: Vec<(f64, f64)> = x_grid
            .iter()
            .zip(&logs)
            .filter(|(&x, _)| x >= lo && x <= hi)
            .map(|(&x, &y)| (x, y))
            .collect();
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        ((sy - slope * sx) / n, slope)
    };
    // local exponential rates across the last three doublings: the rate
    // of a transform converges to b0 (a one-time jump can still happen
    // when the dominant support component changes), while for
    // superexponential functions it keeps growing through every
    // doubling. Lower-order terms (e.g. the -log x inside
    // log sinh(x)/x) cancel out of the slopes.
    let (_, s1) = fit(0.125 * x_max, 0.25 * x_max);
    let (_, s2) = fit(0.25 * x_max, 0.5 * x_max);
    let (intercept, s3) = fit(0.5 * x_max, x_max);
    let superexp = s1 > 0.0 && s2 > 1.15 * s1 && s3 > 1.15 * s2;
    Ok(GrowthRate {
        b0: if superexp { f64::INFINITY } else { s3.max(0.0) },
        a0: intercept.exp(),
    })
}

/// Growth estimation with grid escalation: cosh(c x) is quadratic to
/// second order and only looks exponential once c x is large, so a
/// superexponential flag at one scale is re-tested on doubled grids
/// until it either clears (the rate stabilized) or survives at the cap.
pub fn growth_rate_adaptive(p: &PsiFunction, x_max: f64) -> Result<GrowthRate> {
    let mut x = x_max.max(20.0);
    let mut last = growth_rate(p, &default_x_grid(x))?;
    while last.b0.is_infinite() && x < 6400.0 {
        x *= 2.0;
        match growth_rate(p, &default_x_grid(x)) {
            Ok(g) => last = g,
            // the escalated grid left the representable range; keep the
            // verdict from the largest grid that evaluated
            Err(Error::Overflow { .. }) | Err(Error::DivergentMoment { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(last)
}

/// Geometric default grid for growth and support estimation.
pub fn default_x_grid(x_max: f64) -> Vec<f64> {
    let x_max = x_max.max(20.0);
    let mut grid = vec![];
    let mut x: f64 = 0.5;
    while x < x_max {
        grid.push(x);
        x *= 1.25;
    }
    grid.push(x_max);
    grid
}

/// Classification tag for nonnegative-coefficient entire series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HClassTag {
    /// alpha_1..alpha_{k-1} = 0, alpha_k > 0, the rest nonnegative.
    Hk,
    /// Member of some H_k with a positive value at zero.
    H0,
    /// Every coefficient strictly positive.
    HBullet,
    /// Even coefficients positive, odd coefficients zero.
    H2Bullet,
    /// Only alpha_0 is nonzero.
    Constant,
    /// Not in any class (or negative coefficients present).
    None,
}

/// Prefix-certified class of a coefficient sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HClass {
    pub tag: HClassTag,
    /// Smallest positive index with alpha_k > 0 (present when tag = Hk).
    pub k: Option<usize>,
    /// Indices of negative coefficients (forces tag = None).
    pub negative_indices: Vec<usize>,
    /// Whether alpha_0 > 0 (membership in H_0 when tag is Hk).
    pub positive_at_zero: bool,
    /// Length of the certified prefix.
    pub prefix_len: usize,
}

/// Classify a Taylor-coefficient prefix alpha_0..alpha_N (N >= 8).
///
/// Only the "none" outcome is definitive from a prefix; every other tag is
/// certified on the available coefficients.
pub fn classify_h(coeffs: &[f64]) -> Result<HClass> {
    if coeffs.len() < 9 {
        return Err(Error::InvalidInput(
            "classification needs coefficients alpha_0..alpha_8 at least".into(),
        ));
    }
    let prefix_len = coeffs.len();
    let positive_at_zero = coeffs[0] > 0.0;
    let negative_indices: Vec<usize> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c < 0.0)
        .map(|(i, _)| i)
        .collect();
    if !negative_indices.is_empty() {
        return Ok(HClass {
            tag: HClassTag::None,
            k: None,
            negative_indices,
            positive_at_zero,
            prefix_len,
        });
    }
    let tail_all_zero = coeffs[1..].iter().all(|&c| c == 0.0);
    if tail_all_zero {
        return Ok(HClass {
            tag: if coeffs[0] != 0.0 {
                HClassTag::Constant
            } else {
                HClassTag::None
            },
            k: None,
            negative_indices: vec![],
            positive_at_zero,
            prefix_len,
        });
    }
    if coeffs.iter().all(|&c| c > 0.0) {
        return Ok(HClass {
            tag: HClassTag::HBullet,
            k: None,
            negative_indices: vec![],
            positive_at_zero,
            prefix_len,
        });
    }
    let evens_positive = coeffs.iter().step_by(2).all(|&c| c > 0.0);
    let odds_zero = coeffs.iter().skip(1).step_by(2).all(|&c| c == 0.0);
    if evens_positive && odds_zero {
        return Ok(HClass {
            tag: HClassTag::H2Bullet,
            k: None,
            negative_indices: vec![],
            positive_at_zero,
            prefix_len,
        });
    }
    let k = coeffs.iter().skip(1).position(|&c| c > 0.0).map(|i| i + 1);
    Ok(HClass {
        tag: HClassTag::Hk,
        k,
        negative_indices: vec![],
        positive_at_zero,
        prefix_len,
    })
}
