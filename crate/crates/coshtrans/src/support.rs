//! Support estimation: three routes to sup supp nu from the transform
//! (moment root test, logarithmic derivative, and the sqrt-variant), plus
//! a cross-check that they agree.

use crate::error::{Error, Result};
use crate::measure::MomentSequence;
use crate::transform::{default_x_grid, growth_rate_adaptive, PsiFunction};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupportEstimate {
    /// Point estimate; `f64::INFINITY` when the data indicates an
    /// unbounded support.
    #[serde(with = "crate::json::ext_real")]
    pub estimate: f64,
    /// Bracket spanned by the two extrapolation models, when available.
    pub interval: Option<(f64, f64)>,
    /// Value at the end of the grid or curve.
    pub tail_value: f64,
    /// The raw curve behind the estimate.
    pub curve: Vec<(f64, f64)>,
}

/// Least squares fit of y ~ a + b * basis(x); returns a.
fn fit_intercept(points: &[(f64, f64)], basis: impl Fn(f64) -> f64) -> f64 {
    let n = points.len() as f64;
    let su: f64 = points.iter().map(|&(x, _)| basis(x)).sum();
    let sy: f64 = points.iter().map(|&(_, y)| y).sum();
    let suu: f64 = points.iter().map(|&(x, _)| basis(x) * basis(x)).sum();
    let suy: f64 = points.iter().map(|&(x, y)| basis(x) * y).sum();
    let slope = (n * suy - su * sy) / (n * suu - su * su);
    (sy - slope * su) / n
}

/// Root test s_n = gamma_n^{1/2n} with tail extrapolation.
///
/// Both a c/n and a c log(n)/n correction model are fitted on the last
/// five points; the estimate is the midpoint and the interval the hull.
/// Reports infinity when s_n keeps growing geometrically across doublings.
pub fn support_from_moments(seq: &MomentSequence) -> Result<SupportEstimate> {
    let n_max = seq.max_order();
    if n_max < 10 {
        return Err(Error::InvalidInput(
            "support root test needs N >= 10".into(),
        ));
    }
    // a vanishing higher moment means all mass sits at the origin
    if (1..=n_max).any(|n| seq.value(n) == Some(0.0)) {
        if (1..=n_max).all(|n| seq.value(n) == Some(0.0)) {
            return Ok(SupportEstimate {
                estimate: 0.0,
                interval: Some((0.0, 0.0)),
                tail_value: 0.0,
                curve: (1..=n_max).map(|n| (n as f64, 0.0)).collect(),
            });
        }
        return Err(Error::InvalidInput(
            "root test needs gamma_n > 0 beyond order zero".into(),
        ));
    }
    let mut curve = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let lg = seq
            .log_value(n)
            .ok_or_else(|| Error::InvalidInput(format!("gamma_{n} must be positive")))?;
        curve.push((n as f64, (lg / (2.0 * n as f64)).exp()));
    }
    let s_last = curve[curve.len() - 1].1;
    let s_half = curve[curve.len() / 2 - 1].1;
    let s_quarter = curve[curve.len() / 4].1;
    // still growing geometrically across two doublings: unbounded support
    if s_last > 1.2 * s_half && s_half > 1.2 * s_quarter {
        return Ok(SupportEstimate {
            estimate: f64::INFINITY,
            interval: None,
            tail_value: s_last,
            curve,
        });
    }
    let tail: Vec<(f64, f64)> = curve[curve.len().saturating_sub(5)..].to_vec();
    let a1 = fit_intercept(&tail, |n| 1.0 / n);
    let a2 = fit_intercept(&tail, |n| n.ln() / n);
    let (lo, hi) = (a1.min(a2), a1.max(a2));
    Ok(SupportEstimate {
        estimate: 0.5 * (lo + hi),
        interval: Some((lo, hi)),
        tail_value: s_last,
        curve,
    })
}

/// Log-derivative route: g(x) = psi'(x)/psi(x) on a geometric grid.
///
/// The limit of g equals its supremum over (0, inf), so the grid maximum
/// is a certified lower estimate; the tail value doubles as a diagnostic.
/// Growth above 5% across the last doubling flags an unbounded support.
pub fn support_from_logderiv(p: &PsiFunction, x_max: f64) -> Result<SupportEstimate> {
    if x_max < 20.0 {
        return Err(Error::InvalidInput("need x_max >= 20".into()));
    }
    let grid = default_x_grid(x_max);
    let mut curve = Vec::with_capacity(grid.len());
    for &x in &grid {
        curve.push((x, p.log_deriv(x)?));
    }
    let g_last = curve[curve.len() - 1].1;
    let half_idx = grid
        .iter()
        .position(|&x| x >= 0.5 * x_max)
        .unwrap_or(grid.len() / 2);
    let g_half = curve[half_idx].1;
    let unbounded = g_half > 1e-9 && g_last > 1.05 * g_half;
    let grid_max = curve
        .iter()
        .map(|&(_, g)| g)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(SupportEstimate {
        estimate: if unbounded {
            f64::INFINITY
        } else {
            grid_max.max(0.0)
        },
        interval: None,
        tail_value: g_last,
        curve,
    })
}

/// Sqrt-variant route: 2 sqrt(x) phi'(x)/phi(x) -> sup supp nu with
/// phi(x) = psi(sqrt x), evaluated up to x_max^2.
pub fn support_from_phi(p: &PsiFunction, x_max: f64) -> Result<SupportEstimate> {
    if x_max < 20.0 {
        return Err(Error::InvalidInput("need x_max >= 20".into()));
    }
    let grid = default_x_grid(x_max * x_max);
    let mut curve = Vec::with_capacity(grid.len());
    for &x in &grid {
        // 2 sqrt(x) phi'(x)/phi(x) = psi'(sqrt x)/phi(x) by the chain rule
        let s = x.sqrt();
        let val = match (p.eval_prime(s), p.eval_phi(x)) {
            (Ok(num), Ok(den)) => num / den,
            // the ratio stays finite after the linear values overflow
            _ => p.log_deriv(s)?,
        };
        curve.push((x, val));
    }
    let tail = curve[curve.len() - 1].1;
    let x_end = curve[curve.len() - 1].0;
    let half_idx = curve
        .iter()
        .position(|&(x, _)| x >= 0.5 * x_end)
        .unwrap_or(curve.len() / 2);
    let unbounded = curve[half_idx].1 > 1e-9 && tail > 1.05 * curve[half_idx].1;
    Ok(SupportEstimate {
        estimate: if unbounded {
            f64::INFINITY
        } else {
            tail.max(0.0)
        },
        interval: None,
        tail_value: tail,
        curve,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgreementReport {
    #[serde(with = "crate::json::ext_real_map")]
    pub estimates: BTreeMap<String, f64>,
    pub max_rel_disagreement: f64,
    /// True when finite estimates disagree by more than 10%, or when the
    /// estimators split between finite and infinite.
    pub flagged: bool,
}

/// Run every applicable estimator plus the growth-rate b0 and compare.
pub fn support_agreement(p: &PsiFunction) -> Result<AgreementReport> {
    let mut estimates = BTreeMap::new();
    if let Ok(seq) = p.series_coeffs(40) {
        if let Ok(est) = support_from_moments(&seq) {
            estimates.insert("moments".to_string(), est.estimate);
        }
    }
    estimates.insert(
        "logderiv".to_string(),
        support_from_logderiv(p, 50.0)?.estimate,
    );
    estimates.insert("phi".to_string(), support_from_phi(p, 50.0)?.estimate);
    let g = growth_rate_adaptive(p, 50.0)?;
    estimates.insert("growth_b0".to_string(), g.b0);

    let finite: Vec<f64> = estimates
        .values()
        .copied()
        .filter(|v| v.is_finite())
        .collect();
    let n_inf = estimates.len() - finite.len();
    let mut max_rel: f64 = 0.0;
    for (i, a) in finite.iter().enumerate() {
        for b in &finite[i + 1..] {
            let denom = a.abs().max(b.abs());
            if denom > 1e-9 {
                max_rel = max_rel.max((a - b).abs() / denom);
            }
        }
    }
    let flagged = (n_inf > 0 && !finite.is_empty()) || max_rel > 0.10;
    Ok(AgreementReport {
        estimates,
        max_rel_disagreement: max_rel,
        flagged,
    })
}
