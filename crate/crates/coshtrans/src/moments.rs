//! Stieltjes-sequence testing, growth diagnostics, determinacy
//! heuristics, and recovery of an atomic representing measure from a
//! moment prefix.

use crate::error::{Error, Result};
use crate::linalg::sym_eigen;
use crate::measure::{MeasureSpec, MomentSequence};
use crate::posdef::{hankel, min_eig_normalized, PsdVerdict, SymmetricMatrixReport};
use crate::special::ln_factorial;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum StieltjesVerdict {
    /// Both Hankel forms were PSD for every order up to `m_max`.
    ConsistentUpTo { m_max: usize },
    Refuted {
        m: usize,
        shift: usize,
        report: SymmetricMatrixReport,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StieltjesReport {
    #[serde(flatten)]
    pub verdict: StieltjesVerdict,
    /// Minimal normalized eigenvalue per (m, shift) in test order.
    pub checks: Vec<(usize, usize, f64)>,
}

impl StieltjesReport {
    pub fn is_consistent(&self) -> bool {
        matches!(self.verdict, StieltjesVerdict::ConsistentUpTo { .. })
    }
}

/// Both-Hankel PSD test: the sequence is consistent with being a
/// Stieltjes moment sequence up to order `m_max` iff [s_{i+j}] and
/// [s_{i+j+1}] are PSD for every m <= m_max.
pub fn is_stieltjes(seq: &MomentSequence, m_max: usize) -> Result<StieltjesReport> {
    if 2 * m_max + 1 > seq.max_order() {
        return Err(Error::InvalidInput(format!(
            "is_stieltjes({m_max}) needs moments up to {}",
            2 * m_max + 1
        )));
    }
    let mut checks = vec![];
    for m in 1..=m_max {
        for shift in [0usize, 1] {
            let h = hankel(seq, m, shift)?;
            let report = min_eig_normalized(&h)?;
            checks.push((m, shift, report.min_eigenvalue));
            if report.verdict == PsdVerdict::NotPsd {
                return Ok(StieltjesReport {
                    verdict: StieltjesVerdict::Refuted { m, shift, report },
                    checks,
                });
            }
        }
    }
    Ok(StieltjesReport {
        verdict: StieltjesVerdict::ConsistentUpTo { m_max },
        checks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthVerdict {
    /// r_n = (gamma_n / (2n)!)^{1/n} tends to zero: transform-compatible.
    Vanishing,
    /// r_n stabilizes at a positive level.
    NonVanishing,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthTrend {
    pub verdict: GrowthVerdict,
    /// The full curve (n, r_n), n >= 1.
    pub curve: Vec<(usize, f64)>,
}

/// Trend of r_n = (gamma_n/(2n)!)^{1/n}, computed in the log domain.
pub fn factorial_growth_test(seq: &MomentSequence) -> Result<GrowthTrend> {
    let n_max = seq.max_order();
    if n_max < 8 {
        return Err(Error::InvalidInput(
            "factorial growth test needs N >= 8".into(),
        ));
    }
    let mut curve = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let lg = seq.log_value(n).ok_or_else(|| {
            Error::InvalidInput(format!("gamma_{n} must be positive for the growth test"))
        })?;
        let r = ((lg - ln_factorial(2 * n)) / n as f64).exp();
        curve.push((n, r));
    }
    let r_last = curve[curve.len() - 1].1;
    let r_half = curve[curve.len() / 2 - 1].1.max(f64::MIN_POSITIVE);
    let last_three_decreasing = curve[curve.len() - 3].1 > curve[curve.len() - 2].1
        && curve[curve.len() - 2].1 > curve[curve.len() - 1].1;
    // the slowest vanishing case of interest decays like 1/n, where the
    // half-to-full ratio approaches 1/2 from above; 0.6 leaves margin
    let verdict = if last_three_decreasing && r_last < 0.6 * r_half {
        GrowthVerdict::Vanishing
    } else if r_last > 1e-9 && (r_last - r_half).abs() <= 0.05 * r_last {
        GrowthVerdict::NonVanishing
    } else {
        GrowthVerdict::Inconclusive
    };
    Ok(GrowthTrend { verdict, curve })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CarlemanVerdict {
    /// Partial sums of gamma_n^{-1/2n} keep growing: determinate.
    DeterminateCarleman,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CarlemanReport {
    pub verdict: CarlemanVerdict,
    /// Terms t_n = gamma_n^{-1/(2n)}.
    pub terms: Vec<(usize, f64)>,
    /// t_N / t_{N-1}: a last-term ratio close to 1 signals divergence.
    pub last_ratio: f64,
    /// Advisory only; a divergent series cannot be certified from a prefix.
    pub note: String,
}

/// Heuristic Carleman check: the series sum gamma_n^{-1/2n} diverges
/// (hence the sequence is determinate) when its terms do not decay
/// geometrically. Advisory output only.
pub fn carleman_determinacy(seq: &MomentSequence) -> Result<CarlemanReport> {
    let n_max = seq.max_order();
    if n_max < 10 {
        return Err(Error::InvalidInput("carleman test needs N >= 10".into()));
    }
    if !seq.all_positive() {
        return Err(Error::InvalidInput(
            "carleman test needs all gamma_n > 0".into(),
        ));
    }
    let mut terms = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let lg = seq.log_value(n).unwrap();
        terms.push((n, (-lg / (2.0 * n as f64)).exp()));
    }
    let t_last = terms[terms.len() - 1].1;
    let t_prev = terms[terms.len() - 2].1;
    let last_ratio = t_last / t_prev;
    let verdict = if last_ratio >= 0.94 && t_last > 0.0 {
        CarlemanVerdict::DeterminateCarleman
    } else {
        CarlemanVerdict::Inconclusive
    };
    Ok(CarlemanReport {
        verdict,
        terms,
        last_ratio,
        note: "heuristic: divergence of the Carleman series cannot be decided from a prefix".into(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoveredMeasure {
    pub measure: MeasureSpec,
    /// (n, |sum w_i t_i^n - gamma_n| / max(gamma_n, eps)) for n <= 2k-1.
    pub residuals: Vec<(usize, f64)>,
}

/// Gauss-node recovery: treat the prefix as raw moments of the
/// pushforward measure, build the order-k Jacobi matrix from the
/// Cholesky factorization of the Hankel matrix, and return atoms at the
/// square roots of its eigenvalues.
pub fn recover_measure(seq: &MomentSequence, k: usize) -> Result<RecoveredMeasure> {
    if k == 0 {
        return Err(Error::InvalidInput("need at least one atom".into()));
    }
    if 2 * k > seq.max_order() {
        return Err(Error::InvalidInput(format!(
            "recover_measure({k}) needs moments up to {}",
            2 * k
        )));
    }
    let moments = seq
        .values_linear()
        .ok_or_else(|| Error::IllConditioned("moments exceed the linear double range".into()))?;

    // precondition: the k x k moment matrix must be numerically PD
    // (the full (k+1) x (k+1) matrix is singular for exactly-k-atom data)
    if k >= 2 {
        let lead = hankel(seq, k - 1, 0)?;
        let rep = min_eig_normalized(&lead)?;
        if rep.min_eigenvalue <= 1e-10 {
            return Err(Error::IllConditioned(format!(
                "normalized Hankel minimal eigenvalue {} <= 1e-10",
                rep.min_eigenvalue
            )));
        }
    } else if moments[0] <= 0.0 {
        return Err(Error::IllConditioned("gamma_0 must be positive".into()));
    }

    // partial Cholesky: rows 0..k-1, columns 0..k of [m_{i+j}] = R^T R
    let mut r = vec![vec![0.0; k + 1]; k];
    for j in 0..=k {
        for i in 0..=j.min(k - 1) {
            let mut s = moments[i + j];
            for row in r.iter().take(i) {
                s -= row[i] * row[j];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::IllConditioned(format!(
                        "Cholesky pivot {s} at column {j}"
                    )));
                }
                r[i][j] = s.sqrt();
            } else {
                r[i][j] = s / r[i][i];
            }
        }
    }

    // three-term recurrence coefficients from the Cholesky factor
    let mut alpha = vec![0.0; k];
    let mut beta = vec![0.0; k.saturating_sub(1)];
    for j in 0..k {
        let prev = if j > 0 {
            r[j - 1][j] / r[j - 1][j - 1]
        } else {
            0.0
        };
        alpha[j] = r[j][j + 1] / r[j][j] - prev;
        if j > 0 {
            beta[j - 1] = r[j][j] / r[j - 1][j - 1];
        }
    }

    // Jacobi matrix eigen-decomposition: nodes and first-component weights
    let mut jac = vec![0.0; k * k];
    for j in 0..k {
        jac[j * k + j] = alpha[j];
        if j + 1 < k {
            jac[j * k + j + 1] = beta[j];
            jac[(j + 1) * k + j] = beta[j];
        }
    }
    let eig = sym_eigen(&jac, k)?;
    let mut atoms = Vec::with_capacity(k);
    for (idx, &node) in eig.values.iter().enumerate() {
        let t = if node < 0.0 {
            if node < -1e-12 {
                return Err(Error::IllConditioned(format!("negative Gauss node {node}")));
            }
            0.0
        } else {
            node
        };
        let w = moments[0] * eig.vectors[idx][0] * eig.vectors[idx][0];
        if w <= 0.0 {
            return Err(Error::IllConditioned(format!("nonpositive weight {w}")));
        }
        atoms.push((t.sqrt(), w));
    }
    atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let measure = MeasureSpec::from_atoms(&atoms)?;

    let mut residuals = Vec::with_capacity(2 * k);
    for (n, moment) in moments.iter().enumerate().take(2 * k) {
        let reproduced: f64 = atoms.iter().map(|&(u, w)| w * u.powi(2 * n as i32)).sum();
        let denom = moment.abs().max(f64::MIN_POSITIVE);
        residuals.push((n, (reproduced - moment).abs() / denom));
    }
    Ok(RecoveredMeasure { measure, residuals })
}
