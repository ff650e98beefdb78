//! Gram and Hankel matrices with overflow-safe positive-semidefiniteness
//! decisions.
//!
//! Matrices with positive entries are held in the log domain; the PSD
//! decision normalizes by the diagonal congruence D M D with
//! D = diag(M_ii^{-1/2}) formed entirely in the log domain, which
//! preserves the sign of the minimal eigenvalue and keeps entries O(1)
//! even when the raw values span thousands of orders of magnitude.

use crate::error::{Error, Result};
use crate::linalg::sym_eigen;
use crate::measure::MomentSequence;
use crate::special::kahan_sum;
use crate::transform::PsiFunction;
use serde::{Deserialize, Serialize};

pub const MAX_DIM: usize = 64;
/// psd if lambda_min >= -PSD_TOL (on the normalized matrix).
pub const PSD_TOL: f64 = 1e-9;
/// not-psd if lambda_min <= -REFUTE_TOL; in between is "borderline".
pub const REFUTE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixDomain {
    Linear,
    Log,
}

/// A symmetric matrix stored row-major, in either the linear or the log
/// domain (log requires all entries positive).
#[derive(Debug, Clone)]
pub struct SymMatrix {
    dim: usize,
    domain: MatrixDomain,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn from_fn(dim: usize, domain: MatrixDomain, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
        }
        SymMatrix { dim, domain, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> MatrixDomain {
        self.domain
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Entry in the linear domain (exp of the stored value for log matrices).
    pub fn linear_entry(&self, i: usize, j: usize) -> f64 {
        match self.domain {
            MatrixDomain::Linear => self.get(i, j),
            MatrixDomain::Log => self.get(i, j).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsdVerdict {
    Psd,
    NotPsd,
    Borderline,
}

/// Outcome of a normalized eigenvalue test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetricMatrixReport {
    pub dim: usize,
    /// Minimal eigenvalue of the normalized matrix.
    pub min_eigenvalue: f64,
    /// Largest diagonal of the normalized matrix (1 when the diagonal
    /// congruence applies, the raw scale otherwise).
    pub scale: f64,
    pub verdict: PsdVerdict,
    /// Eigenvector of the minimal eigenvalue, present when not-psd.
    pub witness_vector: Option<Vec<f64>>,
}

impl SymmetricMatrixReport {
    /// Quadratic form of the witness against the normalized matrix,
    /// with compensated summation. Negative iff the witness is valid.
    pub fn witness_quadratic_form(&self, normalized: &[f64]) -> Option<f64> {
        let v = self.witness_vector.as_ref()?;
        let n = self.dim;
        Some(kahan_sum(
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| v[i] * normalized[i * n + j] * v[j]),
        ))
    }
}

/// The congruence-normalized linear matrix behind a report: diagonal 1
/// when the diagonal is strictly positive, the raw matrix otherwise.
pub fn normalized_matrix(m: &SymMatrix) -> Result<(Vec<f64>, f64)> {
    let n = m.dim;
    let mut out = vec![0.0; n * n];
    match m.domain {
        MatrixDomain::Log => {
            for i in 0..n {
                for j in 0..n {
                    let v = (m.get(i, j) - 0.5 * (m.get(i, i) + m.get(j, j))).exp();
                    if !v.is_finite() {
                        return Err(Error::NonFiniteEntry { row: i, col: j });
                    }
                    out[i * n + j] = v;
                }
            }
            Ok((out, 1.0))
        }
        MatrixDomain::Linear => {
            let diag_positive = (0..n).all(|i| m.get(i, i) > 0.0);
            if diag_positive {
                for i in 0..n {
                    for j in 0..n {
                        let v = m.get(i, j) / (m.get(i, i) * m.get(j, j)).sqrt();
                        if !v.is_finite() {
                            return Err(Error::NonFiniteEntry { row: i, col: j });
                        }
                        out[i * n + j] = v;
                    }
                }
                Ok((out, 1.0))
            } else {
                // normalization impossible; fall back to the raw matrix with
                // tolerances relative to its largest entry
                let mut scale: f64 = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        let v = m.get(i, j);
                        if !v.is_finite() {
                            return Err(Error::NonFiniteEntry { row: i, col: j });
                        }
                        out[i * n + j] = v;
                        scale = scale.max(v.abs());
                    }
                }
                Ok((out, scale.max(f64::MIN_POSITIVE)))
            }
        }
    }
}

/// Normalize, eigensolve, and classify the minimal eigenvalue.
pub fn min_eig_normalized(m: &SymMatrix) -> Result<SymmetricMatrixReport> {
    if m.dim == 0 || m.dim > MAX_DIM {
        return Err(Error::InvalidInput(format!(
            "matrix dimension {} outside 1..={MAX_DIM}",
            m.dim
        )));
    }
    let (norm, scale) = normalized_matrix(m)?;
    let eig = sym_eigen(&norm, m.dim)?;
    let min_eigenvalue = eig.values[0];
    let verdict = if min_eigenvalue >= -PSD_TOL * scale {
        PsdVerdict::Psd
    } else if min_eigenvalue <= -REFUTE_TOL * scale {
        PsdVerdict::NotPsd
    } else {
        PsdVerdict::Borderline
    };
    let witness_vector = if verdict == PsdVerdict::NotPsd {
        Some(eig.vectors[0].clone())
    } else {
        None
    };
    Ok(SymmetricMatrixReport {
        dim: m.dim,
        min_eigenvalue,
        scale,
        verdict,
        witness_vector,
    })
}

/// The matrix [log psi(x_i + x_j)] over the given points.
pub fn gram_matrix(p: &PsiFunction, points: &[f64]) -> Result<SymMatrix> {
    if points.len() > MAX_DIM {
        return Err(Error::InvalidInput(format!(
            "at most {MAX_DIM} Gram points supported"
        )));
    }
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if a == b {
                return Err(Error::InvalidInput(format!("duplicate Gram point {a}")));
            }
        }
    }
    let n = points.len();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = p.eval_log(points[i] + points[j])?;
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    Ok(SymMatrix {
        dim: n,
        domain: MatrixDomain::Log,
        data,
    })
}

/// The Hankel matrix [s_{i+j+shift}] for 0 <= i, j <= m, held in the log
/// domain when every entry is positive.
pub fn hankel(seq: &MomentSequence, m: usize, shift: usize) -> Result<SymMatrix> {
    if shift > 1 {
        return Err(Error::InvalidInput("shift must be 0 or 1".into()));
    }
    if 2 * m + shift > seq.max_order() {
        return Err(Error::InvalidInput(format!(
            "hankel({m}, {shift}) needs moments up to {} but only {} are available",
            2 * m + shift,
            seq.max_order()
        )));
    }
    if m + 1 > MAX_DIM {
        return Err(Error::InvalidInput(format!(
            "Hankel dimension {} exceeds {MAX_DIM}",
            m + 1
        )));
    }
    if seq.all_positive() {
        Ok(SymMatrix::from_fn(m + 1, MatrixDomain::Log, |i, j| {
            seq.log_value(i + j + shift).unwrap()
        }))
    } else {
        Ok(SymMatrix::from_fn(m + 1, MatrixDomain::Linear, |i, j| {
            seq.value(i + j + shift).unwrap()
        }))
    }
}

/// Grid families for the exponential-convexity test: base points, step
/// sizes, and the largest matrix size per family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridPlan {
    pub base_points: Vec<f64>,
    pub steps: Vec<f64>,
    pub max_size: usize,
}

impl Default for GridPlan {
    fn default() -> Self {
        GridPlan {
            base_points: vec![0.0, -1.0, -2.0, -4.0, -8.0],
            steps: vec![1.0, 0.5, 1.0 / 3.0, 0.2, 0.1],
            max_size: 12,
        }
    }
}

impl GridPlan {
    /// Steps 1/(k*k) from condition-style sequences s_k = k.
    pub fn with_reciprocal_square_steps(k_max: usize) -> Self {
        GridPlan {
            steps: (1..=k_max).map(|k| 1.0 / (k * k) as f64).collect(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ConvexityVerdict {
    Consistent,
    Refuted {
        xi: f64,
        t: f64,
        m: usize,
        report: SymmetricMatrixReport,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpConvexityReport {
    #[serde(flatten)]
    pub verdict: ConvexityVerdict,
    pub grids_tested: usize,
    /// Most negative normalized eigenvalue observed across all grids.
    pub worst_min_eigenvalue: f64,
}

/// Sweep the grid families [psi(xi + (i+j) t)] and test each for PSD.
///
/// A single not-psd grid refutes exponential convexity; passing every
/// family is only "consistent" (finitely many grids were checked).
pub fn is_exponentially_convex(p: &PsiFunction, plan: &GridPlan) -> Result<ExpConvexityReport> {
    if plan.max_size + 1 > MAX_DIM {
        return Err(Error::InvalidInput(format!(
            "grid size {} exceeds {MAX_DIM}",
            plan.max_size + 1
        )));
    }
    let mut grids_tested = 0;
    let mut worst = f64::INFINITY;
    for &xi in &plan.base_points {
        for &t in &plan.steps {
            // one evaluation pass covers every sub-grid of this family
            let logs: Vec<f64> = (0..=2 * plan.max_size)
                .map(|k| p.eval_log(xi + k as f64 * t))
                .collect::<Result<_>>()?;
            for m in 1..=plan.max_size {
                let gram = SymMatrix::from_fn(m + 1, MatrixDomain::Log, |i, j| logs[i + j]);
                let report = min_eig_normalized(&gram)?;
                grids_tested += 1;
                worst = worst.min(report.min_eigenvalue);
                if report.verdict == PsdVerdict::NotPsd {
                    return Ok(ExpConvexityReport {
                        verdict: ConvexityVerdict::Refuted { xi, t, m, report },
                        grids_tested,
                        worst_min_eigenvalue: worst,
                    });
                }
            }
        }
    }
    Ok(ExpConvexityReport {
        verdict: ConvexityVerdict::Consistent,
        grids_tested,
        worst_min_eigenvalue: worst,
    })
}

/// Conditional positive definiteness of a sequence: PSD of P H P where
/// P is the projection onto mean-zero coefficient vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CpdReport {
    pub is_cpd: bool,
    pub report: SymmetricMatrixReport,
    /// w^T H w for the projected witness w (negative iff valid).
    pub witness_quadratic_form: Option<f64>,
    pub witness: Option<Vec<f64>>,
}

pub fn is_cpd(seq: &MomentSequence, m: usize) -> Result<CpdReport> {
    if 2 * m > seq.max_order() {
        return Err(Error::InvalidInput(format!(
            "cpd({m}) needs moments up to {}",
            2 * m
        )));
    }
    let n = m + 1;
    let h: Vec<f64> = {
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] = seq.value(i + j).ok_or(Error::Overflow {
                    what: "hankel entry".into(),
                    x: (i + j) as f64,
                })?;
            }
        }
        h
    };
    // P H P with P = I - ones/(m+1), via row/column/total means
    let row_mean: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| h[i * n + j]).sum::<f64>() / n as f64)
        .collect();
    let total_mean: f64 = row_mean.iter().sum::<f64>() / n as f64;
    let mut php = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            php[i * n + j] = h[i * n + j] - row_mean[i] - row_mean[j] + total_mean;
        }
    }
    // tolerances are relative to the data scale: affine sequences make
    // P H P vanish identically, leaving pure roundoff that must not be
    // judged against its own magnitude
    let scale = h
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let eig = sym_eigen(&php, n)?;
    let min_eigenvalue = eig.values[0];
    let verdict = if min_eigenvalue >= -PSD_TOL * scale {
        PsdVerdict::Psd
    } else if min_eigenvalue <= -REFUTE_TOL * scale {
        PsdVerdict::NotPsd
    } else {
        PsdVerdict::Borderline
    };
    let (witness, qform) = if verdict == PsdVerdict::NotPsd {
        // project the eigenvector so its entries sum to zero exactly
        let v = &eig.vectors[0];
        let mean = v.iter().sum::<f64>() / n as f64;
        let w: Vec<f64> = v.iter().map(|x| x - mean).collect();
        let q = kahan_sum(
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| w[i] * h[i * n + j] * w[j]),
        );
        (Some(w), Some(q))
    } else {
        (None, None)
    };
    Ok(CpdReport {
        is_cpd: verdict != PsdVerdict::NotPsd,
        report: SymmetricMatrixReport {
            dim: n,
            min_eigenvalue,
            scale,
            verdict,
            witness_vector: witness.clone(),
        },
        witness_quadratic_form: qform,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureSpec;
    use crate::transform::{catalog_get, PsiFunction};
    use std::collections::BTreeMap;

    fn psi(name: &str, params: &[(&str, f64)]) -> PsiFunction {
        let map: BTreeMap<String, f64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        catalog_get(name, &map).unwrap()
    }

    #[test]
    fn gram_of_constant_is_flat() {
        let p = psi("const", &[("c", 1.0)]);
        let g = gram_matrix(&p, &[0.0, 1.0, -2.0]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.get(i, j), 0.0); // log 1
                assert_eq!(g.linear_entry(i, j), 1.0);
            }
        }
    }

    #[test]
    fn gram_of_bmv_matches_cosh() {
        let p = psi("bmv", &[("xi", 1.0), ("eta", 0.0)]);
        let pts = [-1.0, 0.0, 1.0];
        let g = gram_matrix(&p, &pts).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = (pts[i] + pts[j]).cosh().ln();
                assert!((g.get(i, j) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gram_rejects_duplicates() {
        let p = psi("cosh", &[]);
        assert!(gram_matrix(&p, &[0.5, 0.5]).is_err());
    }

    #[test]
    fn hankel_examples() {
        let seq = MomentSequence::new(vec![1.0, 1.0, 2.0, 6.0], "n!").unwrap();
        let h = hankel(&seq, 1, 0).unwrap();
        assert_eq!(h.linear_entry(0, 0), 1.0);
        assert!((h.linear_entry(1, 1) - 2.0).abs() < 1e-15);
        assert!((h.linear_entry(0, 1) - 1.0).abs() < 1e-15);

        // geometric sequence: the shifted Hankel is rank one
        let c: f64 = 1.7;
        let seq = MomentSequence::new((0..7).map(|n| c.powi(n)).collect(), "geometric").unwrap();
        let h = hankel(&seq, 2, 1).unwrap();
        let rep = min_eig_normalized(&h).unwrap();
        assert_eq!(rep.verdict, PsdVerdict::Psd);
        // normalized rank-one matrix has eigenvalues {0, 0, 3}
        assert!(rep.min_eigenvalue.abs() < 1e-12);
    }

    #[test]
    fn min_eig_hand_computed_cases() {
        let eye = SymMatrix::from_fn(
            5,
            MatrixDomain::Linear,
            |i, j| {
                if i == j {
                    1.0
                } else {
                    0.0
                }
            },
        );
        let rep = min_eig_normalized(&eye).unwrap();
        assert_eq!(rep.verdict, PsdVerdict::Psd);
        assert!((rep.min_eigenvalue - 1.0).abs() < 1e-14);

        // n! Hankel [[1,1],[1,2]]: raw eigenvalues (3 +- sqrt 5)/2, both
        // positive; after the diagonal congruence the minimal eigenvalue
        // becomes 1 - 1/sqrt(2) with the same sign
        let m = SymMatrix::from_fn(2, MatrixDomain::Linear, |i, j| {
            [[1.0, 1.0], [1.0, 2.0]][i][j]
        });
        let raw_min = sym_eigen(&[1.0, 1.0, 1.0, 2.0], 2).unwrap().values[0];
        assert!((raw_min - (3.0 - 5.0f64.sqrt()) / 2.0).abs() < 1e-12);
        let rep = min_eig_normalized(&m).unwrap();
        assert_eq!(rep.verdict, PsdVerdict::Psd);
        assert!((rep.min_eigenvalue - (1.0 - 1.0 / 2.0f64.sqrt())).abs() < 1e-12);

        // [[0,1],[1,4]]: zero diagonal disables normalization; raw
        // eigenvalues are 2 +- sqrt 5
        let m = SymMatrix::from_fn(2, MatrixDomain::Linear, |i, j| {
            [[0.0, 1.0], [1.0, 4.0]][i][j]
        });
        let rep = min_eig_normalized(&m).unwrap();
        assert_eq!(rep.verdict, PsdVerdict::NotPsd);
        assert!((rep.min_eigenvalue - (2.0 - 5.0f64.sqrt())).abs() < 1e-12);
        let w = rep.witness_vector.as_ref().unwrap();
        let q: f64 = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| w[i] * [[0.0, 1.0], [1.0, 4.0]][i][j] * w[j])
            .sum();
        assert!(q < 0.0);
    }

    #[test]
    fn borderline_band_between_tolerances() {
        // normalized min eigenvalue -2e-8 sits between the psd and
        // refutation thresholds
        let eps = 2e-8;
        let m = SymMatrix::from_fn(2, MatrixDomain::Linear, |i, j| {
            if i == j {
                1.0
            } else {
                1.0 + eps
            }
        });
        let rep = min_eig_normalized(&m).unwrap();
        assert_eq!(rep.verdict, PsdVerdict::Borderline);
        assert!(rep.witness_vector.is_none());
    }

    #[test]
    fn reciprocal_square_step_plan() {
        // alternate step family 1/(k k); the bmv transform stays consistent
        let p = psi("bmv", &[("xi", 1.0), ("eta", 2.0)]);
        let plan = GridPlan {
            max_size: 6,
            ..GridPlan::with_reciprocal_square_steps(4)
        };
        assert_eq!(plan.steps, vec![1.0, 0.25, 1.0 / 9.0, 1.0 / 16.0]);
        let rep = is_exponentially_convex(&p, &plan).unwrap();
        assert!(matches!(rep.verdict, ConvexityVerdict::Consistent));
    }

    #[test]
    fn log_domain_survives_huge_entries() {
        // Hankel of e^{n^2}: linear values reach e^{100}
        let seq = MomentSequence::from_log((0..=11).map(|n| (n * n) as f64).collect(), "e^{n^2}")
            .unwrap();
        let h = hankel(&seq, 5, 0).unwrap();
        let rep = min_eig_normalized(&h).unwrap();
        assert_eq!(rep.verdict, PsdVerdict::Psd);
    }

    #[test]
    fn bmv_families_are_consistent() {
        for (xi, eta) in [(2.0, 5.0), (1.0, 0.0), (0.5, 10.0)] {
            let p = psi("bmv", &[("xi", xi), ("eta", eta)]);
            let plan = GridPlan {
                max_size: 8,
                ..Default::default()
            };
            let rep = is_exponentially_convex(&p, &plan).unwrap();
            assert!(
                matches!(rep.verdict, ConvexityVerdict::Consistent),
                "bmv({xi},{eta}) refuted: {:?}",
                rep.verdict
            );
        }
    }

    #[test]
    fn expsq_is_consistent() {
        let p = psi("expsq", &[]);
        let plan = GridPlan {
            max_size: 8,
            ..Default::default()
        };
        let rep = is_exponentially_convex(&p, &plan).unwrap();
        assert!(matches!(rep.verdict, ConvexityVerdict::Consistent));
    }

    #[test]
    fn coshcos_is_refuted_at_small_steps() {
        let p = psi("coshcos", &[("delta", 2.19)]);
        let rep = is_exponentially_convex(&p, &GridPlan::default()).unwrap();
        match rep.verdict {
            ConvexityVerdict::Refuted { m, ref report, .. } => {
                assert!(m <= 12);
                assert!(report.witness_vector.is_some());
                assert!(report.min_eigenvalue <= -REFUTE_TOL);
            }
            ConvexityVerdict::Consistent => panic!("coshcos(2.19) must be refuted"),
        }
        // the xi = 0, t = 0.1 family on its own refutes by m <= 10
        // (eigensolve oracle on the explicit matrix psi((i+j) t))
        let plan = GridPlan {
            base_points: vec![0.0],
            steps: vec![0.1],
            max_size: 10,
        };
        let rep = is_exponentially_convex(&p, &plan).unwrap();
        match rep.verdict {
            ConvexityVerdict::Refuted { t, m, .. } => {
                assert_eq!(t, 0.1);
                assert!(m <= 10);
            }
            ConvexityVerdict::Consistent => panic!("t = 0.1 family must refute"),
        }
    }

    #[test]
    fn measure_induced_gram_is_psd() {
        let specs = [
            MeasureSpec::uniform(0.0, 1.0).unwrap(),
            MeasureSpec::from_atoms(&[(0.5, 1.0), (2.0, 0.25)]).unwrap(),
            MeasureSpec::gauss2u(),
        ];
        let mut rng = crate::rng::SplitMix64::new(5);
        for spec in specs {
            let p = PsiFunction::from_measure(spec).unwrap();
            for _ in 0..4 {
                let pts: Vec<f64> = (0..6).map(|_| rng.uniform(-3.0, 3.0)).collect();
                let g = gram_matrix(&p, &pts).unwrap();
                let rep = min_eig_normalized(&g).unwrap();
                assert_ne!(rep.verdict, PsdVerdict::NotPsd);
            }
        }
    }

    #[test]
    fn cpd_accepts_n2_refutes_n4() {
        let n2 = MomentSequence::new((0..=10).map(|n| (n * n) as f64).collect(), "n^2").unwrap();
        let rep = is_cpd(&n2, 5).unwrap();
        assert!(rep.is_cpd);

        let n4 =
            MomentSequence::new((0..=10).map(|n| (n as f64).powi(4)).collect(), "n^4").unwrap();
        let rep = is_cpd(&n4, 5).unwrap();
        assert!(!rep.is_cpd);
        assert!(rep.witness_quadratic_form.unwrap() < 0.0);
        let w = rep.witness.as_ref().unwrap();
        assert!(w.iter().sum::<f64>().abs() < 1e-12);

        let ones = MomentSequence::new(vec![1.0; 8], "constant").unwrap();
        let rep = is_cpd(&ones, 3).unwrap();
        assert!(rep.is_cpd);
    }

    #[test]
    fn cpd_boundary_is_exactly_quadratic() {
        // n^j is conditionally positive definite iff j <= 2; the affine
        // cases project to an identically zero form (roundoff only)
        for (j, want) in [(0u32, true), (1, true), (2, true), (3, false), (4, false)] {
            let seq = MomentSequence::new(
                (0..=10).map(|n| (n as f64).powi(j as i32)).collect(),
                format!("n^{j}"),
            )
            .unwrap();
            let rep = is_cpd(&seq, 5).unwrap();
            assert_eq!(rep.is_cpd, want, "n^{j}: {:?}", rep.report.verdict);
            if !want {
                assert!(rep.witness_quadratic_form.unwrap() < 0.0);
            }
        }
    }

    #[test]
    fn congruence_preserves_min_eig_sign() {
        // random symmetric matrices with positive diagonal: the sign
        // bucket of the normalized minimal eigenvalue matches the raw one
        let mut rng = crate::rng::SplitMix64::new(77);
        let mut checked = 0;
        for _ in 0..200 {
            let n = 2 + (rng.next_u64() % 6) as usize;
            let mut raw = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..=i {
                    let v = rng.uniform(-1.0, 1.0);
                    raw[i * n + j] = v;
                    raw[j * n + i] = v;
                }
                raw[i * n + i] = rng.uniform(0.2, 3.0);
            }
            let raw_min = sym_eigen(&raw, n).unwrap().values[0];
            if raw_min.abs() < 1e-5 {
                continue; // engineered-near-zero excluded
            }
            let m = SymMatrix::from_fn(n, MatrixDomain::Linear, |i, j| raw[i * n + j]);
            let rep = min_eig_normalized(&m).unwrap();
            if raw_min < 0.0 {
                assert!(rep.min_eigenvalue < 0.0);
            } else {
                assert!(rep.min_eigenvalue > -PSD_TOL);
            }
            checked += 1;
        }
        assert!(checked > 150);
    }
}
