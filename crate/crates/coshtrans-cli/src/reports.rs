//! Report shapes emitted by the CLI.

use coshtrans::json::PsiWire;
use coshtrans::moments::{CarlemanReport, GrowthTrend, StieltjesReport};
use coshtrans::posdef::ExpConvexityReport;
use coshtrans::support::SupportEstimate;
use coshtrans::transform::GrowthRate;
use coshtrans::{AffineMap, ClassificationReport, HClass};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvennessProbe {
    pub even_by_construction: bool,
    /// max |psi(x) - psi(-x)| over the probe grid (0 for even sources).
    pub max_probe_diff: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub psi: PsiWire,
    pub seed: u64,
    pub warnings: Vec<String>,
    pub evenness: EvennessProbe,
    /// Minimum of psi over the positivity probe grid.
    #[serde(with = "coshtrans::json::ext_real")]
    pub positivity_min: f64,
    pub exponential_convexity: ExpConvexityReport,
    pub growth: GrowthRate,
    #[serde(with = "coshtrans::json::ext_real_map")]
    pub support_estimates: BTreeMap<String, f64>,
    pub support_detail: BTreeMap<String, SupportEstimate>,
    /// Class of the full Taylor coefficients of psi.
    pub h_class: Option<HClass>,
    /// Class of the even-series variant (coefficients of psi(sqrt x)).
    pub h_class_even_series: Option<HClass>,
    pub series_prefix: Option<Vec<f64>>,
    pub stieltjes: Option<StieltjesReport>,
    pub factorial_growth: Option<GrowthTrend>,
    pub carleman: Option<CarlemanReport>,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub psi: PsiWire,
    pub operator: AffineMap,
    pub seed: u64,
    pub classification: ClassificationReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoverReport {
    pub measure: coshtrans::MeasureSpec,
    pub residuals: Vec<(usize, f64)>,
}
