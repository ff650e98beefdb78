//! The acceptance-check bundle behind `coshtrans verify` and
//! `coshtrans reproduce`.
//!
//! Each check pins its tolerances in code and reports the witnessing
//! numbers, so a failure is diagnosable from the bundle alone.

use coshtrans::measure::{MeasureSpec, MomentSequence};
use coshtrans::moments::{
    factorial_growth_test, is_stieltjes, recover_measure, GrowthVerdict, StieltjesVerdict,
};
use coshtrans::operators::{
    classify_cosubnormal, logconvexity_test, operator_norm_sq, orbit_sequence,
    sot_continuity_check, AffineMap, BoundedVerdict, ClassifyPlan, CosubnormalVerdict,
    TestFunction,
};
use coshtrans::posdef::{gram_matrix, hankel, is_cpd, min_eig_normalized, normalized_matrix};
use coshtrans::rng::SplitMix64;
use coshtrans::special::ln_factorial;
use coshtrans::support::{support_from_logderiv, support_from_moments, support_from_phi};
use coshtrans::transform::{
    catalog_get, coshcos_logconvex_threshold, default_x_grid, growth_rate, PsiFunction,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub details: Vec<String>,
}

impl CriterionResult {
    fn new(id: usize, name: &str) -> Self {
        CriterionResult {
            id,
            name: name.into(),
            pass: true,
            details: vec![],
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        if !ok {
            self.pass = false;
        }
        self.details
            .push(format!("{} {detail}", if ok { "ok " } else { "FAIL" }));
    }

    fn fail(&mut self, detail: String) {
        self.pass = false;
        self.details.push(format!("FAIL {detail}"));
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} criterion {:>2}: {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name
        )
    }
}

fn catalog(name: &str, params: &[(&str, f64)]) -> PsiFunction {
    let map: BTreeMap<String, f64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    catalog_get(name, &map).expect("catalog entry")
}

/// Closed-form transform of Lebesgue measure on [0, 1]: quadrature vs
/// sinh(x)/x to relative 1e-12.
pub fn criterion_1() -> CriterionResult {
    let mut r = CriterionResult::new(1, "uniform transform matches sinh(x)/x");
    let p = match PsiFunction::from_measure(MeasureSpec::uniform(0.0, 1.0).unwrap()) {
        Ok(p) => p,
        Err(e) => {
            r.fail(format!("constructing transform: {e}"));
            return r;
        }
    };
    for x in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let closed = if x == 0.0 { 1.0 } else { f64::sinh(x) / x };
        match p.eval(x) {
            Ok(v) => r.check(
                (v - closed).abs() <= 1e-12 * closed,
                format!("x = {x}: quadrature {v:.15e} vs closed {closed:.15e}"),
            ),
            Err(e) => r.fail(format!("x = {x}: {e}")),
        }
    }
    r
}

/// Error-function identity: the transform of 2u e^{-u^2} du equals
/// 1 + (sqrt(pi)/2) x erf(x/2) e^{x^2/4} to relative 1e-8.
pub fn criterion_2() -> CriterionResult {
    let mut r = CriterionResult::new(2, "gaussian-density transform matches erf closed form");
    let by_quadrature = match PsiFunction::from_measure(MeasureSpec::gauss2u()) {
        Ok(p) => p,
        Err(e) => {
            r.fail(format!("constructing transform: {e}"));
            return r;
        }
    };
    let closed = catalog("erf-gauss", &[]);
    for x in [0.0, 1.0, 2.0, 4.0] {
        match (by_quadrature.eval(x), closed.eval(x)) {
            (Ok(q), Ok(c)) => r.check(
                (q - c).abs() <= 1e-8 * c,
                format!("x = {x}: quadrature {q:.12e} vs closed {c:.12e}"),
            ),
            (a, b) => r.fail(format!("x = {x}: {a:?} vs {b:?}")),
        }
    }
    r
}

/// Factorial growth: gamma_n = n! vanishes under the (2n)! scale, with
/// r_n <= 1/n for 2 <= n <= 20.
pub fn criterion_3() -> CriterionResult {
    let mut r = CriterionResult::new(3, "gamma_n = n! has vanishing factorial-scaled roots");
    let seq = MomentSequence::from_log((0..=20).map(ln_factorial).collect(), "n!").unwrap();
    match factorial_growth_test(&seq) {
        Ok(trend) => {
            r.check(
                trend.verdict == GrowthVerdict::Vanishing,
                format!("verdict {:?}", trend.verdict),
            );
            for &(n, rn) in &trend.curve {
                if (2..=20).contains(&n) {
                    let ok = rn <= 1.0 / n as f64 + 1e-12;
                    if !ok {
                        r.check(false, format!("r_{n} = {rn} > 1/{n}"));
                    }
                }
            }
            r.details.push("ok  r_n <= 1/n for 2 <= n <= 20".into());
        }
        Err(e) => r.fail(format!("growth test: {e}")),
    }
    r
}

/// Support trio: all four estimators land in [0.95, 1.05] for the
/// uniform transform and in [1.9, 2.1] for the atom at 2.
pub fn criterion_4() -> CriterionResult {
    let mut r = CriterionResult::new(4, "support estimators agree (uniform and atom)");
    let cases: [(&str, MeasureSpec, f64, f64, usize); 2] = [
        (
            "uniform",
            MeasureSpec::uniform(0.0, 1.0).unwrap(),
            0.95,
            1.05,
            200,
        ),
        (
            "atom at 2",
            MeasureSpec::from_atoms(&[(2.0, 1.0)]).unwrap(),
            1.9,
            2.1,
            60,
        ),
    ];
    for (label, measure, lo, hi, n_moments) in cases {
        let p = PsiFunction::from_measure(measure).unwrap();
        let estimates: [(&str, Result<f64, coshtrans::Error>); 4] = [
            (
                "moments",
                p.series_coeffs(n_moments)
                    .and_then(|s| support_from_moments(&s))
                    .map(|est| est.estimate),
            ),
            (
                "logderiv",
                support_from_logderiv(&p, 50.0).map(|est| est.estimate),
            ),
            ("phi", support_from_phi(&p, 50.0).map(|est| est.estimate)),
            (
                "growth b0",
                growth_rate(&p, &default_x_grid(50.0)).map(|g| g.b0),
            ),
        ];
        for (name, outcome) in estimates {
            match outcome {
                Ok(value) => r.check(
                    value >= lo && value <= hi,
                    format!("{label} {name}: {value:.6} in [{lo}, {hi}]"),
                ),
                Err(e) => r.fail(format!("{label} {name}: {e}")),
            }
        }
    }
    r
}

/// BMV family: every normalized Gram matrix over seeded point sets has
/// minimal eigenvalue >= -1e-9.
pub fn criterion_5() -> CriterionResult {
    let mut r = CriterionResult::new(5, "cosh(sqrt(xi x^2 + eta)) Gram matrices are PSD");
    let mut rng = SplitMix64::new(0);
    for (xi, eta) in [(1.0, 0.0), (2.0, 5.0), (0.5, 10.0)] {
        let p = catalog("bmv", &[("xi", xi), ("eta", eta)]);
        let mut worst = f64::INFINITY;
        for _ in 0..5 {
            let points: Vec<f64> = (0..8).map(|_| rng.uniform(-3.0, 3.0)).collect();
            match gram_matrix(&p, &points).and_then(|g| min_eig_normalized(&g)) {
                Ok(rep) => worst = worst.min(rep.min_eigenvalue),
                Err(e) => r.fail(format!("(xi, eta) = ({xi}, {eta}): {e}")),
            }
        }
        r.check(
            worst >= -1e-9,
            format!("(xi, eta) = ({xi}, {eta}): worst normalized min eig {worst:.3e}"),
        );
    }
    r
}

/// Counterexample bundle at the threshold delta: log-convex on [0, 20]
/// (cohyponormal side) yet the 0.1-step samples are refuted as a moment
/// sequence with a verified witness (non-cosubnormal side).
pub fn criterion_6() -> CriterionResult {
    let mut r = CriterionResult::new(6, "cosh + cos + delta: cohyponormal but not cosubnormal");
    let delta = coshcos_logconvex_threshold();
    r.details.push(format!("ok  delta = {delta:.9}"));
    let p = catalog("coshcos", &[("delta", delta)]);
    match logconvexity_test(&p, 20.0, 0.01) {
        Ok(rep) => r.check(
            rep.log_convex,
            format!(
                "Theta >= -1e-8 psi^2 on [0, 20]; min Theta/psi^2 = {:.3e}",
                rep.min_theta_rel
            ),
        ),
        Err(e) => r.fail(format!("log-convexity scan: {e}")),
    }
    let samples: Vec<f64> = (0..=21).map(|n| p.eval(0.1 * n as f64).unwrap()).collect();
    let seq = MomentSequence::new(samples, "coshcos at 0.1 n").unwrap();
    match is_stieltjes(&seq, 10) {
        Ok(rep) => match rep.verdict {
            StieltjesVerdict::Refuted { m, shift, report } => {
                r.check(true, format!("refuted at m = {m}, shift = {shift}"));
                // verify the witness quadratic form on the normalized matrix
                let h = hankel(&seq, m, shift).unwrap();
                let (norm, _) = normalized_matrix(&h).unwrap();
                let q = report.witness_quadratic_form(&norm).unwrap_or(f64::NAN);
                r.check(q < 0.0, format!("witness quadratic form {q:.3e} < 0"));
            }
            StieltjesVerdict::ConsistentUpTo { m_max } => {
                r.fail(format!("unexpectedly consistent up to {m_max}"))
            }
        },
        Err(e) => r.fail(format!("stieltjes test: {e}")),
    }
    r
}

/// Unbounded regime for e^{x^2}: the orbit values factor exactly as
/// alpha r^n q^{-n^2/2}, remain Stieltjes-consistent, and the operator
/// norm is unbounded.
pub fn criterion_7() -> CriterionResult {
    let mut r = CriterionResult::new(7, "e^{x^2}: structured unbounded orbits stay consistent");
    let p = catalog("expsq", &[]);
    for (x, a) in [(0.0f64, 1.0f64), (1.0, 0.5), (-2.0, 0.3)] {
        let alpha = (x * x).exp();
        let rr = (2.0 * x * a).exp();
        let q: f64 = (-2.0 * a * a).exp();
        let mut max_rel: f64 = 0.0;
        for n in 0..=8 {
            let lhs = ((x + n as f64 * a).abs().powi(2)).exp();
            let rhs = alpha * rr.powi(n) * q.powf(-0.5 * (n * n) as f64);
            max_rel = max_rel.max((lhs - rhs).abs() / rhs);
        }
        r.check(
            max_rel <= 1e-12,
            format!("(x, a) = ({x}, {a}): structural identity max rel err {max_rel:.2e}"),
        );
        let t = AffineMap::identity(1, vec![a]).unwrap();
        match orbit_sequence(&p, &t, &[x], 11).and_then(|seq| is_stieltjes(&seq, 5)) {
            Ok(rep) => r.check(
                matches!(rep.verdict, StieltjesVerdict::ConsistentUpTo { .. }),
                format!("(x, a) = ({x}, {a}): orbit consistent to m = 5"),
            ),
            Err(e) => r.fail(format!("(x, a) = ({x}, {a}): {e}")),
        }
    }
    let t = AffineMap::identity(1, vec![1.0]).unwrap();
    match operator_norm_sq(&p, &t) {
        Ok(BoundedVerdict::Unbounded) => r.check(true, "norm verdict: unbounded".into()),
        Ok(v) => r.fail(format!("norm verdict {v:?}, expected unbounded")),
        Err(e) => r.fail(format!("norm: {e}")),
    }
    r
}

/// Norm formula for cosh translations: norm^2 = e^{|a|} to relative 1e-4.
pub fn criterion_8() -> CriterionResult {
    let mut r = CriterionResult::new(8, "translation norm formula for cosh");
    let p = catalog("cosh", &[]);
    for a in [0.5, 1.0, 2.0] {
        let t = AffineMap::identity(1, vec![a]).unwrap();
        match operator_norm_sq(&p, &t) {
            Ok(BoundedVerdict::Yes { norm_sq }) => {
                let want = a.exp();
                r.check(
                    (norm_sq - want).abs() <= 1e-4 * want,
                    format!("a = {a}: norm^2 = {norm_sq:.10} vs e^|a| = {want:.10}"),
                );
            }
            Ok(v) => r.fail(format!("a = {a}: verdict {v:?}")),
            Err(e) => r.fail(format!("a = {a}: {e}")),
        }
    }
    r
}

/// Measure recovery round trips: a two-atom measure from its transform
/// series, and four Gauss atoms reproducing the uniform moments.
pub fn criterion_9() -> CriterionResult {
    let mut r = CriterionResult::new(9, "moment-to-measure recovery round trips");
    let m = MeasureSpec::from_atoms(&[(0.4, 0.3), (1.5, 0.7)]).unwrap();
    let p = PsiFunction::from_measure(m).unwrap();
    match p.series_coeffs(5).and_then(|seq| recover_measure(&seq, 2)) {
        Ok(rec) => {
            let atoms = rec.measure.atoms();
            let want = [(0.4, 0.3), (1.5, 0.7)];
            for (atom, (u, w)) in atoms.iter().zip(want) {
                r.check(
                    (atom.u - u).abs() <= 1e-8 && (atom.w - w).abs() <= 1e-8,
                    format!("atom ({:.10}, {:.10}) vs ({u}, {w})", atom.u, atom.w),
                );
            }
        }
        Err(e) => r.fail(format!("two-atom recovery: {e}")),
    }
    let seq = MomentSequence::new(
        (0..=8).map(|n| 1.0 / (2.0 * n as f64 + 1.0)).collect(),
        "uniform moments",
    )
    .unwrap();
    match recover_measure(&seq, 4) {
        Ok(rec) => {
            let max_residual = rec
                .residuals
                .iter()
                .map(|&(_, res)| res)
                .fold(0.0, f64::max);
            r.check(
                max_residual <= 1e-10,
                format!("uniform k = 4: max moment residual {max_residual:.2e}"),
            );
            let sup = rec.measure.support_sup();
            r.check(sup <= 1.0 + 1e-6, format!("max node {sup:.10}"));
        }
        Err(e) => r.fail(format!("uniform recovery: {e}")),
    }
    r
}

/// Hankel soundness across the measure corpus, plus the conditional-
/// positive-definiteness split between n^2 and n^4.
pub fn criterion_10() -> CriterionResult {
    let mut r = CriterionResult::new(10, "Hankel PSD for true moments; CPD splits n^2 / n^4");
    let corpus: Vec<(&str, MeasureSpec)> = vec![
        ("uniform", MeasureSpec::uniform(0.0, 1.0).unwrap()),
        ("atom 0.5", MeasureSpec::from_atoms(&[(0.5, 1.0)]).unwrap()),
        ("atom 1", MeasureSpec::from_atoms(&[(1.0, 1.0)]).unwrap()),
        ("atom 2", MeasureSpec::from_atoms(&[(2.0, 1.0)]).unwrap()),
        (
            "two-atom",
            MeasureSpec::from_atoms(&[(0.4, 0.3), (1.5, 0.7)]).unwrap(),
        ),
        ("gaussian", MeasureSpec::gauss2u()),
    ];
    for (label, measure) in corpus {
        let p = PsiFunction::from_measure(measure).unwrap();
        let seq = match p.series_coeffs(13) {
            Ok(s) => s,
            Err(e) => {
                r.fail(format!("{label}: series: {e}"));
                continue;
            }
        };
        let mut worst = f64::INFINITY;
        for m in 1..=6 {
            for shift in [0, 1] {
                match hankel(&seq, m, shift).and_then(|h| min_eig_normalized(&h)) {
                    Ok(rep) => worst = worst.min(rep.min_eigenvalue),
                    Err(e) => r.fail(format!("{label} m={m} shift={shift}: {e}")),
                }
            }
        }
        r.check(
            worst >= -1e-9,
            format!("{label}: worst normalized Hankel min eig {worst:.3e}"),
        );
    }
    let n2 = MomentSequence::new((0..=10).map(|n| (n * n) as f64).collect(), "n^2").unwrap();
    match is_cpd(&n2, 5) {
        Ok(rep) => r.check(rep.is_cpd, "n^2 is conditionally positive definite".into()),
        Err(e) => r.fail(format!("cpd(n^2): {e}")),
    }
    let n4 = MomentSequence::new((0..=10).map(|n| (n as f64).powi(4)).collect(), "n^4").unwrap();
    match is_cpd(&n4, 5) {
        Ok(rep) => {
            r.check(!rep.is_cpd, "n^4 is refuted".into());
            let q = rep.witness_quadratic_form.unwrap_or(f64::NAN);
            r.check(q < 0.0, format!("verified witness quadratic form {q:.3e}"));
        }
        Err(e) => r.fail(format!("cpd(n^4): {e}")),
    }
    r
}

/// SOT continuity trend: squared norms decrease like h^2 for a smooth
/// bump (consecutive ratios in [3.2, 4.8]).
pub fn criterion_11() -> CriterionResult {
    let mut r = CriterionResult::new(11, "translation continuity: h^2 trend for smooth bumps");
    let p = catalog("sinhc", &[]);
    let bump = TestFunction::SmoothBump { radius: 1.0 };
    match sot_continuity_check(&p, &[0.0], &bump, &[vec![0.1], vec![0.05], vec![0.025]]) {
        Ok(norms) => {
            r.check(
                norms[0] > norms[1] && norms[1] > norms[2],
                format!(
                    "norms decrease: {:.6e}, {:.6e}, {:.6e}",
                    norms[0], norms[1], norms[2]
                ),
            );
            for (i, ratio) in [norms[0] / norms[1], norms[1] / norms[2]]
                .iter()
                .enumerate()
            {
                r.check(
                    (3.2..=4.8).contains(ratio),
                    format!("ratio {} = {ratio:.4} in [3.2, 4.8]", i + 1),
                );
            }
        }
        Err(e) => r.fail(format!("sot check: {e}")),
    }
    r
}

/// Classifier shortcuts: translations of a compact transform are
/// cosubnormal, constant densities with rotations are unitary, and the
/// one-dimensional reflection is refuted.
pub fn criterion_12() -> CriterionResult {
    let mut r = CriterionResult::new(12, "classifier theorem shortcuts");
    let sinhc = catalog("sinhc", &[]);
    for kappa in [1usize, 2] {
        let mut a = vec![0.0; kappa];
        a[0] = 0.7;
        let t = AffineMap::identity(kappa, a).unwrap();
        match classify_cosubnormal(&sinhc, &t, &ClassifyPlan::default()) {
            Ok(rep) => r.check(
                matches!(rep.cosubnormal, CosubnormalVerdict::Yes { .. }),
                format!(
                    "sinhc translation kappa = {kappa}: {:?}",
                    verdict_tag(&rep.cosubnormal)
                ),
            ),
            Err(e) => r.fail(format!("kappa = {kappa}: {e}")),
        }
    }
    let konst = catalog("const", &[("c", 1.0)]);
    let (c, s) = (
        std::f64::consts::FRAC_PI_6.cos(),
        std::f64::consts::FRAC_PI_6.sin(),
    );
    let rot = AffineMap::new(2, vec![c, -s, s, c], vec![0.3, -0.1]).unwrap();
    match classify_cosubnormal(&konst, &rot, &ClassifyPlan::default()) {
        Ok(rep) => {
            r.check(
                matches!(rep.cosubnormal, CosubnormalVerdict::Yes { .. }),
                format!("constant + rotation: {:?}", verdict_tag(&rep.cosubnormal)),
            );
            r.check(
                rep.notes.iter().any(|n| n.contains("unitary")),
                "unitary note attached".into(),
            );
        }
        Err(e) => r.fail(format!("constant + rotation: {e}")),
    }
    let refl = AffineMap::new(1, vec![-1.0], vec![0.3]).unwrap();
    match classify_cosubnormal(&sinhc, &refl, &ClassifyPlan::default()) {
        Ok(rep) => r.check(
            matches!(rep.cosubnormal, CosubnormalVerdict::No { .. }),
            format!("sinhc reflection: {:?}", verdict_tag(&rep.cosubnormal)),
        ),
        Err(e) => r.fail(format!("reflection: {e}")),
    }
    r
}

fn verdict_tag(v: &CosubnormalVerdict) -> &'static str {
    match v {
        CosubnormalVerdict::Yes { .. } => "yes",
        CosubnormalVerdict::No { .. } => "no",
        CosubnormalVerdict::ConsistentUpTo { .. } => "consistent-up-to",
        CosubnormalVerdict::Inconclusive { .. } => "inconclusive",
    }
}

/// All checks, in criterion order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
        criterion_12(),
    ]
}

/// Reproduction bundles by example id.
pub fn reproduce(id: &str) -> Option<Vec<CriterionResult>> {
    let results = match id {
        "sinhc" => vec![criterion_1()],
        "erf-gauss" => vec![criterion_2()],
        "bmv" => vec![criterion_5()],
        "coshcos" => vec![criterion_6()],
        "expsq" => vec![criterion_7()],
        "unitary-const" => vec![criterion_12()],
        "support-trio" => vec![criterion_4()],
        _ => return None,
    };
    Some(results)
}

pub const EXAMPLE_IDS: [&str; 7] = [
    "sinhc",
    "erf-gauss",
    "bmv",
    "coshcos",
    "expsq",
    "unitary-const",
    "support-trio",
];
