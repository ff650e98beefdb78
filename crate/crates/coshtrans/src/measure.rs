//! Finite Borel measures on the nonnegative half-line: point masses plus a
//! small catalog of density segments, with even moments, support bounds,
//! and the pushforward under u -> u^2.

use crate::error::{Error, Result};
use crate::quad;
use serde::{Deserialize, Serialize};

/// A point mass at `u >= 0` with weight `w > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub u: f64,
    pub w: f64,
}

/// One density segment of a measure.
///
/// `SqImage` is only produced by [`MeasureSpec::pushforward_sq`]; it
/// represents the image of the inner segment under u -> u^2 and
/// integrates by exact change of variables, so pushforward moments incur
/// no extra quadrature error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensitySegment {
    /// Lebesgue density 1 on [a, b].
    Uniform { a: f64, b: f64 },
    /// Density 2u e^{-u^2} on [0, inf); its even moments are n!.
    Gauss2u,
    /// Tabulated density on a grid, integrated by the trapezoid rule.
    Table { us: Vec<f64>, vals: Vec<f64> },
    /// Image of `inner` under u -> u^2.
    SqImage { inner: Box<DensitySegment> },
}

impl DensitySegment {
    fn validate(&self) -> Result<()> {
        match self {
            DensitySegment::Uniform { a, b } => {
                if !(a.is_finite() && b.is_finite() && *a >= 0.0 && a < b) {
                    return Err(Error::InvalidInput(format!(
                        "uniform segment needs 0 <= a < b, got [{a}, {b}]"
                    )));
                }
            }
            DensitySegment::Gauss2u => {}
            DensitySegment::Table { us, vals } => {
                if us.len() != vals.len() || us.len() < 2 {
                    return Err(Error::InvalidInput(
                        "table segment needs matching grids of length >= 2".into(),
                    ));
                }
                if us[0] < 0.0 || us.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidInput(
                        "table grid must be strictly increasing and nonnegative".into(),
                    ));
                }
                if vals.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(Error::InvalidInput(
                        "table values must be finite and nonnegative".into(),
                    ));
                }
            }
            DensitySegment::SqImage { inner } => inner.validate()?,
        }
        Ok(())
    }

    /// Closed support of the segment; `f64::INFINITY` marks an unbounded end.
    pub fn support(&self) -> (f64, f64) {
        match self {
            DensitySegment::Uniform { a, b } => (*a, *b),
            DensitySegment::Gauss2u => (0.0, f64::INFINITY),
            DensitySegment::Table { us, .. } => (us[0], *us.last().unwrap()),
            DensitySegment::SqImage { inner } => {
                let (lo, hi) = inner.support();
                (lo * lo, hi * hi)
            }
        }
    }

    /// Integral of `f` against the segment's measure.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, order_tag: usize) -> Result<f64> {
        self.integrate_dyn(f, order_tag)
    }

    /// Integral of u^p cosh(x u) (or u^p sinh(x u) when `odd`) against
    /// the segment.
    ///
    /// For the Gaussian tail the hyperbolic factor and the density are
    /// fused into single exponentials: evaluated separately,
    /// cosh(x u) e^{-u^2} hits inf * 0 in the far tail and overflows
    /// pointwise in the band where the true product is still tiny.
    pub fn integrate_hyperbolic(&self, x: f64, p: u32, odd: bool, order_tag: usize) -> Result<f64> {
        match self {
            DensitySegment::Gauss2u => {
                let sign = if odd { -1.0 } else { 1.0 };
                let g = move |u: f64| {
                    u.powi(p as i32 + 1) * ((x * u - u * u).exp() + sign * (-x * u - u * u).exp())
                };
                quad::integrate_tail(&g, 0.0, order_tag)
            }
            _ => {
                let hyp = move |t: f64| if odd { t.sinh() } else { t.cosh() };
                self.integrate_dyn(&|u| u.powi(p as i32) * hyp(x * u), order_tag)
            }
        }
    }

    // dynamic dispatch so nested SqImage wrappers do not blow up
    // monomorphization
    fn integrate_dyn(&self, f: &dyn Fn(f64) -> f64, order_tag: usize) -> Result<f64> {
        match self {
            DensitySegment::Uniform { a, b } => Ok(quad::integrate(&f, *a, *b)),
            DensitySegment::Gauss2u => {
                let g = |u: f64| {
                    let w = 2.0 * u * (-u * u).exp();
                    // the density underflows long before polynomial
                    // integrands overflow; avoid inf * 0
                    if w == 0.0 {
                        0.0
                    } else {
                        f(u) * w
                    }
                };
                quad::integrate_tail(&g, 0.0, order_tag)
            }
            DensitySegment::Table { us, vals } => {
                let mut sum = 0.0;
                for i in 0..us.len() - 1 {
                    let h = us[i + 1] - us[i];
                    sum += 0.5 * h * (vals[i] * f(us[i]) + vals[i + 1] * f(us[i + 1]));
                }
                Ok(sum)
            }
            DensitySegment::SqImage { inner } => inner.integrate_dyn(&|u| f(u * u), order_tag),
        }
    }
}

/// A finite Borel measure on [0, inf): atoms plus density segments
/// (overlaps are additive).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "MeasureWire", into = "MeasureWire")]
pub struct MeasureSpec {
    atoms: Vec<Atom>,
    densities: Vec<DensitySegment>,
    total_mass: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MeasureWire {
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    densities: Vec<DensitySegment>,
}

impl TryFrom<MeasureWire> for MeasureSpec {
    type Error = Error;
    fn try_from(w: MeasureWire) -> Result<Self> {
        MeasureSpec::new(w.atoms, w.densities)
    }
}

impl From<MeasureSpec> for MeasureWire {
    fn from(m: MeasureSpec) -> Self {
        MeasureWire {
            atoms: m.atoms,
            densities: m.densities,
        }
    }
}

impl MeasureSpec {
    pub fn new(atoms: Vec<Atom>, densities: Vec<DensitySegment>) -> Result<Self> {
        for a in &atoms {
            if !(a.u.is_finite() && a.u >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "atom location must be finite and >= 0, got {}",
                    a.u
                )));
            }
            if !(a.w.is_finite() && a.w > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "atom weight must be finite and > 0, got {}",
                    a.w
                )));
            }
        }
        for d in &densities {
            d.validate()?;
        }
        let mut total_mass: f64 = atoms.iter().map(|a| a.w).sum();
        for d in &densities {
            total_mass += d.integrate(&|_| 1.0, 0)?;
        }
        if !total_mass.is_finite() {
            return Err(Error::InvalidInput("total mass is not finite".into()));
        }
        Ok(MeasureSpec {
            atoms,
            densities,
            total_mass,
        })
    }

    pub fn empty() -> Self {
        MeasureSpec {
            atoms: vec![],
            densities: vec![],
            total_mass: 0.0,
        }
    }

    /// Convenience: a purely atomic measure.
    pub fn from_atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        MeasureSpec::new(atoms.iter().map(|&(u, w)| Atom { u, w }).collect(), vec![])
    }

    /// Lebesgue measure restricted to [a, b].
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        MeasureSpec::new(vec![], vec![DensitySegment::Uniform { a, b }])
    }

    /// The density 2u e^{-u^2} on [0, inf).
    pub fn gauss2u() -> Self {
        MeasureSpec::new(vec![], vec![DensitySegment::Gauss2u]).expect("valid by construction")
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn densities(&self) -> &[DensitySegment] {
        &self.densities
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.densities.is_empty()
    }

    /// Integral of `f` against the measure.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, order_tag: usize) -> Result<f64> {
        let mut sum: f64 = self.atoms.iter().map(|a| a.w * f(a.u)).sum();
        for d in &self.densities {
            sum += d.integrate(f, order_tag)?;
        }
        if sum.is_finite() {
            Ok(sum)
        } else {
            Err(Error::DivergentMoment {
                order: order_tag,
                detail: "integral exceeded double range".into(),
            })
        }
    }

    /// The transform value: integral of cosh(x u) over the measure.
    pub fn cosh_transform(&self, x: f64) -> Result<f64> {
        let mut sum: f64 = self.atoms.iter().map(|a| a.w * (x * a.u).cosh()).sum();
        for d in &self.densities {
            sum += d.integrate_hyperbolic(x, 0, false, 0)?;
        }
        if sum.is_finite() {
            Ok(sum)
        } else {
            Err(Error::DivergentMoment {
                order: 0,
                detail: format!("transform value at x = {x} exceeded double range"),
            })
        }
    }

    /// The transform derivative: integral of u sinh(x u) over the measure.
    pub fn cosh_transform_prime(&self, x: f64) -> Result<f64> {
        let mut sum: f64 = self
            .atoms
            .iter()
            .map(|a| a.w * a.u * (x * a.u).sinh())
            .sum();
        for d in &self.densities {
            sum += d.integrate_hyperbolic(x, 1, true, 0)?;
        }
        if sum.is_finite() {
            Ok(sum)
        } else {
            Err(Error::DivergentMoment {
                order: 0,
                detail: format!("transform derivative at x = {x} exceeded double range"),
            })
        }
    }

    /// Even moment of order n: the integral of u^{2n}.
    pub fn moment(&self, n: usize) -> Result<f64> {
        let p = 2 * n as i32;
        self.integrate(&|u: f64| u.powi(p), n)
    }

    /// Raw moment of order n: the integral of u^n.
    pub fn raw_moment(&self, n: usize) -> Result<f64> {
        let p = n as i32;
        self.integrate(&|u: f64| u.powi(p), n)
    }

    /// Supremum of the closed support; 0 for the empty measure and
    /// `f64::INFINITY` when any segment is unbounded.
    pub fn support_sup(&self) -> f64 {
        let mut sup: f64 = 0.0;
        for a in &self.atoms {
            sup = sup.max(a.u);
        }
        for d in &self.densities {
            sup = sup.max(d.support().1);
        }
        sup
    }

    /// The image measure under u -> u^2: the pushed measure has n-th raw
    /// moment equal to this measure's n-th even moment.
    pub fn pushforward_sq(&self) -> MeasureSpec {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                u: a.u * a.u,
                w: a.w,
            })
            .collect();
        let densities = self
            .densities
            .iter()
            .map(|d| DensitySegment::SqImage {
                inner: Box::new(d.clone()),
            })
            .collect();
        MeasureSpec {
            atoms,
            densities,
            total_mass: self.total_mass,
        }
    }
}

/// A finite prefix of a candidate Stieltjes moment sequence.
///
/// Sequences whose entries are all positive may be held in the log
/// domain, which keeps superexponential orbit data (e.g. e^{n^2}) usable
/// by the Hankel machinery without overflow.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentSequence {
    #[serde(flatten)]
    repr: SeqRepr,
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
enum SeqRepr {
    #[serde(rename = "values")]
    Linear(Vec<f64>),
    #[serde(rename = "log_values")]
    LogPositive(Vec<f64>),
}

impl MomentSequence {
    pub fn new(values: Vec<f64>, provenance: impl Into<String>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::InvalidInput(
                "a moment sequence needs at least gamma_0..gamma_2".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "moment sequence entries must be finite".into(),
            ));
        }
        Ok(MomentSequence {
            repr: SeqRepr::Linear(values),
            provenance: provenance.into(),
        })
    }

    /// Build from logarithms of a positive sequence.
    pub fn from_log(log_values: Vec<f64>, provenance: impl Into<String>) -> Result<Self> {
        if log_values.len() < 3 {
            return Err(Error::InvalidInput(
                "a moment sequence needs at least gamma_0..gamma_2".into(),
            ));
        }
        if log_values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "log moment entries must be finite".into(),
            ));
        }
        Ok(MomentSequence {
            repr: SeqRepr::LogPositive(log_values),
            provenance: provenance.into(),
        })
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            SeqRepr::Linear(v) | SeqRepr::LogPositive(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// N, the largest available order.
    pub fn max_order(&self) -> usize {
        self.len() - 1
    }

    /// Linear-domain value; None when the log-domain entry overflows.
    pub fn value(&self, n: usize) -> Option<f64> {
        match &self.repr {
            SeqRepr::Linear(v) => v.get(n).copied(),
            SeqRepr::LogPositive(v) => {
                let x = v.get(n)?.exp();
                x.is_finite().then_some(x)
            }
        }
    }

    /// All values in the linear domain, if representable.
    pub fn values_linear(&self) -> Option<Vec<f64>> {
        (0..self.len()).map(|n| self.value(n)).collect()
    }

    /// ln(gamma_n); None when the entry is not strictly positive.
    pub fn log_value(&self, n: usize) -> Option<f64> {
        match &self.repr {
            SeqRepr::Linear(v) => {
                let x = *v.get(n)?;
                (x > 0.0).then(|| x.ln())
            }
            SeqRepr::LogPositive(v) => v.get(n).copied(),
        }
    }

    pub fn all_positive(&self) -> bool {
        match &self.repr {
            SeqRepr::Linear(v) => v.iter().all(|&x| x > 0.0),
            SeqRepr::LogPositive(_) => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_moment_examples() {
        let m = MeasureSpec::uniform(0.0, 1.0).unwrap();
        // gamma_3 = integral of u^6 over [0,1] = 1/7
        let g3 = m.moment(3).unwrap();
        assert!((g3 - 1.0 / 7.0).abs() < 1e-13);
        assert!((m.moment(0).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn atom_moment_is_power() {
        let m = MeasureSpec::from_atoms(&[(1.5, 1.0)]).unwrap();
        for k in 0..6 {
            assert!((m.moment(k).unwrap() - 1.5f64.powi(2 * k as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn gauss2u_moments_are_factorials() {
        let m = MeasureSpec::gauss2u();
        let g5 = m.moment(5).unwrap();
        assert!((g5 - 120.0).abs() < 1e-10 * 120.0, "gamma_5 = {g5}");
        for (n, want) in [(0usize, 1.0), (1, 1.0), (2, 2.0), (3, 6.0)] {
            let g = m.moment(n).unwrap();
            assert!((g - want).abs() < 1e-11 * want.max(1.0), "gamma_{n} = {g}");
        }
    }

    #[test]
    fn support_sup_examples() {
        assert_eq!(
            MeasureSpec::from_atoms(&[(2.0, 1.0)])
                .unwrap()
                .support_sup(),
            2.0
        );
        let m = MeasureSpec::new(
            vec![Atom { u: 0.5, w: 1.0 }],
            vec![DensitySegment::Uniform { a: 0.0, b: 1.0 }],
        )
        .unwrap();
        assert_eq!(m.support_sup(), 1.0);
        assert_eq!(MeasureSpec::gauss2u().support_sup(), f64::INFINITY);
        assert_eq!(MeasureSpec::empty().support_sup(), 0.0);
    }

    #[test]
    fn pushforward_atoms_and_empty() {
        let m = MeasureSpec::from_atoms(&[(3.0, 0.25)]).unwrap();
        let p = m.pushforward_sq();
        assert_eq!(p.atoms()[0].u, 9.0);
        assert_eq!(p.atoms()[0].w, 0.25);
        assert!(MeasureSpec::empty().pushforward_sq().is_empty());
    }

    #[test]
    fn pushforward_uniform_matches_quadrature_oracle() {
        // image of uniform [0,1] has density 1/(2 sqrt t); check raw moments
        // against an independent quadrature of t^n (2 sqrt t)^{-1}
        let m = MeasureSpec::uniform(0.0, 1.0).unwrap();
        let p = m.pushforward_sq();
        for n in 0..6usize {
            // substitute t = s^2 to remove the endpoint singularity
            let oracle = quad::integrate(&|s: f64| s.powi(2 * n as i32), 0.0, 1.0);
            let got = p.raw_moment(n).unwrap();
            assert!(
                (got - oracle).abs() < 1e-12 * oracle.max(1.0),
                "raw moment {n}: {got} vs {oracle}"
            );
            assert!((got - 1.0 / (2.0 * n as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn moment_overflow_is_divergent() {
        let m = MeasureSpec::from_atoms(&[(10.0, 1.0)]).unwrap();
        // 10^(2*200) overflows f64
        assert!(matches!(m.moment(200), Err(Error::DivergentMoment { .. })));
    }

    #[test]
    fn mass_invariant_holds() {
        let m = MeasureSpec::new(
            vec![Atom { u: 1.0, w: 0.5 }],
            vec![
                DensitySegment::Uniform { a: 0.0, b: 2.0 },
                DensitySegment::Gauss2u,
            ],
        )
        .unwrap();
        let direct = 0.5 + 2.0 + 1.0;
        assert!((m.total_mass() - direct).abs() < 1e-12 * direct);
        assert!((m.moment(0).unwrap() - m.total_mass()).abs() < 1e-12 * direct);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(MeasureSpec::from_atoms(&[(-1.0, 1.0)]).is_err());
        assert!(MeasureSpec::from_atoms(&[(1.0, 0.0)]).is_err());
        assert!(MeasureSpec::uniform(2.0, 1.0).is_err());
    }

    #[test]
    fn measure_json_schema_round_trip() {
        let text = r#"{"atoms":[{"u":0.5,"w":1.25}],
                       "densities":[{"kind":"uniform","a":0,"b":1},{"kind":"gauss2u"}]}"#;
        let m: MeasureSpec = serde_json::from_str(text).unwrap();
        assert!((m.total_mass() - (1.25 + 1.0 + 1.0)).abs() < 1e-12);
        let back = serde_json::to_string(&m).unwrap();
        let m2: MeasureSpec = serde_json::from_str(&back).unwrap();
        assert_eq!(m2.atoms(), m.atoms());
    }

    #[test]
    fn table_density_trapezoid() {
        // triangle density on [0,2] peaking at 1: mass = 1 by trapezoid
        let m = MeasureSpec::new(
            vec![],
            vec![DensitySegment::Table {
                us: vec![0.0, 1.0, 2.0],
                vals: vec![0.0, 1.0, 0.0],
            }],
        )
        .unwrap();
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn moment_sequence_log_round_trip() {
        let s = MomentSequence::from_log(vec![0.0, 1.0, 4.0, 9.0], "test").unwrap();
        assert!((s.value(1).unwrap() - 1f64.exp()).abs() < 1e-12);
        assert_eq!(s.log_value(3), Some(9.0));
        assert!(s.all_positive());
        let t = MomentSequence::new(vec![1.0, 0.0, 3.0], "test").unwrap();
        assert!(!t.all_positive());
        assert_eq!(t.log_value(1), None);
    }
}
