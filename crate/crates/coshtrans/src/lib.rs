//! Hyperbolic-cosine-transform machinery: transform evaluation,
//! exponential-convexity and Stieltjes-moment testing, support
//! estimation, measure recovery, and classification of composition
//! operators with affine symbols on weighted L2 spaces.
//!
//! The central object is a finite measure nu on the half-line and its
//! transform psi(x) = integral of cosh(x u) dnu(u). Round-tripping a
//! measure through its transform series and classifying the translation
//! operator it induces looks like this:
//!
//! ```
//! use coshtrans::{AffineMap, ClassifyPlan, CosubnormalVerdict, MeasureSpec, PsiFunction};
//!
//! let nu = MeasureSpec::from_atoms(&[(0.4, 0.3), (1.5, 0.7)])?;
//! let psi = PsiFunction::from_measure(nu)?;
//!
//! // the even-moment series determines the measure; two atoms need
//! // moments up to order 2k = 4
//! let series = psi.series_coeffs(5)?;
//! let recovered = coshtrans::moments::recover_measure(&series, 2)?;
//! assert!((recovered.measure.atoms()[1].u - 1.5).abs() < 1e-8);
//!
//! // translations of a compactly supported transform are cosubnormal
//! let shift = AffineMap::identity(1, vec![0.7])?;
//! let report = coshtrans::operators::classify_cosubnormal(&psi, &shift, &ClassifyPlan::default())?;
//! assert!(matches!(report.cosubnormal, CosubnormalVerdict::Yes { .. }));
//! # Ok::<(), coshtrans::Error>(())
//! ```
//!
//! Everything is pure and immutable after construction; all types are
//! safe to share across threads.

pub mod error;
pub mod json;
pub mod linalg;
pub mod measure;
pub mod moments;
pub mod operators;
pub mod posdef;
pub mod quad;
pub mod rng;
pub mod special;
pub mod support;
pub mod transform;

pub use error::{Error, Result};
pub use measure::{Atom, DensitySegment, MeasureSpec, MomentSequence};
pub use operators::{
    AffineMap, BoundedVerdict, ClassificationReport, ClassifyPlan, CosubnormalVerdict,
    LogConvexityReport, TestFunction,
};
pub use posdef::{
    gram_matrix, hankel, is_cpd, is_exponentially_convex, min_eig_normalized, GridPlan, PsdVerdict,
    SymmetricMatrixReport,
};
pub use transform::{
    catalog_get, classify_h, growth_rate, CatalogPsi, GrowthRate, HClass, HClassTag, PsiFunction,
    PsiSource,
};

#[cfg(test)]
mod concurrency {
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_and_sync() {
        assert_send_sync::<crate::MeasureSpec>();
        assert_send_sync::<crate::MomentSequence>();
        assert_send_sync::<crate::PsiFunction>();
        assert_send_sync::<crate::AffineMap>();
        assert_send_sync::<crate::ClassificationReport>();
        assert_send_sync::<crate::SymmetricMatrixReport>();
    }
}
