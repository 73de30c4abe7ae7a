//! Exact convex analysis for piecewise-affine concave functions over the
//! certified log-arithmetic of [`exactlog`].
//!
//! The central objects are min-of-affine concave functions ([`PAConcave`]),
//! rational polytopes ([`QPolytope`]), and polyhedra with log-valued vertices
//! and rational ray directions ([`LogPolyhedron`]). On top of them sit the
//! Legendre–Fenchel transform in both directions (lifted upper hulls one way,
//! linearity-cell candidate enumeration the other), sup-convolution, exact
//! argmax faces, sup-differentials, and polyhedral set operations. A separate
//! numeric path handles smooth 1-D concave metrics to a fixed tolerance.
//!
//! Exactness boundary: ambient dimension ≤ 2. Everything produced by duality
//! from rational input data has rational edge and ray directions, which is
//! what keeps intersections and face computations inside the log-arithmetic;
//! inputs that escape that class are reported as errors rather than silently
//! approximated.

mod argmax;
mod dual;
mod hull;
mod logpoly;
mod pac;
mod qpoly;
mod smooth;

pub use argmax::{pac_argmax, supdifferential, ArgmaxResult};
pub use dual::{legendre_dual, legendre_dual_on_domain, sup_convolution};
pub use logpoly::{minimal_face_containing, minkowski_sum, poly_intersect, HalfSpace, LogPolyhedron};
pub use pac::{pac_add, PAConcave, Piece};
pub use qpoly::QPolytope;
pub use smooth::{numeric_dual_1d, NumericDual, Smooth1DConcave, Smooth1DKind};

use exactlog::LogScalar;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("sign indeterminate at {precision} bits while {context}")]
    IndeterminateSign { context: String, precision: u32 },
    #[error("ambient dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operands have different domains")]
    DomainMismatch,
    #[error("piecewise function needs at least one piece")]
    EmptyPieces,
    #[error("ambient dimension {0} outside the supported exact range (1 or 2)")]
    UnsupportedDimension(usize),
    #[error("polyhedron has irrational edge directions: {0}")]
    IrrationalDirections(String),
    #[error("recession cone contains a line; face structure undefined for this path")]
    UnpointedCone,
    #[error("point lies outside the domain")]
    PointOutsideDomain,
    #[error("second operand is not contained in the first")]
    ContainmentViolated,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("sampled derivative is not monotone (smooth metric contract)")]
    NonMonotoneDerivative,
}

impl CoreError {
    pub(crate) fn indeterminate(context: &str, precision: u32) -> Self {
        CoreError::IndeterminateSign {
            context: context.to_string(),
            precision,
        }
    }
}

/// Deterministic structural key for ordering/deduplicating LogScalar data in
/// canonical containers. Not a numeric order.
pub(crate) fn ls_key(x: &LogScalar) -> (BigRational, Vec<(u64, BigRational)>) {
    (
        x.rational_part().clone(),
        x.log_terms().map(|(p, c)| (p, c.clone())).collect(),
    )
}

pub(crate) fn point_key(p: &[LogScalar]) -> Vec<(BigRational, Vec<(u64, BigRational)>)> {
    p.iter().map(ls_key).collect()
}

/// Certified comparison wrapper that maps indeterminacy into `CoreError`.
pub(crate) fn cmp_ls(a: &LogScalar, b: &LogScalar, context: &str) -> Result<std::cmp::Ordering, CoreError> {
    a.try_cmp(b)
        .ok_or_else(|| CoreError::indeterminate(context, exactlog::default_precision_cap()))
}

/// ⟨rational vector, LogScalar vector⟩.
pub(crate) fn dot_q_ls(q: &[BigRational], x: &[LogScalar]) -> LogScalar {
    let mut acc = LogScalar::zero();
    for (c, v) in q.iter().zip(x) {
        acc += &v.scale(c);
    }
    acc
}

/// ⟨LogScalar vector, rational vector⟩.
pub(crate) fn dot_ls_q(s: &[LogScalar], x: &[BigRational]) -> LogScalar {
    dot_q_ls(x, s)
}
