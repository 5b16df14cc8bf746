//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the kernel.
///
/// Variants are named after the operation contract they guard; callers that
/// need exit-code mapping (the CLI) match on the variant, not the message.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("half-space system has a recession direction {0:?}; the region is unbounded")]
    UnboundedRegion(Vec<i64>),
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("operation requires a nonempty polytope")]
    EmptyPolytope,
    #[error("scaling factor must be nonnegative")]
    NegativeScalar,
    #[error("polytope is not full-dimensional (dim {dim} in ambient {ambient})")]
    NotFullDimensional { dim: usize, ambient: usize },
    #[error("facet does not lie in a hyperplane with the given normal")]
    NotInHyperplane,
    #[error("Ehrhart holdout dilation m={0} disagrees with the fitted constituent (wrong period?)")]
    HoldoutMismatch(i64),
    #[error("fan is not complete")]
    IncompleteFan,
    #[error("polytope is not normal to the fan")]
    NotNormal,
    #[error("virtual polytopes live on different fans")]
    FanMismatch,
    #[error("no realization found within offset bound {0}")]
    NoRealizationFound(u32),
    #[error("parameter lies outside the family cone")]
    OutsideCone,
    #[error("fan is not simplicial")]
    FanNotSimplicial,
    #[error("fan is not complete")]
    FanNotComplete,
    #[error("base family fan is not invariant under coordinate permutations")]
    FanNotWeylInvariant,
    #[error("fiber over the projected cone is unbounded")]
    UnboundedFiber,
    #[error("family linearity has not been certified")]
    LinearityNotCertified,
    #[error("kappa is not a lattice point of the parameter lattice")]
    KappaNotInLattice,
    #[error("kappa is not in the interior of the parameter cone")]
    KappaNotInteriorOfCone,
    #[error("two anticanonical candidates survive the budget: {0:?} and {1:?} (budget too small)")]
    UniquenessViolation(Vec<String>, Vec<String>),
    #[error("interpolation nodes are not in general position after {0} resamples")]
    SingularInterpolation(u32),
    #[error("the zero polynomial has no associated graded algebra")]
    ZeroPolynomial,
    #[error("support-number embedding of the parameter space is not linear")]
    EmbeddingNotLinear,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
