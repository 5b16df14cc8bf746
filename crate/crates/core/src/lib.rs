//! Exact-arithmetic toolkit for rational convex polytopes and linear
//! families of polytopes.
//!
//! The crate builds up in layers:
//!
//! - [`polytope`]: canonical H/V-representations, Minkowski sums, support
//!   functions, exact volumes;
//! - [`lattice`]: lattice-point counting, Ehrhart quasi-polynomials and
//!   reciprocity;
//! - [`fan`]: rational fans, normal fans, support numbers and virtual
//!   polytopes;
//! - [`family`]: linear families Δ: C → polytopes (toric, Gelfand-Zetlin,
//!   fibered, projected) with budgeted linearity certification;
//! - [`anticanonical`]: verification and search for anticanonical lattice
//!   parameters κ with N(Δ(γ−κ)) = N(Δ°(γ));
//! - [`algebra`]: the volume polynomial of a family and the graded algebra
//!   of differential operators modulo its annihilator.
//!
//! All arithmetic is exact over ℚ; every comparison in this crate is an
//! equality of rationals, never a tolerance.

pub mod algebra;
pub mod anticanonical;
pub mod error;
pub mod family;
pub mod fan;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod num;
pub mod polytope;

pub use error::{Error, Result};
pub use num::{Int, Rat};
pub use polytope::{facet_lattice_volume, ContainsMode, HalfSpace, Polytope};

/// Worker count for data-parallel enumeration loops (1 = sequential).
///
/// Set once by the CLI from `--jobs` / `POLYFAM_JOBS`; results are identical
/// for any value because all parallel reductions are order-independent sums.
pub fn set_jobs(n: usize) {
    JOBS.store(n.max(1), std::sync::atomic::Ordering::Relaxed);
}

pub(crate) fn jobs() -> usize {
    JOBS.load(std::sync::atomic::Ordering::Relaxed)
}

static JOBS: std::sync::atomic::AtomicUsize = std::sync::atomic::AtomicUsize::new(1);
