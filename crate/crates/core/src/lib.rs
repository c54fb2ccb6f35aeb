//! Exact partition-ideal calculus on rectangular matrix spaces.
//!
//! The crate implements, with exact arithmetic wherever the mathematics is
//! exact, the combinatorial and analytic layers attached to the K-invariant
//! ideal theory of the matrix space `C^{r x s}`:
//!
//! - [`partitions`]: fixed-rank partitions, the containment order, step
//!   decompositions, truncation/hat constructions.
//! - [`ideals`]: supports of K-invariant ideals as minimal antichains, with
//!   sum, intersection, localization and the maximal fibre.
//! - [`determinantal`]: joint symbolic powers along the rank stratification
//!   (determinantal ideals), their minimal generating antichains, and the
//!   stratum vanishing-order law.
//! - [`poly`] and [`minors`]: a sparse exact polynomial engine over the
//!   matrix entries with minors, conical polynomials, Fischer-Fock inner
//!   product, Peirce normal projection, a Taylor vanishing-order oracle and
//!   the unitary action.
//! - [`peter_weyl`]: randomized orbit-span construction of the irreducible
//!   polynomial components, their reproducing kernels and kernel identities.
//! - [`kernel`]: rational Pochhammer/shift constants and truncated
//!   stratified kernel expansions.
//!
//! The default `parallel` feature runs the data-parallel inner loops on
//! rayon; disabling it selects sequential fallbacks with identical output.

pub mod determinantal;
mod exec;
pub mod ideals;
pub mod kernel;
pub mod linalg;
pub mod minors;
pub mod partitions;
pub mod peter_weyl;
pub mod poly;
pub mod scalar;

pub use determinantal::{
    in_support, minimal_generators, minimal_generators_report, order_on_stratum,
    reference_minimal_partitions, step1_generators, step1_spec, MinimalSetReport,
    SymbolicPowerSpec,
};
pub use ideals::IdealSupport;
pub use minors::{
    conical_poly, group_act, minor_poly, normal_project, vanishing_order, TriplePars,
};
pub use partitions::{Part, Partition, StepForm};
pub use poly::{Matrix, MatrixPolynomial, Monomial};
