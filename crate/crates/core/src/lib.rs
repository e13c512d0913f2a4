//! Closed-form construction and verification of cohomogeneity-one
//! quasi-Einstein metrics on circle bundles over products of Fano
//! Kähler–Einstein manifolds.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation: file formats, the command line and parallel sweeps live in
//! the companion `qem` crate.
//!
//! Layout:
//!
//! * [`bundle`]: discrete bundle data, hypothesis checks, sign vectors.
//! * [`genpoly`]: shifted generalized polynomials and exact rational
//!   polynomials.
//! * [`construct`]: consistency conditions, the three constructions and
//!   the shrinking closing condition.
//! * [`profile`]: the constructed metric and its evaluators.
//! * [`invariants`]: exact obstruction integrals.
//! * [`verify`]: residual substitution, boundary and completeness checks.

#![no_std]
#![warn(missing_debug_implementations)]
// Guards written as `!(x > 0.0)` also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bundle;
pub mod construct;
pub mod error;
pub mod genpoly;
pub mod invariants;
pub mod profile;
pub mod quad;
pub mod root;
pub mod verify;

mod dd;
mod math;
mod series;

pub use bundle::{
    enumerate_chi, validate_bundle, BundleSpec, Case, ChiVector, FanoFactor, Sign, ValidationReport,
};
pub use construct::{
    a_coeff, build_alpha, build_v, closing_integral, construct_expanding, construct_shrinking,
    construct_steady, kappa0_from_consistency, s_star_compact, Branch,
};
pub use error::{Error, ErrorKind, Result};
pub use genpoly::{Antiderivative, GenPoly, RationalPoly};
pub use invariants::{
    find_admissible_chi, futaki_integral, inv_integral, limit_infinity_scaled, limit_zero_integral,
    ObstructionKind, ObstructionResult,
};
pub use profile::MetricProfile;
pub use verify::{boundary_check, residuals, t_of_s, ResidualReport};
