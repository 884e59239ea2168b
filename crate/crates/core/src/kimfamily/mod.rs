//! The conjugated operator of the one-parameter fourth-order family on
//! quadratic polynomials: construction, fixed points and their stability,
//! free critical points, and the un-conjugated iteration used to check the
//! conjugacy.

mod critical;
mod fixed;
mod kim;
mod operator;
mod original;

use num_complex::Complex64;
use thiserror::Error;

use crate::numcore::RootError;

pub use critical::{
    closed_form_critical, critical_points, pair_reciprocals, select_critical, sixteen_limit_pair,
    CriticalProvenance, CriticalSet, PlaneSelector,
};
pub(crate) use fixed::compare_points;
pub use fixed::{
    fixed_points, fixed_points_of, FixedPointKind, FixedPointOptions, FixedPointReport,
};
pub use kim::{
    build_operator, classify_one, critical_quartic, multiplier_at_one, KimParameter,
    OneClassification, SPECIAL_LAMBDA_TOL,
};
pub use operator::{
    ApplyError, OperatorError, RationalOperator, COMMON_ROOT_TOL, MAX_DEFLATION_LEVELS,
};
pub use original::{mobius, mobius_inverse, original_step, scaling_conjugacy_check, StepError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KimError {
    #[error("z = 1 is not a fixed point at lambda = 16")]
    UndefinedAtSixteen,
    #[error("closed-form multiplier {closed} disagrees with the evaluated derivative {evaluated}")]
    MultiplierMismatch {
        closed: Complex64,
        evaluated: Complex64,
    },
    #[error("lambda = 0 has no free critical points")]
    NoFreeCritical,
    #[error("operator is the identity map, every point is fixed")]
    IdentityMap,
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error(transparent)]
    Apply(#[from] ApplyError),
}
