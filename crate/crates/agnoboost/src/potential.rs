//! The piecewise-smooth boosting potential, its first two derivatives, and
//! the MadaBoost-style weighting used by the baseline boosters.
//!
//! The main potential is
//!
//! ```text
//! phi(z) = 2 - z             for z <= 0
//!          (z + 2) e^{-z}    for z > 0
//! ```
//!
//! which is convex, twice continuously differentiable, non-negative,
//! monotone decreasing, and 1-smooth. Its derivatives are
//!
//! ```text
//! phi'(z)  = -1 (z <= 0),  -(z+1) e^{-z} (z > 0)      in [-1, 0]
//! phi''(z) =  0 (z <= 0),   z e^{-z}     (z > 0)      in [0, 1/e]
//! ```
//!
//! All functions are generic over the scalar type; concrete code uses the
//! crate-level [`Real`](crate::Real) alias.

use num_traits::Float;
use thiserror::Error;

/// Scalar type the potential math is written against: `f32`, `f64`, or any
/// other IEEE-style float exposing `exp`.
pub trait Scalar: Float + num_traits::FromPrimitive {}
impl<T: Float + num_traits::FromPrimitive> Scalar for T {}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PotentialError {
    #[error("potential evaluated at non-finite margin")]
    NonFiniteInput,
}

/// Which potential a booster weights examples with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialKind {
    /// The smooth piecewise potential above; drives the sample-reuse booster.
    SmoothPiecewise,
    /// The MadaBoost potential `1 - z` / `e^{-z}`; only its derivative
    /// magnitude `min(1, e^{-z})` is used, as baseline example weights.
    MadaBoost,
}

/// Margins beyond this evaluate to exactly zero on the decaying branch;
/// the true values are below 1e-300 and only invite underflow noise.
const UNDERFLOW_CUTOFF: f64 = 700.0;

#[inline]
fn check_finite<T: Scalar>(z: T) -> Result<(), PotentialError> {
    if z.is_finite() {
        Ok(())
    } else {
        Err(PotentialError::NonFiniteInput)
    }
}

#[inline]
fn cutoff<T: Scalar>() -> T {
    T::from_f64(UNDERFLOW_CUTOFF).unwrap()
}

/// Potential value `phi(z)`. Non-negative for all finite `z`.
pub fn phi<T: Scalar>(z: T) -> Result<T, PotentialError> {
    check_finite(z)?;
    if z <= T::zero() {
        let two = T::one() + T::one();
        Ok(two - z)
    } else if z > cutoff() {
        Ok(T::zero())
    } else {
        let two = T::one() + T::one();
        Ok((z + two) * (-z).exp())
    }
}

/// First derivative `phi'(z)`, always in `[-1, 0]`; equals `-1` for `z <= 0`.
pub fn phi_prime<T: Scalar>(z: T) -> Result<T, PotentialError> {
    check_finite(z)?;
    if z <= T::zero() {
        Ok(-T::one())
    } else if z > cutoff() {
        Ok(T::zero())
    } else {
        Ok(-(z + T::one()) * (-z).exp())
    }
}

/// Second derivative `phi''(z)`, in `[0, 1/e]`; zero for `z <= 0`,
/// maximized at `z = 1`.
pub fn phi_second<T: Scalar>(z: T) -> Result<T, PotentialError> {
    check_finite(z)?;
    if z <= T::zero() || z > cutoff() {
        Ok(T::zero())
    } else {
        Ok(z * (-z).exp())
    }
}

/// MadaBoost example weight `min(1, e^{-z})`, the magnitude of the
/// MadaBoost potential's derivative. Used by the baseline boosters only.
pub fn madaboost_weight<T: Scalar>(z: T) -> Result<T, PotentialError> {
    check_finite(z)?;
    if z <= T::zero() {
        Ok(T::one())
    } else if z > cutoff() {
        Ok(T::zero())
    } else {
        Ok((-z).exp())
    }
}

impl PotentialKind {
    /// The example-weighting magnitude `|phi'(z)|` of this potential at
    /// margin `z`; this is what fractional relabeling schemes weight with.
    pub fn weight<T: Scalar>(self, z: T) -> Result<T, PotentialError> {
        match self {
            PotentialKind::SmoothPiecewise => Ok(-phi_prime(z)?),
            PotentialKind::MadaBoost => madaboost_weight(z),
        }
    }
}
