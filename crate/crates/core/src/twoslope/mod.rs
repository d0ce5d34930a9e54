//! PL conjugation of bounded-growth PL-homeomorphisms to two-slope maps,
//! and numerical analysis of two-slope maps: rotation numbers, visit
//! frequencies, the explicit conjugacy to a rotation and exponent drift.

mod jumps;
pub(crate) mod orbit;
mod stats;

pub use jumps::{global_jump_product, minakawa_conjugate, pl_from_jumps, JumpSpec, Minakawa, Normalization};
pub use stats::{
    analyze_two_slope, birkhoff_visits, exponent_drift, rotation_number, two_slope_parameters, verify_boshernitzan,
    BoshReport, DriftCoordinate, DriftReport, RotationEstimate, TwoSlopeAnalysis, VisitCounts,
};

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::map::MapError;
use crate::numbers::{NumberError, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwoSlopeError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Number(#[from] NumberError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("prescribed jumps multiply to {0}, not 1")]
    JumpProduct(Scalar),
    #[error("deviation {deviation:e} exceeds tolerance {tol:e}")]
    Tolerance { deviation: f64, tol: f64 },
    #[error("structure check failed: {0}")]
    Structure(String),
}

impl TwoSlopeError {
    pub fn is_inconclusive(&self) -> bool {
        match self {
            TwoSlopeError::Dynamics(e) => e.is_inconclusive(),
            TwoSlopeError::Map(MapError::PieceGuard { .. }) => true,
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests;
