//! Lower bounds on word length of iterates (certificates that an element is
//! undistorted), the full normal-form pipeline for maps with periodic
//! regions, the classifier for rational maps and checks for the relations
//! of Baumslag-Solitar and nilpotent groups.

mod certs;
mod relations;
mod theorem;
mod words;

pub use certs::{
    bp_growth_certificate, drift_certificate, semi_hyperbolic_certificate, Certificate, CertificateKind, DriftCandidate,
    EmpiricalParams, NotApplicable, Witness,
};
pub use relations::{
    bs_obstruction, bs_relation_check, nilpotent_commutator_check, restricted_rotation_components, BsObstruction,
    NilpotentReport, RotationComponent,
};
pub use theorem::{
    classify_rational, normal_form_theorem_th, split_periodic, ComponentKind, NormalFormTh, PeriodicSplit,
    RationalVerdict, ThComponent, ThOutcome,
};
pub use words::{ball_word_lengths, word_evaluate, GeneratingSet, MAX_BALL_RADIUS};

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::map::MapError;
use crate::normalform::NormalFormError;
use crate::numbers::NumberError;
use crate::twoslope::TwoSlopeError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistortionError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error(transparent)]
    TwoSlope(#[from] TwoSlopeError),
    #[error(transparent)]
    Number(#[from] NumberError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("structure check failed: {0}")]
    Structure(String),
    #[error("ball enumeration exceeded {0} elements")]
    BallGuard(usize),
}

impl DistortionError {
    pub fn is_inconclusive(&self) -> bool {
        match self {
            DistortionError::Map(MapError::PieceGuard { .. }) | DistortionError::BallGuard(_) => true,
            DistortionError::Dynamics(e) => e.is_inconclusive(),
            DistortionError::NormalForm(e) => e.is_inconclusive(),
            DistortionError::TwoSlope(e) => e.is_inconclusive(),
            _ => false,
        }
    }
}
