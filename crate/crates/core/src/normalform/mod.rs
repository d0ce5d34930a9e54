//! Reduction of a map without periodic points and with bounded
//! discontinuity growth to a product of restricted PL-homeomorphisms, up to
//! an iterate and an IET conjugacy.

mod decompose;
mod pair;
mod remov;

pub use decompose::{component_decomposition, li_normal_form, Component, LiDecomposition};
pub use pair::{pair_power, pair_property_check, pair_structure, Pair, PairStructure};
pub use remov::{reduce_to_unremovable, removal_conjugator, Reduction};

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::map::MapError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("pair property fails: {0}")]
    NotPair(String),
    #[error("pair {0} is not removable")]
    NotRemovable(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("structure check failed: {0}")]
    Structure(String),
}

impl NormalFormError {
    pub fn is_inconclusive(&self) -> bool {
        match self {
            NormalFormError::Dynamics(e) => e.is_inconclusive(),
            NormalFormError::Map(MapError::PieceGuard { .. }) => true,
            _ => false,
        }
    }
}
