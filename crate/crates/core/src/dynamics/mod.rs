//! Periodic structure, break-point orbit segments and the bounded/linear
//! growth dichotomy for `#BP(fⁿ)`.

mod growth;
mod orbits;
mod periodic;

pub use growth::{bp_count_sequence, classify_bp_growth, classify_from_orbits, lemma_delta2_check, GrowthClass, WitnessKind};
pub use orbits::{orbit_segments, OrbitData, OrbitSegment, PeriodicBreak};
pub use periodic::{fixed_points, periodic_structure, FixedSet, PeriodicStructure, SemiHyperbolic, Side};

use thiserror::Error;

use crate::map::MapError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("periodic set did not stabilize within period {max_period}")]
    PeriodNotStable { max_period: usize, partial: Box<PeriodicStructure> },
    #[error("break-point orbits not separated within horizon {horizon}: {detail}")]
    HorizonExceeded { horizon: usize, detail: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl DynamicsError {
    /// Whether the failure is a horizon/search limit rather than bad input.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            DynamicsError::PeriodNotStable { .. }
                | DynamicsError::HorizonExceeded { .. }
                | DynamicsError::Map(MapError::PieceGuard { .. })
        )
    }
}
