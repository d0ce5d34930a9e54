use serde::{Deserialize, Serialize};

use crate::map::DEFAULT_PIECE_GUARD;

/// Horizons, tolerances and guards shared by every analysis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Orbit exploration horizon; `None` means `50·#BP(f)²`.
    pub horizon: Option<usize>,
    /// Largest period searched for periodic points.
    pub max_period: usize,
    /// Largest piece count any composition may produce.
    pub guard_pieces: usize,
    /// Tolerance between wrap-count and closed-form rotation numbers.
    pub rho_tol: f64,
    /// Tolerance for the conjugacy check against a rotation.
    pub bosh_tol: f64,
    /// Orbit length for drift and visit-frequency estimates.
    pub drift_n: usize,
    /// Orbit length for wrap-count rotation numbers.
    pub rotation_n: usize,
    /// Orbits stay exact until a point needs more bits than this.
    pub exact_bits: u64,
    /// Fixed-point precision used once an orbit leaves exact mode.
    pub dyadic_bits: u32,
    /// Iterates tried by the finite-order fast path.
    pub finite_order_probe: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            horizon: None,
            max_period: 64,
            guard_pieces: DEFAULT_PIECE_GUARD,
            rho_tol: 1e-4,
            bosh_tol: 1e-9,
            drift_n: 100_000,
            rotation_n: 1_000_000,
            exact_bits: 1 << 18,
            dyadic_bits: 256,
            finite_order_probe: 64,
        }
    }
}

impl Config {
    /// Horizon to use for a map with `bp_count` break points.
    pub fn horizon_for(&self, bp_count: usize) -> usize {
        self.horizon.unwrap_or(50 * bp_count * bp_count).max(8)
    }
}
