use serde::{Deserialize, Serialize};

use crate::map::Aiet;
use crate::numbers::Scalar;

use super::{orbit_segments, DynamicsError, OrbitData, OrbitSegment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// `Δ_{f^{N+1}}(a) ≠ 0`: discontinuities multiply.
    Discontinuity,
    /// `Π_a ≠ 1`: derivative jumps multiply.
    Slope,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthClass {
    /// `#BP(fⁿ) ≤ bound` for every `n`.
    Bounded { bound: usize },
    /// `#BP(fⁿ) ≥ n − offset` for every `n > offset`.
    Linear { witness: OrbitSegment, offset: usize, reason: WitnessKind },
}

impl GrowthClass {
    pub fn is_bounded(&self) -> bool {
        matches!(self, GrowthClass::Bounded { .. })
    }
}

/// Decide whether `#BP(fⁿ)` is bounded or grows linearly from orbit data.
pub fn classify_from_orbits(data: &OrbitData) -> GrowthClass {
    if let Some(seg) = data.segments.iter().find(|s| !s.delta_inv.is_zero()) {
        return GrowthClass::Linear { witness: seg.clone(), offset: seg.length, reason: WitnessKind::Discontinuity };
    }
    if let Some(seg) = data.segments.iter().find(|s| !s.pi_inv.is_one()) {
        return GrowthClass::Linear { witness: seg.clone(), offset: seg.length, reason: WitnessKind::Slope };
    }
    let bound = data.segments.iter().map(|s| 2 * s.length).sum::<usize>()
        + data.periodic.iter().map(|p| p.period).sum::<usize>();
    GrowthClass::Bounded { bound: bound.max(1) }
}

/// Classify the growth of `#BP(fⁿ)`.
pub fn classify_bp_growth(f: &Aiet, horizon: usize, guard: usize) -> Result<GrowthClass, DynamicsError> {
    Ok(classify_from_orbits(&orbit_segments(f, horizon, guard)?))
}

/// `#BP(fⁿ)` for `n = 1..=n_max`, by repeated composition.
pub fn bp_count_sequence(f: &Aiet, n_max: usize, guard: usize) -> Result<Vec<usize>, DynamicsError> {
    let mut out = Vec::with_capacity(n_max);
    let mut g = Aiet::identity();
    for _ in 0..n_max {
        g = f.compose_guarded(&g, guard)?;
        out.push(g.bp_count());
    }
    Ok(out)
}

/// Both sides of `Δ_{fⁿ}(f^{-k}(a)) = Δ_{f^{n-k}}(a)`, computed independently.
pub fn lemma_delta2_check(
    f: &Aiet,
    a: &Scalar,
    n: usize,
    k: usize,
    guard: usize,
) -> Result<(Scalar, Scalar), DynamicsError> {
    if n == 0 || k >= n {
        return Err(DynamicsError::Precondition(format!("need 0 ≤ k ≤ n − 1, got n={n}, k={k}")));
    }
    f.check_point(a)?;
    let fn_ = f.power_guarded(n as i64, guard)?;
    let back = f.power_guarded(-(k as i64), guard)?;
    let lhs = fn_.delta_at(&back.eval(a));
    let rhs = f.power_guarded((n - k) as i64, guard)?.delta_at(a);
    Ok((lhs, rhs))
}
