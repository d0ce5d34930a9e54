use serde::{Deserialize, Serialize};

use crate::numbers::Scalar;

use super::Aiet;

/// One-sided values and derivatives of a map at a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sided {
    pub f_plus: Scalar,
    pub f_minus: Scalar,
    pub d_plus: Scalar,
    pub d_minus: Scalar,
    /// `f₊(x) − f₋(x)`
    pub delta: Scalar,
    /// `D₊f(x) / D₋f(x)`
    pub sigma: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakPoint {
    pub x: Scalar,
    pub delta: Scalar,
    pub sigma: Scalar,
}

impl BreakPoint {
    pub fn in_bp0(&self) -> bool {
        self.x.is_zero() || !self.delta.is_zero()
    }

    pub fn in_bp1(&self) -> bool {
        self.x.is_zero() || !self.sigma.is_one()
    }
}

/// All break points of a map with their value and derivative jumps, sorted.
/// The point `0` is always listed first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakData {
    pub points: Vec<BreakPoint>,
}

impl BreakData {
    pub fn bp(&self) -> Vec<Scalar> {
        self.points.iter().map(|p| p.x.clone()).collect()
    }

    pub fn bp0(&self) -> Vec<Scalar> {
        self.points.iter().filter(|p| p.in_bp0()).map(|p| p.x.clone()).collect()
    }

    pub fn bp1(&self) -> Vec<Scalar> {
        self.points.iter().filter(|p| p.in_bp1()).map(|p| p.x.clone()).collect()
    }

    pub fn delta(&self, x: &Scalar) -> Option<&Scalar> {
        self.points.iter().find(|p| p.x == *x).map(|p| &p.delta)
    }

    pub fn sigma(&self, x: &Scalar) -> Option<&Scalar> {
        self.points.iter().find(|p| p.x == *x).map(|p| &p.sigma)
    }
}

impl Aiet {
    /// One-sided data at `x ∈ [0, 1)`.
    ///
    /// At `0` the left data is read at `1⁻` with `f₋(1)` taken modulo 1, so a
    /// map that is continuous as a circle map has `Δ(0) = 0`.
    pub fn eval_sided(&self, x: &Scalar) -> Sided {
        let i = self.piece_index(x);
        let right = &self.pieces[i];
        let f_plus = right.apply(x);
        let (f_minus, d_minus) = if x.is_zero() {
            let last = self.pieces.last().expect("nonempty");
            let v = last.apply(&Scalar::one());
            (if v.is_one() { Scalar::zero() } else { v }, last.slope.clone())
        } else {
            let l = &self.pieces[self.left_piece_index(x)];
            (l.apply(x), l.slope.clone())
        };
        let delta = &f_plus - &f_minus;
        let sigma = &right.slope / &d_minus;
        Sided { f_plus, f_minus, d_plus: right.slope.clone(), d_minus, delta, sigma }
    }

    /// `Δ_f(x)`.
    pub fn delta_at(&self, x: &Scalar) -> Scalar {
        self.eval_sided(x).delta
    }

    /// `σ_f(x)`.
    pub fn sigma_at(&self, x: &Scalar) -> Scalar {
        self.eval_sided(x).sigma
    }

    pub fn breakpoints(&self) -> BreakData {
        let points = self
            .pieces
            .iter()
            .map(|p| {
                let s = self.eval_sided(&p.left);
                BreakPoint { x: p.left.clone(), delta: s.delta, sigma: s.sigma }
            })
            .collect();
        BreakData { points }
    }

    /// `#BP(f)`, counting `0`.
    pub fn bp_count(&self) -> usize {
        self.pieces.len()
    }

    /// `#BP₀(f)`, counting `0`.
    pub fn bp0_count(&self) -> usize {
        1 + self.pieces[1..].iter().filter(|p| !self.delta_at(&p.left).is_zero()).count()
    }

    /// `#BP₁(f)`, counting `0`.
    pub fn bp1_count(&self) -> usize {
        1 + self.pieces[1..].iter().filter(|p| !self.sigma_at(&p.left).is_one()).count()
    }

    /// Whether `x` is a break point (value or derivative), `0` included.
    pub fn is_break(&self, x: &Scalar) -> bool {
        self.pieces.binary_search_by(|p| p.left.cmp(x)).is_ok()
    }

    /// Whether `x ∈ BP₀(f)`, `0` included.
    pub fn is_bp0(&self, x: &Scalar) -> bool {
        x.is_zero() || (self.is_break(x) && !self.delta_at(x).is_zero())
    }
}
