use crate::numbers::Scalar;

use super::{Aiet, MapError, Piece};

fn bad(msg: impl Into<String>) -> MapError {
    MapError::InvalidParameter(msg.into())
}

impl Aiet {
    /// Rotation `x ↦ x + α mod 1`.
    pub fn rotation(alpha: &Scalar) -> Result<Aiet, MapError> {
        let one = Scalar::one();
        if alpha.is_negative() || *alpha >= one {
            return Err(bad(format!("rotation angle {alpha} outside [0,1)")));
        }
        if alpha.is_zero() {
            return Ok(Aiet::identity());
        }
        Aiet::from_pieces(vec![
            Piece::new(Scalar::zero(), one.clone(), alpha.clone()),
            Piece::new(&one - alpha, one.clone(), alpha - &one),
        ])
    }

    /// Identity outside `[a, b)` and rotation by `δ` inside.
    pub fn restricted_rotation(a: &Scalar, b: &Scalar, delta: &Scalar) -> Result<Aiet, MapError> {
        if a.is_negative() || !(a < b) || *b > Scalar::one() {
            return Err(bad(format!("need 0 ≤ a < b ≤ 1, got a={a}, b={b}")));
        }
        let len = b - a;
        if !delta.is_positive() || *delta >= len {
            return Err(bad(format!("need 0 < δ < b − a, got δ={delta}")));
        }
        let rot = Aiet::rotation(&(delta / &len))?;
        rot.embed(a, b)
    }

    /// IET cutting `[0,1)` into intervals of the given lengths and placing
    /// interval `i` at position `permutation[i]` (1-based).
    pub fn iet_from_lengths(permutation: &[usize], lengths: &[Scalar]) -> Result<Aiet, MapError> {
        let n = lengths.len();
        if n == 0 || permutation.len() != n {
            return Err(bad("permutation and lengths must have the same nonzero length"));
        }
        let mut seen = vec![false; n];
        for &t in permutation {
            if t == 0 || t > n || seen[t - 1] {
                return Err(bad(format!("invalid permutation {permutation:?}")));
            }
            seen[t - 1] = true;
        }
        if lengths.iter().any(|l| !l.is_positive()) {
            return Err(bad("lengths must be positive"));
        }
        let total = lengths.iter().try_fold(Scalar::zero(), |acc, l| acc.checked_add(l))?;
        if !total.is_one() {
            return Err(bad(format!("lengths sum to {total}, not 1")));
        }
        // Target start of each interval: total length of intervals placed before it.
        let mut pieces = Vec::with_capacity(n);
        let mut left = Scalar::zero();
        for i in 0..n {
            let mut target = Scalar::zero();
            for k in 0..n {
                if permutation[k] < permutation[i] {
                    target = target + &lengths[k];
                }
            }
            pieces.push(Piece::new(left.clone(), Scalar::one(), &target - &left));
            left = left + &lengths[i];
        }
        Aiet::from_pieces(pieces)
    }

    /// Two-slope circle map with slope `λ1` on `[0, y*)`, `λ2` on `[y*, 1)` and
    /// `B(y*) = 0`.
    pub fn two_slope_map(lambda1: &Scalar, lambda2: &Scalar) -> Result<Aiet, MapError> {
        if !lambda1.is_positive() || !lambda2.is_positive() {
            return Err(bad("slopes must be positive"));
        }
        let one = Scalar::one();
        if lambda1.is_one() && lambda2.is_one() {
            return Ok(Aiet::identity());
        }
        let s1 = lambda1.checked_sub(&one)?;
        let s2 = lambda2.checked_sub(&one)?;
        if !(&s1 * &s2).is_negative() {
            return Err(bad(format!(
                "slopes {lambda1}, {lambda2} admit no two-slope circle homeomorphism"
            )));
        }
        let c = lambda2 * &s1 / (lambda1 - lambda2);
        let y_star = (&one - &c) / lambda1;
        let beta2 = -(lambda2 * &y_star);
        Aiet::from_pieces(vec![
            Piece::new(Scalar::zero(), lambda1.clone(), c),
            Piece::new(y_star, lambda2.clone(), beta2),
        ])
    }
}
