use serde::{Deserialize, Serialize};

use crate::numbers::Scalar;

use super::Aiet;

/// Structural classes a map can belong to; a map may satisfy several.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Iet,
    PlHomeo,
    RestrictedPlHomeo { a: Scalar, b: Scalar },
    RestrictedRotation { a: Scalar, b: Scalar, delta: Scalar },
    General,
}

impl Aiet {
    /// Interior points where `f` is discontinuous as an interval map.
    pub fn interior_discontinuities(&self) -> Vec<Scalar> {
        self.pieces[1..]
            .iter()
            .filter(|p| !self.delta_at(&p.left).is_zero())
            .map(|p| p.left.clone())
            .collect()
    }

    /// Whether `f` induces an orientation-preserving homeomorphism of the
    /// circle: at most one interior discontinuity, and that one a wrap.
    pub fn is_pl_homeo(&self) -> bool {
        let jumps = self.interior_discontinuities();
        match jumps.as_slice() {
            [] => true,
            [x] => {
                let s = self.eval_sided(x);
                s.f_plus.is_zero() && s.f_minus.is_one() && self.delta_at(&Scalar::zero()).is_zero()
            }
            _ => false,
        }
    }

    pub fn is_iet(&self) -> bool {
        self.pieces.iter().all(|p| p.slope.is_one())
    }

    /// If `f` is a rotation `x ↦ x + α mod 1`, its angle.
    pub fn rotation_angle(&self) -> Option<Scalar> {
        if !self.is_iet() || !self.is_pl_homeo() {
            return None;
        }
        Some(self.pieces[0].intercept.clone())
    }

    /// Convex hull of the support, if nonempty.
    pub fn support_hull(&self) -> Option<(Scalar, Scalar)> {
        let s = self.support();
        Some((s.first()?.0.clone(), s.last()?.1.clone()))
    }

    pub fn classify_shape(&self) -> Vec<Shape> {
        let mut out = Vec::new();
        if self.is_iet() {
            out.push(Shape::Iet);
        }
        if self.is_pl_homeo() {
            out.push(Shape::PlHomeo);
        }
        if let Some((a, b)) = self.support_hull() {
            if let Ok(r) = self.restrict(&a, &b) {
                if r.is_pl_homeo() {
                    out.push(Shape::RestrictedPlHomeo { a: a.clone(), b: b.clone() });
                    if r.is_iet() {
                        let delta = self.eval(&a) - &a;
                        out.push(Shape::RestrictedRotation { a, b, delta });
                    }
                }
            }
        }
        if out.is_empty() {
            out.push(Shape::General);
        }
        out
    }

    /// Restricted rotation data `(a, b, δ)` when `f` is one.
    pub fn as_restricted_rotation(&self) -> Option<(Scalar, Scalar, Scalar)> {
        self.classify_shape().into_iter().find_map(|s| match s {
            Shape::RestrictedRotation { a, b, delta } => Some((a, b, delta)),
            _ => None,
        })
    }

    pub fn is_restricted_pl_homeo(&self) -> bool {
        self.is_identity()
            || self.classify_shape().iter().any(|s| matches!(s, Shape::RestrictedPlHomeo { .. }))
    }
}
