//! Affine interval exchange transformations of `[0, 1)`.

mod breaks;
mod families;
mod ops;
mod shape;
mod text;

pub use breaks::{BreakData, BreakPoint, Sided};
pub use shape::Shape;
pub use text::parse_pieces;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numbers::{NumberError, Scalar};

/// Default ceiling on the number of pieces any composition may produce.
pub const DEFAULT_PIECE_GUARD: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("a map needs at least one piece")]
    Empty,
    #[error("first piece must start at 0, found {0}")]
    FirstLeftNotZero(Scalar),
    #[error("left endpoints must increase strictly inside [0,1) (piece {0})")]
    LeftsNotIncreasing(usize),
    #[error("piece {0} has non-positive slope")]
    NonPositiveSlope(usize),
    #[error("image of piece {0} leaves [0,1)")]
    ImageOutOfRange(usize),
    #[error("images overlap or leave a gap near {0}: not a bijection of [0,1)")]
    NotBijective(Scalar),
    #[error("{0}")]
    Number(#[from] NumberError),
    #[error("piece guard exceeded: {pieces} pieces > limit {limit}")]
    PieceGuard { pieces: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// The law `x ↦ slope·x + intercept` on `[left, next left)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Piece {
    pub left: Scalar,
    pub slope: Scalar,
    pub intercept: Scalar,
}

impl Piece {
    pub fn new(left: Scalar, slope: Scalar, intercept: Scalar) -> Self {
        Piece { left, slope, intercept }
    }

    pub fn apply(&self, x: &Scalar) -> Scalar {
        &self.slope * x + &self.intercept
    }

    fn same_law(&self, other: &Piece) -> bool {
        self.slope == other.slope && self.intercept == other.intercept
    }

    fn is_identity_law(&self) -> bool {
        self.slope.is_one() && self.intercept.is_zero()
    }
}

/// A validated AIET in canonical form.
///
/// Canonical form merges adjacent pieces that share an affine law, so two maps
/// are equal as functions exactly when their piece lists are equal, and every
/// interior left endpoint is a break point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawAiet", into = "RawAiet")]
pub struct Aiet {
    pieces: Vec<Piece>,
    radicand: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawAiet {
    pieces: Vec<Piece>,
}

impl TryFrom<RawAiet> for Aiet {
    type Error = MapError;
    fn try_from(raw: RawAiet) -> Result<Self, MapError> {
        Aiet::from_pieces(raw.pieces)
    }
}

impl From<Aiet> for RawAiet {
    fn from(f: Aiet) -> Self {
        RawAiet { pieces: f.pieces }
    }
}

fn field_of<'a>(values: impl IntoIterator<Item = &'a Scalar>) -> Result<Option<u64>, NumberError> {
    let mut d: Option<u64> = None;
    for v in values {
        if let Some(e) = v.radicand() {
            match d {
                Some(x) if x != e => return Err(NumberError::IncompatibleRadicands(x, e)),
                _ => d = Some(e),
            }
        }
    }
    Ok(d)
}

impl Aiet {
    /// Validate and canonicalize a piece list.
    pub fn from_pieces(pieces: Vec<Piece>) -> Result<Self, MapError> {
        if pieces.is_empty() {
            return Err(MapError::Empty);
        }
        let radicand = field_of(pieces.iter().flat_map(|p| [&p.left, &p.slope, &p.intercept]))?;
        let zero = Scalar::zero();
        let one = Scalar::one();
        if pieces[0].left != zero {
            return Err(MapError::FirstLeftNotZero(pieces[0].left.clone()));
        }
        for i in 1..pieces.len() {
            if pieces[i].left <= pieces[i - 1].left || pieces[i].left >= one {
                return Err(MapError::LeftsNotIncreasing(i));
            }
        }
        let mut images = Vec::with_capacity(pieces.len());
        for (i, p) in pieces.iter().enumerate() {
            if !p.slope.is_positive() {
                return Err(MapError::NonPositiveSlope(i));
            }
            let right = pieces.get(i + 1).map_or(&one, |q| &q.left);
            let lo = p.apply(&p.left);
            let hi = p.apply(right);
            if lo < zero || hi > one {
                return Err(MapError::ImageOutOfRange(i));
            }
            images.push((lo, hi));
        }
        images.sort_by(|a, b| a.0.cmp(&b.0));
        let mut cursor = zero;
        for (lo, hi) in images {
            if lo != cursor {
                return Err(MapError::NotBijective(lo.min(cursor)));
            }
            cursor = hi;
        }
        if cursor != one {
            return Err(MapError::NotBijective(cursor));
        }
        Ok(Self::canonical(pieces, radicand))
    }

    /// Build from pieces already known to form a bijection (internal results).
    pub(crate) fn from_trusted(pieces: Vec<Piece>, radicand: Option<u64>) -> Self {
        let f = Self::canonical(pieces, radicand);
        debug_assert!(Aiet::from_pieces(f.pieces.clone()).is_ok(), "invalid internal map");
        f
    }

    fn canonical(pieces: Vec<Piece>, radicand: Option<u64>) -> Self {
        let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match out.last() {
                Some(q) if q.same_law(&p) => {}
                _ => out.push(p),
            }
        }
        let irrational = out
            .iter()
            .any(|p| !p.left.is_rational() || !p.slope.is_rational() || !p.intercept.is_rational());
        Aiet { pieces: out, radicand: radicand.filter(|_| irrational) }
    }

    pub fn identity() -> Self {
        Aiet {
            pieces: vec![Piece::new(Scalar::zero(), Scalar::one(), Scalar::zero())],
            radicand: None,
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Number of pieces; in canonical form this is also `#BP(f)` (with `0`).
    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// Left endpoints of all pieces.
    pub fn lefts(&self) -> impl Iterator<Item = &Scalar> {
        self.pieces.iter().map(|p| &p.left)
    }

    /// The quadratic field the data lives in, if any.
    pub fn radicand(&self) -> Option<u64> {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_none()
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].is_identity_law()
    }

    /// Right endpoint of piece `i`.
    pub fn right(&self, i: usize) -> Scalar {
        self.pieces.get(i + 1).map_or_else(Scalar::one, |p| p.left.clone())
    }

    /// Index of the piece containing `x ∈ [0, 1)`.
    pub fn piece_index(&self, x: &Scalar) -> usize {
        let pos = self.pieces.partition_point(|p| p.left <= *x);
        pos.saturating_sub(1)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.pieces[self.piece_index(x)].apply(x)
    }

    /// Left limit `f₋(y)` for `y ∈ (0, 1]`.
    pub fn eval_left(&self, y: &Scalar) -> Scalar {
        self.pieces[self.left_piece_index(y)].apply(y)
    }

    /// Index of the piece governing the left limit at `y ∈ [0, 1]`; `0` and `1`
    /// both refer to the left side of `1`.
    pub fn left_piece_index(&self, y: &Scalar) -> usize {
        if y.is_zero() {
            return self.pieces.len() - 1;
        }
        self.pieces.partition_point(|p| p.left < *y) - 1
    }

    /// `D₋f(y)` for `y ∈ [0, 1]`, read on the circle at `0`.
    pub fn left_slope_at(&self, y: &Scalar) -> &Scalar {
        &self.pieces[self.left_piece_index(y)].slope
    }

    /// `D₊f(x)` for `x ∈ [0, 1)`.
    pub fn right_slope_at(&self, x: &Scalar) -> &Scalar {
        &self.pieces[self.piece_index(x)].slope
    }

    /// Sorted distinct slopes.
    pub fn slopes(&self) -> Vec<Scalar> {
        let mut s: Vec<Scalar> = self.pieces.iter().map(|p| p.slope.clone()).collect();
        s.sort();
        s.dedup();
        s
    }

    /// Maximal half-open intervals where `f` differs from the identity.
    pub fn support(&self) -> Vec<(Scalar, Scalar)> {
        let mut out: Vec<(Scalar, Scalar)> = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            if p.is_identity_law() {
                continue;
            }
            let r = self.right(i);
            match out.last_mut() {
                Some(last) if last.1 == p.left => last.1 = r,
                _ => out.push((p.left.clone(), r)),
            }
        }
        out
    }

    /// Whether a scalar can be combined with this map's data.
    pub fn compatible(&self, x: &Scalar) -> bool {
        match (self.radicand, x.radicand()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    pub(crate) fn join_radicand(&self, other: &Aiet) -> Result<Option<u64>, MapError> {
        match (self.radicand, other.radicand) {
            (Some(a), Some(b)) if a != b => Err(NumberError::IncompatibleRadicands(a, b).into()),
            (a, b) => Ok(a.or(b)),
        }
    }

    pub(crate) fn check_point(&self, x: &Scalar) -> Result<(), MapError> {
        if !self.compatible(x) {
            let d = self.radicand.unwrap_or(0);
            return Err(NumberError::IncompatibleRadicands(d, x.radicand().unwrap_or(0)).into());
        }
        if x.is_negative() || *x >= Scalar::one() {
            return Err(MapError::InvalidParameter(format!("point {x} outside [0,1)")));
        }
        Ok(())
    }

    /// Total bit size of all piece data; a cost proxy for exact arithmetic.
    pub fn bit_size(&self) -> u64 {
        self.pieces
            .iter()
            .map(|p| p.left.bit_size() + p.slope.bit_size() + p.intercept.bit_size())
            .sum()
    }
}

#[cfg(test)]
mod tests;
