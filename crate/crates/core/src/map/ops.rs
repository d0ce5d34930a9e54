use crate::numbers::Scalar;

use super::{Aiet, MapError, Piece, DEFAULT_PIECE_GUARD};

impl Aiet {
    /// `self ∘ g`: apply `g` first.
    pub fn compose(&self, g: &Aiet) -> Result<Aiet, MapError> {
        self.compose_guarded(g, DEFAULT_PIECE_GUARD)
    }

    pub fn compose_guarded(&self, g: &Aiet, guard: usize) -> Result<Aiet, MapError> {
        let radicand = self.join_radicand(g)?;
        let mut out: Vec<Piece> = Vec::with_capacity(self.pieces.len() + g.pieces.len());
        for (j, gp) in g.pieces.iter().enumerate() {
            let lo = gp.apply(&gp.left);
            let hi = gp.apply(&g.right(j));
            let mut k = self.piece_index(&lo);
            let mut left = gp.left.clone();
            loop {
                let fp = &self.pieces[k];
                let law_slope = &fp.slope * &gp.slope;
                let law_intercept = &fp.slope * &gp.intercept + &fp.intercept;
                let piece = Piece::new(left, law_slope, law_intercept);
                match out.last() {
                    Some(q) if q.same_law(&piece) => {}
                    _ => out.push(piece),
                }
                if out.len() > guard {
                    return Err(MapError::PieceGuard { pieces: out.len(), limit: guard });
                }
                k += 1;
                match self.pieces.get(k) {
                    Some(next) if next.left < hi => {
                        // preimage of the next break of `self` under this piece of g
                        left = (&next.left - &gp.intercept) / &gp.slope;
                    }
                    _ => break,
                }
            }
        }
        Ok(Aiet::from_trusted(out, radicand))
    }

    pub fn inverse(&self) -> Aiet {
        let mut inv: Vec<Piece> = self
            .pieces
            .iter()
            .map(|p| {
                let slope = p.slope.recip().expect("positive slope");
                let intercept = -(&p.intercept * &slope);
                Piece::new(p.apply(&p.left), slope, intercept)
            })
            .collect();
        inv.sort_by(|a, b| a.left.cmp(&b.left));
        Aiet::from_trusted(inv, self.radicand)
    }

    /// `fⁿ` for any integer `n`, by repeated composition.
    pub fn power(&self, n: i64) -> Result<Aiet, MapError> {
        self.power_guarded(n, DEFAULT_PIECE_GUARD)
    }

    pub fn power_guarded(&self, n: i64, guard: usize) -> Result<Aiet, MapError> {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Aiet::identity();
        for _ in 0..n.unsigned_abs() {
            acc = base.compose_guarded(&acc, guard)?;
        }
        Ok(acc)
    }

    /// `h ∘ self ∘ h⁻¹`.
    pub fn conjugate(&self, h: &Aiet) -> Result<Aiet, MapError> {
        self.conjugate_guarded(h, DEFAULT_PIECE_GUARD)
    }

    pub fn conjugate_guarded(&self, h: &Aiet, guard: usize) -> Result<Aiet, MapError> {
        h.compose_guarded(&self.compose_guarded(&h.inverse(), guard)?, guard)
    }

    /// Commutator `u v u⁻¹ v⁻¹`.
    pub fn commutator(&self, v: &Aiet) -> Result<Aiet, MapError> {
        self.compose(v)?.compose(&self.inverse())?.compose(&v.inverse())
    }

    /// Product of several maps, rightmost applied first.
    pub fn product<'a>(maps: impl IntoIterator<Item = &'a Aiet>) -> Result<Aiet, MapError> {
        let mut acc = Aiet::identity();
        for m in maps {
            acc = acc.compose(m)?;
        }
        Ok(acc)
    }

    /// The map induced on `[a, b)`, rescaled affinely to `[0, 1)`.
    ///
    /// Requires `f([a, b)) = [a, b)`.
    pub fn restrict(&self, a: &Scalar, b: &Scalar) -> Result<Aiet, MapError> {
        if !(a < b) || a.is_negative() || *b > Scalar::one() {
            return Err(MapError::InvalidParameter(format!("bad interval [{a}, {b})")));
        }
        let len = b - a;
        let mut pieces = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let r = self.right(i);
            if r <= *a || p.left >= *b {
                continue;
            }
            let lo = if p.left > *a { p.left.clone() } else { a.clone() };
            let hi = if r < *b { r } else { b.clone() };
            if p.apply(&lo) < *a || p.apply(&hi) > *b {
                return Err(MapError::InvalidParameter(format!(
                    "[{a}, {b}) is not invariant"
                )));
            }
            pieces.push(Piece::new(
                (&lo - a) / &len,
                p.slope.clone(),
                (&p.slope * a + &p.intercept - a) / &len,
            ));
        }
        Aiet::from_pieces(pieces)
    }

    /// The map acting as `self` rescaled onto `[a, b)` and as the identity
    /// elsewhere; inverse of [`Aiet::restrict`].
    pub fn embed(&self, a: &Scalar, b: &Scalar) -> Result<Aiet, MapError> {
        if !(a < b) || a.is_negative() || *b > Scalar::one() {
            return Err(MapError::InvalidParameter(format!("bad interval [{a}, {b})")));
        }
        let len = b - a;
        let mut pieces = Vec::new();
        if a.is_positive() {
            pieces.push(Piece::new(Scalar::zero(), Scalar::one(), Scalar::zero()));
        }
        for p in &self.pieces {
            // x = a + len·u, u ↦ λu + β  ⇒  x ↦ λx + a + len·β − λa
            pieces.push(Piece::new(
                a + &(&len * &p.left),
                p.slope.clone(),
                a + &(&len * &p.intercept) - &p.slope * a,
            ));
        }
        if *b < Scalar::one() {
            pieces.push(Piece::new(b.clone(), Scalar::one(), Scalar::zero()));
        }
        Aiet::from_pieces(pieces)
    }
}
