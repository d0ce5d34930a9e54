use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dynamics::{classify_from_orbits, orbit_segments, OrbitData};
use crate::map::{Aiet, Piece};
use crate::numbers::Scalar;

use super::{two_slope_parameters, TwoSlopeError};

/// Break points `0 = c₀ < … < c_p < 1` of a circle PL-homeomorphism and the
/// slope jumps `σ_i` prescribed there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpSpec {
    pub breaks: Vec<Scalar>,
    pub jumps: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "point", rename_all = "snake_case")]
pub enum Normalization {
    FixZero,
    /// `H(c) = 0`.
    FixPoint(Scalar),
}

/// Circle PL-homeomorphism with the prescribed break points and jumps.
pub fn pl_from_jumps(spec: &JumpSpec, norm: &Normalization) -> Result<Aiet, TwoSlopeError> {
    let (c, s) = (&spec.breaks, &spec.jumps);
    if c.is_empty() || c.len() != s.len() {
        return Err(TwoSlopeError::Precondition("need one jump per break point".into()));
    }
    if !c[0].is_zero() || c.windows(2).any(|w| w[0] >= w[1]) || c[c.len() - 1] >= Scalar::one() {
        return Err(TwoSlopeError::Precondition("break points must be 0 = c₀ < … < c_p < 1".into()));
    }
    if s.iter().any(|x| !x.is_positive()) {
        return Err(TwoSlopeError::Precondition("jumps must be positive".into()));
    }
    let product = s.iter().try_fold(Scalar::one(), |acc, x| acc.checked_mul(x))?;
    if !product.is_one() {
        return Err(TwoSlopeError::JumpProduct(product));
    }

    // relative slopes μ_1 = 1, μ_{i+1} = σ_i μ_i; then scale to total length 1
    let p = c.len();
    let mut rel = vec![Scalar::one()];
    for i in 1..p {
        let next = rel[i - 1].checked_mul(&s[i])?;
        rel.push(next);
    }
    let mut total = Scalar::zero();
    for i in 0..p {
        let right = c.get(i + 1).cloned().unwrap_or_else(Scalar::one);
        total = total.checked_add(&rel[i].checked_mul(&right.checked_sub(&c[i])?)?)?;
    }
    let lambda1 = total.recip()?;
    let mut pieces = Vec::with_capacity(p);
    let mut y = Scalar::zero();
    for i in 0..p {
        let slope = lambda1.checked_mul(&rel[i])?;
        let right = c.get(i + 1).cloned().unwrap_or_else(Scalar::one);
        let intercept = y.checked_sub(&slope.checked_mul(&c[i])?)?;
        y = y.checked_add(&slope.checked_mul(&right.checked_sub(&c[i])?)?)?;
        pieces.push(Piece::new(c[i].clone(), slope, intercept));
    }
    let mut h = Aiet::from_pieces(pieces)?;
    if let Normalization::FixPoint(x) = norm {
        let hx = h.eval(x);
        if !hx.is_zero() {
            h = Aiet::rotation(&(Scalar::one() - hx))?.compose(&h)?;
        }
    }
    for (x, sigma) in c.iter().zip(s) {
        if h.sigma_at(x) != *sigma {
            return Err(TwoSlopeError::Structure(format!("jump at {x} is {}, wanted {sigma}", h.sigma_at(x))));
        }
    }
    Ok(h)
}

fn bounded_orbits(f: &Aiet, cfg: &Config) -> Result<OrbitData, TwoSlopeError> {
    if !f.is_pl_homeo() {
        return Err(TwoSlopeError::Precondition("map is not a PL-homeomorphism".into()));
    }
    let data = orbit_segments(f, cfg.horizon_for(f.bp_count()), cfg.guard_pieces)?;
    if !classify_from_orbits(&data).is_bounded() {
        return Err(TwoSlopeError::Precondition("number of break points of iterates is unbounded".into()));
    }
    Ok(data)
}

/// Jumps `σ_{f^{N+1}}(f^k(a))` at every segment point, keyed by point.
fn segment_jumps(f: &Aiet, data: &OrbitData, cfg: &Config) -> Result<Vec<(usize, Scalar, Scalar)>, TwoSlopeError> {
    let big = f.power_guarded(data.max_length() as i64 + 1, cfg.guard_pieces)?;
    let mut out = Vec::new();
    for seg in &data.segments {
        for (k, x) in seg.points(f).into_iter().enumerate() {
            let s = big.sigma_at(&x);
            out.push((k, x, s));
        }
    }
    Ok(out)
}

/// `Π(f)`: product of the jumps of `f^{N+1}` over all orbit-segment points.
pub fn global_jump_product(f: &Aiet, cfg: &Config) -> Result<Scalar, TwoSlopeError> {
    let data = bounded_orbits(f, cfg)?;
    let jumps = segment_jumps(f, &data, cfg)?;
    Ok(jumps.iter().fold(Scalar::one(), |acc, (_, _, s)| &acc * s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Minakawa {
    /// `B = H ∘ f ∘ H⁻¹`.
    pub h: Aiet,
    pub b: Aiet,
    pub jump_product: Scalar,
    /// Extra break point of `H` used when `Π(f) ≠ 1`.
    pub extra_break: Option<Scalar>,
}

/// A rational point strictly inside the largest gap between `points` on the
/// circle.
fn rational_in_largest_gap(points: &[Scalar]) -> Scalar {
    let mut sorted: Vec<Scalar> = points.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut best: Option<(Scalar, Scalar)> = None;
    let one = Scalar::one();
    let mut bounds = vec![Scalar::zero()];
    bounds.extend(sorted.into_iter().filter(|x| !x.is_zero()));
    bounds.push(one);
    for w in bounds.windows(2) {
        let len = &w[1] - &w[0];
        if best.as_ref().is_none_or(|(a, b)| len > b - a) {
            best = Some((w[0].clone(), w[1].clone()));
        }
    }
    let (lo, hi) = best.expect("at least one gap");
    let mid = lo.midpoint(&hi);
    if mid.is_rational() {
        return mid;
    }
    let mut bits = 8;
    loop {
        let c = mid.dyadic_floor(bits);
        if c > lo && c < hi {
            return c;
        }
        bits += 8;
    }
}

/// Whether `f` already has the two-slope form: at most two slopes, changing
/// only at `0` and `f⁻¹(0)`.
fn in_two_slope_form(f: &Aiet) -> bool {
    two_slope_parameters(f).is_some()
}

/// PL conjugacy from a bounded-growth PL-homeomorphism to a map with at most
/// two slopes. Rational input and a rational extra break give rational `H`.
pub fn minakawa_conjugate(f: &Aiet, cfg: &Config) -> Result<Minakawa, TwoSlopeError> {
    if !f.is_pl_homeo() {
        return Err(TwoSlopeError::Precondition("map is not a PL-homeomorphism".into()));
    }
    let data = bounded_orbits(f, cfg)?;
    let jumps = segment_jumps(f, &data, cfg)?;
    let product = jumps.iter().fold(Scalar::one(), |acc, (_, _, s)| &acc * s);
    if in_two_slope_form(f) {
        return Ok(Minakawa { h: Aiet::identity(), b: f.clone(), jump_product: product, extra_break: None });
    }

    let mut prescribed: BTreeMap<Scalar, Scalar> = BTreeMap::new();
    for (k, x, s) in &jumps {
        if *k >= 1 {
            prescribed.insert(x.clone(), s.clone());
        }
    }
    let mut extra = None;
    if !product.is_one() {
        let all: Vec<Scalar> = jumps.iter().map(|(_, x, _)| x.clone()).collect();
        let c = rational_in_largest_gap(&all);
        prescribed.insert(c.clone(), product.recip()?);
        extra = Some(c);
    }
    if !prescribed.contains_key(&Scalar::zero()) {
        let rest = prescribed.values().fold(Scalar::one(), |acc, s| &acc * s);
        prescribed.insert(Scalar::zero(), rest.recip()?);
    }
    let (breaks, sigmas): (Vec<Scalar>, Vec<Scalar>) = prescribed.into_iter().unzip();
    let spec = JumpSpec { breaks, jumps: sigmas };
    let norm = match &extra {
        Some(c) => Normalization::FixPoint(c.clone()),
        None => Normalization::FixZero,
    };
    let h = pl_from_jumps(&spec, &norm)?;
    let b = f.conjugate_guarded(&h, cfg.guard_pieces)?;
    if product.is_one() {
        if !b.is_iet() {
            return Err(TwoSlopeError::Structure("trivial jump product but conjugate has slope breaks".into()));
        }
    } else if !in_two_slope_form(&b) {
        return Err(TwoSlopeError::Structure("conjugate is not a two-slope map".into()));
    }
    Ok(Minakawa { h, b, jump_product: product, extra_break: extra })
}
