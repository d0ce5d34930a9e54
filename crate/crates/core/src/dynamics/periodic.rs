use serde::{Deserialize, Serialize};

use crate::map::Aiet;
use crate::numbers::Scalar;

use super::DynamicsError;

/// Fixed points of a map: whole intervals plus isolated points.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedSet {
    pub intervals: Vec<(Scalar, Scalar)>,
    pub points: Vec<Scalar>,
}

impl FixedSet {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.points.is_empty()
    }

    fn covers_point(&self, x: &Scalar) -> bool {
        self.intervals.iter().any(|(a, b)| a <= x && x < b) || self.points.contains(x)
    }

    fn covers_interval(&self, lo: &Scalar, hi: &Scalar) -> bool {
        self.intervals.iter().any(|(a, b)| a <= lo && hi <= b)
    }

    /// Whether every point of `other` lies in `self`.
    pub fn contains(&self, other: &FixedSet) -> bool {
        other.intervals.iter().all(|(a, b)| self.covers_interval(a, b))
            && other.points.iter().all(|x| self.covers_point(x))
    }

    fn union_with(&mut self, other: &FixedSet) {
        let mut all: Vec<(Scalar, Scalar)> = self.intervals.drain(..).chain(other.intervals.iter().cloned()).collect();
        all.sort();
        let mut merged: Vec<(Scalar, Scalar)> = Vec::with_capacity(all.len());
        for (a, b) in all {
            match merged.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => merged.push((a, b)),
            }
        }
        self.intervals = merged;
        let mut pts: Vec<Scalar> = self.points.drain(..).chain(other.points.iter().cloned()).collect();
        pts.sort();
        pts.dedup();
        self.points = pts.into_iter().filter(|x| !self.intervals.iter().any(|(a, b)| a <= x && x < b)).collect();
    }
}

/// Exact per-piece solution of `λx + β = x`.
pub fn fixed_points(f: &Aiet) -> FixedSet {
    let mut out = FixedSet::default();
    for (i, p) in f.pieces().iter().enumerate() {
        let r = f.right(i);
        if p.slope.is_one() {
            if p.intercept.is_zero() {
                match out.intervals.last_mut() {
                    Some(last) if last.1 == p.left => last.1 = r,
                    _ => out.intervals.push((p.left.clone(), r)),
                }
            }
            continue;
        }
        let x = &p.intercept / &(Scalar::one() - &p.slope);
        if p.left <= x && x < r {
            out.points.push(x);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
    /// Not a break point of the return map: a genuinely hyperbolic point.
    Both,
}

/// A periodic point where a one-sided derivative of `f^period` differs from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiHyperbolic {
    pub point: Scalar,
    pub period: usize,
    pub side: Side,
    pub derivative: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicStructure {
    /// `p` with `Per(f) = Fix(f^p)` over the searched range.
    pub period: usize,
    /// Maximal half-open intervals of periodic points.
    pub fixed_region: Vec<(Scalar, Scalar)>,
    /// Isolated periodic points with their minimal periods.
    pub isolated: Vec<(Scalar, usize)>,
    pub semi_hyperbolic: Vec<SemiHyperbolic>,
    /// Periods `1..=searched` were examined.
    pub searched: usize,
}

impl PeriodicStructure {
    pub fn has_periodic_points(&self) -> bool {
        !self.fixed_region.is_empty() || !self.isolated.is_empty()
    }

    /// Whether every point is periodic.
    pub fn all_periodic(&self) -> bool {
        matches!(self.fixed_region.as_slice(), [(a, b)] if a.is_zero() && b.is_one())
    }
}

fn semi_hyperbolic_of(g: &Aiet, period: usize, found: &mut Vec<SemiHyperbolic>) {
    let known = |found: &Vec<SemiHyperbolic>, x: &Scalar, side: Side| {
        found.iter().any(|s| s.point == *x && (s.side == side || s.side == Side::Both || side == Side::Both))
    };
    for (i, p) in g.pieces().iter().enumerate() {
        if p.slope.is_one() {
            continue;
        }
        let r = g.right(i);
        let x = &p.intercept / &(Scalar::one() - &p.slope);
        let mut hits = Vec::new();
        if p.left < x && x < r {
            hits.push((x.clone(), Side::Both));
        }
        if x == p.left {
            hits.push((x.clone(), Side::Right));
        }
        if x == r {
            let point = if r.is_one() { Scalar::zero() } else { r.clone() };
            hits.push((point, Side::Left));
        }
        for (point, side) in hits {
            if !known(found, &point, side) {
                found.push(SemiHyperbolic { point, period, side, derivative: p.slope.clone() });
            }
        }
    }
}

/// Search `Fix(f^l)` for `l ≤ max_period`.
///
/// Conclusive when some `Fix(f^p)` contains every periodic point found and
/// `2p ≤ max_period`, i.e. the union stayed put for a full extra cycle.
pub fn periodic_structure(f: &Aiet, max_period: usize, guard: usize) -> Result<PeriodicStructure, DynamicsError> {
    if max_period == 0 {
        return Err(DynamicsError::Precondition("max_period must be at least 1".into()));
    }
    let mut g = Aiet::identity();
    let mut fixes: Vec<FixedSet> = Vec::new();
    let mut union = FixedSet::default();
    let mut isolated: Vec<(Scalar, usize)> = Vec::new();
    let mut semi: Vec<SemiHyperbolic> = Vec::new();
    let mut searched = 0;
    for l in 1..=max_period {
        g = f.compose_guarded(&g, guard)?;
        searched = l;
        let fs = fixed_points(&g);
        for x in &fs.points {
            if !union.covers_point(x) && !isolated.iter().any(|(y, _)| y == x) {
                isolated.push((x.clone(), l));
            }
        }
        semi_hyperbolic_of(&g, l, &mut semi);
        union.union_with(&fs);
        fixes.push(fs);
        if g.is_identity() {
            break;
        }
    }
    isolated.retain(|(x, _)| !union.intervals.iter().any(|(a, b)| a <= x && x < b));
    isolated.sort();
    let period = fixes.iter().position(|fs| fs.contains(&union)).map(|i| i + 1);
    let full_cycle = g.is_identity();
    let mut structure = PeriodicStructure {
        period: period.unwrap_or(searched),
        fixed_region: union.intervals,
        isolated,
        semi_hyperbolic: semi,
        searched,
    };
    match period {
        Some(p) if full_cycle || 2 * p <= searched => Ok(structure),
        _ => {
            structure.period = period.unwrap_or(0);
            Err(DynamicsError::PeriodNotStable { max_period, partial: Box::new(structure) })
        }
    }
}
