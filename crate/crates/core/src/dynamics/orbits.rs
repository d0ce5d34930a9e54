use serde::{Deserialize, Serialize};

use crate::map::Aiet;
use crate::numbers::Scalar;
use crate::walker::Stepper;

use super::DynamicsError;

/// The break points met along the forward orbit of an initial break point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSegment {
    /// The initial break point `a`.
    pub initial: Scalar,
    /// `N_a`: index of the last break point on the forward orbit.
    pub length: usize,
    /// `(k, f^k(a))` for every `k ≤ N_a` with `f^k(a) ∈ BP(f)`.
    pub hits: Vec<(usize, Scalar)>,
    /// `Δ_{f^{N_a+1}}(a)`.
    pub delta_inv: Scalar,
    /// `Π_a = σ_{f^{N_a+1}}(a)`.
    pub pi_inv: Scalar,
}

impl OrbitSegment {
    /// `f^k(a)` for `k = 0..=N_a`.
    pub fn points(&self, f: &Aiet) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.length + 1);
        let mut x = self.initial.clone();
        for k in 0..=self.length {
            if k > 0 {
                x = f.eval(&x);
            }
            out.push(x.clone());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicBreak {
    pub point: Scalar,
    pub period: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitData {
    pub segments: Vec<OrbitSegment>,
    pub periodic: Vec<PeriodicBreak>,
    pub horizon: usize,
}

impl OrbitData {
    /// `max N_a` over all segments (0 when there are none).
    pub fn max_length(&self) -> usize {
        self.segments.iter().map(|s| s.length).max().unwrap_or(0)
    }
}

struct Walk {
    /// `(k, break index)` for `k ≥ 1`.
    hits: Vec<(usize, usize)>,
    period: Option<usize>,
}

fn walk(st: &Stepper, start: &Scalar, horizon: usize) -> Walk {
    let x0 = st.point(start);
    let mut x = x0.clone();
    let mut hits = Vec::new();
    for k in 1..=horizon {
        x = st.step(&x);
        if let Some(b) = st.break_index(&x) {
            if st.cmp(&x, &x0).is_eq() {
                return Walk { hits, period: Some(k) };
            }
            hits.push((k, b));
        }
    }
    Walk { hits, period: None }
}

type Hits = Vec<(usize, Scalar)>;

/// Partition the break points of `f` into forward orbit segments.
///
/// Each break point is walked forward for `horizon` steps. Break points
/// reached by no other walk are initial; a walk whose last break hit falls
/// in the second half of the horizon, or a non-initial point that no
/// initial walk covers, means the horizon was too short.
pub fn orbit_segments(f: &Aiet, horizon: usize, guard: usize) -> Result<OrbitData, DynamicsError> {
    let st = Stepper::new(f);
    let lefts: Vec<Scalar> = f.lefts().cloned().collect();
    let walks: Vec<Walk> = lefts.iter().map(|x| walk(&st, x, horizon)).collect();

    let mut reached = vec![false; lefts.len()];
    let mut periodic = Vec::new();
    for (i, w) in walks.iter().enumerate() {
        if let Some(p) = w.period {
            periodic.push(PeriodicBreak { point: lefts[i].clone(), period: p });
            continue;
        }
        for &(_, b) in &w.hits {
            reached[b] = true;
        }
    }

    let mut covered = vec![false; lefts.len()];
    // (start, length, hits)
    let mut raw: Vec<(usize, usize, Hits)> = Vec::new();
    for (i, w) in walks.iter().enumerate() {
        if w.period.is_some() || reached[i] {
            continue;
        }
        let length = w.hits.last().map_or(0, |h| h.0);
        if 2 * length > horizon {
            return Err(DynamicsError::HorizonExceeded {
                horizon,
                detail: format!("break point {} still meets breaks at step {length}", lefts[i]),
            });
        }
        covered[i] = true;
        let mut hits = vec![(0, lefts[i].clone())];
        for &(k, b) in &w.hits {
            covered[b] = true;
            hits.push((k, lefts[b].clone()));
        }
        raw.push((i, length, hits));
    }
    for (i, w) in walks.iter().enumerate() {
        if w.period.is_none() && !covered[i] {
            return Err(DynamicsError::HorizonExceeded {
                horizon,
                detail: format!("no initial break point found for {}", lefts[i]),
            });
        }
    }

    // Δ and σ of f^{N+1} at each initial point, on exact powers.
    let max_len = raw.iter().map(|r| r.1).max().unwrap_or(0);
    let mut segments = Vec::with_capacity(raw.len());
    let mut power = f.clone();
    let mut power_n = 1;
    raw.sort_by_key(|r| r.1);
    for (i, length, hits) in raw {
        while power_n < length + 1 {
            power = f.compose_guarded(&power, guard)?;
            power_n += 1;
        }
        debug_assert!(power_n <= max_len + 1);
        let s = power.eval_sided(&lefts[i]);
        segments.push(OrbitSegment {
            initial: lefts[i].clone(),
            length,
            hits,
            delta_inv: s.delta,
            pi_inv: s.sigma,
        });
    }
    segments.sort_by(|a, b| a.initial.cmp(&b.initial));
    Ok(OrbitData { segments, periodic, horizon })
}
