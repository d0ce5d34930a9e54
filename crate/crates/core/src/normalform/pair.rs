use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dynamics::{periodic_structure, OrbitData};
use crate::map::Aiet;
use crate::numbers::Scalar;
use crate::walker::Stepper;

use super::NormalFormError;

/// `(β, ω)` with `F(β) = ω`, plus the left limit `F₋(β)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    pub beta: Scalar,
    pub omega: Scalar,
    /// `F₋(β)`: either another `ω` or `1`.
    pub target: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairStructure {
    /// Sorted by `ω`, so `pairs[0].omega = 0`.
    pub pairs: Vec<Pair>,
    /// `pi[i] = j` when `F₋(β_i) = ω_j`, and `0` when `F₋(β_i) = 1`.
    pub pi: Vec<usize>,
    pub removable: Vec<bool>,
}

impl PairStructure {
    pub fn first_removable(&self) -> Option<usize> {
        self.removable.iter().position(|&r| r)
    }

    pub fn omegas(&self) -> Vec<Scalar> {
        self.pairs.iter().map(|p| p.omega.clone()).collect()
    }
}

fn not_pair(msg: impl Into<String>) -> NormalFormError {
    NormalFormError::NotPair(msg.into())
}

/// Conditions (2) and (3) of the pair property; absence of periodic points is
/// the caller's responsibility. Orbit disjointness is checked for `horizon`
/// steps.
pub fn pair_structure(f: &Aiet, horizon: usize, guard: usize) -> Result<PairStructure, NormalFormError> {
    let bp0 = f.breakpoints().bp0();
    let f2 = f.compose_guarded(f, guard)?;
    let betas: Vec<Scalar> = bp0.iter().filter(|x| !f2.is_bp0(x)).cloned().collect();
    let omegas: Vec<Scalar> = betas.iter().map(|b| f.eval(b)).collect();
    if 2 * betas.len() != bp0.len() {
        return Err(not_pair(format!(
            "{} break points of discontinuity but {} survive in F²",
            bp0.len(),
            bp0.len() - betas.len()
        )));
    }
    for w in &omegas {
        if !bp0.contains(w) || betas.contains(w) {
            return Err(not_pair(format!("image {w} of a β is not a separate discontinuity")));
        }
    }
    if !omegas.iter().any(Scalar::is_zero) {
        return Err(not_pair("0 is not the image of a β"));
    }

    let mut pairs: Vec<Pair> = betas
        .iter()
        .zip(&omegas)
        .map(|(b, w)| Pair { beta: b.clone(), omega: w.clone(), target: f.eval_left(b) })
        .collect();
    pairs.sort_by(|a, b| a.omega.cmp(&b.omega));
    let omegas: Vec<Scalar> = pairs.iter().map(|p| p.omega.clone()).collect();

    let mut pi = Vec::with_capacity(pairs.len());
    for p in &pairs {
        if p.target.is_one() {
            pi.push(0);
        } else if let Some(j) = omegas.iter().position(|w| *w == p.target) {
            pi.push(j);
        } else {
            return Err(not_pair(format!("left limit {} at β = {} is not an ω", p.target, p.beta)));
        }
    }

    // Orbits of distinct β's must not meet.
    let st = Stepper::new(f);
    let beta_idx: Vec<usize> = pairs.iter().map(|p| f.piece_index(&p.beta)).collect();
    for (i, p) in pairs.iter().enumerate() {
        let start = st.point(&p.beta);
        let mut x = start.clone();
        for _ in 0..horizon {
            x = st.step(&x);
            if let Some(b) = st.break_index(&x) {
                if b == beta_idx[i] {
                    return Err(not_pair(format!("β = {} is periodic", p.beta)));
                }
                if beta_idx.contains(&b) {
                    return Err(not_pair(format!("orbit of β = {} meets another β", p.beta)));
                }
            }
        }
    }

    let removable = pairs
        .iter()
        .map(|p| {
            // F₋(β) = 1 with F(β) = 0 is continuous on the circle.
            if p.target.is_one() && p.omega.is_zero() {
                false
            } else if p.target < p.omega {
                true
            } else {
                omegas.iter().any(|w| *w > p.omega && *w < p.target)
            }
        })
        .collect();
    Ok(PairStructure { pairs, pi, removable })
}

/// Full pair-property test, including absence of periodic points up to
/// `cfg.max_period`.
pub fn pair_property_check(f: &Aiet, cfg: &Config) -> Result<PairStructure, NormalFormError> {
    let ps = periodic_structure(f, cfg.max_period, cfg.guard_pieces)?;
    if ps.has_periodic_points() {
        return Err(not_pair("map has periodic points"));
    }
    pair_structure(f, cfg.horizon_for(f.bp_count()), cfg.guard_pieces)
}

/// Smallest `q ≤ N + 1` (with `N` the longest orbit segment) such that `f^q`
/// has the pair property. The caller guarantees there are no periodic points.
pub fn pair_power(
    f: &Aiet,
    orbits: &OrbitData,
    cfg: &Config,
) -> Result<(usize, Aiet, PairStructure), NormalFormError> {
    let limit = orbits.max_length() + 1;
    let mut g = f.clone();
    let mut last_err = None;
    for q in 1..=limit {
        if q > 1 {
            g = f.compose_guarded(&g, cfg.guard_pieces)?;
        }
        match pair_structure(&g, cfg.horizon_for(g.bp_count()), cfg.guard_pieces) {
            Ok(ps) => return Ok((q, g, ps)),
            Err(e @ NormalFormError::NotPair(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| not_pair("no iterate has the pair property")))
}
