use serde::{Deserialize, Serialize};

use crate::map::Aiet;
use crate::numbers::Scalar;

use super::{pair_structure, NormalFormError, PairStructure};

/// Result of conjugating away every removable pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    /// `E` with `map = E ∘ F ∘ E⁻¹`.
    pub conjugator: Aiet,
    pub map: Aiet,
    pub pairs: PairStructure,
    pub steps: usize,
    /// Steps where the rotated-cut conjugator `C⁻¹ E′ C` did not drop two
    /// discontinuities and `E′ C` was used instead.
    pub fallback_steps: usize,
}

/// `[0,t) [t,w) [w,1)` ↦ `[0,t) [w,1) [t,w)`: sends `w` to `t`.
fn swap_tail(t: &Scalar, w: &Scalar) -> Result<Aiet, NormalFormError> {
    let mut lengths = Vec::new();
    let mut perm = Vec::new();
    if t.is_positive() {
        lengths.push(t.clone());
        perm.push(1);
    }
    let k = perm.len();
    lengths.push(w - t);
    lengths.push(Scalar::one() - w);
    perm.push(k + 2);
    perm.push(k + 1);
    Ok(Aiet::iet_from_lengths(&perm, &lengths)?)
}

fn drops_two(f: &Aiet, e: &Aiet, guard: usize) -> Result<Option<Aiet>, NormalFormError> {
    let g = f.conjugate_guarded(e, guard)?;
    Ok((g.bp0_count() + 2 <= f.bp0_count()).then_some(g))
}

/// Conjugator `E` removing pair `i`; the returned flag records whether the
/// fallback form was needed. `E ∘ F ∘ E⁻¹` has at least two fewer
/// discontinuities than `F`.
pub fn removal_conjugator(
    f: &Aiet,
    ps: &PairStructure,
    i: usize,
    guard: usize,
) -> Result<(Aiet, bool), NormalFormError> {
    if !ps.removable.get(i).copied().unwrap_or(false) {
        return Err(NormalFormError::NotRemovable(i));
    }
    let p = &ps.pairs[i];
    let (t, w) = (&p.target, &p.omega);
    if t < w {
        let e = swap_tail(t, w)?;
        return match drops_two(f, &e, guard)? {
            Some(_) => Ok((e, false)),
            None => Err(NormalFormError::Structure(format!("removing pair {i} did not drop two discontinuities"))),
        };
    }
    // Some ω_j lies strictly between ω_i and t_i; cut the circle at ω_j.
    let wj = ps
        .pairs
        .iter()
        .map(|q| &q.omega)
        .find(|x| *x > w && *x < t)
        .ok_or(NormalFormError::NotRemovable(i))?;
    let one = Scalar::one();
    let cut = Aiet::rotation(&(&one - wj))?;
    let t_cut = t - wj;
    let w_cut = w - wj + &one;
    let inner = swap_tail(&t_cut, &w_cut)?;
    let e = cut.inverse().compose_guarded(&inner, guard)?.compose_guarded(&cut, guard)?;
    if drops_two(f, &e, guard)?.is_some() {
        return Ok((e, false));
    }
    let e = inner.compose_guarded(&cut, guard)?;
    match drops_two(f, &e, guard)? {
        Some(_) => Ok((e, true)),
        None => Err(NormalFormError::Structure(format!("removing pair {i} did not drop two discontinuities"))),
    }
}

/// Repeatedly remove the lowest-indexed removable pair until none is left,
/// re-checking the pair property after each step.
pub fn reduce_to_unremovable(
    f: &Aiet,
    ps: PairStructure,
    horizon: usize,
    guard: usize,
) -> Result<Reduction, NormalFormError> {
    let mut map = f.clone();
    let mut pairs = ps;
    let mut conjugator = Aiet::identity();
    let mut steps = 0;
    let mut fallback_steps = 0;
    while let Some(i) = pairs.first_removable() {
        let (e, fallback) = removal_conjugator(&map, &pairs, i, guard)?;
        map = map.conjugate_guarded(&e, guard)?;
        conjugator = e.compose_guarded(&conjugator, guard)?;
        pairs = pair_structure(&map, horizon, guard)
            .map_err(|e| NormalFormError::Structure(format!("pair property lost after removal: {e}")))?;
        steps += 1;
        fallback_steps += usize::from(fallback);
    }
    Ok(Reduction { conjugator, map, pairs, steps, fallback_steps })
}
