use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dynamics::{classify_from_orbits, orbit_segments, periodic_structure, GrowthClass, WitnessKind};
use crate::map::Aiet;
use crate::numbers::Scalar;

use super::{pair_power, reduce_to_unremovable, NormalFormError, PairStructure};

/// One factor of the product: `map` acts on `[a, b)` and is the identity
/// elsewhere; `restricted` is the same map rescaled to `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub a: Scalar,
    pub b: Scalar,
    pub map: Aiet,
    pub restricted: Aiet,
}

/// `E ∘ f^{q·l} ∘ E⁻¹ = Γ_1 ∘ … ∘ Γ_m` with each `Γ_i` a restricted
/// PL-homeomorphism on disjoint intervals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiDecomposition {
    pub power_q: usize,
    pub iterate_l: usize,
    pub conjugator: Aiet,
    pub components: Vec<Component>,
    pub removal_steps: usize,
    pub fallback_steps: usize,
}

impl LiDecomposition {
    /// Total exponent `q·l`.
    pub fn exponent(&self) -> usize {
        self.power_q * self.iterate_l
    }

    /// Product of the components (right to left in list order; they commute).
    pub fn product(&self) -> Result<Aiet, NormalFormError> {
        Ok(Aiet::product(self.components.iter().map(|c| &c.map))?)
    }
}

fn structure(msg: impl Into<String>) -> NormalFormError {
    NormalFormError::Structure(msg.into())
}

/// Split an unremovable pair map `g` into the intervals `[ω_i, F₋(β_i))`.
/// Returns the order `l` of the induced interval permutation and the
/// components of `g^l`.
pub fn component_decomposition(
    g: &Aiet,
    ps: &PairStructure,
    guard: usize,
) -> Result<(usize, Vec<Component>), NormalFormError> {
    if ps.first_removable().is_some() {
        return Err(structure("map still has removable pairs"));
    }
    let n = ps.pairs.len();
    let intervals: Vec<(Scalar, Scalar)> =
        ps.pairs.iter().map(|p| (p.omega.clone(), p.target.clone())).collect();
    for (i, (a, b)) in intervals.iter().enumerate() {
        let next = intervals.get(i + 1).map(|x| x.0.clone()).unwrap_or_else(Scalar::one);
        if *b != next {
            return Err(structure(format!("intervals do not tile: [{a}, {b}) followed by {next}")));
        }
    }
    // interval i contains exactly one β, which `g` sends to the start of J_{σ(i)}
    let mut sigma = vec![usize::MAX; n];
    for (i, (a, b)) in intervals.iter().enumerate() {
        let inside: Vec<usize> = ps
            .pairs
            .iter()
            .enumerate()
            .filter(|(_, p)| p.beta > *a && p.beta < *b)
            .map(|(j, _)| j)
            .collect();
        match inside.as_slice() {
            [j] => sigma[i] = *j,
            _ => return Err(structure(format!("[{a}, {b}) contains {} β's", inside.len()))),
        }
    }
    let mut seen = vec![false; n];
    for &j in &sigma {
        if seen[j] {
            return Err(structure("intervals are not permuted"));
        }
        seen[j] = true;
    }
    let mut l = 1;
    let mut pos: Vec<usize> = sigma.clone();
    while pos.iter().enumerate().any(|(i, &p)| p != i) {
        pos = pos.iter().map(|&p| sigma[p]).collect();
        l += 1;
    }

    let gl = g.power_guarded(l as i64, guard)?;
    let mut components = Vec::with_capacity(n);
    for (a, b) in intervals {
        let restricted = gl.restrict(&a, &b).map_err(|e| structure(format!("[{a}, {b}): {e}")))?;
        if !restricted.is_pl_homeo() {
            return Err(structure(format!("restriction to [{a}, {b}) is not a PL-homeomorphism")));
        }
        let map = restricted.embed(&a, &b)?;
        components.push(Component { a, b, map, restricted });
    }
    let product = Aiet::product(components.iter().map(|c| &c.map))?;
    if product != gl {
        return Err(structure("components do not multiply back to the iterate"));
    }
    Ok((l, components))
}

/// Conjugate an iterate of `f` into a product of restricted PL-homeomorphisms.
///
/// Needs `f` to have no periodic points and a bounded number of
/// discontinuities in its iterates.
pub fn li_normal_form(f: &Aiet, cfg: &Config) -> Result<LiDecomposition, NormalFormError> {
    let guard = cfg.guard_pieces;
    let periodic = periodic_structure(f, cfg.max_period, guard)?;
    if periodic.has_periodic_points() {
        return Err(NormalFormError::Precondition("map has periodic points".into()));
    }
    if f.is_pl_homeo() {
        let component = Component {
            a: Scalar::zero(),
            b: Scalar::one(),
            map: f.clone(),
            restricted: f.clone(),
        };
        return Ok(LiDecomposition {
            power_q: 1,
            iterate_l: 1,
            conjugator: Aiet::identity(),
            components: vec![component],
            removal_steps: 0,
            fallback_steps: 0,
        });
    }
    let orbits = orbit_segments(f, cfg.horizon_for(f.bp_count()), guard)?;
    if let GrowthClass::Linear { reason: WitnessKind::Discontinuity, witness, .. } = classify_from_orbits(&orbits) {
        return Err(NormalFormError::Precondition(format!(
            "discontinuities of iterates grow linearly (witness {})",
            witness.initial
        )));
    }
    let (q, fq, ps) = pair_power(f, &orbits, cfg)?;
    let red = reduce_to_unremovable(&fq, ps, cfg.horizon_for(fq.bp_count()), guard)?;
    let (l, components) = component_decomposition(&red.map, &red.pairs, guard)?;

    let lhs = f.power_guarded((q * l) as i64, guard)?.conjugate_guarded(&red.conjugator, guard)?;
    if lhs != Aiet::product(components.iter().map(|c| &c.map))? {
        return Err(structure("conjugated iterate differs from the component product"));
    }
    Ok(LiDecomposition {
        power_q: q,
        iterate_l: l,
        conjugator: red.conjugator,
        components,
        removal_steps: red.steps,
        fallback_steps: red.fallback_steps,
    })
}
