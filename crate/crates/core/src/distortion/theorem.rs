use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dynamics::{fixed_points, periodic_structure};
use crate::map::Aiet;
use crate::normalform::li_normal_form;
use crate::numbers::{multiplicative_basis, Scalar};
use crate::twoslope::{minakawa_conjugate, two_slope_parameters};

use super::certs::{bp_growth_certificate, drift_certificate, semi_hyperbolic_certificate, Certificate};
use super::{DistortionError, GeneratingSet};

/// `S ∘ f^p ∘ S⁻¹` fixes `[0, a)` pointwise and has no periodic points on
/// `[a, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicSplit {
    pub s: Aiet,
    pub period: usize,
    pub fixed_prefix: Scalar,
    /// `S ∘ f^p ∘ S⁻¹`.
    pub conjugated: Aiet,
    /// Restriction of `conjugated` to `[a, 1)`, rescaled; `None` when `a = 1`.
    pub aperiodic: Option<Aiet>,
}

fn structure(msg: impl Into<String>) -> DistortionError {
    DistortionError::Structure(msg.into())
}

/// Move the periodic region of `f` to an initial interval with the IET that
/// sorts its components to the front, keeping left-to-right order.
pub fn split_periodic(f: &Aiet, cfg: &Config) -> Result<PeriodicSplit, DistortionError> {
    let guard = cfg.guard_pieces;
    let ps = periodic_structure(f, cfg.max_period, guard)?;
    if !ps.isolated.is_empty() {
        return Err(DistortionError::Precondition(format!(
            "{} isolated periodic point(s); the periodic set is not a union of intervals",
            ps.isolated.len()
        )));
    }
    let zero = Scalar::zero();
    let one = Scalar::one();
    if !ps.has_periodic_points() {
        return Ok(PeriodicSplit {
            s: Aiet::identity(),
            period: 1,
            fixed_prefix: zero,
            conjugated: f.clone(),
            aperiodic: Some(f.clone()),
        });
    }
    let mut cuts = vec![zero.clone(), one.clone()];
    for (a, b) in &ps.fixed_region {
        cuts.push(a.clone());
        cuts.push(b.clone());
    }
    cuts.sort();
    cuts.dedup();
    let blocks: Vec<(Scalar, Scalar, bool)> = cuts
        .windows(2)
        .map(|w| {
            let fixed = ps.fixed_region.iter().any(|(a, b)| *a <= w[0] && w[1] <= *b);
            (w[0].clone(), w[1].clone(), fixed)
        })
        .collect();
    let mut order: Vec<usize> = (0..blocks.len()).filter(|&i| blocks[i].2).collect();
    order.extend((0..blocks.len()).filter(|&i| !blocks[i].2));
    let mut perm = vec![0; blocks.len()];
    for (pos, &i) in order.iter().enumerate() {
        perm[i] = pos + 1;
    }
    let lengths: Vec<Scalar> = blocks.iter().map(|(a, b, _)| b - a).collect();
    let s = Aiet::iet_from_lengths(&perm, &lengths)?;
    let a = blocks.iter().filter(|b| b.2).fold(Scalar::zero(), |acc, (l, r, _)| acc + (r - l));

    let conjugated = f.power_guarded(ps.period as i64, guard)?.conjugate_guarded(&s, guard)?;
    let fix = fixed_points(&conjugated);
    if fix.intervals != vec![(zero.clone(), a.clone())] || !fix.points.is_empty() {
        return Err(structure(format!("fixed set of the conjugated power is not [0, {a})")));
    }
    let aperiodic = if a.is_one() { None } else { Some(conjugated.restrict(&a, &one)?) };
    Ok(PeriodicSplit { s, period: ps.period, fixed_prefix: a, conjugated, aperiodic })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentKind {
    Rotation {
        /// Rotation angle of the rescaled component, `δ/|I|`.
        angle: Scalar,
        /// Translation length `δ` on the component.
        delta: Scalar,
        infinite_order: bool,
    },
    TwoSlope {
        lambda1: Scalar,
        lambda2: Scalar,
        wrap_point: Scalar,
        /// `ln λ1 / (ln λ1 − ln λ2)`.
        rho: f64,
        /// Drift certificate of the component against itself, when its
        /// slopes are rational and a drift is visible.
        drift: Option<Certificate>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThComponent {
    pub a: Scalar,
    pub b: Scalar,
    /// Component map on `[a, b)`, identity elsewhere.
    pub map: Aiet,
    /// The same map rescaled to `[0, 1)`.
    pub restricted: Aiet,
    pub jump_product: Scalar,
    pub kind: ComponentKind,
}

/// `G ∘ f^k ∘ G⁻¹ = product of components`, identity on `[0, fixed_prefix)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalFormTh {
    pub split_period: usize,
    pub power_q: usize,
    pub iterate_l: usize,
    /// `k = p·q·l`.
    pub exponent: usize,
    pub fixed_prefix: Scalar,
    pub conjugator: Aiet,
    pub components: Vec<ThComponent>,
    pub removal_steps: usize,
    pub fallback_steps: usize,
}

impl NormalFormTh {
    /// Whether every component is a restricted rotation.
    pub fn all_rotations(&self) -> bool {
        self.components.iter().all(|c| matches!(c.kind, ComponentKind::Rotation { .. }))
    }

    pub fn product(&self) -> Result<Aiet, DistortionError> {
        Ok(Aiet::product(self.components.iter().map(|c| &c.map))?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThOutcome {
    /// Every point is periodic.
    FiniteOrder { order: usize },
    NormalForm(Box<NormalFormTh>),
}

/// Smallest divisor `d` of `n` with `f^d = id`.
fn exact_order(f: &Aiet, n: usize, guard: usize) -> Result<Option<usize>, DistortionError> {
    let mut divisors: Vec<usize> = (1..=n).take_while(|d| d * d <= n).filter(|d| n.is_multiple_of(*d)).collect();
    let big: Vec<usize> = divisors.iter().map(|d| n / d).collect();
    divisors.extend(big);
    divisors.sort_unstable();
    divisors.dedup();
    for d in divisors {
        if f.power_guarded(d as i64, guard)?.is_identity() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

fn component_kind(b: &Aiet, delta_scale: &Scalar, cfg: &Config) -> Result<ComponentKind, DistortionError> {
    if let Some(angle) = b.rotation_angle() {
        let infinite_order = !angle.is_rational();
        let delta = &angle * delta_scale;
        return Ok(ComponentKind::Rotation { angle, delta, infinite_order });
    }
    let (l1, l2, wrap) =
        two_slope_parameters(b).ok_or_else(|| structure("component is neither a rotation nor two-slope"))?;
    let (x1, x2) = (l1.to_f64().ln(), l2.to_f64().ln());
    let slopes: Option<Vec<_>> = [&l1, &l2].iter().map(|s| s.as_rational().cloned()).collect();
    let drift = slopes.and_then(|s| {
        let basis = multiplicative_basis(&s);
        let gens = GeneratingSet::from_maps(vec![b.clone()]);
        drift_certificate(b, &gens, &basis, &Scalar::zero(), cfg.drift_n as u64, cfg).ok()
    });
    Ok(ComponentKind::TwoSlope { lambda1: l1, lambda2: l2, wrap_point: wrap, rho: x1 / (x1 - x2), drift })
}

/// Conjugate an iterate of `f` to a product of restricted rotations and
/// two-slope maps on disjoint intervals: split off the periodic region, put
/// the rest in pair normal form, then reduce each component to at most two
/// slopes. The result is re-verified exactly.
pub fn normal_form_theorem_th(f: &Aiet, cfg: &Config) -> Result<ThOutcome, DistortionError> {
    let guard = cfg.guard_pieces;
    let split = split_periodic(f, cfg)?;
    let Some(aperiodic) = &split.aperiodic else {
        let order = exact_order(f, split.period, guard)?
            .ok_or_else(|| structure("every point is periodic but no power is the identity"))?;
        return Ok(ThOutcome::FiniteOrder { order });
    };
    let li = li_normal_form(aperiodic, cfg)?;
    let a = split.fixed_prefix.clone();
    let one = Scalar::one();
    let scale = &one - &a;

    let mut h_parts = Vec::with_capacity(li.components.len());
    let mut components = Vec::with_capacity(li.components.len());
    for c in &li.components {
        let mk = minakawa_conjugate(&c.restricted, cfg)?;
        h_parts.push(mk.h.embed(&c.a, &c.b)?);
        let ga = &a + &(&scale * &c.a);
        let gb = &a + &(&scale * &c.b);
        let kind = component_kind(&mk.b, &(&gb - &ga), cfg)?;
        components.push(ThComponent {
            map: mk.b.embed(&ga, &gb)?,
            a: ga,
            b: gb,
            restricted: mk.b,
            jump_product: mk.jump_product,
            kind,
        });
    }
    let h = Aiet::product(h_parts.iter())?.embed(&a, &one)?;
    let e = li.conjugator.embed(&a, &one)?;
    let conjugator = h.compose_guarded(&e, guard)?.compose_guarded(&split.s, guard)?;
    let exponent = split.period * li.exponent();

    let lhs = f.power_guarded(exponent as i64, guard)?.conjugate_guarded(&conjugator, guard)?;
    if lhs != Aiet::product(components.iter().map(|c| &c.map))? {
        return Err(structure("conjugated iterate differs from the component product"));
    }
    Ok(ThOutcome::NormalForm(Box::new(NormalFormTh {
        split_period: split.period,
        power_q: li.power_q,
        iterate_l: li.iterate_l,
        exponent,
        fixed_prefix: a,
        conjugator,
        components,
        removal_steps: li.removal_steps,
        fallback_steps: li.fallback_steps,
    })))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RationalVerdict {
    FiniteOrder { order: usize },
    Undistorted { certificate: Certificate },
    Inconclusive { stage: String, reason: String },
}

impl RationalVerdict {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, RationalVerdict::Inconclusive { .. })
    }
}

fn inconclusive(stage: &str, reason: impl Into<String>) -> RationalVerdict {
    RationalVerdict::Inconclusive { stage: stage.into(), reason: reason.into() }
}

/// Classify a rational map as finite order or undistorted (with a
/// certificate against `gens`). There is no "distorted" outcome: a rational
/// map is never distorted, so anything else is reported as inconclusive.
pub fn classify_rational(f: &Aiet, gens: &GeneratingSet, cfg: &Config) -> Result<RationalVerdict, DistortionError> {
    if !f.is_rational() {
        return Err(DistortionError::Precondition("map has irrational data".into()));
    }
    let guard = cfg.guard_pieces;

    let mut g = Aiet::identity();
    for k in 1..=cfg.finite_order_probe {
        match f.compose_guarded(&g, guard) {
            Ok(next) => g = next,
            Err(_) => break,
        }
        if g.is_identity() {
            return Ok(RationalVerdict::FiniteOrder { order: k });
        }
    }

    if let Ok(certificate) = semi_hyperbolic_certificate(f, gens, cfg) {
        return Ok(RationalVerdict::Undistorted { certificate });
    }
    if let Ok(certificate) = bp_growth_certificate(f, gens, cfg) {
        return Ok(RationalVerdict::Undistorted { certificate });
    }

    let nf = match normal_form_theorem_th(f, cfg) {
        Ok(ThOutcome::FiniteOrder { order }) => return Ok(RationalVerdict::FiniteOrder { order }),
        Ok(ThOutcome::NormalForm(nf)) => nf,
        Err(e) => return Ok(inconclusive("normal_form", e.to_string())),
    };

    if let Some(c) = nf.components.iter().find(|c| matches!(c.kind, ComponentKind::TwoSlope { .. })) {
        let mut slopes: Vec<_> = f.slopes().iter().filter_map(|s| s.as_rational().cloned()).collect();
        slopes.extend(gens.slope_values().iter().filter_map(|s| s.as_rational().cloned()));
        let basis = multiplicative_basis(&slopes);
        let x = nf.conjugator.inverse().eval(&c.a);
        return Ok(match drift_certificate(f, gens, &basis, &x, cfg.drift_n as u64, cfg) {
            Ok(certificate) => RationalVerdict::Undistorted { certificate },
            Err(e) => inconclusive("drift", e.reason),
        });
    }

    // only restricted rotations remain; rational input forces rational angles
    let mut lcm = 1usize;
    for c in &nf.components {
        if let ComponentKind::Rotation { angle, .. } = &c.kind {
            let Some(q) = angle.as_rational() else {
                return Ok(inconclusive("finite_order", "irrational rotation angle from rational data"));
            };
            let Some(d) = q.denom().to_usize() else {
                return Ok(inconclusive("finite_order", "rotation denominator too large"));
            };
            lcm = lcm.lcm(&d);
        }
    }
    let n = nf.exponent * lcm;
    Ok(match exact_order(f, n, guard) {
        Ok(Some(order)) => RationalVerdict::FiniteOrder { order },
        Ok(None) => inconclusive("finite_order", format!("f^{n} is not the identity")),
        Err(e) => inconclusive("finite_order", e.to_string()),
    })
}
