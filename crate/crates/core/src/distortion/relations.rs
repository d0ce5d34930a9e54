use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::map::Aiet;
use crate::numbers::Scalar;

use super::DistortionError;

/// `b ∘ a^m ∘ b⁻¹ = a^n`, decided exactly.
pub fn bs_relation_check(a: &Aiet, b: &Aiet, m: i64, n: i64, guard: usize) -> Result<bool, DistortionError> {
    let lhs = a.power_guarded(m, guard)?.conjugate_guarded(b, guard)?;
    Ok(lhs == a.power_guarded(n, guard)?)
}

/// Restricted rotation by `delta` on `[a, b)`; `angle = δ/(b − a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationComponent {
    pub a: Scalar,
    pub b: Scalar,
    pub delta: Scalar,
    pub angle: Scalar,
}

/// Split an IET into restricted rotations on minimal invariant intervals.
pub fn restricted_rotation_components(f: &Aiet) -> Result<Vec<RotationComponent>, DistortionError> {
    if !f.is_iet() {
        return Err(DistortionError::Precondition("map is not an interval exchange".into()));
    }
    let rights: Vec<Scalar> = (0..f.piece_count()).map(|i| f.right(i)).collect();
    let mut out = Vec::new();
    for (s, e) in f.support() {
        let mut lo = s;
        while lo < e {
            let found = rights.iter().filter(|r| **r > lo && **r <= e).find_map(|hi| {
                let r = f.restrict(&lo, hi).ok()?;
                Some((hi.clone(), r))
            });
            let Some((hi, r)) = found else {
                return Err(DistortionError::Structure(format!("no invariant interval starting at {lo}")));
            };
            let angle = r.rotation_angle().filter(|t| !t.is_zero()).ok_or_else(|| {
                DistortionError::Precondition(format!("[{lo}, {hi}) does not carry a restricted rotation"))
            })?;
            let delta = &angle * &(&hi - &lo);
            out.push(RotationComponent { a: lo, b: hi.clone(), delta, angle });
            lo = hi;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCondition {
    pub component: usize,
    /// `(m^s − n^s)·θ ∈ ℤ`.
    pub minus_integral: bool,
    /// `(m^s + n^s)·θ ∈ ℤ`.
    pub plus_integral: bool,
    /// Neither sign gives an integer.
    pub contradiction: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsObstruction {
    pub relation_holds: bool,
    pub components: Vec<RotationComponent>,
    /// Smallest `s` with `b^s` preserving every component as an IET.
    pub s: Option<usize>,
    pub conditions: Vec<ComponentCondition>,
    pub contradiction: bool,
}

fn is_integer(x: &Scalar) -> bool {
    x.as_rational().is_some_and(|q| q.is_integer())
}

fn times_int(k: &BigInt, x: &Scalar) -> Scalar {
    &Scalar::from_rational(BigRational::from_integer(k.clone())) * x
}

/// Spectral obstruction to `b a^m b⁻¹ = a^n` when `a` is a product of
/// infinite-order restricted rotations: some power `b^s` preserves each
/// component with slope 1, and then the angle `θ_i` must satisfy
/// `(m^s ∓ n^s)·θ_i ∈ ℤ`.
pub fn bs_obstruction(
    a: &Aiet,
    b: &Aiet,
    m: i64,
    n: i64,
    s_max: usize,
    guard: usize,
) -> Result<BsObstruction, DistortionError> {
    if !bs_relation_check(a, b, m, n, guard)? {
        return Ok(BsObstruction {
            relation_holds: false,
            components: Vec::new(),
            s: None,
            conditions: Vec::new(),
            contradiction: false,
        });
    }
    let components = restricted_rotation_components(a)?;
    if components.is_empty() {
        return Err(DistortionError::Precondition("a is the identity".into()));
    }
    if let Some(c) = components.iter().find(|c| c.angle.is_rational()) {
        return Err(DistortionError::Precondition(format!(
            "rotation on [{}, {}) has rational angle {} and finite order",
            c.a, c.b, c.angle
        )));
    }
    let mut bs = Aiet::identity();
    let mut found = None;
    for s in 1..=s_max {
        bs = b.compose_guarded(&bs, guard)?;
        let preserves = components.iter().all(|c| bs.restrict(&c.a, &c.b).is_ok_and(|r| r.is_iet()));
        if preserves {
            found = Some(s);
            break;
        }
    }
    let s = found.ok_or_else(|| {
        DistortionError::Precondition(format!("no power b^s with s ≤ {s_max} preserves every component"))
    })?;
    let ms = BigInt::from(m).pow(s as u32);
    let ns = BigInt::from(n).pow(s as u32);
    let (minus, plus) = (&ms - &ns, &ms + &ns);
    let conditions: Vec<ComponentCondition> = components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let minus_integral = is_integer(&times_int(&minus, &c.angle));
            let plus_integral = is_integer(&times_int(&plus, &c.angle));
            ComponentCondition { component: i, minus_integral, plus_integral, contradiction: !(minus_integral || plus_integral) }
        })
        .collect();
    let contradiction = conditions.iter().any(|c| c.contradiction);
    Ok(BsObstruction { relation_holds: true, components, s: Some(s), conditions, contradiction })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilpotentReport {
    /// `c = u v u⁻¹ v⁻¹`.
    pub commutator: Aiet,
    /// Whether `c` commutes with both `u` and `v`.
    pub central: bool,
    /// `[u^p, v^q] = c^{pq}`; `None` when `c` is not central.
    pub identity_holds: Option<bool>,
    /// `(n, [uⁿ, vⁿ] = c^{n²})` for `n = 1..=5`.
    pub witnesses: Vec<(i64, bool)>,
}

/// Check the commutator identity of a two-step nilpotent pair.
pub fn nilpotent_commutator_check(
    u: &Aiet,
    v: &Aiet,
    p: i64,
    q: i64,
    guard: usize,
) -> Result<NilpotentReport, DistortionError> {
    let comm = |x: &Aiet, y: &Aiet| -> Result<Aiet, DistortionError> {
        let xy = x.compose_guarded(y, guard)?;
        let xyx = xy.compose_guarded(&x.inverse(), guard)?;
        Ok(xyx.compose_guarded(&y.inverse(), guard)?)
    };
    let c = comm(u, v)?;
    let commutes = |x: &Aiet| -> Result<bool, DistortionError> {
        Ok(c.compose_guarded(x, guard)? == x.compose_guarded(&c, guard)?)
    };
    let central = commutes(u)? && commutes(v)?;
    if !central {
        return Ok(NilpotentReport { commutator: c, central, identity_holds: None, witnesses: Vec::new() });
    }
    let lhs = comm(&u.power_guarded(p, guard)?, &v.power_guarded(q, guard)?)?;
    let identity_holds = lhs == c.power_guarded(p * q, guard)?;
    let mut witnesses = Vec::new();
    for k in 1..=5 {
        let lhs = comm(&u.power_guarded(k, guard)?, &v.power_guarded(k, guard)?)?;
        witnesses.push((k, lhs == c.power_guarded(k * k, guard)?));
    }
    Ok(NilpotentReport { commutator: c, central, identity_holds: Some(identity_holds), witnesses })
}
