use std::cmp::Ordering;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::map::Aiet;
use crate::numbers::{factor_exponents, Scalar};

use super::orbit::Orbit;
use super::TwoSlopeError;

/// `(λ1, λ2, a)` when `b` is a circle PL-homeomorphism with slope `λ1` on
/// `[0, a)` and `λ2` on `[a, 1)`, where `a = b⁻¹(0)`. Rotations give
/// `λ1 = λ2 = 1`.
pub fn two_slope_parameters(b: &Aiet) -> Option<(Scalar, Scalar, Scalar)> {
    if !b.is_pl_homeo() {
        return None;
    }
    let a = b.inverse().eval(&Scalar::zero());
    if b.is_iet() {
        return Some((Scalar::one(), Scalar::one(), a));
    }
    let l1 = b.right_slope_at(&Scalar::zero()).clone();
    let l2 = b.right_slope_at(&a).clone();
    let model = Aiet::two_slope_map(&l1, &l2).ok()?;
    (model == *b).then_some((l1, l2, a))
}

fn require_pl_homeo(b: &Aiet) -> Result<(), TwoSlopeError> {
    if b.is_pl_homeo() {
        Ok(())
    } else {
        Err(TwoSlopeError::Precondition("map is not a PL-homeomorphism".into()))
    }
}

/// Counts along `x, B(x), …, B^{n−1}(x)` of points in `[0, a)` and `[a, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisitCounts {
    pub n1: u64,
    pub n2: u64,
    /// Whether every point was computed exactly.
    pub exact: bool,
}

fn visits(b: &Aiet, x: &Scalar, n: u64, cfg: &Config) -> VisitCounts {
    let mut orbit = Orbit::new(b, x, cfg);
    let a = orbit.stepper().point(&b.inverse().eval(&Scalar::zero()));
    let mut n2 = 0;
    for k in 0..n {
        if k > 0 {
            orbit.advance();
        }
        if orbit.cmp_to(&a) != Ordering::Less {
            n2 += 1;
        }
    }
    VisitCounts { n1: n - n2, n2, exact: orbit.is_exact() }
}

/// `N1 = #{k < n : B^k(x) ∈ [0, a)}` and `N2 = n − N1` with `a = B⁻¹(0)`.
pub fn birkhoff_visits(b: &Aiet, x: &Scalar, n: u64, cfg: &Config) -> Result<VisitCounts, TwoSlopeError> {
    require_pl_homeo(b)?;
    Ok(visits(b, x, n, cfg))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationEstimate {
    pub n: u64,
    pub wraps: u64,
    pub rho: f64,
    pub exact: bool,
}

/// Rotation number estimated as the fraction of the first `n` steps that
/// wrap around `1`. A step from `y` wraps iff `y ≥ B⁻¹(0)`.
pub fn rotation_number(b: &Aiet, n: u64, x: &Scalar, cfg: &Config) -> Result<RotationEstimate, TwoSlopeError> {
    require_pl_homeo(b)?;
    if n == 0 {
        return Err(TwoSlopeError::Precondition("need at least one iterate".into()));
    }
    let v = visits(b, x, n, cfg);
    Ok(RotationEstimate { n, wraps: v.n2, rho: v.n2 as f64 / n as f64, exact: v.exact })
}

/// Closed-form rotation number `ln λ1 / (ln λ1 − ln λ2)`.
fn rho_closed_form(l1: &Scalar, l2: &Scalar) -> f64 {
    let (a, b) = (l1.to_f64().ln(), l2.to_f64().ln());
    a / (a - b)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoshReport {
    pub omega: f64,
    pub rho: f64,
    pub grid_n: usize,
    pub max_deviation: f64,
}

/// Compare `B` with `h ∘ R_ρ ∘ h⁻¹`, `h(x) = (ω^x − 1)/(ω − 1)`, on a grid,
/// for `ω = λ1/λ2` and `ρ = ln λ1 / ln ω`.
pub fn verify_boshernitzan(b: &Aiet, tol: f64, grid_n: usize) -> Result<BoshReport, TwoSlopeError> {
    let (l1, l2, _) = two_slope_parameters(b)
        .ok_or_else(|| TwoSlopeError::Precondition("map is not a two-slope map".into()))?;
    if l1 == l2 || grid_n == 0 {
        return Err(TwoSlopeError::Precondition("need two distinct slopes and a nonempty grid".into()));
    }
    let omega = (&l1 / &l2).to_f64();
    let ln_w = omega.ln();
    let rho = l1.to_f64().ln() / ln_w;
    let h = |x: f64| (omega.powf(x) - 1.0) / (omega - 1.0);
    let h_inv = |y: f64| (1.0 + y * (omega - 1.0)).ln() / ln_w;
    let mut max_dev: f64 = 0.0;
    for k in 0..grid_n {
        let y = Scalar::from_ratio(k as i64, grid_n as i64);
        let exact = b.eval(&y).to_f64();
        let model = h((h_inv(y.to_f64()) + rho).fract());
        let d = (exact - model).abs();
        max_dev = max_dev.max(d.min(1.0 - d));
    }
    if max_dev > tol {
        return Err(TwoSlopeError::Tolerance { deviation: max_dev, tol });
    }
    Ok(BoshReport { omega, rho, grid_n, max_deviation: max_dev })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftCoordinate {
    pub prime: u64,
    /// Exponent of `prime` in `λ1`.
    pub beta: i64,
    /// Exponent of `prime` in `λ2`.
    pub delta: i64,
    /// `N_j(D₊Bⁿ(x)) / n`.
    pub value: Scalar,
    /// `ρ(δ − β) + β`.
    pub limit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub n: u64,
    pub visits: VisitCounts,
    pub coordinates: Vec<DriftCoordinate>,
}

/// Exponent coordinates of `D₊Bⁿ(x) = λ1^{N1} λ2^{N2}` over a prime basis,
/// divided by `n`.
pub fn exponent_drift(
    b: &Aiet,
    basis: &[u64],
    x: &Scalar,
    n: u64,
    cfg: &Config,
) -> Result<DriftReport, TwoSlopeError> {
    let (l1, l2, _) = two_slope_parameters(b)
        .ok_or_else(|| TwoSlopeError::Precondition("map is not a two-slope map".into()))?;
    if n == 0 {
        return Err(TwoSlopeError::Precondition("need at least one iterate".into()));
    }
    let (q1, q2) = match (l1.as_rational(), l2.as_rational()) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Err(TwoSlopeError::Precondition("exponent coordinates need rational slopes".into())),
    };
    let e1 = factor_exponents(&q1, basis)?;
    let e2 = factor_exponents(&q2, basis)?;
    let v = visits(b, x, n, cfg);
    let rho = if l1 == l2 { 0.0 } else { rho_closed_form(&l1, &l2) };
    let coordinates = basis
        .iter()
        .map(|&p| {
            let (beta, delta) = (e1.exponent_of(p), e2.exponent_of(p));
            let total = i128::from(beta) * i128::from(v.n1) + i128::from(delta) * i128::from(v.n2);
            let value = Scalar::from_rational(BigRational::new(total.into(), n.into()));
            let limit = if beta == 0 && delta == 0 { 0.0 } else { rho * (delta - beta) as f64 + beta as f64 };
            DriftCoordinate { prime: p, beta, delta, value, limit }
        })
        .collect();
    Ok(DriftReport { n, visits: v, coordinates })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoSlopeAnalysis {
    pub lambda1: Scalar,
    pub lambda2: Scalar,
    /// `λ1/λ2`.
    pub omega: f64,
    pub rho_exact: f64,
    pub rho_empirical: RotationEstimate,
    /// `B⁻¹(0)`.
    pub wrap_point: Scalar,
    pub boshernitzan: Option<BoshReport>,
}

impl TwoSlopeAnalysis {
    pub fn rho_gap(&self) -> f64 {
        (self.rho_exact - self.rho_empirical.rho).abs()
    }
}

/// Closed-form and orbit estimates of the rotation number of a two-slope map
/// (or rotation), plus the explicit conjugacy check when slopes differ.
pub fn analyze_two_slope(b: &Aiet, cfg: &Config) -> Result<TwoSlopeAnalysis, TwoSlopeError> {
    let (l1, l2, a) = two_slope_parameters(b)
        .ok_or_else(|| TwoSlopeError::Precondition("map is not a two-slope map".into()))?;
    let zero = Scalar::zero();
    let (omega, rho_exact, bosh) = if l1 == l2 {
        let angle = b.eval(&zero);
        (1.0, angle.to_f64(), None)
    } else {
        let bosh = verify_boshernitzan(b, cfg.bosh_tol, 1000)?;
        ((&l1 / &l2).to_f64(), rho_closed_form(&l1, &l2), Some(bosh))
    };
    let est = rotation_number(b, cfg.rotation_n as u64, &zero, cfg)?;
    Ok(TwoSlopeAnalysis {
        lambda1: l1,
        lambda2: l2,
        omega,
        rho_exact,
        rho_empirical: est,
        wrap_point: a,
        boshernitzan: bosh,
    })
}
