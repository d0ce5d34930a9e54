use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::Config;
use crate::dynamics::{classify_bp_growth, periodic_structure, DynamicsError, GrowthClass, Side, WitnessKind};
use crate::map::Aiet;
use crate::numbers::{factor_exponents, Scalar};
use crate::twoslope::orbit::Orbit;

use super::GeneratingSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    SemiHyperbolic,
    BpGrowth,
    ExponentDrift,
}

/// Orbit probe behind an empirical coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalParams {
    pub n_probe: u64,
    pub x: Scalar,
    /// Whether every orbit point of the probe was exact.
    pub exact_orbit: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftCandidate {
    pub prime: u64,
    /// `N_p(D₊fⁿ(x)) / n`.
    pub nu: f64,
    /// `max |N_p|` over generator slopes.
    pub s: i64,
    pub coefficient: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    SemiHyperbolic { point: Scalar, period: usize, side: Side, lambda: Scalar, log_bound: f64 },
    BpGrowth { initial: Scalar, reason: WitnessKind, max_bp: usize },
    ExponentDrift { prime: u64, nu: f64, s: i64, candidates: Vec<DriftCandidate> },
}

/// `l_S(fⁿ) ≥ coefficient·(n − offset)` for the generating set it was built
/// against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub coefficient: f64,
    pub offset: usize,
    /// Coefficient derived from exact data only.
    pub exact: bool,
    pub empirical_params: Option<EmpiricalParams>,
    pub witness: Witness,
}

impl Certificate {
    /// Word-length lower bound this certificate gives for `fⁿ`.
    pub fn lower_bound(&self, n: usize) -> f64 {
        self.coefficient * (n as f64 - self.offset as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("not applicable: {reason}")]
pub struct NotApplicable {
    pub reason: String,
    /// The search hit a horizon or guard rather than ruling the case out.
    pub inconclusive: bool,
}

impl NotApplicable {
    fn new(reason: impl Into<String>) -> Self {
        NotApplicable { reason: reason.into(), inconclusive: false }
    }

    fn limit(reason: impl Into<String>) -> Self {
        NotApplicable { reason: reason.into(), inconclusive: true }
    }
}

/// Certificate from a periodic point `p` of period `l` with one-sided
/// derivative `λ ≠ 1` of `f^l`: `λ^n` is bounded by `Sup^{l_n}`, giving
/// `κ = |ln λ| / (l·max(|ln Inf|, |ln Sup|))`.
pub fn semi_hyperbolic_certificate(f: &Aiet, gens: &GeneratingSet, cfg: &Config) -> Result<Certificate, NotApplicable> {
    let structure = match periodic_structure(f, cfg.max_period, cfg.guard_pieces) {
        Ok(s) => s,
        // points found before the search ran out are still genuine
        Err(DynamicsError::PeriodNotStable { partial, .. }) => *partial,
        Err(e) => return Err(NotApplicable::limit(e.to_string())),
    };
    let m = gens.max_log_slope();
    if m == 0.0 {
        return Err(NotApplicable::new("all generator slopes are 1"));
    }
    let best = structure
        .semi_hyperbolic
        .iter()
        .map(|s| (s.derivative.to_f64().ln().abs() / (s.period as f64 * m), s))
        .max_by(|a, b| a.0.total_cmp(&b.0));
    let Some((kappa, s)) = best else {
        return Err(NotApplicable::new(format!("no semi-hyperbolic periodic point up to period {}", structure.searched)));
    };
    Ok(Certificate {
        kind: CertificateKind::SemiHyperbolic,
        coefficient: kappa,
        offset: 0,
        exact: true,
        empirical_params: None,
        witness: Witness::SemiHyperbolic {
            point: s.point.clone(),
            period: s.period,
            side: s.side,
            lambda: s.derivative.clone(),
            log_bound: m,
        },
    })
}

/// Certificate from linear growth of `#BP(fⁿ)`: since `#BP` is subadditive
/// under composition, `n − N_a ≤ #BP(fⁿ) ≤ l_n·max #BP(g_i)`.
pub fn bp_growth_certificate(f: &Aiet, gens: &GeneratingSet, cfg: &Config) -> Result<Certificate, NotApplicable> {
    let horizon = cfg.horizon_for(f.bp_count());
    match classify_bp_growth(f, horizon, cfg.guard_pieces) {
        Ok(GrowthClass::Linear { witness, offset, reason }) => {
            let max_bp = gens.max_bp();
            Ok(Certificate {
                kind: CertificateKind::BpGrowth,
                coefficient: 1.0 / max_bp as f64,
                offset,
                exact: true,
                empirical_params: None,
                witness: Witness::BpGrowth { initial: witness.initial, reason, max_bp },
            })
        }
        Ok(GrowthClass::Bounded { bound }) => Err(NotApplicable::new(format!("#BP(fⁿ) is bounded by {bound}"))),
        Err(e) if e.is_inconclusive() => Err(NotApplicable::limit(e.to_string())),
        Err(e) => Err(NotApplicable::new(e.to_string())),
    }
}

/// Certificate from the exponent drift of `D₊fⁿ(x)` along one prime: each
/// letter changes the exponent of `p` by at most `S = max |N_p|` over
/// generator slopes, so `|ν|·n ≤ S·l_n`. Every prime with a visible drift is
/// listed; the headline is the largest coefficient.
pub fn drift_certificate(
    f: &Aiet,
    gens: &GeneratingSet,
    basis: &[u64],
    x: &Scalar,
    n_probe: u64,
    cfg: &Config,
) -> Result<Certificate, NotApplicable> {
    if n_probe == 0 {
        return Err(NotApplicable::new("need at least one iterate"));
    }
    let mut per_piece: Vec<Vec<i64>> = Vec::with_capacity(f.piece_count());
    for p in f.pieces() {
        let q = p.slope.as_rational().ok_or_else(|| NotApplicable::new("irrational slope"))?;
        let e = factor_exponents(q, basis).map_err(|e| NotApplicable::new(e.to_string()))?;
        per_piece.push(basis.iter().map(|&p| e.exponent_of(p)).collect());
    }
    let mut totals = vec![0i64; basis.len()];
    let mut orbit = Orbit::new(f, x, cfg);
    for k in 0..n_probe {
        if k > 0 {
            orbit.advance();
        }
        for (t, e) in totals.iter_mut().zip(&per_piece[orbit.piece()]) {
            *t += e;
        }
    }
    // a bounded total (periodic cancellation) must not be mistaken for drift
    let threshold = 100.0 / n_probe as f64;
    let mut candidates = Vec::new();
    for (&prime, &total) in basis.iter().zip(&totals) {
        let nu = total as f64 / n_probe as f64;
        if nu.abs() < threshold {
            continue;
        }
        let s = gens
            .max_exponent(prime, basis)
            .ok_or_else(|| NotApplicable::new("generator slopes do not factor over the basis"))?;
        if s == 0 {
            // the generators cannot produce this drift at all
            return Err(NotApplicable::new(format!("drift along {prime} but no generator slope involves it")));
        }
        candidates.push(DriftCandidate { prime, nu, s, coefficient: nu.abs() / s as f64 });
    }
    let Some(best) = candidates.iter().max_by(|a, b| a.coefficient.total_cmp(&b.coefficient)).cloned() else {
        return Err(NotApplicable::new("no exponent drift above the noise threshold"));
    };
    Ok(Certificate {
        kind: CertificateKind::ExponentDrift,
        coefficient: best.coefficient,
        offset: 0,
        exact: false,
        empirical_params: Some(EmpiricalParams { n_probe, x: x.clone(), exact_orbit: orbit.is_exact() }),
        witness: Witness::ExponentDrift { prime: best.prime, nu: best.nu, s: best.s, candidates },
    })
}
