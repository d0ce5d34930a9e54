use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::map::Aiet;
use crate::numbers::{factor_exponents, Scalar};

use super::DistortionError;

/// Largest radius accepted by [`ball_word_lengths`].
pub const MAX_BALL_RADIUS: usize = 8;

/// Elements kept by one ball enumeration before giving up.
const BALL_ELEMENT_GUARD: usize = 500_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratingSet {
    pub names: Vec<String>,
    pub generators: Vec<Aiet>,
}

impl GeneratingSet {
    pub fn new(names: Vec<String>, generators: Vec<Aiet>) -> Result<Self, DistortionError> {
        if names.len() != generators.len() || generators.is_empty() {
            return Err(DistortionError::Precondition("need one name per generator and at least one".into()));
        }
        Ok(GeneratingSet { names, generators })
    }

    /// Generators named `g1, g2, …`.
    pub fn from_maps(generators: Vec<Aiet>) -> Self {
        let names = (1..=generators.len()).map(|i| format!("g{i}")).collect();
        GeneratingSet { names, generators }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    fn all_slopes(&self) -> Vec<Scalar> {
        let mut s: Vec<Scalar> = self.generators.iter().flat_map(|g| g.slopes()).collect();
        s.sort();
        s.dedup();
        s
    }

    /// Smallest one-sided derivative of any generator.
    pub fn inf_slope(&self) -> Scalar {
        self.all_slopes().into_iter().next().unwrap_or_else(Scalar::one)
    }

    /// Largest one-sided derivative of any generator.
    pub fn sup_slope(&self) -> Scalar {
        self.all_slopes().into_iter().last().unwrap_or_else(Scalar::one)
    }

    /// `max(|ln Inf D₊g|, |ln Sup D₊g|)`; inverses have reciprocal slopes so
    /// the bound covers them too.
    pub fn max_log_slope(&self) -> f64 {
        let lo = self.inf_slope().to_f64().ln().abs();
        let hi = self.sup_slope().to_f64().ln().abs();
        lo.max(hi)
    }

    /// `max #BP(g_i)`.
    pub fn max_bp(&self) -> usize {
        self.generators.iter().map(|g| g.bp_count()).max().unwrap_or(1)
    }

    /// `max |N_p(λ)|` over all generator slopes; `None` if some slope is
    /// irrational or does not factor over `basis`.
    pub fn max_exponent(&self, prime: u64, basis: &[u64]) -> Option<i64> {
        let mut best = 0;
        for s in self.all_slopes() {
            let e = factor_exponents(s.as_rational()?, basis).ok()?;
            best = best.max(e.exponent_of(prime).abs());
        }
        Some(best)
    }

    /// Distinct slopes of all generators.
    pub fn slope_values(&self) -> Vec<Scalar> {
        self.all_slopes()
    }
}

fn letter<'a>(gens: &'a GeneratingSet, inverses: &'a [Aiet], k: i64) -> Result<&'a Aiet, DistortionError> {
    let i = k.unsigned_abs() as usize;
    if k == 0 || i > gens.len() {
        return Err(DistortionError::Precondition(format!("generator index {k} out of range 1..={}", gens.len())));
    }
    Ok(if k > 0 { &gens.generators[i - 1] } else { &inverses[i - 1] })
}

/// Product of a word of signed 1-based generator indices (`-k` is the
/// inverse of generator `k`). The rightmost letter is applied first.
pub fn word_evaluate(gens: &GeneratingSet, word: &[i64], guard: usize) -> Result<Aiet, DistortionError> {
    let inverses: Vec<Aiet> = gens.generators.iter().map(Aiet::inverse).collect();
    let mut acc = Aiet::identity();
    for &k in word.iter().rev() {
        acc = letter(gens, &inverses, k)?.compose_guarded(&acc, guard)?;
    }
    Ok(acc)
}

/// Word length of each target within the ball of the given radius, found
/// by breadth-first enumeration with exact deduplication.
pub fn ball_word_lengths(
    gens: &GeneratingSet,
    radius: usize,
    targets: &[Aiet],
    guard: usize,
) -> Result<Vec<Option<usize>>, DistortionError> {
    if radius > MAX_BALL_RADIUS {
        return Err(DistortionError::Precondition(format!("radius {radius} exceeds {MAX_BALL_RADIUS}")));
    }
    let mut letters: Vec<Aiet> = gens.generators.clone();
    letters.extend(gens.generators.iter().map(Aiet::inverse));
    let mut wanted: HashMap<&Aiet, Vec<usize>> = HashMap::new();
    for (i, t) in targets.iter().enumerate() {
        wanted.entry(t).or_default().push(i);
    }
    let mut out = vec![None; targets.len()];
    let record = |g: &Aiet, len: usize, out: &mut Vec<Option<usize>>| {
        if let Some(idx) = wanted.get(g) {
            for &i in idx {
                out[i].get_or_insert(len);
            }
        }
    };
    let id = Aiet::identity();
    let mut seen: HashSet<Aiet> = HashSet::from([id.clone()]);
    record(&id, 0, &mut out);
    let mut frontier = vec![id];
    for len in 1..=radius {
        if out.iter().all(Option::is_some) {
            break;
        }
        let mut next = Vec::new();
        for g in &frontier {
            for s in &letters {
                let h = s.compose_guarded(g, guard)?;
                if seen.contains(&h) {
                    continue;
                }
                record(&h, len, &mut out);
                seen.insert(h.clone());
                next.push(h);
                if seen.len() > BALL_ELEMENT_GUARD {
                    return Err(DistortionError::BallGuard(BALL_ELEMENT_GUARD));
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}
