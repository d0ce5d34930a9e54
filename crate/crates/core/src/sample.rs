//! Random rational maps for experiments and audits.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::map::{Aiet, Piece};
use crate::numbers::Scalar;

/// Which family a random map is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Arbitrary image order and slopes.
    General,
    /// All slopes 1.
    Iet,
    /// Images in cyclic order: a PL circle homeomorphism.
    PlHomeo,
}

/// Sorted cut points `0 = c₀ < … < c_{k-1} < 1` on the grid `1/denom`.
fn grid_partition<R: Rng + ?Sized>(rng: &mut R, k: usize, denom: i64) -> Vec<Scalar> {
    let mut cuts: Vec<i64> = (1..denom).collect();
    cuts.shuffle(rng);
    let mut chosen: Vec<i64> = cuts.into_iter().take(k - 1).collect();
    chosen.sort_unstable();
    std::iter::once(Scalar::zero())
        .chain(chosen.into_iter().map(|c| Scalar::from_ratio(c, denom)))
        .collect()
}

fn lengths(cuts: &[Scalar]) -> Vec<Scalar> {
    (0..cuts.len())
        .map(|i| cuts.get(i + 1).cloned().unwrap_or_else(Scalar::one) - &cuts[i])
        .collect()
}

/// A random rational AIET with between 1 and `max_pieces` pieces whose break
/// points lie on grids with denominators up to `max_denom`.
pub fn random_aiet<R: Rng + ?Sized>(rng: &mut R, max_pieces: usize, max_denom: i64, family: Family) -> Aiet {
    let k = rng.gen_range(1..=max_pieces.max(1));
    let min_denom = (k as i64).max(2);
    let max_denom = max_denom.max(min_denom + 1);
    let d1 = rng.gen_range(min_denom..=max_denom);
    let domain = grid_partition(rng, k, d1);
    let dom_len = lengths(&domain);
    let mut order: Vec<usize> = (0..k).collect();
    match family {
        Family::PlHomeo => {
            let s = rng.gen_range(0..k);
            order.rotate_left(s);
        }
        _ => order.shuffle(rng),
    }
    // order[i] is the image slot of domain interval i
    let img_len: Vec<Scalar> = match family {
        Family::Iet => {
            let mut slots = vec![Scalar::zero(); k];
            for i in 0..k {
                slots[order[i]] = dom_len[i].clone();
            }
            slots
        }
        _ => {
            let d2 = rng.gen_range(min_denom..=max_denom);
            lengths(&grid_partition(rng, k, d2))
        }
    };
    let mut slot_start = vec![Scalar::zero(); k];
    for s in 1..k {
        slot_start[s] = &slot_start[s - 1] + &img_len[s - 1];
    }
    let pieces = (0..k)
        .map(|i| {
            let slope = &img_len[order[i]] / &dom_len[i];
            let intercept = &slot_start[order[i]] - &(&slope * &domain[i]);
            Piece::new(domain[i].clone(), slope, intercept)
        })
        .collect();
    Aiet::from_pieces(pieces).expect("random construction is a bijection")
}

/// Rational points in `[0, 1)` with denominators up to `max_denom`.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, max_denom: i64) -> Scalar {
    let d = rng.gen_range(1..=max_denom.max(1));
    Scalar::from_ratio(rng.gen_range(0..d), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn families_have_their_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let f = random_aiet(&mut rng, 8, 24, Family::General);
            assert!(f.piece_count() <= 8);
            assert!(random_aiet(&mut rng, 6, 24, Family::Iet).is_iet());
            assert!(random_aiet(&mut rng, 6, 24, Family::PlHomeo).is_pl_homeo());
        }
    }
}
