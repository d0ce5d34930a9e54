//! Fast orbit stepping on integer representations.
//!
//! A point is stored as `(a + b·√d) / den` with integer `a, b, den` that are
//! not kept in lowest terms; the common factor is removed only when the
//! denominator has doubled in size since the last reduction. Piece laws are
//! precomputed over a shared per-piece denominator, so a step is a handful of
//! big-integer multiplications without any gcd.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::map::Aiet;
use crate::numbers::Scalar;

#[derive(Clone, Debug)]
pub struct Num {
    a: BigInt,
    b: BigInt,
    den: BigInt,
    reduced_bits: u64,
}

#[derive(Clone, Debug)]
struct Law {
    // slope = (sa + sb√d)/m, intercept = (ia + ib√d)/m
    sa: BigInt,
    sb: BigInt,
    ia: BigInt,
    ib: BigInt,
    m: BigInt,
}

/// Integer stepper for a fixed map.
#[derive(Clone, Debug)]
pub struct Stepper {
    radicand: u64,
    d: BigInt,
    quadratic: bool,
    laws: Vec<Law>,
    lefts: Vec<Num>,
}

fn split(x: &Scalar) -> (BigRational, BigRational) {
    x.parts()
}

/// Sign of `p + q·√d` for integers, `d` square-free (or `q = 0`).
fn sign_pq(p: &BigInt, q: &BigInt, d: &BigInt) -> Ordering {
    let sp = p.sign();
    let sq = q.sign();
    if sq == Sign::NoSign {
        return p.cmp(&BigInt::zero());
    }
    if sp == Sign::NoSign || sp == sq {
        return q.cmp(&BigInt::zero());
    }
    let p2 = p * p;
    let q2d = q * q * d;
    let from_sign = |s: Sign| if s == Sign::Plus { Ordering::Greater } else { Ordering::Less };
    match p2.cmp(&q2d) {
        Ordering::Greater => from_sign(sp),
        Ordering::Less => from_sign(sq),
        Ordering::Equal => Ordering::Equal,
    }
}

impl Num {
    fn from_parts(a: &BigRational, b: &BigRational) -> Num {
        let den = a.denom().lcm(b.denom());
        let aa = a.numer() * (&den / a.denom());
        let bb = b.numer() * (&den / b.denom());
        let reduced_bits = den.bits();
        Num { a: aa, b: bb, den, reduced_bits }
    }

    fn reduce(&mut self) {
        let g = self.a.gcd(&self.b).gcd(&self.den);
        if !g.is_one() && !g.is_zero() {
            self.a /= &g;
            self.b /= &g;
            self.den /= &g;
        }
        self.reduced_bits = self.den.bits();
    }

    /// Bits in the largest component.
    pub fn bits(&self) -> u64 {
        self.a.bits().max(self.b.bits()).max(self.den.bits())
    }
}

impl Stepper {
    pub fn new(f: &Aiet) -> Stepper {
        let d = BigInt::from(f.radicand().unwrap_or(0));
        let laws = f
            .pieces()
            .iter()
            .map(|p| {
                let (sa, sb) = split(&p.slope);
                let (ia, ib) = split(&p.intercept);
                let m = sa.denom().lcm(sb.denom()).lcm(ia.denom()).lcm(ib.denom());
                let scale = |q: &BigRational| q.numer() * (&m / q.denom());
                Law { sa: scale(&sa), sb: scale(&sb), ia: scale(&ia), ib: scale(&ib), m }
            })
            .collect();
        let lefts = f
            .pieces()
            .iter()
            .map(|p| {
                let (a, b) = split(&p.left);
                Num::from_parts(&a, &b)
            })
            .collect();
        Stepper { radicand: f.radicand().unwrap_or(0), quadratic: f.radicand().is_some(), d, laws, lefts }
    }

    pub fn point(&self, x: &Scalar) -> Num {
        let (a, b) = split(x);
        Num::from_parts(&a, &b)
    }

    pub fn to_scalar(&self, x: &Num) -> Scalar {
        let a = BigRational::new(x.a.clone(), x.den.clone());
        if x.b.is_zero() {
            return Scalar::from_rational(a);
        }
        let b = BigRational::new(x.b.clone(), x.den.clone());
        Scalar::quadratic(a, b, self.radicand).expect("same field")
    }

    pub fn cmp(&self, x: &Num, y: &Num) -> Ordering {
        let p = &x.a * &y.den - &y.a * &x.den;
        if !self.quadratic {
            return p.cmp(&BigInt::zero());
        }
        let q = &x.b * &y.den - &y.b * &x.den;
        sign_pq(&p, &q, &self.d)
    }

    /// Index of the piece containing `x`.
    pub fn piece_of(&self, x: &Num) -> usize {
        let mut lo = 0;
        let mut hi = self.lefts.len();
        // invariant: lefts[lo] ≤ x < lefts[hi]
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.cmp(&self.lefts[mid], x) != Ordering::Greater {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Piece index if `x` is a break point of the map (a piece left endpoint).
    pub fn break_index(&self, x: &Num) -> Option<usize> {
        let i = self.piece_of(x);
        (self.cmp(&self.lefts[i], x) == Ordering::Equal).then_some(i)
    }

    pub fn step_in(&self, x: &Num, piece: usize) -> Num {
        let law = &self.laws[piece];
        let (a, b) = if self.quadratic {
            (
                &law.sa * &x.a + &law.sb * &x.b * &self.d + &law.ia * &x.den,
                &law.sa * &x.b + &law.sb * &x.a + &law.ib * &x.den,
            )
        } else {
            (&law.sa * &x.a + &law.ia * &x.den, BigInt::zero())
        };
        let mut out = Num { a, b, den: &law.m * &x.den, reduced_bits: x.reduced_bits };
        if out.den.bits() > 2 * out.reduced_bits + 64 {
            out.reduce();
        }
        out
    }

    pub fn step(&self, x: &Num) -> Num {
        self.step_in(x, self.piece_of(x))
    }

    pub fn piece_count(&self) -> usize {
        self.laws.len()
    }

    /// Round `x` down to the dyadic grid `2^-bits`.
    pub fn round_dyadic(&self, x: &Num, bits: u32) -> Num {
        let scale = BigInt::one() << bits;
        let mut numer = &x.a * &scale;
        if !x.b.is_zero() {
            // ⌊|b|·2^bits·√d⌋, then move toward −∞ when b < 0.
            let rad = (&x.b * &x.b) * &self.d * &scale * &scale;
            let root = rad.sqrt();
            if x.b.is_positive() {
                numer += root;
            } else {
                numer -= root + 1;
            }
        }
        let a = numer.div_floor(&x.den);
        Num { a, b: BigInt::zero(), den: scale, reduced_bits: u64::from(bits) }
    }

    pub fn to_f64(&self, x: &Num) -> f64 {
        self.to_scalar(x).to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_aiet, random_point, Family};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_exact_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let f = random_aiet(&mut rng, 7, 40, Family::General);
            let st = Stepper::new(&f);
            let mut x = random_point(&mut rng, 50);
            let mut n = st.point(&x);
            for _ in 0..40 {
                x = f.eval(&x);
                n = st.step(&n);
                assert_eq!(st.to_scalar(&n), x);
            }
        }
    }

    #[test]
    fn quadratic_orbit_and_breaks() {
        let alpha = Scalar::sqrt_of(2) - Scalar::one();
        let f = Aiet::rotation(&alpha).unwrap();
        let st = Stepper::new(&f);
        let mut x = Scalar::zero();
        let mut n = st.point(&x);
        for _ in 0..200 {
            x = f.eval(&x);
            n = st.step(&n);
            assert_eq!(st.to_scalar(&n), x);
        }
        let a = Scalar::from_integer(2) - Scalar::sqrt_of(2);
        assert_eq!(st.break_index(&st.point(&a)), Some(1));
        assert_eq!(st.break_index(&st.point(&Scalar::from_ratio(1, 2))), None);
    }

    #[test]
    fn dyadic_rounding_is_a_floor() {
        let f = Aiet::rotation(&(Scalar::sqrt_of(2) - Scalar::one())).unwrap();
        let st = Stepper::new(&f);
        let x = Scalar::sqrt_of(2) / Scalar::from_integer(3);
        let r = st.to_scalar(&st.round_dyadic(&st.point(&x), 64));
        assert!(r <= x);
        assert!(x < r + Scalar::from_rational(BigRational::new(1.into(), BigInt::one() << 64)));
        let y = -(Scalar::sqrt_of(2)) / Scalar::from_integer(7) + Scalar::one();
        let r = st.to_scalar(&st.round_dyadic(&st.point(&y), 64));
        assert!(r <= y);
    }
}
