use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::NumberError;

/// Coordinates of a positive rational over a list of primes:
/// `q = ∏ basis[j] ^ exponents[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentVector {
    pub basis: Vec<u64>,
    pub exponents: Vec<i64>,
}

impl ExponentVector {
    pub fn reconstruct(&self) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (&p, &e) in self.basis.iter().zip(&self.exponents) {
            let pe = BigInt::from(p).pow(e.unsigned_abs() as u32);
            if e >= 0 {
                num *= pe;
            } else {
                den *= pe;
            }
        }
        BigRational::new(num, den)
    }

    /// Exponent for `prime`, zero when the prime is not in the basis.
    pub fn exponent_of(&self, prime: u64) -> i64 {
        self.basis.iter().position(|&p| p == prime).map_or(0, |i| self.exponents[i])
    }
}

fn strip(n: &mut BigUint, p: &BigUint) -> i64 {
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        *n = q;
        e += 1;
    }
}

/// Exponents of `q` over `basis`; fails if `q ≤ 0` or a prime factor is missing
/// from the basis.
pub fn factor_exponents(q: &BigRational, basis: &[u64]) -> Result<ExponentVector, NumberError> {
    if !q.is_positive() {
        return Err(NumberError::NotPositiveRational(q.to_string()));
    }
    let mut num = q.numer().magnitude().clone();
    let mut den = q.denom().magnitude().clone();
    let mut exponents = Vec::with_capacity(basis.len());
    for &p in basis {
        let pb = BigUint::from(p);
        let e = strip(&mut num, &pb) - strip(&mut den, &pb);
        exponents.push(e);
    }
    if !num.is_one() {
        return Err(NumberError::PrimeOutsideBasis(num));
    }
    if !den.is_one() {
        return Err(NumberError::PrimeOutsideBasis(den));
    }
    Ok(ExponentVector { basis: basis.to_vec(), exponents })
}

/// Sorted primes dividing any numerator or denominator of `values`.
///
/// Panics if a prime factor exceeds 64 bits, which is far beyond any slope a
/// map in this library can produce from reasonable input.
pub fn multiplicative_basis(values: &[BigRational]) -> Vec<u64> {
    let mut primes = BTreeSet::new();
    for q in values {
        for n in [q.numer().magnitude(), q.denom().magnitude()] {
            for p in prime_factors(n) {
                primes.insert(p.to_u64().expect("prime factor beyond 64 bits"));
            }
        }
    }
    primes.into_iter().collect()
}

const SMALL_PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller–Rabin with the first twelve prime bases; deterministic below 3.3·10²⁴
/// and a strong probable-prime test beyond.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard's rho (Brent variant) for a composite odd `n`.
fn pollard_rho(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..(128.min(r - k)) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn prime_factors(n: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    let mut n = n.clone();
    let mut p = 2u32;
    while p < 1000 {
        let pb = BigUint::from(p);
        if &pb * &pb > n {
            break;
        }
        if strip(&mut n, &pb) > 0 {
            out.push(pb);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            out.push(m);
            continue;
        }
        let d = pollard_rho(&m);
        let e = &m / &d;
        stack.push(d);
        stack.push(e);
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(factor_exponents(&q(4, 9), &[2, 3]).unwrap().exponents, vec![2, -2]);
        assert_eq!(factor_exponents(&q(1, 1), &[2]).unwrap().exponents, vec![0]);
        assert!(matches!(
            factor_exponents(&q(6, 5), &[2, 3]),
            Err(NumberError::PrimeOutsideBasis(_))
        ));
        assert!(factor_exponents(&q(-1, 2), &[2]).is_err());
    }

    #[test]
    fn basis_examples() {
        assert_eq!(multiplicative_basis(&[q(2, 1), q(1, 3)]), vec![2, 3]);
        assert_eq!(multiplicative_basis(&[q(1, 1)]), Vec::<u64>::new());
        assert_eq!(multiplicative_basis(&[q(4, 9), q(10, 3)]), vec![2, 3, 5]);
    }

    #[test]
    fn large_semiprime_splits() {
        // 1000003 · 999983 needs the rho stage.
        let n = BigUint::from(1_000_003u64) * BigUint::from(999_983u64);
        assert_eq!(prime_factors(&n), vec![BigUint::from(999_983u64), BigUint::from(1_000_003u64)]);
        assert!(is_prime(&BigUint::from(2_147_483_647u64)));
        assert!(!is_prime(&BigUint::from(3_215_031_751u64)));
    }

    proptest! {
        #[test]
        fn factor_then_reconstruct(n in 1i64..2_000_000, d in 1i64..2_000_000) {
            let v = q(n, d);
            let basis = multiplicative_basis(std::slice::from_ref(&v));
            let ev = factor_exponents(&v, &basis).unwrap();
            prop_assert_eq!(ev.reconstruct(), v);
        }
    }
}
