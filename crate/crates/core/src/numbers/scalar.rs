use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::NumberError;

/// An exact real number: either a rational or an element `a + b·√d` of a real
/// quadratic field.
///
/// Values are kept normalized: `b = 0` collapses to [`Scalar::Rational`] and
/// `d` is always square-free and greater than one, so structural equality is
/// numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Quadratic(Surd),
}

/// `a + b·√d` with `b ≠ 0` and `d > 1` square-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    a: BigRational,
    b: BigRational,
    d: u64,
}

impl Surd {
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_coefficient(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Largest `s` with `s² | n`, returning `(s, n / s²)`.
fn split_square(mut n: u64) -> (u64, u64) {
    let mut square = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        while n.is_multiple_of(p * p) {
            n /= p * p;
            square *= p;
        }
        p += 1;
    }
    (square, n)
}

/// Sign of `a + b·√d` decided by rational squaring only.
fn surd_sign(a: &BigRational, b: &BigRational, d: u64) -> Ordering {
    let sa = a.cmp(&BigRational::zero());
    let sb = b.cmp(&BigRational::zero());
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // Opposite signs: compare a² against b²d.
    let a2 = a * a;
    let b2d = b * b * BigRational::from_integer(BigInt::from(d));
    match a2.cmp(&b2d) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`; panics when `denom == 0`.
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Scalar::Rational(ratio(numer, denom))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar::Rational(q)
    }

    /// `a + b·√d` for an arbitrary positive `d`; square factors of `d` are
    /// pulled out and perfect squares give a rational.
    pub fn quadratic(a: BigRational, b: BigRational, d: u64) -> Result<Self, NumberError> {
        if d == 0 {
            return Ok(Scalar::Rational(a));
        }
        let (s, r) = split_square(d);
        let b = b * BigRational::from_integer(BigInt::from(s));
        if r == 1 {
            return Ok(Scalar::Rational(a + b));
        }
        Ok(Self::normalized(a, b, r))
    }

    /// `√d`.
    pub fn sqrt_of(d: u64) -> Self {
        Self::quadratic(BigRational::zero(), BigRational::one(), d).expect("positive radicand")
    }

    /// Square root of a non-negative rational, when it lies in some `ℚ(√d)`.
    pub fn sqrt_rational(q: &BigRational) -> Result<Self, NumberError> {
        if q.is_negative() {
            return Err(NumberError::NegativeSqrt);
        }
        // √(p/q) = √(p·q) / q
        let pq = q.numer() * q.denom();
        let radicand = pq.to_u64().ok_or(NumberError::RadicandTooLarge)?;
        let root = Self::sqrt_of(radicand);
        root.checked_div(&Scalar::Rational(BigRational::from_integer(q.denom().clone())))
    }

    fn normalized(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() {
            Scalar::Rational(a)
        } else {
            Scalar::Quadratic(Surd { a, b, d })
        }
    }

    /// Radicand of the field this value lives in, `None` for rationals.
    pub fn radicand(&self) -> Option<u64> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Quadratic(s) => Some(s.d),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Quadratic(_) => None,
        }
    }

    /// Rational and irrational parts `(a, b)` of `a + b·√d` (`b = 0` for rationals).
    pub fn parts(&self) -> (BigRational, BigRational) {
        match self {
            Scalar::Rational(q) => (q.clone(), BigRational::zero()),
            Scalar::Quadratic(s) => (s.a.clone(), s.b.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_one())
    }

    /// Exact sign as an ordering against zero.
    pub fn signum(&self) -> Ordering {
        match self {
            Scalar::Rational(q) => q.cmp(&BigRational::zero()),
            Scalar::Quadratic(s) => surd_sign(&s.a, &s.b, s.d),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    fn common_radicand(&self, other: &Self) -> Result<Option<u64>, NumberError> {
        match (self.radicand(), other.radicand()) {
            (Some(x), Some(y)) if x != y => Err(NumberError::IncompatibleRadicands(x, y)),
            (Some(x), _) | (None, Some(x)) => Ok(Some(x)),
            (None, None) => Ok(None),
        }
    }

    /// Whether the two values can be combined without leaving a single `ℚ(√d)`.
    pub fn compatible(&self, other: &Self) -> bool {
        self.common_radicand(other).is_ok()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NumberError> {
        Ok(match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            _ => {
                let d = self.common_radicand(other)?.expect("one side is quadratic");
                let (a1, b1) = self.parts();
                let (a2, b2) = other.parts();
                Self::normalized(a1 + a2, b1 + b2, d)
            }
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NumberError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NumberError> {
        Ok(match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            _ => {
                let d = self.common_radicand(other)?.expect("one side is quadratic");
                let (a1, b1) = self.parts();
                let (a2, b2) = other.parts();
                let dd = BigRational::from_integer(BigInt::from(d));
                let a = &a1 * &a2 + &b1 * &b2 * dd;
                let b = a1 * b2 + a2 * b1;
                Self::normalized(a, b, d)
            }
        })
    }

    pub fn recip(&self) -> Result<Self, NumberError> {
        match self {
            Scalar::Rational(q) => {
                if q.is_zero() {
                    Err(NumberError::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(q.recip()))
                }
            }
            Scalar::Quadratic(s) => {
                // (a - b√d) / (a² - b²d); the norm is nonzero because d is not a square.
                let norm = &s.a * &s.a - &s.b * &s.b * BigRational::from_integer(BigInt::from(s.d));
                Ok(Self::normalized(&s.a / &norm, -(&s.b / &norm), s.d))
            }
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NumberError> {
        self.common_radicand(other)?;
        self.checked_mul(&other.recip()?)
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, NumberError> {
        match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Ok(x.cmp(y)),
            _ => Ok(self.checked_sub(other)?.signum()),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        match self {
            Scalar::Rational(q) => q.numer().div_floor(q.denom()),
            Scalar::Quadratic(s) => {
                // |b|√d lies in [t, t + 1) with t = ⌊√⌊b²d⌋⌋; refine exactly.
                let b2d = &s.b * &s.b * BigRational::from_integer(BigInt::from(s.d));
                let t = b2d.numer().div_floor(b2d.denom()).sqrt();
                let base = s.a.numer().div_floor(s.a.denom());
                let mut guess = if s.b.is_positive() { base + t } else { base - t - 1 };
                loop {
                    let g = Scalar::Rational(BigRational::from_integer(guess.clone()));
                    if g > *self {
                        guess -= 1;
                        continue;
                    }
                    let next = Scalar::Rational(BigRational::from_integer(&guess + 1));
                    if next <= *self {
                        guess += 1;
                        continue;
                    }
                    return guess;
                }
            }
        }
    }

    /// Fractional part `x − ⌊x⌋ ∈ [0, 1)`.
    pub fn fract(&self) -> Self {
        self - &Scalar::Rational(BigRational::from_integer(self.floor()))
    }

    /// `⌊2^bits · x⌋ / 2^bits`: the dyadic rational just below `x`.
    pub fn dyadic_floor(&self, bits: u32) -> Self {
        let scale = BigInt::one() << bits;
        let scaled = self * &Scalar::Rational(BigRational::from_integer(scale.clone()));
        Scalar::Rational(BigRational::new(scaled.floor(), scale))
    }

    /// Nearest `f64`; exact comparisons never go through this.
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(q) => rational_to_f64(q),
            Scalar::Quadratic(s) => {
                rational_to_f64(&s.a) + rational_to_f64(&s.b) * (s.d as f64).sqrt()
            }
        }
    }

    /// Total bit length of all numerators and denominators.
    pub fn bit_size(&self) -> u64 {
        let q_bits = |q: &BigRational| q.numer().bits() + q.denom().bits();
        match self {
            Scalar::Rational(q) => q_bits(q),
            Scalar::Quadratic(s) => q_bits(&s.a) + q_bits(&s.b),
        }
    }

    /// Midpoint of two values.
    pub fn midpoint(&self, other: &Self) -> Self {
        (self + other) * Scalar::from_ratio(1, 2)
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerator and denominator: shift both down first.
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
    let n = q.numer() >> shift;
    let d = q.denom() >> shift;
    if d.is_zero() {
        return if n.sign() == Sign::Minus { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order by real value.
///
/// Panics when the operands live in different quadratic fields; use
/// [`Scalar::try_cmp`] where that can happen.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.try_cmp(other).expect("comparison across incompatible radicands")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Quadratic(s) => Scalar::Quadratic(Surd { a: -&s.a, b: -&s.b, d: s.d }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

// Operator forms panic on incompatible radicands; the map types validate a
// single radicand up front so internal arithmetic never hits that case.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect(concat!("scalar ", stringify!($method)))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Rational(q)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => fmt_rational(q, f),
            Scalar::Quadratic(s) => {
                let negative = s.b.is_negative();
                let mag = s.b.abs();
                if !s.a.is_zero() {
                    fmt_rational(&s.a, f)?;
                    write!(f, " {} ", if negative { '-' } else { '+' })?;
                } else if negative {
                    write!(f, "-")?;
                }
                if !mag.is_one() {
                    fmt_rational(&mag, f)?;
                    write!(f, "*")?;
                }
                write!(f, "sqrt({})", s.d)
            }
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        super::parse_scalar(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    fn s2() -> Scalar {
        Scalar::sqrt_of(2)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(q(1, 3) + q(2, 3), Scalar::one());
        let one = Scalar::one();
        assert_eq!((&one + &s2()) * (&one - &s2()), Scalar::from_integer(-1));
        let half = q(1, 2);
        let err = (&s2() * &half).checked_add(&(Scalar::sqrt_of(3) * &half));
        assert_eq!(err, Err(NumberError::IncompatibleRadicands(2, 3)));
        assert_eq!(q(1, 2).checked_div(&Scalar::zero()), Err(NumberError::DivisionByZero));
    }

    #[test]
    fn normalization() {
        assert_eq!(Scalar::sqrt_of(8), Scalar::from_integer(2) * s2());
        assert_eq!(Scalar::sqrt_of(16), Scalar::from_integer(4));
        assert!((s2() - s2()).is_rational());
        assert_eq!((&s2() * &s2()), Scalar::from_integer(2));
    }

    #[test]
    fn compare_examples() {
        assert_eq!((s2() - Scalar::one()).cmp(&q(2, 5)), Ordering::Greater);
        assert_eq!(q(1, 2).cmp(&q(1, 2)), Ordering::Equal);
        assert_eq!((Scalar::one() - s2() * q(1, 2)).cmp(&Scalar::zero()), Ordering::Greater);
        assert!(s2().try_cmp(&Scalar::sqrt_of(3)).is_err());
    }

    #[test]
    fn floor_and_fract() {
        assert_eq!(s2().floor(), BigInt::from(1));
        assert_eq!((-s2()).floor(), BigInt::from(-2));
        assert_eq!((s2() * Scalar::from_integer(2)).fract(), s2() * Scalar::from_integer(2) - Scalar::from_integer(2));
        assert_eq!(q(-1, 3).floor(), BigInt::from(-1));
        assert_eq!(q(7, 1).floor(), BigInt::from(7));
    }

    #[test]
    fn recip_of_surd() {
        let x = Scalar::one() + s2();
        assert_eq!(x.recip().unwrap(), s2() - Scalar::one());
    }

    fn arb_surd() -> impl Strategy<Value = Scalar> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(a, da, b, db)| {
            q(a, da) + q(b, db) * Scalar::sqrt_of(2)
        })
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_surd(), y in arb_surd(), z in arb_surd()) {
            prop_assert_eq!((&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!((&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &x * &y + &x * &z);
            if !y.is_zero() {
                prop_assert_eq!(&(&x / &y) * &y, x.clone());
            }
        }

        #[test]
        fn order_agrees_with_floats(x in arb_surd(), y in arb_surd()) {
            let exact = x.cmp(&y);
            let fx = x.to_f64();
            let fy = y.to_f64();
            if (fx - fy).abs() > 1e-9 {
                prop_assert_eq!(exact, fx.partial_cmp(&fy).unwrap());
            }
            prop_assert_eq!(exact, y.cmp(&x).reverse());
        }

        #[test]
        fn order_is_transitive(x in arb_surd(), y in arb_surd(), z in arb_surd()) {
            if x <= y && y <= z {
                prop_assert!(x <= z);
            }
        }

        #[test]
        fn floor_brackets(x in arb_surd()) {
            let f = Scalar::from_rational(BigRational::from_integer(x.floor()));
            prop_assert!(f <= x);
            prop_assert!(x < f + Scalar::one());
        }
    }
}
