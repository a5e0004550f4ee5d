//! Exact rational numbers.
//!
//! Values whose numerator and denominator fit into an `i64` are kept inline and
//! all arithmetic on them runs through `i128` intermediates; everything else is
//! promoted to a [`BigRational`]. The representation is canonical (lowest terms,
//! positive denominator, inline whenever possible), so derived equality and
//! hashing are structural.

use alloc::boxed::Box;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::iter::{Product, Sum};
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64, i64),
    Big(Box<BigRational>),
}

/// An exact fraction of arbitrary-precision integers, always in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

/// Error returned when a string is not of the form `p` or `p/q`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

fn small_from_i128(num: i128, den: i128) -> Rational {
    debug_assert!(den != 0);
    let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
    let g = num.gcd(&den);
    if g > 1 {
        num /= g;
        den /= g;
    }
    match (i64::try_from(num), i64::try_from(den)) {
        (Ok(n), Ok(d)) if n != i64::MIN => Rational(Repr::Small(n, d)),
        _ => Rational(Repr::Big(Box::new(BigRational::new_raw(
            BigInt::from(num),
            BigInt::from(den),
        )))),
    }
}

fn from_big(value: BigRational) -> Rational {
    // `value` is assumed reduced.
    if let (Some(n), Some(d)) = (value.numer().to_i64(), value.denom().to_i64()) {
        if n != i64::MIN {
            return Rational(Repr::Small(n, d));
        }
    }
    Rational(Repr::Big(Box::new(value)))
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_integer(n: i64) -> Self {
        small_from_i128(n as i128, 1)
    }

    /// `num / den`; `None` when `den == 0`.
    pub fn new(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            None
        } else {
            Some(small_from_i128(num as i128, den as i128))
        }
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(from_big(BigRational::new(num, den)))
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n > 0,
            Repr::Big(b) => b.is_positive(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        match &self.0 {
            Repr::Small(0, _) => None,
            Repr::Small(n, d) => Some(small_from_i128(*d as i128, *n as i128)),
            Repr::Big(b) => Some(from_big(b.recip())),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Rational::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Returns the value as `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n as i64)
    }
}

impl From<u32> for Rational {
    fn from(n: u32) -> Self {
        Rational::from_integer(n as i64)
    }
}

impl From<usize> for Rational {
    fn from(n: usize) -> Self {
        match i64::try_from(n) {
            Ok(v) => Rational::from_integer(v),
            Err(_) => from_big(BigRational::from_integer(BigInt::from(n))),
        }
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        // Normalize in case the caller built it with `new_raw`.
        let reduced = BigRational::new(value.numer().clone(), value.denom().clone());
        from_big(reduced)
    }
}

fn add_impl(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
            if *ad == 1 && *bd == 1 {
                return small_from_i128(*an as i128 + *bn as i128, 1);
            }
            let num = *an as i128 * *bd as i128 + *bn as i128 * *ad as i128;
            small_from_i128(num, *ad as i128 * *bd as i128)
        }
        _ => from_big(a.to_big() + b.to_big()),
    }
}

fn mul_impl(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
            small_from_i128(*an as i128 * *bn as i128, *ad as i128 * *bd as i128)
        }
        _ => from_big(a.to_big() * b.to_big()),
    }
}

fn div_impl(a: &Rational, b: &Rational) -> Rational {
    assert!(!b.is_zero(), "division of a rational by zero");
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
            small_from_i128(*an as i128 * *bd as i128, *ad as i128 * *bn as i128)
        }
        _ => from_big(a.to_big() / b.to_big()),
    }
}

fn neg_impl(a: &Rational) -> Rational {
    match &a.0 {
        // `Small` never holds `i64::MIN`, so the negation cannot overflow.
        Repr::Small(n, d) => Rational(Repr::Small(-*n, *d)),
        Repr::Big(b) => from_big(-(**b).clone()),
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $imp(self, rhs)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $imp(&self, &rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $imp(&self, rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $imp(self, &rhs)
            }
        }
    };
}

fn sub_impl(a: &Rational, b: &Rational) -> Rational {
    add_impl(a, &neg_impl(b))
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_impl(&self)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_impl(self)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = add_impl(self, rhs);
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = add_impl(self, &rhs);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = sub_impl(self, rhs);
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        *self = sub_impl(self, &rhs);
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = mul_impl(self, rhs);
    }
}

impl MulAssign for Rational {
    fn mul_assign(&mut self, rhs: Rational) {
        *self = mul_impl(self, &rhs);
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                (*an as i128 * *bd as i128).cmp(&(*bn as i128 * *ad as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl<'a> Product<&'a Rational> for Rational {
    fn product<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(String::from(s));
        let t = s.trim();
        let parse_int = |p: &str| -> Result<BigInt, ParseRationalError> {
            let p = p.trim();
            let digits = p.strip_prefix(['-', '+']).unwrap_or(p);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            p.parse::<BigInt>().map_err(|_| err())
        };
        match t.split_once('/') {
            Some((p, q)) => {
                let num = parse_int(p)?;
                let den = parse_int(q)?;
                Rational::from_bigints(num, den).ok_or_else(err)
            }
            None => Ok(from_big(BigRational::from_integer(parse_int(t)?))),
        }
    }
}

/// `Zero`/`One` let the type plug into generic numeric code.
impl Zero for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn lowest_terms_and_sign() {
        assert_eq!(r("2/4"), r("1/2"));
        assert_eq!(r("3/-6"), r("-1/2"));
        assert_eq!(r("-4/-8").to_string(), "1/2");
        assert_eq!(r("6/3").to_string(), "2");
        assert!(Rational::new(1, 0).is_none());
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "1/", "/2", "a", "1/0", "1.5", "1//2", "--1"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn arithmetic() {
        assert_eq!(r("1/3") + r("1/6"), r("1/2"));
        assert_eq!(r("1/3") - r("1/2"), r("-1/6"));
        assert_eq!(r("2/3") * r("3/4"), r("1/2"));
        assert_eq!(r("2/3") / r("4/9"), r("3/2"));
        assert_eq!(r("2/3").pow(3), r("8/27"));
        assert!(r("1/3") < r("1/2"));
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_integer(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq.0, Repr::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(..)));
        let min = Rational::from_integer(i64::MIN);
        assert!(matches!(min.0, Repr::Big(_)));
        assert_eq!(-(-min.clone()), min);
        assert_eq!(r("99999999999999999999/99999999999999999999"), Rational::one());
    }

    #[test]
    fn big_ordering_and_display() {
        let a = r("123456789012345678901234567891/7");
        let b = &a + &Rational::one();
        assert!(a < b);
        assert_eq!(a.to_string(), "123456789012345678901234567891/7");
    }
}
