//! Exact rational numbers.
//!
//! [`Frac`] keeps values that fit in a pair of `i64` in a small inline form
//! and promotes to an arbitrary-precision [`BigRational`] only when an
//! intermediate result overflows. Both forms are always reduced, the
//! denominator is always positive, and a value is stored in the small form
//! whenever it fits, so equality and hashing are structural.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
enum Repr {
    Small { num: i64, den: i64 },
    Big(BigRational),
}

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone)]
pub struct Frac(Repr);

impl Frac {
    /// `num / den`. Panics if `den` is zero.
    pub fn new(num: i64, den: i64) -> Frac {
        assert!(den != 0, "Frac denominator must be nonzero");
        Frac::from_i128(num as i128, den as i128)
    }

    /// `num / den` for counts. Panics if `den` is zero.
    pub fn ratio(num: usize, den: usize) -> Frac {
        assert!(den != 0, "Frac denominator must be nonzero");
        match (i128::try_from(num), i128::try_from(den)) {
            (Ok(n), Ok(d)) => Frac::from_i128(n, d),
            _ => Frac::from_big(BigRational::new(BigInt::from(num), BigInt::from(den))),
        }
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Frac {
        assert!(!den.is_zero(), "Frac denominator must be nonzero");
        Frac::from_big(BigRational::new(num, den))
    }

    pub fn zero() -> Frac {
        Frac(Repr::Small { num: 0, den: 1 })
    }

    pub fn one() -> Frac {
        Frac(Repr::Small { num: 1, den: 1 })
    }

    pub fn integer(n: i64) -> Frac {
        Frac(Repr::Small { num: n, den: 1 })
    }

    fn from_i128(num: i128, den: i128) -> Frac {
        debug_assert!(den != 0);
        let (num, den) = if den < 0 {
            match (num.checked_neg(), den.checked_neg()) {
                (Some(n), Some(d)) => (n, d),
                _ => return Frac::from_big(BigRational::new(BigInt::from(num), BigInt::from(den))),
            }
        } else {
            (num, den)
        };
        let g = num.unsigned_abs().gcd(&(den as u128));
        let (num, den) = if g > 1 {
            (num / g as i128, den / g as i128)
        } else {
            (num, den)
        };
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(num), Ok(den)) => Frac(Repr::Small { num, den }),
            _ => Frac(Repr::Big(BigRational::new_raw(
                BigInt::from(num),
                BigInt::from(den),
            ))),
        }
    }

    /// Takes an already-reduced big rational and demotes it if it fits.
    fn from_big(r: BigRational) -> Frac {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(num), Some(den)) => Frac(Repr::Small { num, den }),
            _ => Frac(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => {
                BigRational::new_raw(BigInt::from(*num), BigInt::from(*den))
            }
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num > 0,
            Repr::Big(r) => r.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    /// True for values strictly between 0 and 1.
    pub fn in_open_unit(&self) -> bool {
        self.is_positive() && *self < Frac::one()
    }

    pub fn abs(&self) -> Frac {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Panics on zero.
    pub fn recip(&self) -> Frac {
        Frac::one() / self
    }

    pub fn pow(&self, exp: u32) -> Frac {
        let mut base = self.clone();
        let mut acc = Frac::one();
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

    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, den } => BigInt::from(Integer::div_floor(num, den)),
            Repr::Big(r) => r.floor().to_integer(),
        }
    }

    pub fn ceil(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, den } => BigInt::from(Integer::div_ceil(num, den)),
            Repr::Big(r) => r.ceil().to_integer(),
        }
    }

    /// `⌈self⌉` as a `usize`; `None` when negative or too large.
    pub fn ceil_usize(&self) -> Option<usize> {
        self.ceil().to_usize()
    }

    pub fn floor_usize(&self) -> Option<usize> {
        self.floor().to_usize()
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Decimal rendering rounded half away from zero to `sig` significant
    /// digits, computed exactly. No exponent notation.
    pub fn to_decimal(&self, sig: usize) -> String {
        assert!(sig >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let x = self.abs().to_big();
        let ten = BigInt::from(10u32);
        // exponent e with 10^e <= x < 10^(e+1)
        let mut e: i64 =
            (x.numer().to_string().len() as i64) - (x.denom().to_string().len() as i64);
        let pow10 = |k: i64| -> BigRational {
            if k >= 0 {
                BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
            } else {
                BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
            }
        };
        while pow10(e) > x {
            e -= 1;
        }
        while pow10(e + 1) <= x {
            e += 1;
        }
        let shift = sig as i64 - 1 - e;
        let scaled = &x * pow10(shift);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut digits = (scaled + half).floor().to_integer();
        let mut shift = shift;
        if digits.to_string().len() > sig {
            // rounding carried into a new leading digit
            digits /= &ten;
            shift -= 1;
        }
        let s = digits.to_string();
        let body = if shift <= 0 {
            let zeros = "0".repeat((-shift) as usize);
            format!("{s}{zeros}")
        } else {
            let shift = shift as usize;
            if s.len() > shift {
                let (int, frac) = s.split_at(s.len() - shift);
                format!("{int}.{frac}")
            } else {
                format!("0.{}{}", "0".repeat(shift - s.len()), s)
            }
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    fn add_ref(&self, other: &Frac) -> Frac {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) =
            (&self.0, &other.0)
        {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                return Frac::from_i128(a + c, b);
            }
            if let (Some(ad), Some(cb), Some(bd)) =
                (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d))
            {
                if let Some(n) = ad.checked_add(cb) {
                    return Frac::from_i128(n, bd);
                }
            }
        }
        Frac::from_big(self.to_big() + other.to_big())
    }

    fn mul_ref(&self, other: &Frac) -> Frac {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) =
            (&self.0, &other.0)
        {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(n), Some(m)) = (a.checked_mul(c), b.checked_mul(d)) {
                return Frac::from_i128(n, m);
            }
        }
        Frac::from_big(self.to_big() * other.to_big())
    }

    fn div_ref(&self, other: &Frac) -> Frac {
        assert!(!other.is_zero(), "Frac division by zero");
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) =
            (&self.0, &other.0)
        {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(n), Some(m)) = (a.checked_mul(d), b.checked_mul(c)) {
                return Frac::from_i128(n, m);
            }
        }
        Frac::from_big(self.to_big() / other.to_big())
    }

    fn neg_ref(&self) -> Frac {
        match &self.0 {
            Repr::Small { num, den } => Frac::from_i128(-(*num as i128), *den as i128),
            Repr::Big(r) => Frac::from_big(-r.clone()),
        }
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Frac) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Frac {}

impl Ord for Frac {
    fn cmp(&self, other: &Frac) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Frac) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Frac {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small { num, den } => {
                num.hash(state);
                den.hash(state);
            }
            Repr::Big(r) => r.hash(state),
        }
    }
}

impl Default for Frac {
    fn default() -> Frac {
        Frac::zero()
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid fraction {0:?}: expected `num/den` or an integer")]
pub struct ParseFracError(pub String);

impl FromStr for Frac {
    type Err = ParseFracError;

    fn from_str(s: &str) -> Result<Frac, ParseFracError> {
        let err = || ParseFracError(s.to_string());
        let parse_int = |t: &str| -> Result<BigInt, ParseFracError> {
            let digits = t.strip_prefix('-').unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            t.parse::<BigInt>().map_err(|_| err())
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let n = parse_int(n)?;
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Frac::from_bigints(n, d))
            }
            None => Ok(Frac::from_bigints(parse_int(s)?, BigInt::one())),
        }
    }
}

impl From<i64> for Frac {
    fn from(n: i64) -> Frac {
        Frac::integer(n)
    }
}

impl From<usize> for Frac {
    fn from(n: usize) -> Frac {
        Frac::ratio(n, 1)
    }
}

impl From<BigInt> for Frac {
    fn from(n: BigInt) -> Frac {
        Frac::from_big(BigRational::from_integer(n))
    }
}

impl From<BigRational> for Frac {
    fn from(r: BigRational) -> Frac {
        Frac::from_big(r)
    }
}

impl From<&Frac> for BigRational {
    fn from(f: &Frac) -> BigRational {
        f.to_big()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait<&Frac> for &Frac {
            type Output = Frac;
            fn $method(self, rhs: &Frac) -> Frac {
                self.$inner(rhs)
            }
        }
        impl $trait<Frac> for &Frac {
            type Output = Frac;
            fn $method(self, rhs: Frac) -> Frac {
                self.$inner(&rhs)
            }
        }
        impl $trait<&Frac> for Frac {
            type Output = Frac;
            fn $method(self, rhs: &Frac) -> Frac {
                self.$inner(rhs)
            }
        }
        impl $trait<Frac> for Frac {
            type Output = Frac;
            fn $method(self, rhs: Frac) -> Frac {
                self.$inner(&rhs)
            }
        }
        impl $assign_trait<&Frac> for Frac {
            fn $assign_method(&mut self, rhs: &Frac) {
                *self = self.$inner(rhs);
            }
        }
        impl $assign_trait<Frac> for Frac {
            fn $assign_method(&mut self, rhs: Frac) {
                *self = self.$inner(&rhs);
            }
        }
    };
}

forward_binop!(Add, add, add_ref, AddAssign, add_assign);
forward_binop!(Mul, mul, mul_ref, MulAssign, mul_assign);
forward_binop!(Div, div, div_ref, DivAssign, div_assign);

impl Frac {
    fn sub_ref(&self, other: &Frac) -> Frac {
        self.add_ref(&other.neg_ref())
    }
}

forward_binop!(Sub, sub, sub_ref, SubAssign, sub_assign);

impl Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        self.neg_ref()
    }
}

impl Neg for &Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        self.neg_ref()
    }
}

impl Sum for Frac {
    fn sum<I: Iterator<Item = Frac>>(iter: I) -> Frac {
        iter.fold(Frac::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Frac> for Frac {
    fn sum<I: Iterator<Item = &'a Frac>>(iter: I) -> Frac {
        iter.fold(Frac::zero(), |acc, x| acc + x)
    }
}

impl Product for Frac {
    fn product<I: Iterator<Item = Frac>>(iter: I) -> Frac {
        iter.fold(Frac::one(), |acc, x| acc * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Frac {
        s.parse().unwrap()
    }

    #[test]
    fn reduces_and_normalizes_sign() {
        assert_eq!(Frac::new(2, 4), Frac::new(1, 2));
        assert_eq!(Frac::new(3, -6).to_string(), "-1/2");
        assert_eq!(Frac::new(0, -7), Frac::zero());
        assert_eq!(Frac::new(4, 2).to_string(), "2");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Frac::integer(i64::MAX);
        let sum = &big + &big;
        assert_eq!(sum.numer(), BigInt::from(i64::MAX) * 2);
        let back = &sum - &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small { .. }));
        let tiny = Frac::new(1, i64::MAX);
        let sq = &tiny * &tiny;
        assert_eq!(&sq * &Frac::integer(i64::MAX), tiny);
    }

    #[test]
    fn min_value_negation() {
        let m = Frac::integer(i64::MIN);
        let n = -&m;
        assert_eq!(n.numer(), -BigInt::from(i64::MIN));
        assert_eq!(-n, m);
        assert_eq!(Frac::new(1, i64::MIN).numer(), BigInt::from(-1));
    }

    #[test]
    fn ordering_and_rounding() {
        assert!(f("1/3") < f("1/2"));
        assert!(f("-1/2") < f("-1/3"));
        assert_eq!(f("7/2").ceil(), BigInt::from(4));
        assert_eq!(f("-7/2").ceil(), BigInt::from(-3));
        assert_eq!(f("-7/2").floor(), BigInt::from(-4));
        assert_eq!(f("6").ceil(), BigInt::from(6));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let x = f("2/5");
        assert_eq!(x.pow(2), f("4/25"));
        assert_eq!(x.pow(0), Frac::one());
        assert_eq!(x.pow(5), &x * &x * &x * &x * &x);
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "1/0", "a/b", "1/", "/2", "1.5", "1 /2", "--1"] {
            assert!(bad.parse::<Frac>().is_err(), "{bad:?}");
        }
        assert_eq!(f("-3/9"), Frac::new(-1, 3));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(f("2/3").to_decimal(12), "0.666666666667");
        assert_eq!(f("1/2").to_decimal(12), "0.500000000000");
        assert_eq!(f("1").to_decimal(12), "1.00000000000");
        assert_eq!(f("32/59").to_decimal(12), "0.542372881356");
        assert_eq!(f("1/100").to_decimal(3), "0.0100");
        assert_eq!(f("999/1000").to_decimal(2), "1.0");
        assert_eq!(f("-1/3").to_decimal(3), "-0.333");
        assert_eq!(f("1234").to_decimal(2), "1200");
        assert_eq!(Frac::zero().to_decimal(12), "0");
    }
}
