//! Exact arithmetic in the real quadratic fields Q(√k), k ∈ {1, 2, 5}.
//!
//! A [`QuadraticScalar`] is `a + b·√k` with `a`, `b` rational. Elements with
//! `b = 0` are stored with `k = 1` so that plain rationals combine freely with
//! either irrational field. Mixing √2 and √5 is an error.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Square-free radicands supported by the crate.
pub const SUPPORTED_RADICANDS: [u32; 3] = [1, 2, 5];

/// Default number of bits used when rendering to floating point.
pub const DEFAULT_FLOAT_BITS: u32 = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("radicand {0} is not supported (expected 1, 2 or 5)")]
    UnsupportedRadicand(u32),
    #[error("cannot combine elements of Q(sqrt {0}) and Q(sqrt {1})")]
    IncompatibleFields(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero denominator in rational component")]
    ZeroDenominator,
    #[error("float precision {0} is below 53 bits")]
    PrecisionTooLow(u32),
    #[error("cannot parse scalar from {0:?}")]
    Parse(String),
    #[error("integer overflow in fixed-width arithmetic")]
    Overflow,
}

/// Exact sign of a field element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of_rational(x: &BigRational) -> Sign {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// Arithmetic operation selector for [`QuadraticScalar::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// `a + b·√k` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticScalar {
    a: BigRational,
    b: BigRational,
    k: u32,
}

impl QuadraticScalar {
    pub fn new(a: BigRational, b: BigRational, k: u32) -> Result<Self, ScalarError> {
        if !SUPPORTED_RADICANDS.contains(&k) {
            return Err(ScalarError::UnsupportedRadicand(k));
        }
        Ok(Self::canonical(a, b, k))
    }

    fn canonical(a: BigRational, b: BigRational, k: u32) -> Self {
        if b.is_zero() {
            QuadraticScalar { a, b, k: 1 }
        } else if k == 1 {
            // √1 = 1 folds into the rational part
            QuadraticScalar {
                a: a + b,
                b: BigRational::zero(),
                k: 1,
            }
        } else {
            QuadraticScalar { a, b, k }
        }
    }

    pub fn rational(a: BigRational) -> Self {
        QuadraticScalar {
            a,
            b: BigRational::zero(),
            k: 1,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::rational(BigRational::from_integer(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::ZeroDenominator);
        }
        Ok(Self::rational(BigRational::new(num.into(), den.into())))
    }

    /// `(a_num/a_den) + (b_num/b_den)·√k`.
    pub fn from_parts(
        a_num: i64,
        a_den: i64,
        b_num: i64,
        b_den: i64,
        k: u32,
    ) -> Result<Self, ScalarError> {
        if a_den == 0 || b_den == 0 {
            return Err(ScalarError::ZeroDenominator);
        }
        Self::new(
            BigRational::new(a_num.into(), a_den.into()),
            BigRational::new(b_num.into(), b_den.into()),
            k,
        )
    }

    /// `√k` itself.
    pub fn sqrt_of(k: u32) -> Result<Self, ScalarError> {
        Self::new(BigRational::zero(), BigRational::one(), k)
    }

    /// Exact value of a finite float, as a rational.
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self::rational)
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Radicand of the smallest field containing both operands.
    pub fn common_field(&self, other: &Self) -> Result<u32, ScalarError> {
        match (self.k, other.k) {
            (x, y) if x == y => Ok(x),
            (1, y) => Ok(y),
            (x, 1) => Ok(x),
            (x, y) => Err(ScalarError::IncompatibleFields(x, y)),
        }
    }

    pub fn conjugate(&self) -> Self {
        QuadraticScalar {
            a: self.a.clone(),
            b: -self.b.clone(),
            k: self.k,
        }
    }

    /// Field norm `a² − k·b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.k.into())
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let k = self.common_field(rhs)?;
        Ok(Self::canonical(&self.a + &rhs.a, &self.b + &rhs.b, k))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let k = self.common_field(rhs)?;
        Ok(Self::canonical(&self.a - &rhs.a, &self.b - &rhs.b, k))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let k = self.common_field(rhs)?;
        if self.b.is_zero() {
            return Ok(Self::canonical(&self.a * &rhs.a, &self.a * &rhs.b, k));
        }
        if rhs.b.is_zero() {
            return Ok(Self::canonical(&self.a * &rhs.a, &self.b * &rhs.a, k));
        }
        let kk = BigRational::from_integer(k.into());
        let a = &self.a * &rhs.a + &self.b * &rhs.b * kk;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Ok(Self::canonical(a, b, k))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.common_field(rhs)?;
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if rhs.b.is_zero() {
            return Ok(Self::canonical(&self.a / &rhs.a, &self.b / &rhs.a, self.k));
        }
        let n = rhs.norm();
        let num = self.checked_mul(&rhs.conjugate())?;
        Ok(Self::canonical(num.a / &n, num.b / &n, num.k))
    }

    pub fn apply(op: Op, x: &Self, y: &Self) -> Result<Self, ScalarError> {
        match op {
            Op::Add => x.checked_add(y),
            Op::Sub => x.checked_sub(y),
            Op::Mul => x.checked_mul(y),
            Op::Div => x.checked_div(y),
        }
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        Self::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
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

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::canonical(&self.a * r, &self.b * r, self.k)
    }

    /// Exact sign, decided by comparing `a²` with `k·b²` when the parts disagree.
    pub fn signum(&self) -> Sign {
        let sa = Sign::of_rational(&self.a);
        let sb = Sign::of_rational(&self.b);
        if sb == Sign::Zero {
            return sa;
        }
        if sa == Sign::Zero || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2k = &self.b * &self.b * BigRational::from_integer(self.k.into());
        match a2.cmp(&b2k) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Sign::Zero,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Sign::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Sign::Negative
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering, ScalarError> {
        Ok(match self.checked_sub(other)?.signum() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        })
    }

    /// Largest element; panics on mixed fields.
    pub fn max_of<'a, I: IntoIterator<Item = &'a Self>>(items: I) -> Option<Self> {
        let mut best: Option<&Self> = None;
        for x in items {
            best = match best {
                None => Some(x),
                Some(b) if x > b => Some(x),
                keep => keep,
            };
        }
        best.cloned()
    }

    /// Smallest element; panics on mixed fields.
    pub fn min_of<'a, I: IntoIterator<Item = &'a Self>>(items: I) -> Option<Self> {
        let mut best: Option<&Self> = None;
        for x in items {
            best = match best {
                None => Some(x),
                Some(b) if x < b => Some(x),
                keep => keep,
            };
        }
        best.cloned()
    }

    /// Writes the element as `(P + Q·√k) / R` with integers and `R > 0`.
    fn integral_form(&self) -> (BigInt, BigInt, BigInt) {
        let r = self.a.denom().lcm(self.b.denom());
        let p = self.a.numer() * (&r / self.a.denom());
        let q = self.b.numer() * (&r / self.b.denom());
        (p, q, r)
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        let (p, q, r) = self.integral_form();
        let f = if q.is_zero() {
            BigInt::zero()
        } else {
            let s = (&q * &q * BigInt::from(self.k)).sqrt();
            if q.is_positive() {
                s
            } else {
                -s - 1
            }
        };
        (p + f).div_floor(&r)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Rounds to `digits` decimals, ties away from zero, returning the exact rational.
    pub fn round_decimal(&self, digits: u32) -> BigRational {
        let scale = BigInt::from(10u32).pow(digits);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let scaled = self.abs().scale(&BigRational::from_integer(scale.clone()));
        let shifted = Self::canonical(scaled.a + half, scaled.b, scaled.k);
        let n = shifted.floor();
        let n = if self.is_negative() { -n } else { n };
        BigRational::new(n, scale)
    }

    /// Decimal rendering with `digits` places, ties away from zero.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let r = self.round_decimal(digits);
        let scale = BigInt::from(10u32).pow(digits);
        let n = (r * BigRational::from_integer(scale)).to_integer();
        let neg = n.is_negative();
        let s = n.abs().to_string();
        let d = digits as usize;
        let s = if s.len() <= d {
            format!("{}{}", "0".repeat(d + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - d);
        let sign = if neg { "-" } else { "" };
        if d == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// `floor(x · 2^shift)` for any integer shift.
    fn scaled_floor(&self, shift: i64) -> BigInt {
        let two = BigInt::from(2);
        let factor = if shift >= 0 {
            BigRational::from_integer(two.pow(shift as u32))
        } else {
            BigRational::new(BigInt::one(), two.pow((-shift) as u32))
        };
        self.scale(&factor).floor()
    }

    /// Nearest-ish double computed from a `precision`-bit exact truncation.
    pub fn to_float_bits(&self, precision: u32) -> Result<f64, ScalarError> {
        if precision < 53 {
            return Err(ScalarError::PrecisionTooLow(precision));
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        let est = self.a.to_f64().unwrap_or(0.0)
            + self.b.to_f64().unwrap_or(0.0) * (self.k as f64).sqrt();
        let mut shift: i64 = precision as i64 + 8;
        if est.is_finite() && est != 0.0 {
            shift -= est.abs().log2().floor() as i64;
        }
        loop {
            let n = self.scaled_floor(shift);
            if n.bits() >= precision as u64 + 2 || shift > 1 << 16 {
                return Ok(ldexp(n.to_f64().unwrap_or(f64::NAN), -shift));
            }
            shift += 64;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float_bits(DEFAULT_FLOAT_BITS)
            .expect("default precision is valid")
    }
}

fn ldexp(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

impl PartialOrd for QuadraticScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.cmp_exact(other).ok()
    }
}

impl fmt::Display for QuadraticScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let b = self.b.abs();
        let coeff = if b.is_one() {
            String::new()
        } else {
            format!("{b}*")
        };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{lead}{coeff}sqrt{}", self.k)
        } else {
            write!(f, "{} {sign} {coeff}sqrt{}", self.a, self.k)
        }
    }
}

impl FromStr for QuadraticScalar {
    type Err = ScalarError;

    /// Accepts `A` or `A,B,K` with `A`, `B` rationals (`p` or `p/q`); the value is `A + B·√K`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ScalarError::Parse(s.to_string());
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let rat = |t: &str| -> Result<BigRational, ScalarError> {
            let t = t.trim();
            match t.split_once('/') {
                Some((n, d)) => {
                    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(ScalarError::ZeroDenominator);
                    }
                    Ok(BigRational::new(n, d))
                }
                None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
            }
        };
        match parts.as_slice() {
            [a] => Ok(Self::rational(rat(a)?)),
            [a, b, k] => {
                let k: u32 = k.parse().map_err(|_| bad())?;
                Self::new(rat(a)?, rat(b)?, k)
            }
            _ => Err(bad()),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&QuadraticScalar> for &QuadraticScalar {
            type Output = QuadraticScalar;
            fn $m(self, rhs: &QuadraticScalar) -> QuadraticScalar {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $tr<QuadraticScalar> for QuadraticScalar {
            type Output = QuadraticScalar;
            fn $m(self, rhs: QuadraticScalar) -> QuadraticScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QuadraticScalar> for QuadraticScalar {
            type Output = QuadraticScalar;
            fn $m(self, rhs: &QuadraticScalar) -> QuadraticScalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<QuadraticScalar> for &QuadraticScalar {
            type Output = QuadraticScalar;
            fn $m(self, rhs: QuadraticScalar) -> QuadraticScalar {
                self.$m(&rhs)
            }
        }
    };
}

// Operators panic on mixed fields; use the checked_* methods to handle that case.
forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &QuadraticScalar {
    type Output = QuadraticScalar;
    fn neg(self) -> QuadraticScalar {
        QuadraticScalar {
            a: -self.a.clone(),
            b: -self.b.clone(),
            k: self.k,
        }
    }
}

impl Neg for QuadraticScalar {
    type Output = QuadraticScalar;
    fn neg(self) -> QuadraticScalar {
        -&self
    }
}

impl std::iter::Sum for QuadraticScalar {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a QuadraticScalar> for QuadraticScalar {
    fn sum<I: Iterator<Item = &'a QuadraticScalar>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for QuadraticScalar {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for QuadraticScalar {
    fn from(r: BigRational) -> Self {
        Self::rational(r)
    }
}

/// JSON form: integer components are written as exact JSON numbers; `float` is informational.
#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    a_num: serde_json::Number,
    a_den: serde_json::Number,
    b_num: serde_json::Number,
    b_den: serde_json::Number,
    k: u32,
    #[serde(default, skip_deserializing)]
    float: Option<f64>,
}

fn big_to_number(n: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&n.to_string()).expect("integers are valid JSON numbers")
}

fn number_to_big(n: &serde_json::Number) -> Option<BigInt> {
    n.to_string().parse().ok()
}

impl Serialize for QuadraticScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScalarRepr {
            a_num: big_to_number(self.a.numer()),
            a_den: big_to_number(self.a.denom()),
            b_num: big_to_number(self.b.numer()),
            b_den: big_to_number(self.b.denom()),
            k: self.k,
            float: Some(self.to_f64()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ScalarRepr::deserialize(d)?;
        let get = |n: &serde_json::Number| {
            number_to_big(n).ok_or_else(|| D::Error::custom(format!("not an integer: {n}")))
        };
        let (an, ad, bn, bd) = (
            get(&r.a_num)?,
            get(&r.a_den)?,
            get(&r.b_num)?,
            get(&r.b_den)?,
        );
        if ad.is_zero() || bd.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        QuadraticScalar::new(BigRational::new(an, ad), BigRational::new(bn, bd), r.k)
            .map_err(D::Error::custom)
    }
}

/// `a + b·√k` with `i128` coordinates, for hot loops whose inputs share a common denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticInt {
    pub a: i128,
    pub b: i128,
    pub k: u32,
}

impl QuadraticInt {
    pub const fn zero(k: u32) -> Self {
        QuadraticInt { a: 0, b: 0, k }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, ScalarError> {
        Ok(QuadraticInt {
            a: self.a.checked_add(rhs.a).ok_or(ScalarError::Overflow)?,
            b: self.b.checked_add(rhs.b).ok_or(ScalarError::Overflow)?,
            k: self.k,
        })
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, ScalarError> {
        let m = |x: i128, y: i128| x.checked_mul(y).ok_or(ScalarError::Overflow);
        let bb = m(m(self.b, rhs.b)?, self.k as i128)?;
        Ok(QuadraticInt {
            a: m(self.a, rhs.a)?
                .checked_add(bb)
                .ok_or(ScalarError::Overflow)?,
            b: m(self.a, rhs.b)?
                .checked_add(m(self.b, rhs.a)?)
                .ok_or(ScalarError::Overflow)?,
            k: self.k,
        })
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, ScalarError> {
        Ok(QuadraticInt {
            a: self.a.checked_sub(rhs.a).ok_or(ScalarError::Overflow)?,
            b: self.b.checked_sub(rhs.b).ok_or(ScalarError::Overflow)?,
            k: self.k,
        })
    }

    /// Exact sign, with big-integer squares to avoid overflow.
    pub fn signum(self) -> Sign {
        let (a, b) = (BigInt::from(self.a), BigInt::from(self.b));
        let sa = bigint_sign(&a);
        let sb = bigint_sign(&b);
        if sb == Sign::Zero {
            return sa;
        }
        if sa == Sign::Zero || sa == sb {
            return sb;
        }
        match (&a * &a).cmp(&(&b * &b * BigInt::from(self.k))) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Sign::Zero,
        }
    }

    pub fn cmp_exact(self, rhs: Self) -> Result<Ordering, ScalarError> {
        Ok(match self.checked_sub(rhs)?.signum() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        })
    }

    /// Exact value of `self / den`.
    pub fn to_scalar(self, den: &BigInt) -> QuadraticScalar {
        QuadraticScalar::canonical(
            BigRational::new(BigInt::from(self.a), den.clone()),
            BigRational::new(BigInt::from(self.b), den.clone()),
            self.k,
        )
    }
}

/// Scales a family of scalars by their least common denominator.
///
/// Returns the integral coordinates, the denominator and the shared radicand.
pub fn to_common_integers(
    xs: &[QuadraticScalar],
) -> Result<(Vec<QuadraticInt>, BigInt, u32), ScalarError> {
    let mut k = 1;
    let mut den = BigInt::one();
    for x in xs {
        k = match (k, x.k) {
            (p, q) if p == q => p,
            (1, q) => q,
            (p, 1) => p,
            (p, q) => return Err(ScalarError::IncompatibleFields(p, q)),
        };
        den = den.lcm(x.a.denom()).lcm(x.b.denom());
    }
    let to_i = |r: &BigRational| -> Result<i128, ScalarError> {
        (r.numer() * (&den / r.denom()))
            .to_i128()
            .ok_or(ScalarError::Overflow)
    };
    let ints = xs
        .iter()
        .map(|x| {
            Ok(QuadraticInt {
                a: to_i(&x.a)?,
                b: to_i(&x.b)?,
                k,
            })
        })
        .collect::<Result<Vec<_>, ScalarError>>()?;
    Ok((ints, den, k))
}

/// Sign of a big integer as [`Sign`].
pub fn bigint_sign(n: &BigInt) -> Sign {
    match n.sign() {
        BigSign::Minus => Sign::Negative,
        BigSign::NoSign => Sign::Zero,
        BigSign::Plus => Sign::Positive,
    }
}
