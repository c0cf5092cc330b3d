//! Exact rationals and base-2 log magnitudes.
//!
//! [`Exact`] is the ground truth for everything that is asserted as an
//! identity or an exact inequality. [`LogMagnitude`] stores `log2|x|` split
//! into an integer part and a fractional part so that magnitudes such as
//! `2^(2^20)` keep 52 bits of relative precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form (lowest terms, positive denominator).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exact(BigRational);

impl Exact {
    pub fn zero() -> Self {
        Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Exact(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Exact(BigRational::from_integer(n))
    }

    /// `num/den`; fails when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Exact(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_big_ratio(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Exact(BigRational::new(num, den)))
    }

    /// `2^e` for any signed exponent.
    pub fn pow2(e: i64) -> Self {
        let p = BigInt::one() << e.unsigned_abs();
        if e >= 0 {
            Exact(BigRational::from_integer(p))
        } else {
            Exact(BigRational::new_raw(BigInt::one(), p))
        }
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Exact(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Exact(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Exact) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Exact(&self.0 / &rhs.0))
    }

    /// Integer power; negative exponents invert (and fail on zero).
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let e32 = i32::try_from(e).map_err(|_| Error::Overflow(format!("exponent {e}")))?;
        Ok(Exact(num_traits::Pow::pow(&self.0, e32)))
    }

    /// `Some(e)` when `|self| == 2^e`.
    pub fn log2_if_power_of_two(&self) -> Option<i64> {
        fn pow2_exp(n: &BigInt) -> Option<i64> {
            let m = n.magnitude();
            if m.is_zero() {
                return None;
            }
            let tz = m.trailing_zeros()?;
            if m.bits() == tz + 1 {
                Some(tz as i64)
            } else {
                None
            }
        }
        let n = pow2_exp(self.numer())?;
        let d = pow2_exp(self.denom())?;
        Some(n - d)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            let l = self.to_log().log2();
            if self.0.is_negative() {
                -(l.exp2())
            } else {
                l.exp2()
            }
        })
    }

    /// `log2|self|`; zero maps to the `-inf` sentinel.
    pub fn to_log(&self) -> LogMagnitude {
        LogMagnitude::from_exact(self)
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Decimal approximation with `digits` fractional digits (truncated toward zero).
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let neg = self.0.is_negative();
        let n = self.numer().magnitude().clone();
        let d = self.denom().magnitude().clone();
        let (q, r) = n.div_rem(&d);
        let scale = BigUint::from(10u32).pow(digits as u32);
        let frac = (r * &scale) / &d;
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push_str(&q.to_string());
        if digits > 0 {
            let f = frac.to_string();
            s.push('.');
            for _ in f.len()..digits {
                s.push('0');
            }
            s.push_str(&f);
        }
        s
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Exact {
    type Err = Error;

    /// Accepts `p`, `p/q`, and finite decimals such as `-0.125`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return Exact::from_big_ratio(n, d);
        }
        if let Some((ip, fp)) = s.split_once('.') {
            if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let neg = ip.trim_start().starts_with('-');
            let ip_abs = ip.trim().trim_start_matches(['-', '+']);
            let whole: BigInt = if ip_abs.is_empty() {
                BigInt::zero()
            } else {
                ip_abs.parse().map_err(|_| bad())?
            };
            let frac: BigInt = fp.parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), fp.len());
            let mag = whole * &scale + frac;
            let num = if neg { -mag } else { mag };
            return Exact::from_big_ratio(num, scale);
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Exact::from_bigint(n))
    }
}

impl From<i64> for Exact {
    fn from(n: i64) -> Self {
        Exact::from_int(n)
    }
}

impl From<BigRational> for Exact {
    fn from(r: BigRational) -> Self {
        Exact(r)
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, rhs: Exact) -> Exact {
        Exact(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Exact> for &'a Exact {
    type Output = Exact;
    fn add(self, rhs: &Exact) -> Exact {
        Exact(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Exact> for Exact {
    fn add_assign(&mut self, rhs: &Exact) {
        self.0 += &rhs.0;
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        Exact(self.0 - rhs.0)
    }
}

impl<'a> Sub<&'a Exact> for &'a Exact {
    type Output = Exact;
    fn sub(self, rhs: &Exact) -> Exact {
        Exact(&self.0 - &rhs.0)
    }
}

impl Mul for Exact {
    type Output = Exact;
    fn mul(self, rhs: Exact) -> Exact {
        Exact(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Exact> for &'a Exact {
    type Output = Exact;
    fn mul(self, rhs: &Exact) -> Exact {
        Exact(&self.0 * &rhs.0)
    }
}

impl MulAssign<&Exact> for Exact {
    fn mul_assign(&mut self, rhs: &Exact) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact(-self.0)
    }
}

impl std::iter::Sum for Exact {
    fn sum<I: Iterator<Item = Exact>>(iter: I) -> Exact {
        iter.fold(Exact::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Exact> for Exact {
    fn sum<I: Iterator<Item = &'a Exact>>(iter: I) -> Exact {
        let mut acc = Exact::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}

/// Binary field operation selector for [`exact_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Cmp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithResult {
    Value(Exact),
    Ordering(Ordering),
}

pub fn exact_arith(a: &Exact, b: &Exact, op: ArithOp) -> Result<ArithResult> {
    Ok(match op {
        ArithOp::Add => ArithResult::Value(a + b),
        ArithOp::Sub => ArithResult::Value(a - b),
        ArithOp::Mul => ArithResult::Value(a * b),
        ArithOp::Div => ArithResult::Value(a.checked_div(b)?),
        ArithOp::Cmp => ArithResult::Ordering(a.cmp(b)),
    })
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Exact", 2)?;
        st.serialize_field("num", &self.numer().to_string())?;
        st.serialize_field("den", &self.denom().to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Exact {
    /// Accepts `{"num": "...", "den": "..."}`, a string such as `"1/2"`, or a JSON integer.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExactVisitor;

        impl<'de> Visitor<'de> for ExactVisitor {
            type Value = Exact;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an exact rational: {\"num\",\"den\"}, \"p/q\", or an integer")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exact, E> {
                Ok(Exact::from_int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exact, E> {
                Ok(Exact::from_bigint(BigInt::from(v)))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exact, E> {
                BigRational::from_float(v)
                    .map(Exact)
                    .ok_or_else(|| E::custom("non-finite number"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exact, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Exact, A::Error> {
                let mut num: Option<String> = None;
                let mut den: Option<String> = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "num" => num = Some(map.next_value::<NumField>()?.0),
                        "den" => den = Some(map.next_value::<NumField>()?.0),
                        other => return Err(de::Error::unknown_field(other, &["num", "den"])),
                    }
                }
                let num = num.ok_or_else(|| de::Error::missing_field("num"))?;
                let den = den.unwrap_or_else(|| "1".to_string());
                let n: BigInt = num.parse().map_err(|_| de::Error::custom("bad numerator"))?;
                let d: BigInt = den.parse().map_err(|_| de::Error::custom("bad denominator"))?;
                if d.sign() == Sign::NoSign {
                    return Err(de::Error::custom("zero denominator"));
                }
                Ok(Exact(BigRational::new(n, d)))
            }
        }

        deserializer.deserialize_any(ExactVisitor)
    }
}

/// Integer-or-string numerator/denominator field.
struct NumField(String);

impl<'de> Deserialize<'de> for NumField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
            U(u64),
        }
        Ok(NumField(match Raw::deserialize(d)? {
            Raw::S(s) => s,
            Raw::I(i) => i.to_string(),
            Raw::U(u) => u.to_string(),
        }))
    }
}

/// `log2|x|` as `int + frac` with `frac ∈ [0, 1)`.
///
/// Zero is represented by the `-inf` sentinel. `exact` is set when the
/// magnitude is a power of two (so `frac == 0` holds exactly).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogMagnitude {
    int: i64,
    frac: f64,
    exact: bool,
}

const ZERO_SENTINEL: i64 = i64::MIN;

impl LogMagnitude {
    pub const ZERO: LogMagnitude = LogMagnitude { int: ZERO_SENTINEL, frac: 0.0, exact: true };
    pub const ONE: LogMagnitude = LogMagnitude { int: 0, frac: 0.0, exact: true };

    pub fn power_of_two(e: i64) -> Self {
        LogMagnitude { int: e, frac: 0.0, exact: true }
    }

    /// From a plain `log2` value; `-inf` gives zero.
    pub fn from_log2(l: f64) -> Self {
        if l == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let int = l.floor();
        let frac = l - int;
        let mut m = LogMagnitude { int: int as i64, frac, exact: frac == 0.0 };
        m.normalize();
        m
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::from_log2(x.abs().log2())
        }
    }

    fn from_exact(x: &Exact) -> Self {
        if x.is_zero() {
            return Self::ZERO;
        }
        if let Some(e) = x.log2_if_power_of_two() {
            return Self::power_of_two(e);
        }
        let n = x.numer().magnitude();
        let d = x.denom().magnitude();
        // q = n / d = 2^e * m with m ∈ (1/2, 2).
        let e = n.bits() as i64 - d.bits() as i64;
        let shift = 64 - e;
        let q: BigUint = if shift >= 0 {
            (n << (shift as u64)) / d
        } else {
            n / (d << ((-shift) as u64))
        };
        let qf = q.to_f64().unwrap_or(f64::INFINITY);
        let m = qf / 18446744073709551616.0; // 2^64
        let lm = m.log2();
        let mut out = LogMagnitude { int: e, frac: lm, exact: false };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.int == ZERO_SENTINEL {
            return;
        }
        if !(0.0..1.0).contains(&self.frac) {
            let fl = self.frac.floor();
            self.int += fl as i64;
            self.frac -= fl;
            if self.frac >= 1.0 {
                self.int += 1;
                self.frac -= 1.0;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.int == ZERO_SENTINEL
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn int_part(&self) -> i64 {
        self.int
    }

    pub fn frac_part(&self) -> f64 {
        self.frac
    }

    /// Plain `log2` value (loses the split precision for huge magnitudes).
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.int as f64 + self.frac
        }
    }

    /// Magnitude as `f64` (may overflow to infinity or underflow to zero).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.frac.exp2() * (self.int as f64).exp2()
        }
    }

    pub fn mul(self, rhs: LogMagnitude) -> LogMagnitude {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        let mut out = LogMagnitude {
            int: self.int + rhs.int,
            frac: self.frac + rhs.frac,
            exact: self.exact && rhs.exact,
        };
        out.normalize();
        out
    }

    pub fn div(self, rhs: LogMagnitude) -> Result<LogMagnitude> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::ZERO);
        }
        let mut out = LogMagnitude {
            int: self.int - rhs.int,
            frac: self.frac - rhs.frac,
            exact: self.exact && rhs.exact,
        };
        out.normalize();
        Ok(out)
    }

    /// `|x|^p` for real `p > 0`.
    pub fn powf(self, p: f64) -> LogMagnitude {
        if self.is_zero() {
            return Self::ZERO;
        }
        let ip = self.int as f64 * p;
        let whole = ip.floor();
        let mut out = LogMagnitude {
            int: whole as i64,
            frac: (ip - whole) + self.frac * p,
            exact: self.exact && p.fract() == 0.0,
        };
        out.normalize();
        out
    }

    /// `|x|^n` for any integer `n`; `0^n` with `n < 0` is a division by zero.
    pub fn pow_int(self, n: i64) -> Result<LogMagnitude> {
        if n == 0 {
            return Ok(Self::ONE);
        }
        if self.is_zero() {
            return if n > 0 { Ok(Self::ZERO) } else { Err(Error::DivisionByZero) };
        }
        let int = self
            .int
            .checked_mul(n)
            .ok_or_else(|| Error::Overflow(format!("2^({} * {n})", self.int)))?;
        let f = self.frac * n as f64;
        let fl = f.floor();
        let mut out = LogMagnitude { int: int + fl as i64, frac: f - fl, exact: self.exact };
        out.normalize();
        Ok(out)
    }

    pub fn recip(self) -> Result<LogMagnitude> {
        Self::ONE.div(self)
    }

    /// Difference `self - rhs` of the log values, as a plain `f64`.
    pub fn log2_diff(&self, rhs: &LogMagnitude) -> f64 {
        match (self.is_zero(), rhs.is_zero()) {
            (true, true) => 0.0,
            (true, false) => f64::NEG_INFINITY,
            (false, true) => f64::INFINITY,
            (false, false) => (self.int - rhs.int) as f64 + (self.frac - rhs.frac),
        }
    }
}

impl PartialOrd for LogMagnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.int.cmp(&other.int).then(self.frac.total_cmp(&other.frac)))
    }
}

impl fmt::Display for LogMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "2^-inf")
        } else {
            write!(f, "2^{}", self.log2())
        }
    }
}

impl Serialize for LogMagnitude {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let l = self.log2();
        if l.is_finite() {
            serializer.serialize_f64(l)
        } else {
            serializer.serialize_str("-inf")
        }
    }
}

/// Neumaier-compensated sum of magnitudes given as logs.
///
/// The inputs are sorted before summation, so the result does not depend on
/// the order in which they were supplied.
pub fn compensated_sum(values: &[LogMagnitude]) -> LogMagnitude {
    let mut v: Vec<LogMagnitude> = values.iter().copied().filter(|x| !x.is_zero()).collect();
    if v.is_empty() {
        return LogMagnitude::ZERO;
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let top = *v.last().expect("nonempty");
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in &v {
        let t = x.log2_diff(&top).exp2();
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    let total = sum + comp;
    let all_exact = v.iter().all(|x| x.exact);
    let mut out = top.mul(LogMagnitude::from_f64(total));
    if all_exact && v.len() == 1 {
        out.exact = true;
    }
    out
}

/// Running sum of magnitudes in the log domain (fixed-order reduction).
#[derive(Clone, Debug)]
pub struct LogAccumulator {
    scale: LogMagnitude,
    sum: f64,
    comp: f64,
}

impl Default for LogAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl LogAccumulator {
    pub fn new() -> Self {
        LogAccumulator { scale: LogMagnitude::ZERO, sum: 0.0, comp: 0.0 }
    }

    pub fn push(&mut self, x: LogMagnitude) {
        if x.is_zero() {
            return;
        }
        if self.scale.is_zero() {
            self.scale = x;
            self.sum = 1.0;
            self.comp = 0.0;
            return;
        }
        let d = x.log2_diff(&self.scale);
        if d > 0.0 {
            // rescale so the running sum stays in [1, 2^k)
            let f = (-d).exp2();
            self.sum *= f;
            self.comp *= f;
            self.scale = x;
            self.add_scaled(1.0);
        } else {
            self.add_scaled(d.exp2());
        }
    }

    fn add_scaled(&mut self, t: f64) {
        let s = self.sum + t;
        if self.sum.abs() >= t.abs() {
            self.comp += (self.sum - s) + t;
        } else {
            self.comp += (t - s) + self.sum;
        }
        self.sum = s;
    }

    pub fn total(&self) -> LogMagnitude {
        if self.scale.is_zero() {
            return LogMagnitude::ZERO;
        }
        self.scale.mul(LogMagnitude::from_f64(self.sum + self.comp))
    }

    /// `log2` of the running total.
    pub fn log2_total(&self) -> f64 {
        self.total().log2()
    }
}

/// A magnitude that is exact when the computation allows it.
#[derive(Clone, Debug, PartialEq)]
pub enum Magnitude {
    Exact(Exact),
    Log(LogMagnitude),
}

impl Magnitude {
    pub fn to_log(&self) -> LogMagnitude {
        match self {
            Magnitude::Exact(x) => x.to_log(),
            Magnitude::Log(l) => *l,
        }
    }

    pub fn exact(&self) -> Option<&Exact> {
        match self {
            Magnitude::Exact(x) => Some(x),
            Magnitude::Log(_) => None,
        }
    }

    pub fn into_exact(self) -> Option<Exact> {
        match self {
            Magnitude::Exact(x) => Some(x),
            Magnitude::Log(_) => None,
        }
    }

    pub fn log2(&self) -> f64 {
        self.to_log().log2()
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Exact(x) => write!(f, "{x}"),
            Magnitude::Log(l) => write!(f, "{l}"),
        }
    }
}

impl Serialize for Magnitude {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Magnitude::Exact(x) => x.serialize(serializer),
            Magnitude::Log(l) => {
                let mut st = serializer.serialize_struct("Magnitude", 1)?;
                st.serialize_field("log2", l)?;
                st.end()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Exact {
        s.parse().unwrap()
    }

    #[test]
    fn mul_half_half() {
        let r = exact_arith(&q("1/2"), &q("1/2"), ArithOp::Mul).unwrap();
        assert_eq!(r, ArithResult::Value(q("1/4")));
    }

    #[test]
    fn sum_of_first_block_norms() {
        // printed first-block norms with j = 1, k = 2
        let vals = ["2", "4", "8", "16", "16", "8", "4", "2", "1/2", "1/2", "1/2", "1/2"];
        let mut acc = Exact::zero();
        for v in vals {
            match exact_arith(&acc, &q(v), ArithOp::Add).unwrap() {
                ArithResult::Value(x) => acc = x,
                _ => unreachable!(),
            }
        }
        assert_eq!(acc, Exact::from_int(62));
    }

    #[test]
    fn div_by_zero_is_error() {
        assert!(matches!(exact_arith(&Exact::one(), &Exact::zero(), ArithOp::Div), Err(Error::DivisionByZero)));
        assert!(Exact::zero().recip().is_err());
        assert!(Exact::ratio(1, 0).is_err());
    }

    #[test]
    fn canonical_form() {
        let x = q("6/-4");
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(q("0/5").denom(), &BigInt::from(1));
        assert_eq!(q("0.125"), q("1/8"));
        assert_eq!(q("-1.5"), q("-3/2"));
    }

    #[test]
    fn json_encoding() {
        let x = q("-7/3");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"num":"-7","den":"3"}"#);
        let back: Exact = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let from_str: Exact = serde_json::from_str("\"5/10\"").unwrap();
        assert_eq!(from_str, q("1/2"));
        let from_int: Exact = serde_json::from_str("3").unwrap();
        assert_eq!(from_int, Exact::from_int(3));
        assert!(serde_json::from_str::<Exact>(r#"{"num":"1","den":"0"}"#).is_err());
    }

    #[test]
    fn to_log_examples() {
        let l = q("1/4").to_log();
        assert!(l.is_exact());
        assert_eq!(l.log2(), -2.0);
        let l = Exact::pow2(13).to_log();
        assert!(l.is_exact());
        assert_eq!(l.log2(), 13.0);
        // independent evaluation: ln(31/6)/ln 2
        let expect = (31.0f64 / 6.0).ln() / std::f64::consts::LN_2;
        let got = q("31/6").to_log().log2();
        assert!((got - expect).abs() < 4.0 * f64::EPSILON * expect, "{got} vs {expect}");
        assert!((got - 2.3692).abs() < 1e-4);
        assert!(Exact::zero().to_log().is_zero());
        assert_eq!(Exact::zero().to_log().log2(), f64::NEG_INFINITY);
    }

    #[test]
    fn to_log_huge_values() {
        let x = Exact::pow2(5000) * q("3");
        let l = x.to_log();
        assert_eq!(l.int_part(), 5001);
        let expect = 3.0f64.log2() - 1.0;
        assert!((l.frac_part() - expect).abs() < 1e-15);
    }

    #[test]
    fn compensated_sum_examples() {
        let ones = vec![LogMagnitude::ONE; 4];
        assert_eq!(compensated_sum(&ones).log2(), 2.0);
        let geo: Vec<_> = (1..=10).map(LogMagnitude::power_of_two).collect();
        let s = compensated_sum(&geo);
        assert!((s.to_f64() - 2046.0).abs() < 1e-9);
        let block = ["2", "4", "8", "16", "16", "8", "4", "2", "1/2", "1/2", "1/2", "1/2"];
        let logs: Vec<_> = block.iter().map(|v| q(v).to_log()).collect();
        let exact: Exact = block.iter().map(|v| q(v)).sum();
        let s = compensated_sum(&logs);
        let rel = (s.log2_diff(&exact.to_log()) * std::f64::consts::LN_2).abs();
        assert!(rel <= 2f64.powi(-40));
        assert!((s.to_f64() - 62.0).abs() < 1e-9);
    }

    #[test]
    fn compensated_sum_is_order_independent() {
        let mut v: Vec<_> = (0..200).map(|i| LogMagnitude::from_log2((i as f64 * 0.37).sin() * 30.0)).collect();
        let a = compensated_sum(&v);
        v.reverse();
        let b = compensated_sum(&v);
        assert_eq!(a, b);
    }

    #[test]
    fn accumulator_matches_compensated_sum() {
        let v: Vec<_> = (0..500).map(|i| LogMagnitude::from_log2(((i * 7919) % 97) as f64 - 40.0)).collect();
        let mut acc = LogAccumulator::new();
        for x in &v {
            acc.push(*x);
        }
        let d = acc.total().log2_diff(&compensated_sum(&v));
        assert!(d.abs() < 1e-13);
    }
}
