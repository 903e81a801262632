//! Binary floating-point reals with an explicit mantissa precision.
//!
//! Every value remembers the precision it was created at; binary operations
//! round their result to the larger of the two operand precisions with
//! round-half-to-even.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

use crate::error::Error;

/// Rounding used by every primitive operation.
pub const ROUNDING: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

pub(crate) fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        debug_assert!(!v.is_nan(), "NaN produced in big-float arithmetic");
        Real { v, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::wrap(BigFloat::from_word(0, prec), prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::wrap(BigFloat::from_word(1, prec), prec)
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        assert!(x.is_finite(), "non-finite value {x}");
        Self::wrap(BigFloat::from_f64(x, prec), prec)
    }

    pub fn from_i64(x: i64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(x, prec), prec)
    }

    pub fn from_u64(x: u64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_u64(x, prec), prec)
    }

    /// Exactly `2^exp`.
    pub fn pow2(exp: i32, prec: usize) -> Self {
        let mut v = BigFloat::from_word(1, prec);
        // 1 = 0.1b * 2^1
        v.set_exponent(exp + 1);
        Self::wrap(v, prec)
    }

    /// Parses a decimal literal (`-1.25e-3`, `42`) rounded to `prec` bits.
    pub fn parse_decimal(s: &str, prec: usize) -> Result<Self, Error> {
        let t = s.trim();
        let ok = !t.is_empty()
            && t.chars()
                .all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'))
            && t.chars().any(|c| c.is_ascii_digit());
        if !ok {
            return Err(Error::Parse(format!("not a decimal number: {s:?}")));
        }
        let v = with_consts(|cc| BigFloat::parse(t, Radix::Dec, prec, ROUNDING, cc));
        if v.is_nan() || v.is_inf() {
            return Err(Error::Parse(format!("not a decimal number: {s:?}")));
        }
        Ok(Self::wrap(v, prec))
    }

    /// Parses a hexadecimal float such as `0x1.8p3` or `-0x.fp-2`.
    pub fn parse_hex(s: &str, prec: usize) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("not a hexadecimal float: {s:?}"));
        let t = s.trim();
        let (neg, t) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let t = t
            .strip_prefix("0x")
            .or_else(|| t.strip_prefix("0X"))
            .ok_or_else(bad)?;
        let (mant, exp) = match t.find(['p', 'P']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (int_part, frac_part) = match mant.find('.') {
            Some(i) => (&mant[..i], &mant[i + 1..]),
            None => (mant, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        // Accumulate the hex digits exactly; the working precision grows with the digit count.
        let ndigits = int_part.len() + frac_part.len();
        let exact = 4 * ndigits + 64;
        let sixteen = BigFloat::from_word(16, exact);
        let mut acc = BigFloat::from_word(0, exact);
        for c in int_part.chars().chain(frac_part.chars()) {
            let d = c.to_digit(16).ok_or_else(bad)? as u64;
            acc = acc
                .mul(&sixteen, exact, ROUNDING)
                .add(&BigFloat::from_word(d, exact), exact, ROUNDING);
        }
        let shift = exp - 4 * frac_part.len() as i32;
        let scaled = Real::wrap(acc, exact) * Real::pow2(shift, exact);
        let r = scaled.round_to(prec);
        Ok(if neg { -r } else { r })
    }

    /// Accepts either a hexadecimal float (leading `0x`) or a decimal literal.
    pub fn parse(s: &str, prec: usize) -> Result<Self, Error> {
        let t = s.trim();
        let body = t.trim_start_matches(['+', '-']);
        if body.starts_with("0x") || body.starts_with("0X") {
            Self::parse_hex(t, prec)
        } else {
            Self::parse_decimal(t, prec)
        }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn round_to(&self, prec: usize) -> Self {
        let mut v = self.v.clone();
        v.set_precision(prec, ROUNDING).expect("precision change");
        Self::wrap(v, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.prec)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.prec, ROUNDING), self.prec)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.v.reciprocal(self.prec, ROUNDING), self.prec)
    }

    pub fn sin(&self) -> Self {
        let v = with_consts(|cc| self.v.sin(self.prec, ROUNDING, cc));
        Self::wrap(v, self.prec)
    }

    pub fn cos(&self) -> Self {
        let v = with_consts(|cc| self.v.cos(self.prec, ROUNDING, cc));
        Self::wrap(v, self.prec)
    }

    pub fn pi(prec: usize) -> Self {
        let v = with_consts(|cc| cc.pi(prec, ROUNDING));
        Self::wrap(v, prec)
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = self.v.clone();
        let e = v.exponent().expect("finite");
        v.set_exponent(e + k);
        Self::wrap(v, self.prec)
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero.
    pub fn exponent(&self) -> Option<i32> {
        if self.is_zero() {
            None
        } else {
            self.v.exponent()
        }
    }

    /// `log2|x|` to roughly double precision; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        match self.v.as_raw_parts() {
            Some((words, _, _, e, _)) if !words.is_empty() && !self.v.is_zero() => {
                let top = *words.last().expect("nonempty") as f64;
                // value = top / 2^64 * 2^e
                top.log2() - 64.0 + e as f64
            }
            _ => f64::NEG_INFINITY,
        }
    }

    /// Nearest `f64`; saturates to 0 or infinity outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        match self.v.as_raw_parts() {
            Some((words, _, sign, e, _)) if !words.is_empty() && !self.v.is_zero() => {
                let top = *words.last().expect("nonempty") as f64 / 18446744073709551616.0;
                let mag = scale_f64(top, e);
                if sign == Sign::Neg {
                    -mag
                } else {
                    mag
                }
            }
            _ => 0.0,
        }
    }

    /// Nearest integer, ties away from zero; `None` if it does not fit in `i64`.
    pub fn round_to_i64(&self) -> Option<i64> {
        let x = self.to_f64();
        if x.abs() < 9.0e15 {
            Some(x.round() as i64)
        } else {
            None
        }
    }

    /// Scientific notation with `digits` significant decimal digits, e.g. `1.4142e+0`.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return format!("0.{}e+0", "0".repeat(digits - 1));
        }
        // Format with enough bits that the string-level rounding below is faithful.
        let bits = ((digits as f64 + 6.0) * std::f64::consts::LOG2_10).ceil() as usize;
        let working = self.round_to(bits.max(self.prec));
        let s = with_consts(|cc| working.v.format(Radix::Dec, ROUNDING, cc)).expect("format");
        round_decimal_string(&s, digits)
    }
}

fn scale_f64(x: f64, e: i32) -> f64 {
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
    x * 2f64.powi(e)
}

/// Rounds a formatted `[-]d.ddd...e[+-]N` string to `digits` significant digits.
fn round_decimal_string(s: &str, digits: usize) -> String {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (mant, exp) = match body.find('e') {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let point = mant.find('.').unwrap_or(mant.len());
    let mut ds: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    // Normalise so that ds[0] != 0.
    let mut exp = exp + point as i64 - 1;
    while ds.len() > 1 && ds[0] == 0 {
        ds.remove(0);
        exp -= 1;
    }
    let round_up = ds.get(digits).is_some_and(|&d| d >= 5);
    ds.resize(digits, 0);
    if round_up {
        let mut i = digits;
        loop {
            if i == 0 {
                ds.insert(0, 1);
                ds.truncate(digits);
                exp += 1;
                break;
            }
            i -= 1;
            if ds[i] == 9 {
                ds[i] = 0;
            } else {
                ds[i] += 1;
                break;
            }
        }
    }
    let mut out = String::with_capacity(digits + 8);
    if neg {
        out.push('-');
    }
    out.push((b'0' + ds[0]) as char);
    out.push('.');
    if digits == 1 {
        out.push('0');
    }
    for &d in &ds[1..] {
        out.push((b'0' + d) as char);
    }
    out.push('e');
    if exp >= 0 {
        out.push('+');
    }
    out.push_str(&exp.to_string());
    out
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(20))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or_else(|| (self.prec as f64 * std::f64::consts::LOG10_2).ceil() as usize);
        write!(f, "{}", self.to_decimal_string(digits))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.neg(), self.prec)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $op:ident) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let p = self.prec.max(rhs.prec);
                Real::wrap(self.v.$op(&rhs.v, p, ROUNDING), p)
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl AddAssign<&Real> for Real {
    fn add_assign(&mut self, rhs: &Real) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Real> for Real {
    fn sub_assign(&mut self, rhs: &Real) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Real> for Real {
    fn mul_assign(&mut self, rhs: &Real) {
        *self = &*self * rhs;
    }
}
