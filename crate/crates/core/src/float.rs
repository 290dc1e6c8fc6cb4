//! Binary floating point with a per-value precision in bits.
//!
//! A [`PrecFloat`] is `±mantissa · 2^exponent` where the mantissa is an
//! arbitrary-size unsigned integer holding at most `prec` significant bits.
//! Binary operations round to nearest at the larger of the two operand
//! precisions. Precision is capped at [`MAX_PREC`] bits because the
//! constants pi and ln 2 are stored to that accuracy.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::consts::{LN2_HEX, MANTISSA_SCALE, PI_HEX};

/// Largest supported working precision.
pub const MAX_PREC: u32 = 4096;

/// Default working precision for numeric evaluation.
pub const DEFAULT_PREC: u32 = 256;

#[derive(Clone)]
pub struct PrecFloat {
    neg: bool,
    mant: BigUint,
    exp: i64,
    prec: u32,
}

fn clamp_prec(prec: u32) -> u32 {
    prec.clamp(8, MAX_PREC)
}

impl PrecFloat {
    fn from_parts(neg: bool, mant: BigUint, exp: i64, prec: u32) -> Self {
        let mut out = PrecFloat {
            neg,
            mant,
            exp,
            prec: clamp_prec(prec),
        };
        out.round();
        out
    }

    fn round(&mut self) {
        if self.mant.is_zero() {
            self.neg = false;
            self.exp = 0;
            return;
        }
        let bits = self.mant.bits();
        let prec = u64::from(self.prec);
        if bits > prec {
            let shift = bits - prec;
            let half = self.mant.bit(shift - 1);
            self.mant >>= shift;
            if half {
                self.mant += 1u32;
            }
            self.exp += shift as i64;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero(prec: u32) -> Self {
        PrecFloat {
            neg: false,
            mant: BigUint::zero(),
            exp: 0,
            prec: clamp_prec(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_parts(v < 0, BigUint::from(v.unsigned_abs()), 0, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::from_parts(v.sign() == Sign::Minus, v.magnitude().clone(), 0, prec)
    }

    /// Exact conversion of a finite `f64` (then rounded to `prec`).
    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "non-finite f64");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let neg = bits >> 63 == 1;
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Self::from_parts(neg, BigUint::from(mant), exp, prec)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        Self::from_bigint(num, prec + 8).div_prec(&Self::from_bigint(den, prec + 8), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Self::from_ratio(r.numer(), r.denom(), prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::from_parts(self.neg, self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.neg
    }

    pub fn is_positive(&self) -> bool {
        !self.neg && !self.mant.is_zero()
    }

    pub fn abs(&self) -> Self {
        let mut out = self.clone();
        out.neg = false;
        out
    }

    /// Multiplication by `2^k`.
    pub fn ldexp(&self, k: i64) -> Self {
        let mut out = self.clone();
        if !out.mant.is_zero() {
            out.exp += k;
        }
        out
    }

    /// Binary exponent of the leading bit plus one (`|x| ∈ [2^(e-1), 2^e)`).
    /// Returns `i64::MIN` for zero.
    pub fn top_exponent(&self) -> i64 {
        if self.mant.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64
        }
    }

    /// Approximate `log2 |x|`, `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.mant.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits();
        let keep = bits.min(60);
        let top = (&self.mant >> (bits - keep)).to_u64().unwrap_or(u64::MAX) as f64;
        libm::log2(top) + (self.exp + (bits - keep) as i64) as f64
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let keep = bits.min(64);
        let top = (&self.mant >> (bits - keep)).to_u64().unwrap_or(u64::MAX) as f64;
        let e = self.exp + (bits - keep) as i64;
        let v = if e > 2000 {
            f64::INFINITY
        } else if e < -2200 {
            0.0
        } else {
            libm::ldexp(top, e as i32)
        };
        if self.neg {
            -v
        } else {
            v
        }
    }

    /// Nearest integer (ties away from zero).
    pub fn round_to_bigint(&self) -> BigInt {
        if self.mant.is_zero() {
            return BigInt::zero();
        }
        let mag = if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            let shift = (-self.exp) as u64;
            let half = shift <= self.mant.bits() && self.mant.bit(shift - 1);
            let mut m = &self.mant >> shift;
            if half {
                m += 1u32;
            }
            m
        };
        let sign = if self.neg { Sign::Minus } else { Sign::Plus };
        BigInt::from_biguint(sign, mag)
    }

    pub fn floor_to_bigint(&self) -> BigInt {
        if self.mant.is_zero() {
            return BigInt::zero();
        }
        if self.exp >= 0 {
            let m = BigInt::from_biguint(Sign::Plus, &self.mant << (self.exp as u64));
            return if self.neg { -m } else { m };
        }
        let shift = (-self.exp) as u64;
        let q = &self.mant >> shift;
        let exact = (&q << shift) == self.mant;
        let q = BigInt::from_biguint(Sign::Plus, q);
        if self.neg {
            if exact {
                -q
            } else {
                -q - 1
            }
        } else {
            q
        }
    }

    fn add_signed(&self, other: &Self, negate_other: bool, prec: u32) -> Self {
        let other_neg = other.neg ^ negate_other;
        if other.mant.is_zero() {
            return self.with_prec(prec);
        }
        if self.mant.is_zero() {
            return Self::from_parts(other_neg, other.mant.clone(), other.exp, prec);
        }
        let ta = self.top_exponent();
        let tb = other.top_exponent();
        let gap = i64::from(prec) + 4;
        if ta - tb > gap {
            return self.with_prec(prec);
        }
        if tb - ta > gap {
            return Self::from_parts(other_neg, other.mant.clone(), other.exp, prec);
        }
        let e = self.exp.min(other.exp);
        let ma = &self.mant << ((self.exp - e) as u64);
        let mb = &other.mant << ((other.exp - e) as u64);
        if self.neg == other_neg {
            Self::from_parts(self.neg, ma + mb, e, prec)
        } else {
            match ma.cmp(&mb) {
                Ordering::Equal => Self::zero(prec),
                Ordering::Greater => Self::from_parts(self.neg, ma - mb, e, prec),
                Ordering::Less => Self::from_parts(other_neg, mb - ma, e, prec),
            }
        }
    }

    pub fn add_prec(&self, other: &Self, prec: u32) -> Self {
        self.add_signed(other, false, prec)
    }

    pub fn sub_prec(&self, other: &Self, prec: u32) -> Self {
        self.add_signed(other, true, prec)
    }

    pub fn mul_prec(&self, other: &Self, prec: u32) -> Self {
        if self.mant.is_zero() || other.mant.is_zero() {
            return Self::zero(prec);
        }
        Self::from_parts(
            self.neg ^ other.neg,
            &self.mant * &other.mant,
            self.exp + other.exp,
            prec,
        )
    }

    pub fn div_prec(&self, other: &Self, prec: u32) -> Self {
        assert!(!other.mant.is_zero(), "division by zero");
        if self.mant.is_zero() {
            return Self::zero(prec);
        }
        let want = u64::from(clamp_prec(prec)) + 2;
        let shift = (want + other.mant.bits()).saturating_sub(self.mant.bits());
        let q = (&self.mant << shift) / &other.mant;
        Self::from_parts(self.neg ^ other.neg, q, self.exp - shift as i64 - other.exp, prec)
    }

    fn join(&self, other: &Self) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        if k == 0 || self.mant.is_zero() {
            return Self::zero(self.prec);
        }
        Self::from_parts(self.neg ^ (k < 0), &self.mant * k.unsigned_abs(), self.exp, self.prec)
    }

    pub fn div_i64(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        if self.mant.is_zero() {
            return self.clone();
        }
        let d = k.unsigned_abs();
        let want = u64::from(self.prec) + 66;
        let shift = want.saturating_sub(self.mant.bits());
        let q = (&self.mant << shift) / d;
        Self::from_parts(self.neg ^ (k < 0), q, self.exp - shift as i64, self.prec)
    }

    pub fn square(&self) -> Self {
        self.mul_prec(self, self.prec)
    }

    pub fn recip(&self) -> Self {
        Self::one(self.prec).div_prec(self, self.prec)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.neg, "square root of a negative number");
        if self.mant.is_zero() {
            return self.clone();
        }
        let want = 2 * u64::from(self.prec) + 4;
        let mut shift = want.saturating_sub(self.mant.bits());
        if (self.exp - shift as i64).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = (&self.mant << shift).sqrt();
        Self::from_parts(false, m, (self.exp - shift as i64) / 2, self.prec)
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Self::one(self.prec);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        acc
    }

    fn constant(hex: &[&str], prec: u32) -> Self {
        let prec = clamp_prec(prec);
        let digits = (prec as usize + 12) / 4 + 1;
        let mut s = String::with_capacity(digits);
        for chunk in hex {
            if s.len() >= digits {
                break;
            }
            s.push_str(chunk);
        }
        let total: usize = hex.iter().map(|c| c.len()).sum();
        let take = digits.min(s.len());
        let m = BigUint::parse_bytes(&s.as_bytes()[..take], 16).expect("valid hex constant");
        Self::from_parts(false, m, MANTISSA_SCALE + 4 * (total - take) as i64, prec)
    }

    pub fn pi(prec: u32) -> Self {
        Self::constant(PI_HEX, prec)
    }

    pub fn ln2(prec: u32) -> Self {
        Self::constant(LN2_HEX, prec)
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec;
        if self.mant.is_zero() {
            return Self::one(prec);
        }
        let mag = self.top_exponent().max(0) as u32;
        let wp = prec + 24 + mag;
        let ln2 = Self::ln2(wp);
        let x = self.with_prec(wp);
        let k = x.div_prec(&ln2, 64).round_to_bigint();
        let k_i64 = k.to_i64().expect("exponent overflow in exp");
        let r = x.sub_prec(&ln2.mul_i64(k_i64), wp);
        // r/2^s, Taylor, then square s times
        let s: u32 = 10 + (wp / 64);
        let r = r.ldexp(-i64::from(s));
        let wp2 = wp + s;
        let r = r.with_prec(wp2);
        let one = Self::one(wp2);
        let mut term = one.clone();
        let mut sum = one;
        let eps = -i64::from(wp2) - 2;
        for n in 1..10_000i64 {
            term = term.mul_prec(&r, wp2).div_i64(n);
            if term.is_zero() || term.top_exponent() < eps {
                break;
            }
            sum = sum.add_prec(&term, wp2);
        }
        for _ in 0..s {
            sum = sum.square();
        }
        sum.ldexp(k_i64).with_prec(prec)
    }

    pub fn ln(&self) -> Self {
        assert!(self.is_positive(), "logarithm of a non-positive number");
        let prec = self.prec;
        let wp = prec + 24;
        let bits = self.mant.bits() as i64;
        let mut k = self.exp + bits;
        let mut y = Self::from_parts(false, self.mant.clone(), -bits, wp);
        // y in [1/2, 1); move to [1/sqrt2, sqrt2)
        if y.to_f64() < core::f64::consts::FRAC_1_SQRT_2 {
            y = y.ldexp(1);
            k -= 1;
        }
        let one = Self::one(wp);
        let u = y.sub_prec(&one, wp).div_prec(&y.add_prec(&one, wp), wp);
        let u2 = u.square();
        let mut pow = u.clone();
        let mut sum = u;
        let eps = -i64::from(wp) - 2;
        let mut n = 1i64;
        loop {
            pow = pow.mul_prec(&u2, wp);
            n += 2;
            let term = pow.div_i64(n);
            if term.is_zero() || term.top_exponent() < eps {
                break;
            }
            sum = sum.add_prec(&term, wp);
        }
        let res = sum.ldexp(1).add_prec(&Self::ln2(wp).mul_i64(k), wp);
        res.with_prec(prec)
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.prec;
        if self.mant.is_zero() {
            return (Self::zero(prec), Self::one(prec));
        }
        let mag = self.top_exponent().max(0) as u32;
        let wp = prec + 24 + mag;
        let half_pi = Self::pi(wp).ldexp(-1);
        let x = self.with_prec(wp);
        let n = x.div_prec(&half_pi, 64).round_to_bigint();
        let quadrant = (&n % 4i32 + 4i32) % 4i32;
        let quadrant = quadrant.to_i64().unwrap_or(0);
        let r = x.sub_prec(&half_pi.mul_prec(&Self::from_bigint(&n, wp), wp), wp);
        let r2 = r.square();
        let eps = -i64::from(wp) - 2;
        // sin r
        let mut term = r.clone();
        let mut s = r.clone();
        let mut k = 1i64;
        loop {
            term = term.mul_prec(&r2, wp).div_i64((k + 1) * (k + 2)).neg();
            k += 2;
            if term.is_zero() || term.top_exponent() < eps {
                break;
            }
            s = s.add_prec(&term, wp);
        }
        // cos r
        let mut term = Self::one(wp);
        let mut c = Self::one(wp);
        let mut k = 0i64;
        loop {
            term = term.mul_prec(&r2, wp).div_i64((k + 1) * (k + 2)).neg();
            k += 2;
            if term.is_zero() || term.top_exponent() < eps {
                break;
            }
            c = c.add_prec(&term, wp);
        }
        let (s, c) = match quadrant {
            0 => (s, c),
            1 => (c, s.neg()),
            2 => (s.neg(), c.neg()),
            _ => (c.neg(), s),
        };
        (s.with_prec(prec), c.with_prec(prec))
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    /// `x^p` for `x > 0` and rational `p`.
    pub fn pow_rational(&self, p: &BigRational) -> Self {
        if p.is_integer() {
            if let Some(k) = p.to_integer().to_i64() {
                return self.powi(k);
            }
        }
        if p.denom() == &BigInt::from(2) {
            if let Some(k) = p.numer().to_i64() {
                return self.sqrt().powi(k);
            }
        }
        let lp = Self::from_rational(p, self.prec + 16);
        self.with_prec(self.prec + 16)
            .ln()
            .mul_prec(&lp, self.prec + 16)
            .exp()
            .with_prec(self.prec)
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.mant.is_zero() {
            return String::from("0");
        }
        let digits = digits.max(1);
        let l10 = self.log2_abs() * core::f64::consts::LOG10_2;
        let mut e10 = libm::floor(l10) as i64;
        let mut attempt = 0;
        let text = loop {
            let scale = digits as i64 - 1 - e10;
            let ten = BigUint::from(10u32);
            let mut num = self.mant.clone();
            let mut den = BigUint::one();
            if scale >= 0 {
                num *= num_traits::pow(ten, scale as usize);
            } else {
                den *= num_traits::pow(ten, (-scale) as usize);
            }
            if self.exp >= 0 {
                num <<= self.exp as u64;
            } else {
                den <<= (-self.exp) as u64;
            }
            let q = (&num + (&den >> 1u32)) / &den;
            let s = q.to_str_radix(10);
            if s.len() == digits || attempt > 2 {
                break s;
            }
            if s.len() > digits {
                e10 += 1;
            } else {
                e10 -= 1;
            }
            attempt += 1;
        };
        let mut out = String::new();
        if self.neg {
            out.push('-');
        }
        out.push_str(&text[..1]);
        if text.len() > 1 {
            out.push('.');
            out.push_str(&text[1..]);
        }
        out.push('e');
        out.push_str(&alloc::format!("{e10}"));
        out
    }

    /// Number of decimal digits carried by this precision.
    pub fn decimal_digits(&self) -> usize {
        (f64::from(self.prec) * core::f64::consts::LOG10_2) as usize + 1
    }

    /// Exact rational value of this float.
    pub fn to_rational(&self) -> BigRational {
        let m = BigInt::from_biguint(if self.neg { Sign::Minus } else { Sign::Plus }, self.mant.clone());
        if self.exp >= 0 {
            BigRational::from_integer(m << (self.exp as u64))
        } else {
            BigRational::new(m, BigInt::one() << ((-self.exp) as u64))
        }
    }
}

/// Parse a decimal literal such as `-1.25e-3` into an exact rational.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mant, exp10) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i64>().ok()?),
        None => (t, 0),
    };
    let (neg, body) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let all: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).collect();
    if !all.iter().all(u8::is_ascii_digit) {
        return None;
    }
    let digits = core::str::from_utf8(&all).ok()?;
    let mut n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    if neg {
        n = -n;
    }
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Some(if shift >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-shift) as usize))
    })
}

impl PartialEq for PrecFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PrecFloat {
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return if other.neg { Ordering::Greater } else { Ordering::Less },
            (false, true) => return if self.neg { Ordering::Less } else { Ordering::Greater },
            _ => {}
        }
        if self.neg != other.neg {
            return if self.neg { Ordering::Less } else { Ordering::Greater };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &other.mant << ((other.exp - e) as u64);
        let ord = a.cmp(&b);
        if self.neg {
            ord.reverse()
        } else {
            ord
        }
    }
}

impl PartialOrd for PrecFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl fmt::Debug for PrecFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(self.decimal_digits().min(40)))
    }
}

impl fmt::Display for PrecFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(|| self.decimal_digits());
        f.write_str(&self.to_sci_string(digits))
    }
}

impl Neg for PrecFloat {
    type Output = PrecFloat;
    fn neg(mut self) -> PrecFloat {
        if !self.mant.is_zero() {
            self.neg = !self.neg;
        }
        self
    }
}

impl Neg for &PrecFloat {
    type Output = PrecFloat;
    fn neg(self) -> PrecFloat {
        self.clone().neg()
    }
}

macro_rules! float_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&PrecFloat> for &PrecFloat {
            type Output = PrecFloat;
            fn $method(self, rhs: &PrecFloat) -> PrecFloat {
                self.$inner(rhs, self.join(rhs))
            }
        }
        impl $tr<PrecFloat> for PrecFloat {
            type Output = PrecFloat;
            fn $method(self, rhs: PrecFloat) -> PrecFloat {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&PrecFloat> for PrecFloat {
            type Output = PrecFloat;
            fn $method(self, rhs: &PrecFloat) -> PrecFloat {
                (&self).$method(rhs)
            }
        }
        impl $tr<PrecFloat> for &PrecFloat {
            type Output = PrecFloat;
            fn $method(self, rhs: PrecFloat) -> PrecFloat {
                self.$method(&rhs)
            }
        }
    };
}

float_binop!(Add, add, add_prec);
float_binop!(Sub, sub, sub_prec);
float_binop!(Mul, mul, mul_prec);
float_binop!(Div, div, div_prec);

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &PrecFloat, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn constants_match_f64() {
        assert!(close(&PrecFloat::pi(256), core::f64::consts::PI, 1e-15));
        assert!(close(&PrecFloat::ln2(256), core::f64::consts::LN_2, 1e-15));
    }

    #[test]
    fn exp_ln_roundtrip_at_high_precision() {
        let x = PrecFloat::from_f64(3.7, 400);
        let back = x.exp().ln();
        let err = (&back - &x).abs();
        assert!(err.log2_abs() < -390.0, "{}", err.log2_abs());
        let e = PrecFloat::one(300).exp();
        assert!(close(&e, core::f64::consts::E, 1e-15));
        assert!(close(&PrecFloat::from_f64(-20.5, 256).exp(), (-20.5f64).exp(), 1e-14));
    }

    #[test]
    fn trig_identity_and_values() {
        let x = PrecFloat::from_f64(10.25, 300);
        let (s, c) = x.sin_cos();
        let one = &s.square() + &c.square();
        let err = (&one - &PrecFloat::one(300)).abs();
        assert!(err.log2_abs() < -290.0);
        assert!(close(&s, 10.25f64.sin(), 1e-14));
        assert!(close(&PrecFloat::from_f64(-2.0, 200).cos(), (-2.0f64).cos(), 1e-14));
        // sin(pi) = 0 to working precision
        let sp = PrecFloat::pi(256).sin();
        assert!(sp.log2_abs() < -250.0);
    }

    #[test]
    fn sqrt_and_division() {
        let two = PrecFloat::from_i64(2, 512);
        let r = two.sqrt();
        let err = (&r.square() - &two).abs();
        assert!(err.log2_abs() < -505.0);
        let third = PrecFloat::one(128) / PrecFloat::from_i64(3, 128);
        assert!(close(&third, 1.0 / 3.0, 1e-16));
        assert!(close(&PrecFloat::from_i64(7, 64).div_i64(-2), -3.5, 0.0));
    }

    #[test]
    fn floor_round_and_decimal_output() {
        let x = PrecFloat::from_f64(-2.5, 64);
        assert_eq!(x.floor_to_bigint(), BigInt::from(-3));
        assert_eq!(PrecFloat::from_f64(2.4, 64).round_to_bigint(), BigInt::from(2));
        assert_eq!(PrecFloat::from_f64(1234.5, 64).to_sci_string(6), "1.23450e3");
        assert_eq!(PrecFloat::from_f64(-0.00125, 64).to_sci_string(3), "-1.25e-3");
        let q = parse_decimal("-1.25e-3").unwrap();
        assert_eq!(q, BigRational::new(BigInt::from(-1), BigInt::from(800)));
        assert_eq!(parse_decimal("3/6").unwrap(), BigRational::new(1.into(), 2.into()));
        assert!(parse_decimal("abc").is_none());
    }

    #[test]
    fn rational_power() {
        let x = PrecFloat::from_f64(2.0, 200);
        let p = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!(close(&x.pow_rational(&p), 2f64.powf(1.0 / 3.0), 1e-15));
        let p = BigRational::new(BigInt::from(-7), BigInt::from(2));
        assert!(close(&x.pow_rational(&p), 2f64.powf(-3.5), 1e-15));
    }
}
