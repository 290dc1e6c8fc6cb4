//! Complex numbers over [`PrecFloat`].

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::float::PrecFloat;

#[derive(Clone, Debug, PartialEq)]
pub struct PrecComplex {
    pub re: PrecFloat,
    pub im: PrecFloat,
}

impl PrecComplex {
    pub fn new(re: PrecFloat, im: PrecFloat) -> Self {
        PrecComplex { re, im }
    }

    pub fn from_real(re: PrecFloat) -> Self {
        let prec = re.prec();
        PrecComplex {
            re,
            im: PrecFloat::zero(prec),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(PrecFloat::zero(prec), PrecFloat::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::new(PrecFloat::one(prec), PrecFloat::zero(prec))
    }

    pub fn i(prec: u32) -> Self {
        Self::new(PrecFloat::zero(prec), PrecFloat::one(prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self::new(PrecFloat::from_f64(re, prec), PrecFloat::from_f64(im, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> PrecFloat {
        &self.re.square() + &self.im.square()
    }

    pub fn abs(&self) -> PrecFloat {
        self.norm_sqr().sqrt()
    }

    /// Cheap magnitude estimate `log2 |z|`.
    pub fn log2_abs(&self) -> f64 {
        let a = self.re.log2_abs();
        let b = self.im.log2_abs();
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * libm::log2(1.0 + libm::exp2(2.0 * (lo - hi)))
    }

    pub fn abs_f64(&self) -> f64 {
        libm::exp2(self.log2_abs())
    }

    pub fn scale(&self, k: &PrecFloat) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        Self::new(self.re.mul_i64(k), self.im.mul_i64(k))
    }

    pub fn div_i64(&self, k: i64) -> Self {
        Self::new(self.re.div_i64(k), self.im.div_i64(k))
    }

    pub fn ldexp(&self, k: i64) -> Self {
        Self::new(self.re.ldexp(k), self.im.ldexp(k))
    }

    /// Multiplication by `i^k`.
    pub fn mul_i_pow(&self, k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => Self::new(-&self.im, self.re.clone()),
            2 => -self,
            _ => Self::new(self.im.clone(), -&self.re),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Self::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Self::new(&r * &c, &r * &s)
    }

    /// `e^{2 pi i z}`.
    pub fn exp_2pi_i(&self) -> Self {
        let two_pi = PrecFloat::pi(self.prec()).ldexp(1);
        Self::new(-(&self.im * &two_pi), &self.re * &two_pi).exp()
    }

    pub fn arg(&self) -> PrecFloat {
        let prec = self.prec();
        let pi = PrecFloat::pi(prec);
        if self.is_zero() {
            return PrecFloat::zero(prec);
        }
        // atan via ln of the unit-normalised number: arg = Im log z
        let ax = self.re.abs();
        let ay = self.im.abs();
        let base = if ax >= ay {
            atan_small(&(&ay / &ax))
        } else {
            &pi.ldexp(-1) - &atan_small(&(&ax / &ay))
        };
        match (self.re.is_negative(), self.im.is_negative()) {
            (false, false) => base,
            (true, false) => &pi - &base,
            (true, true) => &base - &pi,
            (false, true) => -base,
        }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Self::new(self.norm_sqr().ln().ldexp(-1), self.arg())
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let prec = self.prec();
        if self.is_zero() {
            return Self::zero(prec);
        }
        let r = self.abs();
        let re = (&r + &self.re).ldexp(-1);
        let im = (&r - &self.re).ldexp(-1);
        let a = if re.is_negative() {
            PrecFloat::zero(prec)
        } else {
            re.sqrt()
        };
        let mut b = if im.is_negative() {
            PrecFloat::zero(prec)
        } else {
            im.sqrt()
        };
        if self.im.is_negative() {
            b = -b;
        }
        Self::new(a, b)
    }

    /// Principal power `z^w`.
    pub fn pow(&self, w: &Self) -> Self {
        (w * &self.ln()).exp()
    }

    pub fn powi(&self, n: i64) -> Self {
        let prec = self.prec();
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Self::one(prec);
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

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn dist_log2(&self, other: &Self) -> f64 {
        (self - other).log2_abs()
    }
}

/// arctan for `0 <= x <= 1`, via argument halving and Taylor series.
fn atan_small(x: &PrecFloat) -> PrecFloat {
    let prec = x.prec();
    let wp = prec + 16;
    let one = PrecFloat::one(wp);
    let mut y = x.with_prec(wp);
    let mut halvings = 0;
    while y.to_f64() > 0.125 {
        // atan y = 2 atan(y / (1 + sqrt(1 + y^2)))
        let d = &one + &(&one + &y.square()).sqrt();
        y = &y / &d;
        halvings += 1;
    }
    let y2 = y.square();
    let mut pow = y.clone();
    let mut sum = y;
    let eps = -i64::from(wp) - 2;
    let mut n = 1i64;
    let mut sign = 1i64;
    loop {
        pow = &pow * &y2;
        n += 2;
        sign = -sign;
        let term = pow.div_i64(sign * n);
        if term.is_zero() || term.top_exponent() < eps {
            break;
        }
        sum = &sum + &term;
    }
    sum.ldexp(halvings).with_prec(prec)
}

impl fmt::Display for PrecComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(20);
        let im = &self.im;
        if im.is_negative() {
            write!(f, "{:.d$} - {:.d$}i", self.re, im.abs(), d = d)
        } else {
            write!(f, "{:.d$} + {:.d$}i", self.re, im, d = d)
        }
    }
}

impl Neg for PrecComplex {
    type Output = PrecComplex;
    fn neg(self) -> PrecComplex {
        PrecComplex::new(-self.re, -self.im)
    }
}

impl Neg for &PrecComplex {
    type Output = PrecComplex;
    fn neg(self) -> PrecComplex {
        PrecComplex::new(-&self.re, -&self.im)
    }
}

impl Add<&PrecComplex> for &PrecComplex {
    type Output = PrecComplex;
    fn add(self, rhs: &PrecComplex) -> PrecComplex {
        PrecComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&PrecComplex> for &PrecComplex {
    type Output = PrecComplex;
    fn sub(self, rhs: &PrecComplex) -> PrecComplex {
        PrecComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&PrecComplex> for &PrecComplex {
    type Output = PrecComplex;
    fn mul(self, rhs: &PrecComplex) -> PrecComplex {
        let ac = &self.re * &rhs.re;
        let bd = &self.im * &rhs.im;
        let ad = &self.re * &rhs.im;
        let bc = &self.im * &rhs.re;
        PrecComplex::new(&ac - &bd, &ad + &bc)
    }
}

impl Div<&PrecComplex> for &PrecComplex {
    type Output = PrecComplex;
    fn div(self, rhs: &PrecComplex) -> PrecComplex {
        let n = rhs.norm_sqr();
        let num = self * &rhs.conj();
        PrecComplex::new(&num.re / &n, &num.im / &n)
    }
}

macro_rules! owned_variants {
    ($tr:ident, $method:ident) => {
        impl $tr<PrecComplex> for PrecComplex {
            type Output = PrecComplex;
            fn $method(self, rhs: PrecComplex) -> PrecComplex {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&PrecComplex> for PrecComplex {
            type Output = PrecComplex;
            fn $method(self, rhs: &PrecComplex) -> PrecComplex {
                (&self).$method(rhs)
            }
        }
        impl $tr<PrecComplex> for &PrecComplex {
            type Output = PrecComplex;
            fn $method(self, rhs: PrecComplex) -> PrecComplex {
                self.$method(&rhs)
            }
        }
    };
}

owned_variants!(Add, add);
owned_variants!(Sub, sub);
owned_variants!(Mul, mul);
owned_variants!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_and_log_roundtrip() {
        let z = PrecComplex::from_f64(0.3, -2.9, 256);
        let w = z.exp().ln();
        assert!(w.dist_log2(&z) < -240.0);
        let (re, im) = PrecComplex::from_f64(-1.0, 0.5, 128).arg().to_f64().sin_cos();
        assert!((re - 0.5 / 1.25f64.sqrt()).abs() < 1e-14);
        assert!((im + 1.0 / 1.25f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn sqrt_branch_and_division() {
        let z = PrecComplex::from_f64(-4.0, -1e-30, 200);
        let r = z.sqrt();
        assert!(r.im.to_f64() < -1.99 && r.im.to_f64() > -2.01);
        let a = PrecComplex::from_f64(1.5, 2.0, 200);
        let b = PrecComplex::from_f64(-0.25, 3.0, 200);
        let back = &(&a / &b) * &b;
        assert!(back.dist_log2(&a) < -190.0);
        assert!(a.mul_i_pow(3).dist_log2(&(&a * &PrecComplex::i(200).powi(3))) < -190.0);
    }

    #[test]
    fn exp_2pi_i_is_periodic() {
        let z = PrecComplex::from_f64(0.125, 0.2, 200);
        let shifted = PrecComplex::from_f64(5.125, 0.2, 200);
        assert!(z.exp_2pi_i().dist_log2(&shifted.exp_2pi_i()) < -180.0);
    }
}
